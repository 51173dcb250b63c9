//! Catalog of nonexpansive self-maps with analytically known fixed points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{mobius_rotate_about, GeodesicSpace, Point, SpaceKind};
use crate::scalar::Real;

/// Convex subset on which a map acts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Domain<T> {
    #[default]
    WholeSpace,
    ClosedBall { center: Point<T>, radius: T },
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapKind<T> {
    Identity,
    /// Rotation by `angle` radians in the plane of the first two coordinates.
    EuclideanRotation { center: Point<T>, angle: T },
    /// Average of the identity and the reflection in the hyperplane
    /// `x_0 = center_0`; this is the orthogonal projection onto that hyperplane.
    EuclideanReflectionAverage { center: Point<T> },
    /// Hyperbolic rotation by `angle` radians about `center`.
    PoincareRotation { center: Point<T>, angle: T },
    /// Nearest-point projection onto the closed ball `B(center, radius)`.
    MetricProjection { center: Point<T>, radius: T },
}

/// A nonexpansive self-map of a convex subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawMapping<T>",
    into = "RawMapping<T>",
    bound(serialize = "T: Serialize + Clone", deserialize = "T: Deserialize<'de>")
)]
pub struct MappingSpec<T> {
    pub kind: MapKind<T>,
    pub domain: Domain<T>,
}

/// Flat record form of a [`MappingSpec`], as written in configuration files.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMapping<T> {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<Point<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    angle: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain: Option<Domain<T>>,
}

impl<T> TryFrom<RawMapping<T>> for MappingSpec<T> {
    type Error = Error;

    fn try_from(raw: RawMapping<T>) -> Result<Self> {
        let RawMapping { kind, center, angle, radius, domain } = raw;
        let bad = |msg: String| Error::IncompatibleMapping(msg);
        let need = |what: &str| bad(format!("map kind `{kind}` requires `{what}`"));
        let allowed: &[&str] = match kind.as_str() {
            "Identity" => &[],
            "EuclideanRotation" | "PoincareRotation" => &["center", "angle"],
            "EuclideanReflectionAverage" => &["center"],
            "MetricProjection" => &["center", "radius"],
            other => return Err(bad(format!("unknown map kind `{other}`"))),
        };
        for (name, present) in
            [("center", center.is_some()), ("angle", angle.is_some()), ("radius", radius.is_some())]
        {
            if present && !allowed.contains(&name) {
                return Err(bad(format!("map kind `{kind}` does not take `{name}`")));
            }
        }
        let map_kind = match kind.as_str() {
            "Identity" => MapKind::Identity,
            "EuclideanRotation" => MapKind::EuclideanRotation {
                center: center.ok_or_else(|| need("center"))?,
                angle: angle.ok_or_else(|| need("angle"))?,
            },
            "PoincareRotation" => MapKind::PoincareRotation {
                center: center.ok_or_else(|| need("center"))?,
                angle: angle.ok_or_else(|| need("angle"))?,
            },
            "EuclideanReflectionAverage" => MapKind::EuclideanReflectionAverage {
                center: center.ok_or_else(|| need("center"))?,
            },
            _ => MapKind::MetricProjection {
                center: center.ok_or_else(|| need("center"))?,
                radius: radius.ok_or_else(|| need("radius"))?,
            },
        };
        Ok(MappingSpec { kind: map_kind, domain: domain.unwrap_or(Domain::WholeSpace) })
    }
}

impl<T> From<MappingSpec<T>> for RawMapping<T> {
    fn from(m: MappingSpec<T>) -> Self {
        let kind = m.kind_name().to_string();
        let domain = match m.domain {
            Domain::WholeSpace => None,
            d => Some(d),
        };
        let mut raw = RawMapping { kind, center: None, angle: None, radius: None, domain };
        match m.kind {
            MapKind::Identity => {}
            MapKind::EuclideanRotation { center, angle } | MapKind::PoincareRotation { center, angle } => {
                raw.center = Some(center);
                raw.angle = Some(angle);
            }
            MapKind::EuclideanReflectionAverage { center } => raw.center = Some(center),
            MapKind::MetricProjection { center, radius } => {
                raw.center = Some(center);
                raw.radius = Some(radius);
            }
        }
        raw
    }
}

impl<T> MappingSpec<T> {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            MapKind::Identity => "Identity",
            MapKind::EuclideanRotation { .. } => "EuclideanRotation",
            MapKind::EuclideanReflectionAverage { .. } => "EuclideanReflectionAverage",
            MapKind::PoincareRotation { .. } => "PoincareRotation",
            MapKind::MetricProjection { .. } => "MetricProjection",
        }
    }
}

impl<T: Real> MappingSpec<T> {
    pub fn new(kind: MapKind<T>) -> Self {
        MappingSpec { kind, domain: Domain::WholeSpace }
    }

    pub fn identity() -> Self {
        Self::new(MapKind::Identity)
    }

    pub fn with_domain(mut self, domain: Domain<T>) -> Self {
        self.domain = domain;
        self
    }

    /// Checks that the map fits the space and maps its domain into itself.
    pub fn validate<S: GeodesicSpace<T>>(&self, space: &S) -> Result<()> {
        let kind = space.kind();
        let tol = T::tolerance();
        let incompatible = |msg: &str| Err(Error::IncompatibleMapping(msg.to_string()));
        match &self.kind {
            MapKind::Identity => {}
            MapKind::EuclideanRotation { center, .. } => {
                if !matches!(kind, SpaceKind::Euclidean { dim } if dim >= 2) {
                    return incompatible("EuclideanRotation needs Euclidean space of dimension >= 2");
                }
                space.validate(center)?;
            }
            MapKind::EuclideanReflectionAverage { center } => {
                if !matches!(kind, SpaceKind::Euclidean { .. }) {
                    return incompatible("EuclideanReflectionAverage needs Euclidean space");
                }
                space.validate(center)?;
            }
            MapKind::PoincareRotation { center, .. } => {
                if kind != SpaceKind::PoincareDisk {
                    return incompatible("PoincareRotation needs the Poincaré disk");
                }
                space.validate(center)?;
            }
            MapKind::MetricProjection { center, radius } => {
                space.validate(center)?;
                if !(*radius >= T::zero()) || !radius.is_finite() {
                    return incompatible("projection radius must be finite and non-negative");
                }
            }
        }
        if let Domain::ClosedBall { center, radius } = &self.domain {
            space.validate(center)?;
            if !(*radius > T::zero()) {
                return incompatible("domain radius must be positive");
            }
            let inside = match &self.kind {
                MapKind::Identity => true,
                MapKind::EuclideanRotation { center: c, .. }
                | MapKind::PoincareRotation { center: c, .. } => space.dist(c, center)? <= tol,
                MapKind::EuclideanReflectionAverage { center: c } => {
                    (c.coords()[0] - center.coords()[0]).abs() <= tol
                }
                MapKind::MetricProjection { center: c, radius: r } => {
                    space.dist(c, center)? + *r <= *radius + tol
                }
            };
            if !inside {
                return incompatible("map does not send its ball domain into itself");
            }
        }
        Ok(())
    }

    fn check_domain<S: GeodesicSpace<T>>(&self, space: &S, x: &Point<T>) -> Result<()> {
        if let Domain::ClosedBall { center, radius } = &self.domain {
            let d = space.dist(center, x)?;
            if d > *radius + T::tolerance() * radius.max(T::one()) {
                return Err(Error::OutsideDomain(format!(
                    "{:?} is at distance {:?} > {:?} from the domain center",
                    x.to_f64(),
                    d,
                    radius
                )));
            }
        }
        Ok(())
    }

    /// `T x`.
    pub fn apply<S: GeodesicSpace<T>>(&self, space: &S, x: &Point<T>) -> Result<Point<T>> {
        space.validate(x)?;
        self.check_domain(space, x)?;
        Ok(match &self.kind {
            MapKind::Identity => x.clone(),
            MapKind::EuclideanRotation { center, angle } => {
                let (s, c) = angle.sin_cos();
                let mut out = x.coords().to_vec();
                let (cx, cy) = (center.coords()[0], center.coords()[1]);
                let (dx, dy) = (out[0] - cx, out[1] - cy);
                out[0] = cx + c * dx - s * dy;
                out[1] = cy + s * dx + c * dy;
                Point::new(out)
            }
            MapKind::EuclideanReflectionAverage { center } => {
                let mut out = x.coords().to_vec();
                out[0] = center.coords()[0];
                Point::new(out)
            }
            MapKind::PoincareRotation { center, angle } => mobius_rotate_about(center, x, *angle),
            MapKind::MetricProjection { center, radius } => project_ball(space, center, *radius, x)?,
        })
    }

    /// Nearest fixed point to `x`, when the fixed-point set is known analytically.
    pub fn nearest_fixed_point<S: GeodesicSpace<T>>(
        &self,
        space: &S,
        x: &Point<T>,
    ) -> Result<Point<T>> {
        space.validate(x)?;
        Ok(match &self.kind {
            MapKind::Identity => x.clone(),
            MapKind::EuclideanRotation { center, angle }
            | MapKind::PoincareRotation { center, angle } => {
                let turns = *angle / T::TAU();
                if (turns - turns.round()).abs() <= T::epsilon() {
                    x.clone()
                } else {
                    center.clone()
                }
            }
            MapKind::EuclideanReflectionAverage { center } => {
                let mut out = x.coords().to_vec();
                out[0] = center.coords()[0];
                Point::new(out)
            }
            MapKind::MetricProjection { center, radius } => project_ball(space, center, *radius, x)?,
        })
    }
}

fn project_ball<T: Real, S: GeodesicSpace<T>>(
    space: &S,
    center: &Point<T>,
    radius: T,
    x: &Point<T>,
) -> Result<Point<T>> {
    let d = space.dist(center, x)?;
    if d <= radius {
        Ok(x.clone())
    } else {
        space.combine(center, x, radius / d)
    }
}

/// How approximate fixed points near the start are certified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Witness<T> {
    /// An exact fixed point `z`; `y_delta = z` for every `delta`.
    FixedPoint { point: Point<T> },
    /// Points on the geodesic from a fixed point `z` towards the start:
    /// `y_delta = W(z, x, t)` with `t = min(1, delta / (4 (d(z, x) + 1)))`,
    /// so `d(y, Ty) <= 2 t d(z, x) < delta`.
    Approaching { point: Point<T> },
    /// The map's analytically known nearest fixed point.
    Catalog,
}

/// Certificate that `Fix_delta(T, x, b)` is nonempty for every `delta > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxFixedPointSpec<T> {
    pub start: Point<T>,
    pub b: T,
    pub witness: Witness<T>,
}

/// The precisions at which witnesses are sampled: `10^-k` for `k <= 9`.
pub fn witness_deltas() -> impl Iterator<Item = f64> {
    (0..=9).map(|k| 10f64.powi(-k))
}

impl<T: Real> ApproxFixedPointSpec<T> {
    /// `y_delta` with `d(x, y) <= b` and `d(y, Ty) < delta`.
    pub fn witness_at<S: GeodesicSpace<T>>(
        &self,
        space: &S,
        map: &MappingSpec<T>,
        delta: T,
    ) -> Result<Point<T>> {
        match &self.witness {
            Witness::FixedPoint { point } => Ok(point.clone()),
            Witness::Catalog => map.nearest_fixed_point(space, &self.start),
            Witness::Approaching { point } => {
                let d = space.dist(point, &self.start)?;
                let four = T::from_f64(4.0).unwrap();
                let t = (delta / (four * (d + T::one()))).min(T::one());
                space.combine(point, &self.start, t)
            }
        }
    }

    /// An exact fixed point, when the witness provides one.
    pub fn exact_fixed_point<S: GeodesicSpace<T>>(
        &self,
        space: &S,
        map: &MappingSpec<T>,
    ) -> Result<Option<Point<T>>> {
        match &self.witness {
            Witness::FixedPoint { point } => Ok(Some(point.clone())),
            Witness::Catalog => map.nearest_fixed_point(space, &self.start).map(Some),
            Witness::Approaching { .. } => Ok(None),
        }
    }

    /// Checks the witness on the sampled precisions.
    pub fn check<S: GeodesicSpace<T>>(&self, space: &S, map: &MappingSpec<T>) -> Result<()> {
        if !(self.b > T::zero()) {
            return Err(Error::InvalidWitness("b must be positive".into()));
        }
        let tol = T::tolerance();
        for delta in witness_deltas() {
            let delta = T::from_f64(delta).unwrap();
            let y = self.witness_at(space, map, delta)?;
            let dxy = space.dist(&self.start, &y)?;
            if dxy > self.b + tol * self.b.max(T::one()) {
                return Err(Error::InvalidWitness(format!(
                    "d(x, y) = {dxy:?} exceeds b = {:?}",
                    self.b
                )));
            }
            let ty = map.apply(space, &y)?;
            let res = space.dist(&y, &ty)?;
            if !(res < delta) {
                return Err(Error::InvalidWitness(format!(
                    "d(y, Ty) = {res:?} is not below delta = {delta:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Validates the witness and returns the residual cap `2b`, asserting
/// `d(x, Tx) <= 2b`.
pub fn derived_bound<T: Real, S: GeodesicSpace<T>>(
    afp: &ApproxFixedPointSpec<T>,
    map: &MappingSpec<T>,
    space: &S,
) -> Result<T> {
    afp.check(space, map)?;
    let two = T::one() + T::one();
    let cap = two * afp.b;
    let tx = map.apply(space, &afp.start)?;
    let r = space.dist(&afp.start, &tx)?;
    if r > cap + T::tolerance() * cap.max(T::one()) {
        return Err(Error::InvalidWitness(format!("d(x, Tx) = {r:?} exceeds 2b = {cap:?}")));
    }
    Ok(cap)
}
