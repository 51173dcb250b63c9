//! Concrete uniformly convex W-hyperbolic spaces.
//!
//! Two models ship: Euclidean space `R^d` with affine combinations, and the
//! Poincaré disk model of the hyperbolic plane, a CAT(0) space whose geodesic
//! combinations are computed through Möbius translations.

mod euclidean;
mod poincare;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moduli::{ModulusDescriptor, Role};
use crate::scalar::Real;

pub use poincare::{mobius_rotate_about, mobius_translate};

/// A point of a space model, stored as its coordinates.
///
/// Euclidean points use Cartesian coordinates; Poincaré points use `(u, v)`
/// with `u^2 + v^2 < 1`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Point { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Point { coords: vec![T::zero(); dim] }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub(crate) fn norm_sqr(&self) -> T {
        self.coords.iter().fold(T::zero(), |acc, &c| acc + c * c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64_lossy()).collect()
    }
}

impl<T: fmt::Debug> fmt::Debug for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Point").field(&self.coords).finish()
    }
}

impl<T> From<Vec<T>> for Point<T> {
    fn from(coords: Vec<T>) -> Self {
        Point { coords }
    }
}

/// Which model a [`SpaceModel`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Euclidean { dim: usize },
    PoincareDisk,
}

impl SpaceKind {
    pub fn dim(&self) -> usize {
        match self {
            SpaceKind::Euclidean { dim } => *dim,
            SpaceKind::PoincareDisk => 2,
        }
    }
}

/// A uniformly convex W-hyperbolic space: model plus modulus of uniform convexity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpaceModel", into = "RawSpaceModel")]
pub struct SpaceModel {
    kind: SpaceKind,
    modulus: ModulusDescriptor,
}

impl SpaceModel {
    pub fn new(kind: SpaceKind, modulus: ModulusDescriptor) -> Result<Self> {
        if let SpaceKind::Euclidean { dim: 0 } = kind {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if !matches!(modulus.role(), Role::Eta | Role::Any) {
            return Err(Error::WrongRole { kind: modulus.kind_name(), role: "a convexity modulus" });
        }
        Ok(SpaceModel { kind, modulus })
    }

    /// `R^dim` with the default modulus `eps^2 / 8`.
    pub fn euclidean(dim: usize) -> Self {
        SpaceModel::new(SpaceKind::Euclidean { dim }, ModulusDescriptor::eta_quadratic())
            .expect("dimension must be positive")
    }

    /// The Poincaré disk with the CAT(0) modulus `eps^2 / 8`.
    pub fn poincare_disk() -> Self {
        SpaceModel { kind: SpaceKind::PoincareDisk, modulus: ModulusDescriptor::eta_quadratic() }
    }

    pub fn with_modulus(mut self, modulus: ModulusDescriptor) -> Result<Self> {
        self = SpaceModel::new(self.kind, modulus)?;
        Ok(self)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn modulus(&self) -> &ModulusDescriptor {
        &self.modulus
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpaceModel {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(default = "ModulusDescriptor::eta_quadratic")]
    modulus: ModulusDescriptor,
}

impl TryFrom<RawSpaceModel> for SpaceModel {
    type Error = String;

    fn try_from(raw: RawSpaceModel) -> std::result::Result<Self, String> {
        let kind = match (raw.kind.as_str(), raw.dim) {
            ("Euclidean", Some(dim)) => SpaceKind::Euclidean { dim },
            ("Euclidean", None) => return Err("Euclidean space requires `dim`".into()),
            ("PoincareDisk", None | Some(2)) => SpaceKind::PoincareDisk,
            ("PoincareDisk", Some(d)) => {
                return Err(format!("the Poincaré disk is two-dimensional, got dim = {d}"))
            }
            (other, _) => {
                return Err(format!(
                    "unknown space kind `{other}`, expected `Euclidean` or `PoincareDisk`"
                ))
            }
        };
        SpaceModel::new(kind, raw.modulus).map_err(|e| e.to_string())
    }
}

impl From<SpaceModel> for RawSpaceModel {
    fn from(s: SpaceModel) -> Self {
        let (kind, dim) = match s.kind {
            SpaceKind::Euclidean { dim } => ("Euclidean", Some(dim)),
            SpaceKind::PoincareDisk => ("PoincareDisk", None),
        };
        RawSpaceModel { kind: kind.to_string(), dim, modulus: s.modulus }
    }
}

/// Metric space with a convexity map `W(x, y, lambda)` and a modulus of
/// uniform convexity.
pub trait GeodesicSpace<T: Real> {
    fn kind(&self) -> SpaceKind;

    fn dim(&self) -> usize {
        self.kind().dim()
    }

    /// Checks that `p` is a point of this space.
    fn validate(&self, p: &Point<T>) -> Result<()>;

    fn dist(&self, x: &Point<T>, y: &Point<T>) -> Result<T>;

    /// The point on the geodesic from `x` to `y` at distance `lambda d(x, y)` from `x`.
    fn combine(&self, x: &Point<T>, y: &Point<T>, lambda: T) -> Result<Point<T>>;

    /// `eta(r, eps)`.
    fn uc_modulus(&self, r: T, eps: T) -> Result<T>;

    fn origin(&self) -> Point<T> {
        Point::origin(self.dim())
    }

    /// A random point at intrinsic distance at most `radius` from the origin.
    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R, radius: T) -> Point<T>;
}

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if lambda >= T::zero() && lambda <= T::one() {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda.to_f64_lossy()))
    }
}

impl<T: Real> GeodesicSpace<T> for SpaceModel {
    fn kind(&self) -> SpaceKind {
        self.kind
    }

    fn validate(&self, p: &Point<T>) -> Result<()> {
        let expected = self.kind.dim();
        if p.dim() != expected {
            return Err(Error::DimensionMismatch { expected, got: p.dim() });
        }
        if p.coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite(p.to_f64()));
        }
        if self.kind == SpaceKind::PoincareDisk && !poincare::inside(p) {
            return Err(Error::OutsideDisk(p.to_f64()));
        }
        Ok(())
    }

    fn dist(&self, x: &Point<T>, y: &Point<T>) -> Result<T> {
        GeodesicSpace::<T>::validate(self, x)?;
        GeodesicSpace::<T>::validate(self, y)?;
        Ok(match self.kind {
            SpaceKind::Euclidean { .. } => euclidean::dist(x, y),
            SpaceKind::PoincareDisk => poincare::dist(x, y),
        })
    }

    fn combine(&self, x: &Point<T>, y: &Point<T>, lambda: T) -> Result<Point<T>> {
        check_lambda(lambda)?;
        GeodesicSpace::<T>::validate(self, x)?;
        GeodesicSpace::<T>::validate(self, y)?;
        if lambda == T::zero() {
            return Ok(x.clone());
        }
        if lambda == T::one() {
            return Ok(y.clone());
        }
        Ok(match self.kind {
            SpaceKind::Euclidean { .. } => euclidean::combine(x, y, lambda),
            SpaceKind::PoincareDisk => poincare::combine(x, y, lambda),
        })
    }

    fn uc_modulus(&self, r: T, eps: T) -> Result<T> {
        self.modulus.eta(&r, &eps)
    }

    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R, radius: T) -> Point<T> {
        match self.kind {
            SpaceKind::Euclidean { dim } => euclidean::sample_ball(rng, dim, radius),
            SpaceKind::PoincareDisk => poincare::sample_ball(rng, radius),
        }
    }
}
