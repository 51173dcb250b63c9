//! The Ishikawa iteration
//!
//! ```text
//! y_n     = (1 - s_n) x_n ⊕ s_n T x_n
//! x_{n+1} = (1 - lambda_n) x_n ⊕ lambda_n T y_n
//! ```
//!
//! with Krasnoselski–Mann as the case `s_n = 0`.

use std::io::Write;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{GeodesicSpace, Point};
use crate::mappings::MappingSpec;
use crate::moduli::{Schedule, SequenceDescriptor};
use crate::scalar::{Real, Scalar};

/// Default ceiling on the number of steps a single run may take.
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

/// One step from `x`: returns `(x_next, y)`.
pub fn ishikawa_step<T: Real, S: GeodesicSpace<T>>(
    space: &S,
    map: &MappingSpec<T>,
    x: &Point<T>,
    lambda: T,
    s: T,
) -> Result<(Point<T>, Point<T>)> {
    let tx = map.apply(space, x)?;
    let (x_next, y, _) = step_from(space, map, x, &tx, lambda, s)?;
    Ok((x_next, y))
}

/// Step given `T x`; also returns `T y`.
fn step_from<T: Real, S: GeodesicSpace<T>>(
    space: &S,
    map: &MappingSpec<T>,
    x: &Point<T>,
    tx: &Point<T>,
    lambda: T,
    s: T,
) -> Result<(Point<T>, Point<T>, Point<T>)> {
    let y = space.combine(x, tx, s)?;
    let ty = map.apply(space, &y)?;
    let x_next = space.combine(x, &ty, lambda)?;
    Ok((x_next, y, ty))
}

/// Cheap per-step evaluation of a parameter sequence.
#[derive(Clone, Debug)]
enum Terms<T> {
    Constant(T),
    Geometric { c: T, q: T },
    Tabulated(Vec<T>),
}

impl<T: Real> Terms<T> {
    fn new(seq: &SequenceDescriptor) -> Self {
        match seq {
            SequenceDescriptor::Constant { value } => Terms::Constant(T::from_rational(&value.0)),
            SequenceDescriptor::Geometric { c, q } => Terms::Geometric {
                c: T::from_rational(&c.0),
                q: T::from_rational(&q.0),
            },
            SequenceDescriptor::Tabulated { values } => {
                Terms::Tabulated(values.iter().map(|v| T::from_rational(&v.0)).collect())
            }
        }
    }

    fn at(&self, n: u64) -> T {
        match self {
            Terms::Constant(v) => *v,
            Terms::Geometric { c, q } => *c * q.powi(n.min(i32::MAX as u64) as i32),
            Terms::Tabulated(v) => v.get(n as usize).or(v.last()).copied().unwrap_or_else(T::zero),
        }
    }
}

/// What happened during step `n` (from `x_n` to `x_{n+1}`).
#[derive(Clone, Debug)]
pub struct StepRecord<T> {
    pub n: u64,
    pub lambda: T,
    pub s: T,
    /// `d(x_n, T x_n)`.
    pub residual: T,
    /// `d(x_n, T y_n)`.
    pub inner_residual: T,
    pub y: Point<T>,
    pub ty: Point<T>,
}

/// A running orbit. After [`Orbit::advance`] returns the record of step `n`,
/// the cursor sits at `x_{n+1}`.
pub struct Orbit<'a, T, S> {
    space: &'a S,
    map: &'a MappingSpec<T>,
    lambda: Terms<T>,
    s: Terms<T>,
    n: u64,
    x: Point<T>,
    tx: Point<T>,
    residual: T,
}

impl<'a, T: Real, S: GeodesicSpace<T>> Orbit<'a, T, S> {
    pub fn new(space: &'a S, map: &'a MappingSpec<T>, x0: Point<T>, schedule: &Schedule) -> Result<Self> {
        let tx = map.apply(space, &x0)?;
        let residual = space.dist(&x0, &tx)?;
        Ok(Orbit {
            space,
            map,
            lambda: Terms::new(&schedule.lambda),
            s: Terms::new(&schedule.s),
            n: 0,
            x: x0,
            tx,
            residual,
        })
    }

    pub fn index(&self) -> u64 {
        self.n
    }

    pub fn x(&self) -> &Point<T> {
        &self.x
    }

    pub fn tx(&self) -> &Point<T> {
        &self.tx
    }

    /// `d(x_n, T x_n)` at the current index.
    pub fn residual(&self) -> T {
        self.residual
    }

    pub fn advance(&mut self) -> Result<StepRecord<T>> {
        let n = self.n;
        let (lambda, s) = (self.lambda.at(n), self.s.at(n));
        let (x_next, y, ty) = step_from(self.space, self.map, &self.x, &self.tx, lambda, s)?;
        let inner_residual = self.space.dist(&self.x, &ty)?;
        let record = StepRecord { n, lambda, s, residual: self.residual, inner_residual, y, ty };
        self.tx = self.map.apply(self.space, &x_next)?;
        self.residual = self.space.dist(&x_next, &self.tx)?;
        self.x = x_next;
        self.n += 1;
        Ok(record)
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions<T> {
    /// Store every `point_stride`-th point (and always the last one); 0 stores
    /// only the endpoints.
    pub point_stride: u64,
    pub max_steps: u64,
    /// Point `z` whose distances to the orbit are recorded.
    pub reference: Option<Point<T>>,
    /// Residual cap `2b` from an attached approximate-fixed-point certificate.
    pub residual_cap: Option<T>,
}

impl<T> Default for RunOptions<T> {
    fn default() -> Self {
        RunOptions { point_stride: 1, max_steps: DEFAULT_MAX_STEPS, reference: None, residual_cap: None }
    }
}

/// Distances from the orbit to a reference point `z`.
#[derive(Clone, Debug, Serialize)]
pub struct ReferenceTrace<T> {
    pub point: Point<T>,
    /// `d(z, T z)`.
    pub fixed_residual: T,
    /// `d(x_n, z)`, one per point.
    pub dist_x: Vec<T>,
    /// `d(y_n, z)`, one per step.
    pub dist_y: Vec<T>,
    /// `d(T y_n, z)`, one per step.
    pub dist_ty: Vec<T>,
}

/// A recorded orbit `x_0, ..., x_N`.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "T: Serialize + Clone"))]
pub struct Trajectory<T> {
    /// Sampled `(n, x_n)`.
    pub points: Vec<(u64, Point<T>)>,
    /// Sampled `(n, y_n)`.
    pub inner: Vec<(u64, Point<T>)>,
    /// `d(x_n, T x_n)` for `n = 0..=N`.
    pub residuals: Vec<T>,
    /// `d(x_n, T y_n)` for `n = 0..N`.
    pub inner_residuals: Vec<T>,
    pub lambdas: Vec<T>,
    pub ss: Vec<T>,
    pub schedule: Schedule,
    pub map: MappingSpec<T>,
    pub reference: Option<ReferenceTrace<T>>,
    pub residual_cap: Option<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn steps(&self) -> usize {
        self.inner_residuals.len()
    }

    /// First index whose residual is below `eps`.
    pub fn first_below(&self, eps: T) -> Option<u64> {
        self.residuals.iter().position(|r| *r < eps).map(|i| i as u64)
    }

    /// Writes `n,residual,inner_residual,dist_to_ref`; the last column only
    /// when a reference point was recorded. The final row has no step and
    /// leaves `inner_residual` empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["n", "residual", "inner_residual"];
        if self.reference.is_some() {
            header.push("dist_to_ref");
        }
        w.write_record(&header).map_err(io)?;
        for (n, r) in self.residuals.iter().enumerate() {
            let mut row = vec![n.to_string(), fmt(*r)];
            row.push(self.inner_residuals.get(n).map(|v| fmt(*v)).unwrap_or_default());
            if let Some(rt) = &self.reference {
                row.push(fmt(rt.dist_x[n]));
            }
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }
}

fn fmt<T: Real>(v: T) -> String {
    format!("{:e}", v.to_f64_lossy())
}

/// Runs `steps` iterations from `x0`.
pub fn run_trajectory<T: Real, S: GeodesicSpace<T>>(
    space: &S,
    map: &MappingSpec<T>,
    x0: &Point<T>,
    schedule: &Schedule,
    steps: u64,
    options: &RunOptions<T>,
) -> Result<Trajectory<T>> {
    if steps > options.max_steps {
        return Err(Error::StepBudgetExceeded { requested: steps, cap: options.max_steps });
    }
    let keep = |n: u64| n == 0 || n == steps || (options.point_stride > 0 && n.is_multiple_of(options.point_stride));
    let len = steps as usize;
    let mut orbit = Orbit::new(space, map, x0.clone(), schedule)?;
    let mut reference = match &options.reference {
        Some(z) => {
            let tz = map.apply(space, z)?;
            Some(ReferenceTrace {
                point: z.clone(),
                fixed_residual: space.dist(z, &tz)?,
                dist_x: Vec::with_capacity(len + 1),
                dist_y: Vec::with_capacity(len),
                dist_ty: Vec::with_capacity(len),
            })
        }
        None => None,
    };
    let mut traj = Trajectory {
        points: Vec::new(),
        inner: Vec::new(),
        residuals: Vec::with_capacity(len + 1),
        inner_residuals: Vec::with_capacity(len),
        lambdas: Vec::with_capacity(len),
        ss: Vec::with_capacity(len),
        schedule: schedule.clone(),
        map: map.clone(),
        reference: None,
        residual_cap: options.residual_cap,
    };
    for n in 0..steps {
        if keep(n) {
            traj.points.push((n, orbit.x().clone()));
        }
        if let Some(rt) = reference.as_mut() {
            rt.dist_x.push(space.dist(orbit.x(), &rt.point)?);
        }
        let rec = orbit.advance()?;
        traj.residuals.push(rec.residual);
        traj.inner_residuals.push(rec.inner_residual);
        traj.lambdas.push(rec.lambda);
        traj.ss.push(rec.s);
        if let Some(rt) = reference.as_mut() {
            rt.dist_y.push(space.dist(&rec.y, &rt.point)?);
            rt.dist_ty.push(space.dist(&rec.ty, &rt.point)?);
        }
        if keep(n) {
            traj.inner.push((n, rec.y));
        }
    }
    traj.points.push((steps, orbit.x().clone()));
    traj.residuals.push(orbit.residual());
    if let Some(rt) = reference.as_mut() {
        rt.dist_x.push(space.dist(orbit.x(), &rt.point)?);
    }
    traj.reference = reference;
    Ok(traj)
}

/// `alpha_n = sum_{i=0}^{n} s_i (1 - lambda_i)`, exactly.
pub fn partial_sums_alpha_exact(schedule: &Schedule, n: u64) -> BigRational {
    let one = BigRational::from_integer(1.into());
    let mut acc = BigRational::zero();
    for i in 0..=n {
        acc += schedule.s.term_exact(i) * (&one - schedule.lambda.term_exact(i));
    }
    acc
}

/// `alpha_n` in any scalar type, rounded once from the exact sum.
pub fn partial_sums_alpha<S: Scalar>(schedule: &Schedule, n: u64) -> S {
    S::from_rational(&partial_sums_alpha_exact(schedule, n))
}
