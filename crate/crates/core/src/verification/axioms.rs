use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CheckReport;
use crate::geometry::{GeodesicSpace, Point, SpaceKind};
use crate::moduli::ModulusDescriptor;
use crate::scalar::Scalar;

/// Intrinsic radius of the ball points are drawn from.
pub fn sampling_radius(kind: SpaceKind) -> f64 {
    match kind {
        SpaceKind::Euclidean { .. } => 10.0,
        SpaceKind::PoincareDisk => 5.0,
    }
}

fn draw<S: GeodesicSpace<f64>>(space: &S, rng: &mut ChaCha8Rng) -> Point<f64> {
    space.sample_point(rng, sampling_radius(space.kind()))
}

fn show(points: &[&Point<f64>]) -> String {
    points.iter().map(|p| format!("{:?}", p.coords())).collect::<Vec<_>>().join(" ")
}

/// Metric axioms and (W1)–(W4) on random points.
pub fn check_space_axioms<S: GeodesicSpace<f64>>(space: &S, samples: u64, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("space axioms");
    for _ in 0..samples {
        let (x, y, z, w) = (draw(space, &mut rng), draw(space, &mut rng), draw(space, &mut rng), draw(space, &mut rng));
        let (l, m): (f64, f64) = (rng.random(), rng.random());
        report.samples += 1;
        if let Err(e) = one_sample(space, &mut report, [&x, &y, &z, &w], l, m) {
            report.fail(super::Failure {
                inputs: format!("{}: {e}", show(&[&x, &y, &z, &w])),
                lhs: f64::NAN,
                rhs: f64::NAN,
                slack_violated: f64::NAN,
            });
        }
    }
    report
}

fn one_sample<S: GeodesicSpace<f64>>(
    space: &S,
    r: &mut CheckReport,
    [x, y, z, w]: [&Point<f64>; 4],
    l: f64,
    m: f64,
) -> crate::Result<()> {
    let d = |a: &Point<f64>, b: &Point<f64>| space.dist(a, b);
    let at = || show(&[x, y, z, w]);
    let dxy = d(x, y)?;
    r.le(d(x, x)?, 0.0, || format!("d(x,x) = 0 at {}", at()));
    r.le(0.0, dxy, || format!("d(x,y) >= 0 at {}", at()));
    r.le((dxy - d(y, x)?).abs(), 0.0, || format!("symmetry at {}", at()));
    r.le(d(x, z)?, dxy + d(y, z)?, || format!("triangle at {}", at()));

    let wxy = space.combine(x, y, l)?;
    // (W1)
    r.le(d(z, &wxy)?, (1.0 - l) * d(z, x)? + l * d(z, y)?, || format!("W1 lambda={l} at {}", at()));
    // (W2)
    let wxy_m = space.combine(x, y, m)?;
    r.le((d(&wxy, &wxy_m)? - (l - m).abs() * dxy).abs(), 0.0, || {
        format!("W2 lambda={l} mu={m} at {}", at())
    });
    // (W3)
    let wyx = space.combine(y, x, 1.0 - l)?;
    r.le(d(&wxy, &wyx)?, 0.0, || format!("W3 lambda={l} at {}", at()));
    // (W4)
    let wxz = space.combine(x, z, l)?;
    let wyw = space.combine(y, w, l)?;
    r.le(d(&wxz, &wyw)?, (1.0 - l) * dxy + l * d(z, w)?, || format!("W4 lambda={l} at {}", at()));
    Ok(())
}

/// Points `a, x, y` and a radius `r` with `d(x, a) <= r`, `d(y, a) <= r`.
///
/// `(a, x, y, r)` with `d(x, a), d(y, a) <= r`.
type Premise = (Point<f64>, Point<f64>, Point<f64>, f64);

/// Half of the tuples put both points on the sphere of radius `r` about `a`,
/// where uniform convexity is tight; the rest are independent draws with
/// `r` at or somewhat above the larger distance.
fn premise<S: GeodesicSpace<f64>>(space: &S, rng: &mut ChaCha8Rng) -> crate::Result<Option<Premise>> {
    let a = draw(space, rng);
    let x = draw(space, rng);
    let y = draw(space, rng);
    let (dx, dy) = (space.dist(&a, &x)?, space.dist(&a, &y)?);
    if dx.min(dy) < 1e-6 {
        return Ok(None);
    }
    if rng.random_bool(0.5) {
        let (near, far, rn, rf) = if dx <= dy { (x, y, dx, dy) } else { (y, x, dy, dx) };
        let far = space.combine(&a, &far, rn / rf)?;
        Ok(Some((a, near, far, rn)))
    } else {
        let stretch = if rng.random_bool(0.5) { 1.0 } else { 1.0 + 0.5 * rng.random::<f64>() };
        Ok(Some((a, x, y, dx.max(dy) * stretch)))
    }
}

/// Uniform convexity of the space's own modulus,
/// `d(x,a) <= r, d(y,a) <= r, d(x,y) >= eps r  =>  d(mid, a) <= (1 - eta(r, eps)) r`,
/// together with its consequence for arbitrary `lambda` and any `s >= r`,
/// `d((1-lambda) x ⊕ lambda y, a) <= (1 - 2 lambda (1 - lambda) eta(s, eps)) r`.
pub fn check_uc_implication<S: GeodesicSpace<f64>>(space: &S, samples: u64, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("uniform convexity");
    while report.samples < samples {
        if let Err(e) = uc_sample(space, &mut rng, &mut report) {
            report.samples += 1;
            report.fail(super::Failure { inputs: e.to_string(), lhs: f64::NAN, rhs: f64::NAN, slack_violated: f64::NAN });
        }
    }
    report
}

fn uc_sample<S: GeodesicSpace<f64>>(space: &S, rng: &mut ChaCha8Rng, report: &mut CheckReport) -> crate::Result<()> {
    let Some((a, x, y, r)) = premise(space, rng)? else { return Ok(()) };
    let dxy = space.dist(&x, &y)?;
    let top = (dxy / r).min(2.0);
    let eps = if rng.random_bool(0.5) { top } else { top * (1.0 - rng.random::<f64>()) };
    if !(eps > 0.0) {
        return Ok(());
    }
    report.samples += 1;
    let at = || format!("a={:?} x={:?} y={:?} r={r} eps={eps}", a.coords(), x.coords(), y.coords());
    let mid = space.combine(&x, &y, 0.5)?;
    let eta = space.uc_modulus(r, eps)?;
    report.le(space.dist(&mid, &a)?, (1.0 - eta) * r, || format!("midpoint: {}", at()));

    let lambda: f64 = rng.random();
    let s = r * (1.0 + 2.0 * rng.random::<f64>());
    let eta_s = space.uc_modulus(s, eps)?;
    let p = space.combine(&x, &y, lambda)?;
    report.le(
        space.dist(&p, &a)?,
        (1.0 - 2.0 * lambda * (1.0 - lambda) * eta_s) * r,
        || format!("lambda={lambda} s={s}: {}", at()),
    );
    Ok(())
}

/// The two integer forms of the uniform convexity implication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexForm {
    /// `d(x,a) <= r, d(y,a) <= r, d(x,y) >= 2^-k r  =>  d(mid,a) <= (1 - 2^-m) r`.
    Closed,
    /// `d(x,a) < r, d(y,a) < r, d(x,y) > 2^-k r  =>  d(mid,a) <= (1 - 2^-m) r`.
    Open,
}

/// Checks an integer modulus `m = eta_i(r, k)` in the given form.
pub fn check_index_implication<S: GeodesicSpace<f64>>(
    space: &S,
    modulus: &ModulusDescriptor,
    form: IndexForm,
    samples: u64,
    seed: u64,
) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = match form {
        IndexForm::Closed => "integer modulus (closed)",
        IndexForm::Open => "integer modulus (open)",
    };
    let mut report = CheckReport::new(name);
    while report.samples < samples {
        if let Err(e) = index_sample(space, modulus, form, &mut rng, &mut report) {
            report.samples += 1;
            report.fail(super::Failure { inputs: e.to_string(), lhs: f64::NAN, rhs: f64::NAN, slack_violated: f64::NAN });
        }
    }
    report
}

fn index_sample<S: GeodesicSpace<f64>>(
    space: &S,
    modulus: &ModulusDescriptor,
    form: IndexForm,
    rng: &mut ChaCha8Rng,
    report: &mut CheckReport,
) -> crate::Result<()> {
    let Some((a, x, y, r0)) = premise(space, rng)? else { return Ok(()) };
    let r = match form {
        IndexForm::Closed => r0,
        IndexForm::Open => r0 * (1.0 + 1e-9),
    };
    let dxy = space.dist(&x, &y)?;
    // smallest k with 2^-k r <= d(x,y) (strictly below in the open form)
    let Some(k0) = (dxy / r).ceil_neg_log2() else { return Ok(()) };
    let mut k = k0.max(0) as u64;
    if form == IndexForm::Open && (dxy / r) == f64::pow2(-(k as i64)) {
        k += 1;
    }
    if rng.random_bool(0.3) {
        k += rng.random_range(0..4);
    }
    report.samples += 1;
    let m = modulus.index(&r, k)?;
    let bound = (1.0 - f64::pow2(-(m.min(1100) as i64))) * r;
    let mid = space.combine(&x, &y, 0.5)?;
    report.le(space.dist(&mid, &a)?, bound, || {
        format!("a={:?} x={:?} y={:?} r={r} k={k} m={m}", a.coords(), x.coords(), y.coords())
    });
    Ok(())
}
