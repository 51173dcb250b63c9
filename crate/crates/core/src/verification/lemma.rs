use super::CheckReport;
use crate::iteration::Trajectory;
use crate::scalar::Real;

/// Audits the step inequalities along a recorded trajectory:
///
/// * `(1 - s_n) d(x_n, T x_n) <= d(x_n, T y_n)`
/// * `d(x_{n+1}, T x_{n+1}) <= (1 + 2 s_n (1 - lambda_n)) d(x_n, T x_n)`
///
/// and, when the trajectory tracked a reference point `z`,
///
/// * `d(y_n, z) <= d(x_n, z) + d(z, T z)`
/// * `d(T y_n, z) <= d(x_n, z) + 2 d(z, T z)`
/// * `d(x_{n+1}, z) <= d(x_n, z) + 2 lambda_n d(z, T z)`
/// * `d(x_n, z) <= d(x_0, z) + 2 n d(z, T z)`
///
/// plus the residual cap when one is attached.
pub fn check_lemma_inequalities<T: Real>(traj: &Trajectory<T>) -> CheckReport {
    let f = |v: T| v.to_f64_lossy();
    let mut r = CheckReport::new("step inequalities");
    let res = &traj.residuals;
    for n in 0..traj.steps() {
        r.samples += 1;
        let (l, s) = (f(traj.lambdas[n]), f(traj.ss[n]));
        let (rn, rn1, inner) = (f(res[n]), f(res[n + 1]), f(traj.inner_residuals[n]));
        r.le((1.0 - s) * rn, inner, || format!("n={n}: (1-s) d(x,Tx) <= d(x,Ty)"));
        r.le(rn1, (1.0 + 2.0 * s * (1.0 - l)) * rn, || format!("n={n}: residual growth"));
        if let Some(rt) = &traj.reference {
            let fz = f(rt.fixed_residual);
            let (dx, dx1, dy, dty) = (f(rt.dist_x[n]), f(rt.dist_x[n + 1]), f(rt.dist_y[n]), f(rt.dist_ty[n]));
            r.le(dy, dx + fz, || format!("n={n}: d(y,z) <= d(x,z) + d(z,Tz)"));
            r.le(dty, dx + 2.0 * fz, || format!("n={n}: d(Ty,z) <= d(x,z) + 2 d(z,Tz)"));
            r.le(dx1, dx + 2.0 * l * fz, || format!("n={n}: d(x_n+1,z) <= d(x_n,z) + 2 lambda d(z,Tz)"));
            r.le(dx, f(rt.dist_x[0]) + 2.0 * n as f64 * fz, || format!("n={n}: d(x_n,z) <= d(x_0,z) + 2n d(z,Tz)"));
        }
    }
    if traj.residual_cap.is_some() {
        r.absorb(check_residual_cap(traj));
    }
    r
}

/// `d(x_n, T x_n) <= 2b + 1e-9` at every recorded index.
pub fn check_residual_cap<T: Real>(traj: &Trajectory<T>) -> CheckReport {
    let mut r = CheckReport::new("residual cap");
    let Some(cap) = traj.residual_cap else {
        r.notes.push("no certificate attached".into());
        return r;
    };
    let cap = cap.to_f64_lossy();
    for (n, v) in traj.residuals.iter().enumerate() {
        r.samples += 1;
        let v = v.to_f64_lossy();
        if v > cap + super::SLACK {
            r.fail(super::Failure {
                inputs: format!("n={n}: d(x,Tx) <= 2b"),
                lhs: v,
                rhs: cap,
                slack_violated: v - cap,
            });
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, SpaceModel};
    use crate::iteration::{run_trajectory, RunOptions};
    use crate::mappings::{MapKind, MappingSpec};
    use crate::moduli::{gamma_for_geometric_s, theta_for_constant_lambda, Schedule, SequenceDescriptor};
    use crate::rational::Rational;

    fn p(c: &[f64]) -> Point<f64> {
        Point::new(c.to_vec())
    }

    fn options(z: Point<f64>, cap: f64) -> RunOptions<f64> {
        RunOptions { reference: Some(z), residual_cap: Some(cap), ..RunOptions::default() }
    }

    fn geometric_s() -> Schedule {
        let lambda = SequenceDescriptor::constant(Rational::new(1, 2));
        Schedule {
            theta: theta_for_constant_lambda(&Rational::new(1, 2)).unwrap(),
            gamma: gamma_for_geometric_s(&Rational::new(1, 2), &Rational::new(1, 2), &lambda).unwrap(),
            lambda,
            s: SequenceDescriptor::Geometric { c: Rational::new(1, 2), q: Rational::new(1, 2) },
            l: 2,
            n0: 0,
        }
    }

    #[test]
    fn rotation_and_ishikawa_pass() {
        let e = SpaceModel::euclidean(2);
        let km = Schedule::krasnoselski_mann(Rational::new(1, 2)).unwrap();
        let rot = MappingSpec::new(MapKind::EuclideanRotation { center: p(&[0.0, 0.0]), angle: std::f64::consts::PI });
        let t = run_trajectory(&e, &rot, &p(&[1.0, 0.0]), &km, 1000, &options(p(&[0.0, 0.0]), 2.0)).unwrap();
        let r = check_lemma_inequalities(&t);
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(r.samples, 1000 + 1001);
        let t = run_trajectory(&e, &rot, &p(&[1.0, 0.0]), &geometric_s(), 1000, &options(p(&[0.0, 0.0]), 2.0)).unwrap();
        assert!(check_lemma_inequalities(&t).passed);
    }

    #[test]
    fn non_fixed_reference_point() {
        // d(z, Tz) > 0 exercises the additive terms
        let d = SpaceModel::poincare_disk();
        let m = MappingSpec::new(MapKind::PoincareRotation { center: p(&[0.1, 0.2]), angle: 1.7 });
        let t = run_trajectory(&d, &m, &p(&[0.7, -0.1]), &geometric_s(), 500, &options(p(&[-0.4, 0.3]), 10.0)).unwrap();
        assert!(t.reference.as_ref().unwrap().fixed_residual > 0.1);
        let r = check_lemma_inequalities(&t);
        assert!(r.passed, "{:?}", r.failures);
    }

    #[test]
    fn corrupted_residual_is_caught() {
        let e = SpaceModel::euclidean(2);
        let m = MappingSpec::new(MapKind::EuclideanRotation { center: p(&[0.0, 0.0]), angle: 1.0 });
        let mut t = run_trajectory(&e, &m, &p(&[1.0, 0.0]), &geometric_s(), 100, &options(p(&[0.0, 0.0]), 2.0)).unwrap();
        t.residuals[40] *= 3.0;
        let r = check_lemma_inequalities(&t);
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| f.inputs.starts_with("n=39")), "{:?}", r.failures);
    }

    #[test]
    fn cap_violation_is_caught() {
        let e = SpaceModel::euclidean(2);
        let m = MappingSpec::new(MapKind::EuclideanRotation { center: p(&[0.0, 0.0]), angle: 1.0 });
        let t = run_trajectory(&e, &m, &p(&[1.0, 0.0]), &geometric_s(), 10, &options(p(&[0.0, 0.0]), 0.5)).unwrap();
        assert!(!check_residual_cap(&t).passed);
        let lemma = check_lemma_inequalities(&t);
        assert!(!lemma.passed);
        assert_eq!(lemma.failure_count, check_residual_cap(&t).failure_count);
    }
}
