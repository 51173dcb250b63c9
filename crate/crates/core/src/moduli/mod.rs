//! Moduli and witnesses as serializable closed-form descriptors.
//!
//! A [`ModulusDescriptor`] stands for a modulus of uniform convexity (in any of
//! its four forms), a rate of divergence `theta`, a Cauchy modulus `gamma`, or
//! a majorizability modulus `omega`. [`Schedule`] bundles the parameter
//! sequences of the iteration with the witnesses the rate formulas consume.

mod convert;
mod descriptor;
mod schedule;
mod verify;
mod witness;

pub use convert::{eta1_to_eta, eta2_to_eta1, eta3_to_eta2, eta_to_eta1};
pub use descriptor::{ModulusDescriptor, Monotonicity, Role};
pub use schedule::{Schedule, SequenceDescriptor, SequenceIter};
pub use verify::{
    dyadic_deltas, verify_gamma, verify_gamma_with, verify_theta, verify_theta_with,
    WitnessFailure, WitnessReport, MAX_VERIFIED_TERMS,
};
pub use witness::{
    gamma_for_geometric_s, gamma_from_dyadic, omega_for_bounded_space,
    omega_for_lipschitz, omega_for_nonexpansive, omega_for_uniformly_continuous,
    theta_for_constant_lambda,
};

use crate::error::Result;

/// Samples the declared monotonicity of a descriptor in its first argument.
///
/// Returns the first pair of sample points that violates the declaration.
pub fn spot_check_monotonicity(d: &ModulusDescriptor) -> Result<Option<(f64, f64)>> {
    let decl = d.monotonicity();
    let ordered = |a: f64, b: f64| -> bool {
        match decl {
            Monotonicity::Nondecreasing => a <= b,
            Monotonicity::Nonincreasing => a >= b,
            Monotonicity::Constant => a == b,
            Monotonicity::Unknown => true,
        }
    };
    let grid: Vec<f64> = (1..=64).map(|i| i as f64 * 0.125).collect();
    for w in grid.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let pair = match d.role() {
            Role::Eta => {
                let mut worst = None;
                for e in [0.05, 0.5, 1.0, 2.0] {
                    let (a, b) = (d.eta(&x0, &e)?, d.eta(&x1, &e)?);
                    if !ordered(a, b) {
                        worst = Some((a, b));
                    }
                }
                worst
            }
            Role::EtaIndex => {
                let mut worst = None;
                for k in [0u64, 1, 4, 10] {
                    let (a, b) = (d.index(&x0, k)? as f64, d.index(&x1, k)? as f64);
                    if !ordered(a, b) {
                        worst = Some((a, b));
                    }
                }
                worst
            }
            Role::NatMap => {
                let (n0, n1) = ((x0 * 8.0) as u64, (x1 * 8.0) as u64);
                let (a, b) = (d.nat(n0)? as f64, d.nat(n1)? as f64);
                (!ordered(a, b)).then_some((a, b))
            }
            Role::Gamma => {
                let (a, b) = (d.gamma(&x0)? as f64, d.gamma(&x1)? as f64);
                (!ordered(a, b)).then_some((a, b))
            }
            Role::Any => None,
        };
        if let Some((a, b)) = pair {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    #[test]
    fn declared_monotonicity_holds_on_samples() {
        let lambda = SequenceDescriptor::constant(Rational::new(1, 3));
        let cases = vec![
            ModulusDescriptor::eta_quadratic(),
            ModulusDescriptor::EtaHilbert,
            eta_to_eta1(&ModulusDescriptor::eta_quadratic()).unwrap(),
            eta1_to_eta(&eta_to_eta1(&ModulusDescriptor::eta_quadratic()).unwrap()).unwrap(),
            ModulusDescriptor::IndexAffine { k_coeff: 1, ceil_r_coeff: 1, constant: 0 },
            eta3_to_eta2(&ModulusDescriptor::IndexAffine { k_coeff: 2, ceil_r_coeff: 3, constant: 1 })
                .unwrap(),
            theta_for_constant_lambda(&Rational::new(1, 4)).unwrap(),
            gamma_for_geometric_s(&Rational::new(1, 2), &Rational::new(2, 3), &lambda).unwrap(),
            gamma_from_dyadic(&ModulusDescriptor::GammaDyadicShift { c: 3 }).unwrap(),
            omega_for_nonexpansive(4),
            omega_for_bounded_space(2),
        ];
        for d in cases {
            assert_eq!(spot_check_monotonicity(&d).unwrap(), None, "{d:?}");
        }
    }
}
