//! Numeric validation of the witnesses carried by a [`Schedule`].

use serde::Serialize;

use super::{ModulusDescriptor, Schedule};
use crate::error::Result;

const SLACK: f64 = 1e-9;

/// Refuse to sum more terms than this when validating a witness.
pub const MAX_VERIFIED_TERMS: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessFailure {
    /// `n` for rates of divergence, the precision for Cauchy moduli.
    pub at: f64,
    /// Offset inside the Cauchy tail, if any.
    pub offset: Option<u64>,
    pub lhs: f64,
    pub rhs: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub name: String,
    pub checked: u64,
    pub first_failure: Option<WitnessFailure>,
    pub passed: bool,
}

impl WitnessReport {
    fn new(name: &str) -> Self {
        WitnessReport { name: name.to_string(), checked: 0, first_failure: None, passed: true }
    }

    fn fail(&mut self, failure: WitnessFailure) {
        self.passed = false;
        self.first_failure = Some(failure);
    }
}

/// Growing prefix sums `P_m = sum_{k=0}^{m} term(k)`.
struct PrefixSums<F: FnMut(u64) -> f64> {
    term: F,
    sums: Vec<f64>,
    acc: f64,
}

impl<F: FnMut(u64) -> f64> PrefixSums<F> {
    fn new(term: F) -> Self {
        PrefixSums { term, sums: Vec::new(), acc: 0.0 }
    }

    fn upto(&mut self, m: u64) -> f64 {
        while self.sums.len() as u64 <= m {
            let k = self.sums.len() as u64;
            self.acc += (self.term)(k);
            self.sums.push(self.acc);
        }
        self.sums[m as usize]
    }
}

/// Checks `sum_{k=0}^{theta(n)} lambda_k (1 - lambda_k) >= n` for every `n <= n_max`.
pub fn verify_theta(schedule: &Schedule, n_max: u64) -> Result<WitnessReport> {
    verify_theta_with(&schedule.theta, schedule, n_max)
}

/// [`verify_theta`] against an explicitly supplied rate of divergence.
pub fn verify_theta_with(
    theta: &ModulusDescriptor,
    schedule: &Schedule,
    n_max: u64,
) -> Result<WitnessReport> {
    let mut report = WitnessReport::new("theta");
    let lambda = &schedule.lambda;
    let mut sums = PrefixSums::new(|k| {
        let l: f64 = lambda.term(k);
        l * (1.0 - l)
    });
    for n in 0..=n_max {
        let t = theta.nat(n)?;
        report.checked += 1;
        if t >= MAX_VERIFIED_TERMS {
            report.fail(WitnessFailure {
                at: n as f64,
                offset: None,
                lhs: f64::NAN,
                rhs: n as f64,
                note: format!("theta({n}) = {t} exceeds the verification budget"),
            });
            break;
        }
        let lhs = sums.upto(t);
        let rhs = n as f64;
        if lhs < rhs - SLACK * rhs.max(1.0) {
            report.fail(WitnessFailure {
                at: rhs,
                offset: None,
                lhs,
                rhs,
                note: format!("partial sum up to theta({n}) = {t} is below {n}"),
            });
            break;
        }
    }
    Ok(report)
}

/// Checks `alpha_{gamma(delta)+n} - alpha_{gamma(delta)} <= delta` for every
/// `delta` and every `n <= n_max`, where `alpha_n = sum_{i<=n} s_i (1 - lambda_i)`.
pub fn verify_gamma(schedule: &Schedule, deltas: &[f64], n_max: u64) -> Result<WitnessReport> {
    verify_gamma_with(&schedule.gamma, schedule, deltas, n_max)
}

/// [`verify_gamma`] against an explicitly supplied Cauchy modulus.
pub fn verify_gamma_with(
    gamma: &ModulusDescriptor,
    schedule: &Schedule,
    deltas: &[f64],
    n_max: u64,
) -> Result<WitnessReport> {
    let mut report = WitnessReport::new("gamma");
    let (lambda, s) = (&schedule.lambda, &schedule.s);
    let mut alpha = PrefixSums::new(|k| {
        let l: f64 = lambda.term(k);
        let sk: f64 = s.term(k);
        sk * (1.0 - l)
    });
    'deltas: for &delta in deltas {
        let g = gamma.gamma(&delta)?;
        if g.saturating_add(n_max) >= MAX_VERIFIED_TERMS {
            report.fail(WitnessFailure {
                at: delta,
                offset: None,
                lhs: f64::NAN,
                rhs: delta,
                note: format!("gamma({delta}) = {g} exceeds the verification budget"),
            });
            break;
        }
        let base = alpha.upto(g);
        for n in 0..=n_max {
            report.checked += 1;
            let lhs = alpha.upto(g + n) - base;
            if lhs > delta + SLACK {
                report.fail(WitnessFailure {
                    at: delta,
                    offset: Some(n),
                    lhs,
                    rhs: delta,
                    note: format!("tail after gamma({delta}) = {g} exceeds delta"),
                });
                break 'deltas;
            }
        }
    }
    Ok(report)
}

/// The dyadic precisions `2^-p` for `p = 0..=p_max`.
pub fn dyadic_deltas(p_max: u32) -> Vec<f64> {
    (0..=p_max).map(|p| 2f64.powi(-(p as i32))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{gamma_for_geometric_s, SequenceDescriptor};
    use crate::rational::Rational;

    fn km_half() -> Schedule {
        Schedule::krasnoselski_mann(Rational::new(1, 2)).unwrap()
    }

    fn ishikawa_geometric() -> Schedule {
        let lambda = SequenceDescriptor::constant(Rational::new(1, 2));
        let gamma = gamma_for_geometric_s(&Rational::new(1, 2), &Rational::new(1, 2), &lambda).unwrap();
        Schedule {
            theta: crate::moduli::theta_for_constant_lambda(&Rational::new(1, 2)).unwrap(),
            lambda,
            s: SequenceDescriptor::Geometric { c: Rational::new(1, 2), q: Rational::new(1, 2) },
            l: 2,
            n0: 0,
            gamma,
        }
    }

    #[test]
    fn theta_four_n_passes() {
        let r = verify_theta(&km_half(), 100).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.checked, 101);
    }

    #[test]
    fn theta_identity_fails_at_one() {
        let bad = ModulusDescriptor::ThetaLinear { a: Rational::one(), b: Rational::zero() };
        let r = verify_theta_with(&bad, &km_half(), 100).unwrap();
        assert!(!r.passed);
        let f = r.first_failure.unwrap();
        assert_eq!(f.at, 1.0);
        assert_eq!(f.lhs, 0.5);
    }

    #[test]
    fn gamma_zero_passes_for_km() {
        let r = verify_gamma(&km_half(), &dyadic_deltas(20), 1000).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn geometric_gamma_passes_and_decrement_fails() {
        let sched = ishikawa_geometric();
        assert!(verify_gamma(&sched, &[1.0 / 16.0], 10_000).unwrap().passed);
        assert!(verify_gamma(&sched, &dyadic_deltas(20), 10_000).unwrap().passed);
        // gamma(1/16) - 1 = 1: tail 1/8 > 1/16
        let dec = ModulusDescriptor::Tabulated { points: vec![(Rational::zero(), Rational::one())] };
        let r = verify_gamma_with(&dec, &sched, &[1.0 / 16.0], 10_000).unwrap();
        assert!(!r.passed);
        assert!(r.first_failure.unwrap().lhs > 1.0 / 16.0);
    }
}
