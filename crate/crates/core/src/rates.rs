//! Rates of asymptotic regularity and liminf moduli for the Ishikawa iteration.
//!
//! With `P = ceil(L (b+1) / (eps * eta(b+1, eps / (L (b+1)))))` and
//! `gamma_0 = gamma(eps / (8 b))`:
//!
//! * `Phi = theta(P + gamma_0 + 1 + N0)`: `d(x_n, T x_n) < eps` for all `n >= Phi`;
//! * `Delta(k) = theta(P + k + N0)`: some `N` in `[k, Delta(k)]` has `d(x_N, T x_N) < eps`.
//!
//! Neither bound looks at the space, the map or the starting point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::{ModulusDescriptor, Schedule};
use crate::scalar::{ceil_rational_u64, Scalar};

/// Absolute upward nudge applied before ceiling an inexact quotient.
pub const CEILING_NUDGE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct RateInputs<S> {
    pub eps: S,
    pub eta: ModulusDescriptor,
    pub b: S,
    pub n0: u64,
    pub l: u64,
    pub theta: ModulusDescriptor,
    pub gamma: ModulusDescriptor,
}

impl<S: Scalar> RateInputs<S> {
    pub fn new(eps: S, eta: ModulusDescriptor, b: S, schedule: &Schedule) -> Self {
        RateInputs {
            eps,
            eta,
            b,
            n0: schedule.n0,
            l: schedule.l,
            theta: schedule.theta.clone(),
            gamma: schedule.gamma.clone(),
        }
    }

    pub fn with_eps(&self, eps: S) -> Self {
        RateInputs { eps, ..self.clone() }
    }

    fn exact(&self) -> Result<Exact> {
        let eps = self
            .eps
            .to_rational()
            .ok_or_else(|| Error::InvalidRateInputs("eps must be finite".into()))?;
        let b = self
            .b
            .to_rational()
            .ok_or_else(|| Error::InvalidRateInputs("b must be finite".into()))?;
        if !eps.is_positive() {
            return Err(Error::InvalidRateInputs(format!("eps = {:?} must be positive", self.eps)));
        }
        if !b.is_positive() {
            return Err(Error::InvalidRateInputs(format!("b = {:?} must be positive", self.b)));
        }
        if self.l < 1 {
            return Err(Error::InvalidRateInputs("L must be ≥1".into()));
        }
        let l = BigRational::from_integer(BigInt::from(self.l));
        let r = &b + BigRational::one();
        let lr = &l * &r;
        Ok(Exact { eps, b, r, lr })
    }
}

/// The inputs as exact rationals, with `r = b + 1` and `lr = L (b + 1)`.
struct Exact {
    eps: BigRational,
    b: BigRational,
    r: BigRational,
    lr: BigRational,
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

/// `ceil(lr / (eps * eta(r, arg)))`, exactly when the modulus allows it.
fn p_with_argument(eta: &ModulusDescriptor, x: &Exact, arg: &BigRational) -> Result<u64> {
    match eta.eta::<BigRational>(&x.r, arg) {
        Ok(v) => {
            if !v.is_positive() {
                return Err(Error::ModulusDomain("eta must be positive".into()));
            }
            let q = &x.lr / (&x.eps * v);
            ceil_rational_u64(&q).ok_or_else(|| Error::Overflow("P".into()))
        }
        Err(Error::Inexact(_)) => {
            let to = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
            let v = eta.eta::<f64>(&to(&x.r), &to(arg))?;
            if !(v > 0.0) {
                return Err(Error::ModulusDomain("eta must be positive".into()));
            }
            let q = to(&x.lr) / (to(&x.eps) * v);
            let nudged = q * (1.0 + 4.0 * f64::EPSILON) + CEILING_NUDGE;
            if !nudged.is_finite() || nudged >= u64::MAX as f64 {
                return Err(Error::Overflow("P".into()));
            }
            Ok(nudged.ceil() as u64)
        }
        Err(e) => Err(e),
    }
}

/// `P = ceil(L (b+1) / (eps * eta(b+1, eps / (L (b+1)))))`.
pub fn compute_p<S: Scalar>(inputs: &RateInputs<S>) -> Result<u64> {
    let x = inputs.exact()?;
    let arg = &x.eps / &x.lr;
    if arg > two() {
        return Err(Error::ModulusDomain(format!(
            "eps / (L (b + 1)) = {} exceeds 2; use the shortcut first",
            crate::Rational(arg)
        )));
    }
    p_with_argument(&inputs.eta, &x, &arg)
}

/// `gamma_0 = gamma(eps / (8 b))`.
pub fn compute_gamma0<S: Scalar>(inputs: &RateInputs<S>) -> Result<u64> {
    let x = inputs.exact()?;
    let delta = &x.eps / (BigRational::from_integer(BigInt::from(8)) * &x.b);
    inputs.gamma.gamma(&delta)
}

fn add(terms: &[u64]) -> Result<u64> {
    terms
        .iter()
        .try_fold(0u64, |acc, t| acc.checked_add(*t))
        .ok_or_else(|| Error::Overflow("theta argument".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaAt {
    pub k: u64,
    pub delta: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub eps: f64,
    #[serde(rename = "P")]
    pub p: u64,
    pub gamma0: u64,
    pub phi: u64,
    pub delta: Vec<DeltaAt>,
    pub empirical_first_hit: Option<u64>,
    pub tightness_ratio: Option<f64>,
    /// Set when `eps > 2b` made the bound trivial.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub shortcut: bool,
}

impl RateReport {
    /// Records the first index from which residuals stay below `eps`.
    pub fn with_empirical(mut self, first_hit: Option<u64>) -> Self {
        self.empirical_first_hit = first_hit;
        self.tightness_ratio = first_hit.map(|h| self.phi as f64 / h.max(1) as f64);
        self
    }
}

/// `Phi = theta(P + gamma_0 + 1 + N0)`.
pub fn compute_phi<S: Scalar>(inputs: &RateInputs<S>) -> Result<RateReport> {
    let p = compute_p(inputs)?;
    let gamma0 = compute_gamma0(inputs)?;
    let phi = inputs.theta.nat(add(&[p, gamma0, 1, inputs.n0])?)?;
    Ok(RateReport {
        eps: inputs.eps.to_f64_lossy(),
        p,
        gamma0,
        phi,
        delta: Vec::new(),
        empirical_first_hit: None,
        tightness_ratio: None,
        shortcut: false,
    })
}

/// `Delta(k) = theta(P + k + N0)`; fails if the result is below `k`.
pub fn compute_delta<S: Scalar>(inputs: &RateInputs<S>, k: u64) -> Result<u64> {
    let p = compute_p(inputs)?;
    let delta = inputs.theta.nat(add(&[p, k, inputs.n0])?)?;
    if delta < k {
        return Err(Error::InvalidWitness(format!("theta(P + k + N0) = {delta} is below k = {k}")));
    }
    Ok(delta)
}

/// Degenerate precisions.
///
/// Returns `Some(0)` when `eps > 2b`, since every residual is at most `2b`.
/// When `eps / (L (b+1)) > 2` but `eps <= 2b`, evaluates the bound with the
/// modulus argument clamped to 2. Otherwise returns `None`.
pub fn epsilon_shortcut<S: Scalar>(inputs: &RateInputs<S>) -> Result<Option<u64>> {
    let x = inputs.exact()?;
    if x.eps > two() * &x.b {
        return Ok(Some(0));
    }
    if &x.eps / &x.lr > two() {
        let p = p_with_argument(&inputs.eta, &x, &two())?;
        let gamma0 = compute_gamma0(inputs)?;
        return Ok(Some(inputs.theta.nat(add(&[p, gamma0, 1, inputs.n0])?)?));
    }
    Ok(None)
}

/// `Phi` routed through [`epsilon_shortcut`], with `Delta(k)` for each `k`.
pub fn rate_report<S: Scalar>(inputs: &RateInputs<S>, ks: &[u64]) -> Result<RateReport> {
    let x = inputs.exact()?;
    if x.eps > two() * &x.b {
        return Ok(RateReport {
            eps: inputs.eps.to_f64_lossy(),
            p: 0,
            gamma0: compute_gamma0(inputs)?,
            phi: 0,
            delta: ks.iter().map(|&k| DeltaAt { k, delta: k }).collect(),
            empirical_first_hit: None,
            tightness_ratio: None,
            shortcut: true,
        });
    }
    let mut report = match epsilon_shortcut(inputs)? {
        Some(phi) => {
            let p = p_with_argument(&inputs.eta, &x, &two())?;
            RateReport {
                eps: inputs.eps.to_f64_lossy(),
                p,
                gamma0: compute_gamma0(inputs)?,
                phi,
                delta: Vec::new(),
                empirical_first_hit: None,
                tightness_ratio: None,
                shortcut: true,
            }
        }
        None => compute_phi(inputs)?,
    };
    for &k in ks {
        let delta = inputs.theta.nat(add(&[report.p, k, inputs.n0])?)?;
        if delta < k {
            return Err(Error::InvalidWitness(format!(
                "theta(P + k + N0) = {delta} is below k = {k}"
            )));
        }
        report.delta.push(DeltaAt { k, delta });
    }
    Ok(report)
}
