//! Constructors for the witnesses consumed by the rate formulas.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{ModulusDescriptor, SequenceDescriptor};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Rate of divergence for constant `lambda`: `theta(n) = ceil(n / (lambda (1 - lambda)))`.
pub fn theta_for_constant_lambda(lambda: &Rational) -> Result<ModulusDescriptor> {
    let l = &lambda.0;
    if *l <= BigRational::zero() || *l >= BigRational::one() {
        return Err(Error::InvalidWitness(format!(
            "lambda = {lambda} must lie in (0, 1) for the series to diverge"
        )));
    }
    let weight = l * (BigRational::one() - l);
    Ok(ModulusDescriptor::ThetaLinear { a: Rational(weight.recip()), b: Rational::zero() })
}

/// Cauchy modulus for `s_n = c q^n` against the given `lambda` sequence.
pub fn gamma_for_geometric_s(
    c: &Rational,
    q: &Rational,
    lambda: &SequenceDescriptor,
) -> Result<ModulusDescriptor> {
    if q.0 >= BigRational::one() || q.is_negative() {
        return Err(Error::InvalidWitness(format!("ratio q = {q} must lie in [0, 1)")));
    }
    if c.is_negative() || c.0 > BigRational::one() {
        return Err(Error::InvalidWitness(format!("s_0 = {c} must lie in [0, 1]")));
    }
    if c.0.is_zero() {
        return Ok(ModulusDescriptor::GammaZero);
    }
    let lambda_min = lambda.infimum().max(BigRational::zero()).min(BigRational::one());
    Ok(ModulusDescriptor::GammaGeometric { c: c.clone(), q: q.clone(), lambda_min: Rational(lambda_min) })
}

/// Real-precision Cauchy modulus from a dyadic one: `gamma(delta) = g(max(0, ceil(-log2 delta)))`.
pub fn gamma_from_dyadic(gamma_dyadic: &ModulusDescriptor) -> Result<ModulusDescriptor> {
    use super::Role;
    if !matches!(gamma_dyadic.role(), Role::NatMap | Role::Any) {
        return Err(Error::WrongRole { kind: gamma_dyadic.kind_name(), role: "a dyadic modulus N -> N" });
    }
    Ok(ModulusDescriptor::GammaFromDyadic { inner: Box::new(gamma_dyadic.clone()) })
}

/// Majorizability modulus of a nonexpansive map with `d(x, Tx) <= b`: `n + b`.
pub fn omega_for_nonexpansive(b: u64) -> ModulusDescriptor {
    ModulusDescriptor::OmegaAffine { slope: 1, shift: b }
}

/// Majorizability modulus of an `L`-Lipschitz map, `L <= lstar`: `n + lstar * b`.
pub fn omega_for_lipschitz(lstar: u64, b: u64) -> Result<ModulusDescriptor> {
    let shift = lstar.checked_mul(b).ok_or_else(|| Error::Overflow("L* b".into()))?;
    Ok(ModulusDescriptor::OmegaAffine { slope: 1, shift })
}

/// Majorizability modulus of a uniformly continuous map with modulus of
/// uniform continuity `alpha_t`: `n 2^alpha_t(0) + 1 + b`.
pub fn omega_for_uniformly_continuous(
    alpha_t: &ModulusDescriptor,
    b: u64,
) -> Result<ModulusDescriptor> {
    let a0 = alpha_t.nat(0)?;
    let slope = (BigInt::one() << a0)
        .to_u64()
        .ok_or_else(|| Error::Overflow("2^alpha_T(0)".into()))?;
    let shift = b.checked_add(1).ok_or_else(|| Error::Overflow("1 + b".into()))?;
    Ok(ModulusDescriptor::OmegaAffine { slope, shift })
}

/// Majorizability modulus on a bounded space: the constant `ceil(diameter)`.
pub fn omega_for_bounded_space(diameter_bound: u64) -> ModulusDescriptor {
    ModulusDescriptor::OmegaConstant { value: diameter_bound }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force oracle: smallest m with sum_{k=0}^m w >= n.
    fn partial_sum_reaches(weight: &BigRational, upto: u64, n: u64) -> bool {
        weight * BigRational::from_integer((upto + 1).into()) >= BigRational::from_integer(n.into())
    }

    #[test]
    fn theta_half_is_four_n() {
        let theta = theta_for_constant_lambda(&Rational::new(1, 2)).unwrap();
        assert_eq!(theta, ModulusDescriptor::ThetaLinear { a: Rational::integer(4), b: Rational::zero() });
        assert_eq!(theta.nat(0).unwrap(), 0);
        for n in 0..=100u64 {
            assert_eq!(theta.nat(n).unwrap(), 4 * n);
            // (4n + 1) / 4 >= n
            assert!(partial_sum_reaches(&BigRational::new(1.into(), 4.into()), 4 * n, n));
        }
    }

    #[test]
    fn theta_quarter_matches_summation() {
        let theta = theta_for_constant_lambda(&Rational::new(1, 4)).unwrap();
        let w = BigRational::new(3.into(), 16.into());
        for n in 0..=100u64 {
            let t = theta.nat(n).unwrap();
            assert_eq!(t, (16 * n).div_ceil(3));
            assert!(partial_sum_reaches(&w, t, n));
        }
    }

    #[test]
    fn theta_rejects_degenerate_lambda() {
        assert!(theta_for_constant_lambda(&Rational::zero()).is_err());
        assert!(theta_for_constant_lambda(&Rational::one()).is_err());
    }

    #[test]
    fn gamma_constructors() {
        let lambda = SequenceDescriptor::constant(Rational::new(1, 2));
        let g = gamma_for_geometric_s(&Rational::new(1, 2), &Rational::new(1, 2), &lambda).unwrap();
        assert_eq!(g.gamma(&(1.0 / 16.0)).unwrap(), 2);
        // delta above the full sum (1/4)
        assert_eq!(g.gamma(&0.5f64).unwrap(), 0);
        let z = gamma_for_geometric_s(&Rational::zero(), &Rational::new(1, 2), &lambda).unwrap();
        assert_eq!(z, ModulusDescriptor::GammaZero);
        assert!(gamma_for_geometric_s(&Rational::new(1, 2), &Rational::one(), &lambda).is_err());
    }

    #[test]
    fn omega_formulas() {
        assert_eq!(omega_for_nonexpansive(2).nat(3).unwrap(), 5);
        let id = omega_for_nonexpansive(0);
        for n in 0..20 {
            assert_eq!(id.nat(n).unwrap(), n);
        }
        assert_eq!(omega_for_lipschitz(3, 2).unwrap().nat(1).unwrap(), 7);
        assert_eq!(omega_for_lipschitz(1, 2).unwrap(), omega_for_nonexpansive(2));
        let zero = ModulusDescriptor::OmegaConstant { value: 0 };
        assert_eq!(omega_for_uniformly_continuous(&zero, 0).unwrap().nat(2).unwrap(), 3);
        let one = ModulusDescriptor::OmegaConstant { value: 1 };
        assert_eq!(omega_for_uniformly_continuous(&one, 1).unwrap().nat(1).unwrap(), 4);
        assert_eq!(omega_for_uniformly_continuous(&one, 5).unwrap().nat(0).unwrap(), 6);
        let bounded = omega_for_bounded_space(3);
        assert_eq!(bounded.nat(0).unwrap(), 3);
        assert_eq!(bounded.nat(1_000_000).unwrap(), 3);
    }
}
