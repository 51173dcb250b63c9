//! Conversions between the four equivalent forms of a modulus of uniform
//! convexity: the real modulus `eta(r, eps)` and the integer forms
//! `eta1`, `eta2`, `eta3` working with dyadic precisions `2^-k`.

use num_rational::BigRational;
use num_traits::One;

use super::{ModulusDescriptor, Role};
use crate::error::{Error, Result};
use crate::rational::Rational;

fn expect_role(d: &ModulusDescriptor, role: Role, name: &'static str) -> Result<()> {
    if d.role() == role || d.role() == Role::Any {
        Ok(())
    } else {
        Err(Error::WrongRole { kind: d.kind_name(), role: name })
    }
}

/// `eta1(r, k) = ceil(-log2 eta(r, 2^-k))`.
pub fn eta_to_eta1(eta: &ModulusDescriptor) -> Result<ModulusDescriptor> {
    expect_role(eta, Role::Eta, "a convexity modulus eta(r, eps)")?;
    Ok(ModulusDescriptor::IndexFromEta { inner: Box::new(eta.clone()) })
}

/// `eta(r, eps) = 2^-eta1(r, ceil(-log2 eps))`.
///
/// For `eps > 1` the dyadic index would be negative; it is clamped to zero,
/// which only lowers the returned modulus.
pub fn eta1_to_eta(eta1: &ModulusDescriptor) -> Result<ModulusDescriptor> {
    expect_role(eta1, Role::EtaIndex, "an integer convexity modulus")?;
    Ok(ModulusDescriptor::EtaFromIndex { inner: Box::new(eta1.clone()) })
}

/// `eta1(r, k) = eta2(r, k + 1)`.
pub fn eta2_to_eta1(eta2: &ModulusDescriptor) -> Result<ModulusDescriptor> {
    expect_role(eta2, Role::EtaIndex, "an integer convexity modulus")?;
    Ok(match eta2 {
        ModulusDescriptor::IndexAffine { k_coeff, ceil_r_coeff, constant } => {
            ModulusDescriptor::IndexAffine {
                k_coeff: *k_coeff,
                ceil_r_coeff: *ceil_r_coeff,
                constant: constant
                    .checked_add(*k_coeff)
                    .ok_or_else(|| Error::Overflow("shifted constant".into()))?,
            }
        }
        ModulusDescriptor::IndexShift { inner, by } => {
            ModulusDescriptor::IndexShift { inner: inner.clone(), by: by + 1 }
        }
        ModulusDescriptor::Tabulated { points } => shift_table(points)?,
        other => ModulusDescriptor::IndexShift { inner: Box::new(other.clone()), by: 1 },
    })
}

/// `eta2(r, k) = eta3(q, k)` where `q` is the exact rational value of `r`.
///
/// Every finite machine real is rational, so the supremum over rational
/// approximations from below collapses to evaluation at `r` itself.
pub fn eta3_to_eta2(eta3: &ModulusDescriptor) -> Result<ModulusDescriptor> {
    expect_role(eta3, Role::EtaIndex, "an integer convexity modulus")?;
    Ok(ModulusDescriptor::IndexOnRationals { inner: Box::new(eta3.clone()) })
}

fn shift_table(points: &[(Rational, Rational)]) -> Result<ModulusDescriptor> {
    let one = BigRational::one();
    let at_one = points
        .iter()
        .filter(|(a, _)| a.0 <= one)
        .max_by(|a, b| a.0.cmp(&b.0))
        .ok_or_else(|| Error::ModulusDomain("table does not cover k = 1".into()))?;
    let mut shifted = vec![(Rational::zero(), at_one.1.clone())];
    shifted.extend(
        points
            .iter()
            .filter(|(a, _)| a.0 > one)
            .map(|(a, v)| (Rational(&a.0 - &one), v.clone())),
    );
    Ok(ModulusDescriptor::Tabulated { points: shifted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn affine(k_coeff: u64, ceil_r_coeff: u64, constant: u64) -> ModulusDescriptor {
        ModulusDescriptor::IndexAffine { k_coeff, ceil_r_coeff, constant }
    }

    #[test]
    fn eta_to_eta1_on_quadratic() {
        let eta1 = eta_to_eta1(&ModulusDescriptor::eta_quadratic()).unwrap();
        assert_eq!(eta1.index(&1.0f64, 0).unwrap(), 3);
        assert_eq!(eta1.index(&7.5f64, 2).unwrap(), 7);
        for k in 0..30 {
            assert_eq!(eta1.index(&2.0f64, k).unwrap(), 2 * k + 3);
            assert_eq!(eta1.index(&ratio(2, 1), k).unwrap(), 2 * k + 3);
        }
    }

    #[test]
    fn eta_to_eta1_on_constant_half() {
        let eta1 = eta_to_eta1(&ModulusDescriptor::EtaConstant { value: Rational::new(1, 2) })
            .unwrap();
        for k in 0..10 {
            assert_eq!(eta1.index(&3.0f64, k).unwrap(), 1);
        }
    }

    #[test]
    fn eta1_to_eta_values() {
        let eta = eta1_to_eta(&affine(2, 0, 3)).unwrap();
        assert_eq!(eta.eta(&1.0f64, &1.0).unwrap(), 0.125);
        assert_eq!(eta.eta(&1.0f64, &0.25).unwrap(), 2f64.powi(-7));
        assert_eq!(eta.eta(&ratio(1, 1), &ratio(1, 4)).unwrap(), ratio(1, 128));
        // eps in (1, 2] clamps the index at zero
        assert_eq!(eta.eta(&1.0f64, &2.0).unwrap(), 0.125);
    }

    #[test]
    fn round_trip_is_pointwise_smaller() {
        let eta = ModulusDescriptor::eta_quadratic();
        let back = eta1_to_eta(&eta_to_eta1(&eta).unwrap()).unwrap();
        for i in 1..=400 {
            let e = i as f64 / 200.0;
            for r in [0.1, 1.0, 4.0] {
                assert!(back.eta(&r, &e).unwrap() <= eta.eta(&r, &e).unwrap());
            }
        }
    }

    #[test]
    fn eta2_to_eta1_shifts_index() {
        let e1 = eta2_to_eta1(&affine(1, 0, 0)).unwrap();
        assert_eq!(e1.index(&1.0f64, 0).unwrap(), 1);
        assert_eq!(e1.index(&1.0f64, 5).unwrap(), 6);
        let e1 = eta2_to_eta1(&affine(2, 0, 3)).unwrap();
        assert_eq!(e1.index(&1.0f64, 0).unwrap(), 5);
        let generic = eta2_to_eta1(&eta_to_eta1(&ModulusDescriptor::eta_quadratic()).unwrap())
            .unwrap();
        assert_eq!(generic.index(&1.0f64, 0).unwrap(), 5);
    }

    #[test]
    fn eta2_to_eta1_shifts_tables() {
        let table = ModulusDescriptor::Tabulated {
            points: vec![
                (Rational::integer(0), Rational::integer(2)),
                (Rational::integer(1), Rational::integer(4)),
                (Rational::integer(3), Rational::integer(9)),
            ],
        };
        let shifted = eta2_to_eta1(&table).unwrap();
        assert_eq!(
            shifted,
            ModulusDescriptor::Tabulated {
                points: vec![
                    (Rational::integer(0), Rational::integer(4)),
                    (Rational::integer(2), Rational::integer(9)),
                ],
            }
        );
        for k in 0..10 {
            assert_eq!(shifted.index(&1.0f64, k).unwrap(), table.index(&1.0f64, k + 1).unwrap());
        }
    }

    #[test]
    fn eta3_to_eta2_uses_exact_rational() {
        let eta3 = affine(1, 1, 0);
        let eta2 = eta3_to_eta2(&eta3).unwrap();
        for k in 0..5 {
            assert_eq!(eta2.index(&1.5f64, k).unwrap(), k + 2);
            assert_eq!(eta2.index(&3.0f64, k).unwrap(), eta3.index(&3.0f64, k).unwrap());
        }
        assert!(eta2.index(&0.0f64, 1).is_err());
        assert!(eta2.index(&-1.0f64, 1).is_err());
    }

    #[test]
    fn eta3_to_eta2_capped_by_ceiling() {
        let eta3 = affine(3, 2, 1);
        let eta2 = eta3_to_eta2(&eta3).unwrap();
        for i in 1..200 {
            let r = i as f64 * 0.037;
            for k in 0..6 {
                let cap = eta3.index(&r.ceil(), k).unwrap();
                assert!(eta2.index(&r, k).unwrap() <= cap);
            }
        }
    }

    #[test]
    fn wrong_roles_rejected() {
        assert!(eta_to_eta1(&affine(1, 0, 0)).is_err());
        assert!(eta1_to_eta(&ModulusDescriptor::eta_quadratic()).is_err());
        assert!(eta3_to_eta2(&ModulusDescriptor::GammaZero).is_err());
    }
}
