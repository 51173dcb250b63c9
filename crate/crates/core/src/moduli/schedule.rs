use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ModulusDescriptor;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::Scalar;

/// A scalar sequence `(a_n)` with values in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum SequenceDescriptor {
    /// `a_n = value`.
    Constant { value: Rational },
    /// `a_n = c q^n`.
    Geometric { c: Rational, q: Rational },
    /// Listed values; the last one repeats forever.
    Tabulated { values: Vec<Rational> },
}

impl SequenceDescriptor {
    pub fn constant(value: Rational) -> Self {
        SequenceDescriptor::Constant { value }
    }

    /// Exact `n`-th term.
    pub fn term_exact(&self, n: u64) -> BigRational {
        match self {
            SequenceDescriptor::Constant { value } => value.0.clone(),
            SequenceDescriptor::Geometric { c, q } => {
                &c.0 * num_traits::pow(q.0.clone(), n as usize)
            }
            SequenceDescriptor::Tabulated { values } => values
                .get(n as usize)
                .or(values.last())
                .map(|v| v.0.clone())
                .unwrap_or_else(BigRational::zero),
        }
    }

    /// `n`-th term in any scalar type.
    pub fn term<S: Scalar>(&self, n: u64) -> S {
        if S::EXACT {
            return S::from_rational(&self.term_exact(n));
        }
        match self {
            SequenceDescriptor::Geometric { c, q } => {
                let q = S::from_rational(&q.0);
                S::from_rational(&c.0) * pow_scalar(q, n)
            }
            _ => S::from_rational(&self.term_exact(n)),
        }
    }

    /// Iterator over `a_0, a_1, ...` as `f64`.
    pub fn iter_f64(&self) -> SequenceIter<'_> {
        SequenceIter { seq: self, n: 0, c: self.head_f64(), q: self.ratio_f64() }
    }

    fn head_f64(&self) -> f64 {
        match self {
            SequenceDescriptor::Geometric { c, .. } => c.to_f64(),
            _ => 0.0,
        }
    }

    fn ratio_f64(&self) -> f64 {
        match self {
            SequenceDescriptor::Geometric { q, .. } => q.to_f64(),
            _ => 0.0,
        }
    }

    /// Infimum of the sequence, exactly.
    pub fn infimum(&self) -> BigRational {
        match self {
            SequenceDescriptor::Constant { value } => value.0.clone(),
            SequenceDescriptor::Geometric { c, q } => {
                if q.0 == BigRational::one() {
                    c.0.clone()
                } else {
                    BigRational::zero().min(c.0.clone())
                }
            }
            SequenceDescriptor::Tabulated { values } => {
                values.iter().map(|v| v.0.clone()).min().unwrap_or_else(BigRational::zero)
            }
        }
    }

    /// Supremum over `n >= from`, exactly.
    pub fn supremum_from(&self, from: u64) -> BigRational {
        match self {
            SequenceDescriptor::Constant { value } => value.0.clone(),
            SequenceDescriptor::Geometric { q, .. } => {
                if q.0 <= BigRational::one() {
                    self.term_exact(from).max(BigRational::zero())
                } else {
                    // unbounded; validation rejects this case
                    BigRational::from_integer(i64::MAX.into())
                }
            }
            SequenceDescriptor::Tabulated { values } => {
                let start = (from as usize).min(values.len().saturating_sub(1));
                values[start..].iter().map(|v| v.0.clone()).max().unwrap_or_else(BigRational::zero)
            }
        }
    }

    /// Checks that every term lies in `[0, 1]`.
    pub fn validate_unit(&self, name: &str) -> Result<()> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        let in_unit = |v: &BigRational| *v >= zero && *v <= one;
        let ok = match self {
            SequenceDescriptor::Constant { value } => in_unit(&value.0),
            SequenceDescriptor::Geometric { c, q } => {
                in_unit(&c.0) && q.0 >= zero && q.0 <= one
            }
            SequenceDescriptor::Tabulated { values } => {
                !values.is_empty() && values.iter().all(|v| in_unit(&v.0))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSchedule(format!("{name}_n must lie in [0, 1] for all n")))
        }
    }
}

fn pow_scalar<S: Scalar>(base: S, mut exp: u64) -> S {
    let mut acc = S::one();
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        exp >>= 1;
    }
    acc
}

pub struct SequenceIter<'a> {
    seq: &'a SequenceDescriptor,
    n: u64,
    c: f64,
    q: f64,
}

impl Iterator for SequenceIter<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let n = self.n;
        self.n += 1;
        Some(match self.seq {
            SequenceDescriptor::Constant { value } => value.to_f64(),
            SequenceDescriptor::Geometric { .. } => {
                self.c * self.q.powi(n.min(i32::MAX as u64) as i32)
            }
            SequenceDescriptor::Tabulated { values } => {
                values.get(n as usize).or(values.last()).map(Rational::to_f64).unwrap_or(0.0)
            }
        })
    }
}

/// The parameter sequences of the iteration together with their witnesses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub lambda: SequenceDescriptor,
    pub s: SequenceDescriptor,
    /// Rate of divergence of `sum lambda_n (1 - lambda_n)`.
    pub theta: ModulusDescriptor,
    /// `s_n <= 1 - 1/L` for all `n >= N0`.
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "N0")]
    pub n0: u64,
    /// Cauchy modulus of the partial sums of `s_n (1 - lambda_n)`.
    pub gamma: ModulusDescriptor,
}

impl Schedule {
    /// Checks the structural invariants. Witness validity is checked
    /// numerically by [`super::verify_theta`] and [`super::verify_gamma`].
    pub fn validate(&self) -> Result<()> {
        if self.l < 1 {
            return Err(Error::InvalidSchedule("L must be ≥1".into()));
        }
        self.lambda.validate_unit("lambda")?;
        self.s.validate_unit("s")?;
        let cap = BigRational::one() - BigRational::new(1.into(), self.l.into());
        let sup = self.s.supremum_from(self.n0);
        if sup > cap {
            return Err(Error::InvalidSchedule(format!(
                "s_n <= 1 - 1/L must hold for all n >= N0 (sup s_n = {} > {})",
                Rational(sup),
                Rational(cap)
            )));
        }
        use super::Role;
        if !matches!(self.theta.role(), Role::NatMap | Role::Any) {
            return Err(Error::InvalidSchedule(format!(
                "theta must be a map N -> N, got {}",
                self.theta.kind_name()
            )));
        }
        if !matches!(self.gamma.role(), Role::Gamma | Role::Any) {
            return Err(Error::InvalidSchedule(format!(
                "gamma must be a Cauchy modulus, got {}",
                self.gamma.kind_name()
            )));
        }
        Ok(())
    }

    /// Krasnoselski-Mann schedule with constant `lambda` and `s = 0`.
    pub fn krasnoselski_mann(lambda: Rational) -> Result<Self> {
        let theta = super::theta_for_constant_lambda(&lambda)?;
        Ok(Schedule {
            lambda: SequenceDescriptor::constant(lambda),
            s: SequenceDescriptor::constant(Rational::zero()),
            theta,
            l: 1,
            n0: 0,
            gamma: ModulusDescriptor::GammaZero,
        })
    }
}
