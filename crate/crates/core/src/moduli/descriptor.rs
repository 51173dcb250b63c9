use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::Scalar;

fn default_quadratic_coeff() -> Rational {
    Rational::new(1, 8)
}

fn default_one() -> u64 {
    1
}

/// Closed-form, serializable representation of a modulus or witness.
///
/// Each kind has a [`Role`]; evaluating a descriptor through the accessor of
/// another role is an error. [`ModulusDescriptor::Tabulated`] serves any role
/// as a right-continuous step function over its first argument.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ModulusDescriptor {
    /// `eta(r, eps) = min(1, coeff * eps^2)`; the CAT(0) modulus has coeff 1/8.
    EtaQuadratic {
        #[serde(default = "default_quadratic_coeff")]
        coeff: Rational,
    },
    /// `eta(r, eps) = 1 - sqrt(1 - eps^2 / 4)`, the Hilbert space modulus.
    EtaHilbert,
    /// `eta(r, eps) = value`.
    EtaConstant { value: Rational },
    /// `eta(r, eps) = 2^-inner(r, max(0, ceil(-log2 eps)))` built from an index modulus.
    EtaFromIndex { inner: Box<ModulusDescriptor> },
    /// `eta1(r, k) = ceil(-log2 inner(r, 2^-k))` built from a real modulus.
    IndexFromEta { inner: Box<ModulusDescriptor> },
    /// `f(r, k) = k_coeff * k + ceil_r_coeff * ceil(r) + constant`.
    IndexAffine {
        #[serde(default)]
        k_coeff: u64,
        #[serde(default)]
        ceil_r_coeff: u64,
        #[serde(default)]
        constant: u64,
    },
    /// `f(r, k) = inner(r, k + by)`.
    IndexShift { inner: Box<ModulusDescriptor>, by: u64 },
    /// `f(r, k) = inner(q, k)` with `q` the exact rational value of `r`.
    IndexOnRationals { inner: Box<ModulusDescriptor> },
    /// `theta(n) = ceil(a * n + b)`.
    ThetaLinear { a: Rational, b: Rational },
    /// `gamma(delta) = 0`.
    GammaZero,
    /// Dyadic Cauchy modulus `gamma(p) = max(0, p + c)`.
    GammaDyadicShift { c: i64 },
    /// Cauchy modulus of the partial sums of `s_n (1 - lambda_n)` for
    /// `s_n = c q^n` and `lambda_n >= lambda_min`: the least `N` with
    /// `c (1 - lambda_min) q^(N+1) / (1 - q) <= delta`.
    GammaGeometric { c: Rational, q: Rational, lambda_min: Rational },
    /// `gamma(delta) = inner(max(0, ceil(-log2 delta)))` over a dyadic modulus.
    GammaFromDyadic { inner: Box<ModulusDescriptor> },
    /// `omega(n) = slope * n + shift`.
    OmegaAffine {
        #[serde(default = "default_one")]
        slope: u64,
        shift: u64,
    },
    /// `omega(n) = value`.
    OmegaConstant { value: u64 },
    /// Step function: value of the largest `arg <= x`; undefined below the
    /// first argument.
    Tabulated { points: Vec<(Rational, Rational)> },
}

/// What a descriptor computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// `(0, inf) x (0, 2] -> (0, 1]`, a modulus of uniform convexity.
    Eta,
    /// `(0, inf) x N -> N`, the integer forms of the convexity modulus.
    EtaIndex,
    /// `N -> N`: rates of divergence, majorizability moduli, dyadic moduli.
    NatMap,
    /// `(0, inf) -> N`: Cauchy moduli with real precision.
    Gamma,
    /// Tabulated descriptors serve every role.
    Any,
}

/// Monotonicity declared for a descriptor's arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
    Constant,
    Unknown,
}

impl ModulusDescriptor {
    /// The CAT(0) modulus `eps^2 / 8`.
    pub fn eta_quadratic() -> Self {
        ModulusDescriptor::EtaQuadratic { coeff: default_quadratic_coeff() }
    }

    pub fn kind_name(&self) -> &'static str {
        use ModulusDescriptor::*;
        match self {
            EtaQuadratic { .. } => "EtaQuadratic",
            EtaHilbert => "EtaHilbert",
            EtaConstant { .. } => "EtaConstant",
            EtaFromIndex { .. } => "EtaFromIndex",
            IndexFromEta { .. } => "IndexFromEta",
            IndexAffine { .. } => "IndexAffine",
            IndexShift { .. } => "IndexShift",
            IndexOnRationals { .. } => "IndexOnRationals",
            ThetaLinear { .. } => "ThetaLinear",
            GammaZero => "GammaZero",
            GammaDyadicShift { .. } => "GammaDyadicShift",
            GammaGeometric { .. } => "GammaGeometric",
            GammaFromDyadic { .. } => "GammaFromDyadic",
            OmegaAffine { .. } => "OmegaAffine",
            OmegaConstant { .. } => "OmegaConstant",
            Tabulated { .. } => "Tabulated",
        }
    }

    pub fn role(&self) -> Role {
        use ModulusDescriptor::*;
        match self {
            EtaQuadratic { .. } | EtaHilbert | EtaConstant { .. } | EtaFromIndex { .. } => {
                Role::Eta
            }
            IndexFromEta { .. } | IndexAffine { .. } | IndexShift { .. }
            | IndexOnRationals { .. } => Role::EtaIndex,
            ThetaLinear { .. } | GammaDyadicShift { .. } | OmegaAffine { .. }
            | OmegaConstant { .. } => Role::NatMap,
            GammaZero | GammaGeometric { .. } | GammaFromDyadic { .. } => Role::Gamma,
            Tabulated { .. } => Role::Any,
        }
    }

    /// Declared monotonicity in the first argument (`r` for the convexity
    /// moduli, `n` or `delta` otherwise).
    pub fn monotonicity(&self) -> Monotonicity {
        use ModulusDescriptor::*;
        match self {
            EtaQuadratic { .. } | EtaHilbert | EtaConstant { .. } => Monotonicity::Constant,
            EtaFromIndex { inner } => match inner.monotonicity() {
                Monotonicity::Nondecreasing => Monotonicity::Nonincreasing,
                Monotonicity::Constant => Monotonicity::Constant,
                _ => Monotonicity::Unknown,
            },
            IndexFromEta { inner } => match inner.monotonicity() {
                Monotonicity::Nonincreasing => Monotonicity::Nondecreasing,
                Monotonicity::Constant => Monotonicity::Constant,
                _ => Monotonicity::Unknown,
            },
            IndexAffine { ceil_r_coeff, .. } => {
                if *ceil_r_coeff == 0 {
                    Monotonicity::Constant
                } else {
                    Monotonicity::Nondecreasing
                }
            }
            IndexShift { inner, .. } | IndexOnRationals { inner } => inner.monotonicity(),
            ThetaLinear { a, .. } => {
                if a.is_negative() {
                    Monotonicity::Unknown
                } else {
                    Monotonicity::Nondecreasing
                }
            }
            GammaDyadicShift { .. } | OmegaAffine { .. } => Monotonicity::Nondecreasing,
            OmegaConstant { .. } | GammaZero => Monotonicity::Constant,
            GammaGeometric { .. } | GammaFromDyadic { .. } => Monotonicity::Nonincreasing,
            Tabulated { .. } => Monotonicity::Unknown,
        }
    }

    fn wrong_role(&self, role: &'static str) -> Error {
        Error::WrongRole { kind: self.kind_name(), role }
    }

    /// Evaluates a modulus of uniform convexity at `(r, eps)`.
    pub fn eta<S: Scalar>(&self, r: &S, eps: &S) -> Result<S> {
        if *r <= S::zero() {
            return Err(Error::ModulusDomain(format!("r = {:?} must be positive", r)));
        }
        let two = S::one() + S::one();
        if *eps <= S::zero() || *eps > two {
            return Err(Error::ModulusDomain(format!("eps = {:?} not in (0, 2]", eps)));
        }
        use ModulusDescriptor::*;
        match self {
            EtaQuadratic { coeff } => {
                let v = S::from_rational(&coeff.0) * eps.clone() * eps.clone();
                Ok(if v > S::one() { S::one() } else { v })
            }
            EtaHilbert => {
                let four = two.clone() * two;
                let inside = S::one() - eps.clone() * eps.clone() / four;
                let root = inside.sqrt_checked().ok_or(Error::Inexact("EtaHilbert"))?;
                Ok(S::one() - root)
            }
            EtaConstant { value } => Ok(S::from_rational(&value.0)),
            EtaFromIndex { inner } => {
                let k = eps
                    .ceil_neg_log2()
                    .ok_or_else(|| Error::ModulusDomain("log2 of eps".into()))?
                    .max(0) as u64;
                let m = inner.index(r, k)?;
                let m = i64::try_from(m).map_err(|_| Error::Overflow("2^-m".into()))?;
                Ok(S::pow2(-m))
            }
            Tabulated { .. } => Ok(S::from_rational(&self.lookup(&exact(r)?)?)),
            _ => Err(self.wrong_role("a convexity modulus eta(r, eps)")),
        }
    }

    /// Evaluates an integer convexity modulus (`eta1`, `eta2`, `eta3`) at `(r, k)`.
    pub fn index<S: Scalar>(&self, r: &S, k: u64) -> Result<u64> {
        if *r <= S::zero() {
            return Err(Error::ModulusDomain(format!("r = {:?} must be positive", r)));
        }
        use ModulusDescriptor::*;
        match self {
            IndexFromEta { inner } => {
                let k = i64::try_from(k).map_err(|_| Error::Overflow("2^-k".into()))?;
                let eps = S::pow2(-k);
                let v = inner.eta(r, &eps)?;
                let m = v
                    .ceil_neg_log2()
                    .ok_or_else(|| Error::ModulusDomain("eta must be positive".into()))?;
                // eta <= 1 so m >= 0
                Ok(m.max(0) as u64)
            }
            IndexAffine { k_coeff, ceil_r_coeff, constant } => {
                let ceil_r = r.ceil_u64().ok_or_else(|| Error::Overflow("ceil(r)".into()))?;
                k_coeff
                    .checked_mul(k)
                    .and_then(|a| ceil_r_coeff.checked_mul(ceil_r).and_then(|b| a.checked_add(b)))
                    .and_then(|a| a.checked_add(*constant))
                    .ok_or_else(|| Error::Overflow("IndexAffine".into()))
            }
            IndexShift { inner, by } => {
                let k = k.checked_add(*by).ok_or_else(|| Error::Overflow("k + shift".into()))?;
                inner.index(r, k)
            }
            IndexOnRationals { inner } => {
                let q = exact(r)?;
                inner.index(&q, k)
            }
            Tabulated { .. } => self.lookup_u64(&BigRational::from_integer(BigInt::from(k))),
            _ => Err(self.wrong_role("an integer convexity modulus eta_i(r, k)")),
        }
    }

    /// Evaluates a map `N -> N` (rate of divergence, majorizability modulus,
    /// dyadic Cauchy modulus).
    pub fn nat(&self, n: u64) -> Result<u64> {
        use ModulusDescriptor::*;
        match self {
            ThetaLinear { a, b } => {
                let v = &a.0 * BigRational::from_integer(BigInt::from(n)) + &b.0;
                let c = v.ceil().to_integer();
                if c < BigInt::zero() {
                    return Ok(0);
                }
                c.to_u64().ok_or_else(|| Error::Overflow(format!("theta({n})")))
            }
            GammaDyadicShift { c } => {
                let v = i128::from(n) + i128::from(*c);
                u64::try_from(v.max(0)).map_err(|_| Error::Overflow("gamma(p)".into()))
            }
            OmegaAffine { slope, shift } => slope
                .checked_mul(n)
                .and_then(|v| v.checked_add(*shift))
                .ok_or_else(|| Error::Overflow(format!("omega({n})"))),
            OmegaConstant { value } => Ok(*value),
            Tabulated { .. } => self.lookup_u64(&BigRational::from_integer(BigInt::from(n))),
            _ => Err(self.wrong_role("a map N -> N")),
        }
    }

    /// Evaluates a Cauchy modulus with real precision `delta > 0`.
    pub fn gamma<S: Scalar>(&self, delta: &S) -> Result<u64> {
        if *delta <= S::zero() {
            return Err(Error::ModulusDomain(format!("delta = {:?} must be positive", delta)));
        }
        use ModulusDescriptor::*;
        match self {
            GammaZero => Ok(0),
            GammaFromDyadic { inner } => {
                let p = delta
                    .ceil_neg_log2()
                    .ok_or_else(|| Error::ModulusDomain("log2 of delta".into()))?
                    .max(0) as u64;
                inner.nat(p)
            }
            GammaGeometric { c, q, lambda_min } => {
                let delta = exact(delta)?;
                geometric_tail_index(&c.0, &q.0, &lambda_min.0, &delta)
            }
            Tabulated { .. } => self.lookup_u64(&exact(delta)?),
            _ => Err(self.wrong_role("a Cauchy modulus gamma(delta)")),
        }
    }

    fn lookup(&self, x: &BigRational) -> Result<BigRational> {
        let ModulusDescriptor::Tabulated { points } = self else {
            unreachable!("lookup on a non-tabulated descriptor")
        };
        points
            .iter()
            .filter(|(arg, _)| arg.0 <= *x)
            .max_by(|a, b| a.0.cmp(&b.0))
            .map(|(_, v)| v.0.clone())
            .ok_or_else(|| Error::ModulusDomain(format!("{x} precedes the table")))
    }

    fn lookup_u64(&self, x: &BigRational) -> Result<u64> {
        let v = self.lookup(x)?;
        crate::scalar::ceil_rational_u64(&v).ok_or_else(|| Error::Overflow("table value".into()))
    }
}

fn exact<S: Scalar>(x: &S) -> Result<BigRational> {
    x.to_rational()
        .ok_or_else(|| Error::ModulusDomain(format!("non-finite argument {:?}", x)))
}

/// Least `N` with `c (1 - lambda_min) q^(N+1) / (1 - q) <= delta`.
pub(crate) fn geometric_tail_index(
    c: &BigRational,
    q: &BigRational,
    lambda_min: &BigRational,
    delta: &BigRational,
) -> Result<u64> {
    let one = BigRational::one();
    if *q >= one || *q < BigRational::zero() {
        return Err(Error::ModulusDomain(format!("ratio q = {q} not in [0, 1)")));
    }
    let weight = c * (&one - lambda_min);
    if weight <= BigRational::zero() || q.is_zero() {
        return Ok(0);
    }
    let scale = &weight / (&one - q);
    let tail = |n: u64| -> BigRational { &scale * num_traits::pow(q.clone(), (n + 1) as usize) };
    // float estimate, then exact correction
    let est = {
        let ratio = (delta / &scale).to_f64().unwrap_or(0.0);
        let lq = q.to_f64().unwrap_or(0.5).ln();
        if ratio > 0.0 && lq < 0.0 {
            (ratio.ln() / lq - 1.0).floor().max(0.0) as u64
        } else {
            0
        }
    };
    let mut n = est.saturating_sub(2);
    while n > 0 && tail(n - 1) <= *delta {
        n -= 1;
    }
    while tail(n) > *delta {
        n += 1;
    }
    Ok(n)
}
