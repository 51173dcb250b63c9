//! Poincaré disk model. Points are complex numbers `z` with `|z| < 1`.

use num_complex::Complex;
use rand::Rng;

use super::Point;
use crate::scalar::Real;

fn to_complex<T: Real>(p: &Point<T>) -> Complex<T> {
    Complex::new(p.coords[0], p.coords[1])
}

fn from_complex<T: Real>(z: Complex<T>) -> Point<T> {
    Point::new(vec![z.re, z.im])
}

pub(super) fn inside<T: Real>(p: &Point<T>) -> bool {
    p.norm_sqr() < T::one() - T::disk_margin()
}

/// Pulls points that drifted onto the margin back inside.
fn renormalize<T: Real>(z: Complex<T>) -> Complex<T> {
    let limit = T::one() - T::disk_margin();
    let n = z.norm_sqr();
    if n < limit {
        return z;
    }
    let two = T::one() + T::one();
    let target = T::one() - two * T::disk_margin();
    z * (target / n).sqrt()
}

/// The Möbius map `z -> (z - a) / (1 - conj(a) z)`, an isometry sending `a` to 0.
pub fn mobius_translate<T: Real>(a: &Point<T>, z: &Point<T>) -> Point<T> {
    from_complex(renormalize(translate(to_complex(a), to_complex(z))))
}

fn translate<T: Real>(a: Complex<T>, z: Complex<T>) -> Complex<T> {
    (z - a) / (Complex::new(T::one(), T::zero()) - a.conj() * z)
}

fn untranslate<T: Real>(a: Complex<T>, w: Complex<T>) -> Complex<T> {
    (w + a) / (Complex::new(T::one(), T::zero()) + a.conj() * w)
}

/// Hyperbolic rotation by `angle` about `center`.
pub fn mobius_rotate_about<T: Real>(center: &Point<T>, z: &Point<T>, angle: T) -> Point<T> {
    let c = to_complex(center);
    let w = translate(c, to_complex(z));
    let rot = Complex::new(angle.cos(), angle.sin());
    from_complex(renormalize(untranslate(c, w * rot)))
}

/// `d(x, y) = 2 asinh(|x - y| / sqrt((1 - |x|^2)(1 - |y|^2)))`.
pub(super) fn dist<T: Real>(x: &Point<T>, y: &Point<T>) -> T {
    let (zx, zy) = (to_complex(x), to_complex(y));
    let diff = (zx - zy).norm();
    if diff == T::zero() {
        return T::zero();
    }
    let denom = ((T::one() - zx.norm_sqr()) * (T::one() - zy.norm_sqr())).sqrt();
    let two = T::one() + T::one();
    two * (diff / denom).asinh()
}

/// Translate `x` to the origin, move radially, translate back.
pub(super) fn combine<T: Real>(x: &Point<T>, y: &Point<T>, lambda: T) -> Point<T> {
    let d = dist(x, y);
    if d == T::zero() {
        return x.clone();
    }
    let (zx, zy) = (to_complex(x), to_complex(y));
    let w = translate(zx, zy);
    let wn = w.norm();
    if wn == T::zero() {
        return x.clone();
    }
    let two = T::one() + T::one();
    let m = w * ((lambda * d / two).tanh() / wn);
    from_complex(renormalize(untranslate(zx, m)))
}

/// Point at hyperbolic distance at most `radius` from the origin, uniform in
/// hyperbolic radius and angle.
pub(super) fn sample_ball<T: Real, R: Rng + ?Sized>(rng: &mut R, radius: T) -> Point<T> {
    let rho = rng.random::<f64>() * radius.to_f64_lossy();
    let phi = rng.random::<f64>() * std::f64::consts::TAU;
    let e = (rho / 2.0).tanh();
    let z = Complex::new(
        T::from_f64(e * phi.cos()).unwrap_or_else(T::zero),
        T::from_f64(e * phi.sin()).unwrap_or_else(T::zero),
    );
    from_complex(renormalize(z))
}
