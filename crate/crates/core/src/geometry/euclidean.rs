use rand::Rng;

use super::Point;
use crate::scalar::Real;

pub(super) fn dist<T: Real>(x: &Point<T>, y: &Point<T>) -> T {
    x.coords
        .iter()
        .zip(&y.coords)
        .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b))
        .sqrt()
}

pub(super) fn combine<T: Real>(x: &Point<T>, y: &Point<T>, lambda: T) -> Point<T> {
    let mu = T::one() - lambda;
    Point::new(x.coords.iter().zip(&y.coords).map(|(&a, &b)| mu * a + lambda * b).collect())
}

/// Uniform point of the ball of the given radius about the origin.
pub(super) fn sample_ball<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: T) -> Point<T> {
    // direction by rejection from the cube, radius by inverse CDF
    let dir = loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            break v.into_iter().map(|c| c / n).collect::<Vec<_>>();
        }
    };
    let u: f64 = rng.random();
    let rho = radius.to_f64_lossy() * u.powf(1.0 / dim as f64);
    Point::new(dir.into_iter().map(|c| T::from_f64(c * rho).unwrap_or_else(T::zero)).collect())
}
