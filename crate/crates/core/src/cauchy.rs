//! Taylor coefficients of analytic functions by the Cauchy integral.
//!
//! Sampling `h` on the circle `|t − t₀| = r` with the trapezoid rule gives
//! the coefficients `h^{(j)}(t₀)/j!` with geometric accuracy in the number
//! of nodes; for entire `h` any radius works, small radii trade aliasing for
//! roundoff `ε·max|h|/r^j`.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Default node count on the Cauchy circle.
pub const CAUCHY_NODES: usize = 64;

/// Points `t₀ + r e^{2πij/N}` of the Cauchy circle.
pub fn circle_points(center: Complex64, radius: f64, nodes: usize) -> Vec<Complex64> {
    (0..nodes)
        .map(|j| center + Complex64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64))
        .collect()
}

/// Taylor coefficients `c_0..=c_order` from samples on [`circle_points`].
pub fn taylor_from_samples(samples: &[Complex64], radius: f64, order: usize) -> Vec<Complex64> {
    let n = samples.len();
    (0..=order)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, s) in samples.iter().enumerate() {
                let ang = -2.0 * PI * ((j * l) % n) as f64 / n as f64;
                acc += s * Complex64::from_polar(1.0, ang);
            }
            acc / (n as f64 * radius.powi(j as i32))
        })
        .collect()
}

/// Taylor coefficients of a scalar function about `center`.
pub fn taylor<F, E>(f: F, center: Complex64, radius: f64, order: usize) -> Result<Vec<Complex64>, E>
where
    F: Fn(Complex64) -> Result<Complex64, E>,
{
    let samples = circle_points(center, radius, CAUCHY_NODES)
        .into_iter()
        .map(f)
        .collect::<Result<Vec<_>, E>>()?;
    Ok(taylor_from_samples(&samples, radius, order))
}

/// `d^order f / dt^order` at `center`.
pub fn derivative<F, E>(f: F, center: Complex64, radius: f64, order: usize) -> Result<Complex64, E>
where
    F: Fn(Complex64) -> Result<Complex64, E>,
{
    let c = taylor(f, center, radius, order)?;
    let fact: f64 = (1..=order).map(|j| j as f64).product();
    Ok(c[order] * fact)
}

/// Cauchy product of two truncated Taylor series.
pub fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|j| (0..=j).map(|i| a[i] * b[j - i]).sum())
        .collect()
}

/// Coefficients of the derivative series, one order shorter.
pub fn series_deriv(a: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * j as f64)
        .collect()
}
