//! Complex special functions and the spectral-parameter algebra.
//!
//! `J_n(z)` is summed from its ascending series for moderate `|z|` and by
//! Miller's backward recurrence beyond that, normalized with the
//! generating-function identity `e^{∓iz} = J₀ + 2Σ (∓i)^m J_m`, choosing the
//! sign that makes the left side large so the normalization sum does not
//! cancel.

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest `|z|` for which [`bessel_j`] is documented to be accurate.
pub const BESSEL_MAX_ARG: f64 = 200.0;

/// Below this modulus the ascending series is used.
const SERIES_RADIUS: f64 = 10.0;

const RESCALE: f64 = 1e250;

/// Wave number `k`, refractive index `q` and asymptotic parameter `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    k: f64,
    q: f64,
    lambda: f64,
}

impl SpectralParams {
    pub fn new(k: f64, q: f64, lambda: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParams(format!("k must be positive, got {k}")));
        }
        if !(q.is_finite() && q > 0.0) || q == 1.0 {
            return Err(Error::InvalidParams(format!(
                "q must be positive and different from 1, got {q}"
            )));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "lambda must be non-negative, got {lambda}"
            )));
        }
        Ok(Self { k, q, lambda })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `k²q`, the squared interior wave number.
    pub fn k2q(&self) -> f64 {
        self.k * self.k * self.q
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.k, self.q, lambda)
    }
}

/// `λ̃ = √(λ² + k²q) − λ`, evaluated without cancellation.
pub fn lambda_tilde(p: &SpectralParams) -> f64 {
    lambda_tilde_raw(p.k2q(), p.lambda)
}

/// [`lambda_tilde`] from `k²q` and `λ` directly.
pub fn lambda_tilde_raw(k2q: f64, lambda: f64) -> f64 {
    k2q / ((lambda * lambda + k2q).sqrt() + lambda)
}

/// A complex wave vector `ξ ∈ ℂ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestVector {
    pub xi: [Complex64; 2],
}

impl TestVector {
    /// The bilinear (not Hermitian) square `ξ·ξ = ξ₁² + ξ₂²`.
    pub fn dot_self(&self) -> Complex64 {
        self.xi[0] * self.xi[0] + self.xi[1] * self.xi[1]
    }

    /// `ξ·x` for complex `x`.
    pub fn dot(&self, x: [Complex64; 2]) -> Complex64 {
        self.xi[0] * x[0] + self.xi[1] * x[1]
    }
}

/// `ξ = (−iλ, √(λ² + k²q)) = λ(−i, 1) + λ̃(0, 1)`.
pub fn xi_vector(p: &SpectralParams) -> TestVector {
    let second = p.lambda + lambda_tilde(p);
    TestVector {
        xi: [Complex64::new(0.0, -p.lambda), Complex64::new(second, 0.0)],
    }
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: Complex64) {
        self.sum.re = neumaier(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, x.im, &mut self.comp.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn neumaier(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

/// `Σ_{m≥0} (−w)^m / (m!(m+n)!)` times `first`, where `first` is the
/// already-scaled `m = 0` term.
fn ascending_series(n: u32, w: Complex64, first: Complex64) -> Complex64 {
    let mut acc = CompensatedSum::default();
    let mut term = first;
    acc.add(term);
    let wn = w.norm();
    let mut m = 1u32;
    loop {
        term *= -w / (f64::from(m) * f64::from(m + n));
        acc.add(term);
        if f64::from(m) > wn && term.norm() <= 1e-18 * acc.value().norm() {
            break;
        }
        if term.norm() == 0.0 || m > 2000 {
            break;
        }
        m += 1;
    }
    acc.value()
}

/// `(z/2)^n / n!` without intermediate overflow.
fn leading_power(n: u32, z: Complex64) -> Complex64 {
    (1..=n).fold(Complex64::new(1.0, 0.0), |acc, j| {
        acc * z / (2.0 * f64::from(j))
    })
}

fn series_j(n: u32, z: Complex64) -> Complex64 {
    ascending_series(n, z * z / 4.0, leading_power(n, z))
}

fn miller_j(n: u32, z: Complex64) -> Complex64 {
    let r = z.norm();
    let top = f64::from(n).max(r);
    let mut start = (top + 50.0 + 10.0 * r.cbrt()).ceil() as u32;
    start += start % 2;

    // e^{-iz} when Im z >= 0, e^{iz} otherwise; both have modulus >= 1.
    let unit = if z.im >= 0.0 {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(0.0, 1.0)
    };
    let mut phase_pow = unit.powu(start);

    let mut next = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1e-30, 0.0);
    let mut saved = if start == n {
        cur
    } else {
        Complex64::new(0.0, 0.0)
    };
    let mut norm = cur * phase_pow * 2.0;
    let inv_unit = unit.inv();
    for m in (1..=start).rev() {
        let prev = cur * (2.0 * f64::from(m)) / z - next;
        next = cur;
        cur = prev;
        phase_pow *= inv_unit;
        let idx = m - 1;
        if idx == n {
            saved = cur;
        }
        if idx > 0 {
            norm += cur * phase_pow * 2.0;
        } else {
            norm += cur;
        }
        if cur.norm() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            norm /= RESCALE;
            saved /= RESCALE;
        }
    }
    let target = (unit * z).exp();
    saved * target / norm
}

/// Bessel function of the first kind `J_n(z)` for integer order and complex
/// argument, accurate for `|z| ≤ 200`.
pub fn bessel_j(n: i32, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if r.is_nan() || r > BESSEL_MAX_ARG {
        return Err(Error::AccuracyEnvelopeExceeded {
            modulus: r,
            limit: BESSEL_MAX_ARG,
        });
    }
    let m = n.unsigned_abs();
    let value = if r <= SERIES_RADIUS {
        series_j(m, z)
    } else {
        miller_j(m, z)
    };
    Ok(if n < 0 && m % 2 == 1 { -value } else { value })
}

/// `J_n′(z) = (J_{n−1}(z) − J_{n+1}(z)) / 2`.
pub fn bessel_j_deriv(n: i32, z: Complex64) -> Result<Complex64> {
    Ok((bessel_j(n - 1, z)? - bessel_j(n + 1, z)?) * 0.5)
}

/// The entire function `G_n(w) = Σ_{m≥0} (−1)^m w^m / (m!(m+n)!)`, so that
/// `J_n(z) = (z/2)^n G_n(z²/4)` with no branch ambiguity.
///
/// Errors only when `2√|w|` leaves the Bessel accuracy envelope.
pub fn bessel_g(n: u32, w: Complex64) -> Result<Complex64> {
    let wn = w.norm();
    if wn <= 0.25 * SERIES_RADIUS * SERIES_RADIUS {
        let first = (1..=n).fold(Complex64::new(1.0, 0.0), |acc, j| acc / f64::from(j));
        return Ok(ascending_series(n, w, first));
    }
    // J_n(2s)/s^n is even in s, so either square root works.
    let s = w.sqrt();
    let j = bessel_j(n as i32, s * 2.0)?;
    Ok(j / s.powu(n))
}

/// First positive zero of `J_n` on the real axis beyond `after`, found by
/// a sign scan with step `step` and bisection refinement.
pub fn bessel_j_real_zero(n: i32, after: f64, step: f64) -> Result<f64> {
    let f = |x: f64| bessel_j(n, Complex64::new(x, 0.0)).map(|v| v.re);
    let mut a = after;
    let mut fa = f(a)?;
    loop {
        let b = a + step;
        if b > BESSEL_MAX_ARG {
            return Err(Error::AccuracyEnvelopeExceeded {
                modulus: b,
                limit: BESSEL_MAX_ARG,
            });
        }
        let fb = f(b)?;
        if fa == 0.0 {
            return Ok(a);
        }
        if fa * fb < 0.0 {
            return bisect(f, a, b, 1e-15);
        }
        a = b;
        fa = fb;
    }
}

/// Bisection on a bracketing interval; stops when the bracket is below
/// `xtol` (relative to the magnitude of the endpoints).
pub(crate) fn bisect<F>(f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= xtol * (1.0 + mid.abs()) {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}
