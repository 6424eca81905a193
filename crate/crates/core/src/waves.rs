//! Entire incident waves evaluated at complex points of ℂ².
//!
//! Circular harmonics use `h_n(x) = 2π iⁿ (k/2)ⁿ (x₁ + i x₂)ⁿ G_n(k²(x₁²+x₂²)/4)`
//! (with `x₁ − i x₂` for negative orders), which is free of branch cuts.

use crate::czmath::bessel_g;
use crate::{Complex64, Error, Result, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest Herglotz truncation order.
pub const MAX_HERGLOTZ_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WaveModel {
    /// `e^{ik(x₁ cos α + x₂ sin α)}`.
    Plane { k: f64, alpha: f64 },
    /// `Σ c_j e^{ik(x₁ cos α_j + x₂ sin α_j)}` with terms `(c_j, α_j)`.
    Combo {
        k: f64,
        terms: Vec<(Complex64, f64)>,
    },
    /// Herglotz wave with density `e^{inα}`.
    Harmonic { k: f64, n: i32 },
    /// `Σ_{|n|≤N} ψ_n h_n`; `psi[j]` multiplies `h_{j−N}`, length `2N+1`.
    Herglotz { k: f64, psi: Vec<Complex64> },
}

/// Value and gradient of a wave at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub v: Complex64,
    pub grad: [Complex64; 2],
}

impl WaveModel {
    pub fn plane(k: f64, alpha: f64) -> Self {
        WaveModel::Plane { k, alpha }
    }

    pub fn harmonic(k: f64, n: i32) -> Self {
        WaveModel::Harmonic { k, n }
    }

    pub fn k(&self) -> f64 {
        match self {
            WaveModel::Plane { k, .. }
            | WaveModel::Combo { k, .. }
            | WaveModel::Harmonic { k, .. }
            | WaveModel::Herglotz { k, .. } => *k,
        }
    }

    /// Returns the same wave with every coefficient multiplied by `s`.
    pub fn scaled(&self, s: Complex64) -> Self {
        match self {
            WaveModel::Plane { k, alpha } => WaveModel::Combo {
                k: *k,
                terms: vec![(s, *alpha)],
            },
            WaveModel::Combo { k, terms } => WaveModel::Combo {
                k: *k,
                terms: terms.iter().map(|(c, a)| (c * s, *a)).collect(),
            },
            WaveModel::Harmonic { k, n } => {
                let big_n = n.unsigned_abs() as usize;
                let mut psi = vec![Complex64::new(0.0, 0.0); 2 * big_n + 1];
                psi[(*n + big_n as i32) as usize] = s;
                WaveModel::Herglotz { k: *k, psi }
            }
            WaveModel::Herglotz { k, psi } => WaveModel::Herglotz {
                k: *k,
                psi: psi.iter().map(|c| c * s).collect(),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "wave number must be positive, got {k}"
            )));
        }
        if let WaveModel::Herglotz { psi, .. } = self {
            if psi.len() % 2 == 0 || psi.len() > 2 * MAX_HERGLOTZ_ORDER + 1 {
                return Err(Error::InvalidParams(format!(
                    "Herglotz coefficient list must have odd length <= {}, got {}",
                    2 * MAX_HERGLOTZ_ORDER + 1,
                    psi.len()
                )));
            }
        }
        Ok(())
    }

    pub fn value(&self, x: [Complex64; 2]) -> Result<Complex64> {
        Ok(self.sample(x)?.v)
    }

    pub fn gradient(&self, x: [Complex64; 2]) -> Result<[Complex64; 2]> {
        Ok(self.sample(x)?.grad)
    }

    /// Value and gradient together.
    pub fn sample(&self, x: [Complex64; 2]) -> Result<WaveSample> {
        match self {
            WaveModel::Plane { k, alpha } => Ok(plane(*k, *alpha, Complex64::from(1.0), x)),
            WaveModel::Combo { k, terms } => {
                let mut acc = WaveSample::zero();
                for (c, alpha) in terms {
                    acc.add(plane(*k, *alpha, *c, x));
                }
                Ok(acc)
            }
            WaveModel::Harmonic { k, n } => harmonic(*k, *n, Complex64::from(1.0), x),
            WaveModel::Herglotz { k, psi } => {
                let big_n = (psi.len() / 2) as i32;
                let mut acc = WaveSample::zero();
                for (j, c) in psi.iter().enumerate() {
                    if *c != Complex64::new(0.0, 0.0) {
                        acc.add(harmonic(*k, j as i32 - big_n, *c, x)?);
                    }
                }
                Ok(acc)
            }
        }
    }
}

impl WaveSample {
    fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        WaveSample { v: z, grad: [z, z] }
    }

    fn add(&mut self, o: WaveSample) {
        self.v += o.v;
        self.grad[0] += o.grad[0];
        self.grad[1] += o.grad[1];
    }
}

fn plane(k: f64, alpha: f64, c: Complex64, x: [Complex64; 2]) -> WaveSample {
    let (s, co) = alpha.sin_cos();
    let v = c * (I * k * (x[0] * co + x[1] * s)).exp();
    WaveSample {
        v,
        grad: [I * k * co * v, I * k * s * v],
    }
}

fn harmonic(k: f64, n: i32, c: Complex64, x: [Complex64; 2]) -> Result<WaveSample> {
    let m = n.unsigned_abs();
    // Negative orders use the conjugate variable x₁ − i x₂.
    let sigma = if n >= 0 { I } else { -I };
    let z = x[0] + sigma * x[1];
    let w = (x[0] * x[0] + x[1] * x[1]) * (k * k / 4.0);
    let gm = bessel_g(m, w)?;
    let gm1 = bessel_g(m + 1, w)?;
    let pref = c * 2.0 * PI * I.powu(m) * (k / 2.0).powi(m as i32);
    let zm = z.powu(m);
    let zm1 = if m == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        z.powu(m - 1) * m as f64
    };
    let tail = zm * gm1 * (k * k / 2.0);
    Ok(WaveSample {
        v: pref * zm * gm,
        grad: [
            pref * (zm1 * gm - tail * x[0]),
            pref * (sigma * zm1 * gm - tail * x[1]),
        ],
    })
}
