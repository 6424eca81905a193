//! Numerical laboratory for Helmholtz nonscattering diagnostics.
//!
//! The crate evaluates the boundary integral `I(λ)` obtained by testing the
//! nonscattering identity against complex plane waves, locates the complex
//! saddle points of the phase `g(t) = x₁(t) + i x₂(t)`, builds admissible
//! descent contours through them and computes the first- and second-order
//! asymptotic constants `C1`, `C2`. Every closed-form prediction can be
//! checked against direct quadrature.
//!
//! Module map:
//!
//! * [`czmath`]: Bessel functions of complex argument and the spectral
//!   parameters `k`, `q`, `λ`, `λ̃`.
//! * [`curves`]: trigonometric-polynomial boundaries and the corner model.
//! * [`waves`]: entire incident waves evaluated at complex points.
//! * [`saddle`]: saddle search, level-set grids, contour construction and
//!   the square-root branch rule.
//! * [`asymptotics`]: `f`-jets, `C1`, `C2`, corner and disk closed forms.
//! * [`quad`]: boundary, contour and area quadratures, λ-sweeps and decay
//!   fits.

pub mod asymptotics;
pub mod cauchy;
pub mod curves;
pub mod czmath;
mod error;
pub mod exec;
pub mod gauss;
pub mod quad;
pub mod saddle;
pub mod waves;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;

/// Imaginary unit.
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
