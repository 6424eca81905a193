//! Leading and next-order constants of `I(λ)`, the corner constants and the
//! disk closed forms.
//!
//! With `f = (k²q/2)(x₂′ + i x₁′)v + V′·(i, 1)`, a simple saddle `t₀` and
//! `sq = (−g″(t₀))^{1/2}` on the contour branch:
//!
//! * `C1 = k²(q−1) √(2π)/sq · u(x(t₀)) x₂′(t₀)`
//! * `C2 = 2√π/(2^{3/2} sq³) · [f″ − f′g‴/g″ − ik²q g″ x₂′ V·(i, 1)]`

use crate::cauchy::{
    circle_points, derivative, series_deriv, series_mul, taylor_from_samples, CAUCHY_NODES,
};
use crate::curves::{CornerDomain, TrigCurve};
use crate::czmath::{bessel_g, bessel_j, bessel_j_deriv, bisect, lambda_tilde_raw};
use crate::saddle::{
    branch_sqrt_neg_g2, build_contour, find_saddles, level_region, Branch, ContourOptions,
    ContourPath, Crossing, GridParams, LevelSetGrid, SaddlePoint, SearchRect,
};
use crate::waves::WaveModel;
use crate::{Complex64, Error, Execution, Result, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `f(t₀)`, `f′(t₀)`, `f″(t₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FJet {
    pub f0: Complex64,
    pub f1: Complex64,
    pub f2: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ScattersByC1,
    ScattersByC2,
    Inconclusive,
}

impl Verdict {
    pub fn scatters(self) -> bool {
        !matches!(self, Verdict::Inconclusive)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchInfo {
    pub omega: f64,
    pub omega0: f64,
    pub crossing: Crossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymReport {
    #[serde(rename = "C1")]
    pub c1: Complex64,
    #[serde(rename = "C2")]
    pub c2: Option<Complex64>,
    pub order: f64,
    pub g0: Complex64,
    pub verdict: Verdict,
    pub branch: BranchInfo,
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q.is_finite()) || q == 1.0 {
        return Err(Error::InvalidParams(format!(
            "refractive index must be positive and != 1, got {q}"
        )));
    }
    Ok(())
}

/// Taylor data of `f` about `t₀` by Cauchy sampling on a circle of radius `r`.
pub fn f_jet(
    curve: &TrigCurve,
    wave: &WaveModel,
    q: f64,
    s: &SaddlePoint,
    r_cauchy: f64,
) -> Result<FJet> {
    let k = wave.k();
    let k2q = k * k * q;
    let pts = circle_points(s.t0, r_cauchy, CAUCHY_NODES);
    let mut v = Vec::with_capacity(pts.len());
    let mut v1 = Vec::with_capacity(pts.len());
    let mut v2 = Vec::with_capacity(pts.len());
    for t in &pts {
        let w = wave.sample(curve.point(*t))?;
        v.push(w.v);
        v1.push(w.grad[0]);
        v2.push(w.grad[1]);
    }
    let v = taylor_from_samples(&v, r_cauchy, 2);
    let dv1 = series_deriv(&taylor_from_samples(&v1, r_cauchy, 3));
    let dv2 = series_deriv(&taylor_from_samples(&v2, r_cauchy, 3));
    // x′ series is exact: x^{(j+1)}(t₀)/j!.
    let jet = curve.eval_jet(s.t0, 3);
    let xs: Vec<Complex64> = (0..3)
        .map(|j| (jet.x[j + 1][1] + I * jet.x[j + 1][0]) / [1.0, 1.0, 2.0][j])
        .collect();
    let prod = series_mul(&xs, &v);
    let f: Vec<Complex64> = (0..3)
        .map(|j| prod[j] * (k2q / 2.0) + I * dv1[j] + dv2[j])
        .collect();
    Ok(FJet {
        f0: f[0],
        f1: f[1],
        f2: f[2] * 2.0,
    })
}

/// `f(t₀) = k²(q−1) u(x(t₀)) x₂′(t₀)`.
pub fn f0_closed_form(
    curve: &TrigCurve,
    wave: &WaveModel,
    q: f64,
    t0: Complex64,
) -> Result<Complex64> {
    let k = wave.k();
    let jet = curve.eval_jet(t0, 1);
    Ok(wave.value(jet.x[0])? * jet.x[1][1] * (k * k * (q - 1.0)))
}

/// Zero-test tolerance `10⁻⁸ k²|q−1| max(1, |u(x(t₀))|)`.
pub fn constant_tolerance(
    curve: &TrigCurve,
    wave: &WaveModel,
    q: f64,
    s: &SaddlePoint,
) -> Result<f64> {
    let k = wave.k();
    let u = wave.value(curve.point(s.t0))?;
    Ok(1e-8 * k * k * (q - 1.0).abs() * u.norm().max(1.0))
}

pub fn c1(
    curve: &TrigCurve,
    wave: &WaveModel,
    q: f64,
    s: &SaddlePoint,
    branch: &Branch,
) -> Result<Complex64> {
    check_q(q)?;
    let pre = (2.0 * PI).sqrt() / branch.sqrt;
    let closed = pre * f0_closed_form(curve, wave, q, s.t0)?;
    let via_f = pre * f_jet(curve, wave, q, s, 0.1)?.f0;
    let scale = constant_tolerance(curve, wave, q, s)?;
    if (closed - via_f).norm() > 1e-6 * closed.norm().max(scale) {
        log::warn!("C1 closed form {closed} disagrees with sqrt(2pi)/sq * f(t0) = {via_f}");
    }
    Ok(closed)
}

pub fn c2(
    curve: &TrigCurve,
    wave: &WaveModel,
    q: f64,
    s: &SaddlePoint,
    branch: &Branch,
    r_cauchy: f64,
) -> Result<Complex64> {
    check_q(q)?;
    if !s.simple {
        return Err(Error::DegenerateSaddle(s.t0));
    }
    let k = wave.k();
    let fj = f_jet(curve, wave, q, s, r_cauchy)?;
    let jet = curve.eval_jet(s.t0, 1);
    let grad = wave.gradient(jet.x[0])?;
    let bracket = fj.f2
        - fj.f1 * s.g3 / s.g2
        - I * (k * k * q) * s.g2 * jet.x[1][1] * (I * grad[0] + grad[1]);
    let sq3 = branch.sqrt * branch.sqrt * branch.sqrt;
    Ok(bracket * (2.0 * PI.sqrt()) / (2f64.powf(1.5) * sq3))
}

/// Options of the saddle/contour/constant pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub rect: SearchRect,
    pub grid: GridParams,
    pub contour: ContourOptions,
    pub r_cauchy: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        let contour = ContourOptions::default();
        AnalysisOptions {
            rect: SearchRect::default(),
            grid: GridParams::default(),
            contour,
            r_cauchy: contour.rho.min(0.1),
        }
    }
}

/// Everything produced by [`analyze`].
#[derive(Debug, Clone)]
pub struct Analysis {
    pub saddle: SaddlePoint,
    pub grid: LevelSetGrid,
    pub path: ContourPath,
    pub branch: Branch,
    pub report: AsymReport,
}

/// The first simple saddle (ascending `Re g(t₀)`) admitting a contour.
pub fn select_saddle(
    curve: &TrigCurve,
    opts: &AnalysisOptions,
    exec: Execution,
) -> Result<(SaddlePoint, LevelSetGrid, ContourPath)> {
    let saddles = find_saddles(curve, opts.rect, 1e-12)?;
    if saddles.is_empty() {
        return Err(Error::NoSaddle);
    }
    let mut last = None;
    for s in saddles {
        if !s.simple {
            last = Some(Error::DegenerateSaddle(s.t0));
            continue;
        }
        let grid = level_region(curve, &s, opts.grid, exec)?;
        match build_contour(curve, &s, &grid, opts.contour) {
            Ok(path) => return Ok((s, grid, path)),
            Err(e) => {
                log::info!("saddle {} rejected: {e}", s.t0);
                last = Some(e);
            }
        }
    }
    Err(last.unwrap_or(Error::NoSaddle))
}

/// Saddle search, contour construction, branch and constants.
pub fn analyze(
    curve: &TrigCurve,
    wave: &WaveModel,
    q: f64,
    opts: &AnalysisOptions,
    exec: Execution,
) -> Result<Analysis> {
    check_q(q)?;
    wave.validate()?;
    let (saddle, grid, path) = select_saddle(curve, opts, exec)?;
    let branch = branch_sqrt_neg_g2(&saddle, path.omega)?;
    let tol = constant_tolerance(curve, wave, q, &saddle)?;
    let c1v = c1(curve, wave, q, &saddle, &branch)?;
    let (c2v, order, verdict) = if c1v.norm() > tol {
        (None, 1.5, Verdict::ScattersByC1)
    } else {
        let c2v = c2(curve, wave, q, &saddle, &branch, opts.r_cauchy)?;
        let verdict = if c2v.norm() > tol {
            Verdict::ScattersByC2
        } else {
            Verdict::Inconclusive
        };
        (Some(c2v), 2.5, verdict)
    };
    let report = AsymReport {
        c1: c1v,
        c2: c2v,
        order,
        g0: saddle.g0,
        verdict,
        branch: BranchInfo {
            omega: branch.omega,
            omega0: branch.omega0,
            crossing: path.crossing,
        },
    };
    Ok(Analysis {
        saddle,
        grid,
        path,
        branch,
        report,
    })
}

/// Root `μ > 1` of `3μ² − 2(n−2)μ + 3 = 0`.
pub fn mu_n(n: i32) -> Result<f64> {
    match n {
        5 => Err(Error::DegenerateCircle),
        n if n < 5 => Err(Error::NoRealSolution(n)),
        n => {
            let nf = n as f64;
            Ok((nf - 2.0 + ((nf - 5.0) * (nf + 1.0)).sqrt()) / 3.0)
        }
    }
}

/// `a⁴ − (2/3)(n−2)a²b² + b⁴`.
pub fn ellipse_bracket(a: f64, b: f64, n: i32) -> f64 {
    a.powi(4) - 2.0 / 3.0 * (n as f64 - 2.0) * a * a * b * b + b.powi(4)
}

/// `C2` for the ellipse and `h_n` at a root of `J_n(k√(a²+b²))`.
pub fn ellipse_c2_closed_form(a: f64, b: f64, k: f64, q: f64, n: i32) -> Result<Complex64> {
    let r2 = a * a + b * b;
    let pre = 3.0 * (2.0 * PI).powf(1.5) * (q - 1.0) * k.powi(3) * a * b
        / (2.0 * r2.powf(1.5) * (a * a - b * b).powf(1.25));
    let decay = (-(n as f64) * (b * b / (a * a)).atanh()).exp();
    Ok(I.powi(n)
        * pre
        * ellipse_bracket(a, b, n)
        * decay
        * bessel_j(n + 1, Complex64::from(k * r2.sqrt()))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerConstants {
    pub c1_seg: Complex64,
    pub c2_seg: Complex64,
    #[serde(rename = "C")]
    pub c: Complex64,
}

/// Radius of the Cauchy circles used for the corner second partials.
const CORNER_RADIUS: f64 = 0.5;

pub fn corner_constants(
    corner: &CornerDomain,
    wave: &WaveModel,
    k: f64,
    q: f64,
) -> Result<CornerConstants> {
    check_q(q)?;
    let m = corner.slope();
    let z = Complex64::new(0.0, 0.0);
    let u0 = wave.value([z, z])?;
    let u11 = derivative(|t| wave.value([t, z]), z, CORNER_RADIUS, 2)?;
    let u22 = derivative(|t| wave.value([z, t]), z, CORNER_RADIUS, 2)?;
    let u12 = derivative(|t| Ok(wave.gradient([t, z])?[1]), z, CORNER_RADIUS, 1)?;
    let seg = |m: f64| {
        let d = Complex64::new(1.0, -m);
        ((I - m) * (k * k * q / 2.0) * u0 + I * u11 + d * u12 - m * u22) / d
    };
    let (c1_seg, c2_seg) = (seg(m), seg(-m));
    let c = Complex64::from(2.0 * k * k * m / (1.0 + m * m) * (q - 1.0)) * u0;
    let identity = (c2_seg - c1_seg) - (k * k * q * u0 + u11 + u22) * (2.0 * m / (1.0 + m * m));
    if identity.norm() > 1e-8 * (1.0 + c2_seg.norm() + c1_seg.norm()) {
        log::warn!("corner identity residual {identity}");
    }
    Ok(CornerConstants { c1_seg, c2_seg, c })
}

/// `𝓘(λ)` for the unit disk and the plane wave of angle `α`: `π G_1(c)`.
pub fn disk_plane_closed_form(lambda: f64, alpha: f64, k: f64, q: f64) -> Result<Complex64> {
    check_q(q)?;
    Ok(PI * bessel_g(1, disk_plane_argument(lambda, alpha, k, q))?)
}

/// `c = −(ik/2)e^{iα}λ + λλ̃/2 + k²/4 + (λ̃k/2) sin α + λ̃²/4`.
pub fn disk_plane_argument(lambda: f64, alpha: f64, k: f64, q: f64) -> Complex64 {
    let lt = lambda_tilde_raw(k * k * q, lambda);
    -(I * k / 2.0) * Complex64::from_polar(1.0, alpha) * lambda
        + lambda * lt / 2.0
        + k * k / 4.0
        + lt * k / 2.0 * alpha.sin()
        + lt * lt / 4.0
}

/// `C(k) = J_n′(k)J_n(k√q) − √q J_n(k)J_n′(k√q)`.
pub fn wronskian(n: u32, k: f64, q: f64) -> Result<f64> {
    let n = n as i32;
    let (a, b) = (Complex64::from(k), Complex64::from(k * q.sqrt()));
    Ok((bessel_j_deriv(n, a)? * bessel_j(n, b)?
        - q.sqrt() * bessel_j(n, a)? * bessel_j_deriv(n, b)?)
    .re)
}

/// `I(λ)` on the unit disk for `h_n`: `4π² C k (−iλ̃/(k√q))ⁿ`.
pub fn disk_herglotz_closed_form(lambda: f64, n: u32, k: f64, q: f64) -> Result<Complex64> {
    check_q(q)?;
    let lt = lambda_tilde_raw(k * k * q, lambda);
    let c = wronskian(n, k, q)?;
    Ok(4.0 * PI * PI * c * k * (-I * lt / (k * q.sqrt())).powu(n))
}

/// Zeros of the Wronskian in `(0, k_max]`: step-0.01 sign scan, bisection to 10⁻¹⁰.
pub fn nonscattering_wavenumbers(n: u32, q: f64, k_max: f64) -> Result<Vec<f64>> {
    check_q(q)?;
    if !(k_max > 0.0 && k_max <= 100.0) {
        return Err(Error::InvalidParams(format!(
            "k_max must lie in (0, 100], got {k_max}"
        )));
    }
    let steps = ((k_max - 0.01) / 0.01).floor() as usize;
    let mut out = Vec::new();
    let mut prev_k = 0.01;
    let mut prev = wronskian(n, prev_k, q)?;
    for i in 1..=steps {
        let k = 0.01 + 0.01 * i as f64;
        let cur = wronskian(n, k, q)?;
        if cur == 0.0 {
            out.push(k);
        } else if prev != 0.0 && prev.signum() != cur.signum() {
            out.push(bisect(|k| wronskian(n, k, q), prev_k, k, 1e-10)?);
        }
        prev_k = k;
        prev = cur;
    }
    Ok(out)
}

/// `(1/2πi)∮_{|z|=1} z^{n−1} e^{az−b/z} dz` by the 512-node trapezoid rule, and
/// its closed form `(−b)ⁿ G_n(ab)` (`n ≥ 0`) or `a^{|n|} G_{|n|}(ab)` (`n ≤ 0`).
pub fn bessel_contour_identity(
    n: i32,
    a: Complex64,
    b: Complex64,
) -> Result<(Complex64, Complex64)> {
    const NODES: usize = 512;
    let mut lhs = Complex64::new(0.0, 0.0);
    for j in 0..NODES {
        let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / NODES as f64);
        lhs += z.powi(n) * (a * z - b / z).exp();
    }
    lhs /= NODES as f64;
    let m = n.unsigned_abs();
    let g = bessel_g(m, a * b)?;
    let rhs = if n >= 0 {
        (-b).powu(m) * g
    } else {
        a.powu(m) * g
    };
    Ok((lhs, rhs))
}
