//! Direct evaluation of the boundary integral
//!
//! `I(λ) = ∫ [(x₂′, −x₁′)·V + iλg′v + iλ̃x₁′v] e^{λg + iλ̃x₂} dt`
//!
//! on the real interval, on shifted lines `Im t = s`, along validated
//! contours and on the two sides of a corner, plus the area-integral oracle,
//! λ-sweeps and decay fitting.
//!
//! A normalization `g₀` is folded into the exponent, so the returned value is
//! `e^{−λg₀} I(λ)`.

use crate::cauchy::derivative;
use crate::curves::{corner_segments, CornerDomain, TrigCurve};
use crate::czmath::lambda_tilde_raw;
use crate::gauss::gauss_legendre;
use crate::saddle::ContourPath;
use crate::waves::WaveModel;
use crate::{Complex64, Error, Execution, Result, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Node cap of the periodic trapezoid rule.
pub const MAX_TRAPEZOID_NODES: usize = 65536;

const MAX_PANEL_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadMode {
    PeriodicTrapezoid,
    PanelGauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    pub mode: QuadMode,
    /// Starting trapezoid nodes, or nodes per Gauss panel.
    pub nodes: usize,
    pub tol: f64,
    pub normalization: Option<Complex64>,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            mode: QuadMode::PeriodicTrapezoid,
            nodes: 64,
            tol: 1e-12,
            normalization: None,
        }
    }
}

impl QuadOptions {
    pub fn panel() -> Self {
        QuadOptions {
            mode: QuadMode::PanelGauss,
            nodes: 32,
            ..Self::default()
        }
    }

    pub fn with_normalization(mut self, g0: Complex64) -> Self {
        self.normalization = Some(g0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1e-14..=1e-4).contains(&self.tol) {
            return Err(Error::InvalidParams(format!(
                "tolerance {} outside [1e-14, 1e-4]",
                self.tol
            )));
        }
        if !(8..=4096).contains(&self.nodes) {
            return Err(Error::InvalidParams(format!(
                "node count {} outside [8, 4096]",
                self.nodes
            )));
        }
        Ok(())
    }
}

/// Integration path for a closed curve.
#[derive(Debug, Clone, Copy)]
pub enum PathSpec<'a> {
    RealInterval,
    /// `t = r + is`, `r ∈ [−π, π]`; equal to the real interval by periodicity.
    ShiftedLine {
        s: f64,
    },
    /// Shifted line minimizing the integrand's L1 mass, see [`min_mass_shift`].
    AutoShift,
    Contour(&'a ContourPath),
}

#[derive(Debug, Clone, Copy)]
pub enum Domain<'a> {
    Curve(&'a TrigCurve),
    Corner(&'a CornerDomain),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub nodes_used: usize,
    /// `∫ |integrand| |dt|`, the cancellation scale of `value`.
    pub mass: f64,
}

/// Local data of a boundary point needed by the integrands.
struct Point {
    x: [Complex64; 2],
    xp: [Complex64; 2],
    g: Complex64,
    gp: Complex64,
}

struct Integrand<'a> {
    wave: &'a WaveModel,
    lambda: f64,
    lt: f64,
    g0: Complex64,
    normalized: bool,
}

impl<'a> Integrand<'a> {
    fn new(wave: &'a WaveModel, q: f64, lambda: f64, opts: &QuadOptions) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) || q == 1.0 {
            return Err(Error::InvalidParams(format!(
                "refractive index must be positive and != 1, got {q}"
            )));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        wave.validate()?;
        opts.validate()?;
        let k = wave.k();
        Ok(Integrand {
            wave,
            lambda,
            lt: lambda_tilde_raw(k * k * q, lambda),
            g0: opts.normalization.unwrap_or_default(),
            normalized: opts.normalization.is_some(),
        })
    }

    fn exponential(&self, t: Complex64, p: &Point) -> Result<Complex64> {
        let e = (p.g - self.g0) * self.lambda + I * self.lt * p.x[1];
        if (!self.normalized && (self.lambda * p.g.re).abs() > 700.0) || e.re > 700.0 {
            return Err(Error::OverflowRisk {
                t,
                exponent: e.re.max(self.lambda * p.g.re),
            });
        }
        Ok(e.exp())
    }

    fn direct(&self, t: Complex64, p: &Point) -> Result<Complex64> {
        let w = self.wave.sample(p.x)?;
        let front = p.xp[1] * w.grad[0] - p.xp[0] * w.grad[1]
            + I * self.lambda * p.gp * w.v
            + I * self.lt * p.xp[0] * w.v;
        Ok(front * self.exponential(t, p)?)
    }
}

fn curve_point(curve: &TrigCurve, t: Complex64) -> Point {
    let jet = curve.eval_jet(t, 1);
    Point {
        x: jet.x[0],
        xp: jet.x[1],
        g: jet.g[0],
        gp: jet.g[1],
    }
}

/// Periodic trapezoid on `Im t = s` with node doubling.
fn trapezoid<F>(f: F, s: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let node = |j: usize, n: usize| Complex64::new(-PI + 2.0 * PI * j as f64 / n as f64, s);
    let mut n = opts.nodes;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for j in 0..n {
        let v = f(node(j, n))?;
        sum += v;
        abs_sum += v.norm();
    }
    let mut prev = sum * (2.0 * PI / n as f64);
    loop {
        if 2 * n > MAX_TRAPEZOID_NODES {
            return Err(Error::QuadratureNotConverged(format!(
                "trapezoid rule exceeded {MAX_TRAPEZOID_NODES} nodes"
            )));
        }
        for j in 0..n {
            let v = f(node(2 * j + 1, 2 * n))?;
            sum += v;
            abs_sum += v.norm();
        }
        n *= 2;
        let h = 2.0 * PI / n as f64;
        let cur = sum * h;
        let mass = abs_sum * h;
        if (cur - prev).norm() <= opts.tol * mass {
            return Ok(QuadResult {
                value: cur,
                nodes_used: n,
                mass,
            });
        }
        prev = cur;
    }
}

struct Panels<'f, F> {
    f: &'f F,
    x: Vec<f64>,
    w: Vec<f64>,
    nodes_used: usize,
}

impl<F> Panels<'_, F>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    fn panel(&mut self, a: Complex64, b: Complex64) -> Result<(Complex64, f64)> {
        let mid = (a + b) * 0.5;
        let half = (b - a) * 0.5;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for (x, w) in self.x.iter().zip(&self.w) {
            let v = (self.f)(mid + half * *x)?;
            acc += v * *w;
            mass += v.norm() * *w;
        }
        self.nodes_used += self.x.len();
        Ok((acc * half, mass * half.norm()))
    }

    fn adapt(
        &mut self,
        a: Complex64,
        b: Complex64,
        whole: Complex64,
        tol_per_len: f64,
        depth: u32,
    ) -> Result<(Complex64, f64)> {
        let m = (a + b) * 0.5;
        let (l, lm) = self.panel(a, m)?;
        let (r, rm) = self.panel(m, b)?;
        if (whole - (l + r)).norm() <= tol_per_len * (b - a).norm() {
            return Ok((l + r, lm + rm));
        }
        if depth >= MAX_PANEL_DEPTH {
            return Err(Error::QuadratureNotConverged(format!(
                "panel bisection depth {MAX_PANEL_DEPTH} exceeded near {m}"
            )));
        }
        let (lv, lm) = self.adapt(a, m, l, tol_per_len, depth + 1)?;
        let (rv, rm) = self.adapt(m, b, r, tol_per_len, depth + 1)?;
        Ok((lv + rv, lm + rm))
    }
}

/// Composite Gauss panels along a polyline with bisection refinement.
fn panel_gauss<F>(f: &F, polyline: &[Complex64], opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let (x, w) = gauss_legendre(opts.nodes);
    let mut p = Panels {
        f,
        x,
        w,
        nodes_used: 0,
    };
    let mut initial = Vec::new();
    for seg in polyline.windows(2) {
        let len = (seg[1] - seg[0]).norm();
        if len == 0.0 {
            continue;
        }
        let k = (len / 0.25).ceil() as usize;
        for j in 0..k {
            let a = seg[0] + (seg[1] - seg[0]) * (j as f64 / k as f64);
            let b = seg[0] + (seg[1] - seg[0]) * ((j + 1) as f64 / k as f64);
            initial.push((a, b));
        }
    }
    let mut coarse = Vec::with_capacity(initial.len());
    let mut mass = 0.0;
    let mut total_len = 0.0;
    for &(a, b) in &initial {
        let (v, m) = p.panel(a, b)?;
        coarse.push(v);
        mass += m;
        total_len += (b - a).norm();
    }
    let tol_per_len = opts.tol * mass / total_len.max(f64::MIN_POSITIVE);
    let mut value = Complex64::new(0.0, 0.0);
    let mut refined_mass = 0.0;
    for (&(a, b), v) in initial.iter().zip(coarse) {
        let (val, m) = p.adapt(a, b, v, tol_per_len, 0)?;
        value += val;
        refined_mass += m;
    }
    Ok(QuadResult {
        value,
        nodes_used: p.nodes_used,
        mass: refined_mass,
    })
}

fn integrate_curve<F>(
    curve_f: F,
    path: PathSpec,
    opts: &QuadOptions,
    mass_probe: &dyn Fn(f64) -> Result<f64>,
) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    match path {
        PathSpec::RealInterval => match opts.mode {
            QuadMode::PeriodicTrapezoid => trapezoid(curve_f, 0.0, opts),
            QuadMode::PanelGauss => panel_gauss(
                &curve_f,
                &[Complex64::new(-PI, 0.0), Complex64::new(PI, 0.0)],
                opts,
            ),
        },
        PathSpec::ShiftedLine { s } => trapezoid(curve_f, s, opts),
        PathSpec::AutoShift => {
            let s = best_shift(mass_probe)?;
            trapezoid(curve_f, s, opts)
        }
        PathSpec::Contour(c) => panel_gauss(&curve_f, &c.waypoints, opts),
    }
}

/// Candidate shifts scanned by [`min_mass_shift`].
const SHIFT_CANDIDATES: usize = 61;

fn best_shift(mass: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut best = (f64::INFINITY, 0.0);
    for j in 0..SHIFT_CANDIDATES {
        let s = -3.0 + 6.0 * j as f64 / (SHIFT_CANDIDATES - 1) as f64;
        match mass(s) {
            Ok(m) if m < best.0 => best = (m, s),
            Ok(_)
            | Err(Error::AccuracyEnvelopeExceeded { .. })
            | Err(Error::OverflowRisk { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if best.0.is_finite() {
        Ok(best.1)
    } else {
        Err(Error::QuadratureNotConverged(
            "no shifted line with finite integrand mass".into(),
        ))
    }
}

/// Shift `s ∈ [−3, 3]` (step 0.1) minimizing `∫|integrand|` on `Im t = s`.
///
/// Cancellation on the real line is severe when `|I(λ)|` is small compared
/// to `∫|integrand|`; shifting the periodic line leaves the integral
/// unchanged and can reduce the mass by orders of magnitude.
pub fn min_mass_shift(
    curve: &TrigCurve,
    wave: &WaveModel,
    q: f64,
    lambda: f64,
    opts: &QuadOptions,
) -> Result<f64> {
    let ig = Integrand::new(wave, q, lambda, opts)?;
    best_shift(&|s| line_mass(&|t| ig.direct(t, &curve_point(curve, t)), s))
}

fn line_mass(f: &dyn Fn(Complex64) -> Result<Complex64>, s: f64) -> Result<f64> {
    const N: usize = 512;
    let mut m = 0.0;
    for j in 0..N {
        m += f(Complex64::new(-PI + 2.0 * PI * j as f64 / N as f64, s))?.norm();
    }
    Ok(m * 2.0 * PI / N as f64)
}

/// `e^{−λg₀} I(λ)` over the given path.
pub fn boundary_integral_i(
    domain: Domain,
    wave: &WaveModel,
    q: f64,
    lambda: f64,
    path: PathSpec,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let ig = Integrand::new(wave, q, lambda, opts)?;
    match domain {
        Domain::Curve(curve) => {
            let f = |t: Complex64| ig.direct(t, &curve_point(curve, t));
            integrate_curve(f, path, opts, &|s| line_mass(&f, s))
        }
        Domain::Corner(corner) => {
            let popts = QuadOptions {
                mode: QuadMode::PanelGauss,
                ..*opts
            };
            let mut value = Complex64::new(0.0, 0.0);
            let mut mass = 0.0;
            let mut nodes_used = 0;
            for seg in corner_segments(corner) {
                let xp = seg.tangent();
                let gp = Complex64::new(1.0, seg.slope);
                let f = |t: Complex64| {
                    let p = Point {
                        x: seg.point(t),
                        xp,
                        g: seg.g(t),
                        gp,
                    };
                    ig.direct(t, &p)
                };
                let r = panel_gauss(&f, &[Complex64::from(seg.a), Complex64::from(0.0)], &popts)?;
                value += r.value * seg.sign;
                mass += r.mass;
                nodes_used += r.nodes_used;
            }
            Ok(QuadResult {
                value,
                nodes_used,
                mass,
            })
        }
    }
}

/// Nodes and radius of the per-node Cauchy derivative of `∇u(x(t))`.
const BYPARTS_CAUCHY_RADIUS: f64 = 0.05;

/// `e^{−λg₀} λ I(λ)` from the integrated-by-parts form
/// `∫ [λλ̃(x₂′ + ix₁′)v + V′·(i,1) + iλ̃x₂′V·(i,1)] e^{λg + iλ̃x₂} dt`.
pub fn boundary_integral_i_byparts(
    curve: &TrigCurve,
    wave: &WaveModel,
    q: f64,
    lambda: f64,
    path: PathSpec,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let ig = Integrand::new(wave, q, lambda, opts)?;
    let f = |t: Complex64| {
        let p = curve_point(curve, t);
        let w = wave.sample(p.x)?;
        let vp = derivative(
            |s| {
                let g = wave.gradient(curve.point(s))?;
                Ok(I * g[0] + g[1])
            },
            t,
            BYPARTS_CAUCHY_RADIUS,
            1,
        )?;
        let front = (p.xp[1] + I * p.xp[0]) * w.v * (lambda * ig.lt)
            + vp
            + I * ig.lt * p.xp[1] * (I * w.grad[0] + w.grad[1]);
        Ok(front * ig.exponential(t, &p)?)
    };
    integrate_curve(f, path, opts, &|s| line_mass(&f, s))
}

/// Gauss nodes in the radial variable of [`area_integral_oracle`].
const RADIAL_START: usize = 32;

/// Check `x₁x₂′ − x₂x₁′` has one sign (zeros allowed) on 2048 samples.
pub fn check_star_shaped(curve: &TrigCurve) -> Result<()> {
    let (mut pos, mut neg) = (false, false);
    for j in 0..crate::curves::SHAPE_SAMPLES {
        let t = -PI + 2.0 * PI * j as f64 / crate::curves::SHAPE_SAMPLES as f64;
        let jet = curve.eval_jet(Complex64::from(t), 1);
        let cross = (jet.x[0][0] * jet.x[1][1] - jet.x[0][1] * jet.x[1][0]).re;
        let scale = 1e-12 * (1.0 + curve.magnitude_bound(0, 0.0) * curve.magnitude_bound(1, 0.0));
        pos |= cross > scale;
        neg |= cross < -scale;
    }
    if pos && neg {
        return Err(Error::StarShapeViolated);
    }
    Ok(())
}

/// `𝓘(λ) = ∫_D u e^{ix·ξ} dx` by Gauss in `ρ` × trapezoid in `t` over `ρ x(t)`.
///
/// Node counts double in both directions until the change is below
/// `opts.tol` times the absolute integral.
pub fn area_integral_oracle(
    curve: &TrigCurve,
    wave: &WaveModel,
    q: f64,
    lambda: f64,
    opts: &QuadOptions,
    exec: Execution,
) -> Result<QuadResult> {
    check_star_shaped(curve)?;
    let ig = Integrand::new(
        wave,
        q,
        lambda,
        &QuadOptions {
            normalization: None,
            ..*opts
        },
    )?;
    let (lambda, lt) = (ig.lambda, ig.lt);
    let eval = |nr: usize, nt: usize| -> Result<(Complex64, f64)> {
        let (x, w) = gauss_legendre(nr);
        let rows = exec.map_range(nt, |j| -> Result<(Complex64, f64)> {
            let t = Complex64::from(-PI + 2.0 * PI * j as f64 / nt as f64);
            let jet = curve.eval_jet(t, 1);
            let jac = jet.x[0][0] * jet.x[1][1] - jet.x[0][1] * jet.x[1][0];
            let mut acc = Complex64::new(0.0, 0.0);
            let mut mass = 0.0;
            for (xi, wi) in x.iter().zip(&w) {
                let rho = 0.5 * (xi + 1.0);
                let p = [jet.x[0][0] * rho, jet.x[0][1] * rho];
                let e = (p[0] + I * p[1]) * lambda + I * lt * p[1];
                if e.re > 700.0 {
                    return Err(Error::OverflowRisk { t, exponent: e.re });
                }
                let v = wave.value(p)? * e.exp() * jac * rho * (0.5 * wi);
                acc += v;
                mass += v.norm();
            }
            Ok((acc, mass))
        });
        let h = 2.0 * PI / nt as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for r in rows {
            let (a, m) = r?;
            acc += a;
            mass += m;
        }
        Ok((acc * h, mass * h))
    };
    let (mut nr, mut nt) = (RADIAL_START, opts.nodes.max(64));
    let (mut prev, _) = eval(nr, nt)?;
    loop {
        nr = (nr * 2).min(512);
        nt *= 2;
        if nt > MAX_TRAPEZOID_NODES {
            return Err(Error::QuadratureNotConverged(
                "area quadrature exceeded node cap".into(),
            ));
        }
        let (cur, mass) = eval(nr, nt)?;
        if (cur - prev).norm() <= opts.tol * mass {
            return Ok(QuadResult {
                value: cur,
                nodes_used: nr * nt,
                mass,
            });
        }
        prev = cur;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    /// `I(λ)`, recovered as `e^{λg₀}` times the normalized value.
    pub i_raw: Complex64,
    /// `λ^p e^{−λg₀} I(λ)`.
    pub resid: Complex64,
    pub nodes_used: usize,
}

/// `resid(λ) = λ^p e^{−λg₀} I(λ)` over an increasing λ grid.
#[allow(clippy::too_many_arguments)]
pub fn lambda_sweep(
    domain: Domain,
    wave: &WaveModel,
    q: f64,
    lambdas: &[f64],
    p: f64,
    g0: Complex64,
    path: PathSpec,
    opts: &QuadOptions,
    exec: Execution,
) -> Result<Vec<SweepRecord>> {
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(
            "lambda grid must be strictly increasing".into(),
        ));
    }
    let opts = opts.with_normalization(g0);
    exec.try_map(lambdas, |&lambda| {
        let r = boundary_integral_i(domain, wave, q, lambda, path, &opts)?;
        Ok(SweepRecord {
            lambda,
            i_raw: r.value * (g0 * lambda).exp(),
            resid: r.value * lambda.powf(p),
            nodes_used: r.nodes_used,
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Constant `A` of `resid ≈ A + B/λ`.
    pub limit: Complex64,
    pub b: Complex64,
    /// Slope of `−log|resid − A|` against `log λ`; absent when the residual
    /// is constant to roundoff.
    pub observed_order: Option<f64>,
    pub tail: usize,
}

/// Least-squares `resid = A + B/λ` over the last quarter (at least 4 records).
pub fn fit_decay(records: &[SweepRecord]) -> Result<DecayFit> {
    if records.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "decay fit needs at least 4 records, got {}",
            records.len()
        )));
    }
    let tail = (records.len() / 4).max(4);
    let recs = &records[records.len() - tail..];
    let (mut s1, mut sx, mut sxx) = (0.0, 0.0, 0.0);
    let (mut sy, mut sxy) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for r in recs {
        let x = 1.0 / r.lambda;
        s1 += 1.0;
        sx += x;
        sxx += x * x;
        sy += r.resid;
        sxy += r.resid * x;
    }
    let det = s1 * sxx - sx * sx;
    if det.abs() <= f64::EPSILON * s1 * sxx {
        return Err(Error::InsufficientData(
            "tail lambdas are not distinct".into(),
        ));
    }
    let a = (sy * sxx - sxy * sx) / det;
    let b = (sxy * s1 - sy * sx) / det;
    let pts: Vec<(f64, f64)> = recs
        .iter()
        .map(|r| (r.lambda.ln(), (r.resid - a).norm()))
        .collect();
    let floor = 1e-13 * a.norm().max(f64::MIN_POSITIVE);
    let observed_order = if pts.iter().all(|p| p.1 > floor) {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
        let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
        let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(-num / den)
    } else {
        None
    };
    Ok(DecayFit {
        limit: a,
        b,
        observed_order,
        tail,
    })
}
