//! Boundary parametrizations as trigonometric polynomials.
//!
//! A [`TrigCurve`] is entire in `t`, so `x(t)` and the phase
//! `g(t) = x₁(t) + i x₂(t)` can be differentiated termwise at any complex
//! point. The corner model keeps only the two straight sides meeting at the
//! origin.

use crate::{Complex64, Error, Result, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest supported Fourier degree.
pub const MAX_DEGREE: usize = 16;

/// Sample count used by the advisory shape checks.
pub const SHAPE_SAMPLES: usize = 2048;

/// `x_j(t) = a_j0 + Σ_m (a_jm cos mt + b_jm sin mt)` for `j = 1, 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigCurve {
    a1: Vec<f64>,
    b1: Vec<f64>,
    a2: Vec<f64>,
    b2: Vec<f64>,
}

/// Derivatives of `x` and `g` at one complex parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    /// `x[d]` is the `d`-th derivative of `(x₁, x₂)`.
    pub x: [[Complex64; 2]; 5],
    /// `g[d] = x[d][0] + i x[d][1]`.
    pub g: [Complex64; 5],
    /// Highest order that was evaluated; entries beyond it are zero.
    pub order: usize,
}

impl CurveJet {
    fn from_x(x: [[Complex64; 2]; 5], order: usize) -> Self {
        let mut g = [Complex64::new(0.0, 0.0); 5];
        for d in 0..=order {
            g[d] = x[d][0] + I * x[d][1];
        }
        CurveJet { x, g, order }
    }
}

impl TrigCurve {
    /// Build from coefficient vectors indexed by frequency `m = 0..=M`.
    ///
    /// All four vectors must have the same length; `b1[0]`, `b2[0]` are
    /// ignored. Shape checks only log warnings.
    pub fn new(a1: Vec<f64>, b1: Vec<f64>, a2: Vec<f64>, b2: Vec<f64>) -> Result<Self> {
        let len = a1.len();
        if len == 0 || b1.len() != len || a2.len() != len || b2.len() != len {
            return Err(Error::InvalidShapeParams(
                "coefficient vectors must be non-empty and of equal length".into(),
            ));
        }
        if len - 1 > MAX_DEGREE {
            return Err(Error::InvalidShapeParams(format!(
                "degree {} exceeds {MAX_DEGREE}",
                len - 1
            )));
        }
        if [&a1, &b1, &a2, &b2]
            .iter()
            .any(|v| v.iter().any(|c| !c.is_finite()))
        {
            return Err(Error::InvalidShapeParams("non-finite coefficient".into()));
        }
        let curve = TrigCurve { a1, b1, a2, b2 };
        for w in curve.shape_warnings() {
            log::warn!("{w}");
        }
        Ok(curve)
    }

    pub fn degree(&self) -> usize {
        self.a1.len() - 1
    }

    /// Coefficient vectors `(a1, b1, a2, b2)`.
    pub fn coefficients(&self) -> (&[f64], &[f64], &[f64], &[f64]) {
        (&self.a1, &self.b1, &self.a2, &self.b2)
    }

    /// Derivatives of `x` and `g` up to `order` (at most 4).
    #[allow(clippy::needless_range_loop)]
    pub fn eval_jet(&self, t: Complex64, order: usize) -> CurveJet {
        assert!(order <= 4, "jet order must be at most 4");
        let t = reduce_period(t);
        let zero = Complex64::new(0.0, 0.0);
        let mut x = [[zero; 2]; 5];
        x[0][0] = Complex64::from(self.a1[0]);
        x[0][1] = Complex64::from(self.a2[0]);
        for m in 1..=self.degree() {
            let mf = m as f64;
            let (s, c) = ((t * mf).sin(), (t * mf).cos());
            let mut scale = 1.0;
            for d in 0..=order {
                for (j, (a, b)) in [(self.a1[m], self.b1[m]), (self.a2[m], self.b2[m])]
                    .into_iter()
                    .enumerate()
                {
                    let term = match d % 4 {
                        0 => c * a + s * b,
                        1 => -s * a + c * b,
                        2 => -(c * a + s * b),
                        _ => s * a - c * b,
                    };
                    x[d][j] += term * scale;
                }
                scale *= mf;
            }
        }
        CurveJet::from_x(x, order)
    }

    /// Upper bound of `|g^{(d)}(t)|` on the line `Im t = s`.
    pub fn magnitude_bound(&self, d: usize, s: f64) -> f64 {
        (1..=self.degree())
            .map(|m| {
                let c = self.a1[m].abs() + self.b1[m].abs() + self.a2[m].abs() + self.b2[m].abs();
                c * (m as f64).powi(d as i32) * (m as f64 * s).cosh()
            })
            .sum::<f64>()
            + if d == 0 {
                self.a1[0].abs() + self.a2[0].abs()
            } else {
                0.0
            }
    }

    pub fn point(&self, t: Complex64) -> [Complex64; 2] {
        self.eval_jet(t, 0).x[0]
    }

    pub fn g(&self, t: Complex64) -> Complex64 {
        self.eval_jet(t, 0).g[0]
    }

    /// Real boundary point at real `t`.
    pub fn real_point(&self, t: f64) -> [f64; 2] {
        let p = self.point(Complex64::from(t));
        [p[0].re, p[1].re]
    }

    /// Signed area enclosed by the sampled polygon (positive when counterclockwise).
    pub fn signed_area(&self) -> f64 {
        let pts = self.samples(SHAPE_SAMPLES);
        let n = pts.len();
        0.5 * (0..n)
            .map(|i| {
                let (p, q) = (pts[i], pts[(i + 1) % n]);
                p[0] * q[1] - q[0] * p[1]
            })
            .sum::<f64>()
    }

    /// Advisory diagnostics: orientation and sampled-chord self-intersection.
    pub fn shape_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.signed_area() <= 0.0 {
            out.push("curve is not counterclockwise (signed area <= 0)".to_string());
        }
        if let Some((i, j)) = self.first_crossing() {
            out.push(format!(
                "sampled chords {i} and {j} intersect; curve may not be simple"
            ));
        }
        out
    }

    fn samples(&self, n: usize) -> Vec<[f64; 2]> {
        (0..n)
            .map(|i| self.real_point(-PI + 2.0 * PI * i as f64 / n as f64))
            .collect()
    }

    fn first_crossing(&self) -> Option<(usize, usize)> {
        // Half-step offset so that self-crossings at sampled parameters are proper.
        let n = SHAPE_SAMPLES;
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|i| self.real_point(-PI + 2.0 * PI * (i as f64 + 0.5) / n as f64))
            .collect();
        let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
        for p in &pts {
            for j in 0..2 {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        const CELLS: usize = 64;
        let cell = |v: f64, j: usize| {
            let w = (hi[j] - lo[j]).max(f64::MIN_POSITIVE);
            (((v - lo[j]) / w * CELLS as f64) as usize).min(CELLS - 1)
        };
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); CELLS * CELLS];
        for i in 0..n {
            let (p, q) = (pts[i], pts[(i + 1) % n]);
            for cx in cell(p[0].min(q[0]), 0)..=cell(p[0].max(q[0]), 0) {
                for cy in cell(p[1].min(q[1]), 1)..=cell(p[1].max(q[1]), 1) {
                    buckets[cx * CELLS + cy].push(i);
                }
            }
        }
        let mut best: Option<(usize, usize)> = None;
        for b in &buckets {
            for (k, &i) in b.iter().enumerate() {
                for &j in &b[k + 1..] {
                    let (i, j) = (i.min(j), i.max(j));
                    if j == i + 1 || (i == 0 && j == n - 1) {
                        continue;
                    }
                    if segments_cross(pts[i], pts[i + 1], pts[j], pts[(j + 1) % n])
                        && best.is_none_or(|b| (i, j) < b)
                    {
                        best = Some((i, j));
                    }
                }
            }
        }
        best
    }
}

fn reduce_period(t: Complex64) -> Complex64 {
    if (-PI..=PI).contains(&t.re) {
        return t;
    }
    Complex64::new((t.re + PI).rem_euclid(2.0 * PI) - PI, t.im)
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// The domains used throughout: ellipse, cardioid, deltoid, a nonconvex
/// limaçon-like curve and the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Builtin {
    Ellipse { a: f64, b: f64 },
    Cardioid,
    Deltoid,
    Nonconvex,
    Circle { r: f64 },
}

impl Builtin {
    pub fn curve(&self) -> Result<TrigCurve> {
        builtin(*self)
    }
}

/// Exact Fourier coefficients of a builtin curve.
pub fn builtin(name: Builtin) -> Result<TrigCurve> {
    let z = 0.0;
    match name {
        Builtin::Ellipse { a, b } => {
            if !(a.is_finite() && b > 0.0 && a > b) {
                return Err(Error::InvalidShapeParams(format!(
                    "ellipse needs a > b > 0, got a={a}, b={b}"
                )));
            }
            TrigCurve::new(vec![z, a], vec![z, z], vec![z, z], vec![z, b])
        }
        Builtin::Circle { r } => {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidShapeParams(format!(
                    "circle needs r > 0, got {r}"
                )));
            }
            TrigCurve::new(vec![z, r], vec![z, z], vec![z, z], vec![z, r])
        }
        // (1 − cos t)(cos t, sin t)
        Builtin::Cardioid => TrigCurve::new(
            vec![-0.5, 1.0, -0.5],
            vec![z, z, z],
            vec![z, z, z],
            vec![z, 1.0, -0.5],
        ),
        Builtin::Deltoid => TrigCurve::new(
            vec![z, 2.0, 1.0],
            vec![z, z, z],
            vec![z, z, z],
            vec![z, 2.0, -1.0],
        ),
        // (2 + cos 2t)(cos t, sin t)
        Builtin::Nonconvex => TrigCurve::new(
            vec![z, 2.5, z, 0.5],
            vec![z; 4],
            vec![z; 4],
            vec![z, 1.5, z, 0.5],
        ),
    }
}

/// Wedge with vertex at the origin, opening to the left, bisected by the
/// `x₁`-axis; only the two straight sides are modelled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerDomain {
    theta: f64,
    a1: f64,
    a2: f64,
}

/// Straight side `x(t) = (t, slope·t)`, `t ∈ [a, 0]`.
///
/// Its contribution to the boundary integral is `sign · ∫_a^0 F dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub slope: f64,
    pub a: f64,
    pub sign: f64,
}

impl Segment {
    pub fn point(&self, t: Complex64) -> [Complex64; 2] {
        [t, t * self.slope]
    }

    pub fn tangent(&self) -> [Complex64; 2] {
        [Complex64::from(1.0), Complex64::from(self.slope)]
    }

    /// `g(t) = (1 + i·slope) t`.
    pub fn g(&self, t: Complex64) -> Complex64 {
        t * Complex64::new(1.0, self.slope)
    }
}

impl CornerDomain {
    pub fn new(theta: f64, a1: f64, a2: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI / 2.0) {
            return Err(Error::InvalidShapeParams(format!(
                "corner half-angle must lie in (0, pi/2), got {theta}"
            )));
        }
        if !(a1 < 0.0 && a2 < 0.0 && a1.is_finite() && a2.is_finite()) {
            return Err(Error::InvalidShapeParams(format!(
                "corner endpoints must be negative, got a1={a1}, a2={a2}"
            )));
        }
        Ok(CornerDomain { theta, a1, a2 })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    /// `m = tan θ`.
    pub fn slope(&self) -> f64 {
        self.theta.tan()
    }
}

/// `[L₁, L₂]`: `L₁ = (t, −mt)` traversed from 0 to `a1`, `L₂ = (t, mt)` from `a2` to 0.
pub fn corner_segments(c: &CornerDomain) -> [Segment; 2] {
    let m = c.slope();
    [
        Segment {
            slope: -m,
            a: c.a1,
            sign: -1.0,
        },
        Segment {
            slope: m,
            a: c.a2,
            sign: 1.0,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn all_builtins() -> Vec<TrigCurve> {
        [
            Builtin::Ellipse { a: 2.0, b: 1.0 },
            Builtin::Cardioid,
            Builtin::Deltoid,
            Builtin::Nonconvex,
            Builtin::Circle { r: 1.0 },
        ]
        .iter()
        .map(|b| b.curve().unwrap())
        .collect()
    }

    #[test]
    fn ellipse_saddle_jet() {
        let e = builtin(Builtin::Ellipse { a: 2.0, b: 1.0 }).unwrap();
        let t0 = c(0.0, 0.5f64.atanh());
        let jet = e.eval_jet(t0, 2);
        assert!((jet.g[0] - 3f64.sqrt()).norm() < 1e-14);
        assert!(jet.g[1].norm() < 1e-14);
        assert!((jet.g[2] + 3f64.sqrt()).norm() < 1e-14);
    }

    #[test]
    fn cardioid_and_deltoid_fixtures() {
        let card = builtin(Builtin::Cardioid).unwrap();
        assert!((card.g(c(PI, 0.0)) + 2.0).norm() < 1e-15);
        let del = builtin(Builtin::Deltoid).unwrap();
        let jet = del.eval_jet(c(0.0, 0.0), 2);
        assert!(jet.g[1].norm() < 1e-15);
        assert!((jet.g[2] + 6.0).norm() < 1e-15);
    }

    #[test]
    fn circle_phase_is_exponential() {
        let circ = builtin(Builtin::Circle { r: 1.0 }).unwrap();
        for t in [c(0.3, 0.7), c(-2.0, -0.4)] {
            assert!((circ.g(t) - (I * t).exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn nonconvex_matches_product_form() {
        let nc = builtin(Builtin::Nonconvex).unwrap();
        for i in 0..100 {
            let t = -PI + 2.0 * PI * i as f64 / 100.0;
            let r = 2.0 + (2.0 * t).cos();
            let p = nc.real_point(t);
            assert!((p[0] - r * t.cos()).abs() < 1e-14);
            assert!((p[1] - r * t.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn builtins_are_counterclockwise_and_simple() {
        for curve in all_builtins() {
            assert!(curve.signed_area() > 0.0);
            assert!(curve.shape_warnings().is_empty());
        }
    }

    #[test]
    fn clockwise_curve_is_flagged() {
        let cw = TrigCurve::new(
            vec![0.0, 1.0],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![0.0, -1.0],
        )
        .unwrap();
        assert_eq!(cw.shape_warnings().len(), 1);
    }

    #[test]
    fn figure_eight_is_flagged() {
        // (sin 2t, sin t) crosses itself at the origin
        let fig = TrigCurve::new(
            vec![0.0; 3],
            vec![0.0, 0.0, 1.0],
            vec![0.0; 3],
            vec![0.0, 1.0, 0.0],
        )
        .unwrap();
        assert!(fig.first_crossing().is_some());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(builtin(Builtin::Ellipse { a: 1.0, b: 2.0 }).is_err());
        assert!(builtin(Builtin::Circle { r: 0.0 }).is_err());
        assert!(
            TrigCurve::new(vec![0.0; 18], vec![0.0; 18], vec![0.0; 18], vec![0.0; 18]).is_err()
        );
        assert!(TrigCurve::new(vec![0.0; 2], vec![0.0; 3], vec![0.0; 2], vec![0.0; 2]).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for curve in all_builtins() {
            for i in 0..20 {
                let t = -3.0 + 0.3 * i as f64;
                let jet = curve.eval_jet(c(t, 0.0), 4);
                for d in 1..=4 {
                    let lo = curve.eval_jet(c(t - h, 0.0), 4).x[d - 1];
                    let hi = curve.eval_jet(c(t + h, 0.0), 4).x[d - 1];
                    for j in 0..2 {
                        let fd = (hi[j] - lo[j]) / (2.0 * h);
                        assert!((fd - jet.x[d][j]).norm() < 1e-8, "order {d} at t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn corner_segment_geometry() {
        let corner = CornerDomain::new(PI / 4.0, -1.0, -2.0).unwrap();
        let [l1, l2] = corner_segments(&corner);
        let end = l1.point(c(l1.a, 0.0));
        assert!((end[0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((end[1] - c(1.0, 0.0)).norm() < 1e-15);
        let t = c(-0.3, 0.2);
        let m = corner.slope();
        assert!((l2.g(t) - Complex64::new(1.0, m) * t).norm() < 1e-15);
        assert!((l1.g(t) - Complex64::new(1.0, -m) * t).norm() < 1e-15);
        assert!(CornerDomain::new(PI / 2.0, -1.0, -1.0).is_err());
        assert!(CornerDomain::new(0.3, 1.0, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn jets_are_periodic(re in -PI..PI, im in -1.5f64..1.5) {
            for curve in all_builtins() {
                let a = curve.eval_jet(c(re, im), 4);
                let b = curve.eval_jet(c(re + 2.0 * PI, im), 4);
                for d in 0..=4 {
                    let scale = 1.0 + a.g[d].norm();
                    prop_assert!((a.g[d] - b.g[d]).norm() <= 1e-13 * scale * (1.0 + im.abs().exp()));
                }
            }
        }

        #[test]
        fn cardioid_factorization(re in -PI..PI, im in -1.0f64..1.0) {
            let card = builtin(Builtin::Cardioid).unwrap();
            let t = c(re, im);
            let e = (I * t).exp() - 1.0;
            prop_assert!((card.g(t) + 0.5 * e * e).norm() <= 1e-12);
        }
    }
}
