//! Saddle points of the phase `g`, the level region `{Re g < Re g(t₀)}`, and
//! admissible contours from `−π` to `π` through a saddle.
//!
//! Contours are found by a shortest-path search over a grid of the strip
//! `[−π, π] × [s_min, s_max]` restricted to nodes strictly below the saddle
//! level, spliced to two short probes leaving `t₀` along descent directions.

use crate::curves::TrigCurve;
use crate::{Complex64, Error, Execution, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;

/// Samples used by [`validate_contour`].
pub const VALIDATION_SAMPLES: usize = 2048;

/// Default radius of the disc around `t₀` where only strict decay is required.
pub const DEFAULT_RHO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddlePoint {
    pub t0: Complex64,
    pub g0: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    pub simple: bool,
}

impl SaddlePoint {
    fn at(curve: &TrigCurve, t0: Complex64) -> Self {
        let jet = curve.eval_jet(t0, 3);
        let scale = curve.magnitude_bound(2, t0.im);
        SaddlePoint {
            t0,
            g0: jet.g[0],
            g2: jet.g[2],
            g3: jet.g[3],
            simple: jet.g[2].norm() > 1e-8 * scale,
        }
    }
}

/// Rectangle of the `t = r + is` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRect {
    pub r_min: f64,
    pub r_max: f64,
    pub s_min: f64,
    pub s_max: f64,
}

impl Default for SearchRect {
    fn default() -> Self {
        SearchRect {
            r_min: -PI,
            r_max: PI,
            s_min: -0.2,
            s_max: 2.5,
        }
    }
}

impl SearchRect {
    fn contains(&self, t: Complex64, slack: f64) -> bool {
        t.re >= self.r_min - slack
            && t.re <= self.r_max + slack
            && t.im >= self.s_min - slack
            && t.im <= self.s_max + slack
    }
}

/// Newton on `g′ = 0` from a 40×40 seed grid over `rect`.
///
/// Roots are reduced modulo 2π, deduplicated and sorted by ascending
/// `Re g(t₀)`.
pub fn find_saddles(curve: &TrigCurve, rect: SearchRect, tol: f64) -> Result<Vec<SaddlePoint>> {
    find_saddles_seeded(curve, rect, tol, 40)
}

pub fn find_saddles_seeded(
    curve: &TrigCurve,
    rect: SearchRect,
    tol: f64,
    seeds: usize,
) -> Result<Vec<SaddlePoint>> {
    if rect.s_min < -3.0 || rect.s_max > 3.0 || rect.s_min >= rect.s_max || rect.r_min >= rect.r_max
    {
        return Err(Error::InvalidParams(format!(
            "search rectangle must satisfy |Im t| <= 3 and be non-empty: {rect:?}"
        )));
    }
    let mut roots: Vec<Complex64> = Vec::new();
    for i in 0..seeds {
        for j in 0..seeds {
            let seed = Complex64::new(
                rect.r_min + (rect.r_max - rect.r_min) * (i as f64 + 0.5) / seeds as f64,
                rect.s_min + (rect.s_max - rect.s_min) * (j as f64 + 0.5) / seeds as f64,
            );
            let Some(root) = newton(curve, seed, tol) else {
                continue;
            };
            let root = reduce(root);
            if !rect.contains(root, 1e-9) || root.re.abs() == PI && root.im == 0.0 {
                continue;
            }
            if !roots.iter().any(|r| periodic_distance(*r, root) < 1e-8) {
                roots.push(root);
            }
        }
    }
    let mut out: Vec<SaddlePoint> = roots
        .into_iter()
        .map(|t| SaddlePoint::at(curve, t))
        .collect();
    out.sort_by(|a, b| {
        a.g0.re
            .total_cmp(&b.g0.re)
            .then(a.t0.re.total_cmp(&b.t0.re))
            .then(a.t0.im.total_cmp(&b.t0.im))
    });
    Ok(out)
}

fn newton(curve: &TrigCurve, mut t: Complex64, tol: f64) -> Option<Complex64> {
    for _ in 0..100 {
        if t.im.abs() > 4.0 || !t.re.is_finite() {
            return None;
        }
        let jet = curve.eval_jet(t, 2);
        if jet.g[2].norm() == 0.0 {
            return None;
        }
        let step = jet.g[1] / jet.g[2];
        t -= step;
        if step.norm() <= tol * (1.0 + t.norm()) {
            let g1 = curve.eval_jet(t, 1).g[1];
            let ok = g1.norm() <= 1e-10 * curve.magnitude_bound(1, t.im).max(1.0);
            return ok.then_some(t);
        }
    }
    None
}

fn reduce(t: Complex64) -> Complex64 {
    let mut re = (t.re + PI).rem_euclid(2.0 * PI) - PI;
    if re == -PI {
        re = PI;
    }
    Complex64::new(re, t.im)
}

fn periodic_distance(a: Complex64, b: Complex64) -> f64 {
    let d = a - b;
    let re = (d.re + PI).rem_euclid(2.0 * PI) - PI;
    Complex64::new(re, d.im).norm()
}

/// Resolution and window of a [`LevelSetGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    /// Nodes along `Re t ∈ [−π, π]`.
    pub nr: usize,
    /// Nodes along `Im t ∈ [s_min, s_max]`.
    pub ns: usize,
    pub s_min: f64,
    pub s_max: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams {
            nr: 401,
            ns: 301,
            s_min: -0.2,
            s_max: 2.5,
        }
    }
}

/// `Re g − Re g(t₀)` on a node grid plus the zero-level polylines.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetGrid {
    pub params: GridParams,
    pub level: f64,
    /// Row-major in `s`: `values[j * nr + i]` at `(r_i, s_j)`.
    pub values: Vec<f64>,
    /// Zero-level polylines as `(r, s)` points.
    pub polylines: Vec<Vec<(f64, f64)>>,
}

impl LevelSetGrid {
    pub fn r(&self, i: usize) -> f64 {
        -PI + 2.0 * PI * i as f64 / (self.params.nr - 1) as f64
    }

    pub fn s(&self, j: usize) -> f64 {
        let p = &self.params;
        p.s_min + (p.s_max - p.s_min) * j as f64 / (p.ns - 1) as f64
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.params.nr + i]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `r,s,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,s,value\n");
        for j in 0..self.params.ns {
            for i in 0..self.params.nr {
                out.push_str(&format!(
                    "{},{},{}\n",
                    self.r(i),
                    self.s(j),
                    self.value(i, j)
                ));
            }
        }
        out
    }

    /// Zero-level polylines and an optional contour as SVG paths.
    pub fn to_svg(&self, contour: Option<&ContourPath>) -> String {
        let p = &self.params;
        let height = p.s_max - p.s_min;
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"600\" \
             viewBox=\"{} {} {} {}\" preserveAspectRatio=\"none\">\n",
            -PI,
            -p.s_max,
            2.0 * PI,
            height
        );
        let poly = |pts: &mut dyn Iterator<Item = (f64, f64)>| {
            pts.map(|(r, s)| format!("{r},{}", -s))
                .collect::<Vec<_>>()
                .join(" ")
        };
        for line in &self.polylines {
            out.push_str(&format!(
                "<polyline class=\"level\" fill=\"none\" stroke=\"black\" \
                 vector-effect=\"non-scaling-stroke\" points=\"{}\"/>\n",
                poly(&mut line.iter().copied())
            ));
        }
        if let Some(c) = contour {
            out.push_str(&format!(
                "<polyline class=\"contour\" fill=\"none\" stroke=\"red\" \
                 vector-effect=\"non-scaling-stroke\" points=\"{}\"/>\n",
                poly(&mut c.waypoints.iter().map(|t| (t.re, t.im)))
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Evaluate `Re g − Re g(t₀)` on the grid and extract its zero level.
pub fn level_region(
    curve: &TrigCurve,
    s: &SaddlePoint,
    params: GridParams,
    exec: Execution,
) -> Result<LevelSetGrid> {
    if params.nr < 2 || params.ns < 2 || params.s_min >= params.s_max {
        return Err(Error::InvalidParams(format!(
            "bad grid parameters {params:?}"
        )));
    }
    let level = s.g0.re;
    let mut grid = LevelSetGrid {
        params,
        level,
        values: Vec::new(),
        polylines: Vec::new(),
    };
    let rows = exec.map_range(params.ns, |j| {
        let sj = grid.s(j);
        (0..params.nr)
            .map(|i| curve.g(Complex64::new(grid.r(i), sj)).re - level)
            .collect::<Vec<f64>>()
    });
    grid.values = rows.into_iter().flatten().collect();
    grid.polylines = marching_squares(&grid);
    Ok(grid)
}

fn marching_squares(grid: &LevelSetGrid) -> Vec<Vec<(f64, f64)>> {
    let (nr, ns) = (grid.params.nr, grid.params.ns);
    // Edge ids: 2*(j*nr+i) horizontal (i,j)-(i+1,j); +1 vertical (i,j)-(i,j+1).
    let point_on = |edge: usize| -> (f64, f64) {
        let node = edge / 2;
        let (i, j) = (node % nr, node / nr);
        let (i2, j2) = if edge.is_multiple_of(2) {
            (i + 1, j)
        } else {
            (i, j + 1)
        };
        let (a, b) = (grid.value(i, j), grid.value(i2, j2));
        let w = if a == b { 0.5 } else { a / (a - b) };
        (
            grid.r(i) + w * (grid.r(i2) - grid.r(i)),
            grid.s(j) + w * (grid.s(j2) - grid.s(j)),
        )
    };
    let mut segs: Vec<(usize, usize)> = Vec::new();
    for j in 0..ns - 1 {
        for i in 0..nr - 1 {
            let v = [
                grid.value(i, j),
                grid.value(i + 1, j),
                grid.value(i + 1, j + 1),
                grid.value(i, j + 1),
            ];
            let bottom = 2 * (j * nr + i);
            let top = 2 * ((j + 1) * nr + i);
            let left = 2 * (j * nr + i) + 1;
            let right = 2 * (j * nr + i + 1) + 1;
            let mut case = 0;
            for (b, x) in v.iter().enumerate() {
                if *x < 0.0 {
                    case |= 1 << b;
                }
            }
            let centre_neg = v.iter().sum::<f64>() < 0.0;
            match case {
                0 | 15 => {}
                1 | 14 => segs.push((left, bottom)),
                2 | 13 => segs.push((bottom, right)),
                3 | 12 => segs.push((left, right)),
                4 | 11 => segs.push((right, top)),
                6 | 9 => segs.push((bottom, top)),
                7 | 8 => segs.push((left, top)),
                5 => {
                    if centre_neg {
                        segs.push((left, top));
                        segs.push((bottom, right));
                    } else {
                        segs.push((left, bottom));
                        segs.push((right, top));
                    }
                }
                10 => {
                    if centre_neg {
                        segs.push((left, bottom));
                        segs.push((right, top));
                    } else {
                        segs.push((left, top));
                        segs.push((bottom, right));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segs.iter().enumerate() {
        by_edge.entry(*a).or_default().push(k);
        by_edge.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segs.len()];
    let mut lines = Vec::new();
    let next = |edge: usize, used: &[bool]| -> Option<usize> {
        by_edge[&edge].iter().copied().find(|&k| !used[k])
    };
    for start in 0..segs.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segs[start];
        let mut chain = std::collections::VecDeque::from([a, b]);
        let mut tail = b;
        while let Some(k) = next(tail, &used) {
            used[k] = true;
            tail = if segs[k].0 == tail {
                segs[k].1
            } else {
                segs[k].0
            };
            chain.push_back(tail);
        }
        let mut head = a;
        while let Some(k) = next(head, &used) {
            used[k] = true;
            head = if segs[k].0 == head {
                segs[k].1
            } else {
                segs[k].0
            };
            chain.push_front(head);
        }
        lines.push(chain.into_iter().map(point_on).collect());
    }
    lines
}

/// How the contour passes the saddle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    /// The real interval itself.
    RealAxis,
    /// Enters and leaves `t₀` through the two opposite descent valleys.
    Through,
    /// Enters and leaves inside a single valley (V-shaped corner at `t₀`).
    SameSector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    pub waypoints: Vec<Complex64>,
    pub t0_index: usize,
    /// Slope angle of the path leaving `t₀` toward `π`.
    pub omega: f64,
    pub margin: f64,
    pub rho: f64,
    pub crossing: Crossing,
}

impl ContourPath {
    pub fn t0(&self) -> Complex64 {
        self.waypoints[self.t0_index]
    }

    pub fn length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .sum()
    }

    /// Equally spaced points (by arc length), always including the waypoints.
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        let total = self.length();
        let mut out = Vec::with_capacity(n + self.waypoints.len());
        for w in self.waypoints.windows(2) {
            let len = (w[1] - w[0]).norm();
            let k = ((len / total) * n as f64).ceil().max(1.0) as usize;
            for j in 0..k {
                out.push(w[0] + (w[1] - w[0]) * (j as f64 / k as f64));
            }
        }
        out.push(*self.waypoints.last().unwrap());
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourOptions {
    pub rho: f64,
    /// Margin δ; scale-aware default when absent.
    pub delta: Option<f64>,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions {
            rho: DEFAULT_RHO,
            delta: None,
        }
    }
}

/// Default margin `min(10⁻³·|Re g(t₀) − min grid|, |g″|ρ²/8)`.
pub fn default_margin(s: &SaddlePoint, grid: &LevelSetGrid, rho: f64) -> f64 {
    (1e-3 * grid.min_value().abs()).min(s.g2.norm() * rho * rho / 8.0)
}

struct Field<'a> {
    curve: &'a TrigCurve,
    level: f64,
}

impl Field<'_> {
    fn at(&self, t: Complex64) -> f64 {
        self.curve.g(t).re - self.level
    }

    fn segment_below(&self, a: Complex64, b: Complex64, bound: f64, step: f64) -> bool {
        let k = (((b - a).norm() / step).ceil() as usize).max(8);
        (0..=k).all(|j| self.at(a + (b - a) * (j as f64 / k as f64)) <= bound)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Graph on admissible grid nodes plus four attached terminals.
struct PathGraph {
    points: Vec<Complex64>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl PathGraph {
    fn build(grid: &LevelSetGrid, s: &SaddlePoint, delta: f64, rho: f64) -> Self {
        let (nr, ns) = (grid.params.nr, grid.params.ns);
        let n = nr * ns;
        let points: Vec<Complex64> = (0..n)
            .map(|id| Complex64::new(grid.r(id % nr), grid.s(id / nr)))
            .collect();
        let ok: Vec<bool> = (0..n)
            .map(|id| grid.values[id] < -2.0 * delta && (points[id] - s.t0).norm() > rho)
            .collect();
        let mut adj = vec![Vec::new(); n];
        for j in 0..ns {
            for i in 0..nr {
                let id = j * nr + i;
                if !ok[id] {
                    continue;
                }
                for (di, dj) in [(1i64, 0i64), (0, 1), (1, 1), (1, -1)] {
                    let (i2, j2) = (i as i64 + di, j as i64 + dj);
                    if i2 < 0 || j2 < 0 || i2 >= nr as i64 || j2 >= ns as i64 {
                        continue;
                    }
                    let id2 = j2 as usize * nr + i2 as usize;
                    if ok[id2] {
                        let w = (points[id2] - points[id]).norm();
                        adj[id].push((id2, w));
                        adj[id2].push((id, w));
                    }
                }
            }
        }
        PathGraph { points, adj }
    }

    /// Attach a free point to admissible grid nodes within a few cells.
    fn attach(&mut self, grid: &LevelSetGrid, field: &Field, t: Complex64, delta: f64) -> usize {
        let id = self.points.len();
        self.points.push(t);
        self.adj.push(Vec::new());
        let (nr, ns) = (grid.params.nr, grid.params.ns);
        let dr = 2.0 * PI / (nr - 1) as f64;
        let ds = (grid.params.s_max - grid.params.s_min) / (ns - 1) as f64;
        let ci = ((t.re + PI) / dr).round() as i64;
        let cj = ((t.im - grid.params.s_min) / ds).round() as i64;
        let step = dr.min(ds) / 2.0;
        for j in (cj - 3)..=(cj + 3) {
            for i in (ci - 3)..=(ci + 3) {
                if i < 0 || j < 0 || i >= nr as i64 || j >= ns as i64 {
                    continue;
                }
                let node = j as usize * nr + i as usize;
                if grid.values[node] >= -2.0 * delta {
                    continue;
                }
                let p = self.points[node];
                if field.segment_below(t, p, -delta, step) {
                    let w = (p - t).norm();
                    self.adj[id].push((node, w));
                    self.adj[node].push((id, w));
                }
            }
        }
        id
    }

    fn shortest(&self, from: usize, to: usize) -> Option<(f64, Vec<Complex64>)> {
        let n = self.points.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[from] = 0.0;
        heap.push(HeapItem(0.0, from));
        while let Some(HeapItem(d, u)) = heap.pop() {
            if u == to {
                break;
            }
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = u;
                    heap.push(HeapItem(nd, v));
                }
            }
        }
        if !dist[to].is_finite() {
            return None;
        }
        let mut path = vec![self.points[to]];
        let mut u = to;
        while u != from {
            u = prev[u];
            path.push(self.points[u]);
        }
        path.reverse();
        Some((dist[to], path))
    }
}

fn shortcut(path: &[Complex64], field: &Field, delta: f64, step: f64) -> Vec<Complex64> {
    let mut out = vec![path[0]];
    let mut i = 0;
    while i + 1 < path.len() {
        let mut j = i + 1;
        while j + 1 < path.len() && field.segment_below(path[i], path[j + 1], -delta, step) {
            j += 1;
        }
        out.push(path[j]);
        i = j;
    }
    out
}

/// Construct an admissible contour through `s`.
pub fn build_contour(
    curve: &TrigCurve,
    s: &SaddlePoint,
    grid: &LevelSetGrid,
    opts: ContourOptions,
) -> Result<ContourPath> {
    if !s.simple {
        return Err(Error::DegenerateSaddle(s.t0));
    }
    let field = Field {
        curve,
        level: s.g0.re,
    };
    let start = Complex64::new(-PI, 0.0);
    let end = Complex64::new(PI, 0.0);
    for e in [start, end] {
        if field.at(e) >= 0.0 {
            return Err(Error::EndpointAboveLevel {
                endpoint: e.re,
                level: s.g0.re,
            });
        }
    }
    let rho = opts.rho;
    let delta = opts.delta.unwrap_or_else(|| default_margin(s, grid, rho));
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "contour margin must be positive, got {delta}"
        )));
    }

    if s.t0.im.abs() < 1e-12 {
        let real = ContourPath {
            waypoints: vec![start, Complex64::new(s.t0.re, 0.0), end],
            t0_index: 1,
            omega: 0.0,
            margin: delta,
            rho,
            crossing: Crossing::RealAxis,
        };
        if validate_contour(curve, &real, s, delta, rho).is_ok() {
            return Ok(real);
        }
    }

    let p = &grid.params;
    if !(s.t0.im > p.s_min && s.t0.im < p.s_max) {
        return Err(Error::NoAdmissiblePath(format!(
            "saddle {} lies outside the grid",
            s.t0
        )));
    }
    let step = (2.0 * PI / (p.nr - 1) as f64).min((p.s_max - p.s_min) / (p.ns - 1) as f64) / 2.0;
    let mut graph = PathGraph::build(grid, s, delta, rho);
    let a = graph.attach(grid, &field, start, delta);
    let b = graph.attach(grid, &field, end, delta);

    // Descent directions solve arg g″ + 2φ = π.
    let phi = (PI - s.g2.arg()) / 2.0;
    let mut candidates: Vec<(Crossing, Complex64, Complex64)> = Vec::new();
    for (u, v) in [(phi + PI, phi), (phi, phi + PI)] {
        candidates.push((
            Crossing::Through,
            Complex64::from_polar(rho, u),
            Complex64::from_polar(rho, v),
        ));
    }
    for valley in [phi, phi + PI] {
        for sign in [1.0, -1.0] {
            candidates.push((
                Crossing::SameSector,
                Complex64::from_polar(rho, valley + sign * PI / 8.0),
                Complex64::from_polar(rho, valley - sign * PI / 8.0),
            ));
        }
    }

    // (length, crossing, left leg, right leg, exit direction)
    type Candidate = (f64, Crossing, Vec<Complex64>, Vec<Complex64>, Complex64);
    let mut best: Option<Candidate> = None;
    for kind in [Crossing::Through, Crossing::SameSector] {
        for &(k, din, dout) in candidates.iter().filter(|c| c.0 == kind) {
            let (pin, pout) = (s.t0 + din, s.t0 + dout);
            if field.at(pin) > -delta || field.at(pout) > -delta {
                continue;
            }
            let mut g = PathGraph {
                points: graph.points.clone(),
                adj: graph.adj.clone(),
            };
            let ia = g.attach(grid, &field, pin, delta);
            let ib = g.attach(grid, &field, pout, delta);
            let (Some((l1, left)), Some((l2, right))) = (g.shortest(a, ia), g.shortest(ib, b))
            else {
                continue;
            };
            if best.as_ref().is_none_or(|bst| l1 + l2 < bst.0) {
                best = Some((l1 + l2, k, left, right, dout));
            }
        }
        if best.is_some() {
            break;
        }
    }
    let Some((_, crossing, left, right, dout)) = best else {
        return Err(Error::NoAdmissiblePath(format!(
            "no path below Re g(t0) - {delta} joins -pi and pi through t0 = {}",
            s.t0
        )));
    };
    if crossing == Crossing::SameSector {
        log::warn!(
            "saddle {}: descent valleys do not separate -pi from pi; using a path that enters \
             and leaves t0 inside one valley",
            s.t0
        );
    }
    let mut waypoints = shortcut(&left, &field, delta, step);
    let t0_index = waypoints.len();
    waypoints.push(s.t0);
    waypoints.extend(shortcut(&right, &field, delta, step));
    let path = ContourPath {
        waypoints,
        t0_index,
        omega: dout.arg(),
        margin: delta,
        rho,
        crossing,
    };
    validate_contour(curve, &path, s, delta, rho)
        .map_err(|e| Error::NoAdmissiblePath(format!("constructed path failed validation: {e}")))?;
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// Largest `Re g − Re g(t₀)` outside the ρ-disc.
    pub max_excess: f64,
    pub worst_t: Complex64,
    /// Largest `(Re g − Re g(t₀)) / |t − t₀|²` inside the disc.
    pub inner_decay: f64,
}

/// Check the margin condition on 2048 samples along the path.
///
/// Inside the ρ-disc the path must decay at least like `|g″||t − t₀|²/8`.
pub fn validate_contour(
    curve: &TrigCurve,
    path: &ContourPath,
    s: &SaddlePoint,
    delta: f64,
    rho: f64,
) -> Result<ValidationReport> {
    let w = &path.waypoints;
    if w.len() < 3
        || (w[0] - Complex64::new(-PI, 0.0)).norm() > 1e-14
        || (w[w.len() - 1] - Complex64::new(PI, 0.0)).norm() > 1e-14
        || path.t0_index == 0
        || path.t0_index + 1 >= w.len()
        || (path.t0() - s.t0).norm() > 1e-12
    {
        return Err(Error::InvalidParams(
            "contour must run from -pi through t0 to pi".into(),
        ));
    }
    let field = Field {
        curve,
        level: s.g0.re,
    };
    let mut report = ValidationReport {
        max_excess: f64::NEG_INFINITY,
        worst_t: w[0],
        inner_decay: f64::NEG_INFINITY,
    };
    let quad_bound = -s.g2.norm() / 8.0;
    for t in path.sample(VALIDATION_SAMPLES) {
        let r = (t - s.t0).norm();
        let f = field.at(t);
        if r > rho {
            if f > report.max_excess {
                report.max_excess = f;
                report.worst_t = t;
            }
        } else if r > 1e-12 {
            let ratio = f / (r * r);
            report.inner_decay = report.inner_decay.max(ratio);
            if ratio > quad_bound {
                return Err(Error::MarginViolated {
                    t,
                    excess: f,
                    delta,
                });
            }
        }
    }
    if report.max_excess > -delta {
        return Err(Error::MarginViolated {
            t: report.worst_t,
            excess: report.max_excess,
            delta,
        });
    }
    Ok(report)
}

/// `(−g″(t₀))^{1/2}` on the branch fixed by the contour slope `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub sqrt: Complex64,
    pub omega: f64,
    pub omega0: f64,
}

/// Select `ω₀ = arg(−g″)` in `(−π−2ω, π−2ω]` with `|ω₀ + 2ω| ≤ π/2`.
pub fn branch_sqrt_neg_g2(s: &SaddlePoint, omega: f64) -> Result<Branch> {
    let neg = -s.g2;
    let principal = neg.arg();
    let lo = -PI - 2.0 * omega;
    let shift = ((principal - lo) / (2.0 * PI)).ceil() - 1.0;
    let mut omega0 = principal - 2.0 * PI * shift;
    if omega0 <= lo {
        omega0 += 2.0 * PI;
    }
    if (omega0 + 2.0 * omega).abs() > PI / 2.0 + 1e-9 {
        return Err(Error::BranchUnresolvable { omega });
    }
    Ok(Branch {
        sqrt: Complex64::from_polar(neg.norm().sqrt(), omega0 / 2.0),
        omega,
        omega0,
    })
}
