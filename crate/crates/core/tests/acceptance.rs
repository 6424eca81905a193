//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed; the process
//! exits non-zero when any criterion fails. Lines tagged `info` are
//! diagnostics and never affect the exit status.

use nonscatter_core::asymptotics::{
    analyze, bessel_contour_identity, corner_constants, disk_herglotz_closed_form,
    disk_plane_closed_form, ellipse_bracket, ellipse_c2_closed_form, f0_closed_form, f_jet, mu_n,
    nonscattering_wavenumbers, wronskian, AnalysisOptions,
};
use nonscatter_core::curves::{builtin, Builtin, CornerDomain, TrigCurve};
use nonscatter_core::czmath::bessel_j_real_zero;
use nonscatter_core::quad::{
    area_integral_oracle, boundary_integral_i, fit_decay, lambda_sweep, Domain, PathSpec,
    QuadOptions,
};
use nonscatter_core::saddle::{find_saddles, SearchRect};
use nonscatter_core::waves::WaveModel;
use nonscatter_core::{Complex64, Execution, I};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

const SWEEP_RATIO_TOL: f64 = 0.05;
const ELLIPSE_RUNTIME_S: f64 = 10.0;
const CARDIOID_CANCELLATION_DIGITS: f64 = 10.0;
const DISK_REL_TOL: f64 = 1e-8;
const WRONSKIAN_ABS_TOL: f64 = 1e-9;
const NONSCATTER_I_TOL: f64 = 1e-8;
const ORACLE_REL_TOL: f64 = 1e-6;
const F0_REL_TOL: f64 = 1e-9;
const BESSEL_IDENTITY_REL_TOL: f64 = 1e-10;
const ELLIPSE_C2_REL_TOL: f64 = 1e-6;
const BRACKET_TOL: f64 = 1e-12;
const SADDLE_TOL: f64 = 1e-10;

struct Outcome {
    failures: usize,
}

impl Outcome {
    fn check(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!(
            "[{}] {id:>2} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
    }
}

fn info(id: u32, detail: String) {
    println!("[info] {id:>2} {detail}");
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn curve(b: Builtin) -> TrigCurve {
    builtin(b).expect("builtin curve")
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|j| lo + step * j as f64).collect()
}

fn ellipse_c1(out: &mut Outcome) {
    let start = Instant::now();
    let e = curve(Builtin::Ellipse { a: 2.0, b: 1.0 });
    let wave = WaveModel::plane(1.0, 0.0);
    let an = analyze(
        &e,
        &wave,
        2.0,
        &AnalysisOptions::default(),
        Execution::Parallel,
    )
    .unwrap();
    let lambdas = grid(2.0, 40.0, 2.0);
    let recs = lambda_sweep(
        Domain::Curve(&e),
        &wave,
        2.0,
        &lambdas,
        1.5,
        an.saddle.g0,
        PathSpec::Contour(&an.path),
        &QuadOptions::panel(),
        Execution::Parallel,
    )
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let c1 = an.report.c1;
    let ratio = recs.last().unwrap().resid / c1;
    out.check(
        1,
        "ellipse C1 convergence",
        (ratio - 1.0).norm() <= SWEEP_RATIO_TOL && elapsed <= ELLIPSE_RUNTIME_S,
        format!(
            "|resid(40)/C1 - 1| = {:.4} (tol {SWEEP_RATIO_TOL}), runtime {elapsed:.2} s (limit {ELLIPSE_RUNTIME_S} s)",
            (ratio - 1.0).norm()
        ),
    );
    let fit = fit_decay(&recs).unwrap();
    info(
        1,
        format!(
            "A + B/lambda tail fit: |A/C1 - 1| = {:.2e}",
            (fit.limit / c1 - 1.0).norm()
        ),
    );
}

fn cardioid_c2(out: &mut Outcome) {
    let card = curve(Builtin::Cardioid);
    let wave = WaveModel::plane(1.0, 0.0);
    let (k, q) = (1.0, 2.0);
    let an = analyze(
        &card,
        &wave,
        q,
        &AnalysisOptions::default(),
        Execution::Parallel,
    )
    .unwrap();
    let c2 = 3.0 * I * (PI / 2.0).sqrt() * k * k * (q - 1.0);
    let lambda = 40.0;
    let contour = boundary_integral_i(
        Domain::Curve(&card),
        &wave,
        q,
        lambda,
        PathSpec::Contour(&an.path),
        &QuadOptions::panel(),
    )
    .unwrap();
    let ratio = contour.value * lambda.powf(2.5) / c2;
    let real = boundary_integral_i(
        Domain::Curve(&card),
        &wave,
        q,
        lambda,
        PathSpec::RealInterval,
        &QuadOptions::default(),
    )
    .unwrap();
    let digits = (real.mass / contour.value.norm()).log10();
    out.check(
        2,
        "cardioid C2 convergence",
        (ratio - 1.0).norm() <= SWEEP_RATIO_TOL && digits >= CARDIOID_CANCELLATION_DIGITS,
        format!(
            "lambda^(5/2) I(40)/C2 = {:.4e}{:+.4e}i, |ratio - 1| = {:.4} (tol {SWEEP_RATIO_TOL}); \
             real-axis cancellation {digits:.1} digits (need {CARDIOID_CANCELLATION_DIGITS})",
            ratio.re,
            ratio.im,
            (ratio - 1.0).norm()
        ),
    );
    info(
        2,
        format!(
            "contour crossing {:?}, library C2 = {:.6e}{:+.6e}i; I(40) contour {:.4e}{:+.4e}i vs real axis {:.4e}{:+.4e}i",
            an.path.crossing,
            an.report.c2.unwrap().re,
            an.report.c2.unwrap().im,
            contour.value.re,
            contour.value.im,
            real.value.re,
            real.value.im
        ),
    );
}

fn deltoid_c2(out: &mut Outcome) {
    let del = curve(Builtin::Deltoid);
    let wave = WaveModel::plane(1.0, 0.0);
    let (k, q) = (1.0, 2.0);
    let u = wave.value([c(3.0, 0.0), c(0.0, 0.0)]).unwrap();
    let c2 = (PI / 12.0).sqrt() * k * k * (q - 1.0) * u;
    let lambdas = grid(2.0, 40.0, 2.0);
    let recs = lambda_sweep(
        Domain::Curve(&del),
        &wave,
        q,
        &lambdas,
        2.5,
        c(3.0, 0.0),
        PathSpec::RealInterval,
        &QuadOptions::default(),
        Execution::Parallel,
    )
    .unwrap();
    let ratio = recs.last().unwrap().resid / c2;
    out.check(
        3,
        "deltoid C2 convergence",
        (ratio - 1.0).norm() <= SWEEP_RATIO_TOL,
        format!(
            "|resid(40)/C2 - 1| = {:.4} (tol {SWEEP_RATIO_TOL})",
            (ratio - 1.0).norm()
        ),
    );
    let fit = fit_decay(&recs).unwrap();
    info(
        3,
        format!(
            "A + B/lambda tail fit: |A/C2 - 1| = {:.2e}",
            (fit.limit / c2 - 1.0).norm()
        ),
    );
}

fn corner_law(out: &mut Outcome) {
    let corner = CornerDomain::new(PI / 6.0, -1.0, -1.0).unwrap();
    let wave = WaveModel::plane(1.0, 0.0);
    let cc = corner_constants(&corner, &wave, 1.0, 2.0).unwrap();
    let lambda = 60.0;
    let r = boundary_integral_i(
        Domain::Corner(&corner),
        &wave,
        2.0,
        lambda,
        PathSpec::RealInterval,
        &QuadOptions::panel(),
    )
    .unwrap();
    let ratio = r.value * lambda * lambda / cc.c;
    out.check(
        4,
        "corner law",
        (ratio - 1.0).norm() <= SWEEP_RATIO_TOL,
        format!(
            "|lambda^2 (I1+I2)/C - 1| at 60 = {:.4} (tol {SWEEP_RATIO_TOL})",
            (ratio - 1.0).norm()
        ),
    );
}

fn disk_closed_forms(out: &mut Outcome) {
    let circ = curve(Builtin::Circle { r: 1.0 });
    let (k, q) = (1.0, 2.0);
    let mut worst: f64 = 0.0;
    for n in [0u32, 1, 4] {
        let wave = WaveModel::harmonic(k, n as i32);
        for lambda in [1.0, 3.0, 10.0] {
            let got = boundary_integral_i(
                Domain::Curve(&circ),
                &wave,
                q,
                lambda,
                PathSpec::AutoShift,
                &QuadOptions::default(),
            )
            .unwrap();
            let want = disk_herglotz_closed_form(lambda, n, k, q).unwrap();
            worst = worst.max(rel(got.value, want));
        }
    }
    let mut worst_plane: f64 = 0.0;
    for lambda in [1.0, 5.0, 10.0] {
        let alpha = 0.3;
        let wave = WaveModel::plane(1.0, alpha);
        let got = area_integral_oracle(
            &circ,
            &wave,
            4.0,
            lambda,
            &QuadOptions::default(),
            Execution::Parallel,
        )
        .unwrap();
        let want = disk_plane_closed_form(lambda, alpha, 1.0, 4.0).unwrap();
        worst_plane = worst_plane.max(rel(got.value, want));
    }
    out.check(
        5,
        "disk closed forms",
        worst <= DISK_REL_TOL && worst_plane <= DISK_REL_TOL,
        format!(
            "Herglotz max rel {worst:.2e}, plane-wave area max rel {worst_plane:.2e} (tol {DISK_REL_TOL:e})"
        ),
    );
}

fn nonscattering_wavenumbers_check(out: &mut Outcome) {
    let (n, q) = (0u32, 4.0);
    let roots = nonscattering_wavenumbers(n, q, 20.0).unwrap();
    let circ = curve(Builtin::Circle { r: 1.0 });
    let mut ok = !roots.is_empty();
    let (mut worst_c, mut worst_i): (f64, f64) = (0.0, 0.0);
    for &k in &roots {
        let cw = wronskian(n, k, q).unwrap().abs();
        worst_c = worst_c.max(cw);
        ok &= cw <= WRONSKIAN_ABS_TOL;
        for lambda in [1.0, 5.0] {
            let i = boundary_integral_i(
                Domain::Curve(&circ),
                &WaveModel::harmonic(k, 0),
                q,
                lambda,
                PathSpec::RealInterval,
                &QuadOptions::default(),
            )
            .unwrap()
            .value
            .norm();
            let scaled = i / (4.0 * PI * PI * k);
            worst_i = worst_i.max(scaled);
            ok &= scaled <= NONSCATTER_I_TOL;
        }
    }
    out.check(
        6,
        "nonscattering wavenumbers",
        ok,
        format!(
            "{} roots below 20, max |C(k)| = {worst_c:.1e} (tol {WRONSKIAN_ABS_TOL:e}), \
             max |I|/(4 pi^2 k) = {worst_i:.1e} (tol {NONSCATTER_I_TOL:e})",
            roots.len()
        ),
    );
}

fn domains() -> Vec<(&'static str, TrigCurve)> {
    vec![
        ("circle", curve(Builtin::Circle { r: 1.0 })),
        ("ellipse", curve(Builtin::Ellipse { a: 2.0, b: 1.0 })),
        ("cardioid", curve(Builtin::Cardioid)),
        ("deltoid", curve(Builtin::Deltoid)),
        ("nonconvex", curve(Builtin::Nonconvex)),
    ]
}

fn waves(k: f64) -> Vec<WaveModel> {
    vec![
        WaveModel::plane(k, 0.3),
        WaveModel::harmonic(k, 0),
        WaveModel::harmonic(k, 2),
    ]
}

fn oracle_equivalence(out: &mut Outcome) {
    let (k, q) = (1.0, 2.0);
    let mut worst: (f64, String) = (0.0, String::new());
    for (name, cv) in domains() {
        for wave in waves(k) {
            for lambda in [1.0, 5.0] {
                let area = area_integral_oracle(
                    &cv,
                    &wave,
                    q,
                    lambda,
                    &QuadOptions::default(),
                    Execution::Parallel,
                )
                .unwrap();
                let bnd = boundary_integral_i(
                    Domain::Curve(&cv),
                    &wave,
                    q,
                    lambda,
                    PathSpec::RealInterval,
                    &QuadOptions::default(),
                )
                .unwrap();
                let r = rel(area.value * ((q - 1.0) * k * k), bnd.value);
                if r > worst.0 {
                    worst = (r, format!("{name}, lambda={lambda}"));
                }
            }
        }
    }
    out.check(
        7,
        "oracle equivalence",
        worst.0 <= ORACLE_REL_TOL,
        format!(
            "max rel gap {:.2e} at {} (tol {ORACLE_REL_TOL:e})",
            worst.0, worst.1
        ),
    );
}

fn f0_identity(out: &mut Outcome) {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (_, cv) in domains() {
        let saddles = find_saddles(&cv, SearchRect::default(), 1e-12).unwrap();
        for (k, q) in [(1.0, 2.0), (1.5, 4.0), (0.7, 0.5)] {
            for wave in waves(k) {
                for s in &saddles {
                    let fj = f_jet(&cv, &wave, q, s, 0.1).unwrap();
                    let want = f0_closed_form(&cv, &wave, q, s.t0).unwrap();
                    // Cusp saddles have x′(t₀) = 0: both sides vanish, so measure against the natural scale.
                    let u = wave.value(cv.point(s.t0)).unwrap();
                    let natural = k * k * (q - 1.0).abs() * u.norm().max(1.0);
                    let scale = if want.norm() < 1e-12 * natural {
                        natural
                    } else {
                        want.norm()
                    };
                    let err = (fj.f0 - want).norm() / scale;
                    worst = worst.max(err);
                    count += 1;
                }
            }
        }
    }
    out.check(
        8,
        "f(t0) identity",
        worst <= F0_REL_TOL,
        format!("{count} saddle/wave/(k,q) cases, max rel {worst:.2e} (tol {F0_REL_TOL:e}); circle has no saddle"),
    );
}

fn bessel_identity(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(20261016);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n: i32 = rng.gen_range(-6..=6);
        let mut draw = || {
            let r = 10.0 * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen_range(-PI..PI))
        };
        let (a, b) = (draw(), draw());
        let (lhs, rhs) = bessel_contour_identity(n, a, b).unwrap();
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    out.check(
        9,
        "Bessel contour-integral identity",
        worst <= BESSEL_IDENTITY_REL_TOL,
        format!("20 random (n, a, b), max rel {worst:.2e} (tol {BESSEL_IDENTITY_REL_TOL:e})"),
    );
}

fn ellipse_c2_pipeline(out: &mut Outcome) {
    let (a, b, n, q) = (2.0, 1.0, 3, 2.0);
    let k = bessel_j_real_zero(n, 0.5, 0.01).unwrap() / 5f64.sqrt();
    let wave = WaveModel::harmonic(k, n);
    let e = curve(Builtin::Ellipse { a, b });
    let an = analyze(
        &e,
        &wave,
        q,
        &AnalysisOptions::default(),
        Execution::Parallel,
    )
    .unwrap();
    let got = an.report.c2.unwrap_or_default();
    let want = ellipse_c2_closed_form(a, b, k, q, n).unwrap();
    let r = rel(got, want);
    let mu = mu_n(6).unwrap();
    let (bb, aa) = (1.0f64, mu.sqrt());
    let bracket = ellipse_bracket(aa, bb, 6).abs() / aa.powi(4);
    out.check(
        10,
        "ellipse C2 pipeline vs closed form",
        r <= ELLIPSE_C2_REL_TOL && bracket <= BRACKET_TOL,
        format!("rel {r:.2e} (tol {ELLIPSE_C2_REL_TOL:e}); bracket at mu_6 {bracket:.1e} (tol {BRACKET_TOL:e})"),
    );
}

fn saddle_fixtures(out: &mut Outcome) {
    let find = |b: Builtin| find_saddles(&curve(b), SearchRect::default(), 1e-12).unwrap();
    let nearest = |list: &[nonscatter_core::saddle::SaddlePoint], t: Complex64| {
        list.iter()
            .map(|s| (s.t0 - t).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let e = nearest(
        &find(Builtin::Ellipse { a: 2.0, b: 1.0 }),
        c(0.0, 0.5f64.atanh()),
    );
    let nc = nearest(
        &find(Builtin::Nonconvex),
        c(0.0, 0.5 * (2.0 + 7f64.sqrt()).ln()),
    );
    let cd = nearest(&find(Builtin::Cardioid), c(0.0, 0.0));
    let circle_empty = find(Builtin::Circle { r: 1.0 }).is_empty();
    let worst = e.max(nc).max(cd);
    out.check(
        11,
        "saddle fixtures",
        worst <= SADDLE_TOL && circle_empty,
        format!(
            "max distance {worst:.1e} (tol {SADDLE_TOL:e}), circle saddle-free: {circle_empty}"
        ),
    );
}

fn main() {
    let mut out = Outcome { failures: 0 };
    ellipse_c1(&mut out);
    cardioid_c2(&mut out);
    deltoid_c2(&mut out);
    corner_law(&mut out);
    disk_closed_forms(&mut out);
    nonscattering_wavenumbers_check(&mut out);
    oracle_equivalence(&mut out);
    f0_identity(&mut out);
    bessel_identity(&mut out);
    ellipse_c2_pipeline(&mut out);
    saddle_fixtures(&mut out);
    println!("acceptance: {} of 11 criteria failed", out.failures);
    if out.failures > 0 {
        std::process::exit(1);
    }
}
