use nonscatter_core::asymptotics::{
    analyze, corner_constants, ellipse_c2_closed_form, f0_closed_form, f_jet, AnalysisOptions,
    Verdict,
};
use nonscatter_core::curves::{builtin, Builtin, CornerDomain};
use nonscatter_core::czmath::bessel_j_real_zero;
use nonscatter_core::quad::{
    boundary_integral_i, boundary_integral_i_byparts, lambda_sweep, Domain, PathSpec, QuadOptions,
};
use nonscatter_core::saddle::{find_saddles, validate_contour, SearchRect};
use nonscatter_core::waves::WaveModel;
use nonscatter_core::{Complex64, Error, Execution};
use std::f64::consts::PI;

fn ellipse() -> nonscatter_core::curves::TrigCurve {
    builtin(Builtin::Ellipse { a: 2.0, b: 1.0 }).unwrap()
}

#[test]
fn ellipse_plane_wave_scatters_at_first_order() {
    let e = ellipse();
    let wave = WaveModel::plane(1.0, 0.0);
    let an = analyze(
        &e,
        &wave,
        2.0,
        &AnalysisOptions::default(),
        Execution::Parallel,
    )
    .unwrap();
    assert_eq!(an.report.verdict, Verdict::ScattersByC1);
    assert_eq!(an.report.order, 1.5);
    assert!((an.report.g0 - Complex64::new(3f64.sqrt(), 0.0)).norm() < 1e-12);
    let rep = validate_contour(&e, &an.path, &an.saddle, an.path.margin, an.path.rho).unwrap();
    assert!(rep.max_excess <= 0.0);
}

#[test]
fn ellipse_harmonic_at_bessel_root_needs_second_order() {
    let n = 3;
    let k = bessel_j_real_zero(n, 0.5, 0.01).unwrap() / 5f64.sqrt();
    let e = ellipse();
    let wave = WaveModel::harmonic(k, n);
    let an = analyze(
        &e,
        &wave,
        2.0,
        &AnalysisOptions::default(),
        Execution::Parallel,
    )
    .unwrap();
    assert_eq!(an.report.verdict, Verdict::ScattersByC2);
    assert!(an.report.c1.norm() < 1e-9);
    let want = ellipse_c2_closed_form(2.0, 1.0, k, 2.0, n).unwrap();
    assert!((an.report.c2.unwrap() - want).norm() < 1e-6 * want.norm());
}

#[test]
fn circle_has_no_saddle() {
    let c = builtin(Builtin::Circle { r: 1.0 }).unwrap();
    let r = analyze(
        &c,
        &WaveModel::plane(1.0, 0.0),
        2.0,
        &AnalysisOptions::default(),
        Execution::Sequential,
    );
    assert!(matches!(r, Err(Error::NoSaddle)));
}

#[test]
fn f0_identity_for_h3_on_every_saddle() {
    for b in [
        Builtin::Ellipse { a: 2.0, b: 1.0 },
        Builtin::Nonconvex,
        Builtin::Cardioid,
        Builtin::Deltoid,
    ] {
        let cv = builtin(b).unwrap();
        for s in find_saddles(&cv, SearchRect::default(), 1e-12).unwrap() {
            let wave = WaveModel::harmonic(1.3, 3);
            let got = f_jet(&cv, &wave, 3.0, &s, 0.1).unwrap().f0;
            let want = f0_closed_form(&cv, &wave, 3.0, s.t0).unwrap();
            let scale = want
                .norm()
                .max(wave.value(cv.point(s.t0)).unwrap().norm().max(1.0) * 1.3 * 1.3 * 2.0 * 1e-6);
            assert!(
                (got - want).norm() <= 1e-9 * scale,
                "{b:?} {} {got} {want}",
                s.t0
            );
        }
    }
}

#[test]
fn integration_by_parts_matches_direct_integral() {
    let e = ellipse();
    let wave = WaveModel::plane(1.2, 0.4);
    let g0 = Complex64::new(3f64.sqrt(), 0.0);
    let opts = QuadOptions::default().with_normalization(g0);
    for lambda in [0.5, 3.0, 12.0] {
        let direct = boundary_integral_i(
            Domain::Curve(&e),
            &wave,
            2.0,
            lambda,
            PathSpec::RealInterval,
            &opts,
        )
        .unwrap()
        .value;
        let parts =
            boundary_integral_i_byparts(&e, &wave, 2.0, lambda, PathSpec::RealInterval, &opts)
                .unwrap()
                .value;
        assert!(
            (parts - direct * lambda).norm() < 1e-9 * (direct * lambda).norm(),
            "{lambda}"
        );
    }
}

#[test]
fn contour_and_real_axis_agree() {
    let e = ellipse();
    let wave = WaveModel::plane(1.0, 0.0);
    let an = analyze(
        &e,
        &wave,
        2.0,
        &AnalysisOptions::default(),
        Execution::Parallel,
    )
    .unwrap();
    let opts = QuadOptions::panel().with_normalization(an.saddle.g0);
    for lambda in [1.0, 8.0] {
        let a = boundary_integral_i(
            Domain::Curve(&e),
            &wave,
            2.0,
            lambda,
            PathSpec::Contour(&an.path),
            &opts,
        )
        .unwrap()
        .value;
        let b = boundary_integral_i(
            Domain::Curve(&e),
            &wave,
            2.0,
            lambda,
            PathSpec::RealInterval,
            &opts,
        )
        .unwrap()
        .value;
        assert!(
            (a - b).norm() < 1e-9 * b.norm().max(1e-300),
            "{lambda}: {a} vs {b}"
        );
    }
}

#[test]
fn corner_segment_constants_differ_by_tangent_term() {
    let corner = CornerDomain::new(PI / 6.0, -1.0, -1.0).unwrap();
    let wave = WaveModel::plane(1.0, 0.0);
    let cc = corner_constants(&corner, &wave, 1.0, 2.0).unwrap();
    // Plane wave α = 0: u = e^{ix₁}, ∂₁₁u = −1, ∂₂₂u = 0, u(0) = 1.
    let m = corner.slope();
    let want = 2.0 * m / (1.0 + m * m) * Complex64::new(2.0 - 1.0, 0.0);
    assert!((cc.c2_seg - cc.c1_seg - want).norm() < 1e-10);
}

#[test]
fn sequential_and_parallel_sweeps_are_identical() {
    let e = ellipse();
    let wave = WaveModel::plane(1.0, 0.0);
    let g0 = Complex64::new(3f64.sqrt(), 0.0);
    let lambdas: Vec<f64> = (1..=12).map(|j| 2.0 * j as f64).collect();
    let run = |exec| {
        lambda_sweep(
            Domain::Curve(&e),
            &wave,
            2.0,
            &lambdas,
            1.5,
            g0,
            PathSpec::RealInterval,
            &QuadOptions::default(),
            exec,
        )
        .unwrap()
    };
    let (a, b) = (run(Execution::Sequential), run(Execution::Parallel));
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.resid, y.resid);
        assert_eq!(x.nodes_used, y.nodes_used);
    }
}
