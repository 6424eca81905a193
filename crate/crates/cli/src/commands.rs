use crate::scenario::{ConfigError, DiskSpec, PathChoice, Scenario};
use nonscatter_core::asymptotics::{
    analyze, corner_constants, disk_herglotz_closed_form, disk_plane_closed_form,
    nonscattering_wavenumbers, select_saddle, wronskian, AnalysisOptions, Verdict,
};
use nonscatter_core::curves::builtin;
use nonscatter_core::curves::Builtin;
use nonscatter_core::quad::{
    area_integral_oracle, boundary_integral_i, check_star_shaped, fit_decay, lambda_sweep, Domain,
    PathSpec, QuadMode, QuadOptions, SweepRecord,
};
use nonscatter_core::waves::WaveModel;
use nonscatter_core::{Complex64, Error, Execution};
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                Error::InvalidParams(_)
                | Error::InvalidShapeParams(_)
                | Error::StarShapeViolated => 2,
                Error::NoSaddle
                | Error::DegenerateSaddle(_)
                | Error::EndpointAboveLevel { .. }
                | Error::NoAdmissiblePath(_)
                | Error::MarginViolated { .. }
                | Error::BranchUnresolvable { .. } => 4,
                _ => 5,
            },
        }
    }
}

/// Result of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    Inconclusive,
}

pub struct Context {
    pub out: PathBuf,
    pub nodes: Option<usize>,
    pub tol: Option<f64>,
    pub exec: Execution,
}

impl Context {
    pub fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.out.join(name);
        std::fs::write(&path, contents).map_err(|source| CliError::Io { path, source })
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(value).expect("output serializes");
        s.push('\n');
        self.write(name, &s)
    }

    pub fn prepare(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out).map_err(|source| CliError::Io {
            path: self.out.clone(),
            source,
        })
    }
}

fn analysis_options(sc: &Scenario) -> AnalysisOptions {
    AnalysisOptions {
        grid: sc.grid.unwrap_or_default(),
        ..AnalysisOptions::default()
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::ScattersByC1 => "scatters_by_c1",
        Verdict::ScattersByC2 => "scatters_by_c2",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn cmd_analyze(sc: &Scenario, ctx: &Context) -> Result<Status, CliError> {
    let curve = sc.curve()?;
    let wave = sc.wave_model()?;
    let an = analyze(&curve, &wave, sc.q, &analysis_options(sc), ctx.exec)?;
    ctx.write_json("report.json", &an.report)?;
    println!("saddle t0 = {} + {}i", an.saddle.t0.re, an.saddle.t0.im);
    println!("verdict: {}", verdict_name(an.report.verdict));
    Ok(match an.report.verdict {
        Verdict::Inconclusive => Status::Inconclusive,
        _ => Status::Done,
    })
}

fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from("lambda,i_re,i_im,resid_re,resid_im,nodes_used\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.lambda, r.i_raw.re, r.i_raw.im, r.resid.re, r.resid.im, r.nodes_used
        );
    }
    out
}

pub fn cmd_sweep(sc: &Scenario, ctx: &Context) -> Result<Status, CliError> {
    let wave = sc.wave_model()?;
    let lambdas = sc.lambda_values()?;
    let spec = sc.sweep.unwrap_or_default();
    let (records, p, g0, path_name) = if let Ok(corner) = sc.corner() {
        let opts = sc.quad_options(QuadMode::PanelGauss, ctx.nodes, ctx.tol)?;
        let p = spec.p.unwrap_or(2.0);
        let g0 = spec.g0.unwrap_or_default();
        let recs = lambda_sweep(
            Domain::Corner(&corner),
            &wave,
            sc.q,
            &lambdas,
            p,
            g0,
            PathSpec::RealInterval,
            &opts,
            ctx.exec,
        )?;
        (recs, p, g0, PathChoice::RealInterval)
    } else {
        let curve = sc.curve()?;
        let choice = spec.path.unwrap_or(PathChoice::Contour);
        let needs_analysis = choice == PathChoice::Contour || spec.p.is_none() || spec.g0.is_none();
        let an = if needs_analysis {
            Some(analyze(
                &curve,
                &wave,
                sc.q,
                &analysis_options(sc),
                ctx.exec,
            )?)
        } else {
            None
        };
        let p = spec
            .p
            .or(an.as_ref().map(|a| a.report.order))
            .unwrap_or_default();
        let g0 = spec
            .g0
            .or(an.as_ref().map(|a| a.saddle.g0))
            .unwrap_or_default();
        let (path, mode) = match choice {
            PathChoice::RealInterval => (PathSpec::RealInterval, QuadMode::PeriodicTrapezoid),
            PathChoice::AutoShift => (PathSpec::AutoShift, QuadMode::PeriodicTrapezoid),
            PathChoice::Contour => (
                PathSpec::Contour(&an.as_ref().expect("analysed").path),
                QuadMode::PanelGauss,
            ),
        };
        let opts = sc.quad_options(mode, ctx.nodes, ctx.tol)?;
        let recs = lambda_sweep(
            Domain::Curve(&curve),
            &wave,
            sc.q,
            &lambdas,
            p,
            g0,
            path,
            &opts,
            ctx.exec,
        )?;
        (recs, p, g0, choice)
    };
    ctx.write("sweep.csv", &sweep_csv(&records))?;
    let fit = fit_decay(&records).ok();
    ctx.write_json(
        "sweep_summary.json",
        &json!({ "path": path_name, "p": p, "g0": g0, "fit": fit }),
    )?;
    if let Some(f) = fit {
        println!("extrapolated limit: {} + {}i", f.limit.re, f.limit.im);
    }
    Ok(Status::Done)
}

pub fn cmd_levelset(sc: &Scenario, ctx: &Context) -> Result<Status, CliError> {
    let curve = sc.curve()?;
    let (s, grid, path) = select_saddle(&curve, &analysis_options(sc), ctx.exec)?;
    ctx.write("levelset_grid.csv", &grid.to_csv())?;
    let mut lines = String::from("polyline,r,s\n");
    for (j, line) in grid.polylines.iter().enumerate() {
        for (r, s) in line {
            let _ = writeln!(lines, "{j},{r},{s}");
        }
    }
    ctx.write("levelset_polylines.csv", &lines)?;
    let mut contour = String::from("r,s\n");
    for t in &path.waypoints {
        let _ = writeln!(contour, "{},{}", t.re, t.im);
    }
    ctx.write("levelset_contour.csv", &contour)?;
    ctx.write("levelset.svg", &grid.to_svg(Some(&path)))?;
    println!(
        "saddle t0 = {} + {}i, {} polylines",
        s.t0.re,
        s.t0.im,
        grid.polylines.len()
    );
    Ok(Status::Done)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

const COMPARE_HEADER: &str = "lambda,closed_re,closed_im,quad_re,quad_im,rel_err\n";

pub fn cmd_disk(sc: &Scenario, ctx: &Context) -> Result<Status, CliError> {
    let spec = sc
        .disk
        .ok_or_else(|| CliError::Config("disk command needs a \"disk\" block".into()))?;
    let (k, q) = (sc.k, sc.q);
    let unit = builtin(Builtin::Circle { r: 1.0 })?;
    match spec {
        DiskSpec::Wavenumbers { n, k_max } => {
            let roots = nonscattering_wavenumbers(n, q, k_max)?;
            let mut out = String::from("n,k,abs_c\n");
            for kj in &roots {
                let _ = writeln!(out, "{n},{kj},{}", wronskian(n, *kj, q)?.abs());
            }
            ctx.write("disk.csv", &out)?;
            println!("{} nonscattering wavenumbers up to {k_max}", roots.len());
        }
        DiskSpec::Herglotz { n } => {
            let c = wronskian(n, k, q)?;
            ctx.write("disk_constant.csv", &format!("n,k,q,c\n{n},{k},{q},{c}\n"))?;
            if sc.lambdas.is_some() {
                let wave = WaveModel::harmonic(k, n as i32);
                let opts = sc.quad_options(QuadMode::PeriodicTrapezoid, ctx.nodes, ctx.tol)?;
                let rows = ctx.exec.try_map(&sc.lambda_values()?, |&l| {
                    let closed = disk_herglotz_closed_form(l, n, k, q)?;
                    let quad = boundary_integral_i(
                        Domain::Curve(&unit),
                        &wave,
                        q,
                        l,
                        PathSpec::AutoShift,
                        &opts,
                    )?;
                    Ok::<_, Error>((l, closed, quad.value))
                })?;
                ctx.write("disk.csv", &compare_csv(&rows))?;
            }
            println!("C = {c}");
        }
        DiskSpec::Plane { alpha } => {
            let wave = WaveModel::plane(k, alpha);
            let opts = sc.quad_options(QuadMode::PeriodicTrapezoid, ctx.nodes, ctx.tol)?;
            let rows = sc
                .lambda_values()?
                .into_iter()
                .map(|l| {
                    let closed = disk_plane_closed_form(l, alpha, k, q)?;
                    let quad = area_integral_oracle(&unit, &wave, q, l, &opts, ctx.exec)?;
                    Ok((l, closed, quad.value))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            ctx.write("disk.csv", &compare_csv(&rows))?;
        }
    }
    Ok(Status::Done)
}

fn compare_csv(rows: &[(f64, Complex64, Complex64)]) -> String {
    let mut out = String::from(COMPARE_HEADER);
    let mut worst: f64 = 0.0;
    for (l, closed, quad) in rows {
        let r = rel(*quad, *closed);
        worst = worst.max(r);
        let _ = writeln!(
            out,
            "{l},{},{},{},{},{r}",
            closed.re, closed.im, quad.re, quad.im
        );
    }
    println!("max relative deviation {worst:e}");
    out
}

pub fn cmd_corner(sc: &Scenario, ctx: &Context) -> Result<Status, CliError> {
    let corner = sc.corner()?;
    let wave = sc.wave_model()?;
    let (k, q) = (sc.k, sc.q);
    let cc = corner_constants(&corner, &wave, k, q)?;
    let opts = sc.quad_options(QuadMode::PanelGauss, ctx.nodes, ctx.tol)?;
    let lambdas = sc.lambda_values()?;
    let recs = lambda_sweep(
        Domain::Corner(&corner),
        &wave,
        q,
        &lambdas,
        2.0,
        Complex64::default(),
        PathSpec::RealInterval,
        &opts,
        ctx.exec,
    )?;
    let u0 = wave.value([Complex64::default(), Complex64::default()])?;
    let scale = 1e-8 * k * k * (q - 1.0).abs() * u0.norm().max(1.0);
    let scatters = cc.c.norm() > scale;
    let mut out = String::from("lambda,scaled_re,scaled_im,ratio_re,ratio_im\n");
    for r in &recs {
        let (a, b) = if scatters {
            let ratio = r.resid / cc.c;
            (ratio.re.to_string(), ratio.im.to_string())
        } else {
            (String::new(), String::new())
        };
        let _ = writeln!(out, "{},{},{},{a},{b}", r.lambda, r.resid.re, r.resid.im);
    }
    ctx.write("corner.csv", &out)?;
    let verdict = if scatters {
        "scatters_by_corner"
    } else {
        "inconclusive"
    };
    ctx.write_json(
        "corner.json",
        &json!({ "c1_seg": cc.c1_seg, "c2_seg": cc.c2_seg, "C": cc.c, "verdict": verdict }),
    )?;
    println!("C = {} + {}i, verdict: {verdict}", cc.c.re, cc.c.im);
    Ok(if scatters {
        Status::Done
    } else {
        Status::Inconclusive
    })
}

pub fn cmd_oracle(sc: &Scenario, ctx: &Context) -> Result<Status, CliError> {
    let curve = sc.curve()?;
    check_star_shaped(&curve)?;
    let wave = sc.wave_model()?;
    let (k, q) = (sc.k, sc.q);
    let opts: QuadOptions = sc.quad_options(QuadMode::PeriodicTrapezoid, ctx.nodes, ctx.tol)?;
    let mut out = String::from("lambda,i_scaled_re,i_scaled_im,area_re,area_im,rel_gap\n");
    let mut worst: f64 = 0.0;
    for l in sc.lambda_values()? {
        let i = boundary_integral_i(
            Domain::Curve(&curve),
            &wave,
            q,
            l,
            PathSpec::RealInterval,
            &opts,
        )?
        .value;
        let scaled = i / (k * k * (q - 1.0));
        let area = area_integral_oracle(&curve, &wave, q, l, &opts, ctx.exec)?.value;
        let gap = rel(scaled, area);
        worst = worst.max(gap);
        let _ = writeln!(
            out,
            "{l},{},{},{},{},{gap}",
            scaled.re, scaled.im, area.re, area.im
        );
    }
    ctx.write("oracle.csv", &out)?;
    println!("max relative gap {worst:e}");
    Ok(Status::Done)
}

pub fn output_dir(cli_out: Option<&Path>, sc: &Scenario) -> PathBuf {
    cli_out
        .map(Path::to_path_buf)
        .or_else(|| sc.output.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}
