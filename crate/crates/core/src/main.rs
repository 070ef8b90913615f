use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cheeger_core::cantor::build_omega_eps;
use cheeger_core::config::{prepare_output_dir, require_file, RunConfig};
use cheeger_core::domain::ObstacleKind;
use cheeger_core::error::exit;
use cheeger_core::measure::{measure, Measures};
use cheeger_core::porous::{
    build_omega0, default_sequences, porous_measures, validate_constraints, IndexPair, SequenceParams, ValidationReport,
};
use cheeger_core::raster::{rasterize_opts, read_pgm};
use cheeger_core::render::{default_triptych, render_bump, render_domain, render_overlay, render_triptych, ZoomWindow};
use cheeger_core::solver::{minimality_gap, solve_cheeger, ThresholdPolicy};
use cheeger_core::verify::{
    check_arc_min_lemma, check_case3_radius, check_density_estimate, check_half_disk_inclusion, check_ph_property,
    competitor_sweep, run_angle_suite, VerificationReport,
};
use cheeger_core::{DomainSpec, Error, IntervalValue, Point2, Result};

/// Build, measure, solve, verify and render self-Cheeger planar domains.
#[derive(Parser, Debug)]
#[command(name = "cheeger", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for every randomized step; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a domain and write its JSON spec.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Rigorous measures of a domain spec.
    Measure {
        /// Domain spec JSON.
        spec: PathBuf,
        /// Where to write the measures JSON (default: OUT/measures.json).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the grid Cheeger solver on a domain spec.
    Solve(SolveArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Write SVG figures.
    Render(RenderArgs),
}

#[derive(Subcommand, Debug)]
enum BuildKind {
    /// Unit disk minus the bumps over a fat Cantor set.
    Cantor {
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Unit disk minus holes accumulating at the boundary.
    Porous {
        #[arg(long)]
        eps1: Option<f64>,
        #[arg(long)]
        safety: Option<f64>,
        /// Largest j1 block kept.
        #[arg(long)]
        depth: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Domain spec JSON.
    spec: PathBuf,
    /// Grid side in pixels.
    #[arg(long)]
    grid: Option<usize>,
    /// Samples per axis in pixels that need subsampling.
    #[arg(long)]
    subsamples: Option<usize>,
    /// Fixed threshold instead of the configured scan.
    #[arg(long)]
    threshold: Option<f64>,
    /// Result JSON (default: OUT/result.json).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Relaxed indicator as PGM (default: OUT/indicator.pgm).
    #[arg(long)]
    pgm: Option<PathBuf>,
    /// Also write an SVG overlay of the set on the domain.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Lemma21,
    Angles,
    Competitor,
    Constraints,
    Ph,
    Case3,
    Density,
    HalfDisk,
}

const FAST_SUITES: [Suite; 6] =
    [Suite::Lemma21, Suite::Angles, Suite::Competitor, Suite::Constraints, Suite::Ph, Suite::Case3];

#[derive(Args, Debug)]
struct VerifyArgs {
    suites: Vec<Suite>,
    /// Run every suite that needs no solver run.
    #[arg(long)]
    all: bool,
    /// Sample count for the sampled suites named on the command line.
    #[arg(long)]
    trials: Option<usize>,
    /// Largest j1 for the competitor sweep.
    #[arg(long)]
    j1_max: Option<u32>,
    /// Domain for the solver-based suites.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Grid side for the solver-based suites.
    #[arg(long)]
    grid: Option<usize>,
    /// Aggregated report (default: OUT/verify.json).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    spec: Option<PathBuf>,
    /// Draw a single bump F_delta of this half-width instead of a domain.
    #[arg(long, value_name = "DELTA")]
    bump: Option<f64>,
    /// Close-up window `cx,cy,half_width`; repeat for several panels.
    #[arg(long, value_name = "CX,CY,HW")]
    zoom: Vec<String>,
    /// Close-ups at the configured or default windows.
    #[arg(long)]
    triptych: bool,
    /// Indicator PGM written by `solve`, drawn over the domain.
    #[arg(long)]
    indicator: Option<PathBuf>,
    /// Level at which the indicator is cut.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Image side in SVG units.
    #[arg(long)]
    size: Option<u32>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).format_timestamp(None).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = cli.out {
        cfg.output_dir = o;
    }
    match cli.command {
        Command::Build { kind } => cmd_build(&cfg, kind),
        Command::Measure { spec, json } => cmd_measure(&cfg, &spec, json),
        Command::Solve(a) => cmd_solve(cfg, a),
        Command::Verify(a) => cmd_verify(cfg, a),
        Command::Render(a) => cmd_render(&cfg, a),
    }
}

fn out_path(cfg: &RunConfig, given: Option<PathBuf>, name: &str) -> Result<PathBuf> {
    let path = given.unwrap_or_else(|| cfg.output_dir.join(name));
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => prepare_output_dir(dir)?,
        _ => {}
    }
    Ok(path)
}

fn print_table(headers: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        println!("{}", parts.join("  ").trim_end());
    };
    line(headers.to_vec());
    line(
        widths
            .iter()
            .map(|&w| &"----------------------------------------------------------------"[..w.min(64)])
            .collect(),
    );
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
}

fn fmt_interval(v: &IntervalValue) -> [String; 3] {
    [format!("{:.12}", v.mid()), format!("[{:.15e}, {:.15e}]", v.lo, v.hi), format!("{:.2e}", v.width())]
}

fn sequence_of(cfg: &RunConfig, eps1: Option<f64>, safety: Option<f64>) -> Result<SequenceParams> {
    default_sequences(eps1.unwrap_or(cfg.porous.eps1), safety.unwrap_or(cfg.porous.safety))
}

fn validation_rows(rep: &ValidationReport) -> Vec<Vec<String>> {
    rep.checks
        .iter()
        .map(|c| {
            vec![
                c.condition.label().to_string(),
                if c.passed { "pass".into() } else { "FAIL".into() },
                format!("{:.3e}", c.worst_margin),
                c.detail.clone(),
            ]
        })
        .collect()
}

fn cmd_build(cfg: &RunConfig, kind: BuildKind) -> Result<i32> {
    match kind {
        BuildKind::Cantor { eps, depth, output } => {
            let eps = eps.unwrap_or(cfg.cantor.eps);
            let depth = depth.unwrap_or(cfg.cantor.depth);
            let path = out_path(cfg, output, "cantor.json")?;
            let spec = build_omega_eps(eps, depth)?;
            spec.save(&path)?;
            print_table(
                &["kind", "eps", "depth", "bumps", "spec"],
                &[vec![
                    spec.kind_name().into(),
                    eps.to_string(),
                    depth.to_string(),
                    spec.obstacle_count().to_string(),
                    path.display().to_string(),
                ]],
            );
            println!("{}", spec.truncation_note);
        }
        BuildKind::Porous { eps1, safety, depth, output } => {
            let depth = depth.unwrap_or(cfg.porous.depth);
            let path = out_path(cfg, output, "porous.json")?;
            let seq = sequence_of(cfg, eps1, safety)?;
            let rep = validate_constraints(&seq, depth)?;
            print_table(&["condition", "status", "worst margin", "detail"], &validation_rows(&rep));
            if let Some(c) = rep.checks.iter().find(|c| !c.passed) {
                return Err(Error::InvalidParameters { condition: c.condition, detail: c.detail.clone() });
            }
            let spec = build_omega0(&seq, depth, IndexPair::first())?;
            spec.save(&path)?;
            println!();
            print_table(
                &["kind", "depth j1", "holes", "tail certified", "spec"],
                &[vec![
                    spec.kind_name().into(),
                    depth.to_string(),
                    spec.obstacle_count().to_string(),
                    rep.tail_certified.to_string(),
                    path.display().to_string(),
                ]],
            );
            println!("{}", spec.truncation_note);
        }
    }
    Ok(exit::SUCCESS)
}

fn measure_rows(m: &Measures) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let mut push = |name: &str, v: &IntervalValue| {
        let [mid, iv, w] = fmt_interval(v);
        rows.push(vec![name.to_string(), mid, iv, w]);
    };
    push("perimeter", &m.perimeter);
    push("area", &m.area);
    push("boundary H1", &m.boundary_h1);
    if let Some(g) = &m.cantor_gap {
        push("cantor gap", g);
    }
    if let Some(d) = &m.delta {
        push("delta", d);
    }
    rows
}

fn cmd_measure(cfg: &RunConfig, spec_path: &Path, json: Option<PathBuf>) -> Result<i32> {
    require_file(spec_path)?;
    let path = out_path(cfg, json, "measures.json")?;
    let spec = DomainSpec::load(spec_path)?;
    let m = measure(&spec)?;
    print_table(&["measure", "value", "interval", "width"], &measure_rows(&m));
    if let Some(s) = m.strict_inequality_certified {
        println!("P < H1(boundary) certified: {s}");
    }
    if let (Some(ok), Some(h)) = (m.delta_bound_ok, m.h_upper) {
        println!("delta < 2^-7: {ok}");
        println!("h upper bound 2(1+delta): {h:.12}");
    }
    std::fs::write(&path, serde_json::to_string_pretty(&m)? + "\n")?;
    Ok(exit::SUCCESS)
}

fn cmd_solve(mut cfg: RunConfig, a: SolveArgs) -> Result<i32> {
    require_file(&a.spec)?;
    if let Some(g) = a.grid {
        cfg.raster.grid = g;
    }
    if let Some(k) = a.subsamples {
        cfg.raster.subsamples = k;
    }
    if let Some(t) = a.threshold {
        cfg.solver.threshold_policy = ThresholdPolicy::Fixed(t);
    }
    cfg.validate()?;
    let json_path = out_path(&cfg, a.json, "result.json")?;
    let pgm_path = out_path(&cfg, a.pgm, "indicator.pgm")?;
    let svg_path = match a.svg {
        Some(p) => Some(out_path(&cfg, Some(p), "")?),
        None => None,
    };
    let spec = DomainSpec::load(&a.spec)?;
    let field = rasterize_opts(&spec, cfg.raster.grid, &cfg.raster.options())?;
    let result = solve_cheeger(&field, &cfg.solver)?;
    let gap = minimality_gap(&result, &field)?;
    result.write_json(&json_path, Some(gap))?;
    result.indicator.write_pgm(&pgm_path)?;
    if let Some(p) = svg_path {
        render_overlay(&spec, &result.indicator, result.threshold, cfg.render.size)?.write(&p)?;
    }
    print_table(
        &["grid", "h estimate", "perimeter", "area", "threshold", "gap", "converged", "steps", "seconds"],
        &[vec![
            cfg.raster.grid.to_string(),
            format!("{:.6}", result.h_estimate),
            format!("{:.6}", result.perimeter),
            format!("{:.6}", result.area),
            format!("{:.3}", result.threshold),
            format!("{gap:.4}"),
            result.converged.to_string(),
            result.outer_steps.to_string(),
            format!("{:.1}", result.seconds),
        ]],
    );
    if !field.excluded.is_empty() {
        println!("{} holes below half a pixel were left out of the raster", field.excluded.len());
    }
    Ok(exit::SUCCESS)
}

fn competitor_report(seq: &SequenceParams, depth: u32) -> Result<VerificationReport> {
    let sweep = competitor_sweep(seq, depth)?;
    let mut rep = VerificationReport::new("competitor", json!({ "j1_max": depth }));
    for r in &sweep.reports {
        if let Some(why) = &r.skipped {
            rep.skipped += 1;
            rep.record(-f64::MIN_POSITIVE, 0.0, || format!("{:?} skipped: {why}", r.j));
            continue;
        }
        let margin = if r.passed { -r.delta_p_upper } else { (-r.delta_p_upper).min(-f64::MIN_POSITIVE) };
        rep.record(margin, 0.0, || format!("{:?}: {}", r.j, r.failed_step.clone().unwrap_or_default()));
    }
    for j in &sweep.inequality_failures {
        rep.record(-1.0, 0.0, || format!("{j:?}: 2 r (pi + 1) >= (eps/2)^3 / 2^11"));
    }
    Ok(rep)
}

fn constraints_report(seq: &SequenceParams, depth: u32) -> Result<VerificationReport> {
    let v = validate_constraints(seq, depth)?;
    let mut rep =
        VerificationReport::new("constraints", json!({ "j1_max": depth, "checked_indices": v.checked_indices }));
    for c in &v.checks {
        let margin = if c.passed { c.worst_margin.max(0.0) } else { c.worst_margin.min(-f64::MIN_POSITIVE) };
        rep.record(margin, 0.0, || format!("{}: {}", c.condition, c.detail));
    }
    let spec = build_omega0(seq, depth, IndexPair::first())?;
    let m = porous_measures(&spec, seq, depth)?;
    let slack = cheeger_core::porous::DELTA_MAX - m.delta;
    rep.record(if m.delta_bound_ok { slack } else { slack.min(-f64::MIN_POSITIVE) }, 0.0, || {
        format!("delta = {:e} is not below 2^-7", m.delta)
    });
    Ok(rep)
}

fn ph_report(cfg: &RunConfig, seq: &SequenceParams, depth: u32) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(
        "ph",
        json!({ "cantor_eps": cfg.cantor.eps, "cantor_depth": cfg.cantor.depth, "j1_max": depth }),
    );
    let cantor = check_ph_property(&build_omega_eps(cfg.cantor.eps, cfg.cantor.depth)?)?;
    rep.record(cantor.boundary_h1.lo - cantor.perimeter.hi, 0.0, || "cantor: strict inequality not certified".into());
    let porous = check_ph_property(&build_omega0(seq, depth, IndexPair::first())?)?;
    rep.record(if porous.equality { 0.0 } else { -1.0 }, 0.0, || "porous: P differs from H1(boundary)".into());
    let disk = check_ph_property(&DomainSpec::plain_disk())?;
    rep.record(if disk.equality { 0.0 } else { -1.0 }, 0.0, || "disk: P differs from H1(boundary)".into());
    Ok(rep)
}

fn cmd_verify(mut cfg: RunConfig, a: VerifyArgs) -> Result<i32> {
    let mut suites = a.suites.clone();
    if a.all {
        for s in FAST_SUITES {
            if !suites.contains(&s) {
                suites.push(s);
            }
        }
    }
    if suites.is_empty() {
        return Err(Error::InvalidInput("name at least one suite or pass --all".into()));
    }
    let needs_solver = suites.iter().any(|s| matches!(s, Suite::Density | Suite::HalfDisk));
    if needs_solver {
        match &a.spec {
            Some(p) => require_file(p)?,
            None => return Err(Error::InvalidInput("density and half-disk suites need --spec".into())),
        }
    }
    if let Some(g) = a.grid {
        cfg.raster.grid = g;
    }
    let json_path = out_path(&cfg, a.json.clone(), "verify.json")?;
    let depth = a.j1_max.unwrap_or(cfg.verify.j1_max);
    let seed = cfg.seed;
    let trials =
        |named: Suite, default: usize| if a.suites.contains(&named) { a.trials.unwrap_or(default) } else { default };
    let seq = sequence_of(&cfg, None, None)?;

    let mut reports = Vec::new();
    let mut solved = None;
    for &s in &suites {
        let rep = match s {
            Suite::Lemma21 => check_arc_min_lemma(trials(s, cfg.verify.lemma21_trials), seed)?,
            Suite::Angles => run_angle_suite(trials(s, cfg.verify.angle_trials), seed)?,
            Suite::Competitor => competitor_report(&seq, depth)?,
            Suite::Constraints => constraints_report(&seq, depth)?,
            Suite::Ph => ph_report(&cfg, &seq, depth)?,
            Suite::Case3 => {
                let mut rep = VerificationReport::new("case3", json!({ "eps": cfg.cantor.eps }));
                let e = cfg.cantor.eps;
                let ok = check_case3_radius(e);
                let slack = (1.0 - e) / 2.0 - 2.0 * e;
                rep.record(if ok { slack } else { slack.min(-f64::MIN_POSITIVE) }, 0.0, || {
                    format!("eps = {e}: (1 - eps)/2 > 2 eps fails or eps >= 1/24")
                });
                rep
            }
            Suite::Density | Suite::HalfDisk => {
                if solved.is_none() {
                    let spec = DomainSpec::load(a.spec.as_ref().expect("checked above"))?;
                    let field = rasterize_opts(&spec, cfg.raster.grid, &cfg.raster.options())?;
                    let result = solve_cheeger(&field, &cfg.solver)?;
                    solved = Some((field, result));
                }
                let (field, result) = solved.as_ref().expect("just solved");
                if s == Suite::Density {
                    check_density_estimate(result, field, trials(s, cfg.verify.density_trials), seed)?
                } else {
                    let mut rep = VerificationReport::new("half_disk", json!({ "grid": field.nx }));
                    rep.record(if check_half_disk_inclusion(result) { 0.0 } else { -1.0 }, 0.0, || {
                        "B_1/2 is not inside the computed set".into()
                    });
                    rep
                }
            }
        };
        reports.push(rep);
    }

    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.trials.to_string(),
                r.violations.to_string(),
                r.rejected.to_string(),
                r.skipped.to_string(),
                format!("{:.3e}", r.worst_margin),
                if r.passed() { "pass".into() } else { "FAIL".into() },
            ]
        })
        .collect();
    print_table(&["suite", "trials", "violations", "rejected", "skipped", "worst margin", "status"], &rows);
    let doc = json!({ "schema": "cheeger-verify/1", "seed": seed, "reports": reports });
    std::fs::write(&json_path, serde_json::to_string_pretty(&doc)? + "\n")?;
    for r in reports.iter().filter(|r| !r.passed()) {
        for f in &r.failures {
            eprintln!("{}: {f}", r.name);
        }
    }
    Ok(if reports.iter().all(VerificationReport::passed) { exit::SUCCESS } else { exit::VERIFICATION })
}

fn parse_zoom(s: &str) -> Result<ZoomWindow> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidInput(format!("zoom {s:?} must be cx,cy,half_width")))?;
    match parts[..] {
        [x, y, w] => ZoomWindow::new(Point2::new(x, y), w),
        _ => Err(Error::InvalidInput(format!("zoom {s:?} must be cx,cy,half_width"))),
    }
}

fn cmd_render(cfg: &RunConfig, a: RenderArgs) -> Result<i32> {
    let size = a.size.unwrap_or(cfg.render.size);
    let windows: Vec<ZoomWindow> = a.zoom.iter().map(|z| parse_zoom(z)).collect::<Result<_>>()?;
    if let Some(p) = &a.spec {
        require_file(p)?;
    }
    if let Some(p) = &a.indicator {
        require_file(p)?;
    }
    if let Some(delta) = a.bump {
        let path = out_path(cfg, a.output, "bump.svg")?;
        render_bump(delta, size)?.write(&path)?;
        println!("{}", path.display());
        return Ok(exit::SUCCESS);
    }
    let spec_path = a.spec.ok_or_else(|| Error::InvalidInput("render needs a spec file or --bump".into()))?;
    let spec = DomainSpec::load(&spec_path)?;
    let (figure, name) = if !windows.is_empty() || a.triptych {
        let windows = if !windows.is_empty() {
            windows
        } else if !cfg.render.zoom.is_empty() {
            cfg.render.zoom.clone()
        } else {
            default_triptych(&spec)
        };
        (render_triptych(&spec, &windows, size)?, "closeups.svg")
    } else if let Some(ind) = &a.indicator {
        let field = read_pgm(ind)?;
        (render_overlay(&spec, &field, a.threshold, size)?, "overlay.svg")
    } else {
        let name = match spec.obstacles {
            ObstacleKind::CantorBumps(_) => "omega_eps.svg",
            ObstacleKind::Holes(_) => "omega_0.svg",
            ObstacleKind::None => "domain.svg",
        };
        (render_domain(&spec, size)?, name)
    };
    let path = out_path(cfg, a.output, name)?;
    for w in &figure.warnings {
        eprintln!("warning: {w}");
    }
    std::fs::write(&path, &figure.svg)?;
    println!("{}", path.display());
    Ok(exit::SUCCESS)
}
