//! `linefield` — simulate random triangles from random lines, evaluate the
//! closed-form maximum-angle densities, compare the two, and sample
//! window-hitting lines.
//!
//! Exit codes: 0 success (and statistical pass), 1 statistical fail,
//! 2 usage error, 3 I/O error.

mod manifest;
mod output;

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use linefield::analytic::scenario_cdf_oracle;
use linefield::montecarlo::{run, SimulationConfig};
use linefield::sampling::sample_window_line;
use linefield::{
    Alpha, AngleModel, CaseId, ClosedFormDensity, EmpiricalDistribution, FixedLine, GofReport,
    RngStream, Scenario, Weighting, Window, WindowDensity, WindowShape,
};

use manifest::RunManifest;
use output::{density_csv, histogram_csv, overlay_svg};

#[derive(Parser)]
#[command(
    name = "linefield",
    version,
    about = "Random triangles from random lines: simulate, evaluate densities, compare, and sample window-hitting lines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate maximum angles and write a histogram CSV plus manifest
    Simulate(SimulateArgs),
    /// Tabulate a closed-form density (alpha, pdf, cdf) as CSV plus manifest
    Density(DensityArgs),
    /// Simulate, test the fit against the reference, and write a report + SVG
    Compare(CompareArgs),
    /// Sample window-hitting lines and test the inclination-angle density
    Window(WindowArgs),
}

/// Which triangle experiment to run: a closed-form case or a fixed line plus
/// a weighting model.
#[derive(Args)]
struct ScenarioFlags {
    /// Closed-form case: A, B, C or D
    #[arg(long, value_name = "CASE")]
    case: Option<String>,
    /// Fixed line: diagonal, antidiagonal, vertical or horizontal
    #[arg(long, value_name = "LINE", conflicts_with = "case", requires = "model")]
    fixed: Option<String>,
    /// Weighting of the random inclinations: constant or sine
    #[arg(long, value_name = "MODEL", conflicts_with = "case")]
    model: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scenario: ScenarioFlags,
    /// Number of triangles
    #[arg(long)]
    n: u64,
    /// RNG seed (falls back to $LINEFIELD_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Histogram bins over the scenario's support
    #[arg(long, default_value_t = 64)]
    bins: usize,
    /// Worker threads (default: machine parallelism)
    #[arg(long)]
    workers: Option<usize>,
    /// Histogram CSV path
    #[arg(long, default_value = "histogram.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct DensityArgs {
    /// Case: A, B, C, D, diag-const or diag-sine
    #[arg(long, value_name = "CASE")]
    case: String,
    /// Number of table rows over the support
    #[arg(long, default_value_t = 512)]
    points: usize,
    /// Density CSV path
    #[arg(long, default_value = "density.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    scenario: ScenarioFlags,
    /// Number of triangles
    #[arg(long)]
    n: u64,
    /// RNG seed (falls back to $LINEFIELD_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// KS significance level: 0.05, 0.01 or 0.001
    #[arg(long, default_value = "0.001")]
    alpha: String,
    /// Histogram bins
    #[arg(long, default_value_t = 64)]
    bins: usize,
    /// Worker threads (default: machine parallelism)
    #[arg(long)]
    workers: Option<usize>,
    /// Report JSON path
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    /// Overlay SVG path (default: report path with .svg)
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Also write the histogram CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct WindowArgs {
    /// Window: circle, interval, square or rect
    #[arg(long, value_name = "SHAPE")]
    window: String,
    /// Rectangle eccentricity in [0, 1) (rect only)
    #[arg(long)]
    eps: Option<f64>,
    /// Number of lines
    #[arg(long)]
    n: u64,
    /// RNG seed (falls back to $LINEFIELD_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// KS significance level: 0.05, 0.01 or 0.001
    #[arg(long, default_value = "0.001")]
    alpha: String,
    /// Histogram bins over [0, pi)
    #[arg(long, default_value_t = 64)]
    bins: usize,
    /// Report JSON path
    #[arg(long, default_value = "window.json")]
    out: PathBuf,
    /// Overlay SVG path (default: report path with .svg)
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Also write the histogram CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Density(args) => cmd_density(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Window(args) => cmd_window(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(path, err)) => {
            eprintln!("error: cannot write {}: {err}", path.display());
            ExitCode::from(3)
        }
    }
}

// ---------------------------------------------------------------------------
// Flag resolution
// ---------------------------------------------------------------------------

/// The reference distribution a scenario is compared against.
enum Reference {
    Closed(CaseId),
    Oracle { fixed_omega: f64, model: AngleModel },
}

fn parse_scenario(flags: &ScenarioFlags) -> Result<(Scenario, Reference), CliError> {
    match (&flags.case, &flags.fixed, &flags.model) {
        (Some(case), None, None) => {
            let case: CaseId = case
                .parse()
                .map_err(|_| usage(format!("--case must be A, B, C or D, got {case:?}")))?;
            if matches!(case, CaseId::DiagConst | CaseId::DiagSine) {
                return Err(usage(
                    "--case accepts A, B, C or D here; use --fixed diagonal --model constant|sine",
                ));
            }
            Ok((case.scenario(), Reference::Closed(case)))
        }
        (None, Some(fixed), Some(model)) => {
            let fixed = parse_fixed(fixed)?;
            let weighting = parse_weighting(model)?;
            let scenario = Scenario::one_fixed(fixed, weighting);
            let reference = match fixed {
                FixedLine::Diagonal | FixedLine::AntiDiagonal => match weighting {
                    Weighting::Constant => Reference::Closed(CaseId::DiagConst),
                    Weighting::Sine => Reference::Closed(CaseId::DiagSine),
                },
                FixedLine::Vertical | FixedLine::Horizontal => Reference::Oracle {
                    fixed_omega: fixed.inclination(),
                    model: scenario.model(),
                },
            };
            Ok((scenario, reference))
        }
        _ => Err(usage(
            "provide either --case A|B|C|D or --fixed <line> with --model constant|sine",
        )),
    }
}

fn parse_fixed(s: &str) -> Result<FixedLine, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "diagonal" => Ok(FixedLine::Diagonal),
        "antidiagonal" => Ok(FixedLine::AntiDiagonal),
        "vertical" => Ok(FixedLine::Vertical),
        "horizontal" => Ok(FixedLine::Horizontal),
        _ => Err(usage(format!(
            "--fixed must be diagonal, antidiagonal, vertical or horizontal, got {s:?}"
        ))),
    }
}

fn parse_weighting(s: &str) -> Result<Weighting, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "constant" => Ok(Weighting::Constant),
        "sine" => Ok(Weighting::Sine),
        _ => Err(usage(format!("--model must be constant or sine, got {s:?}"))),
    }
}

fn parse_alpha(s: &str) -> Result<Alpha, CliError> {
    match s {
        "0.05" => Ok(Alpha::P05),
        "0.01" => Ok(Alpha::P01),
        "0.001" => Ok(Alpha::P001),
        _ => Err(usage(format!("--alpha must be 0.05, 0.01 or 0.001, got {s:?}"))),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("LINEFIELD_SEED") {
        Ok(value) => value.trim().parse().map_err(|_| {
            usage(format!(
                "LINEFIELD_SEED must be a 64-bit unsigned integer, got {value:?}"
            ))
        }),
        Err(_) => Ok(0),
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn manifest_path_for(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

fn scenario_manifest(manifest: RunManifest, flags: &ScenarioFlags) -> RunManifest {
    RunManifest {
        case: flags.case.as_ref().map(|c| c.to_uppercase()),
        fixed: flags.fixed.as_ref().map(|f| f.to_lowercase()),
        model: flags.model.as_ref().map(|m| m.to_lowercase()),
        ..manifest
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_simulate(args: SimulateArgs) -> Result<u8, CliError> {
    let (scenario, _) = parse_scenario(&args.scenario)?;
    let seed = resolve_seed(args.seed)?;
    let workers = args.workers.unwrap_or_else(default_workers);
    let config = SimulationConfig::new(scenario, args.n, seed)
        .with_bins(args.bins)
        .with_workers(workers);
    config.validate().map_err(|e| usage(e.to_string()))?;

    let start = Instant::now();
    let e = run(&config).map_err(|e| usage(e.to_string()))?;
    write_file(&args.out, &histogram_csv(&e))?;

    let manifest_path = manifest_path_for(&args.out);
    let mut m = scenario_manifest(RunManifest::new("simulate"), &args.scenario)
        .output("histogram_csv", &args.out.display().to_string())
        .output("manifest", &manifest_path.display().to_string());
    m.n = Some(args.n);
    m.seed = Some(seed);
    m.bins = Some(args.bins);
    m.workers = Some(workers);
    m.duration_seconds = start.elapsed().as_secs_f64();
    write_file(&manifest_path, &to_pretty_json(&m))?;

    println!(
        "simulated {} maximum angles ({} obtuse, {} degenerate resamples) -> {}",
        e.n(),
        e.obtuse_count(),
        e.degenerate_resamples(),
        args.out.display()
    );
    Ok(0)
}

fn cmd_density(args: DensityArgs) -> Result<u8, CliError> {
    let case: CaseId = args
        .case
        .parse()
        .map_err(|_| usage(format!("unknown case {:?}", args.case)))?;
    if args.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let start = Instant::now();
    let density = ClosedFormDensity::new(case);
    let (lo, hi) = density.support();
    let rows: Vec<(f64, f64, f64)> = (0..args.points)
        .map(|i| {
            let alpha = lo + (hi - lo) * i as f64 / (args.points - 1) as f64;
            (alpha, density.pdf(alpha), density.cdf(alpha))
        })
        .collect();
    write_file(&args.out, &density_csv(&rows))?;

    let manifest_path = manifest_path_for(&args.out);
    let mut m = RunManifest::new("density")
        .output("density_csv", &args.out.display().to_string())
        .output("manifest", &manifest_path.display().to_string());
    m.case = Some(case.to_string());
    m.points = Some(args.points);
    m.obtuse_prob = Some(density.obtuse_probability());
    m.mode = Some(density.mode());
    m.duration_seconds = start.elapsed().as_secs_f64();
    write_file(&manifest_path, &to_pretty_json(&m))?;

    println!(
        "tabulated case {case} density ({} rows, mode {:.6}, obtuse probability {:.6}) -> {}",
        args.points,
        density.mode(),
        density.obtuse_probability(),
        args.out.display()
    );
    Ok(0)
}

#[derive(Serialize)]
struct ReportJson {
    ks_statistic: f64,
    ks_threshold: f64,
    chi2_statistic: f64,
    chi2_dof: usize,
    obtuse_empirical: Option<f64>,
    obtuse_analytic: Option<f64>,
    obtuse_z: Option<f64>,
    pass: bool,
    manifest: RunManifest,
}

impl ReportJson {
    fn new(report: &GofReport, manifest: RunManifest) -> Self {
        Self {
            ks_statistic: report.ks_statistic,
            ks_threshold: report.ks_threshold,
            chi2_statistic: report.chi2_statistic,
            chi2_dof: report.chi2_dof,
            obtuse_empirical: report.obtuse_empirical,
            obtuse_analytic: report.obtuse_analytic,
            obtuse_z: report.obtuse_z,
            pass: report.pass,
            manifest,
        }
    }
}

fn cmd_compare(args: CompareArgs) -> Result<u8, CliError> {
    let (scenario, reference) = parse_scenario(&args.scenario)?;
    let alpha = parse_alpha(&args.alpha)?;
    let seed = resolve_seed(args.seed)?;
    let workers = args.workers.unwrap_or_else(default_workers);
    let config = SimulationConfig::new(scenario, args.n, seed)
        .with_bins(args.bins)
        .with_workers(workers)
        .with_retained_samples();
    config.validate().map_err(|e| usage(e.to_string()))?;

    let start = Instant::now();
    let e = run(&config).map_err(|e| usage(e.to_string()))?;

    let (report, curve) = match reference {
        Reference::Closed(case) => {
            let density = ClosedFormDensity::new(case);
            let report = GofReport::against_density(&e, &density, alpha)
                .expect("samples are retained and n >= 50");
            (report, pdf_curve(|a| density.pdf(a), density.support()))
        }
        Reference::Oracle { fixed_omega, model } => {
            let cdf = |a: f64| {
                scenario_cdf_oracle(fixed_omega, model, a)
                    .expect("oracle quadrature within budget")
            };
            let obtuse_analytic = 1.0 - cdf(FRAC_PI_2);
            let report = GofReport::against_cdf(&e, cdf, Some(obtuse_analytic), alpha)
                .expect("samples are retained and n >= 50");
            let support = scenario.max_angle_support();
            (report, cdf_difference_curve(cdf, support))
        }
    };

    let svg_path = args.svg.clone().unwrap_or_else(|| args.out.with_extension("svg"));
    let mut m = scenario_manifest(RunManifest::new("compare"), &args.scenario)
        .output("report", &args.out.display().to_string())
        .output("svg", &svg_path.display().to_string());
    m.n = Some(args.n);
    m.seed = Some(seed);
    m.bins = Some(args.bins);
    m.alpha = Some(alpha.value());
    m.workers = Some(workers);
    m.duration_seconds = start.elapsed().as_secs_f64();
    if let Some(csv_path) = &args.csv {
        m.outputs
            .insert("histogram_csv".into(), csv_path.display().to_string());
        write_file(csv_path, &histogram_csv(&e))?;
    }

    write_file(&svg_path, &overlay_svg(&e, &curve))?;
    let pass = report.pass;
    let json = ReportJson::new(&report, m);
    write_file(&args.out, &to_pretty_json(&json))?;

    println!(
        "compare: KS D {:.6} vs threshold {:.6}, chi2 {:.1} (dof {}), pass = {pass} -> {}",
        report.ks_statistic,
        report.ks_threshold,
        report.chi2_statistic,
        report.chi2_dof,
        args.out.display()
    );
    Ok(if pass { 0 } else { 1 })
}

fn cmd_window(args: WindowArgs) -> Result<u8, CliError> {
    let (window, shape) = parse_window(&args.window, args.eps)?;
    let alpha = parse_alpha(&args.alpha)?;
    let seed = resolve_seed(args.seed)?;
    if args.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if args.bins < 4 {
        return Err(usage("--bins must be at least 4"));
    }
    let density = WindowDensity::new(shape).map_err(|e| usage(e.to_string()))?;

    let start = Instant::now();
    let mut rng = RngStream::new(seed, 0);
    let samples: Vec<f64> = (0..args.n)
        .map(|_| sample_window_line(&window, &mut rng).inclination())
        .collect();
    let edges: Vec<f64> = (0..=args.bins)
        .map(|i| PI * i as f64 / args.bins as f64)
        .collect();
    let e = EmpiricalDistribution::from_samples(edges, samples);
    let report = GofReport::against_cdf(&e, |w| density.cdf(w), None, alpha)
        .expect("samples are retained and n >= 50");
    let curve = pdf_curve(|w| density.pdf(w), (0.0, PI));

    let svg_path = args.svg.clone().unwrap_or_else(|| args.out.with_extension("svg"));
    let mut m = RunManifest::new("window")
        .output("report", &args.out.display().to_string())
        .output("svg", &svg_path.display().to_string());
    m.window = Some(args.window.to_lowercase());
    m.eps = args.eps;
    m.n = Some(args.n);
    m.seed = Some(seed);
    m.bins = Some(args.bins);
    m.alpha = Some(alpha.value());
    m.duration_seconds = start.elapsed().as_secs_f64();
    if let Some(csv_path) = &args.csv {
        m.outputs
            .insert("histogram_csv".into(), csv_path.display().to_string());
        write_file(csv_path, &histogram_csv(&e))?;
    }

    write_file(&svg_path, &overlay_svg(&e, &curve))?;
    let pass = report.pass;
    let json = ReportJson::new(&report, m);
    write_file(&args.out, &to_pretty_json(&json))?;

    println!(
        "window {}: KS D {:.6} vs threshold {:.6}, pass = {pass} -> {}",
        args.window,
        report.ks_statistic,
        report.ks_threshold,
        args.out.display()
    );
    Ok(if pass { 0 } else { 1 })
}

fn parse_window(name: &str, eps: Option<f64>) -> Result<(Window, WindowShape), CliError> {
    let name = name.to_ascii_lowercase();
    if name != "rect" && eps.is_some() {
        return Err(usage("--eps only applies to --window rect"));
    }
    match name.as_str() {
        "circle" => Ok((Window::circle(1.0), WindowShape::Circle)),
        "interval" => Ok((Window::unit_interval(), WindowShape::Interval)),
        "square" => Ok((Window::square(1.0), WindowShape::Square)),
        "rect" => {
            let eps = eps.ok_or_else(|| usage("--window rect requires --eps"))?;
            if !(0.0..1.0).contains(&eps) {
                return Err(usage(format!("--eps must lie in [0, 1), got {eps}")));
            }
            let half_height = (1.0 - eps * eps).sqrt();
            Ok((
                Window::rectangle(1.0, half_height),
                WindowShape::Rectangle { eccentricity: eps },
            ))
        }
        _ => Err(usage(format!(
            "--window must be circle, interval, square or rect, got {name:?}"
        ))),
    }
}

/// Reference curve sampled at 257 points across the support.
fn pdf_curve<F: Fn(f64) -> f64>(pdf: F, support: (f64, f64)) -> Vec<(f64, f64)> {
    let (lo, hi) = support;
    (0..=256)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / 256.0;
            (x, pdf(x))
        })
        .collect()
}

/// Piecewise density from CDF differences, for references that only expose a
/// CDF.
fn cdf_difference_curve<F: Fn(f64) -> f64>(cdf: F, support: (f64, f64)) -> Vec<(f64, f64)> {
    let (lo, hi) = support;
    let panels = 128;
    let mut points = Vec::with_capacity(panels);
    let mut left = cdf(lo);
    for i in 0..panels {
        let a = lo + (hi - lo) * i as f64 / panels as f64;
        let b = lo + (hi - lo) * (i + 1) as f64 / panels as f64;
        let right = cdf(b);
        points.push((0.5 * (a + b), (right - left) / (b - a)));
        left = right;
    }
    points
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_parsing() {
        let flags = ScenarioFlags {
            case: Some("A".into()),
            fixed: None,
            model: None,
        };
        let (scenario, reference) = parse_scenario(&flags).unwrap();
        assert_eq!(scenario, CaseId::A.scenario());
        assert!(matches!(reference, Reference::Closed(CaseId::A)));

        let flags = ScenarioFlags {
            case: None,
            fixed: Some("diagonal".into()),
            model: Some("sine".into()),
        };
        let (_, reference) = parse_scenario(&flags).unwrap();
        assert!(matches!(reference, Reference::Closed(CaseId::DiagSine)));

        let flags = ScenarioFlags {
            case: None,
            fixed: Some("vertical".into()),
            model: Some("constant".into()),
        };
        let (_, reference) = parse_scenario(&flags).unwrap();
        assert!(matches!(reference, Reference::Oracle { .. }));

        let flags = ScenarioFlags {
            case: None,
            fixed: None,
            model: None,
        };
        assert!(parse_scenario(&flags).is_err());

        let flags = ScenarioFlags {
            case: Some("diag-const".into()),
            fixed: None,
            model: None,
        };
        assert!(parse_scenario(&flags).is_err());
    }

    #[test]
    fn alpha_parsing() {
        assert!(matches!(parse_alpha("0.05"), Ok(Alpha::P05)));
        assert!(matches!(parse_alpha("0.001"), Ok(Alpha::P001)));
        assert!(parse_alpha("0.1").is_err());
    }

    #[test]
    fn window_parsing() {
        assert!(parse_window("circle", None).is_ok());
        assert!(parse_window("rect", Some(0.5)).is_ok());
        assert!(parse_window("rect", None).is_err());
        assert!(parse_window("rect", Some(1.0)).is_err());
        assert!(parse_window("square", Some(0.5)).is_err());
        assert!(parse_window("hexagon", None).is_err());
    }

    #[test]
    fn manifest_path_derivation() {
        assert_eq!(
            manifest_path_for(Path::new("a.csv")),
            PathBuf::from("a.manifest.json")
        );
        assert_eq!(
            manifest_path_for(Path::new("out/hist")),
            PathBuf::from("out/hist.manifest.json")
        );
    }
}
