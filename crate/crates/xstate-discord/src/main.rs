//! Command-line front end. Single-point reports and Monte Carlo runs emit
//! JSON; grids emit CSV (plot-ready) plus the boundary polylines as
//! sibling files. Everything is deterministic given the flags and seed.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use xstate_discord::correlations::{correlation_report, CorrelationReport};
use xstate_discord::protocol::{accessible_info, holevo, EncodingDistribution};
use xstate_discord::sweep::{
    advantage_cut, branch_switch_boundary, concurrence_zero_boundary, fmt_sig, peak_advantage,
    peak_cut_advantage_without_entanglement, peak_discord_without_concurrence, sweep_advantage,
    sweep_prepared, werner_like_line, werner_line, write_advantage_csv, write_cut_csv,
    write_polyline_csv, write_prep_csv, Axis, SweepParam, SweepSpec,
};
use xstate_discord::transactions::{run_transactions, Strategy, TransactionConfig};
use xstate_discord::verify;
use xstate_discord::xstate::{prepared_state, ApparatusParams, XStateParams};
use xstate_discord::DensityMatrix;

#[derive(Parser)]
#[command(
    name = "xstate-discord",
    version,
    about = "Quantum correlations and dense-coding advantage of symmetric two-qubit X-states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Correlation report of one state (JSON by default).
    Report(ReportArgs),
    /// Correlations over an (R, kappa_h) grid; writes the grid CSV plus
    /// the concurrence-zero boundary and the Werner/Werner-like lines.
    SweepPrep(SweepPrepArgs),
    /// Quasi-optimal encoding advantage over an (R, p1) grid; writes the
    /// grid CSV plus the measurement branch-switch boundary.
    SweepAdvantage(SweepAdvantageArgs),
    /// Advantage cut at fixed p1 over an R range.
    Cut(CutArgs),
    /// Monte Carlo encode/decode transactions (JSON).
    Mc(McArgs),
    /// Run the verification suite; exits non-zero on any failure.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Beam-splitter reflection coefficient.
    #[arg(long = "R")]
    r: Option<f64>,
    /// Horizontal coherence factor (defaults to 1).
    #[arg(long)]
    kh: Option<f64>,
    /// Vertical coherence factor (defaults to 0).
    #[arg(long)]
    kv: Option<f64>,
    /// Canonical outer diagonal weight (with --w/--z instead of --R).
    #[arg(long)]
    a: Option<f64>,
    /// Canonical outer coherence.
    #[arg(long)]
    w: Option<f64>,
    /// Canonical inner coherence.
    #[arg(long)]
    z: Option<f64>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum StateParams {
    Apparatus { r: f64, kappa_h: f64, kappa_v: f64 },
    Canonical { a: f64, w: f64, z: f64 },
}

impl StateArgs {
    fn build(&self) -> Result<(StateParams, DensityMatrix), String> {
        let canonical = self.a.is_some() || self.w.is_some() || self.z.is_some();
        if canonical {
            if self.r.is_some() || self.kh.is_some() || self.kv.is_some() {
                return Err("give either --R/--kh/--kv or --a/--w/--z, not both".into());
            }
            let (a, w, z) = (
                self.a.unwrap_or(0.0),
                self.w.unwrap_or(0.0),
                self.z.unwrap_or(0.0),
            );
            let params = XStateParams::new(a, w, z).map_err(|e| e.to_string())?;
            Ok((StateParams::Canonical { a, w, z }, params.assemble()))
        } else {
            let r = self.r.ok_or("--R is required (or use --a/--w/--z)")?;
            let kappa_h = self.kh.unwrap_or(1.0);
            let kappa_v = self.kv.unwrap_or(0.0);
            let params =
                ApparatusParams::new(r, kappa_h, kappa_v).map_err(|e| e.to_string())?;
            Ok((
                StateParams::Apparatus { r, kappa_h, kappa_v },
                params.state(),
            ))
        }
    }
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Output format: json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepPrepArgs {
    /// Grid resolution as COLSxROWS over (R, kappa_h).
    #[arg(long, default_value = "201x201")]
    grid: String,
    /// Fixed vertical coherence factor.
    #[arg(long, default_value_t = 0.0)]
    kv: f64,
    /// Base output path; boundary polylines become siblings of it.
    #[arg(long)]
    out: PathBuf,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct SweepAdvantageArgs {
    /// Grid resolution as COLSxROWS over (R, p1).
    #[arg(long, default_value = "201x201")]
    grid: String,
    /// Base output path; the branch boundary becomes a sibling of it.
    #[arg(long)]
    out: PathBuf,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct CutArgs {
    /// Quasi-optimal weight p1 = p2 in [0, 1/2].
    #[arg(long)]
    p1: f64,
    /// Lower end of the R range.
    #[arg(long, default_value_t = 0.0)]
    r_min: f64,
    /// Upper end of the R range.
    #[arg(long, default_value_t = 1.0)]
    r_max: f64,
    /// Number of R samples.
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    /// Beam-splitter reflection coefficient of the prepared state.
    #[arg(long = "R")]
    r: f64,
    /// Uniform distribution over the four messages.
    #[arg(long, conflicts_with_all = ["p1", "p2", "p3", "p4"])]
    uniform: bool,
    /// Message probabilities (all four together), or --p1 alone for the
    /// quasi-optimal family p1 = p2, p3 = p4.
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p3: Option<f64>,
    #[arg(long)]
    p4: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Decoding strategy: joint or local (local reads the detector basis
    /// on both qubits).
    #[arg(long, default_value = "joint")]
    strategy: String,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed of the randomized checks.
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Report(args) => cmd_report(args),
        Command::SweepPrep(args) => cmd_sweep_prep(args),
        Command::SweepAdvantage(args) => cmd_sweep_advantage(args),
        Command::Cut(args) => cmd_cut(args),
        Command::Mc(args) => cmd_mc(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

/// stdout or a file, both buffered.
fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, String> {
    match out {
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            Ok(Box::new(BufWriter::new(file)))
        }
    }
}

fn file_sink(path: &Path) -> Result<BufWriter<File>, String> {
    Ok(BufWriter::new(File::create(path).map_err(|e| {
        format!("cannot create {}: {e}", path.display())
    })?))
}

/// `prep.csv` + `werner` -> `prep.werner.csv`.
fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}.{tag}.{ext}"))
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid '{text}' is not of the form NxM"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("grid component '{s}' is not a number"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ReportOutput {
    params: StateParams,
    report: CorrelationReport,
}

fn cmd_report(args: ReportArgs) -> Result<ExitCode, String> {
    let (params, rho) = args.state.build()?;
    let report = correlation_report(&rho).map_err(|e| e.to_string())?;
    let mut w = sink(&args.out)?;
    match args.format.as_str() {
        "json" => {
            let output = ReportOutput { params, report };
            writeln!(w, "{}", to_json(&output)?).map_err(|e| e.to_string())?;
        }
        "csv" => {
            writeln!(w, "S_s,S_p,S_sp,I,J,D,C,E,u,v,branch").map_err(|e| e.to_string())?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{}",
                fmt_sig(report.s_s),
                fmt_sig(report.s_p),
                fmt_sig(report.s_sp),
                fmt_sig(report.mutual_information),
                fmt_sig(report.classical_information),
                fmt_sig(report.discord),
                fmt_sig(report.concurrence),
                fmt_sig(report.entanglement_of_formation),
                fmt_sig(report.diagnostics.u),
                fmt_sig(report.diagnostics.v),
                report.diagnostics.branch
            )
            .map_err(|e| e.to_string())?;
        }
        other => return Err(format!("unknown format '{other}'")),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep_prep(args: SweepPrepArgs) -> Result<ExitCode, String> {
    let (n1, n2) = parse_grid(&args.grid)?;
    let spec = SweepSpec::new(
        Axis::full(SweepParam::Reflection, n1).map_err(|e| e.to_string())?,
        Axis::full(SweepParam::KappaH, n2).map_err(|e| e.to_string())?,
    );
    let rows = sweep_prepared(&spec, args.kv).map_err(|e| e.to_string())?;

    match args.format.as_str() {
        "csv" => write_prep_csv(&rows, file_sink(&args.out)?).map_err(|e| e.to_string())?,
        "json" => {
            let mut w = file_sink(&args.out)?;
            writeln!(w, "{}", to_json(&rows)?).map_err(|e| e.to_string())?;
        }
        other => return Err(format!("unknown format '{other}'")),
    }
    let boundary_points = n2.max(101);
    for (tag, line) in [
        ("c0_boundary", concurrence_zero_boundary(boundary_points)),
        ("werner", werner_line(boundary_points)),
        ("werner_like", werner_like_line(boundary_points)),
    ] {
        write_polyline_csv(("kappa_h", "R"), &line, file_sink(&sibling(&args.out, tag))?)
            .map_err(|e| e.to_string())?;
    }

    let best = rows
        .iter()
        .max_by(|a, b| a.d.partial_cmp(&b.d).unwrap())
        .expect("grid is non-empty");
    println!(
        "grid max D = {} at (R, kappa_h) = ({}, {})",
        fmt_sig(best.d),
        fmt_sig(best.r),
        fmt_sig(best.kappa_h)
    );
    if args.kv == 0.0 {
        let peak = peak_discord_without_concurrence(&spec).map_err(|e| e.to_string())?;
        println!(
            "max D without concurrence = {} at (R, kappa_h) = ({}, {}) after refinement",
            fmt_sig(peak.value),
            fmt_sig(peak.at.0),
            fmt_sig(peak.at.1)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep_advantage(args: SweepAdvantageArgs) -> Result<ExitCode, String> {
    let (n1, n2) = parse_grid(&args.grid)?;
    let spec = SweepSpec::new(
        Axis::full(SweepParam::Reflection, n1).map_err(|e| e.to_string())?,
        Axis::full(SweepParam::P1, n2).map_err(|e| e.to_string())?,
    );
    let rows = sweep_advantage(&spec).map_err(|e| e.to_string())?;

    match args.format.as_str() {
        "csv" => write_advantage_csv(&rows, file_sink(&args.out)?).map_err(|e| e.to_string())?,
        "json" => {
            let mut w = file_sink(&args.out)?;
            writeln!(w, "{}", to_json(&rows)?).map_err(|e| e.to_string())?;
        }
        other => return Err(format!("unknown format '{other}'")),
    }
    let boundary = branch_switch_boundary(&rows, &spec);
    write_polyline_csv(
        ("R", "p1"),
        &boundary,
        file_sink(&sibling(&args.out, "branch_boundary"))?,
    )
    .map_err(|e| e.to_string())?;

    if let Some(peak) = peak_advantage(&rows, false) {
        println!(
            "grid max dI = {} at (R, p1) = ({}, {})",
            fmt_sig(peak.value),
            fmt_sig(peak.at.0),
            fmt_sig(peak.at.1)
        );
    }
    if let Some(peak) = peak_advantage(&rows, true) {
        println!(
            "grid max dI without entanglement = {} at (R, p1) = ({}, {})",
            fmt_sig(peak.value),
            fmt_sig(peak.at.0),
            fmt_sig(peak.at.1)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cut(args: CutArgs) -> Result<ExitCode, String> {
    let axis = Axis::new(SweepParam::Reflection, args.r_min, args.r_max, args.points)
        .map_err(|e| e.to_string())?;
    let rows = advantage_cut(args.p1, &axis).map_err(|e| e.to_string())?;
    let mut w = sink(&args.out)?;
    match args.format.as_str() {
        "csv" => write_cut_csv(&rows, &mut w).map_err(|e| e.to_string())?,
        "json" => writeln!(w, "{}", to_json(&rows)?).map_err(|e| e.to_string())?,
        other => return Err(format!("unknown format '{other}'")),
    }
    drop(w);
    let peak = peak_cut_advantage_without_entanglement(args.p1, &axis)
        .map_err(|e| e.to_string())?;
    eprintln!(
        "max dI without entanglement on the cut = {} at R = {}",
        fmt_sig(peak.value),
        fmt_sig(peak.at.0)
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct McOutput {
    r: f64,
    probabilities: [f64; 4],
    shots: u64,
    seed: u64,
    strategy: String,
    stats: xstate_discord::transactions::EstimationStats,
    theory: McTheory,
}

#[derive(Serialize)]
struct McTheory {
    holevo_information: f64,
    accessible_information: f64,
}

fn cmd_mc(args: McArgs) -> Result<ExitCode, String> {
    let dist = if args.uniform {
        EncodingDistribution::uniform()
    } else {
        match (args.p1, args.p2, args.p3, args.p4) {
            (Some(p1), Some(p2), Some(p3), Some(p4)) => {
                EncodingDistribution::new([p1, p2, p3, p4]).map_err(|e| e.to_string())?
            }
            (Some(p1), None, None, None) => {
                EncodingDistribution::quasi_optimal(p1).map_err(|e| e.to_string())?
            }
            _ => {
                return Err(
                    "give --uniform, or --p1 alone (quasi-optimal), or all of --p1..--p4".into(),
                )
            }
        }
    };
    let strategy = match args.strategy.as_str() {
        "joint" => Strategy::Joint,
        "local" => Strategy::local_detector_basis(),
        other => return Err(format!("unknown strategy '{other}'")),
    };
    let config = TransactionConfig {
        r: args.r,
        dist,
        shots: args.shots,
        seed: args.seed,
        strategy,
    };
    let stats = run_transactions(&config).map_err(|e| e.to_string())?;

    let rho = prepared_state(args.r).map_err(|e| e.to_string())?;
    let theory = McTheory {
        holevo_information: holevo(&rho, &dist),
        accessible_information: accessible_info(&rho, &dist).0,
    };
    let output = McOutput {
        r: args.r,
        probabilities: dist.probabilities(),
        shots: args.shots,
        seed: args.seed,
        strategy: args.strategy,
        stats,
        theory,
    };
    let mut w = sink(&args.out)?;
    writeln!(w, "{}", to_json(&output)?).map_err(|e| e.to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let checks = verify::run_all(args.seed);
    for check in &checks {
        println!("{}", check.line());
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        println!("all {} checks passed", checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{failed} of {} checks failed", checks.len());
        Ok(ExitCode::from(1))
    }
}
