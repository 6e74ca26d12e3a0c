//! `dcone`: tables, scans, profiles, and cross-checks for spin-1/2 states on
//! a double-cone surface.
//!
//! Output contract shared by every subcommand:
//! - tables are CSV by default (header row, `\n` endings, trailing newline)
//!   or JSON via `--format json`;
//! - floating-point columns carry 12 significant digits, fixed-point inside
//!   `[1e-4, 1e6)` and scientific outside;
//! - identical invocations produce byte-identical output;
//! - `--output` writes to a file instead of stdout, resolving relative paths
//!   under `DCONE_OUT_DIR` when that variable is set;
//! - exit codes: 0 success, 1 verification failure, 2 usage error.

mod format;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dcone_core::free_dynamics::{self, RadialSolution};
use dcone_core::landau::{self, FieldConfig, LandauState};
use dcone_core::oracle::SpectrumFault;
use dcone_core::{Sign, SpinChannel, SurfaceGeometry, UnitSystem};

use format::{csv_table, format_value};
use report::{run_verify, SuiteName};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
}

#[derive(Parser)]
#[command(
    name = "dcone",
    version,
    about = "Spin-1/2 spectra and radial modes on a double-cone surface",
    after_help = "Relative --output paths resolve under DCONE_OUT_DIR when it is set.\n\
                  Exit codes: 0 success, 1 verification failure, 2 usage error."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Landau-level table over ranges of quantum numbers.
    Spectrum(SpectrumArgs),
    /// Bessel orders and branch admissibility across an angular-number grid.
    ScarScan(ScarScanArgs),
    /// Sampled radial profile of a single state.
    Wavefunction(WavefunctionArgs),
    /// Positive-branch energies over a magnetic-field sweep.
    #[command(name = "fig3")]
    Fig3(Fig3Args),
    /// Cross-check suites; nonzero exit when any suite fails.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Table format.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Opening fraction alpha in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Radial index range "lo..hi" (inclusive) or a single value.
    #[arg(long = "n", default_value = "0..0", value_parser = parse_u32_range)]
    n_range: (u32, u32),
    /// Angular number range "lo..hi" (inclusive) or a single value.
    #[arg(long = "j", default_value = "0..0", value_parser = parse_i32_range, allow_hyphen_values = true)]
    j_range: (i32, i32),
    /// Component label lambda: +1 or -1.
    #[arg(long, default_value = "+1", value_parser = parse_sign, allow_hyphen_values = true)]
    lambda: Sign,
    /// Spin label s: +1 or -1.
    #[arg(long, default_value = "+1", value_parser = parse_sign, allow_hyphen_values = true)]
    s: Sign,
    /// Nappe label eta: +1, -1, or "all" for both.
    #[arg(long, default_value = "all", value_parser = parse_sign_sel, allow_hyphen_values = true)]
    eta: SignSel,
    /// Field strength B0; must be positive.
    #[arg(long = "B0", default_value_t = 1.0)]
    b0: f64,
    /// Rest mass.
    #[arg(long = "m", default_value_t = 0.0)]
    mass: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ScarScanArgs {
    /// Spin label s: +1 or -1.
    #[arg(long, default_value = "+1", value_parser = parse_sign, allow_hyphen_values = true)]
    s: Sign,
    /// Opening fraction alpha in (0, 1].
    #[arg(long, default_value_t = 0.7)]
    alpha: f64,
    /// Comma-separated angular numbers to scan (real-valued).
    #[arg(long = "j", default_value = "", allow_hyphen_values = true)]
    j_list: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WaveKind {
    Landau,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    /// Sine branch; free modes at j = 0 only.
    Sin,
    /// Cosine branch; free modes at j = 0 only.
    Cos,
    /// Positive-order Bessel branch.
    Positive,
    /// Negative-order Bessel branch, where admissible.
    Negative,
}

#[derive(Args)]
struct WavefunctionArgs {
    /// Which family of states to sample.
    #[arg(long, value_enum, default_value = "landau")]
    kind: WaveKind,
    /// Opening fraction alpha in (0, 1].
    #[arg(long, default_value_t = 0.7)]
    alpha: f64,
    /// Radial index n.
    #[arg(long, default_value_t = 0)]
    n: u32,
    /// Angular number j; integer for Landau states, real for free modes.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    j: f64,
    /// Component label lambda: +1 or -1.
    #[arg(long, default_value = "+1", value_parser = parse_sign, allow_hyphen_values = true)]
    lambda: Sign,
    /// Spin label s: +1 or -1.
    #[arg(long, default_value = "+1", value_parser = parse_sign, allow_hyphen_values = true)]
    s: Sign,
    /// Nappe label eta: +1 or -1.
    #[arg(long, default_value = "-1", value_parser = parse_sign, allow_hyphen_values = true)]
    eta: Sign,
    /// Field strength B0 for Landau states; must be positive.
    #[arg(long = "B0", default_value_t = 1.0)]
    b0: f64,
    /// Rest mass (Landau states).
    #[arg(long = "m", default_value_t = 0.0)]
    mass: f64,
    /// Radial wavenumber K for free modes.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Basis branch for free modes.
    #[arg(long, value_enum, default_value = "positive")]
    branch: BranchArg,
    /// Number of radial samples.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Largest sampled radius; defaults to the profile support (Landau) or
    /// 10 (free).
    #[arg(long = "l-max")]
    l_max: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct Fig3Args {
    /// Comma-separated opening fractions.
    #[arg(long, default_value = "1,0.7")]
    alphas: String,
    /// Comma-separated radial indices, one curve per entry.
    #[arg(long = "n-list", default_value = "0,1,2")]
    n_list: String,
    /// Comma-separated angular numbers paired with --n-list; defaults to
    /// j = n on each curve.
    #[arg(long = "j-list", allow_hyphen_values = true)]
    j_list: Option<String>,
    /// First field value; must be positive.
    #[arg(long = "b-start", default_value_t = 0.2)]
    b_start: f64,
    /// Last field value.
    #[arg(long = "b-end", default_value_t = 10.0)]
    b_end: f64,
    /// Number of field samples (linear grid, endpoints included).
    #[arg(long = "b-count", default_value_t = 50)]
    b_count: usize,
    /// Rest mass.
    #[arg(long = "m", default_value_t = 0.0)]
    mass: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Spectrum,
    Residuals,
    Matched,
    Specfun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    DropEtaTerm,
}

#[derive(Args)]
struct VerifyArgs {
    /// Interior points of the finite-difference eigensolver grid.
    #[arg(long = "grid-n", default_value_t = 4000)]
    grid_n: usize,
    /// Relative tolerance for the spectrum comparison.
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    /// Restrict the run to one suite.
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    /// Deliberately corrupt the analytic spectrum; the run must then fail.
    #[arg(long = "inject-fault", value_enum)]
    inject_fault: Option<FaultArg>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Spectrum(args) => cmd_spectrum(args),
        Cmd::ScarScan(args) => cmd_scar_scan(args),
        Cmd::Wavefunction(args) => cmd_wavefunction(args),
        Cmd::Fig3(args) => cmd_fig3(args),
        Cmd::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

// ---- argument parsing helpers ----

#[derive(Debug, Clone, Copy)]
enum SignSel {
    One(Sign),
    All,
}

impl SignSel {
    fn expand(self) -> Vec<Sign> {
        match self {
            SignSel::One(s) => vec![s],
            // Ascending as numbers, so eta = -1 rows sort first.
            SignSel::All => vec![Sign::Minus, Sign::Plus],
        }
    }
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s.trim() {
        "+1" | "1" => Ok(Sign::Plus),
        "-1" => Ok(Sign::Minus),
        other => Err(format!("expected +1 or -1, got \"{other}\"")),
    }
}

fn parse_sign_sel(s: &str) -> Result<SignSel, String> {
    if s.trim() == "all" {
        Ok(SignSel::All)
    } else {
        parse_sign(s).map(SignSel::One)
    }
}

fn parse_u32_range(s: &str) -> Result<(u32, u32), String> {
    parse_range(s, |t| t.parse::<u32>().ok())
}

fn parse_i32_range(s: &str) -> Result<(i32, i32), String> {
    parse_range(s, |t| t.parse::<i32>().ok())
}

fn parse_range<T: Copy + PartialOrd>(
    s: &str,
    parse: impl Fn(&str) -> Option<T>,
) -> Result<(T, T), String> {
    let bound = |t: &str| parse(t.trim()).ok_or_else(|| format!("invalid range bound \"{t}\""));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (bound(lo)?, bound(hi)?),
        None => {
            let v = bound(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range \"{s}\": lower bound exceeds upper"));
    }
    Ok((lo, hi))
}

fn parse_list<T>(
    s: &str,
    what: &str,
    parse: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>, CliError> {
    let items: Vec<&str> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    if items.is_empty() {
        return Err(CliError::Usage(format!("{what} list is empty")));
    }
    items
        .into_iter()
        .map(|t| parse(t).ok_or_else(|| CliError::Usage(format!("invalid {what} value \"{t}\""))))
        .collect()
}

fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    parse_list(s, what, |t| t.parse::<f64>().ok().filter(|v| v.is_finite()))
}

fn sign_as_int(s: Sign) -> i32 {
    match s {
        Sign::Plus => 1,
        Sign::Minus => -1,
    }
}

// ---- output plumbing ----

/// Resolves a relative output path under `DCONE_OUT_DIR` when set.
fn resolve_output(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os("DCONE_OUT_DIR") {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(path);
            }
        }
    }
    path.to_path_buf()
}

fn emit(output: Option<&Path>, content: &str) -> Result<(), CliError> {
    match output {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let path = resolve_output(path);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent).map_err(|e| {
                        CliError::Io(format!("cannot create {}: {e}", parent.display()))
                    })?;
                }
            }
            std::fs::write(&path, content)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn to_pretty_json<T: Serialize>(rows: &T) -> String {
    let mut text = serde_json::to_string_pretty(rows).expect("report types serialize");
    text.push('\n');
    text
}

// ---- subcommands ----

#[derive(Serialize)]
struct SpectrumRow {
    alpha: f64,
    n: u32,
    j: i32,
    lambda: i32,
    s: i32,
    eta: i32,
    #[serde(rename = "B0")]
    b0: f64,
    m: f64,
    #[serde(rename = "E2")]
    e2: f64,
    #[serde(rename = "E")]
    e: f64,
    degenerate: bool,
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<ExitCode, CliError> {
    if !args.b0.is_finite() || args.b0 <= 0.0 {
        return Err(CliError::Usage("Landau levels require B0 > 0".to_string()));
    }
    let geom = SurfaceGeometry::new(args.alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    let field = FieldConfig::new(args.b0, args.mass).map_err(|e| CliError::Usage(e.to_string()))?;
    let units = UnitSystem::natural();
    let channel = SpinChannel {
        lambda: args.lambda,
        s: args.s,
    };

    let mut rows = Vec::new();
    for n in args.n_range.0..=args.n_range.1 {
        for j in args.j_range.0..=args.j_range.1 {
            for eta in args.eta.expand() {
                let state = LandauState { n, j, channel, eta };
                let e2 = landau::energy_squared(&state, &geom, &field, &units);
                let e = landau::landau_level(&state, &geom, &field, &units, Sign::Plus);
                // The nappes are degenerate exactly when the splitting
                // coupling j + lambda s alpha vanishes.
                let coupling = j as f64 + args.lambda.value() * args.s.value() * args.alpha;
                rows.push(SpectrumRow {
                    alpha: args.alpha,
                    n,
                    j,
                    lambda: sign_as_int(args.lambda),
                    s: sign_as_int(args.s),
                    eta: sign_as_int(eta),
                    b0: args.b0,
                    m: args.mass,
                    e2,
                    e,
                    degenerate: coupling.abs() < 1e-12,
                });
            }
        }
    }

    let content = match args.out.format {
        FormatArg::Json => to_pretty_json(&rows),
        FormatArg::Csv => {
            let rendered: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format_value(r.alpha),
                        r.n.to_string(),
                        r.j.to_string(),
                        format!("{:+}", r.lambda),
                        format!("{:+}", r.s),
                        format!("{:+}", r.eta),
                        format_value(r.b0),
                        format_value(r.m),
                        format_value(r.e2),
                        format_value(r.e),
                        r.degenerate.to_string(),
                    ]
                })
                .collect();
            csv_table("alpha,n,j,lambda,s,eta,B0,m,E2,E,degenerate", &rendered)
        }
    };
    emit(args.out.output.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ScarRowOut {
    j: f64,
    #[serde(rename = "nu_A")]
    nu_a: f64,
    #[serde(rename = "nu_B")]
    nu_b: f64,
    #[serde(rename = "neg_A_admissible")]
    neg_a_admissible: bool,
    #[serde(rename = "neg_B_admissible")]
    neg_b_admissible: bool,
}

fn cmd_scar_scan(args: ScarScanArgs) -> Result<ExitCode, CliError> {
    let geom = SurfaceGeometry::new(args.alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    let j_grid = parse_f64_list(&args.j_list, "angular-number")?;
    let rows = free_dynamics::scar_scan(args.s, &geom, &j_grid);

    let content = match args.out.format {
        FormatArg::Json => {
            let out: Vec<ScarRowOut> = rows
                .iter()
                .map(|r| ScarRowOut {
                    j: r.j,
                    nu_a: r.nu_a,
                    nu_b: r.nu_b,
                    neg_a_admissible: r.neg_a_admissible,
                    neg_b_admissible: r.neg_b_admissible,
                })
                .collect();
            to_pretty_json(&out)
        }
        FormatArg::Csv => {
            let rendered: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format_value(r.j),
                        format_value(r.nu_a),
                        format_value(r.nu_b),
                        r.neg_a_admissible.to_string(),
                        r.neg_b_admissible.to_string(),
                    ]
                })
                .collect();
            csv_table("j,nu_A,nu_B,neg_A_admissible,neg_B_admissible", &rendered)
        }
    };
    emit(args.out.output.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct WaveRow {
    l: f64,
    psi: f64,
}

fn cmd_wavefunction(args: WavefunctionArgs) -> Result<ExitCode, CliError> {
    if args.samples == 0 {
        return Err(CliError::Usage("need at least one sample".to_string()));
    }
    let geom = SurfaceGeometry::new(args.alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    let units = UnitSystem::natural();
    if let Some(l_max) = args.l_max {
        if !l_max.is_finite() || l_max <= 0.0 {
            return Err(CliError::Usage("--l-max must be positive".to_string()));
        }
    }

    let (l_max, profile): (f64, Box<dyn Fn(f64) -> f64>) = match args.kind {
        WaveKind::Landau => {
            if !args.b0.is_finite() || args.b0 <= 0.0 {
                return Err(CliError::Usage("Landau levels require B0 > 0".to_string()));
            }
            if args.j.fract() != 0.0 || args.j.abs() > i32::MAX as f64 {
                return Err(CliError::Usage(
                    "Landau states take integer angular numbers".to_string(),
                ));
            }
            let field =
                FieldConfig::new(args.b0, args.mass).map_err(|e| CliError::Usage(e.to_string()))?;
            let state = LandauState {
                n: args.n,
                j: args.j as i32,
                channel: SpinChannel {
                    lambda: args.lambda,
                    s: args.s,
                },
                eta: args.eta,
            };
            let profile = landau::radial_profile(&state, &geom, &field, &units)
                .and_then(|p| p.normalized(&geom))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let l_max = args.l_max.unwrap_or_else(|| profile.support_cutoff());
            (l_max, Box::new(move |l| profile.eval(l)))
        }
        WaveKind::Free => {
            if !args.k.is_finite() || args.k <= 0.0 {
                return Err(CliError::Usage("free modes require K > 0".to_string()));
            }
            let (mut psi_a, _) = free_dynamics::free_solution(args.j, args.s, &geom, args.k)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let at_origin = args.j == 0.0;
            let coeffs = match (args.branch, psi_a.basis_count(), at_origin) {
                (BranchArg::Sin, _, true) => vec![1.0, 0.0],
                (BranchArg::Cos, _, true) => vec![0.0, 1.0],
                (BranchArg::Positive, 1, false) => vec![1.0],
                (BranchArg::Positive, 2, false) => vec![1.0, 0.0],
                (BranchArg::Negative, 2, false) => vec![0.0, 1.0],
                _ => {
                    return Err(CliError::Usage(format!(
                        "branch {:?} is not available at j = {}",
                        args.branch, args.j
                    )))
                }
            };
            psi_a
                .set_coefficients(&coeffs)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let solution: RadialSolution = psi_a;
            (
                args.l_max.unwrap_or(10.0),
                Box::new(move |l| solution.eval(l)),
            )
        }
    };

    let rows: Vec<WaveRow> = (1..=args.samples)
        .map(|i| {
            let l = l_max * i as f64 / args.samples as f64;
            WaveRow { l, psi: profile(l) }
        })
        .collect();

    let content = match args.out.format {
        FormatArg::Json => to_pretty_json(&rows),
        FormatArg::Csv => {
            let rendered: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![format_value(r.l), format_value(r.psi)])
                .collect();
            csv_table("l,psi", &rendered)
        }
    };
    emit(args.out.output.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Fig3Row {
    alpha: f64,
    n: u32,
    j: i32,
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "E")]
    e: f64,
}

fn cmd_fig3(args: Fig3Args) -> Result<ExitCode, CliError> {
    let alphas = parse_f64_list(&args.alphas, "opening-fraction")?;
    let n_list = parse_list(&args.n_list, "radial-index", |t| t.parse::<u32>().ok())?;
    let j_list = match &args.j_list {
        Some(s) => parse_list(s, "angular-number", |t| t.parse::<i32>().ok())?,
        None => n_list.iter().map(|&n| n as i32).collect(),
    };
    if j_list.len() != n_list.len() {
        return Err(CliError::Usage(
            "--j-list must pair one entry with each --n-list entry".to_string(),
        ));
    }
    let states: Vec<(u32, i32)> = n_list.into_iter().zip(j_list).collect();

    if args.b_count == 0 {
        return Err(CliError::Usage("--b-count must be at least 1".to_string()));
    }
    if !args.b_start.is_finite() || args.b_start <= 0.0 {
        return Err(CliError::Usage("--b-start must be positive".to_string()));
    }
    let b_grid: Vec<f64> = if args.b_count == 1 {
        vec![args.b_start]
    } else {
        if !args.b_end.is_finite() || args.b_end <= args.b_start {
            return Err(CliError::Usage("--b-end must exceed --b-start".to_string()));
        }
        (0..args.b_count)
            .map(|i| {
                args.b_start + (args.b_end - args.b_start) * i as f64 / (args.b_count - 1) as f64
            })
            .collect()
    };

    // Fixed channel: lambda = s = +1 on the eta = -1 nappe, the branch whose
    // levels grow with the coupling. Override the angular numbers with
    // --j-list to look at other curves.
    let channel = SpinChannel {
        lambda: Sign::Plus,
        s: Sign::Plus,
    };
    let units = UnitSystem::natural();
    let rows = landau::figure3_data(
        &alphas,
        &states,
        channel,
        Sign::Minus,
        &b_grid,
        args.mass,
        &units,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let content = match args.out.format {
        FormatArg::Json => {
            let out: Vec<Fig3Row> = rows
                .iter()
                .map(|r| Fig3Row {
                    alpha: r.alpha,
                    n: r.n,
                    j: r.j,
                    b: r.b,
                    e: r.energy,
                })
                .collect();
            to_pretty_json(&out)
        }
        FormatArg::Csv => {
            let rendered: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format_value(r.alpha),
                        r.n.to_string(),
                        r.j.to_string(),
                        format_value(r.b),
                        format_value(r.energy),
                    ]
                })
                .collect();
            csv_table("alpha,n,j,B,E", &rendered)
        }
    };
    emit(args.out.output.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    if args.grid_n == 0 {
        return Err(CliError::Usage(
            "--grid-n must be at least 1 interior point".to_string(),
        ));
    }
    if !args.tolerance.is_finite() || args.tolerance <= 0.0 {
        return Err(CliError::Usage("--tolerance must be positive".to_string()));
    }
    let fault = match args.inject_fault {
        None => SpectrumFault::None,
        Some(FaultArg::DropEtaTerm) => SpectrumFault::DropEtaTerm,
    };
    let filter = match args.suite {
        SuiteArg::All => None,
        SuiteArg::Spectrum => Some(SuiteName::Spectrum),
        SuiteArg::Residuals => Some(SuiteName::Residuals),
        SuiteArg::Matched => Some(SuiteName::Matched),
        SuiteArg::Specfun => Some(SuiteName::Specfun),
    };

    let report = run_verify(args.grid_n, args.tolerance, fault, filter).map_err(CliError::Usage)?;
    emit(args.output.as_deref(), &to_pretty_json(&report))?;

    if report.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification FAILED");
        for suite in report.suites.iter().filter(|s| !s.passed) {
            eprintln!(
                "  suite {}: max error {:e} exceeds tolerance {:e}",
                suite.name, suite.max_error, suite.tolerance
            );
            if let Some(worst) = &suite.worst {
                eprintln!(
                    "    worst case: {} (error {:e})",
                    worst.description, worst.error
                );
            }
        }
        Ok(ExitCode::from(1))
    }
}
