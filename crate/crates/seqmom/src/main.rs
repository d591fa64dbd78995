use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seqmom::cli::{compare_report, run_selftest, run_sweep, EngineSet, SweepConfig};

/// Exit status for invalid configuration, matching clap's usage errors.
const USAGE_ERROR: u8 = 2;
/// Exit status for computation, property, or I/O failures.
const FAILURE: u8 = 1;

#[derive(Parser)]
#[command(
    name = "seqmom",
    version,
    about = "Sequential-measurement statistics of a precessing qubit: \
             direct joint probabilities versus moment-inverted reconstructions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep ωΔt over a grid and write a CSV comparison table.
    Sweep(SweepArgs),
    /// Print a full comparison report at a single angle.
    Compare(CompareArgs),
    /// Run the built-in invariant suite; exits 0 only if every check passes.
    Selftest,
}

#[derive(Args)]
struct SweepArgs {
    /// Grid start in radians of ωΔt.
    #[arg(long)]
    start: Option<f64>,

    /// Grid end in radians of ωΔt.
    #[arg(long)]
    end: Option<f64>,

    /// Number of grid points (endpoints included).
    #[arg(long)]
    points: Option<usize>,

    /// Pseudopure purity factor in (0, 1] for the circuit engine.
    #[arg(long)]
    epsilon: Option<f64>,

    /// Estimate probabilities and moments from this many simulated runs
    /// per experiment instead of computing them exactly.
    #[arg(long)]
    shots: Option<u64>,

    /// Seed for sampling mode (defaults to 0).
    #[arg(long)]
    seed: Option<u64>,

    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Comma-separated engines to run:
    /// analytic, lueders, inrm, moments, moussa.
    #[arg(long)]
    engines: Option<String>,

    /// Key=value file supplying any of the flags above; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Angular frequency in rad/s, used only to report the swept range as
    /// physical times; all computed quantities depend on ωΔt alone.
    #[arg(long)]
    omega: Option<f64>,
}

#[derive(Args)]
struct CompareArgs {
    /// The angle ωΔt in radians.
    omega_dt: f64,

    /// Pseudopure purity factor in (0, 1] for the circuit engine.
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,

    /// Angular frequency in rad/s, used only to print Δt in seconds.
    #[arg(long)]
    omega: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Selftest => cmd_selftest(),
    }
}

fn cmd_sweep(args: SweepArgs) -> ExitCode {
    let (config, out_path, omega) = match build_sweep_config(args) {
        Ok(parts) => parts,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(USAGE_ERROR);
    }
    if let Some(omega) = omega {
        eprintln!(
            "sweeping ωΔt ∈ [{}, {}] rad; at ω = {omega} rad/s this is Δt ∈ [{:.6e}, {:.6e}] s",
            config.start,
            config.end,
            config.start / omega,
            config.end / omega
        );
    }

    let result = match &out_path {
        Some(path) => fs::File::create(path)
            .map_err(seqmom::Error::from)
            .and_then(|file| run_sweep(&config, &mut BufWriter::new(file))),
        None => {
            let stdout = io::stdout();
            let mut lock = BufWriter::new(stdout.lock());
            run_sweep(&config, &mut lock).and_then(|()| lock.flush().map_err(Into::into))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(FAILURE)
        }
    }
}

fn cmd_compare(args: CompareArgs) -> ExitCode {
    if !args.omega_dt.is_finite() {
        eprintln!("error: ωΔt must be finite");
        return ExitCode::from(USAGE_ERROR);
    }
    if !(args.epsilon > 0.0 && args.epsilon <= 1.0) {
        eprintln!("error: purity factor must lie in (0, 1], got {}", args.epsilon);
        return ExitCode::from(USAGE_ERROR);
    }
    match compare_report(args.omega_dt, args.epsilon) {
        Ok(report) => {
            if let Some(omega) = args.omega {
                println!(
                    "Δt = {:.6e} s at ω = {omega} rad/s",
                    args.omega_dt / omega
                );
            }
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(FAILURE)
        }
    }
}

fn cmd_selftest() -> ExitCode {
    match run_selftest() {
        Ok(results) => {
            let mut all_passed = true;
            for check in &results {
                let status = if check.passed { "PASS" } else { "FAIL" };
                println!("{status}  {} — {}", check.name, check.detail);
                all_passed &= check.passed;
            }
            if all_passed {
                println!("selftest: all {} checks passed", results.len());
                ExitCode::SUCCESS
            } else {
                println!("selftest: FAILURES detected");
                ExitCode::from(FAILURE)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(FAILURE)
        }
    }
}

/// Merges the defaults, an optional key=value config file, and explicit
/// flags (highest precedence) into a validated sweep configuration.
fn build_sweep_config(
    args: SweepArgs,
) -> Result<(SweepConfig, Option<PathBuf>, Option<f64>), String> {
    let mut file = FileConfig::default();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        file = FileConfig::parse(&text)?;
    }

    let defaults = SweepConfig::default();
    let engines = match args.engines.or(file.engines) {
        Some(list) => EngineSet::parse_list(&list).map_err(|e| e.to_string())?,
        None => defaults.engines.clone(),
    };
    let config = SweepConfig {
        start: args.start.or(file.start).unwrap_or(defaults.start),
        end: args.end.or(file.end).unwrap_or(defaults.end),
        points: args.points.or(file.points).unwrap_or(defaults.points),
        epsilon: args.epsilon.or(file.epsilon).unwrap_or(defaults.epsilon),
        engines,
        shots: args.shots.or(file.shots),
        seed: args.seed.or(file.seed),
    };
    let out = args.out.or(file.out);
    let omega = args.omega.or(file.omega);
    Ok((config, out, omega))
}

#[derive(Default)]
struct FileConfig {
    start: Option<f64>,
    end: Option<f64>,
    points: Option<usize>,
    epsilon: Option<f64>,
    shots: Option<u64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    engines: Option<String>,
    omega: Option<f64>,
}

impl FileConfig {
    /// Plain `key=value` lines; `#` starts a comment, blank lines ignored.
    fn parse(text: &str) -> Result<FileConfig, String> {
        let mut config = FileConfig::default();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "config line {}: expected key=value, got '{raw}'",
                    line_no + 1
                ));
            };
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| format!("config line {}: bad number '{v}'", line_no + 1))
            };
            match key {
                "start" => config.start = Some(parse_f64(value)?),
                "end" => config.end = Some(parse_f64(value)?),
                "epsilon" => config.epsilon = Some(parse_f64(value)?),
                "omega" => config.omega = Some(parse_f64(value)?),
                "points" => {
                    config.points = Some(value.parse().map_err(|_| {
                        format!("config line {}: bad integer '{value}'", line_no + 1)
                    })?)
                }
                "shots" => {
                    config.shots = Some(value.parse().map_err(|_| {
                        format!("config line {}: bad integer '{value}'", line_no + 1)
                    })?)
                }
                "seed" => {
                    config.seed = Some(value.parse().map_err(|_| {
                        format!("config line {}: bad integer '{value}'", line_no + 1)
                    })?)
                }
                "out" => config.out = Some(PathBuf::from(value)),
                "engines" => config.engines = Some(value.to_string()),
                other => {
                    return Err(format!(
                        "config line {}: unknown key '{other}'",
                        line_no + 1
                    ))
                }
            }
        }
        Ok(config)
    }
}
