//! Command-line front end for super-quantum-discord computations on
//! two-qubit X states: single-point reports, strength and damping sweeps,
//! state validation and operator-level oracle cross-checks.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use output::{
    bloch_json, csv_num, report_to_json, sweep_x_row, to_json_string, SWEEP_GAMMA_HEADER,
    SWEEP_X_HEADER,
};
use sqdx::channel::{damping_sweep, DampingParams};
use sqdx::format::{parse_state, StateJson};
use sqdx::oracle::brute_force_min_conditional_entropy;
use sqdx::optimizer::minimize_f;
use sqdx::sqd::super_quantum_discord;
use sqdx::weakmeas::FContext;
use sqdx::xstate::{self, BlochX, XDensityMatrix};

const EXIT_ORACLE_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sqdx",
    version,
    about = "Super quantum discord of two-qubit X states under weak measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the full discord report for one state and strength
    Compute {
        #[command(flatten)]
        input: InputArgs,
        /// Measurement strength x >= 0
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the measurement strength: rows of x, z_hat, f_min, sqd, case
    SweepX {
        #[command(flatten)]
        input: InputArgs,
        /// Inclusive range start:stop:step
        #[arg(long, value_parser = parse_range)]
        x_range: Range,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the phase-damping rate at fixed strength
    SweepGamma {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Inclusive range start:stop:step
        #[arg(long, value_parser = parse_range)]
        gamma_range: Range,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a state file and report its Bloch parameters and spectrum
    Validate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the brute-force direction search against the reduced minimum
    OracleCheck {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Direction-grid resolution (the grid has ~resolution^2 points)
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a builtin state as xstate-v1 JSON
    Example {
        /// ex2, ex3, werner:a, bell-diag:c1,c2,c3 or mixed
        name: String,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Path to an xstate-v1 JSON state file
    #[arg(long, conflicts_with = "example")]
    state: Option<PathBuf>,
    /// Builtin state name (ex2, ex3, werner:a, bell-diag:c1,c2,c3, mixed)
    #[arg(long)]
    example: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug)]
struct Range {
    start: f64,
    stop: f64,
    step: f64,
}

impl Range {
    /// Inclusive endpoints with half-step tolerance at the top. Values that
    /// overshoot the stop by accumulated rounding snap to it exactly.
    fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let v = self.start + self.step * k as f64;
            if v > self.stop + 0.5 * self.step {
                break;
            }
            out.push(v.min(self.stop));
            k += 1;
        }
        out
    }
}

fn parse_range(text: &str) -> Result<Range, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("range {text:?} must be start:stop:step"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let range = Range { start: nums[0], stop: nums[1], step: nums[2] };
    if range.step <= 0.0 || !range.step.is_finite() {
        return Err("range step must be positive".into());
    }
    if range.stop < range.start {
        return Err("range stop must be >= start".into());
    }
    Ok(range)
}

/// A failure with a stable machine-readable code and the exit status it maps
/// to.
struct CliError {
    exit: u8,
    code: &'static str,
    message: String,
}

impl CliError {
    fn invalid(code: &'static str, message: impl Into<String>) -> Self {
        CliError { exit: EXIT_INVALID, code, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError { exit: EXIT_IO, code: "io-error", message: message.into() }
    }
}

const BUILTIN_NAMES: &str = "ex2, ex3, werner:a, bell-diag:c1,c2,c3, mixed";

fn builtin_state(name: &str) -> Result<XDensityMatrix, CliError> {
    let parse_params = |body: &str, n: usize| -> Result<Vec<f64>, CliError> {
        let vals: Vec<f64> = body
            .split(',')
            .map(|p| {
                p.parse::<f64>().map_err(|e| {
                    CliError::invalid("bad-example-parameter", format!("{p:?}: {e}"))
                })
            })
            .collect::<Result<_, _>>()?;
        if vals.len() != n {
            return Err(CliError::invalid(
                "bad-example-parameter",
                format!("expected {n} parameters, got {}", vals.len()),
            ));
        }
        Ok(vals)
    };
    if name == "ex2" {
        Ok(xstate::example_two())
    } else if name == "ex3" {
        Ok(xstate::example_three())
    } else if name == "mixed" {
        Ok(xstate::maximally_mixed())
    } else if let Some(body) = name.strip_prefix("werner:") {
        let a = parse_params(body, 1)?[0];
        BlochX::werner(a)
            .to_density()
            .map_err(|e| CliError::invalid("not-a-state", e.to_string()))
    } else if let Some(body) = name.strip_prefix("bell-diag:") {
        let c = parse_params(body, 3)?;
        BlochX::bell_diagonal(c[0], c[1], c[2])
            .to_density()
            .map_err(|e| CliError::invalid("not-a-state", e.to_string()))
    } else {
        Err(CliError::invalid(
            "unknown-example",
            format!("unknown example {name:?}; valid names: {BUILTIN_NAMES}"),
        ))
    }
}

fn load_state(input: &InputArgs) -> Result<XDensityMatrix, CliError> {
    match (&input.state, &input.example) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            parse_state(&text).map_err(|e| CliError::invalid("invalid-state", e.to_string()))
        }
        (None, Some(name)) => builtin_state(name),
        _ => Err(CliError::invalid(
            "missing-input",
            "exactly one of --state PATH or --example NAME is required",
        )),
    }
}

fn context_for(dm: &XDensityMatrix, x: f64) -> Result<FContext, CliError> {
    FContext::new(dm.bloch(), x)
        .map_err(|e| CliError::invalid("invalid-strength", e.to_string()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_compute(
    input: &InputArgs,
    x: f64,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let dm = load_state(input)?;
    let ctx = context_for(&dm, x)?;
    let report = super_quantum_discord(&ctx)
        .map_err(|e| CliError::invalid("computation-failed", e.to_string()))?;
    let text = match format {
        Format::Json => to_json_string(&report_to_json(&report)),
        Format::Csv => format!("{SWEEP_X_HEADER}\n{}\n", sweep_x_row(&report)),
    };
    emit(out, &text)?;
    Ok(0)
}

fn cmd_sweep_x(
    input: &InputArgs,
    range: Range,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let dm = load_state(input)?;
    let mut rows = Vec::new();
    for x in range.values() {
        let ctx = context_for(&dm, x)?;
        let report = super_quantum_discord(&ctx)
            .map_err(|e| CliError::invalid("computation-failed", e.to_string()))?;
        rows.push(report);
    }
    let text = match format {
        Format::Csv => {
            let mut lines = vec![SWEEP_X_HEADER.to_string()];
            lines.extend(rows.iter().map(sweep_x_row));
            lines.join("\n") + "\n"
        }
        Format::Json => {
            let body: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "x": r.x,
                        "z_hat": r.opt.z_hat,
                        "f_min": r.opt.f_min,
                        "sqd": r.sqd,
                        "case": r.opt.case.kind.as_str(),
                    })
                })
                .collect();
            to_json_string(&json!({"report": "sqd-v1", "sweep": "x", "rows": body}))
        }
    };
    emit(out, &text)?;
    Ok(0)
}

fn cmd_sweep_gamma(
    input: &InputArgs,
    x: f64,
    range: Range,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let dm = load_state(input)?;
    let bloch = dm.bloch();
    let gammas = range.values();
    for g in &gammas {
        DampingParams::new(*g).map_err(|e| CliError::invalid("invalid-gamma", e.to_string()))?;
    }
    let ctx = context_for(&dm, x)?;
    let undamped = super_quantum_discord(&ctx)
        .map_err(|e| CliError::invalid("computation-failed", e.to_string()))?;
    let rows = damping_sweep(&bloch, x, &gammas)
        .map_err(|e| CliError::invalid("computation-failed", e.to_string()))?;
    let text = match format {
        Format::Csv => {
            let mut lines = vec![SWEEP_GAMMA_HEADER.to_string()];
            for (gamma, report) in &rows {
                lines.push(format!(
                    "{},{},{},{},{}",
                    csv_num(*gamma),
                    csv_num(report.opt.z_hat),
                    csv_num(report.sqd),
                    csv_num(undamped.sqd),
                    csv_num(report.sqd - undamped.sqd)
                ));
            }
            lines.join("\n") + "\n"
        }
        Format::Json => {
            let body: Vec<_> = rows
                .iter()
                .map(|(gamma, r)| {
                    json!({
                        "gamma": gamma,
                        "z_hat": r.opt.z_hat,
                        "sqd": r.sqd,
                        "sqd_undamped": undamped.sqd,
                        "delta": r.sqd - undamped.sqd,
                    })
                })
                .collect();
            to_json_string(&json!({"report": "sqd-v1", "sweep": "gamma", "x": x, "rows": body}))
        }
    };
    emit(out, &text)?;
    Ok(0)
}

fn cmd_validate(input: &InputArgs, out: &Option<PathBuf>) -> Result<u8, CliError> {
    let dm = load_state(input)?;
    let p = dm.bloch();
    let text = to_json_string(&json!({
        "format": "xstate-v1",
        "valid": true,
        "bloch": bloch_json(&p),
        "spectrum": p.spectrum().as_array(),
        "marginals": {"r": p.r, "s": p.s},
    }));
    emit(out, &text)?;
    Ok(0)
}

fn cmd_oracle_check(
    input: &InputArgs,
    x: f64,
    resolution: usize,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let dm = load_state(input)?;
    let ctx = context_for(&dm, x)?;
    let analytic = 1.0
        + minimize_f(&ctx)
            .map_err(|e| CliError::invalid("computation-failed", e.to_string()))?
            .f_min;
    let (brute, _) = brute_force_min_conditional_entropy(&dm, x, resolution)
        .map_err(|e| CliError::invalid("oracle-failed", e.to_string()))?;
    let gap = (brute - analytic).abs();
    let bound = 5.0 / resolution as f64;
    let pass = gap <= bound;
    let text = to_json_string(&json!({
        "report": "oracle-check-v1",
        "x": x,
        "resolution": resolution,
        "brute_force_min": brute,
        "analytic_min": analytic,
        "gap": gap,
        "bound": bound,
        "pass": pass,
    }));
    emit(out, &text)?;
    Ok(if pass { 0 } else { EXIT_ORACLE_FAIL })
}

fn cmd_example(name: &str) -> Result<u8, CliError> {
    let dm = builtin_state(name)?;
    print!("{}", to_json_string(&StateJson::from_density(&dm)));
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Compute { input, x, format, out } => cmd_compute(input, *x, *format, out),
        Command::SweepX { input, x_range, format, out } => {
            cmd_sweep_x(input, *x_range, *format, out)
        }
        Command::SweepGamma { input, x, gamma_range, format, out } => {
            cmd_sweep_gamma(input, *x, *gamma_range, *format, out)
        }
        Command::Validate { input, out } => cmd_validate(input, out),
        Command::OracleCheck { input, x, resolution, out } => {
            cmd_oracle_check(input, *x, *resolution, out)
        }
        Command::Example { name } => cmd_example(name),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", json!({"error": {"code": "usage", "message": e.to_string()}}));
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", json!({"error": {"code": e.code, "message": e.message}}));
            ExitCode::from(e.exit)
        }
    }
}
