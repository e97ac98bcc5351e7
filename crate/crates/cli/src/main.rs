use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use su11::bgcs::{bgcs_transport, bgcs_variances, BgcsParams};
use su11::hamiltonian::{adjoint_matrix, coefficients, CouplingParams};
use su11::oracle::Oracle;
use su11::pcs::{pcs_transport, pcs_variances, PcsParams};
use su11::scan::{Axis, Family, FixedParams, GridSpec, OutputFormat, Scanner, TimeUnit};
use su11::squeeze::{EvalPath, SqueezingReport};
use su11::Error;

/// Exit status for malformed invocations and out-of-range parameters.
const EXIT_USAGE: u8 = 1;
/// Exit status for numerical and I/O failures.
const EXIT_FAILURE: u8 = 2;
/// Exit status when validation disagrees with the committed ledger.
const EXIT_DISCREPANCY: u8 = 3;

#[derive(Parser)]
#[command(name = "su11", version, about = "Squeezing of SU(1,1) coherent states under H = 2 omega K_z + 2 lambda K_x")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagator coefficients and the SO(2,1) transport matrix at one time.
    Coeffs(CoeffsArgs),
    /// Squeezing report for one state at one time.
    Eval(EvalArgs),
    /// Squeezing factors, masks and zero contours over a parameter plane.
    Scan(ScanArgs),
    /// Dataset of a built-in preset (1..=9); preset 7 is a profile over phi.
    Figure(FigureArgs),
    /// Reconcile every closed form with the oracle against the committed ledger.
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
struct CouplingArgs {
    /// Frequency omega of the K_z term.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega: f64,
    /// Coupling lambda of the K_x term.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
    /// Evolution time, in the unit given by --time-unit.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    time: f64,
    /// Time normalization: t, tl (t*lambda), tw (t*omega) or gt (|g|*t).
    #[arg(long, default_value = "t")]
    time_unit: TimeUnit,
}

#[derive(Args, Clone)]
struct StateArgs {
    /// State family: pcs or bgcs.
    #[arg(long, default_value = "pcs", value_parser = parse_family)]
    family: Family,
    /// Bargmann index k.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    k: f64,
    /// PCS squeeze parameter r.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    r: f64,
    /// BGCS amplitude |Z|.
    #[arg(long, default_value_t = 0.0)]
    zmag: f64,
    /// Phase phi in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    coupling: CouplingArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    coupling: CouplingArgs,
    /// Evaluation path: paper, transport or oracle.
    #[arg(long, default_value = "transport")]
    path: EvalPath,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Axis as name:min:max:steps with name in r, zmag, phi, k, time; give two.
    #[arg(long = "grid", num_args = 1, required = true)]
    grid: Vec<Axis>,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    coupling: CouplingArgs,
    /// Evaluation path: paper, transport or oracle.
    #[arg(long, default_value = "transport")]
    path: EvalPath,
    /// Allow oracle grids above 64 x 64 points.
    #[arg(long)]
    allow_large_oracle: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FigureArgs {
    /// Preset number, 1..=9.
    n: u8,
    /// Evaluation path: paper, transport or oracle.
    #[arg(long, default_value = "transport")]
    path: EvalPath,
    /// Samples per axis (default 201, or 64 on the oracle path).
    #[arg(long)]
    steps: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Where to write the JSON report.
    #[arg(long, default_value = "validation-report.json")]
    report: PathBuf,
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "pcs" => Ok(Family::Pcs),
        "bgcs" => Ok(Family::Bgcs),
        other => Err(format!("unknown family `{other}` (expected pcs or bgcs)")),
    }
}

fn fixed_params(state: &StateArgs, coupling: &CouplingArgs) -> FixedParams {
    FixedParams {
        k: state.k,
        omega: coupling.omega,
        lambda: coupling.lambda,
        time: coupling.time,
        time_unit: coupling.time_unit,
        r: state.r,
        zmag: state.zmag,
        phi: state.phi,
    }
}

fn open_output(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes one flat record as a two-line CSV or a JSON object.
fn write_record(output: &OutputArgs, value: serde_json::Value) -> anyhow::Result<()> {
    let mut out = open_output(&output.out)?;
    match output.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?,
        OutputFormat::Csv => {
            let obj = value.as_object().expect("records are objects");
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            let vals: Vec<String> = obj
                .values()
                .map(|v| v.as_str().map_or_else(|| v.to_string(), str::to_string))
                .collect();
            writeln!(out, "{}", keys.join(","))?;
            writeln!(out, "{}", vals.join(","))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn coeffs(args: &CoeffsArgs) -> anyhow::Result<()> {
    let c = CouplingParams::new(args.coupling.omega, args.coupling.lambda)?;
    let t = args.coupling.time_unit.to_time(args.coupling.time, &c)?;
    let k = coefficients(&c, t)?;
    let m = adjoint_matrix(&k);
    let mut record = json!({
        "regime": format!("{:?}", c.regime()).to_lowercase(),
        "t": t,
        "r1": k.r1, "r2": k.r2, "r3": k.r3, "j": k.j, "s": k.s, "v": k.v,
    });
    for i in 0..3 {
        for j in 0..3 {
            record[format!("m{i}{j}")] = json!(m.matrix()[(i, j)]);
        }
    }
    record["metric_defect"] = json!(m.metric_defect());
    write_record(&args.output, record)
}

fn eval_report(args: &EvalArgs) -> su11::Result<SqueezingReport> {
    let c = CouplingParams::new(args.coupling.omega, args.coupling.lambda)?;
    let t = args.coupling.time_unit.to_time(args.coupling.time, &c)?;
    let s = &args.state;
    match args.state.family {
        Family::Pcs => {
            let p = PcsParams::new(s.r, s.phi, s.k)?;
            match args.path {
                EvalPath::PaperLiteral => Ok(pcs_variances(&p, &coefficients(&c, t)?)),
                EvalPath::Transport => Ok(pcs_transport(&p, &coefficients(&c, t)?)),
                EvalPath::Oracle => Oracle::default().pcs_report(&p, &c, t),
            }
        }
        Family::Bgcs => {
            let p = BgcsParams::new(s.zmag, s.phi, s.k)?;
            match args.path {
                EvalPath::PaperLiteral => bgcs_variances(&p, &coefficients(&c, t)?),
                EvalPath::Transport => bgcs_transport(&p, &coefficients(&c, t)?),
                EvalPath::Oracle => Oracle::default().bgcs_report(&p, &c, t),
            }
        }
    }
}

fn eval(args: &EvalArgs) -> anyhow::Result<()> {
    let r = eval_report(args)?;
    write_record(
        &args.output,
        json!({
            "path": r.path.as_str(),
            "f_x": r.f_x, "f_y": r.f_y,
            "var_x": r.var_x, "var_y": r.var_y,
            "mean_kz": r.mean_kz,
        }),
    )
}

fn scan(args: &ScanArgs) -> anyhow::Result<()> {
    let [a1, a2] = args.grid[..] else {
        anyhow::bail!(Error::InvalidParameter {
            name: "grid",
            value: args.grid.len() as f64,
            reason: "exactly two --grid axes are required",
        });
    };
    let uses_zmag = [a1, a2].iter().any(|a| a.name == su11::scan::AxisName::Zmag);
    let family = if uses_zmag { Family::Bgcs } else { args.state.family };
    let grid = GridSpec::new(a1, a2, family, fixed_params(&args.state, &args.coupling))?;
    let mut scanner = Scanner::default();
    if args.allow_large_oracle {
        scanner.oracle_point_limit = usize::MAX;
    }
    let map = scanner.scan(&grid, args.path)?;
    let data = su11::scan::FigureData::Region(map);
    let mut out = open_output(&args.output.out)?;
    data.write(args.output.format.unwrap_or(OutputFormat::Csv), &mut out)?;
    out.flush()?;
    Ok(())
}

fn figure(args: &FigureArgs) -> anyhow::Result<()> {
    let scanner = Scanner::default();
    let data = match args.steps {
        Some(steps) => scanner.figure_with_steps(args.n, args.path, steps)?,
        None => scanner.figure(args.n, args.path)?,
    };
    let mut out = open_output(&args.output.out)?;
    data.write(args.output.format.unwrap_or(OutputFormat::Csv), &mut out)?;
    out.flush()?;
    Ok(())
}

fn validate(args: &ValidateArgs) -> anyhow::Result<ExitCode> {
    let report = su11::validate::validate_to(&args.report)?;
    let mut err = io::stderr().lock();
    for c in &report.checks {
        let mark = if c.consistent { "ok " } else { "BAD" };
        writeln!(err, "{mark} {:<42} {:<10} max deviation {:.3e}", c.id, format!("{:?}", c.status).to_uppercase(), c.max_deviation)?;
    }
    for c in &report.claims {
        let mark = if c.consistent { "ok " } else { "BAD" };
        writeln!(err, "{mark} {:<42} holds={:<5} measured {:.6}", c.id, c.holds, c.measured)?;
    }
    writeln!(err, "report written to {}", args.report.display())?;
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_DISCREPANCY) })
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::InvalidParameter { .. }
            | Error::NonFiniteTime(_)
            | Error::RegimeMismatch { .. }
            | Error::OutsideEnvelope { .. }
            | Error::GridTooLarge { .. }
            | Error::UnknownFigure(_),
        ) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Coeffs(a) => coeffs(a).map(|_| ExitCode::SUCCESS),
        Command::Eval(a) => eval(a).map(|_| ExitCode::SUCCESS),
        Command::Scan(a) => scan(a).map(|_| ExitCode::SUCCESS),
        Command::Figure(a) => figure(a).map(|_| ExitCode::SUCCESS),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
