use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::echo::{uniform_times, EchoCurve};
use crate::error::{Error, Result};
use crate::harness::analysis::{gaussian_check, oracle_check, revival_table, scaling_report};
use crate::harness::config::{Axis, OutputFormat, OutputSpec, RangeSpec, SweepConfig};
use crate::harness::emit::{curve_csv, curves_csv, emit_csv, emit_json, sweep_csv, write_file};
use crate::harness::svg::{emit_curves_svg, emit_svg, Style};
use crate::harness::sweep::{run_sweep, SweepResult};
use crate::harness::valley::detect_valley;
use crate::spectrum::{momentum_grid, ChainParams, GridConvention};

#[derive(Debug, Parser)]
#[command(
    name = "lecho",
    version,
    about = "Loschmidt echo of a central qubit coupled to a transverse-field Ising chain"
)]
pub struct Cli {
    /// Worker threads (default: one per core). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Echo curves L(t) for one or more chain sizes.
    Echo(EchoArgs),
    /// Echo surface L(lambda, t) from a config file and/or flags.
    Sweep(SweepArgs),
    /// Sweep, then report the lambda of the deepest echo minimum.
    Valley(SweepArgs),
    /// Cross-check the analytic echo against independent oracles.
    OracleCheck(OracleArgs),
    /// First revival times against chain size.
    Revival(RevivalArgs),
    /// Compare L(t; delta, N) with L(t/alpha; alpha*delta, N/alpha).
    ScalingCheck(ScalingArgs),
    /// Fit the short-time decay of -ln L and compare with its t^2 coefficient.
    GaussianCheck(GaussianArgs),
}

#[derive(Debug, Args)]
pub struct EchoArgs {
    /// Chain sizes, comma separated.
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long = "J", default_value_t = 1.0)]
    pub j: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 27.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    /// Momentum grid: "paper" (k = 2πn/N) or "antiperiodic" (k = (2n-1)π/N).
    #[arg(long, default_value = "paper")]
    pub grid: GridConvention,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep config; flags below override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "J")]
    pub j: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Single lambda instead of a range.
    #[arg(long, conflicts_with_all = ["lambda_min", "lambda_max", "lambda_step"])]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub lambda_step: Option<f64>,
    #[arg(long)]
    pub tmin: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Momentum grid: "paper" (k = 2πn/N) or "antiperiodic" (k = (2n-1)π/N).
    #[arg(long)]
    pub grid: Option<GridConvention>,
    /// Output flags replace the config's output list.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Chain sizes for the exact-diagonalization comparison (even, at most 14).
    #[arg(long = "N", value_delimiter = ',', default_value = "8,12")]
    pub n: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct RevivalArgs {
    #[arg(
        long = "N",
        value_delimiter = ',',
        default_value = "50,100,150,200,250"
    )]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 0.9)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// A revival is a local maximum above this after the first drop below it.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Sample each chain up to t = span * N.
    #[arg(long, default_value_t = 0.4)]
    pub span: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    /// Momentum grid: "paper" (k = 2πn/N) or "antiperiodic" (k = (2n-1)π/N).
    #[arg(long, default_value = "paper")]
    pub grid: GridConvention,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long = "N", default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long, default_value_t = 10.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 27.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    /// Momentum grid: "paper" (k = 2πn/N) or "antiperiodic" (k = (2n-1)π/N).
    #[arg(long, default_value = "paper")]
    pub grid: GridConvention,
}

#[derive(Debug, Args)]
pub struct GaussianArgs {
    #[arg(long = "N", default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 0.9)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.2)]
    pub tmax: f64,
    #[arg(long, default_value_t = 40)]
    pub samples: usize,
    /// Momentum grid: "paper" (k = 2πn/N) or "antiperiodic" (k = (2n-1)π/N).
    #[arg(long, default_value = "paper")]
    pub grid: GridConvention,
}

const DEFAULT_LAMBDA: RangeSpec = RangeSpec {
    min: 0.0,
    max: 2.0,
    step: 0.02,
};
const DEFAULT_TIME: RangeSpec = RangeSpec {
    min: 0.0,
    max: 27.0,
    step: 0.05,
};

fn override_range(
    axis: Axis,
    default: RangeSpec,
    min: Option<f64>,
    max: Option<f64>,
    step: Option<f64>,
) -> Axis {
    if min.is_none() && max.is_none() && step.is_none() {
        return axis;
    }
    let base = match axis {
        Axis::Range(r) => r,
        Axis::Scalar(_) => default,
    };
    Axis::Range(RangeSpec {
        min: min.unwrap_or(base.min),
        max: max.unwrap_or(base.max),
        step: step.unwrap_or(base.step),
    })
}

impl SweepArgs {
    /// Config file (if any) with command-line overrides applied.
    pub fn resolve(&self) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => SweepConfig::load(path)?,
            None => SweepConfig {
                n: self
                    .n
                    .ok_or_else(|| Error::Config("--N is required without --config".into()))?,
                j: 1.0,
                a: 1.0,
                delta: self
                    .delta
                    .ok_or_else(|| Error::Config("--delta is required without --config".into()))?,
                lambda: Axis::Range(DEFAULT_LAMBDA),
                time: Axis::Range(DEFAULT_TIME),
                grid: GridConvention::default(),
                outputs: Vec::new(),
            },
        };
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(j) = self.j {
            cfg.j = j;
        }
        if let Some(a) = self.a {
            cfg.a = a;
        }
        if let Some(d) = self.delta {
            cfg.delta = d;
        }
        if let Some(g) = self.grid {
            cfg.grid = g;
        }
        cfg.lambda = match self.lambda {
            Some(l) => Axis::Scalar(l),
            None => override_range(
                cfg.lambda,
                DEFAULT_LAMBDA,
                self.lambda_min,
                self.lambda_max,
                self.lambda_step,
            ),
        };
        cfg.time = override_range(cfg.time, DEFAULT_TIME, self.tmin, self.tmax, self.dt);

        let flags = [
            (OutputFormat::Csv, &self.csv),
            (OutputFormat::Json, &self.json),
            (OutputFormat::Svg, &self.svg),
        ];
        if flags.iter().any(|(_, p)| p.is_some()) {
            cfg.outputs = flags
                .iter()
                .filter_map(|(format, p)| {
                    p.as_ref().map(|path| OutputSpec {
                        format: *format,
                        path: path.clone(),
                    })
                })
                .collect();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    stdout_write(&format!("{text}\n"))
}

fn stdout_write(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(Path::new("<stdout>"), e))
}

fn write_outputs(result: &SweepResult) -> Result<()> {
    for out in &result.config.outputs {
        match out.format {
            OutputFormat::Csv => emit_csv(result, &out.path)?,
            OutputFormat::Json => emit_json(result, &out.path)?,
            OutputFormat::Svg => emit_svg(result, &out.path, &sweep_style(result))?,
        }
    }
    Ok(())
}

fn sweep_style(result: &SweepResult) -> Style {
    Style {
        title: format!(
            "Loschmidt echo, N = {}, delta = {}",
            result.config.n, result.config.delta
        ),
        ..Style::default()
    }
}

fn run_echo(args: &EchoArgs) -> Result<()> {
    let times = uniform_times(args.tmin, args.tmax, args.dt)?;
    let curves = args
        .n
        .iter()
        .map(|&n| {
            let p = ChainParams::with_units(n, args.j, args.lambda, args.delta, args.a)?;
            Ok(EchoCurve::compute(
                p,
                momentum_grid(&p, args.grid),
                times.clone(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let csv = if curves.len() == 1 {
        curve_csv(&curves[0])
    } else {
        curves_csv(&curves)
    };
    match &args.csv {
        Some(path) => write_file(path, &csv)?,
        None => stdout_write(&csv)?,
    }
    if let Some(path) = &args.svg {
        let style = Style {
            title: format!(
                "Loschmidt echo, lambda = {}, delta = {}",
                args.lambda, args.delta
            ),
            ..Style::default()
        };
        emit_curves_svg(&curves, path, &style)?;
    }
    Ok(())
}

fn run_sweep_cmd(args: &SweepArgs) -> Result<()> {
    let result = run_sweep(&args.resolve()?)?;
    if result.config.outputs.is_empty() {
        stdout_write(&sweep_csv(&result))
    } else {
        write_outputs(&result)
    }
}

fn run_valley(args: &SweepArgs) -> Result<()> {
    let result = run_sweep(&args.resolve()?)?;
    write_outputs(&result)?;
    print_json(&detect_valley(&result))
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Echo(a) => run_echo(a)?,
        Command::Sweep(a) => run_sweep_cmd(a)?,
        Command::Valley(a) => run_valley(a)?,
        Command::OracleCheck(a) => {
            let report = oracle_check(&a.n)?;
            print_json(&report)?;
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Revival(a) => print_json(&revival_table(
            &a.n,
            a.lambda,
            a.delta,
            a.threshold,
            a.span,
            a.dt,
            a.grid,
        )?)?,
        Command::ScalingCheck(a) => {
            let p = ChainParams::new(a.n, a.lambda, a.delta)?;
            print_json(&scaling_report(&p, a.alpha, a.tmax, a.dt, a.grid)?)?
        }
        Command::GaussianCheck(a) => {
            let p = ChainParams::new(a.n, a.lambda, a.delta)?;
            print_json(&gaussian_check(&p, a.tmax, a.samples, a.grid)?)?
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_error(err: &Error) {
    let body = serde_json::json!({
        "error": { "kind": err.kind(), "message": err.to_string() }
    });
    eprintln!("{body}");
}

/// Entry point of the `lecho` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        let built = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
        if let Err(e) = built {
            report_error(&Error::Config(format!(
                "cannot start {threads} worker threads: {e}"
            )));
            return ExitCode::from(1);
        }
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            report_error(&e);
            ExitCode::from(1)
        }
    }
}
