//! Command-line front end. [`cli_main`] is the whole program; the `aiecon`
//! binary only forwards the process arguments and streams.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on model, data or I/O
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::calibration::{calibrate_phi_a, calibrate_phi_h, PhiACalibrationAssumptions};
use crate::error::Error;
use crate::fitting::{fit_gap_curve, fit_logistic, fit_quadratic, FitResult, GapPins};
use crate::io::{self, sig6, EmitFormat, RunManifest};
use crate::scenario::{self, Registry, ScenarioConfig};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "AIECON_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "aiecon",
    version,
    about = "Human/AI production-model simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Years to simulate (steps 0..=T).
    #[arg(long)]
    horizon: Option<u32>,
    /// Parameter override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; defaults to $AIECON_OUT, else results go to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scenario registry file to use instead of the built-in one.
    #[arg(long)]
    registry: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List built-in (or registry-file) scenarios.
    ListScenarios {
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Print the registry as an editable TOML document.
        #[arg(long)]
        dump: bool,
    },
    /// Run one scenario.
    Simulate {
        /// Scenario name or scenario file.
        target: String,
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated subset of csv,json,plotdata.
        #[arg(long, value_delimiter = ',', default_value = "csv")]
        format: Vec<String>,
    },
    /// Per-step ratio and enhancement of scenario A over scenario B.
    Compare {
        a: String,
        b: String,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "csv")]
        format: Vec<String>,
    },
    /// Back-solve baseline efficiencies from a year,gdp,capital,population CSV.
    Calibrate {
        #[arg(long)]
        obs: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Also calibrate the AI efficiency from the latest observation.
        #[arg(long = "phi-a")]
        phi_a: bool,
        /// TOML file with omega, s, delta, agents.
        #[arg(long, requires = "phi_a")]
        assumptions: Option<PathBuf>,
    },
    /// Fit a curve to a t,value CSV.
    Fit {
        kind: FitKind,
        #[arg(long)]
        data: PathBuf,
        /// Fixed parameter for gap fits (delta0, tau, beta_gap), repeatable.
        #[arg(long = "pin", value_name = "KEY=VALUE")]
        pin: Vec<String>,
        /// Upper asymptote for logistic fits.
        #[arg(long, default_value_t = 1.0)]
        saturation: f64,
    },
    /// Re-run a scenario over a grid of values for one parameter.
    Sweep {
        name: String,
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FitKind {
    Quadratic,
    Logistic,
    Gap,
}

enum Failure {
    Usage(String),
    Model(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Model(Error::io("<stdout>", e))
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code.
pub fn cli_main<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            let _ = writeln!(stderr, "Run 'aiecon --help' for usage.");
            1
        }
        Err(Failure::Model(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn parse_pair(flag: &str, raw: &str) -> std::result::Result<(String, f64), Failure> {
    let (k, v) = raw
        .split_once('=')
        .ok_or_else(|| Failure::Usage(format!("{flag} {raw}: expected KEY=VALUE")))?;
    let value = v
        .trim()
        .parse::<f64>()
        .map_err(|_| Failure::Usage(format!("{flag} {raw}: '{v}' is not a number")))?;
    Ok((k.trim().to_string(), value))
}

fn load_registry(path: Option<&Path>) -> std::result::Result<Registry, Failure> {
    match path {
        Some(p) => Ok(Registry::load(p)?),
        None => Ok(scenario::builtin_scenarios()),
    }
}

/// Resolves a scenario name, or loads a scenario file holding either a
/// single scenario table or a one-entry registry.
fn resolve_target(
    registry: &Registry,
    target: &str,
) -> std::result::Result<ScenarioConfig, Failure> {
    if let Some(cfg) = registry.get(target) {
        return Ok(cfg.clone());
    }
    let path = Path::new(target);
    if !path.is_file() {
        return Err(Failure::Usage(format!(
            "unknown scenario '{target}'; available: {}",
            registry.names().collect::<Vec<_>>().join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if let Ok(cfg) = toml::from_str::<ScenarioConfig>(&text) {
        cfg.validate()?;
        return Ok(cfg);
    }
    let file_reg = Registry::from_toml(&text)?;
    let mut all = file_reg.iter();
    match (all.next(), all.next()) {
        (Some(cfg), None) => Ok(cfg.clone()),
        _ => Err(Failure::Usage(format!(
            "{target} must define exactly one scenario"
        ))),
    }
}

fn configure(
    registry: &Registry,
    target: &str,
    args: &RunArgs,
) -> std::result::Result<ScenarioConfig, Failure> {
    let mut cfg = resolve_target(registry, target)?;
    if let Some(h) = args.horizon {
        if h < 1 {
            return Err(Failure::Usage("--horizon must be at least 1".into()));
        }
        cfg.horizon = h;
    }
    for raw in &args.set {
        let (k, v) = parse_pair("--set", raw)?;
        cfg.set(&k, v)
            .map_err(|e| Failure::Usage(format!("--set {raw}: {e}")))?;
    }
    Ok(cfg)
}

fn out_dir(args: &RunArgs) -> Option<PathBuf> {
    args.out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
}

fn parse_formats(raw: &[String]) -> std::result::Result<Vec<EmitFormat>, Failure> {
    raw.iter()
        .map(|f| {
            f.parse::<EmitFormat>()
                .map_err(|e| Failure::Usage(format!("--format: {e}")))
        })
        .collect()
}

fn write_table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        writeln!(out, "{}", r.join(","))?;
    }
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::ListScenarios { registry, dump } => {
            let reg = load_registry(registry.as_deref())?;
            if dump {
                write!(out, "{}", reg.to_toml()?)?;
            } else {
                for s in reg.iter() {
                    writeln!(out, "{:<16} model {}  {}", s.name, s.model, s.description)?;
                }
            }
        }
        Command::Simulate {
            target,
            run,
            format,
        } => {
            let formats = parse_formats(&format)?;
            let reg = load_registry(run.registry.as_deref())?;
            let cfg = configure(&reg, &target, &run)?;
            let result = scenario::run(&cfg)?;
            match out_dir(&run) {
                Some(dir) => {
                    let manifest = RunManifest::new(target, dir, formats)
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                    for p in io::emit_result(&result, &manifest)? {
                        writeln!(out, "wrote {}", p.display())?;
                    }
                }
                None => write_table(out, &io::RESULT_HEADER, &io::result_rows(&result, sig6))?,
            }
        }
        Command::Compare { a, b, run, format } => {
            let formats = parse_formats(&format)?;
            let reg = load_registry(run.registry.as_deref())?;
            let ca = configure(&reg, &a, &run)?;
            let cb = configure(&reg, &b, &run)?;
            let results = scenario::run_batch(&[ca, cb]);
            let mut results = results.into_iter();
            let ra = results.next().expect("two runs")?;
            let rb = results.next().expect("two runs")?;
            let cmp = scenario::compare(&ra, &rb)?;
            match out_dir(&run) {
                Some(dir) => {
                    let manifest = RunManifest::new(io::comparison_stem(&cmp), dir, formats)
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                    for p in io::emit_comparison(&cmp, &manifest)? {
                        writeln!(out, "wrote {}", p.display())?;
                    }
                }
                None => {
                    let rows: Vec<_> = cmp
                        .points
                        .iter()
                        .map(|p| vec![p.t.to_string(), sig6(p.ratio), sig6(p.enhancement_pct)])
                        .collect();
                    write_table(out, &["t", "ratio", "enhancement_pct"], &rows)?;
                }
            }
            match cmp.crossover_t {
                Some(t) => writeln!(out, "crossover: {} reaches {} at t={t}", cmp.a, cmp.b)?,
                None => writeln!(out, "crossover: none within the horizon")?,
            }
        }
        Command::Calibrate {
            obs,
            alpha,
            phi_a,
            assumptions,
        } => {
            let rows = io::ingest_observations(&obs)?;
            let first = rows[0];
            let phi_h = calibrate_phi_h(&first, alpha)?;
            writeln!(out, "phi_h = {} (year {})", sig6(phi_h), first.year)?;
            if phi_a {
                let assume = match assumptions {
                    Some(p) => io::ingest_assumptions(&p)?,
                    None => PhiACalibrationAssumptions::default(),
                };
                let last = *rows.last().expect("ingestion rejects empty files");
                if rows.len() < 2 {
                    return Err(Error::Data(
                        "AI efficiency calibration needs a second, later observation".into(),
                    )
                    .into());
                }
                let v = calibrate_phi_a(&last, phi_h, alpha, &assume)?;
                writeln!(out, "phi_a = {} (year {})", sig6(v), last.year)?;
            }
        }
        Command::Fit {
            kind,
            data,
            pin,
            saturation,
        } => {
            let series = io::ingest_series(&data)?;
            let pins = pin
                .iter()
                .map(|raw| parse_pair("--pin", raw))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if !matches!(kind, FitKind::Gap) && !pins.is_empty() {
                return Err(Failure::Usage("--pin only applies to gap fits".into()));
            }
            let fit = match kind {
                FitKind::Quadratic => fit_quadratic(&series)?,
                FitKind::Logistic => fit_logistic(&series, saturation)?,
                FitKind::Gap => {
                    let mut gp = GapPins::default();
                    for (k, v) in pins {
                        match k.as_str() {
                            "delta0" => gp.delta0 = Some(v),
                            "tau" => gp.tau = Some(v),
                            "beta_gap" => gp.beta_gap = Some(v),
                            other => {
                                return Err(Failure::Usage(format!(
                                    "--pin {other}: expected delta0, tau or beta_gap"
                                )))
                            }
                        }
                    }
                    fit_gap_curve(&series, gp)?
                }
            };
            print_fit(out, &fit)?;
        }
        Command::Sweep {
            name,
            param,
            grid,
            run,
        } => {
            let values = grid
                .iter()
                .map(|g| {
                    g.trim()
                        .parse::<f64>()
                        .map_err(|_| Failure::Usage(format!("--grid: '{g}' is not a number")))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let reg = load_registry(run.registry.as_deref())?;
            let cfg = configure(&reg, &name, &run)?;
            if let Err(e) = cfg.clone().set(&param, values[0]) {
                return Err(Failure::Usage(format!("--param: {e}")));
            }
            let rows = scenario::sensitivity_sweep(&cfg, &param, &values)?;
            match out_dir(&run) {
                Some(dir) => {
                    let p = io::emit_sweep(&cfg.name, &param, &rows, &dir)?;
                    writeln!(out, "wrote {}", p.display())?;
                }
                None => {
                    let table: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            vec![
                                sig6(r.value),
                                sig6(r.final_y_total),
                                sig6(r.mean_enhancement_pct),
                            ]
                        })
                        .collect();
                    write_table(
                        out,
                        &[&param, "final_y_total", "mean_enhancement_pct"],
                        &table,
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn print_fit(out: &mut dyn Write, fit: &FitResult) -> std::io::Result<()> {
    for (name, v) in &fit.params {
        writeln!(out, "{name} = {}", sig6(*v))?;
    }
    writeln!(out, "rss = {}", sig6(fit.residual_sum_squares))?;
    writeln!(out, "converged = {}", fit.converged)?;
    writeln!(out, "iterations = {}", fit.iterations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let mut argv = vec!["aiecon"];
        argv.extend_from_slice(args);
        let code = cli_main(argv, &mut o, &mut e);
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, _, err) = run(&["frobnicate"]);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
        let (code, _, err) = run(&["simulate", "m1-cn", "--set", "eta=not-a-number"]);
        assert_eq!(code, 1);
        assert!(err.contains("--set"), "{err}");
        let (code, _, _) = run(&["simulate", "m1-cn", "--set", "bogus=1"]);
        assert_eq!(code, 1);
        let (code, _, _) = run(&["simulate", "nope"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("simulate"));
    }

    #[test]
    fn model_errors_exit_two() {
        let (code, _, err) = run(&["simulate", "m1-cn", "--set", "alpha=1.5"]);
        assert_eq!(code, 2);
        assert!(err.contains("alpha"));
    }

    #[test]
    fn simulate_to_stdout() {
        let (code, out, _) = run(&["simulate", "m1-cn", "--horizon", "3"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], "t,s,A,p,theta,y_total,y_human,y_ai");
        assert_eq!(lines.len(), 5);
    }
}
