//! `gdiscord`: correlation reports, state families, sampling, verification
//! suites and figure data for two-mode Gaussian states.
//!
//! Exit status: 0 on success, 1 on bad input, 2 when a verification finds
//! violations.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gaussian_discord::discord::{full_report, one_way, Direction};
use gaussian_discord::entanglement::ppt_test;
use gaussian_discord::experiments::{
    figure_data, sample_states, verify, Panel, SamplerConfig, StateClass, Suite,
};
use gaussian_discord::families::{
    eavesdrop_scenario, family_eq5, product_thermal, separable_extremal, squeezed_thermal, two_mode_squeezed,
};
use gaussian_discord::two_mode::standard_form;
use gaussian_discord::{CovarianceMatrix, Error};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "gdiscord", version, about = "Quantum and classical correlations of Gaussian states")]
struct Cli {
    /// Write the output here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord, classical correlations and mutual information of a
    /// two-mode CM (JSON, or CSV when the file ends in .csv).
    Report {
        cm: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        direction: Which,
    },
    /// Covariance matrix of a named state family.
    Family {
        #[arg(value_enum)]
        name: FamilyName,
        /// Comma-separated parameters, e.g. `--params 0.5,1.2`.
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, required = true)]
        params: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Seeded random states in standard form.
    Sample {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::Any)]
        class: ClassArg,
        #[arg(long, default_value_t = 10.0)]
        a_max: f64,
        #[arg(long, default_value_t = 10.0)]
        b_max: f64,
    },
    /// Monte Carlo check of one inequality; exits 2 on violations.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(short, default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Scatter data of one figure panel as CSV.
    Figure {
        #[arg(value_enum)]
        panel: PanelArg,
        #[arg(short, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Beam-splitter attack on a shared two-mode squeezed state.
    Eavesdrop {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        t: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    /// s
    TwoModeSqueezed,
    /// r, s
    SqueezedThermal,
    /// a, b with 1 <= b <= 2a - 1
    Eq5,
    /// a, b
    SeparableExtremal,
    /// n1, n2
    ProductThermal,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Any,
    Separable,
    Entangled,
    Product,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Asymmetry,
    Separable,
    Entangled,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum PanelArg {
    Left,
    Right,
}

enum Failure {
    Input(String),
    Violations(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violations(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_cm(path: &Path) -> Result<CovarianceMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    Ok(if is_csv { CovarianceMatrix::read_csv(text.as_bytes())? } else { CovarianceMatrix::from_json(&text)? })
}

fn arity(name: &str, params: &[f64], n: usize) -> Result<(), Failure> {
    if params.len() == n {
        Ok(())
    } else {
        Err(Failure::Input(format!("family {name} takes {n} parameter(s), got {}", params.len())))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Report { cm, direction } => {
            let cm = read_cm(&cm)?;
            let sf = standard_form(&cm)?;
            let (nu_tilde, entangled) = ppt_test(&cm)?;
            let one = |dir: Direction| -> Result<serde_json::Value, Failure> {
                let w = one_way(&match dir {
                    Direction::Left => sf,
                    Direction::Right => sf.swapped(),
                })?;
                Ok(json!({
                    "direction": dir,
                    "discord": w.discord,
                    "classical_correlations": w.classical,
                    "mutual_information": w.mutual_information,
                    "emin": w.emin.value,
                    "case": w.emin.case,
                    "measurement": w.emin.measurement,
                }))
            };
            let body = match direction {
                Which::Left => one(Direction::Left)?,
                Which::Right => one(Direction::Right)?,
                Which::Both => serde_json::to_value(full_report(&cm)?).map_err(Error::from)?,
            };
            emit_json(
                out,
                &json!({
                    "standard_form": sf,
                    "invariants": sf.invariants(),
                    "nu_tilde_minus": nu_tilde,
                    "entangled": entangled,
                    "report": body,
                }),
            )
        }
        Command::Family { name, params, format } => {
            let cm = match name {
                FamilyName::TwoModeSqueezed => {
                    arity("two-mode-squeezed", &params, 1)?;
                    two_mode_squeezed(params[0])?
                }
                FamilyName::SqueezedThermal => {
                    arity("squeezed-thermal", &params, 2)?;
                    squeezed_thermal(params[0], params[1])?
                }
                FamilyName::Eq5 => {
                    arity("eq5", &params, 2)?;
                    family_eq5(params[0], params[1])?
                }
                FamilyName::SeparableExtremal => {
                    arity("separable-extremal", &params, 2)?;
                    separable_extremal(params[0], params[1])?
                }
                FamilyName::ProductThermal => {
                    arity("product-thermal", &params, 2)?;
                    product_thermal(params[0], params[1])?
                }
            };
            match format {
                Format::Json => emit_json(out, &cm),
                Format::Csv => {
                    let mut w = output(out)?;
                    cm.write_csv(&mut w)?;
                    w.flush()?;
                    Ok(())
                }
            }
        }
        Command::Sample { seed, count, class, a_max, b_max } => {
            let class = match class {
                ClassArg::Any => StateClass::Any,
                ClassArg::Separable => StateClass::Separable,
                ClassArg::Entangled => StateClass::Entangled,
                ClassArg::Product => StateClass::Product,
            };
            let sample = sample_states(&SamplerConfig { seed, a_max, b_max, class, count })?;
            emit_json(
                out,
                &json!({
                    "config": sample.config,
                    "draws": sample.draws,
                    "rejections": sample.rejections,
                    "rejection_rate": sample.rejection_rate(),
                    "states": sample.states,
                }),
            )
        }
        Command::Verify { suite, n, seed } => {
            let suite = match suite {
                SuiteArg::Asymmetry => Suite::Asymmetry,
                SuiteArg::Separable => Suite::SeparableBound,
                SuiteArg::Entangled => Suite::EntangledBounds,
                SuiteArg::Oracle => Suite::Oracle,
            };
            let report = verify(suite, n, seed.unwrap_or(suite.default_seed()))?;
            emit_json(out, &report)?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Violations(format!(
                    "{} violation(s), {} saturation miss(es), case fractions {}/{}",
                    report.n_violations,
                    report.saturation.iter().filter(|s| !s.within).count(),
                    report.cases.general,
                    report.cases.homodyne
                )))
            }
        }
        Command::Figure { panel, n, seed } => {
            let panel = match panel {
                PanelArg::Left => Panel::Left,
                PanelArg::Right => Panel::Right,
            };
            let mut w = output(out)?;
            let summary = figure_data(panel, n, seed, &mut w)?;
            w.flush()?;
            if summary.violations == 0 {
                Ok(())
            } else {
                Err(Failure::Violations(format!("{} of {} points outside their bounds", summary.violations, summary.rows)))
            }
        }
        Command::Eavesdrop { s, n, t } => emit_json(out, &eavesdrop_scenario(s, n, t)?),
    }
}
