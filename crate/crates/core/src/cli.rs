//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a validation error (diagnostic on stderr
//! naming the flag or field), 2 when a comparison has a failing row.

use crate::config::{load_config, Config};
use crate::error::{Error, Result};
use crate::experiments::{
    self, appendix_reproduce, peak_search, preset_sweeps, table1_report, write_sweep_csv, Grid,
    RateTarget, SweepAxis, SweepSample, SweepSpec, TABLE_IDS,
};
use crate::gates::{DissipationRates, PhasePoint};
use crate::hamiltonian::{verify_gate_realization, REALIZATION_TOLERANCE};
use crate::search::{default_iterations, report, ProbabilityReport, RunConfig};
use crate::state::BasisPattern;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "dqsa",
    version,
    about = "Dissipative dynamical quantum search simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One search run; prints the probability report.
    Run(RunArgs),
    /// Phase or rate sweep.
    Sweep(SweepArgs),
    /// Present-time and Grover-time marked probabilities against the reference.
    Table1(Table1Args),
    /// Recompute an embedded reference table.
    Appendix(AppendixArgs),
    /// Check that the coupling Hamiltonians reproduce the oracles.
    VerifyGates(VerifyArgs),
    /// Locate the highest marked probability for phi in (0, 1].
    Peak(PeakArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Marked pattern over {g, e}, qubit 1 first.
    #[arg(long)]
    marked: Option<String>,
    /// Comma-separated dimensionless rates, one per qubit.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gammas: Option<Vec<f64>>,
    #[arg(long)]
    iterations: Option<usize>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Control phase beta/pi (the coefficient in t = coeff*pi/(2^n theta)).
    #[arg(long, alias = "coeff", allow_hyphen_values = true)]
    phi: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// A fixed phase, or `start:stop:steps` for a phase sweep.
    #[arg(long, alias = "coeff", allow_hyphen_values = true)]
    phi: Option<String>,
    /// `start:stop:steps` rate grid at fixed phi.
    #[arg(long)]
    gbar: Option<String>,
    /// Comma-separated 1-based qubits that take the swept rate.
    #[arg(long, value_delimiter = ',')]
    qubits: Option<Vec<usize>>,
    /// Named rate sweep; see `--list-presets`.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    list_presets: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct Table1Args {
    /// Register size; all of 2..=9 when absent.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct AppendixArgs {
    /// Table id; all tables when absent.
    #[arg(long)]
    table: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Register size (2, 3 or 4); all three when absent.
    #[arg(long)]
    n: Option<usize>,
    /// Only this pattern; every pattern when absent.
    #[arg(long)]
    marked: Option<String>,
    #[arg(
        long,
        alias = "coeff",
        default_value_t = 1.0,
        allow_hyphen_values = true
    )]
    phi: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gammas: Option<Vec<f64>>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PeakArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    output: Output,
}

/// A failure tied to the flag or field that caused it.
struct Diagnostic {
    field: &'static str,
    error: Error,
}

type CliResult<T> = std::result::Result<T, Diagnostic>;

trait AtField<T> {
    fn at(self, field: &'static str) -> CliResult<T>;
}

impl<T> AtField<T> for Result<T> {
    fn at(self, field: &'static str) -> CliResult<T> {
        self.map_err(|error| Diagnostic { field, error })
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn parse_and_dispatch<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(d) => {
            let _ = writeln!(stderr, "error: {}: {}", d.field, d.error);
            1
        }
    }
}

fn emit(text: &str, output: &Output, stdout: &mut dyn Write) -> CliResult<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
            .at("--out"),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(Error::from)
            .at("stdout"),
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> CliResult<bool> {
    match command {
        Command::Run(a) => cmd_run(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Table1(a) => cmd_table1(a, stdout),
        Command::Appendix(a) => cmd_appendix(a, stdout),
        Command::VerifyGates(a) => cmd_verify(a, stdout),
        Command::Peak(a) => cmd_peak(a, stdout),
    }
}

fn load(common: &Common) -> CliResult<Option<Config>> {
    common
        .config
        .as_ref()
        .map(|p| load_config(p).at("--config"))
        .transpose()
}

fn require<T>(value: Option<T>, field: &'static str) -> CliResult<T> {
    value.ok_or(Diagnostic {
        field,
        error: Error::MalformedConfig(format!("missing {field}")),
    })
}

/// Pattern from `--marked`, falling back to the file, checked against `--n`.
fn resolve_marked(common: &Common, file: Option<&BasisPattern>) -> CliResult<BasisPattern> {
    let marked = match &common.marked {
        Some(m) => BasisPattern::parse(m).at("--marked")?,
        None => require(file.cloned(), "--marked")?,
    };
    if let Some(n) = common.n {
        if n != marked.len() {
            return Err(Diagnostic {
                field: "--n",
                error: Error::DimensionMismatch {
                    expected: n,
                    actual: marked.len(),
                },
            });
        }
    }
    Ok(marked)
}

fn resolve_rates(
    common: &Common,
    n: usize,
    file: Option<&DissipationRates>,
) -> CliResult<DissipationRates> {
    match &common.gammas {
        Some(g) => {
            if g.len() != n {
                return Err(Diagnostic {
                    field: "--gammas",
                    error: Error::DimensionMismatch {
                        expected: n,
                        actual: g.len(),
                    },
                });
            }
            DissipationRates::new(g.clone()).at("--gammas")
        }
        None => match file {
            Some(r) if r.len() == n => Ok(r.clone()),
            _ => DissipationRates::zeros(n).at("--n"),
        },
    }
}

fn resolve_iterations(common: &Common, n: usize, file: Option<usize>) -> CliResult<usize> {
    let it = common
        .iterations
        .or(file)
        .unwrap_or_else(|| default_iterations(n));
    if it == 0 {
        return Err(Diagnostic {
            field: "--iterations",
            error: Error::MalformedConfig("iterations must be at least 1".into()),
        });
    }
    Ok(it)
}

fn report_json(c: &RunConfig, r: &ProbabilityReport) -> serde_json::Value {
    json!({
        "n": c.num_qubits(),
        "marked": c.marked.to_string(),
        "phi": c.phase.phi(),
        "tau": c.phase.tau(),
        "gammas": c.rates.as_slice(),
        "iterations": c.iterations,
        "marked_prob": r.marked_prob,
        "unmarked": r.unmarked.iter().map(|(p, v)| json!({"pattern": p.to_string(), "prob": v})).collect::<Vec<_>>(),
        "sum_unmarked": r.sum_unmarked(),
        "survival": r.survival,
    })
}

fn cmd_run(a: RunArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let file = match load(&a.common)? {
        Some(Config::Run(c)) => Some(c),
        Some(Config::Sweep(_)) => {
            return Err(Diagnostic {
                field: "--config",
                error: Error::MalformedConfig("describes a sweep; use `sweep`".into()),
            })
        }
        None => None,
    };
    let marked = resolve_marked(&a.common, file.as_ref().map(|c| &c.marked))?;
    let n = marked.len();
    let phi = match a.phi {
        Some(p) => p,
        None => require(file.as_ref().map(|c| c.phase.phi()), "--phi")?,
    };
    let phase = PhasePoint::new(phi, n).at("--phi")?;
    let rates = resolve_rates(&a.common, n, file.as_ref().map(|c| &c.rates))?;
    let iterations = resolve_iterations(&a.common, n, file.as_ref().map(|c| c.iterations))?;
    let config = RunConfig::with_iterations(marked, phase, rates, iterations).at("config")?;
    let r = report(&config).at("run")?;

    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => format!("{:#}\n", report_json(&config, &r)),
        Format::Csv => {
            let mut s = String::from("pattern,kind,prob\n");
            s.push_str(&format!("{},marked,{:?}\n", r.marked, r.marked_prob));
            for (p, v) in &r.unmarked {
                s.push_str(&format!("{p},unmarked,{v:?}\n"));
            }
            s
        }
    };
    emit(&text, &a.output, stdout)?;
    Ok(true)
}

fn parse_grid(text: &str, field: &'static str) -> CliResult<Grid> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Diagnostic {
        field,
        error: Error::MalformedConfig(format!("expected start:stop:steps, got {text:?}")),
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let start = parts[0].trim().parse().map_err(|_| bad())?;
    let stop = parts[1].trim().parse().map_err(|_| bad())?;
    let steps = parts[2].trim().parse().map_err(|_| bad())?;
    Grid::new(start, stop, steps).at(field)
}

fn sweep_text(samples: &[SweepSample], format: Format) -> CliResult<String> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(samples, &mut buf).at("--out")?;
            Ok(String::from_utf8(buf).expect("csv is utf-8"))
        }
        Format::Json => {
            let rows: Vec<_> = samples
                .iter()
                .map(|s| {
                    json!({
                        "gbar": s.gbar,
                        "phi": s.phi,
                        "tau": s.tau,
                        "marked_prob": s.marked_prob,
                        "sum_unmarked": s.sum_unmarked,
                        "survival": s.survival,
                        "unmarked": s.report.unmarked_values(),
                    })
                })
                .collect();
            Ok(format!("{:#}\n", serde_json::Value::from(rows)))
        }
    }
}

fn cmd_sweep(a: SweepArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let presets = preset_sweeps().at("--preset")?;
    if a.list_presets {
        let mut text = String::new();
        for (name, spec) in &presets {
            text.push_str(&format!("{name}\t{}\n", spec.marked));
        }
        emit(&text, &a.output, stdout)?;
        return Ok(true);
    }

    let file = match load(&a.common)? {
        Some(Config::Sweep(s)) => Some(s),
        Some(Config::Run(_)) => {
            return Err(Diagnostic {
                field: "--config",
                error: Error::MalformedConfig("describes a single run; use `run`".into()),
            })
        }
        None => None,
    };
    let base = match &a.preset {
        Some(name) => match presets.into_iter().find(|(p, _)| p == name) {
            Some((_, spec)) => Some(spec),
            None => {
                return Err(Diagnostic {
                    field: "--preset",
                    error: Error::MalformedConfig(format!("unknown preset {name:?}")),
                })
            }
        },
        None => file,
    };

    let marked = resolve_marked(&a.common, base.as_ref().map(|s| &s.marked))?;
    let n = marked.len();
    let rates = resolve_rates(&a.common, n, base.as_ref().map(|s| &s.rates))?;
    let iterations = resolve_iterations(&a.common, n, base.as_ref().and_then(|s| s.iterations))?;

    let phi_grid = a.phi.as_deref().filter(|p| p.contains(':'));
    let phi_value = match a.phi.as_deref().filter(|p| !p.contains(':')) {
        Some(p) => Some(p.trim().parse::<f64>().map_err(|_| Diagnostic {
            field: "--phi",
            error: Error::MalformedConfig(format!("not a number: {p:?}")),
        })?),
        None => None,
    };
    let base_axis = base.as_ref().map(|s| s.axis.clone());

    let spec = if let Some(g) = &a.gbar {
        let grid = parse_grid(g, "--gbar")?;
        let file_phi = match &base_axis {
            Some(SweepAxis::Dissipation { phi, .. }) => Some(*phi),
            _ => None,
        };
        let phi = require(phi_value.or(file_phi), "--phi")?;
        let target = match (&a.qubits, &base_axis) {
            (Some(q), _) => RateTarget::Qubits(q.clone()),
            (None, Some(SweepAxis::Dissipation { target, .. })) => target.clone(),
            _ => RateTarget::Uniform,
        };
        SweepSpec::dissipation(marked, phi, target, rates, grid).at("--gbar")?
    } else if let Some(g) = phi_grid {
        if a.qubits.is_some() {
            return Err(Diagnostic {
                field: "--qubits",
                error: Error::MalformedConfig("only valid with --gbar".into()),
            });
        }
        SweepSpec::phase(marked, rates, parse_grid(g, "--phi")?).at("--phi")?
    } else {
        let mut spec = require(base, "--phi")?;
        spec.marked = marked;
        spec.rates = rates;
        if let (Some(phi), SweepAxis::Dissipation { phi: p, .. }) = (phi_value, &mut spec.axis) {
            *p = phi;
        }
        if let (Some(q), SweepAxis::Dissipation { target, .. }) = (&a.qubits, &mut spec.axis) {
            *target = RateTarget::Qubits(q.clone());
        }
        spec.validate().at("config")?;
        spec
    };
    let spec = SweepSpec {
        iterations: Some(iterations),
        ..spec
    };

    let samples = experiments::sweep(&spec).at("sweep")?;
    let text = sweep_text(&samples, a.output.format.unwrap_or(Format::Csv))?;
    emit(&text, &a.output, stdout)?;
    Ok(true)
}

fn comparison_text(r: &experiments::ComparisonReport, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(format!("{}\n", r.to_json())),
        Format::Csv => {
            let mut buf = Vec::new();
            r.write_csv(&mut buf).at("--out")?;
            Ok(String::from_utf8(buf).expect("csv is utf-8"))
        }
    }
}

fn cmd_table1(a: Table1Args, stdout: &mut dyn Write) -> CliResult<bool> {
    let sizes: Vec<usize> = match a.n {
        Some(n) => vec![n],
        None => (2..=9).collect(),
    };
    let r = table1_report(&sizes, a.tolerance).at("--n")?;
    emit(
        &comparison_text(&r, a.output.format.unwrap_or(Format::Csv))?,
        &a.output,
        stdout,
    )?;
    Ok(r.all_pass())
}

fn cmd_appendix(a: AppendixArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let ids: Vec<usize> = match a.table {
        Some(t) => vec![t],
        None => TABLE_IDS.collect(),
    };
    let mut all = experiments::ComparisonReport::new("appendix", a.tolerance.unwrap_or(2e-3));
    for id in ids {
        all.extend(appendix_reproduce(id, a.tolerance).at("--table")?);
    }
    emit(
        &comparison_text(&all, a.output.format.unwrap_or(Format::Csv))?,
        &a.output,
        stdout,
    )?;
    Ok(all.all_pass())
}

fn cmd_verify(a: VerifyArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let tolerance = a.tolerance.unwrap_or(REALIZATION_TOLERANCE);
    let patterns: Vec<BasisPattern> = match (&a.marked, a.n) {
        (Some(m), n) => {
            let p = BasisPattern::parse(m).at("--marked")?;
            if n.is_some_and(|n| n != p.len()) {
                return Err(Diagnostic {
                    field: "--n",
                    error: Error::DimensionMismatch {
                        expected: n.unwrap(),
                        actual: p.len(),
                    },
                });
            }
            vec![p]
        }
        (None, n) => {
            let sizes: Vec<usize> = n.map_or_else(|| vec![2, 3, 4], |n| vec![n]);
            let mut out = Vec::new();
            for n in sizes {
                for i in 0..1usize << n {
                    out.push(BasisPattern::from_index(n, i).at("--n")?);
                }
            }
            out
        }
    };
    let mut r = experiments::ComparisonReport::new("verify-gates", tolerance);
    for p in &patterns {
        let n = p.len();
        let rates = match &a.gammas {
            Some(g) if g.len() != n => {
                return Err(Diagnostic {
                    field: "--gammas",
                    error: Error::DimensionMismatch {
                        expected: n,
                        actual: g.len(),
                    },
                })
            }
            Some(g) => DissipationRates::new(g.clone()).at("--gammas")?,
            None => DissipationRates::zeros(n).at("--n")?,
        };
        let phase = PhasePoint::new(a.phi, n).at("--phi")?;
        let dev = verify_gate_realization(n, p, &phase, &rates).at("--n")?;
        r.push(format!("{p}/phi={}", a.phi), 0.0, dev);
    }
    emit(
        &comparison_text(&r, a.output.format.unwrap_or(Format::Csv))?,
        &a.output,
        stdout,
    )?;
    Ok(r.all_pass())
}

fn cmd_peak(a: PeakArgs, stdout: &mut dyn Write) -> CliResult<bool> {
    let file = load(&a.common)?;
    let (file_marked, file_rates) = match &file {
        Some(Config::Run(c)) => (Some(&c.marked), Some(&c.rates)),
        Some(Config::Sweep(s)) => (Some(&s.marked), Some(&s.rates)),
        None => (None, None),
    };
    let marked = match (&a.common.marked, file_marked, a.common.n) {
        (None, None, Some(n)) => BasisPattern::ground(n).at("--n")?,
        _ => resolve_marked(&a.common, file_marked)?,
    };
    let rates = resolve_rates(&a.common, marked.len(), file_rates)?;
    let peak = peak_search(&marked, &rates).at("peak")?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => format!(
            "{:#}\n",
            json!({"n": marked.len(), "marked": marked.to_string(), "gammas": rates.as_slice(),
                   "phi": peak.phi, "marked_prob": peak.marked_prob})
        ),
        Format::Csv => format!(
            "n,marked,phi,marked_prob\n{},{marked},{:?},{:?}\n",
            marked.len(),
            peak.phi,
            peak.marked_prob
        ),
    };
    emit(&text, &a.output, stdout)?;
    Ok(true)
}
