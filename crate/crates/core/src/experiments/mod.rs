//! Sweeps, peak search and comparisons against published reference values.
//!
//! Grid points are independent and may be evaluated on a rayon pool; results
//! always come back in grid order, and every point is computed by the same
//! sequential code, so output is bitwise identical for any thread count.
//! `DQSA_THREADS` caps the pool size.

mod appendix;
mod report;

pub use appendix::{
    appendix_reproduce, appendix_table, AppendixRow, AppendixTable, RowKind, TABLE_IDS,
};
pub use report::{ComparisonReport, ComparisonRow};

use crate::error::{Error, Result};
use crate::gates::{DissipationRates, PhasePoint, OVERDAMPED_RATE};
use crate::search::{default_iterations, report, ProbabilityReport, RunConfig};
use crate::state::BasisPattern;
use rayon::prelude::*;
use rayon::ThreadPool;
use serde::Serialize;
use std::io::Write;

/// Environment variable that caps sweep parallelism.
pub const THREADS_ENV: &str = "DQSA_THREADS";

/// φ_p coefficients for n = 2..=9.
pub const PRESENT_PHI: [f64; 8] = [
    0.9425, 0.6723, 0.6933, 0.8661, 0.9899, 0.9906, 0.9906, 0.995,
];

/// Published marked probability at φ_p for n = 2..=9.
pub const PRESENT_PROB: [f64; 8] = [1.0, 1.0, 1.0, 1.0, 0.9635, 0.8335, 0.6503, 0.4662];

/// Published marked probability at φ = 1 for n = 2..=9.
pub const GROVER_PROB: [f64; 8] = [1.0, 0.9453, 0.9613, 0.9992, 0.9635, 0.8335, 0.6503, 0.4662];

/// Tolerance on the Grover column.
pub const GROVER_TOLERANCE: f64 = 5e-4;

/// Tolerance on the present-time column.
pub const PRESENT_TOLERANCE: f64 = 1e-3;

/// Present-time coefficient for `n` qubits.
pub fn present_phi(n: usize) -> Result<f64> {
    table_index(n).map(|i| PRESENT_PHI[i])
}

fn table_index(n: usize) -> Result<usize> {
    if (2..=9).contains(&n) {
        Ok(n - 2)
    } else {
        Err(Error::UnsupportedSize(format!(
            "reference table covers 2..=9 qubits, got {n}"
        )))
    }
}

/// Builds a pool honoring `DQSA_THREADS`, or an explicit thread count.
pub fn thread_pool(threads: Option<usize>) -> Result<ThreadPool> {
    let threads = match threads {
        Some(t) => t,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => v.trim().parse::<usize>().map_err(|_| {
                Error::MalformedConfig(format!(
                    "{THREADS_ENV}: expected a positive integer, got {v:?}"
                ))
            })?,
            Err(_) => 0,
        },
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::MalformedConfig(format!("{THREADS_ENV}: {e}")))
}

/// Evenly spaced grid including both end points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::MalformedConfig(format!(
                "grid steps must be at least 2, got {steps}"
            )));
        }
        if !(start.is_finite() && stop.is_finite()) || stop < start {
            return Err(Error::MalformedConfig(format!(
                "grid [{start}, {stop}] is not increasing"
            )));
        }
        Ok(Grid { start, stop, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + span * i as f64 / last
                }
            })
            .collect()
    }
}

/// Which rates a dissipation sweep varies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RateTarget {
    /// All qubits share the swept ḡ.
    Uniform,
    /// Only these 1-based qubits take the swept ḡ; the rest keep the base rates.
    Qubits(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SweepAxis {
    /// Vary φ with the base rates fixed.
    Phase,
    /// Vary ḡ at fixed φ.
    Dissipation { phi: f64, target: RateTarget },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub marked: BasisPattern,
    pub axis: SweepAxis,
    /// Fixed rates; the swept components are overwritten.
    pub rates: DissipationRates,
    pub grid: Grid,
    pub iterations: Option<usize>,
}

impl SweepSpec {
    pub fn phase(marked: BasisPattern, rates: DissipationRates, grid: Grid) -> Result<Self> {
        let spec = SweepSpec {
            marked,
            axis: SweepAxis::Phase,
            rates,
            grid,
            iterations: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dissipation(
        marked: BasisPattern,
        phi: f64,
        target: RateTarget,
        rates: DissipationRates,
        grid: Grid,
    ) -> Result<Self> {
        let axis = SweepAxis::Dissipation { phi, target };
        let spec = SweepSpec {
            marked,
            axis,
            rates,
            grid,
            iterations: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn num_qubits(&self) -> usize {
        self.marked.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.marked.len();
        Grid::new(self.grid.start, self.grid.stop, self.grid.steps)?;
        if self.rates.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: self.rates.len(),
            });
        }
        if self.iterations == Some(0) {
            return Err(Error::MalformedConfig(
                "iterations must be at least 1".into(),
            ));
        }
        match &self.axis {
            SweepAxis::Phase => {
                if self.grid.start < 0.0 || self.grid.stop > 2.0 {
                    return Err(Error::MalformedConfig(format!(
                        "phase grid [{}, {}] outside [0, 2]",
                        self.grid.start, self.grid.stop
                    )));
                }
            }
            SweepAxis::Dissipation { phi, target } => {
                PhasePoint::new(*phi, n)?;
                if self.grid.start < 0.0 || self.grid.stop >= OVERDAMPED_RATE {
                    return Err(Error::MalformedConfig(format!(
                        "rate grid [{}, {}] outside [0, {OVERDAMPED_RATE})",
                        self.grid.start, self.grid.stop
                    )));
                }
                if let RateTarget::Qubits(qs) = target {
                    if qs.is_empty() {
                        return Err(Error::MalformedConfig("empty qubit mask".into()));
                    }
                    if let Some(&q) = qs.iter().find(|&&q| q == 0 || q > n) {
                        return Err(Error::QubitOutOfRange { qubit: q, n });
                    }
                }
            }
        }
        Ok(())
    }

    fn iterations(&self) -> usize {
        self.iterations
            .unwrap_or_else(|| default_iterations(self.num_qubits()))
    }

    /// The run behind grid value `x`.
    pub fn point(&self, x: f64) -> Result<RunConfig> {
        let n = self.num_qubits();
        let (phi, rates) = match &self.axis {
            SweepAxis::Phase => (x, self.rates.clone()),
            SweepAxis::Dissipation { phi, target } => {
                let mut r = self.rates.as_slice().to_vec();
                match target {
                    RateTarget::Uniform => r.iter_mut().for_each(|g| *g = x),
                    RateTarget::Qubits(qs) => qs.iter().for_each(|&q| r[q - 1] = x),
                }
                (*phi, DissipationRates::new(r)?)
            }
        };
        RunConfig::with_iterations(
            self.marked.clone(),
            PhasePoint::new(phi, n)?,
            rates,
            self.iterations(),
        )
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSample {
    /// Swept rate, for dissipation sweeps.
    pub gbar: Option<f64>,
    pub phi: f64,
    pub tau: f64,
    pub marked_prob: f64,
    pub sum_unmarked: f64,
    pub survival: f64,
    pub report: ProbabilityReport,
}

fn evaluate(spec: &SweepSpec, x: f64) -> Result<SweepSample> {
    let config = spec.point(x)?;
    let r = report(&config)?;
    Ok(SweepSample {
        gbar: matches!(spec.axis, SweepAxis::Dissipation { .. }).then_some(x),
        phi: config.phase.phi(),
        tau: config.phase.tau(),
        marked_prob: r.marked_prob,
        sum_unmarked: r.sum_unmarked(),
        survival: r.survival,
        report: r,
    })
}

/// Evaluates every grid point of `spec` on `pool`, in grid order.
pub fn sweep_in(spec: &SweepSpec, pool: &ThreadPool) -> Result<Vec<SweepSample>> {
    spec.validate()?;
    let xs = spec.grid.values();
    pool.install(|| xs.par_iter().map(|&x| evaluate(spec, x)).collect())
}

/// Evaluates a sweep on a pool sized by `DQSA_THREADS`.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepSample>> {
    sweep_in(spec, &thread_pool(None)?)
}

/// Phase sweep; `spec.axis` must be `Phase`.
pub fn phase_sweep(spec: &SweepSpec) -> Result<Vec<SweepSample>> {
    if spec.axis != SweepAxis::Phase {
        return Err(Error::MalformedConfig(
            "phase_sweep needs a phase axis".into(),
        ));
    }
    sweep(spec)
}

/// Sweeps ḡ at fixed φ.
pub fn dissipation_sweep(
    marked: &BasisPattern,
    phi: f64,
    target: RateTarget,
    grid: Grid,
) -> Result<Vec<SweepSample>> {
    let rates = DissipationRates::zeros(marked.len())?;
    sweep(&SweepSpec::dissipation(
        marked.clone(),
        phi,
        target,
        rates,
        grid,
    )?)
}

/// Writes sweep samples as CSV, with a leading `gbar` column for rate sweeps.
pub fn write_sweep_csv<W: Write>(samples: &[SweepSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let with_rate = samples.first().is_some_and(|s| s.gbar.is_some());
    let mut header = vec!["phi", "tau", "marked_prob", "sum_unmarked", "survival"];
    if with_rate {
        header.insert(0, "gbar");
    }
    w.write_record(&header).map_err(csv_error)?;
    for s in samples {
        let mut rec: Vec<String> = Vec::with_capacity(6);
        if let Some(g) = s.gbar {
            rec.push(format!("{g:?}"));
        }
        for v in [s.phi, s.tau, s.marked_prob, s.sum_unmarked, s.survival] {
            rec.push(format!("{v:?}"));
        }
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Marked probability at zero dissipation and n − 1 iterations.
fn ideal_prob(n: usize, phi: f64) -> Result<f64> {
    let marked = BasisPattern::ground(n)?;
    Ok(report(&RunConfig::dissipationless(marked, phi)?)?.marked_prob)
}

/// One row of the present-time versus Grover-time comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub n: usize,
    pub phi_p: f64,
    pub present_prob: f64,
    pub grover_prob: f64,
    pub reference_present: f64,
    pub reference_grover: f64,
}

pub fn table1(n: usize) -> Result<Table1Row> {
    let i = table_index(n)?;
    Ok(Table1Row {
        n,
        phi_p: PRESENT_PHI[i],
        present_prob: ideal_prob(n, PRESENT_PHI[i])?,
        grover_prob: ideal_prob(n, 1.0)?,
        reference_present: PRESENT_PROB[i],
        reference_grover: GROVER_PROB[i],
    })
}

/// Comparison rows for the given register sizes.
pub fn table1_report(sizes: &[usize], tolerance: Option<f64>) -> Result<ComparisonReport> {
    let mut out = ComparisonReport::new("table1", tolerance.unwrap_or(GROVER_TOLERANCE));
    for &n in sizes {
        let row = table1(n)?;
        out.push_with_tolerance(
            format!("n={n}/present/phi={}", row.phi_p),
            row.reference_present,
            row.present_prob,
            tolerance.unwrap_or(PRESENT_TOLERANCE),
        );
        out.push_with_tolerance(
            format!("n={n}/grover/phi=1"),
            row.reference_grover,
            row.grover_prob,
            tolerance.unwrap_or(GROVER_TOLERANCE),
        );
    }
    Ok(out)
}

/// Location and height of the highest marked probability for φ ∈ (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub phi: f64,
    pub marked_prob: f64,
}

/// Grid step of the peak scan.
pub const PEAK_STEP: f64 = 1e-3;

/// Scans φ = k·10⁻³, k = 1..=1000, then refines with a three-point parabola.
/// Ties go to the smaller φ.
pub fn peak_search(marked: &BasisPattern, rates: &DissipationRates) -> Result<Peak> {
    let n = marked.len();
    let iterations = default_iterations(n);
    let eval = |phi: f64| -> Result<f64> {
        let config = RunConfig::with_iterations(
            marked.clone(),
            PhasePoint::new(phi, n)?,
            rates.clone(),
            iterations,
        )?;
        Ok(report(&config)?.marked_prob)
    };
    let steps = (1.0 / PEAK_STEP).round() as usize;
    let phis: Vec<f64> = (1..=steps).map(|k| k as f64 * PEAK_STEP).collect();
    let pool = thread_pool(None)?;
    let values: Vec<f64> = pool.install(|| {
        phis.par_iter()
            .map(|&p| eval(p))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = k;
        }
    }
    let mut peak = Peak {
        phi: phis[best],
        marked_prob: values[best],
    };
    if best > 0 && best + 1 < values.len() {
        let (fm, f0, fp) = (values[best - 1], values[best], values[best + 1]);
        let curvature = fp - 2.0 * f0 + fm;
        if curvature < 0.0 {
            let shift = 0.5 * PEAK_STEP * (fm - fp) / curvature;
            let phi = phis[best] + shift;
            let v = eval(phi)?;
            if v > peak.marked_prob {
                peak = Peak {
                    phi,
                    marked_prob: v,
                };
            }
        }
    }
    Ok(peak)
}

/// Named dissipation sweeps behind the published rate-dependence figures.
pub fn preset_sweeps() -> Result<Vec<(&'static str, SweepSpec)>> {
    let grid = Grid::new(0.0, 1.0, 101)?;
    let uniform = |pattern: &str, phi: f64| -> Result<SweepSpec> {
        let marked = BasisPattern::parse(pattern)?;
        let rates = DissipationRates::zeros(marked.len())?;
        SweepSpec::dissipation(marked, phi, RateTarget::Uniform, rates, grid)
    };
    let masked = |pattern: &str, phi: f64, qubits: &[usize]| -> Result<SweepSpec> {
        let marked = BasisPattern::parse(pattern)?;
        let rates = DissipationRates::zeros(marked.len())?;
        SweepSpec::dissipation(
            marked,
            phi,
            RateTarget::Qubits(qubits.to_vec()),
            rates,
            grid,
        )
    };
    Ok(vec![
        ("egee-uniform", uniform("egee", 0.45008)?),
        ("geege-uniform", uniform("geege", 0.86608)?),
        ("egee-q124", masked("egee", 0.45008, &[1, 2, 4])?),
        ("geege-q135", masked("geege", 0.86608, &[1, 3, 5])?),
        ("geege-q24", masked("geege", 0.86608, &[2, 4])?),
        ("eg-uniform", uniform("eg", present_phi(2)?)?),
        ("geg-uniform", uniform("geg", present_phi(3)?)?),
        ("gegg-uniform", uniform("gegg", present_phi(4)?)?),
        ("gegege-uniform", uniform("gegege", present_phi(6)?)?),
        ("eeeee-uniform", uniform("eeeee", present_phi(5)?)?),
        ("ggggg-uniform", uniform("ggggg", present_phi(5)?)?),
    ])
}
