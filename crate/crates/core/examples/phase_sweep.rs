//! Phase sweep as CSV on stdout.
//!
//! Usage: `cargo run --example phase_sweep -- [pattern] [steps]`

use dqsa::experiments::{phase_sweep, write_sweep_csv, Grid, SweepSpec};
use dqsa::{BasisPattern, DissipationRates};

fn main() -> dqsa::Result<()> {
    let mut args = std::env::args().skip(1);
    let marked = BasisPattern::parse(&args.next().unwrap_or_else(|| "egee".into()))?;
    let steps = args
        .next()
        .map_or(201, |s| s.parse().expect("steps is an integer"));
    let rates = DissipationRates::zeros(marked.len())?;
    let spec = SweepSpec::phase(marked, rates, Grid::new(0.0, 2.0, steps)?)?;
    write_sweep_csv(&phase_sweep(&spec)?, std::io::stdout().lock())
}
