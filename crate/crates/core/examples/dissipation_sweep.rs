//! Marked probability against damping rate, for the shipped presets.

use dqsa::experiments::{preset_sweeps, sweep};

fn main() -> dqsa::Result<()> {
    for (name, spec) in preset_sweeps()? {
        let samples = sweep(&spec)?;
        let at = |i: usize| &samples[i];
        let last = samples.len() - 1;
        println!(
            "{name:<16} rho(0) = {:.4}  rho({:.1}) = {:.4}  rho({:.1}) = {:.4}  survival({:.1}) = {:.4}",
            at(0).marked_prob,
            at(last / 2).gbar.unwrap(),
            at(last / 2).marked_prob,
            at(last).gbar.unwrap(),
            at(last).marked_prob,
            at(last).gbar.unwrap(),
            at(last).survival,
        );
    }
    Ok(())
}
