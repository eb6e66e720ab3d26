//! Marked amplitude round by round, with and without damping.

use dqsa::{marked_amplitude_trace, BasisPattern, DissipationRates, PhasePoint, RunConfig};

fn main() -> dqsa::Result<()> {
    let marked = BasisPattern::parse("gegeg")?;
    for gbar in [0.0, 0.05, 0.5] {
        let config = RunConfig::with_iterations(
            marked.clone(),
            PhasePoint::new(0.8661, 5)?,
            DissipationRates::uniform(5, gbar)?,
            8,
        )?;
        let trace: Vec<String> = marked_amplitude_trace(&config)?
            .iter()
            .map(|a| format!("{:.3}", a.norm_sqr()))
            .collect();
        println!("gbar {gbar:<4}  |a_k|^2: {}", trace.join(" "));
    }
    Ok(())
}
