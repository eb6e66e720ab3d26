//! Best phase in (0, 1] for each register size without damping.

use dqsa::experiments::{peak_search, present_phi};
use dqsa::{BasisPattern, DissipationRates};

fn main() -> dqsa::Result<()> {
    println!("n  phi_peak  rho_peak  reference phi");
    for n in 2..=9 {
        let peak = peak_search(&BasisPattern::ground(n)?, &DissipationRates::zeros(n)?)?;
        println!(
            "{n}  {:.4}    {:.4}    {}",
            peak.phi,
            peak.marked_prob,
            present_phi(n)?
        );
    }
    Ok(())
}
