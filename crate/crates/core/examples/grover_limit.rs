//! Marked probability at phi = 1 without damping, against the closed form
//! sin²((2k+1)·asin(2^(-n/2))) with k = n − 1 rounds.

use dqsa::{report, BasisPattern, RunConfig};

fn main() -> dqsa::Result<()> {
    println!("n  simulated           closed form");
    for n in 2..=9 {
        let r = report(&RunConfig::dissipationless(BasisPattern::ground(n)?, 1.0)?)?;
        let theta = 2f64.powf(-(n as f64) / 2.0).asin();
        let exact = ((2 * n - 1) as f64 * theta).sin().powi(2);
        println!("{n}  {:<18.15}  {exact:.15}", r.marked_prob);
    }
    Ok(())
}
