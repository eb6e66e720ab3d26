//! Coupling constants that turn an Ising Hamiltonian into the phase oracle.
//!
//! Usage: `cargo run --example gate_synthesis -- [pattern] [phi]`

use dqsa::hamiltonian::coupling_conditions;
use dqsa::{build_hamiltonian, coupling_assignment, verify_gate_realization};
use dqsa::{BasisPattern, DissipationRates, PhasePoint};

fn main() -> dqsa::Result<()> {
    let mut args = std::env::args().skip(1);
    let pattern = BasisPattern::parse(&args.next().unwrap_or_else(|| "eegg".into()))?;
    let phi: f64 = args
        .next()
        .map_or(0.6933, |s| s.parse().expect("phi is a number"));
    let n = pattern.len();

    let couplings = coupling_assignment(n, &pattern)?;
    println!("nonzero couplings for {pattern}:");
    for (tuple, j) in couplings.terms() {
        println!("  J{tuple:?} = {j:+.6}");
    }
    let cond = coupling_conditions(n, &pattern)?;
    println!(
        "theta = {}, w = {:?}, branch = {:?}",
        cond.theta, cond.w, cond.branch
    );

    let zero = DissipationRates::zeros(n)?;
    let h = build_hamiltonian(&couplings, &zero)?;
    println!("energies by index:");
    for (i, e) in h.energies().iter().enumerate() {
        println!("  {} {:+.3}", BasisPattern::from_index(n, i)?, e.re);
    }

    let rates = DissipationRates::uniform(n, 0.3)?;
    let phase = PhasePoint::new(phi, n)?;
    let dev = verify_gate_realization(n, &pattern, &phase, &rates)?;
    println!("max deviation from the oracle at phi {phi}, gbar 0.3: {dev:.2e}");
    Ok(())
}
