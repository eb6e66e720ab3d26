//! The damped Walsh gate in closed form and assembled from three pulses.

use dqsa::{compose_w, w_gate};

fn main() -> dqsa::Result<()> {
    for g in [0.0, 1.0 / 113.0, 0.5, 0.8, 2.0, 3.9] {
        let closed = w_gate(g)?;
        let pulses = compose_w(g)?;
        let [[a, b], [_, d]] = closed.0;
        println!(
            "gbar {g:<8.5} W = [[{:+.6}, {:+.6}], [., {:+.6}]]  |closed - pulses| = {:.1e}",
            a.re,
            b.re,
            d.re,
            closed.max_abs_diff(&pulses)
        );
    }
    match w_gate(4.0) {
        Err(e) => println!("gbar 4: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
