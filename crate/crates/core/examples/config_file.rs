//! Run whatever a JSON config describes.
//!
//! Usage: `cargo run --example config_file -- path/to/config.json`

use dqsa::experiments::sweep;
use dqsa::{load_config, report, Config};

fn main() -> dqsa::Result<()> {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: config_file <config.json>");
        std::process::exit(1);
    };
    match load_config(path)? {
        Config::Run(c) => {
            let r = report(&c)?;
            println!(
                "{} after {} rounds: rho = {:.6}, survival = {:.6}",
                c.marked, c.iterations, r.marked_prob, r.survival
            );
            for (p, v) in &r.unmarked {
                println!("  {p} {v:.3e}");
            }
        }
        Config::Sweep(s) => {
            for x in sweep(&s)? {
                println!(
                    "phi {:.4} gbar {:?} rho {:.6}",
                    x.phi, x.gbar, x.marked_prob
                );
            }
        }
    }
    Ok(())
}
