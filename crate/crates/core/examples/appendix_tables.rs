//! Recompute every embedded reference table and summarize the agreement.

use dqsa::experiments::{appendix_reproduce, appendix_table, TABLE_IDS};

fn main() -> dqsa::Result<()> {
    println!("table  n  rates                               rows  failing  worst");
    for id in TABLE_IDS {
        let table = appendix_table(id)?;
        let report = appendix_reproduce(id, None)?;
        let worst = report.worst().expect("tables are not empty");
        let rates: Vec<String> = table
            .rates
            .as_slice()
            .iter()
            .map(|g| format!("{g:.3}"))
            .collect();
        println!(
            "{id:>5}  {}  {:<34}  {:>4}  {:>7}  {:.2e} ({})",
            table.n,
            rates.join(" "),
            report.rows.len(),
            report.failures().count(),
            worst.absdiff,
            worst.label
        );
    }
    Ok(())
}
