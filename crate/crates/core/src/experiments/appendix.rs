//! Embedded reference tables of final probabilities under dissipation.
//!
//! Each table fixes n, a rate vector and four control phases, and lists for
//! several marked patterns the marked probability and the unlabeled
//! remaining-state probabilities. The remaining-state cells do not say which
//! value belongs to which pattern, so they are compared as sorted multisets.

use super::csv_error;
use super::report::ComparisonReport;
use super::thread_pool;
use crate::error::{Error, Result};
use crate::gates::{DissipationRates, PhasePoint};
use crate::search::{default_iterations, report, ProbabilityReport, RunConfig};
use crate::state::BasisPattern;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Available table ids.
pub const TABLE_IDS: std::ops::RangeInclusive<usize> = 2..=11;

/// Default cell tolerance.
pub const APPENDIX_TOLERANCE: f64 = 2e-3;

const SOURCES: [&str; 10] = [
    include_str!("../../data/appendix/table02.csv"),
    include_str!("../../data/appendix/table03.csv"),
    include_str!("../../data/appendix/table04.csv"),
    include_str!("../../data/appendix/table05.csv"),
    include_str!("../../data/appendix/table06.csv"),
    include_str!("../../data/appendix/table07.csv"),
    include_str!("../../data/appendix/table08.csv"),
    include_str!("../../data/appendix/table09.csv"),
    include_str!("../../data/appendix/table10.csv"),
    include_str!("../../data/appendix/table11.csv"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Marked,
    Unmarked,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppendixRow {
    pub marked: BasisPattern,
    pub kind: RowKind,
    /// One value list per phase; marked cells hold a single value.
    pub cells: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppendixTable {
    pub id: usize,
    pub n: usize,
    pub rates: DissipationRates,
    pub phis: Vec<f64>,
    pub rows: Vec<AppendixRow>,
}

fn malformed(id: usize, line: usize, msg: impl std::fmt::Display) -> Error {
    Error::MalformedConfig(format!("appendix table {id}, line {line}: {msg}"))
}

fn suffix_scale(c: char) -> Option<f64> {
    match c {
        'a' => Some(1e-8),
        'b' => Some(1e-7),
        'c' => Some(1e-6),
        'd' => Some(1e-5),
        'e' => Some(1e-4),
        _ => None,
    }
}

/// Splits a trailing suffix letter off `s`.
fn split_suffix(s: &str) -> (&str, f64) {
    match s.chars().last().and_then(suffix_scale) {
        Some(scale) => (&s[..s.len() - 1], scale),
        None => (s, 1.0),
    }
}

/// Decodes a space-separated cell such as `7.7440d {1.2 3.4}d 0`.
pub(crate) fn decode_cell(cell: &str) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    let mut group: Option<Vec<f64>> = None;
    for raw in cell.split_whitespace() {
        let mut tok = raw;
        if let Some(rest) = tok.strip_prefix('{') {
            if group.is_some() {
                return Err(format!("nested group at {raw:?}"));
            }
            group = Some(Vec::new());
            tok = rest;
        }
        let (tok, closing) = match tok.find('}') {
            Some(i) => {
                let scale = match &tok[i + 1..] {
                    "" => 1.0,
                    rest => rest
                        .chars()
                        .next()
                        .and_then(suffix_scale)
                        .filter(|_| rest.len() == 1)
                        .ok_or_else(|| format!("bad group suffix in {raw:?}"))?,
                };
                (&tok[..i], Some(scale))
            }
            None => (tok, None),
        };
        let (mantissa, scale) = split_suffix(tok);
        let value = mantissa
            .parse::<f64>()
            .map_err(|_| format!("bad value {raw:?}"))?
            * scale;
        match group.as_mut() {
            Some(g) => g.push(value),
            None => out.push(value),
        }
        if let Some(group_scale) = closing {
            let g = group
                .take()
                .ok_or_else(|| format!("unopened group at {raw:?}"))?;
            out.extend(g.into_iter().map(|v| v * group_scale));
        }
    }
    if group.is_some() {
        return Err("unclosed group".into());
    }
    Ok(out)
}

fn parse_number(tok: &str) -> std::result::Result<f64, String> {
    match tok.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.parse().map_err(|_| format!("bad numerator in {tok:?}"))?;
            let q: f64 = q
                .parse()
                .map_err(|_| format!("bad denominator in {tok:?}"))?;
            Ok(p / q)
        }
        None => tok.parse().map_err(|_| format!("bad number {tok:?}")),
    }
}

fn parse_table(id: usize, text: &str) -> Result<AppendixTable> {
    let mut meta: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(body) = line.strip_prefix('#') {
            if let Some((key, value)) = body.trim().split_once(':') {
                if matches!(key, "n" | "gammas" | "phis") {
                    meta.insert(key, (i + 1, value.trim()));
                }
            }
        }
    }
    let field = |key: &str| {
        meta.get(key)
            .copied()
            .ok_or_else(|| malformed(id, 0, format!("missing `{key}`")))
    };
    let list = |key: &str| -> Result<Vec<f64>> {
        let (line, value) = field(key)?;
        value
            .split_whitespace()
            .map(|t| parse_number(t).map_err(|e| malformed(id, line, e)))
            .collect()
    };
    let (n_line, n_text) = field("n")?;
    let n: usize = n_text
        .parse()
        .map_err(|_| malformed(id, n_line, "bad `n`"))?;
    let rates = DissipationRates::new(list("gammas")?)?;
    if rates.len() != n {
        return Err(malformed(
            id,
            field("gammas")?.0,
            "rate count differs from n",
        ));
    }
    let phis = list("phis")?;

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 2 + phis.len() {
            return Err(malformed(
                id,
                line,
                format!("expected {} fields", 2 + phis.len()),
            ));
        }
        let marked = BasisPattern::parse(&record[0]).map_err(|e| malformed(id, line, e))?;
        if marked.len() != n {
            return Err(malformed(
                id,
                line,
                format!("pattern {marked} is not {n} qubits"),
            ));
        }
        let kind = match &record[1] {
            "marked" => RowKind::Marked,
            "unmarked" => RowKind::Unmarked,
            other => return Err(malformed(id, line, format!("unknown row kind {other:?}"))),
        };
        let cells = (2..record.len())
            .map(|c| decode_cell(&record[c]).map_err(|e| malformed(id, line, e)))
            .collect::<Result<Vec<_>>>()?;
        let expected = match kind {
            RowKind::Marked => 1,
            RowKind::Unmarked => (1usize << n) - 1,
        };
        if let Some(bad) = cells.iter().find(|c| c.len() != expected) {
            return Err(malformed(
                id,
                line,
                format!("cell has {} values, expected {expected}", bad.len()),
            ));
        }
        rows.push(AppendixRow {
            marked,
            kind,
            cells,
        });
    }
    Ok(AppendixTable {
        id,
        n,
        rates,
        phis,
        rows,
    })
}

/// Parses one embedded table.
pub fn appendix_table(id: usize) -> Result<AppendixTable> {
    if !TABLE_IDS.contains(&id) {
        return Err(Error::UnknownTable(id));
    }
    parse_table(id, SOURCES[id - TABLE_IDS.start()])
}

/// Recomputes every cell of table `id`.
pub fn appendix_reproduce(id: usize, tolerance: Option<f64>) -> Result<ComparisonReport> {
    let table = appendix_table(id)?;
    let tolerance = tolerance.unwrap_or(APPENDIX_TOLERANCE);
    let iterations = default_iterations(table.n);

    let mut jobs: Vec<(BasisPattern, usize)> = Vec::new();
    for row in &table.rows {
        for p in 0..table.phis.len() {
            if !jobs.contains(&(row.marked.clone(), p)) {
                jobs.push((row.marked.clone(), p));
            }
        }
    }
    let run = |(marked, p): &(BasisPattern, usize)| -> Result<ProbabilityReport> {
        let phase = PhasePoint::new(table.phis[*p], table.n)?;
        report(&RunConfig::with_iterations(
            marked.clone(),
            phase,
            table.rates.clone(),
            iterations,
        )?)
    };
    let pool = thread_pool(None)?;
    let reports: Vec<ProbabilityReport> =
        pool.install(|| jobs.par_iter().map(run).collect::<Result<Vec<_>>>())?;
    let lookup: BTreeMap<(BasisPattern, usize), &ProbabilityReport> =
        jobs.iter().cloned().zip(reports.iter()).collect();

    let mut out = ComparisonReport::new(format!("table{id:02}"), tolerance);
    for row in &table.rows {
        for (p, cell) in row.cells.iter().enumerate() {
            let r = lookup[&(row.marked.clone(), p)];
            let phi = table.phis[p];
            match row.kind {
                RowKind::Marked => {
                    out.push(
                        format!("table{id:02}/{}/marked/phi={phi}", row.marked),
                        cell[0],
                        r.marked_prob,
                    );
                }
                RowKind::Unmarked => {
                    let mut want = cell.clone();
                    let mut got = r.unmarked_values();
                    want.sort_by(f64::total_cmp);
                    got.sort_by(f64::total_cmp);
                    for (k, (w, g)) in want.iter().zip(&got).enumerate() {
                        out.push(
                            format!("table{id:02}/{}/unmarked/phi={phi}/rank{k}", row.marked),
                            *w,
                            *g,
                        );
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_suffixes_and_groups() {
        let v = decode_cell("0.1417 7.7440d 0 1.0000a").unwrap();
        assert_eq!(v.len(), 4);
        assert!((v[1] - 7.744e-5).abs() < 1e-18);
        assert_eq!(v[2], 0.0);
        assert!((v[3] - 1e-8).abs() < 1e-22);
        let v = decode_cell("0.0010 {5.9130 3.9610 2.857}d 4.2e").unwrap();
        assert_eq!(v.len(), 5);
        assert!((v[1] - 5.913e-5).abs() < 1e-18);
        assert!((v[3] - 2.857e-5).abs() < 1e-18);
        assert!((v[4] - 4.2e-4).abs() < 1e-18);
        assert!(decode_cell("{1.0 2.0").is_err());
        assert!(decode_cell("1.0}d").is_err());
        assert!(decode_cell("x").is_err());
    }

    #[test]
    fn rational_numbers() {
        assert_eq!(parse_number("1/113").unwrap(), 1.0 / 113.0);
        assert_eq!(parse_number("0.8").unwrap(), 0.8);
        assert!(parse_number("1/x").is_err());
    }

    #[test]
    fn every_table_parses() {
        for id in TABLE_IDS {
            let t = appendix_table(id).unwrap();
            assert_eq!(t.phis.len(), 4);
            assert_eq!(t.rates.len(), t.n);
            assert!(t.rows.iter().any(|r| r.kind == RowKind::Marked));
        }
        assert!(matches!(appendix_table(1), Err(Error::UnknownTable(1))));
        assert!(matches!(appendix_table(12), Err(Error::UnknownTable(12))));
    }

    #[test]
    fn first_table_header() {
        let t = appendix_table(2).unwrap();
        assert_eq!(t.n, 2);
        assert_eq!(t.rates.as_slice(), &[1.0 / 113.0, 1.0 / 90.0]);
        assert_eq!(t.phis, vec![0.331, 0.566, 0.9425, 1.0]);
        let ee = &t.rows[0];
        assert_eq!(ee.marked.to_string(), "ee");
        assert_eq!(
            ee.cells,
            vec![vec![0.5583], vec![0.8537], vec![0.9625], vec![0.9618]]
        );
    }

    #[test]
    fn malformed_rows_are_reported_with_line() {
        let text = "# n: 2\n# gammas: 0 0\n# phis: 0.5\nmarked,kind,phi0\nee,marked,0.1 0.2\n";
        let err = parse_table(99, text).unwrap_err();
        assert!(
            matches!(&err, Error::MalformedConfig(m) if m.contains("line 5")),
            "{err}"
        );
    }
}
