//! Per-cell CSV tables, a JSON summary and the column schema.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{field, quantile};
use crate::error::Result;
use crate::run::TrialRecord;

/// Numeric fields summarised by median and quartiles.
pub const NUMERIC: [&str; 6] = ["order", "tcl_order", "host_diameter", "aux_diameter", "chi_greedy", "separator_size"];
/// Boolean fields summarised as success rates.
pub const RATES: [&str; 6] = ["verified", "edge_budget_ok", "complete", "kappa_ok", "in_bracket", "assembly_ok"];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub median: Option<f64>,
    pub q1: Option<f64>,
    pub q3: Option<f64>,
}

/// One row per cell. Missing statistics are empty CSV fields.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub cell: usize,
    pub n: usize,
    pub k: Option<usize>,
    pub p: f64,
    pub trials: usize,
    pub errors: usize,
    pub order_median: Option<f64>,
    pub order_q1: Option<f64>,
    pub order_q3: Option<f64>,
    pub tcl_order_median: Option<f64>,
    pub tcl_order_q1: Option<f64>,
    pub tcl_order_q3: Option<f64>,
    pub host_diameter_median: Option<f64>,
    pub host_diameter_q1: Option<f64>,
    pub host_diameter_q3: Option<f64>,
    /// Trials whose host was disconnected.
    pub host_diameter_infinite: usize,
    pub aux_diameter_median: Option<f64>,
    pub aux_diameter_q1: Option<f64>,
    pub aux_diameter_q3: Option<f64>,
    pub chi_greedy_median: Option<f64>,
    pub chi_greedy_q1: Option<f64>,
    pub chi_greedy_q3: Option<f64>,
    pub separator_size_median: Option<f64>,
    pub separator_size_q1: Option<f64>,
    pub separator_size_q3: Option<f64>,
    pub verified_rate: Option<f64>,
    pub edge_budget_ok_rate: Option<f64>,
    pub complete_rate: Option<f64>,
    pub kappa_ok_rate: Option<f64>,
    pub in_bracket_rate: Option<f64>,
    pub assembly_ok_rate: Option<f64>,
}

fn summarise(records: &[&TrialRecord], name: &str) -> (Summary, usize) {
    let mut values: Vec<f64> = records.iter().filter_map(|r| field(r, name)).collect();
    let infinite = values.iter().filter(|v| v.is_infinite()).count();
    values.retain(|v| v.is_finite());
    values.sort_by(f64::total_cmp);
    if values.is_empty() {
        return (Summary::default(), infinite);
    }
    let s = Summary { median: Some(quantile(&values, 0.5)), q1: Some(quantile(&values, 0.25)), q3: Some(quantile(&values, 0.75)) };
    (s, infinite)
}

fn rate(records: &[&TrialRecord], name: &str) -> Option<f64> {
    let v: Vec<f64> = records.iter().filter_map(|r| field(r, name)).collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

pub fn table_rows(records: &[TrialRecord]) -> Vec<TableRow> {
    let mut cells: BTreeMap<usize, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        cells.entry(r.cell).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|(cell, recs)| {
            let ok: Vec<&TrialRecord> = recs.iter().copied().filter(|r| r.error.is_none()).collect();
            let first = recs[0];
            let mut row = TableRow {
                cell,
                n: first.n,
                k: first.k,
                p: first.p,
                trials: recs.len(),
                errors: recs.len() - ok.len(),
                ..TableRow::default()
            };
            let s = |name| summarise(&ok, name).0;
            (row.order_median, row.order_q1, row.order_q3) = split(s("order"));
            (row.tcl_order_median, row.tcl_order_q1, row.tcl_order_q3) = split(s("tcl_order"));
            let (hd, inf) = summarise(&ok, "host_diameter");
            (row.host_diameter_median, row.host_diameter_q1, row.host_diameter_q3) = split(hd);
            row.host_diameter_infinite = inf;
            (row.aux_diameter_median, row.aux_diameter_q1, row.aux_diameter_q3) = split(s("aux_diameter"));
            (row.chi_greedy_median, row.chi_greedy_q1, row.chi_greedy_q3) = split(s("chi_greedy"));
            (row.separator_size_median, row.separator_size_q1, row.separator_size_q3) = split(s("separator_size"));
            row.verified_rate = rate(&ok, "verified");
            row.edge_budget_ok_rate = rate(&ok, "edge_budget_ok");
            row.complete_rate = rate(&ok, "complete");
            row.kappa_ok_rate = rate(&ok, "kappa_ok");
            row.in_bracket_rate = rate(&ok, "in_bracket");
            row.assembly_ok_rate = rate(&ok, "assembly_ok");
            row
        })
        .collect()
}

fn split(s: Summary) -> (Option<f64>, Option<f64>, Option<f64>) {
    (s.median, s.q1, s.q3)
}

pub fn write_table<W: std::io::Write>(rows: &[TableRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        w.write_record(column_names())?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_table<R: std::io::Read>(reader: R) -> Result<Vec<TableRow>> {
    Ok(csv::Reader::from_reader(reader).deserialize().collect::<Result<_, _>>()?)
}

pub fn column_names() -> Vec<String> {
    let mut cols: Vec<String> = ["cell", "n", "k", "p", "trials", "errors"].map(String::from).to_vec();
    for name in NUMERIC {
        cols.extend(["median", "q1", "q3"].map(|s| format!("{name}_{s}")));
        if name == "host_diameter" {
            cols.push("host_diameter_infinite".into());
        }
    }
    cols.extend(RATES.map(|name| format!("{name}_rate")));
    cols
}

#[derive(Serialize)]
struct Column {
    name: String,
    description: String,
}

fn describe(col: &str) -> String {
    let fixed = match col {
        "cell" => "grid cell index",
        "n" => "number of vertices",
        "k" => "second grid axis, empty when unused",
        "p" => "edge probability of the random perturbation",
        "trials" => "records in the cell",
        "errors" => "records carrying an error; excluded from all statistics",
        "host_diameter_infinite" => "trials with a disconnected host; excluded from the diameter quantiles",
        _ => "",
    };
    if !fixed.is_empty() {
        return fixed.into();
    }
    if let Some(base) = col.strip_suffix("_rate") {
        return format!("fraction of trials with {base} = true, empty when not measured");
    }
    let (base, stat) = col.rsplit_once('_').expect("statistic suffix");
    let what = match stat {
        "median" => "median",
        "q1" => "first quartile",
        _ => "third quartile",
    };
    format!("{what} of {base} (linear interpolation), empty when not measured")
}

#[derive(Serialize)]
struct SummaryDoc<'a> {
    records: usize,
    cells: usize,
    errors: usize,
    rows: &'a [TableRow],
}

/// Writes `table.csv`, `summary.json` and `schema.json` into `dir`.
pub fn emit_tables(records: &[TrialRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let rows = table_rows(records);
    let paths = [dir.join("table.csv"), dir.join("summary.json"), dir.join("schema.json")];
    write_table(&rows, File::create(&paths[0])?)?;
    let summary = SummaryDoc {
        records: records.len(),
        cells: rows.len(),
        errors: records.iter().filter(|r| r.error.is_some()).count(),
        rows: &rows,
    };
    std::fs::write(&paths[1], serde_json::to_string_pretty(&summary)? + "\n")?;
    let schema: Vec<Column> = column_names().into_iter().map(|name| Column { description: describe(&name), name }).collect();
    std::fs::write(&paths[2], serde_json::to_string_pretty(&schema)? + "\n")?;
    Ok(paths.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matches_row_serialization() {
        let mut buf = Vec::new();
        write_table(&[TableRow::default()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), column_names().join(","));
        let mut empty = Vec::new();
        write_table(&[], &mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().lines().count(), 1);
    }

    #[test]
    fn every_column_is_described() {
        for c in column_names() {
            assert!(!describe(&c).is_empty(), "{c}");
        }
    }
}
