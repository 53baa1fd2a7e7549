//! CSV and JSON renderings.
//!
//! Table CSV: header `n,<m columns...>,inf`, then one row per `n` with each
//! cell as a one-decimal percentage. Table JSON: `n_values`, `m_values` (the
//! infinite column as `"inf"`), row-major unrounded `cells`, and `percent`.
//! Series CSV: `series,kind,x,y`.
//!
//! JSON is produced through [`serde_json::Value`], whose maps keep keys
//! sorted, so parsing and re-serializing any output gives the same text.

use std::fmt::Write as _;

use assurance_core::tabulate::{percent_one_decimal, AssuranceTable, PlotSeries};
use assurance_core::{FinitePlan, ReliabilityStep};
use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

pub fn table_csv(table: &AssuranceTable) -> String {
    let mut out = String::from("n");
    for column in &table.columns {
        write!(out, ",{column}").unwrap();
    }
    out.push('\n');
    for (row, n) in table.n_values.iter().enumerate() {
        write!(out, "{n}").unwrap();
        for &cell in table.row(row) {
            write!(out, ",{}", percent_one_decimal(cell)).unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct TableDocument<'a> {
    n_values: &'a [u64],
    m_values: &'a [assurance_core::tabulate::Column],
    cells: Vec<f64>,
    percent: bool,
}

/// Cells are percentages when `percent` is set, probabilities otherwise.
pub fn table_json(table: &AssuranceTable, percent: bool) -> Result<Value> {
    let cells = if percent {
        table.cells.clone()
    } else {
        table.cells.iter().map(|c| c / 100.0).collect()
    };
    Ok(serde_json::to_value(TableDocument {
        n_values: &table.n_values,
        m_values: &table.columns,
        cells,
        percent,
    })?)
}

pub fn grid_csv(steps: &[ReliabilityStep]) -> String {
    let mut out = String::from("d,step_reliability,overall_reliability,confidence,assurance\n");
    for s in steps {
        writeln!(
            out,
            "{},{},{},{},{}",
            s.d,
            s.step_reliability,
            s.overall_reliability,
            s.confidence,
            s.assurance()
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
struct GridRow {
    #[serde(flatten)]
    step: ReliabilityStep,
    assurance: f64,
}

pub fn grid_json(plan: &FinitePlan, steps: &[ReliabilityStep]) -> Result<Value> {
    let rows: Vec<GridRow> = steps
        .iter()
        .map(|&step| GridRow {
            step,
            assurance: step.assurance().value(),
        })
        .collect();
    Ok(serde_json::json!({
        "n": plan.evidence().samples(),
        "f": plan.evidence().failures(),
        "m": plan.additional(),
        "steps": serde_json::to_value(rows)?,
    }))
}

pub fn series_csv(series: &[PlotSeries]) -> String {
    let mut out = String::from("series,kind,x,y\n");
    for s in series {
        for p in &s.points {
            writeln!(out, "{},{},{},{}", s.label, s.kind.as_str(), p.x, p.y).unwrap();
        }
    }
    out
}

pub fn series_json(series: &[PlotSeries]) -> Result<Value> {
    Ok(serde_json::json!({ "series": serde_json::to_value(series)? }))
}

/// Compact single-line JSON.
pub fn to_json_line(value: &Value) -> String {
    let mut text = value.to_string();
    text.push('\n');
    text
}
