//! CSV and JSON serialization.

use serde::Serialize;

use crate::config::RunConfig;
use crate::datasets::{Cell, Dataset};
use crate::verify::VerifyReport;
use crate::SCHEMA_VERSION;

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn cell(c: &Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Real(x) => real(*x),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

pub fn dataset_csv(ds: &Dataset) -> String {
    let mut out = ds.columns.join(",");
    out.push('\n');
    for row in &ds.rows {
        out.push_str(&row.iter().map(cell).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn report_csv(rep: &VerifyReport) -> String {
    let mut out = String::from("group,name,kind,measured,tolerance,truncation_bound,passed\n");
    for c in &rep.checks {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.group,
            c.name.replace(',', ";"),
            c.kind.name(),
            real(c.measured),
            real(c.tolerance),
            c.truncation_bound.map(real).unwrap_or_default(),
            c.passed
        ));
    }
    out
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct DatasetBody<'a> {
    dataset: &'a Dataset,
}

#[derive(Serialize)]
struct ReportBody<'a> {
    report: &'a VerifyReport,
}

fn json<T: Serialize>(cfg: &RunConfig, body: T) -> String {
    let env = Envelope { schema_version: SCHEMA_VERSION, command: cfg.command.name(), config: cfg, body };
    let mut s = serde_json::to_string_pretty(&env).expect("serializable");
    s.push('\n');
    s
}

pub fn dataset_json(cfg: &RunConfig, ds: &Dataset) -> String {
    json(cfg, DatasetBody { dataset: ds })
}

pub fn report_json(cfg: &RunConfig, rep: &VerifyReport) -> String {
    json(cfg, ReportBody { report: rep })
}
