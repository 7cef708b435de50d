//! Fixed-width tables and CSV blocks for command output.

use lifestyle_core::membership::TermDiagnostic;
use lifestyle_core::{CategoryBreakdown, CategoryId, RecommendationReport};

use crate::error::Result;

pub fn breakdown_table(bd: &CategoryBreakdown) -> String {
    let mut out = format!("{:<10} {:>12} {:>12}\n", "category", "time_h", "score");
    for cat in CategoryId::ALL {
        out += &format!(
            "{:<10} {:>12.4} {:>12.4}\n",
            cat.as_str(),
            bd.time(cat),
            bd.score(cat)
        );
    }
    out
}

pub fn report_table(report: &RecommendationReport) -> String {
    let id_w = report
        .rules
        .iter()
        .map(|r| r.id.len())
        .max()
        .unwrap_or(0)
        .max(4);
    let mut out = format!(
        "{:>4}  {:<id_w$}  {:>8}  {:<32}  {}\n",
        "rank", "rule", "score", "degrees", "text"
    );
    for (rank, r) in report.rules.iter().enumerate() {
        let degrees = r
            .degrees
            .iter()
            .map(|d| format!("{d:.4}"))
            .collect::<Vec<_>>()
            .join(" ");
        out += &format!(
            "{:>4}  {:<id_w$}  {:>8.4}  {:<32}  {}\n",
            rank + 1,
            r.id,
            r.score,
            degrees,
            r.text
        );
    }
    out += &format!("\nchosen: {} {}\n", report.chosen, report.chosen_text);
    if let Some(w) = &report.warning {
        out += &format!("warning: {w}\n");
    }
    out
}

fn finish(wtr: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = wtr
        .into_inner()
        .map_err(|e| crate::error::CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| crate::error::CliError::Output(e.to_string()))
}

pub fn breakdown_csv(bd: &CategoryBreakdown) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["category", "time", "score"])?;
    for cat in CategoryId::ALL {
        wtr.write_record([
            cat.as_str().to_string(),
            bd.time(cat).to_string(),
            bd.score(cat).to_string(),
        ])?;
    }
    finish(wtr)
}

/// Degrees are `;`-separated inside one field.
pub fn report_csv(report: &RecommendationReport) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["rank", "rule", "score", "degrees", "text", "chosen"])?;
    for (rank, r) in report.rules.iter().enumerate() {
        let degrees = r
            .degrees
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(";");
        wtr.write_record([
            (rank + 1).to_string(),
            r.id.clone(),
            r.score.to_string(),
            degrees,
            r.text.clone(),
            (r.id == report.chosen).to_string(),
        ])?;
    }
    finish(wtr)
}

pub fn diagnostics_table(
    diags: &[TermDiagnostic],
    params: impl Fn(&TermDiagnostic) -> [f64; 4],
) -> String {
    let mut out = format!(
        "{:<9} {:<6} {:<15} {:>4} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
        "category", "kind", "term", "n", "a", "b", "c", "d", "q2"
    );
    for d in diags {
        let [a, b, c, e] = params(d);
        out += &format!(
            "{:<9} {:<6} {:<15} {:>4} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}\n",
            d.category.as_str(),
            d.quantity.as_str(),
            d.term,
            d.sample_count,
            a,
            b,
            c,
            e,
            d.quartiles.median
        );
    }
    out
}

pub fn diagnostics_csv(
    diags: &[TermDiagnostic],
    params: impl Fn(&TermDiagnostic) -> [f64; 4],
) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["category", "kind", "term", "n", "a", "b", "c", "d", "q2"])?;
    for d in diags {
        let p = params(d);
        let mut row = vec![
            d.category.as_str().to_string(),
            d.quantity.as_str().to_string(),
            d.term.to_string(),
            d.sample_count.to_string(),
        ];
        row.extend(p.iter().map(f64::to_string));
        row.push(d.quartiles.median.to_string());
        wtr.write_record(&row)?;
    }
    finish(wtr)
}

pub fn curves_csv(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header)?;
    for row in rows {
        wtr.write_record(row.iter().map(f64::to_string))?;
    }
    finish(wtr)
}

pub fn curves_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let w = header.iter().map(|h| h.len()).max().unwrap_or(0).max(10);
    let mut out = header
        .iter()
        .map(|h| format!("{h:>w$}"))
        .collect::<Vec<_>>()
        .join(" ");
    out.push('\n');
    for row in rows {
        out += &row
            .iter()
            .map(|v| format!("{v:>w$.4}"))
            .collect::<Vec<_>>()
            .join(" ");
        out.push('\n');
    }
    out
}
