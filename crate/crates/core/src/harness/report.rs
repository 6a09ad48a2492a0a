use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::table::{Flag, Method, SpectrumRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
    #[default]
    Pretty,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "pretty" => Ok(ReportFormat::Pretty),
            other => Err(Error::InvalidArgument(format!(
                "unknown format {other:?} (expected csv, json or pretty)"
            ))),
        }
    }
}

/// Wrapper written when a provenance string accompanies the JSON rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub config: serde_json::Value,
    pub rows: Vec<SpectrumRow>,
}

/// Methods appearing in `rows`, in report order; all four for an empty table.
pub fn methods_in(rows: &[SpectrumRow]) -> Vec<Method> {
    let Some(first) = rows.first() else {
        return Method::ALL.to_vec();
    };
    Method::ALL.into_iter().filter(|m| first.per_method.contains_key(m)).collect()
}

/// Serializes a table. `provenance` (a JSON object) is echoed as a leading
/// `# config ...` line in text formats and as the `config` field in JSON.
pub fn emit_report(rows: &[SpectrumRow], format: ReportFormat, provenance: Option<&serde_json::Value>) -> Vec<u8> {
    match format {
        ReportFormat::Csv => emit_csv(rows, provenance).into_bytes(),
        ReportFormat::Pretty => emit_pretty(rows, provenance).into_bytes(),
        ReportFormat::Json => {
            let mut out = match provenance {
                Some(config) => serde_json::to_vec_pretty(&JsonReport { config: config.clone(), rows: rows.to_vec() }),
                None => serde_json::to_vec_pretty(rows),
            }
            .expect("rows serialize");
            out.push(b'\n');
            out
        }
    }
}

/// Reads rows back from either JSON layout written by [`emit_report`].
pub fn parse_json_report(bytes: &[u8]) -> Result<Vec<SpectrumRow>> {
    if let Ok(report) = serde_json::from_slice::<JsonReport>(bytes) {
        return Ok(report.rows);
    }
    serde_json::from_slice(bytes).map_err(|e| Error::InvalidArgument(format!("malformed report: {e}")))
}

fn provenance_line(out: &mut String, provenance: Option<&serde_json::Value>) {
    if let Some(p) = provenance {
        let _ = writeln!(out, "# config {p}");
    }
}

fn emit_csv(rows: &[SpectrumRow], provenance: Option<&serde_json::Value>) -> String {
    let methods = methods_in(rows);
    let mut out = String::new();
    provenance_line(&mut out, provenance);
    out.push_str("n,exact");
    for m in &methods {
        let _ = write!(out, ",{0},{0}_err_pct,{0}_flag", m.label());
    }
    out.push('\n');
    for row in rows {
        let _ = write!(out, "{},{:.4}", row.n, row.exact);
        for m in &methods {
            let e = row.per_method.get(m).copied().unwrap_or(super::MethodEntry::SKIPPED);
            let value = e.value.map(|v| format!("{v:.4}")).unwrap_or_default();
            let err = e.err_pct.map(|v| format!("{v:.3}")).unwrap_or_default();
            let _ = write!(out, ",{value},{err},{}", e.flag.as_str());
        }
        out.push('\n');
    }
    out
}

fn emit_pretty(rows: &[SpectrumRow], provenance: Option<&serde_json::Value>) -> String {
    let methods = methods_in(rows);
    let mut out = String::new();
    provenance_line(&mut out, provenance);
    let _ = write!(out, "{:>3}  {:>10}", "n", "Exact");
    for m in &methods {
        let _ = write!(out, "  {:>12}  {:>7}", m.label(), "err(%)");
    }
    out.push('\n');
    for row in rows {
        let _ = write!(out, "{:>3}  {:>10.4}", row.n, row.exact);
        for m in &methods {
            let e = row.per_method.get(m).copied().unwrap_or(super::MethodEntry::SKIPPED);
            let marker = match e.flag {
                Flag::AboveAsymptote => " *",
                Flag::OnAsymptote => " **",
                _ => "",
            };
            let value = e.value.map(|v| format!("{v:.3}{marker}")).unwrap_or_else(|| "-".into());
            let err = e.err_pct.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into());
            let _ = write!(out, "  {value:>12}  {err:>7}");
        }
        out.push('\n');
    }
    out.push_str("* above the asymptote, ** on the asymptote\n");
    out
}
