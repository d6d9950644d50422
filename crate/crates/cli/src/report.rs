//! Report types and their rendering as JSON, CSV or plain text.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use eigeninterval::asymptotics::{CsRecord, EdgeScaling, TWGammaParams};
use eigeninterval::ensembles::{EnsembleSpec, Interval};
use eigeninterval::exact_psi::PsiResult;

use crate::args::Format;

/// A probability with its decimal value (only when at least `1e-300`) and
/// its base-10 logarithm to 15 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Probability {
    pub value: Option<f64>,
    /// `None` for a probability of exactly zero.
    pub log10_value: Option<f64>,
}

fn sig15(x: f64) -> f64 {
    format!("{x:.14e}").parse().unwrap_or(x)
}

impl Probability {
    pub fn from_result(r: &PsiResult) -> Probability {
        let log10 = r.log10();
        Probability {
            value: (r.value >= 1e-300 || r.value == 0.0 && log10.is_infinite()).then_some(r.value),
            log10_value: log10.is_finite().then(|| sig15(log10)),
        }
    }

    pub fn from_log10(l: f64) -> Probability {
        let v = 10f64.powf(l);
        Probability {
            value: (v >= 1e-300).then_some(v),
            log10_value: l.is_finite().then(|| sig15(l)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiReport {
    pub command: String,
    pub ensemble: EnsembleSpec,
    /// Interval handed to the exact evaluation; absent for a CDF at an
    /// infinite point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<Interval>,
    /// Evaluation point of a CDF command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<f64>,
    #[serde(flatten)]
    pub probability: Probability,
    pub precision_bits_used: u32,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub ensemble: EnsembleSpec,
    pub interval: Interval,
    pub approx: f64,
    pub edges: EdgeScaling,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgesReport {
    pub ensemble: EnsembleSpec,
    pub tw_beta: u8,
    pub edges: EdgeScaling,
    /// Marchenko-Pastur or semicircle support.
    pub limiting_support: Interval,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub ensemble: EnsembleSpec,
    pub interval: Interval,
    pub trials: u64,
    pub seed: u64,
    pub estimate: f64,
    pub std_err: f64,
    pub hits: u64,
    pub exact: Probability,
    pub exact_converged: bool,
    /// `(estimate - exact) / std_err`; absent when the standard error is zero
    /// and the two disagree.
    pub z_score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsReport {
    pub s: usize,
    pub m: usize,
    pub rows: Vec<CsRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoeNegativeRow {
    pub n: usize,
    pub exact: Probability,
    pub converged: bool,
    pub basic: Probability,
    pub corrected: Probability,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WishartMidRow {
    pub p: usize,
    pub exact: Probability,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MpEdgeRow {
    pub p: usize,
    /// `p/m` as a fraction, e.g. `2/3`.
    pub ratio: String,
    pub m: usize,
    pub exact: f64,
    pub converged: bool,
    /// Gamma-surrogate value of `psi` on the same interval.
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwParamsRow {
    #[serde(flatten)]
    pub params: TWGammaParams,
    pub cdf_at_zero: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "table", rename_all = "kebab-case")]
pub enum Table {
    GoeNegative { rows: Vec<GoeNegativeRow> },
    WishartMid { rows: Vec<WishartMidRow> },
    MpEdges {
        rows: Vec<MpEdgeRow>,
        /// `F_1(0)^2`.
        limit: f64,
        limit_surrogate: f64,
    },
    TwParams { rows: Vec<TwParamsRow> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: Table,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(x, &key, out);
            }
        }
        Value::Array(items) => {
            let joined = items.iter().map(scalar).collect::<Vec<_>>().join(";");
            out.push((prefix.to_string(), joined));
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// The first array of objects in `v`, searched breadth first.
fn find_rows(v: &Value) -> Option<&Vec<Value>> {
    let map = v.as_object()?;
    for x in map.values() {
        if let Value::Array(items) = x {
            if items.first().is_some_and(Value::is_object) {
                return Some(items);
            }
        }
    }
    map.values().find_map(find_rows)
}

fn table_of(v: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let records: Vec<Vec<(String, String)>> = match find_rows(v) {
        Some(rows) => rows
            .iter()
            .map(|r| {
                let mut out = Vec::new();
                flatten(r, "", &mut out);
                out
            })
            .collect(),
        None => {
            let mut out = Vec::new();
            flatten(v, "", &mut out);
            vec![out]
        }
    };
    let header = records
        .first()
        .map(|r| r.iter().map(|(k, _)| k.clone()).collect())
        .unwrap_or_default();
    let body = records.into_iter().map(|r| r.into_iter().map(|(_, x)| x).collect()).collect();
    (header, body)
}

pub fn render<T: Serialize>(report: &T, format: Format) -> String {
    let v = serde_json::to_value(report).expect("reports serialize");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let (header, body) = table_of(&v);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("in-memory write");
            for row in &body {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
        }
        Format::Plain => {
            let (header, body) = table_of(&v);
            if body.len() == 1 && find_rows(&v).is_none() {
                let width = header.iter().map(String::len).max().unwrap_or(0);
                return header
                    .iter()
                    .zip(&body[0])
                    .map(|(k, x)| format!("{k:<width$}  {x}\n"))
                    .collect();
            }
            let widths: Vec<usize> = (0..header.len())
                .map(|i| body.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                let mut s = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ");
                s.push('\n');
                s
            };
            let mut s = line(&header);
            for r in &body {
                s += &line(r);
            }
            s
        }
    }
}
