//! Deterministic JSON rendering of preclusion results.

use serde::Serialize;
use serde_json::{json, Value};

use num_traits::ToPrimitive;

use crate::preclusion::PreclusionReport;
use crate::rational::Rational;

/// `{"num": p, "den": q}`; numbers outside `i64` are written as strings.
pub fn rational_json(r: &Rational) -> Value {
    let part = |v: &num_bigint::BigInt| match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    };
    json!({ "num": part(r.numer()), "den": part(r.denom()) })
}

#[derive(Serialize)]
struct CertificateEntry {
    edge: usize,
    num: Value,
    den: Value,
}

/// The report as a JSON object. Certificate entries list nonzero edges only.
pub fn report_json(report: &PreclusionReport) -> Value {
    let (wx, wy) = match &report.witness_xy {
        Some((x, y)) => (json!(x), json!(y)),
        None => (Value::Null, Value::Null),
    };
    let certificate = report.certificate_y.as_ref().map(|y| {
        y.iter()
            .enumerate()
            .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
            .map(|(edge, v)| {
                let f = rational_json(v);
                CertificateEntry {
                    edge,
                    num: f["num"].clone(),
                    den: f["den"].clone(),
                }
            })
            .collect::<Vec<_>>()
    });
    let cross: serde_json::Map<String, Value> = report
        .cross_check
        .iter()
        .map(|(m, v)| (m.name().to_string(), rational_json(v)))
        .collect();
    json!({
        "value": rational_json(&report.value),
        "method": report.method.name(),
        "witness_x": wx,
        "witness_y": wy,
        "certificate": certificate,
        "cross_check": cross,
        "preclusion_set": report.preclusion_set,
    })
}

pub fn report_to_string(report: &PreclusionReport) -> String {
    serde_json::to_string_pretty(&report_json(report)).expect("JSON values always serialize")
}
