//! Machine-readable outputs: sweep CSV and JSON run manifests.
//!
//! Both are pure functions of their inputs, so identical runs produce
//! byte-identical files.

use std::fmt::Write as _;

use serde::Serialize;

use crate::scalar::Real;
use crate::transition::SweepRecord;

pub const TOOL_NAME: &str = "sbm-phase";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Header of the sweep CSV, in column order.
pub const SWEEP_COLUMNS: [&str; 11] = [
    "p",
    "trials_ok",
    "mean_lambda_over_n",
    "std_lambda_over_n",
    "pred_lambda_over_n",
    "mean_detectability",
    "std_detectability",
    "mean_y1_sum",
    "mean_y2_sum",
    "mean_y1_entry_scaled",
    "mean_y2_entry_scaled",
];

/// Formats like C's `%.10g`: ten significant digits, trailing zeros
/// trimmed, exponent form outside `1e-4 ≤ |x| < 1e10`.
pub fn format_sig10(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Let the standard formatter do the rounding, then pick the layout.
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_owned());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

pub fn sweep_csv<T: Real>(records: &[SweepRecord<T>]) -> String {
    let mut out = SWEEP_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let row = [
            format_sig10(r.p),
            r.trials_ok.to_string(),
            format_sig10(r.mean_lambda_over_n.as_f64()),
            format_sig10(r.std_lambda_over_n.as_f64()),
            format_sig10(r.pred_lambda_over_n.as_f64()),
            format_sig10(r.mean_detectability),
            format_sig10(r.std_detectability),
            format_sig10(r.mean_y1_sum.as_f64()),
            format_sig10(r.mean_y2_sum.as_f64()),
            format_sig10(r.mean_y1_entry_scaled.as_f64()),
            format_sig10(r.mean_y2_entry_scaled.as_f64()),
        ];
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Provenance wrapper around a command's results.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<P, R> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub master_seed: u64,
    pub params: P,
    pub results: R,
}

impl<P: Serialize, R: Serialize> RunManifest<P, R> {
    pub fn new(command: &str, master_seed: u64, params: P, results: R) -> Self {
        RunManifest {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            command: command.to_owned(),
            master_seed,
            params,
            results,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
