//! Run reports written by the command-line front end.

use serde::{Serialize, Serializer};
use serde_json::Value;

/// Finite floats as numbers, infinities and NaN as `null`.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

pub fn ser_vec_f64<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.is_finite().then_some(*x))?;
    }
    seq.end()
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input: String,
    pub config: Value,
    pub wall_time_s: f64,
    pub stats: Value,
    pub result: Value,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report is serializable");
        text.push('\n');
        text
    }

    /// The report with the wall-time field zeroed, for byte comparisons.
    pub fn without_timing(&self) -> RunReport {
        RunReport {
            wall_time_s: 0.0,
            ..self.clone()
        }
    }
}

/// `6` for integral values, shortest round-trip form otherwise, `inf` for infinity.
pub fn fmt_num(x: f64) -> String {
    format!("{x}")
}

/// `x` rounded to `digits` significant digits, trailing zeros dropped.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() || x == 0.0 {
        return fmt_num(x);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}
