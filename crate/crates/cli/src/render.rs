//! Shared formatting of certified results.

use binbound::{BoundVerdict, CertifiedInterval};
use serde_json::{json, Value};

pub const DIGITS: usize = 20;

/// `{lo, hi, mid}` with outward-rounded ends and a 20-digit midpoint.
pub fn interval_json(i: &CertifiedInterval) -> Value {
    json!({
        "lo": i.lo_decimal(DIGITS),
        "hi": i.hi_decimal(DIGITS),
        "mid": i.mid_decimal(DIGITS),
    })
}

pub fn interval_human(i: &CertifiedInterval) -> String {
    format!(
        "[{}, {}] ≈ {}",
        i.lo_decimal(DIGITS),
        i.hi_decimal(DIGITS),
        i.mid_decimal(DIGITS)
    )
}

pub fn verdict_json(v: &BoundVerdict) -> Value {
    json!({
        "status": v.status,
        "lhs": interval_json(&v.lhs),
        "rhs": interval_json(&v.rhs),
        "margin": interval_json(&v.margin),
        "precision_used": v.precision_used,
        "witness": v.witness.map(|(a, b)| [a, b]),
    })
}

pub fn verdict_human(v: &BoundVerdict) -> String {
    format!(
        "{} (margin {}, precision {} bits)",
        v.status,
        interval_human(&v.margin),
        v.precision_used
    )
}

pub fn to_json_line(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialise") + "\n"
}
