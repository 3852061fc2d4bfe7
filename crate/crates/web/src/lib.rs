//! WebAssembly entry points for the static demo page in `www/`.
//!
//! Each export returns a JSON string, or throws a string describing bad input.
//! The `*_json` functions hold the logic so they can be tested natively.

use isosieve::make_field;
use isosieve::sieve::{compute_mq, compute_rq, IsogenySignature};
use isosieve::strategy::{run_family, run_on_field, SieveConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn to_json(v: &Value) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn config(aux_max: u32) -> SieveConfig {
    SieveConfig::with_aux_max(aux_max as u64)
}

pub fn field_report_json(d: i64, aux_max: u32) -> Result<String, String> {
    let field = make_field(d).map_err(|e| e.to_string())?;
    let report = run_on_field(&field, &config(aux_max)).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

pub fn rq_json(d: i64, q: u64, signature: &str) -> Result<String, String> {
    let sig: IsogenySignature = signature
        .parse()
        .map_err(|e: isosieve::SieveError| e.to_string())?;
    let field = make_field(d).map_err(|e| e.to_string())?;
    let data = field.aux_prime_data(q).map_err(|e| e.to_string())?;
    to_json(&json!({
        "d": d,
        "q": q,
        "splitting": data.splitting,
        "n_q": data.n_q,
        "r": data.r,
        "alpha": data.alpha.to_sqrt_string(),
        "signature": sig,
        "r_q": compute_rq(&data, sig).to_string(),
        "m_q": compute_mq(&data, sig).to_string(),
    }))
}

/// `inert` is a comma-separated list of primes, possibly empty.
pub fn family_report_json(exponent: u32, inert: &str, aux_max: u32) -> Result<String, String> {
    let inert: Vec<u64> = inert
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("not a prime: {s:?}")))
        .collect::<Result<_, _>>()?;
    let report =
        run_family(exponent as u64, &inert, &config(aux_max)).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

// i32 rather than i64 keeps the JS side on plain numbers instead of BigInt.
#[wasm_bindgen]
pub fn field_report(d: i32, aux_max: u32) -> Result<String, JsValue> {
    js(field_report_json(d as i64, aux_max))
}

#[wasm_bindgen]
pub fn rq(d: i32, q: u32, signature: &str) -> Result<String, JsValue> {
    js(rq_json(d as i64, q as u64, signature))
}

#[wasm_bindgen]
pub fn family_report(exponent: u32, inert: &str, aux_max: u32) -> Result<String, JsValue> {
    js(family_report_json(exponent, inert, aux_max))
}
