//! Browser bindings. Each export returns a JSON string; the `*_json`
//! functions without the wasm wrapper are plain Rust so they can be tested
//! natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use fock_sharp::explorer::{maximize_ratio_free, monomial_sweep, SearchConfig};
use fock_sharp::ratio::gaussian_family_reduction;
use fock_sharp::{ExponentPair, Result};

/// Restart and budget caps that keep the page responsive.
pub const MAX_RESTARTS: u32 = 16;
pub const MAX_DEGREE: u32 = 6;
const BUDGET: usize = 4000;

pub fn sweep_json(p: f64, kmax: u32) -> Result<Value> {
    let pair = ExponentPair::new(p)?;
    let rows: Vec<Value> = monomial_sweep(&pair, kmax.into())
        .into_iter()
        .map(|r| json!({ "k": r.k, "ratio": r.ratio, "gap": r.gap }))
        .collect();
    Ok(json!({ "p": p, "c_p": pair.c_p(), "sqrt_c_p": pair.c_p().sqrt(), "rows": rows }))
}

/// `g(y)` on `samples` evenly spaced points of `[0, 1)` with the matching `x(y)`.
pub fn gaussian_profile_json(p: f64, samples: u32) -> Result<Value> {
    let pair = ExponentPair::new(p)?;
    let red = gaussian_family_reduction(&pair);
    let n = samples.clamp(2, 2000);
    let points: Vec<Value> = (0..n)
        .map(|i| {
            let y = i as f64 / n as f64;
            json!({ "y": y, "x": red.x_of_y(y), "g": red.g_of_y(y) })
        })
        .collect();
    Ok(json!({ "p": p, "sup": red.sup(), "attained": red.sup_attained(), "points": points }))
}

pub fn explore_json(p: f64, degree: u32, restarts: u32, seed: u64) -> Result<Value> {
    let cfg = SearchConfig {
        p,
        degree: degree.min(MAX_DEGREE),
        restarts: restarts.clamp(1, MAX_RESTARTS),
        seed,
        budget: BUDGET,
        ..SearchConfig::default()
    };
    let report = maximize_ratio_free(&cfg)?;
    Ok(serde_json::to_value(&report).expect("report serializes"))
}

fn to_js(v: Result<Value>) -> std::result::Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn sweep(p: f64, kmax: u32) -> std::result::Result<String, JsError> {
    to_js(sweep_json(p, kmax))
}

#[wasm_bindgen]
pub fn gaussian_profile(p: f64, samples: u32) -> std::result::Result<String, JsError> {
    to_js(gaussian_profile_json(p, samples))
}

#[wasm_bindgen]
pub fn explore(p: f64, degree: u32, restarts: u32, seed: u64) -> std::result::Result<String, JsError> {
    to_js(explore_json(p, degree, restarts, seed))
}
