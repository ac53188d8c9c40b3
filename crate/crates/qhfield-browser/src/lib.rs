//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Each export returns a string. Failures come back as `error: <message>`
//! so the page can show them without a JS exception.

use qhfield::counting::count_formula;
use qhfield::document::parse_auto;
use qhfield::normalize_weights;
use qhfield::plot::{plot_svg, PlotOptions};
use qhfield::report::analyze;
use qhfield::stability::DEFAULT_TOL;
use wasm_bindgen::prelude::*;

fn flatten(r: Result<String, String>) -> String {
    r.unwrap_or_else(|e| format!("error: {e}"))
}

/// Report JSON for a field document (JSON or `key = value` text).
pub fn analyze_document(src: &str) -> Result<String, String> {
    let x = parse_auto(src).and_then(|d| d.to_field()).map_err(|e| e.to_string())?;
    analyze(&x, DEFAULT_TOL).map(|r| r.to_json()).map_err(|e| e.to_string())
}

/// Per-k class counts from the recurrences, as JSON.
pub fn count_classes(p: u32, q: u32, m: u32) -> Result<String, String> {
    let w = normalize_weights(p, q, m).map_err(|e| e.to_string())?;
    let c = count_formula(w).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&c).map_err(|e| e.to_string())
}

pub fn plot_document(src: &str, size: u32, trajectories: usize) -> Result<String, String> {
    let x = parse_auto(src).and_then(|d| d.to_field()).map_err(|e| e.to_string())?;
    plot_svg(&x, PlotOptions { size, trajectories }).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = analyze)]
pub fn analyze_js(src: &str) -> String {
    flatten(analyze_document(src))
}

#[wasm_bindgen(js_name = count)]
pub fn count_js(p: u32, q: u32, m: u32) -> String {
    flatten(count_classes(p, q, m))
}

#[wasm_bindgen(js_name = plot)]
pub fn plot_js(src: &str, size: u32, trajectories: u32) -> String {
    flatten(plot_document(src, size, trajectories as usize))
}
