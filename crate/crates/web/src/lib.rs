//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Each export takes the text of a spec file and returns the JSON report
//! followed by the plain-text summary, separated by a form feed.

use quiver_torsion::report::{self, Output, RunConfig};
use wasm_bindgen::prelude::*;

fn config(max_dim: usize, assume_complete: bool) -> RunConfig {
    RunConfig {
        max_dim,
        assume_complete,
        // Keeps a browser tab responsive.
        budget: 1 << 20,
        ..Default::default()
    }
}

fn render(out: quiver_torsion::Result<Output>) -> Result<String, String> {
    match out {
        Ok(o) => Ok(format!("{}\u{c}{}", o.json(), o.summary)),
        Err(e) => Err(e.to_string()),
    }
}

pub fn classify_text(spec: &str) -> Result<String, String> {
    render(report::cmd_classify(spec, &config(4, false)))
}

pub fn catalog_text(spec: &str, max_dim: usize) -> Result<String, String> {
    render(report::cmd_catalog(spec, &config(max_dim, false)))
}

pub fn left_part_text(spec: &str, max_dim: usize, assume_complete: bool) -> Result<String, String> {
    render(report::cmd_left_part(
        spec,
        &config(max_dim, assume_complete),
    ))
}

#[wasm_bindgen]
pub fn classify(spec: &str) -> Result<String, JsValue> {
    classify_text(spec).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn catalog(spec: &str, max_dim: usize) -> Result<String, JsValue> {
    catalog_text(spec, max_dim).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = leftPart)]
pub fn left_part(spec: &str, max_dim: usize, assume_complete: bool) -> Result<String, JsValue> {
    left_part_text(spec, max_dim, assume_complete).map_err(|e| JsValue::from_str(&e))
}
