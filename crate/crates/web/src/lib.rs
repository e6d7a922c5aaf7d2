//! WebAssembly bindings for the browser demo in `www/`.

pub mod api;

use wasm_bindgen::prelude::*;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = catalogNames)]
pub fn catalog_names() -> Vec<String> {
    api::catalog_names()
}

#[wasm_bindgen(js_name = catalogSource)]
pub fn catalog_source(name: &str) -> Result<String, JsValue> {
    js(api::catalog_source(name))
}

#[wasm_bindgen(js_name = chernClass)]
pub fn chern_class(model_text: &str, convention: &str) -> Result<String, JsValue> {
    js(api::chern_class(model_text, convention))
}

#[wasm_bindgen]
pub fn verify(model_text: &str, convention: &str) -> Result<String, JsValue> {
    js(api::verify(model_text, convention))
}

#[wasm_bindgen(js_name = ringSummary)]
pub fn ring_summary(model_text: &str, convention: &str) -> Result<String, JsValue> {
    js(api::ring_summary(model_text, convention))
}
