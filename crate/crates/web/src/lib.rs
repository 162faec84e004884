//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain values and returns a JSON string; errors come
//! back as a thrown string. The `*_json` functions hold the logic so they can
//! be tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use eqw::census::asymptotics_table;
use eqw::function::{parse_bit_string, BooleanFunction};
use eqw::oracle::simon_canonical_state;
use eqw::render;
use eqw::separability::{classify, full_separability_fast, wht};

/// Largest register the page lets you draw.
pub const MAX_DEMO_QUBITS: usize = 6;

fn check_n(n: usize) -> Result<(), String> {
    if n == 0 || n > MAX_DEMO_QUBITS {
        return Err(format!(
            "the demo supports 1 to {MAX_DEMO_QUBITS} qubits, got {n}"
        ));
    }
    Ok(())
}

/// Classify the phase state of a truth table and attach its Walsh spectrum.
pub fn classify_table_json(n: usize, table: &str) -> Result<String, String> {
    check_n(n)?;
    let f = BooleanFunction::parse(n, table).map_err(|e| e.to_string())?;
    let state = f.to_state();
    let report = classify(&state).map_err(|e| e.to_string())?;
    let spectrum = wht(&state).map_err(|e| e.to_string())?;
    let linear = full_separability_fast(&state)
        .map_err(|e| e.to_string())?
        .map(|(a, positive)| json!({ "a": a.to_string(), "negated": !positive }));
    let doc = json!({
        "n": n,
        "truth_table": f.to_bit_string(),
        "weight": f.weight(),
        "balanced": f.is_balanced(),
        "kets": render::state_kets(&state),
        "report": render::report_json(&report),
        "spectrum": spectrum,
        "linear": linear.unwrap_or(Value::Null),
    });
    Ok(doc.to_string())
}

/// Classify `|0> + |r>`, the collapsed state of Simon's first register.
pub fn simon_state_json(n: usize, r: &str) -> Result<String, String> {
    check_n(n)?;
    let r = parse_bit_string(r, n).map_err(|e| e.to_string())?;
    let state = simon_canonical_state(n, r).map_err(|e| e.to_string())?;
    let report = classify(&state).map_err(|e| e.to_string())?;
    let doc = json!({
        "n": n,
        "weight": r.count_ones(),
        "kets": render::state_kets(&state),
        "report": render::report_json(&report),
    });
    Ok(doc.to_string())
}

/// Log2 fractions for n = 2..=max_n.
pub fn asymptotics_json(max_n: usize) -> Result<String, String> {
    let rows = asymptotics_table(max_n).map_err(|e| e.to_string())?;
    Ok(render::asymptotics_json(&rows).to_string())
}

#[wasm_bindgen]
pub fn classify_table(n: usize, table: &str) -> Result<String, JsValue> {
    classify_table_json(n, table).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn simon_state(n: usize, r: &str) -> Result<String, JsValue> {
    simon_state_json(n, r).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn asymptotics(max_n: usize) -> Result<String, JsValue> {
    asymptotics_json(max_n).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn linear_table_is_fully_separable() {
        let doc = parse(&classify_table_json(2, "0110").unwrap());
        assert_eq!(doc["report"]["q"], 2);
        assert_eq!(doc["linear"]["a"], "11");
        assert_eq!(doc["linear"]["negated"], false);
        assert_eq!(doc["spectrum"], json!([0, 0, 0, 4]));
        let doc = parse(&classify_table_json(2, "1001").unwrap());
        assert_eq!(doc["linear"]["negated"], true);
        assert_eq!(doc["spectrum"], json!([0, 0, 0, -4]));
    }

    #[test]
    fn majority_is_entangled() {
        let doc = parse(&classify_table_json(3, "00010111").unwrap());
        assert_eq!(doc["report"]["label"], "genuinely-multipartite-entangled");
        assert_eq!(doc["linear"], Value::Null);
    }

    #[test]
    fn simon_block_follows_period() {
        let doc = parse(&simon_state_json(4, "0110").unwrap());
        assert_eq!(doc["report"]["q"], 3);
        assert_eq!(doc["weight"], 2);
        assert!(simon_state_json(3, "000").is_err());
    }

    #[test]
    fn demo_limits() {
        assert!(classify_table_json(7, "0x0").is_err());
        assert!(classify_table_json(2, "011").is_err());
        assert!(asymptotics_json(21).is_err());
        let doc = parse(&asymptotics_json(8).unwrap());
        assert_eq!(doc["rows"].as_array().unwrap().len(), 7);
    }
}
