//! Browser bindings. Every export takes plain strings and returns a JSON string,
//! `{"error": ...}` on failure, so the page needs no generated types.

use arithdyn::catalog::MAPS;
use arithdyn::degrees::{analyze_degrees, DegreeConfig};
use arithdyn::expr::{format_map, parse_map};
use arithdyn::heights::height_decomposition;
use arithdyn::orbit::{canonical_height, classify_from_orbit, orbit, OrbitConfig};
use arithdyn::RationalPoint;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Orbits in the page stay small enough to render instantly.
const DEMO_BIT_BUDGET: u64 = 200_000;
const MAX_DEMO_ITER: usize = 24;

fn respond(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn point(s: &str) -> Result<RationalPoint, String> {
    s.parse().map_err(|e: arithdyn::heights::PointParseError| e.to_string())
}

#[wasm_bindgen]
pub fn presets() -> String {
    let list: Vec<Value> = MAPS.iter().map(|(n, m)| json!({ "name": n, "map": m })).collect();
    Value::Array(list).to_string()
}

/// λ₁, λ₂, the growth exponent and the first degrees of the iterates.
#[wasm_bindgen]
pub fn degrees(map: &str, seed: u64) -> String {
    respond((|| {
        let f = parse_map(map).map_err(|e| e.to_string())?;
        let d = analyze_degrees(&f, &DegreeConfig { seed, ..DegreeConfig::default() }).map_err(|e| e.to_string())?;
        Ok(json!({
            "map": format_map(&f),
            "lambda1": d.lambda1.decimal(12),
            "lambda1_polynomial": d.lambda1.polynomial().to_string(),
            "lambda2": d.lambda2,
            "growth_exponent": d.growth_exponent,
            "small_topological_degree": d.small_topological_degree,
            "sequence": d.confidence.sequence.values,
        }))
    })())
}

/// The orbit of a point with its heights, classification and ĥ estimate.
#[wasm_bindgen]
pub fn orbit_heights(map: &str, start: &str, max_iter: usize) -> String {
    respond((|| {
        let f = parse_map(map).map_err(|e| e.to_string())?;
        let p = point(start)?;
        let n = max_iter.min(MAX_DEMO_ITER);
        let o = orbit(&f, &p, n, DEMO_BIT_BUDGET);
        let rows: Vec<Value> = o
            .points
            .iter()
            .zip(&o.heights)
            .map(|(q, h)| {
                let digits = h.log_argument.to_string();
                let shown = q.to_string();
                json!({
                    "point": if shown.len() > 60 { format!("{}…", &shown[..60]) } else { shown },
                    "height": h.value(),
                    "digits": digits.len(),
                })
            })
            .collect();
        let hhat = analyze_degrees(&f, &DegreeConfig::default())
            .ok()
            .filter(|d| d.lambda1.cmp_integer(1).is_gt())
            .and_then(|d| {
                let cfg = OrbitConfig { max_iter: n, bit_budget: DEMO_BIT_BUDGET, ..OrbitConfig::default() };
                canonical_height(&f, &p, &d, &cfg).ok()
            })
            .map(|h| h.value);
        Ok(json!({
            "rows": rows,
            "class": serde_json::to_value(classify_from_orbit(&o, 10.0)).unwrap(),
            "hhat": hhat,
        }))
    })())
}

/// The height of a point split into its local contributions.
#[wasm_bindgen]
pub fn height(start: &str) -> String {
    respond((|| {
        let p = point(start)?;
        let d = height_decomposition(&p);
        let locals: Vec<Value> = d
            .locals
            .iter()
            .map(|l| json!({ "place": l.place.to_string(), "log_arg": l.log_argument.to_string(), "value": l.value() }))
            .collect();
        Ok(json!({
            "point": p.to_string(),
            "global_log_arg": d.global_log_argument.to_string(),
            "height": d.value(),
            "locals": locals,
            "exact": d.is_exact(),
        }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn exports_return_json() {
        assert_eq!(parse(presets()).as_array().unwrap().len(), MAPS.len());
        let d = parse(degrees("y, y^2 - x", 0));
        assert_eq!(d["lambda2"], 1);
        assert_eq!(d["lambda1"], "2.000000000000");
        let o = parse(orbit_heights("y, y^2 - x", "0,0", 5));
        assert_eq!(o["class"]["verdict"], "periodic");
        let h = parse(height("1/2,3"));
        assert_eq!(h["global_log_arg"], "6");
        assert_eq!(h["locals"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse(degrees("x +", 0))["error"].is_string());
        assert!(parse(height("1/0,1"))["error"].is_string());
        assert!(parse(degrees("x*y, x*y", 0))["error"].is_string());
    }
}
