//! Browser bindings: each function takes JSON text and returns a JSON report.

use hypertoric::arrangement::{circuits, cocircuits, fixed_point, fixed_points};
use hypertoric::error::Error;
use hypertoric::hypertoric_data::{load_data, HypertoricData};
use hypertoric::instances::fixture_source;
use hypertoric::mirror::{check_mirror_vertex, MirrorPair, MirrorParams, POptions};
use hypertoric::vertex::bare_vertex;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn report(r: Result<Value, Error>) -> String {
    let v = r.unwrap_or_else(|e| json!({"error": e.to_string()}));
    serde_json::to_string_pretty(&v).expect("serializable")
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// A bundled fixture as JSON text, for seeding the editor.
#[wasm_bindgen]
pub fn fixture_json(name: &str) -> String {
    fixture_source(name).unwrap_or_default().to_string()
}

/// Fixed points with sign splittings and restrictions, plus circuits and cocircuits.
#[wasm_bindgen]
pub fn describe(data: &str) -> String {
    report(describe_inner(data))
}

fn describe_inner(data: &str) -> Result<Value, Error> {
    let d = load_data(data)?;
    let fps: Vec<Value> = fixed_points(&d)?
        .iter()
        .map(|p| {
            json!({
                "fixed_point": p.label(),
                "a_plus": one_based(&p.a_plus),
                "a_minus": one_based(&p.a_minus),
                "p_plus": one_based(&p.p_plus),
                "p_minus": one_based(&p.p_minus),
                "restrictions": (0..d.n).map(|i| p.restriction(i).to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let sets = |v: Vec<hypertoric::arrangement::SignedSet>| -> Vec<String> { v.iter().map(|c| c.describe()).collect() };
    Ok(json!({
        "n": d.n, "k": d.k,
        "fixed_points": fps,
        "circuits": sets(circuits(&d)?),
        "cocircuits": sets(cocircuits(&d)?),
    }))
}

fn parse_point(d: &HypertoricData, s: &str) -> Result<Vec<usize>, Error> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let mut p = Vec::new();
    for part in inner.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        match part.parse::<usize>() {
            Ok(i) if i >= 1 && i <= d.n => p.push(i - 1),
            _ => return Err(Error::Parse(format!("bad fixed point {s}"))),
        }
    }
    p.sort();
    Ok(p)
}

/// Exact bare vertex coefficients at one fixed point up to a degree bound.
#[wasm_bindgen]
pub fn vertex_series(data: &str, point: &str, degree: u32) -> String {
    report((|| {
        let d = load_data(data)?;
        let p = fixed_point(&d, &parse_point(&d, point)?)?;
        let v = bare_vertex(&p, d.n, None, degree.min(8) as i64)?;
        Ok(json!({"fixed_point": p.label(), "coefficients": v.to_json()}))
    })())
}

/// The numeric mirror theorem at Kähler and equivariant scale `scale`.
#[wasm_bindgen]
pub fn mirror_check(data: &str, degree: u32, scale: f64) -> String {
    report((|| {
        let d = load_data(data)?;
        let pair = MirrorPair::new(&d)?;
        let mut prm = MirrorParams::standard(d.n);
        prm.s = scale;
        prm.t = scale;
        let r = check_mirror_vertex(&pair, degree.min(16) as i64, &prm, POptions::default())?;
        Ok(serde_json::to_value(r).expect("serializable"))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bindings_return_reports() {
        let tp1 = fixture_json("tp1");
        let v: Value = serde_json::from_str(&describe(&tp1)).unwrap();
        assert_eq!(v["fixed_points"].as_array().unwrap().len(), 2);
        let v: Value = serde_json::from_str(&vertex_series(&tp1, "{1}", 2)).unwrap();
        assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
        let v: Value = serde_json::from_str(&mirror_check(&tp1, 10, 0.02)).unwrap();
        assert_eq!(v["pass"], true);
        let v: Value = serde_json::from_str(&describe("{")).unwrap();
        assert!(v["error"].as_str().unwrap().starts_with("parse error"));
        let v: Value = serde_json::from_str(&vertex_series(&tp1, "{9}", 2)).unwrap();
        assert!(v.get("error").is_some());
    }
}
