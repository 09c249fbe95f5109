//! Browser bindings for the interactive demo page in `www/`.
//!
//! Every export takes and returns JSON strings so the page needs no glue
//! beyond what `wasm-bindgen` generates. Failures come back as
//! `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use l1geo::convexity::is_l1_convex;
use l1geo::harness::{parse_set, print_set, SetDocument};
use l1geo::integral::steiner_check;
use l1geo::lattice::CellSet;
use l1geo::pixellation::{outer_pixellate, Shape};
use l1geo::rational::{format_rational, parse_rational, rat, to_f64};
use l1geo::valuations::intrinsic_volumes_cellset;
use l1geo::Result;

fn respond(result: Result<Value>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn volumes(x: &CellSet) -> Value {
    let v = intrinsic_volumes_cellset(x);
    json!({
        "exact": v.values().iter().map(format_rational).collect::<Vec<_>>(),
        "approx": v.values().iter().map(to_f64).collect::<Vec<_>>(),
    })
}

fn cells_of(document: &str) -> Result<CellSet> {
    match parse_set(document)? {
        SetDocument::Cells(x) => Ok(x),
        _ => Err(l1geo::Error::InvalidArgument("expected a cellset document".into())),
    }
}

fn pixellate_ball_value(dimension: usize, radius: &str, lambda: &str) -> Result<Value> {
    let radius = parse_rational(radius)?;
    let lambda = parse_rational(lambda)?;
    let shape = Shape::ball(vec![rat(0); dimension], radius)?;
    let x = outer_pixellate(&shape, &lambda)?;
    Ok(json!({
        "cells": x.len(),
        "document": serde_json::from_str::<Value>(&print_set(&SetDocument::Cells(x.clone()))).expect("documents are JSON"),
        "volumes": volumes(&x),
        "convex": is_l1_convex(&x).is_convex,
    }))
}

/// Outer pixellation of the ℓ1 ball of `radius` about the origin, with its
/// intrinsic volumes.
#[wasm_bindgen]
pub fn pixellate_ball(dimension: usize, radius: &str, lambda: &str) -> String {
    respond(pixellate_ball_value(dimension, radius, lambda))
}

fn check_convex_value(document: &str) -> Result<Value> {
    let x = cells_of(document)?;
    let verdict = is_l1_convex(&x);
    Ok(json!({
        "convex": verdict.is_convex,
        "witness": verdict.witness,
        "volumes": volumes(&x),
    }))
}

/// Convexity verdict for a cell-set document, with a witness pair of cells
/// that have nothing between them when it fails.
#[wasm_bindgen]
pub fn check_convex(document: &str) -> String {
    respond(check_convex_value(document))
}

fn steiner_value(document: &str, m: u64) -> Result<Value> {
    let x = cells_of(document)?;
    let zero = vec![0; x.dimension()];
    let grown = x.dilate(&vec![m; x.dimension()], &zero)?;
    let rows = (0..=x.dimension())
        .map(|k| {
            let c = steiner_check(&x, k, m)?;
            Ok(json!({
                "k": k,
                "lhs": format_rational(&c.lhs),
                "rhs": format_rational(&c.rhs),
                "equal": c.holds(),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "rows": rows,
        "dilated": serde_json::from_str::<Value>(&print_set(&SetDocument::Cells(grown))).expect("documents are JSON"),
    }))
}

/// Steiner table for `X + [0, mλ]ⁿ`: both sides for every degree k, plus
/// the dilated set for drawing.
#[wasm_bindgen]
pub fn steiner(document: &str, m: u64) -> String {
    respond(steiner_value(document, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    const L: &str = r#"{"kind":"cellset","dimension":2,"resolution":"1","cells":[[0,0],[1,0],[1,1]]}"#;

    #[test]
    fn ball_at_unit_resolution() {
        let v = parse(&pixellate_ball(2, "1", "1"));
        assert_eq!(v["cells"], 12);
        assert_eq!(v["volumes"]["exact"], json!(["1", "8", "12"]));
        assert_eq!(v["convex"], true);
    }

    #[test]
    fn convexity_witness() {
        let v = parse(&check_convex(r#"{"kind":"cellset","dimension":2,"resolution":"1","cells":[[0,0],[0,2]]}"#));
        assert_eq!(v["convex"], false);
        assert_eq!(v["witness"], json!([[0, 0], [0, 2]]));
        assert_eq!(parse(&check_convex(L))["convex"], true);
    }

    #[test]
    fn steiner_rows_hold() {
        let v = parse(&steiner(L, 2));
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r["equal"] == true));
        // Area of X + [0,2]²: the L-tromino grows to a 4×4 square minus a corner.
        assert_eq!(rows[2]["lhs"], "15");
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse(&pixellate_ball(2, "-1", "1"))["error"].is_string());
        assert!(parse(&check_convex("{"))["error"].is_string());
        assert!(parse(&steiner(L, 0))["error"].is_string());
    }
}
