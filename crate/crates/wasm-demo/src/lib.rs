//! Browser bindings: solve a pasted game, compose two games, generate one.
//!
//! The logic lives in plain functions returning `Result<String, String>` so
//! it can be tested natively; the `#[wasm_bindgen]` exports only wrap them.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use bimatrix_core::format::{parse_game, parse_rational, serialize_game};
use bimatrix_core::{
    compose_product, compose_sum, generate, solve, verify_equilibrium, BimatrixGame, DecompositionTree, GenSpec, Matrix,
};

fn matrix_json(m: &Matrix) -> Value {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>())
        .collect()
}

fn tree_json(t: &DecompositionTree) -> Value {
    let (rows, cols) = t.dims();
    match t {
        DecompositionTree::Leaf(_) => json!({ "kind": "leaf", "rows": rows, "cols": cols, "children": [] }),
        DecompositionTree::Sum { k, left, right } => json!({
            "kind": "sum", "rows": rows, "cols": cols, "k": k.to_string(),
            "children": [tree_json(left), tree_json(right)],
        }),
        DecompositionTree::Product { left, right } => json!({
            "kind": "product", "rows": rows, "cols": cols,
            "children": [tree_json(left), tree_json(right)],
        }),
        DecompositionTree::Reduced { record, child } => {
            let (kr, kc) = record.reduced_dims();
            json!({
                "kind": "reduced", "rows": rows, "cols": cols, "kept_rows": kr, "kept_cols": kc,
                "children": [tree_json(child)],
            })
        }
    }
}

fn parse(text: &str) -> Result<BimatrixGame, String> {
    parse_game(text).map_err(|e| e.to_string())
}

/// Solves a game file and returns the equilibrium, payoffs and tree as JSON.
pub fn solve_json(text: &str) -> Result<String, String> {
    let g = parse(text)?;
    let report = solve(&g);
    let eq = &report.equilibrium;
    let verified = verify_equilibrium(&g, eq).map_err(|e| e.to_string())?;
    let probs = |p: &[bimatrix_core::Rational]| p.iter().map(|v| v.to_string()).collect::<Vec<_>>();
    let out = json!({
        "a": matrix_json(g.a()),
        "b": matrix_json(g.b()),
        "x": probs(eq.x.probs()),
        "y": probs(eq.y.probs()),
        "verified": verified,
        "lambda": report.lambda,
        "leaves": report.leaf_count,
        "summary": report.tree.summary(),
        "tree": tree_json(&report.tree),
        "elapsed_ms": report.elapsed.as_secs_f64() * 1000.0,
    });
    Ok(out.to_string())
}

/// `op` is `sum` or `product`; `k` is only read for sums.
pub fn compose_text(op: &str, first: &str, second: &str, k: &str) -> Result<String, String> {
    let (g1, g2) = (parse(first)?, parse(second)?);
    let g = match op {
        "sum" => {
            let k = parse_rational(k.trim()).map_err(|e| format!("K: {e}"))?;
            compose_sum(&g1, &g2, &k).map_err(|e| e.to_string())?
        }
        "product" => compose_product(&g1, &g2),
        other => return Err(format!("unknown operation `{other}`")),
    };
    Ok(serialize_game(&g))
}

/// Small random decomposable game (strategies per player in `min..=max`).
pub fn generate_text(seed: u64, min: usize, max: usize) -> Result<String, String> {
    let spec = GenSpec {
        seed,
        min_strategies: min,
        max_strategies: max,
        ..GenSpec::default()
    };
    let (g, _) = generate(&spec).map_err(|e| e.to_string())?;
    Ok(serialize_game(&g))
}

#[wasm_bindgen(js_name = solveGame)]
pub fn solve_game(text: &str) -> Result<String, JsValue> {
    solve_json(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = composeGames)]
pub fn compose_games(op: &str, first: &str, second: &str, k: &str) -> Result<String, JsValue> {
    compose_text(op, first, second, k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = generateGame)]
pub fn generate_game(seed: u32, min: u32, max: u32) -> Result<String, JsValue> {
    generate_text(seed as u64, min as usize, max as usize).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = "bimatrix v1\nrows 1 cols 1\n1\n\n2\n";
    const THREE: &str = "bimatrix v1\nrows 1 cols 1\n3\n\n4\n";

    #[test]
    fn compose_then_solve() {
        let g = compose_text("sum", ONE, THREE, "5").unwrap();
        assert_eq!(g, "bimatrix v1\nrows 2 cols 2\n1 5\n5 3\n\n2 -5\n-5 4\n");
        let v: Value = serde_json::from_str(&solve_json(&g).unwrap()).unwrap();
        assert_eq!(v["x"], json!(["9/16", "7/16"]));
        assert_eq!(v["y"], json!(["1/3", "2/3"]));
        assert_eq!(v["verified"], json!(true));
        assert_eq!(v["tree"]["kind"], "sum");
        assert_eq!(v["tree"]["children"][1]["kind"], "leaf");
    }

    #[test]
    fn bad_inputs_are_messages() {
        assert!(compose_text("sum", ONE, THREE, "2")
            .unwrap_err()
            .contains("sum constant 2"));
        assert!(compose_text("xor", ONE, THREE, "5").is_err());
        assert!(solve_json("nonsense").unwrap_err().contains("line 1"));
    }

    #[test]
    fn generated_games_solve() {
        let g = generate_text(7, 6, 10).unwrap();
        assert_eq!(generate_text(7, 6, 10).unwrap(), g);
        let v: Value = serde_json::from_str(&solve_json(&g).unwrap()).unwrap();
        assert_eq!(v["verified"], json!(true));
        assert!(v["lambda"].as_u64().unwrap() <= 6);
    }
}
