//! Browser bindings. Each export takes plain values and returns a JSON
//! string; the `*_json` functions hold the logic and run natively too.

use serde_json::{json, Value};
use stgq_core::io::{
    generate, parse_graph, parse_schedule, serialize_schedule, write_solution, EdgeModel,
    GenConfig, Problem, SolutionDocument,
};
use stgq_core::{solve_sgq, solve_stgq, SgqQuery, StgqQuery};
use wasm_bindgen::prelude::*;

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// A random instance: vertex names and degrees, weighted edges, one
/// availability string per vertex, and the two files as text.
pub fn generate_json(
    n: usize,
    seed: u64,
    horizon: usize,
    avail_prob: f64,
) -> Result<String, String> {
    let cfg = GenConfig {
        n,
        seed,
        horizon,
        avail_prob,
        model: EdgeModel::Attachment,
        ..GenConfig::default()
    };
    let inst = generate(&cfg).map_err(err)?;
    let g = &inst.graph;
    let vertices: Vec<Value> = g
        .vertices()
        .map(|v| json!({ "name": g.name(v), "degree": g.degree(v) }))
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .map(|(u, v, w)| json!([u.index(), v.index(), w]))
        .collect();
    let schedule: Vec<String> = g
        .vertices()
        .map(|v| {
            let row = inst.table.row(g.name(v)).unwrap_or_default();
            row.iter()
                .map(|&free| if free { '1' } else { '0' })
                .collect()
        })
        .collect();
    Ok(json!({
        "initiator": g.name(inst.initiator),
        "horizon": inst.table.horizon(),
        "vertices": vertices,
        "edges": edges,
        "schedule": schedule,
        "graph_text": inst.graph_text(),
        "schedule_text": serialize_schedule(&inst.table),
    })
    .to_string())
}

/// Solves a social group query; the result is a solution document.
pub fn solve_sgq_json(
    graph_text: &str,
    initiator: &str,
    p: usize,
    s: usize,
    k: usize,
) -> Result<String, String> {
    let g = parse_graph(graph_text).map_err(err)?;
    let q = g.require(initiator).map_err(err)?;
    let report = solve_sgq(&g, &SgqQuery::new(q, p, s, k)).map_err(err)?;
    let found = report.solution.as_ref().map(|grp| (grp, None));
    Ok(write_solution(&SolutionDocument::new(
        Problem::Sgq,
        &g,
        q,
        found,
        report.stats,
    )))
}

/// Solves a social-temporal group query; the result is a solution document.
pub fn solve_stgq_json(
    graph_text: &str,
    schedule_text: &str,
    initiator: &str,
    p: usize,
    s: usize,
    k: usize,
    m: usize,
) -> Result<String, String> {
    let g = parse_graph(graph_text).map_err(err)?;
    let table = parse_schedule(schedule_text).map_err(err)?;
    let q = g.require(initiator).map_err(err)?;
    let report =
        solve_stgq(&g, &table, &StgqQuery::new(SgqQuery::new(q, p, s, k), m)).map_err(err)?;
    let found = report
        .solution
        .as_ref()
        .map(|sol| (&sol.group, Some(sol.period)));
    Ok(write_solution(&SolutionDocument::new(
        Problem::Stgq,
        &g,
        q,
        found,
        report.stats,
    )))
}

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn generate_demo(
    n: usize,
    seed: u32,
    horizon: usize,
    avail_prob: f64,
) -> Result<String, JsValue> {
    to_js(generate_json(n, u64::from(seed), horizon, avail_prob))
}

#[wasm_bindgen]
pub fn solve_sgq_demo(
    graph_text: &str,
    initiator: &str,
    p: usize,
    s: usize,
    k: usize,
) -> Result<String, JsValue> {
    to_js(solve_sgq_json(graph_text, initiator, p, s, k))
}

#[wasm_bindgen]
pub fn solve_stgq_demo(
    graph_text: &str,
    schedule_text: &str,
    initiator: &str,
    p: usize,
    s: usize,
    k: usize,
    m: usize,
) -> Result<String, JsValue> {
    to_js(solve_stgq_json(
        graph_text,
        schedule_text,
        initiator,
        p,
        s,
        k,
        m,
    ))
}
