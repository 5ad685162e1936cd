//! Browser bindings. Each export takes plain strings and returns a JSON
//! document; the logic lives in ordinary functions so it can be tested
//! without a JavaScript host.

use hullcert_core::envelope::{envelope_value, MAX_ORACLE_VERTICES};
use hullcert_core::lp::lb;
use hullcert_core::rational::parse_vector;
use hullcert_core::split::split_certificate;
use hullcert_core::verify::{exactness_verdict, RelaxationId};
use hullcert_core::wheel::wheel_certificate;
use hullcert_core::{Graph, IntervalSet, Rational};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Browser-side pages stay responsive only for small instances.
const MAX_VERTICES: usize = 12;

fn point(text: &str) -> Result<Vec<Rational>, String> {
    let x = parse_vector(text).map_err(|e| e.to_string())?;
    if x.iter().any(|v| v.is_negative() || *v > Rational::one()) {
        return Err("every coordinate must lie in [0, 1]".into());
    }
    if x.len() > MAX_VERTICES {
        return Err(format!("at most {MAX_VERTICES} coordinates in the browser"));
    }
    Ok(x)
}

/// Sum over edges, relaxation bound and envelope for a finished certificate.
fn summary(g: &Graph, relaxation: RelaxationId, x: &[Rational], sets: &[IntervalSet]) -> Result<Value, String> {
    let sum: Rational = hullcert_core::verify::edge_sum(g, sets);
    let sys = relaxation.build(g).map_err(|e| e.to_string())?;
    let bound = lb(&sys, g, x).map_err(|e| e.to_string())?.value;
    let env = if g.n() <= MAX_ORACLE_VERTICES {
        Some(envelope_value(g, x).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let exact = bound == sum && env.as_ref().is_none_or(|e| *e == sum);
    Ok(json!({
        "edge_sum": sum,
        "edge_sum_decimal": sum.to_f64(),
        "lb": bound,
        "envelope": env,
        "triple_equality": exact,
    }))
}

pub fn wheel_report(x: &str) -> Result<String, String> {
    let x = point(x)?;
    let cert = wheel_certificate(&x).map_err(|e| e.to_string())?;
    let g = Graph::wheel(x.len() - 1).map_err(|e| e.to_string())?;
    let summary = summary(&g, RelaxationId::Triangle, &x, &cert.intervals)?;
    Ok(json!({
        "graph": "wheel",
        "x": x,
        "sets": cert.intervals,
        "tstar": cert.tstar,
        "phi": cert.phi,
        "z": cert.z,
        "checks_pass": cert.checks.all_pass() && cert.network_ok,
        "summary": summary,
    })
    .to_string())
}

pub fn split_report(n1: usize, n2: usize, x: &str) -> Result<String, String> {
    let x = point(x)?;
    let cert = split_certificate(n1, n2, &x).map_err(|e| e.to_string())?;
    let g = Graph::complete_split(n1, n2).map_err(|e| e.to_string())?;
    let summary = summary(&g, RelaxationId::Split, &x, &cert.sets)?;
    Ok(json!({
        "graph": "complete_split",
        "x": x,
        "sets": cert.sets,
        "S": cert.s,
        "case": cert.run.as_ref().map(|r| r.derivation.case),
        "alpha": cert.run.as_ref().map(|r| r.properties.alpha),
        "checks_pass": cert.internal_checks_pass(),
        "summary": summary,
    })
    .to_string())
}

/// `graph` is `complete:N`, `wheel:M` or `split:N1xN2`.
pub fn exactness_report(graph: &str, relaxation: &str, x: &str) -> Result<String, String> {
    let g = parse_graph(graph)?;
    let x = point(x)?;
    if x.len() != g.n() {
        return Err(format!(
            "x has {} coordinates, the graph has {} vertices",
            x.len(),
            g.n()
        ));
    }
    let id = RelaxationId::parse(relaxation).ok_or_else(|| format!("unknown relaxation {relaxation:?}"))?;
    let sys = id.build(&g).map_err(|e| e.to_string())?;
    let verdict = exactness_verdict(&sys, &g, &x).map_err(|e| e.to_string())?;
    Ok(json!({ "relaxation": id, "rows": sys.rows.len(), "x": x, "result": verdict }).to_string())
}

fn parse_graph(text: &str) -> Result<Graph, String> {
    let (kind, arg) = text.split_once(':').ok_or("graph must look like wheel:4")?;
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad size {s:?}"));
    let g = match kind.trim() {
        "complete" => Graph::complete(num(arg)?),
        "wheel" => Graph::wheel(num(arg)?).map_err(|e| e.to_string())?,
        "split" => {
            let (a, b) = arg.split_once('x').ok_or("split graphs are written split:N1xN2")?;
            Graph::complete_split(num(a)?, num(b)?).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown graph kind {other:?}")),
    };
    if g.n() > MAX_VERTICES {
        return Err(format!("at most {MAX_VERTICES} vertices in the browser"));
    }
    Ok(g)
}

#[wasm_bindgen]
pub fn wheel_certificate_json(x: &str) -> Result<String, JsError> {
    wheel_report(x).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn split_certificate_json(n1: usize, n2: usize, x: &str) -> Result<String, JsError> {
    split_report(n1, n2, x).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn exactness_json(graph: &str, relaxation: &str, x: &str) -> Result<String, JsError> {
    exactness_report(graph, relaxation, x).map_err(|e| JsError::new(&e))
}
