use std::path::Path;

use hullcert_core::graph::GraphJson;
use hullcert_core::rational::parse_vector;
use hullcert_core::{Graph, GraphError, Rational, RationalError};
use serde::Deserialize;
use thiserror::Error;

use crate::InstanceArgs;

/// Input problems; all of them exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Pipeline(String),
}

impl CliError {
    pub fn pipeline(e: impl std::fmt::Display) -> CliError {
        CliError::Pipeline(e.to_string())
    }
}

#[derive(Deserialize)]
struct InstanceFile {
    graph: GraphJson,
    x: Vec<Rational>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

/// `N1xN2`.
pub fn parse_split(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("expected N1xN2, got {text:?}"));
    let (a, b) = text.split_once('x').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn parse_point(text: &str) -> Result<Vec<Rational>, CliError> {
    let x = parse_vector(text)?;
    check_box(&x)?;
    Ok(x)
}

pub fn check_box(x: &[Rational]) -> Result<(), CliError> {
    for (k, v) in x.iter().enumerate() {
        if v.is_negative() || *v > Rational::one() {
            return Err(CliError::Usage(format!("x{} = {v} lies outside [0, 1]", k + 1)));
        }
    }
    Ok(())
}

pub fn load_instance(args: &InstanceArgs) -> Result<(Graph, Vec<Rational>), CliError> {
    if let Some(path) = &args.instance {
        let inst: InstanceFile = read_json(path)?;
        let g = Graph::from_json(&inst.graph)?;
        check_box(&inst.x)?;
        return finish(g, inst.x);
    }
    let mut graphs = Vec::new();
    if let Some(path) = &args.graph {
        graphs.push(Graph::from_json(&read_json::<GraphJson>(path)?)?);
    }
    if let Some(m) = args.wheel {
        graphs.push(Graph::wheel(m)?);
    }
    if let Some(shape) = &args.split {
        let (n1, n2) = parse_split(shape)?;
        graphs.push(Graph::complete_split(n1, n2)?);
    }
    if let Some(n) = args.complete {
        graphs.push(Graph::complete(n));
    }
    if graphs.len() != 1 {
        return Err(CliError::Usage(
            "give exactly one of --instance, --graph, --wheel, --split, --complete".into(),
        ));
    }
    let x = parse_point(
        args.x
            .as_deref()
            .ok_or_else(|| CliError::Usage("--x is required".into()))?,
    )?;
    finish(graphs.pop().expect("one graph"), x)
}

fn finish(g: Graph, x: Vec<Rational>) -> Result<(Graph, Vec<Rational>), CliError> {
    if x.len() != g.n() {
        return Err(CliError::Usage(format!(
            "x has {} coordinates, the graph has {} vertices",
            x.len(),
            g.n()
        )));
    }
    Ok((g, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_shapes() {
        assert_eq!(parse_split("4x5").unwrap(), (4, 5));
        assert_eq!(parse_split(" 2 x 0 ").unwrap(), (2, 0));
        assert!(parse_split("4,5").is_err());
        assert!(parse_split("ax5").is_err());
    }

    #[test]
    fn points_are_exact_and_boxed() {
        assert_eq!(
            parse_point("0.85, 1/3").unwrap(),
            vec![Rational::new(17, 20), Rational::new(1, 3)]
        );
        assert!(matches!(parse_point("1.5"), Err(CliError::Usage(_))));
        assert!(matches!(parse_point("-1/2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_point("1/0"), Err(CliError::Rational(_))));
    }
}
