use std::path::Path;

use hullcert_core::envelope::{envelope as envelope_lp, envelope_value, f_at, upper_boundary, MAX_ORACLE_VERTICES};
use hullcert_core::lp::lb as lp_lb;
use hullcert_core::split::split_certificate;
use hullcert_core::verify::{
    check_certificate, five_wheel_counterexample, Certificate, CertificateReport, RelaxationId,
};
use hullcert_core::wheel::wheel_certificate;
use hullcert_core::Rational;
use serde::Serialize;
use serde_json::json;

use crate::input::{load_instance, parse_point, read_json, CliError};
use crate::report::Report;
use crate::InstanceArgs;

/// Sorted tags of the rows tight at the optimum, with multiplicities.
fn tight_tags(tags: impl IntoIterator<Item = String>) -> Vec<(String, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for t in tags {
        *counts.entry(t).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}

pub fn lb(args: &InstanceArgs, relaxation: &str) -> Result<Report, CliError> {
    let (g, x) = load_instance(args)?;
    let id =
        RelaxationId::parse(relaxation).ok_or_else(|| CliError::Usage(format!("unknown relaxation {relaxation:?}")))?;
    let sys = id.build(&g).map_err(CliError::pipeline)?;
    let opt = lp_lb(&sys, &g, &x).map_err(CliError::pipeline)?;
    let tight = tight_tags(opt.tight_rows.iter().map(|&k| sys.rows[k].family.tag()));
    Ok(Report::new(
        "lb",
        true,
        json!({
            "relaxation": id,
            "system": sys.name,
            "rows": sys.rows.len(),
            "x": x,
            "lb": opt.value,
            "upper_boundary": upper_boundary(&g, &x),
            "tight_families": tight,
        }),
    ))
}

pub fn envelope(args: &InstanceArgs, allow_large: bool) -> Result<Report, CliError> {
    let (g, x) = load_instance(args)?;
    let env = envelope_lp(&g, &x, allow_large).map_err(CliError::pipeline)?;
    let combination: Vec<_> = env
        .combination
        .iter()
        .map(|(mask, w)| {
            let bits: String = (0..g.n()).map(|b| if mask >> b & 1 == 1 { '1' } else { '0' }).collect();
            json!({ "vertex": bits, "weight": w })
        })
        .collect();
    Ok(Report::new(
        "envelope",
        true,
        json!({
            "x": x,
            "envelope": env.value,
            "f": f_at(&g, &x),
            "upper_boundary": upper_boundary(&g, &x),
            "combination": combination,
        }),
    ))
}

/// Cross-checks shared by the two certificate commands.
#[derive(Serialize)]
struct Crosscheck {
    check: CertificateReport,
    /// `None` when the graph exceeds the oracle guard.
    envelope: Option<Rational>,
    triple_equality: bool,
}

fn crosscheck(cert: &Certificate) -> Result<Crosscheck, CliError> {
    let check = check_certificate(cert).map_err(CliError::pipeline)?;
    let envelope = if cert.graph.n() <= MAX_ORACLE_VERTICES {
        Some(envelope_value(&cert.graph, &cert.x).map_err(CliError::pipeline)?)
    } else {
        None
    };
    let triple_equality = check.equality && envelope.as_ref().is_none_or(|e| *e == check.edge_sum);
    Ok(Crosscheck {
        check,
        envelope,
        triple_equality,
    })
}

fn write_cert(cert: &Certificate, path: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = path else { return Ok(()) };
    let text = serde_json::to_string_pretty(cert).expect("certificates serialize");
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn wheel_cert(x: &str, cert_out: Option<&Path>) -> Result<Report, CliError> {
    let x = parse_point(x)?;
    let cert = wheel_certificate(&x).map_err(CliError::pipeline)?;
    let generic = Certificate::from_wheel(&cert);
    write_cert(&generic, cert_out)?;
    let cross = crosscheck(&generic)?;
    let passed = cert.checks.all_pass() && cert.network_ok && cross.check.passed() && cross.triple_equality;
    Ok(Report::new(
        "wheel-cert",
        passed,
        json!({
            "edge_sum": cross.check.edge_sum,
            "certificate": cert,
            "crosscheck": cross,
        }),
    ))
}

pub fn split_cert(n1: usize, n2: usize, x: &str, cert_out: Option<&Path>) -> Result<Report, CliError> {
    let x = parse_point(x)?;
    let cert = split_certificate(n1, n2, &x).map_err(CliError::pipeline)?;
    let generic = Certificate::from_split(&cert);
    write_cert(&generic, cert_out)?;
    let cross = crosscheck(&generic)?;
    let passed = cert.internal_checks_pass() && cross.check.passed() && cross.triple_equality;
    Ok(Report::new(
        "split-cert",
        passed,
        json!({
            "edge_sum": cert.edge_sum,
            "certificate": cert,
            "crosscheck": cross,
        }),
    ))
}

pub fn verify(path: &Path) -> Result<Report, CliError> {
    let cert: Certificate = read_json(path)?;
    let cross = crosscheck(&cert)?;
    Ok(Report::new("verify", cross.check.passed(), cross))
}

pub fn five_wheel() -> Report {
    let rep = five_wheel_counterexample();
    Report::new("five-wheel", rep.passed(), rep)
}
