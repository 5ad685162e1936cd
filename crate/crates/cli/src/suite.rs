use clap::{Args, ValueEnum};
use hullcert_core::envelope::envelope_value;
use hullcert_core::relax::{mccormick, triangle_relaxation};
use hullcert_core::split::split_certificate;
use hullcert_core::verify::{check_certificate, exactness_verdict, Certificate};
use hullcert_core::wheel::wheel_certificate;
use hullcert_core::{Graph, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::input::{parse_split, CliError};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteFamily {
    EvenWheel,
    CompleteSplit,
    Triangle,
    Bipartite,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    #[arg(long, value_enum)]
    family: SuiteFamily,
    /// Rim sizes for even wheels.
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    m: Vec<usize>,
    /// Split shapes such as 2x1,3x2.
    #[arg(long, value_delimiter = ',', default_value = "2x1,3x2,4x3")]
    splits: Vec<String>,
    /// Samples per group (graphs, for the bipartite family).
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Points per bipartite graph.
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Chance that a coordinate is drawn as exactly 0 or 1.
    #[arg(long)]
    boundary_prob: Option<f64>,
    /// Coordinates are k/d with d drawn from 2..=this.
    #[arg(long, default_value_t = 24)]
    max_denominator: i64,
}

/// One independent stream per (group, sample), so fan-out order is irrelevant.
fn sample_rng(seed: u64, group: usize, sample: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((group as u64) << 32) | sample as u64);
    rng
}

fn draw_point(rng: &mut ChaCha8Rng, n: usize, boundary: f64, max_den: i64) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(boundary) {
                Rational::from_int(rng.gen_range(0..=1))
            } else {
                let d = rng.gen_range(2..=max_den);
                Rational::new(rng.gen_range(1..d), d)
            }
        })
        .collect()
}

#[derive(Serialize)]
struct Failure {
    sample: usize,
    x: Vec<Rational>,
    reason: String,
}

#[derive(Serialize)]
struct Group {
    label: String,
    samples: usize,
    passed: usize,
    failures: Vec<Failure>,
}

#[derive(Serialize)]
struct SuiteResult {
    family: String,
    seed: u64,
    groups: Vec<Group>,
    /// Sampling never proves exactness for every x; this is the honest summary.
    verdict: String,
}

fn wheel_sample(x: &[Rational]) -> Result<(), String> {
    let cert = wheel_certificate(x).map_err(|e| e.to_string())?;
    if !cert.checks.all_pass() {
        return Err(format!("target checks failed: {:?}", cert.checks));
    }
    if !cert.network_ok {
        return Err("negative cycle in N(x, T*)".into());
    }
    let rep = check_certificate(&Certificate::from_wheel(&cert)).map_err(|e| e.to_string())?;
    let env = envelope_value(&Graph::wheel(x.len() - 1).expect("m >= 3"), x).map_err(|e| e.to_string())?;
    if !(rep.passed() && rep.equality && cert.phi == rep.edge_sum && env == rep.edge_sum) {
        return Err(format!(
            "phi {} edge sum {} lb {} envelope {env}",
            cert.phi, rep.edge_sum, rep.lb
        ));
    }
    Ok(())
}

fn split_sample(n1: usize, n2: usize, x: &[Rational]) -> Result<(), String> {
    let cert = split_certificate(n1, n2, x).map_err(|e| e.to_string())?;
    if !cert.internal_checks_pass() {
        return Err("set S or accounting checks failed".into());
    }
    let rep = check_certificate(&Certificate::from_split(&cert)).map_err(|e| e.to_string())?;
    let env = envelope_value(&Graph::complete_split(n1, n2).expect("n1 > 0"), x).map_err(|e| e.to_string())?;
    if !(rep.passed() && rep.equality && env == rep.edge_sum) {
        return Err(format!("edge sum {} lb {} envelope {env}", rep.edge_sum, rep.lb));
    }
    Ok(())
}

fn exact_sample(sys: &hullcert_core::LinearSystem, g: &Graph, x: &[Rational]) -> Result<(), String> {
    let verdict = exactness_verdict(sys, g, x).map_err(|e| e.to_string())?;
    if verdict.is_exact() {
        Ok(())
    } else {
        Err(serde_json::to_string(&verdict).expect("verdict serializes"))
    }
}

fn random_bipartite(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=8);
    let side: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if side[i - 1] != side[j - 1] && rng.gen_bool(0.6) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).expect("simple graph")
}

fn run_group<F>(label: String, samples: usize, check: F) -> Group
where
    F: Fn(usize) -> (Vec<Rational>, Result<(), String>) + Sync,
{
    let outcomes: Vec<_> = (0..samples).into_par_iter().map(|k| (k, check(k))).collect();
    let failures: Vec<Failure> = outcomes
        .into_iter()
        .filter_map(|(sample, (x, res))| res.err().map(|reason| Failure { sample, x, reason }))
        .collect();
    Group {
        label,
        samples,
        passed: samples - failures.len(),
        failures,
    }
}

pub fn run(args: &SuiteArgs) -> Result<Report, CliError> {
    let den = args.max_denominator;
    if den < 2 {
        return Err(CliError::Usage("--max-denominator must be at least 2".into()));
    }
    let boundary = args.boundary_prob.unwrap_or(match args.family {
        SuiteFamily::CompleteSplit => 0.1,
        _ => 0.0,
    });
    if !(0.0..=1.0).contains(&boundary) {
        return Err(CliError::Usage("--boundary-prob must lie in [0, 1]".into()));
    }
    let seed = args.seed;
    let groups: Vec<Group> = match args.family {
        SuiteFamily::EvenWheel => {
            if let Some(&m) = args.m.iter().find(|&&m| m < 4 || m % 2 == 1) {
                return Err(CliError::Usage(format!("rim size {m} is not an even number >= 4")));
            }
            args.m
                .iter()
                .enumerate()
                .map(|(gi, &m)| {
                    run_group(format!("W_{m}"), args.samples, |k| {
                        let x = draw_point(&mut sample_rng(seed, gi, k), m + 1, boundary, den);
                        let res = wheel_sample(&x);
                        (x, res)
                    })
                })
                .collect()
        }
        SuiteFamily::CompleteSplit => {
            let shapes = args
                .splits
                .iter()
                .map(|s| parse_split(s))
                .collect::<Result<Vec<_>, _>>()?;
            if shapes.iter().any(|&(n1, n2)| n1 == 0 || n1 + n2 > 16) {
                return Err(CliError::Usage("split shapes need n1 >= 1 and n1 + n2 <= 16".into()));
            }
            shapes
                .iter()
                .enumerate()
                .map(|(gi, &(n1, n2))| {
                    run_group(format!("K_{n1}+{n2}"), args.samples, |k| {
                        let x = draw_point(&mut sample_rng(seed, gi, k), n1 + n2, boundary, den);
                        let res = split_sample(n1, n2, &x);
                        (x, res)
                    })
                })
                .collect()
        }
        SuiteFamily::Triangle => {
            let g = Graph::complete(3);
            let sys = triangle_relaxation(&g);
            vec![run_group("T(K_3)".into(), args.samples, |k| {
                let x = draw_point(&mut sample_rng(seed, 0, k), 3, boundary, den);
                let res = exact_sample(&sys, &g, &x);
                (x, res)
            })]
        }
        SuiteFamily::Bipartite => {
            let points = args.points;
            (0..args.samples)
                .map(|gi| {
                    let g = random_bipartite(&mut sample_rng(seed, gi, usize::MAX >> 32));
                    let sys = mccormick(&g, false);
                    let label = format!("bipartite#{gi} n={} |E|={}", g.n(), g.edges().len());
                    run_group(label, points, |k| {
                        let x = draw_point(&mut sample_rng(seed, gi, k), g.n(), boundary, den);
                        let res = exact_sample(&sys, &g, &x);
                        (x, res)
                    })
                })
                .collect()
        }
    };
    let total: usize = groups.iter().map(|g| g.samples).sum();
    let bad: usize = groups.iter().map(|g| g.failures.len()).sum();
    let verdict = if bad == 0 {
        format!("no counterexample found over {total} samples")
    } else {
        format!("{bad} of {total} samples failed")
    };
    let family = args
        .family
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    Ok(Report::new(
        "suite",
        bad == 0,
        SuiteResult {
            family,
            seed,
            groups,
            verdict,
        },
    ))
}
