//! One test per acceptance criterion; each prints a single PASS/FAIL line.

mod common;

use std::collections::BTreeSet;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use common::*;
use hullcert_core::envelope::envelope_value;
use hullcert_core::lp::lb;
use hullcert_core::relax::{
    mccormick, odd_wheel_system, split_relaxation, triangle_relaxation, wheel_extra_inequalities,
};
use hullcert_core::split::{check_s_properties, construct_split, derive_s, split_certificate};
use hullcert_core::verify::five_wheel_counterexample;
use hullcert_core::wheel::{
    build_network, improved_t, normal_form_violation, optimal_t, optimal_t_raw, wheel_certificate,
};
use hullcert_core::{Assignment, Graph, IntervalSet, Rational, Var};
use rand::seq::SliceRandom;
use rand::Rng;

/// Criteria run one at a time so the runtime budgets measure only themselves.
static SERIAL: Mutex<()> = Mutex::new(());

fn verdict(id: u32, title: &str, budget: Duration, run: impl FnOnce() -> Result<String, String>) {
    let _turn = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    let outcome = match outcome {
        Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
        other => other,
    };
    match &outcome {
        Ok(detail) => println!("criterion {id:>2} PASS  {title}: {detail} ({elapsed:.2?})"),
        Err(why) => println!("criterion {id:>2} FAIL  {title}: {why} ({elapsed:.2?})"),
    }
    assert!(outcome.is_ok(), "criterion {id} failed: {}", outcome.unwrap_err());
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(text: &str) -> IntervalSet {
    // "a-b|c-d"
    IntervalSet::make(text.split('|').map(|p| {
        let (a, b) = p.split_once('-').unwrap();
        (r(a), r(b))
    }))
    .unwrap()
}

fn blocks(text: &str) -> Vec<Vec<usize>> {
    text.split(';')
        .map(|b| b.split(',').map(|v| v.trim().parse().unwrap()).collect())
        .collect()
}

#[test]
fn criterion_01_split_four_five_replay() {
    verdict(1, "split n1=4 n2=5 replay", Duration::from_secs(1), || {
        let x = rv("0.85,0.8,0.7,0.5,0.8,0.6,0.5,0.3,0.1");
        let expected = [
            "0.1-0.25|0.3-1",
            "0-0.05|0.25-1",
            "0.05-0.25|0.5-1",
            "0.25-0.35|0.6-1",
            "0-0.8",
            "0-0.6",
            "0-0.5",
            "0-0.3",
            "0-0.1",
        ];
        let g = Graph::complete_split(4, 5).unwrap();
        let cert = split_certificate(4, 5, &x).map_err(|e| e.to_string())?;
        for (k, want) in expected.iter().enumerate() {
            ensure(cert.sets[k] == set(want), || {
                format!("X_{} = {:?}", k + 1, cert.sets[k])
            })?;
        }
        let sum = edge_sum(&g, &cert.sets);
        let bound = lb(&split_relaxation(4, 5), &g, &x).map_err(|e| e.to_string())?.value;
        let env = envelope_value(&g, &x).map_err(|e| e.to_string())?;
        let target = r("161/20");
        ensure(
            sum == target && bound == target && env == target && cert.edge_sum == target,
            || format!("edge sum {sum}, lb {bound}, envelope {env}"),
        )?;
        let run = cert.run.as_ref().ok_or("no interior run")?;
        ensure(
            cert.s == vec![7, 8, 9] && run.properties.alpha == 3 && run.accounting == target,
            || {
                format!(
                    "S {:?}, alpha {}, accounting {}",
                    cert.s, run.properties.alpha, run.accounting
                )
            },
        )?;
        // the clique row on W = V minus {5, 6} with alpha = 3: 3 x(W) - C(4, 2)
        let xw: Rational = [0usize, 1, 2, 3, 6, 7, 8].iter().map(|&k| x[k].clone()).sum();
        ensure(Rational::from_int(3) * xw - Rational::from_int(6) == r("5.25"), || {
            "clique row value".into()
        })?;
        Ok(format!(
            "9 sets match, S = {{7,8,9}}, edge sum = lb = envelope = {target}"
        ))
    });
}

#[test]
fn criterion_02_split_eight_thirteen_replay() {
    verdict(2, "split n1=8 n2=13 replay", Duration::from_secs(1), || {
        let x = rv(
            "0.9,0.85,0.53,0.49,0.44,0.23,0.16,0.1,0.96,0.89,0.82,0.75,0.67,0.59,0.55,0.45,0.38,0.29,0.22,0.15,0.07",
        );
        let steps = [
            (
                "0.07-0.12|0.15-1",
                "1,0.96,0.89,0.82,0.75,0.67,0.59,0.55,0.45,0.38,0.29,0.22,0.12,0",
                "9;10;11;12;13;14;15;16;17;18;19;1,20,21;22",
            ),
            (
                "0.12-0.19|0.22-1",
                "1,0.96,0.89,0.82,0.75,0.67,0.59,0.55,0.45,0.38,0.29,0.19,0",
                "9;10;11;12;13;14;15;16;17;18;1,2,19,20,21;22",
            ),
            (
                "0.45-0.53|0.55-1",
                "1,0.96,0.89,0.82,0.75,0.67,0.59,0.53,0.38,0.29,0.19,0",
                "9;10;11;12;13;14;3,15,16;17;18;1,2,19,20,21;22",
            ),
            (
                "0.38-0.4|0.53-1",
                "1,0.96,0.89,0.82,0.75,0.67,0.59,0.4,0.29,0.19,0",
                "9;10;11;12;13;14;3,4,15,16,17;18;1,2,19,20,21;22",
            ),
            (
                "0.4-0.43|0.59-1",
                "1,0.96,0.89,0.82,0.75,0.67,0.43,0.29,0.19,0",
                "9;10;11;12;13;3,4,5,14,15,16,17;18;1,2,19,20,21;22",
            ),
            (
                "0.75-0.8|0.82-1",
                "1,0.96,0.89,0.8,0.67,0.43,0.29,0.19,0",
                "9;10;6,11,12;13;3,4,5,14,15,16,17;18;1,2,19,20,21;22",
            ),
            (
                "0.8-0.85|0.89-1",
                "1,0.96,0.85,0.67,0.43,0.29,0.19,0",
                "9;6,7,10,11,12;13;3,4,5,14,15,16,17;18;1,2,19,20,21;22",
            ),
            (
                "0.85-0.91|0.96-1",
                "1,0.91,0.67,0.43,0.29,0.19,0",
                "6,7,8,9,10,11,12;13;3,4,5,14,15,16,17;18;1,2,19,20,21;22",
            ),
        ];
        let (sets, state) = construct_split(8, 13, &x).map_err(|e| e.to_string())?;
        ensure(state.trace.len() == 8, || format!("{} steps", state.trace.len()))?;
        for (k, (xs, a, bl)) in steps.iter().enumerate() {
            let step = &state.trace[k];
            ensure(step.set == set(xs), || format!("step {}: X = {:?}", k + 1, step.set))?;
            ensure(step.a == rv(a), || format!("step {}: a = {:?}", k + 1, step.a))?;
            ensure(step.blocks == blocks(bl), || {
                format!("step {}: A = {:?}", k + 1, step.blocks)
            })?;
        }
        let d = derive_s(&state, &x);
        ensure(d.s == vec![10, 11, 14, 15, 16, 19, 20], || format!("S = {:?}", d.s))?;
        let props = check_s_properties(8, &x, &sets, &d.s);
        ensure(props.height.values() == BTreeSet::from([7, 8]), || {
            format!("h values {:?}", props.height.values())
        })?;
        let breaks = rv("0.07,0.19,0.38,0.43,0.75,0.91,0.96");
        ensure(props.height.breakpoints() == breaks, || {
            format!("breakpoints {:?}", props.height.breakpoints())
        })?;
        // independent height count at each cell of the refinement
        let members: Vec<usize> = (1..=8).chain(d.s.iter().copied()).collect();
        let lists: Vec<&[(Rational, Rational)]> = members.iter().map(|&v| sets[v - 1].intervals()).collect();
        let heights: BTreeSet<usize> = refinement(&lists)
            .into_iter()
            .map(|(_, f)| f.iter().filter(|b| **b).count())
            .collect();
        ensure(heights == BTreeSet::from([7, 8]), || {
            format!("oracle heights {heights:?}")
        })?;
        Ok("8 steps, S and h match".into())
    });
}

#[test]
fn criterion_03_triangle() {
    verdict(3, "triangle gap and exactness", Duration::from_secs(10), || {
        let k3 = Graph::complete(3);
        let half = rv("1/2,1/2,1/2");
        let mc = lb(&mccormick(&k3, false), &k3, &half).map_err(|e| e.to_string())?.value;
        let env = envelope_value(&k3, &half).map_err(|e| e.to_string())?;
        ensure(mc == Rational::zero() && env == r("1/2"), || {
            format!("McCormick lb {mc}, envelope {env}")
        })?;
        let tri = triangle_relaxation(&k3);
        let mut points: Vec<Vec<Rational>> = [
            "1/2,1/3,1/6",
            "0,0,0",
            "1/4,1/4,1/4",
            "1/2,1/2,1/4",
            "3/4,1/4,1/5",
            "3/4,3/4,1/2",
            "2/3,1/2,1/2",
            "1,1,0",
            "1,1,1",
            "9/10,4/5,1/2",
            "1,0,0",
            "1/2,1/2,1",
        ]
        .iter()
        .map(|s| rv(s))
        .collect();
        let mut g = rng(3);
        points.extend((0..200).map(|_| point(&mut g, 3, 0.0, 30)));
        for x in &points {
            let bound = lb(&tri, &k3, x).map_err(|e| e.to_string())?.value;
            let env = envelope_value(&k3, x).map_err(|e| e.to_string())?;
            let sets = triangle_sets(x);
            let measures_ok = sets.iter().zip(x).all(|(s, xi)| measure(s) == *xi);
            let sum = edge_sum(&k3, &sets);
            ensure(measures_ok && bound == env && sum == env, || {
                format!("x {x:?}: lb {bound}, envelope {env}, sets {sum}")
            })?;
        }
        Ok(format!("M_3 gap 0 < 1/2; T(K_3) exact at {} points", points.len()))
    });
}

#[test]
fn criterion_04_even_wheels() {
    verdict(4, "even-wheel certificates", Duration::from_secs(300), || {
        let mut g = rng(4);
        for m in [4usize, 6, 8] {
            let w = Graph::wheel(m).unwrap();
            let tri = triangle_relaxation(&w);
            let selections = independent_selections(m);
            for k in 0..200 {
                let x = point(&mut g, m + 1, 0.0, 24);
                let cert = wheel_certificate(&x).map_err(|e| format!("W_{m} #{k}: {e}"))?;
                let best = selections.iter().map(|t| phi(&x, t)).max().unwrap();
                let measures_ok = cert.intervals.iter().zip(&x).all(|(s, xi)| measure(s) == *xi);
                let sum = edge_sum(&w, &cert.intervals);
                let bound = lb(&tri, &w, &x).map_err(|e| e.to_string())?.value;
                let env = envelope_value(&w, &x).map_err(|e| e.to_string())?;
                ensure(
                    cert.checks.all_pass()
                        && cert.network_ok
                        && measures_ok
                        && cert.phi == best
                        && sum == best
                        && bound == best
                        && env == best,
                    || {
                        format!(
                            "W_{m} x {x:?}: phi {} enum {best} sets {sum} lb {bound} env {env}",
                            cert.phi
                        )
                    },
                )?;
            }
        }
        Ok("600 points, phi = edge sum = lb = envelope".into())
    });
}

#[test]
fn criterion_05_complete_split() {
    verdict(5, "complete-split certificates", Duration::from_secs(600), || {
        let mut g = rng(5);
        let mut boundary_hits = 0;
        for (n1, n2) in [(2usize, 1usize), (3, 2), (4, 3), (5, 4)] {
            let graph = Graph::complete_split(n1, n2).unwrap();
            let sys = split_relaxation(n1, n2);
            for _ in 0..200 {
                let x = point(&mut g, n1 + n2, 0.1, 24);
                boundary_hits += x.iter().filter(|v| v.is_zero() || **v == Rational::one()).count();
                let cert = split_certificate(n1, n2, &x).map_err(|e| e.to_string())?;
                let measures_ok = cert.sets.iter().zip(&x).all(|(s, xi)| measure(s) == *xi);
                let sum = edge_sum(&graph, &cert.sets);
                let bound = lb(&sys, &graph, &x).map_err(|e| e.to_string())?.value;
                let env = envelope_value(&graph, &x).map_err(|e| e.to_string())?;
                ensure(
                    cert.internal_checks_pass() && measures_ok && sum == bound && bound == env,
                    || format!("({n1},{n2}) x {x:?}: sets {sum} lb {bound} env {env}"),
                )?;
            }
        }
        Ok(format!(
            "800 points ({boundary_hits} boundary coordinates), edge sum = lb = envelope"
        ))
    });
}

#[test]
fn criterion_06_network_and_improvement() {
    verdict(6, "negative cycles and improvement", Duration::from_secs(120), || {
        let mut g = rng(4);
        let mut checked = 0;
        for m in [4usize, 6, 8] {
            for _ in 0..200 {
                let x = point(&mut g, m + 1, 0.0, 24);
                let t = optimal_t(&x).map_err(|e| e.to_string())?.t;
                let net = build_network(&x, &t).map_err(|e| e.to_string())?;
                ensure(net.shortest_distances().is_some(), || {
                    format!("negative cycle at optimum for {x:?}")
                })?;
                checked += 1;
            }
        }
        let mut g = rng(6);
        let mut improved = 0;
        let mut tries = 0;
        while improved < 50 {
            tries += 1;
            ensure(tries < 10_000, || {
                format!("only {improved} suboptimal selections found")
            })?;
            let m = *[4usize, 6, 8].choose(&mut g).unwrap();
            let x = point(&mut g, m + 1, 0.0, 12);
            let best = independent_selections(m).iter().map(|t| phi(&x, t)).max().unwrap();
            let worse: Vec<Vec<usize>> = independent_selections(m)
                .into_iter()
                .filter(|t| normal_form_violation(&x, t).is_none() && phi(&x, t) < best)
                .collect();
            if worse.is_empty() {
                continue;
            }
            let t = &worse[g.gen_range(0..worse.len())];
            let net = build_network(&x, t).map_err(|e| e.to_string())?;
            let cycle = net
                .min_arc_negative_cycle()
                .ok_or_else(|| format!("suboptimal T {t:?} at {x:?} gives no negative cycle"))?;
            let better = improved_t(&x, t, &cycle).ok_or_else(|| format!("unrecognised cycle {cycle:?}"))?;
            let valid = independent_selections(m).contains(&better);
            ensure(valid && phi(&x, &better) > phi(&x, t), || {
                format!(
                    "x {x:?}: T {t:?} -> {better:?}, phi {} -> {}",
                    phi(&x, t),
                    phi(&x, &better)
                )
            })?;
            improved += 1;
        }
        Ok(format!(
            "{checked} optimal networks clean; 50 suboptimal selections improved"
        ))
    });
}

#[test]
fn criterion_07_dp_matches_enumeration() {
    verdict(7, "cyclic DP vs enumeration", Duration::from_secs(120), || {
        let mut g = rng(7);
        for _ in 0..100 {
            let m = g.gen_range(3..=14);
            let x = point(&mut g, m + 1, 0.05, 24);
            let sel = optimal_t_raw(&x).map_err(|e| e.to_string())?;
            let best = independent_selections(m).iter().map(|t| phi(&x, t)).max().unwrap();
            let norm = optimal_t(&x).map_err(|e| e.to_string())?;
            ensure(
                sel.phi == best && phi(&x, &sel.t) == best && norm.phi == best && phi(&x, &norm.t) == best,
                || format!("m {m} x {x:?}: dp {} enumeration {best}", sel.phi),
            )?;
        }
        Ok("100 instances with m in 3..=14".into())
    });
}

#[test]
fn criterion_08_five_wheel() {
    verdict(8, "five-wheel points", Duration::from_secs(30), || {
        let w5 = Graph::wheel(5).unwrap();
        let extra = wheel_extra_inequalities(5).map_err(|e| e.to_string())?;
        let tri = triangle_relaxation(&w5);
        let build = |rim: &str, hub: &str, spoke: &str, rim_y: &str, chord: &str| {
            let mut p = Assignment {
                x: rv(&format!("{rim},{rim},{rim},{rim},{rim},{hub}")),
                ..Default::default()
            };
            for i in 1..=6 {
                for j in i + 1..=6 {
                    let v = if j == 6 {
                        spoke
                    } else if w5.has_edge(i, j) {
                        rim_y
                    } else {
                        chord
                    };
                    p.y.insert((i, j), r(v));
                }
            }
            p
        };
        let left = build("1/3", "2/3", "1/6", "0", "1/6");
        let right = build("2/3", "1/3", "1/6", "1/3", "1/2");
        let y_sum = |p: &Assignment| -> Rational { w5.edges().iter().map(|&(i, j)| p.get(Var::y(i, j))).sum() };
        ensure(y_sum(&left) == r("5/6") && y_sum(&right) == r("5/2"), || {
            "projections differ".into()
        })?;
        // 2·x_hub + Σ rim − 2 and 3·x_hub + 2·Σ rim − 5 at the two points
        ensure(r("1") - y_sum(&left) == r("1/6"), || "left shortfall".into())?;
        ensure(r("8/3") - y_sum(&right) == r("1/6"), || "right shortfall".into())?;
        ensure(tri.is_satisfied(&left) && tri.is_satisfied(&right), || {
            "a triangle-relaxation row fails".into()
        })?;
        ensure(
            -extra[0].slack(&left) == r("1/6") && extra[1].is_satisfied(&left),
            || "left extra rows".into(),
        )?;
        ensure(
            -extra[1].slack(&right) == r("1/6") && extra[0].is_satisfied(&right),
            || "right extra rows".into(),
        )?;
        let rep = five_wheel_counterexample();
        ensure(rep.passed(), || "library report does not pass".into())?;
        ensure(
            rep.left.projection[6] == r("5/6") && rep.right.projection[6] == r("5/2"),
            || "library projections".into(),
        )?;
        ensure(
            rep.left.violation == r("1/6") && rep.right.violation == r("1/6"),
            || "library violations".into(),
        )?;
        let sys = odd_wheel_system(5).map_err(|e| e.to_string())?;
        for p in [&left, &right] {
            let bound = lb(&sys, &w5, &p.x).map_err(|e| e.to_string())?.value;
            let env = envelope_value(&w5, &p.x).map_err(|e| e.to_string())?;
            ensure(bound == env, || format!("with extra rows: lb {bound} envelope {env}"))?;
        }
        Ok("projections 5/6 and 5/2, violations 1/6 and 1/6".into())
    });
}

#[test]
fn criterion_09_bipartite() {
    verdict(9, "bipartite McCormick exactness", Duration::from_secs(300), || {
        let mut g = rng(9);
        for k in 0..100 {
            let graph = bipartite_graph(&mut g);
            ensure(graph.is_bipartite(), || "generator produced an odd cycle".into())?;
            let sys = mccormick(&graph, false);
            for _ in 0..20 {
                let x = point(&mut g, graph.n(), 0.05, 24);
                let bound = lb(&sys, &graph, &x).map_err(|e| e.to_string())?.value;
                let env = envelope_value(&graph, &x).map_err(|e| e.to_string())?;
                ensure(bound == env, || {
                    format!("graph #{k} {:?} x {x:?}: lb {bound} envelope {env}", graph.edges())
                })?;
            }
        }
        Ok("100 graphs x 20 points".into())
    });
}

#[test]
fn criterion_10_interval_algebra() {
    verdict(10, "interval algebra", Duration::from_secs(120), || {
        let mut g = rng(10);
        for k in 0..10_000 {
            let (ra, rb) = (raw_pairs(&mut g), raw_pairs(&mut g));
            let a = IntervalSet::make(ra.clone()).map_err(|e| e.to_string())?;
            let b = IntervalSet::make(rb.clone()).map_err(|e| e.to_string())?;
            let cells = refinement(&[&ra, &rb]);
            let total = |f: &dyn Fn(bool, bool) -> bool| -> Rational {
                cells
                    .iter()
                    .filter(|(_, m)| f(m[0], m[1]))
                    .map(|(w, _)| w.clone())
                    .sum()
            };
            let (union, inter) = (a.union(&b), a.intersect(&b));
            let agree = a.measure() == total(&|p, _| p)
                && b.measure() == total(&|_, q| q)
                && union.measure() == total(&|p, q| p || q)
                && inter.measure() == total(&|p, q| p && q)
                && a.difference(&b).measure() == total(&|p, q| p && !q)
                && a.complement().measure() == total(&|p, _| !p);
            ensure(agree, || format!("pair #{k}: oracle disagreement for {ra:?} / {rb:?}"))?;
            ensure(union.measure() + inter.measure() == a.measure() + b.measure(), || {
                format!("pair #{k}: inclusion-exclusion")
            })?;
            let again = IntervalSet::make(a.intervals().iter().cloned()).map_err(|e| e.to_string())?;
            ensure(
                again == a && IntervalSet::make(union.intervals().iter().cloned()).unwrap() == union,
                || format!("pair #{k}: normalization not idempotent"),
            )?;
            ensure(a.intervals().windows(2).all(|w| w[0].1 < w[1].0), || {
                format!("pair #{k}: touching intervals kept")
            })?;
        }
        Ok("10000 pairs".into())
    });
}
