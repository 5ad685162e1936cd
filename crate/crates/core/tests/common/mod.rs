//! Reference computations kept apart from the library code they check.

#![allow(dead_code)]

use hullcert_core::{Graph, IntervalSet, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn rv(text: &str) -> Vec<Rational> {
    text.split(',').map(|t| r(t.trim())).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A coordinate `k/d` with `d <= max_den`, or exactly 0 or 1 with chance `boundary`.
pub fn coord(rng: &mut ChaCha8Rng, boundary: f64, max_den: i64) -> Rational {
    if boundary > 0.0 && rng.gen_bool(boundary) {
        Rational::from_int(rng.gen_range(0..=1))
    } else {
        let d = rng.gen_range(2..=max_den);
        Rational::new(rng.gen_range(1..d), d)
    }
}

pub fn point(rng: &mut ChaCha8Rng, n: usize, boundary: f64, max_den: i64) -> Vec<Rational> {
    (0..n).map(|_| coord(rng, boundary, max_den)).collect()
}

/// Membership of `t` in a list of half-open intervals, read literally.
fn member(raw: &[(Rational, Rational)], t: &Rational) -> bool {
    raw.iter().any(|(a, b)| a <= t && t < b)
}

/// Cells of the common refinement of `[0, 1)` by all endpoints, each with
/// its length and a membership flag per set.
pub fn refinement(sets: &[&[(Rational, Rational)]]) -> Vec<(Rational, Vec<bool>)> {
    let mut grid = vec![Rational::zero(), Rational::one()];
    for s in sets {
        for (a, b) in s.iter() {
            grid.push(a.clone());
            grid.push(b.clone());
        }
    }
    grid.sort();
    grid.dedup();
    grid.windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) * Rational::new(1, 2);
            (&w[1] - &w[0], sets.iter().map(|s| member(s, &mid)).collect())
        })
        .collect()
}

pub fn measure(set: &IntervalSet) -> Rational {
    refinement(&[set.intervals()])
        .into_iter()
        .filter(|(_, f)| f[0])
        .map(|(w, _)| w)
        .sum()
}

pub fn overlap(a: &IntervalSet, b: &IntervalSet) -> Rational {
    refinement(&[a.intervals(), b.intervals()])
        .into_iter()
        .filter(|(_, f)| f[0] && f[1])
        .map(|(w, _)| w)
        .sum()
}

pub fn edge_sum(g: &Graph, sets: &[IntervalSet]) -> Rational {
    g.edges()
        .iter()
        .map(|&(i, j)| overlap(&sets[i - 1], &sets[j - 1]))
        .sum()
}

fn pos(v: Rational) -> Rational {
    if v.is_negative() {
        Rational::zero()
    } else {
        v
    }
}

/// `φ(T)` on the wheel with rim `1..=m` and hub `m + 1`, from the three sums.
pub fn phi(x: &[Rational], t: &[usize]) -> Rational {
    let m = x.len() - 1;
    let hub = &x[m];
    let one = Rational::one();
    let next = |i: usize| if i == m { 1 } else { i + 1 };
    let in_t = |i: usize| t.contains(&i);
    let covered = |i: usize| t.iter().any(|&k| k == i || next(k) == i);
    let mut total = Rational::zero();
    for i in 1..=m {
        let (xi, xj) = (&x[i - 1], &x[next(i) - 1]);
        if in_t(i) {
            total += pos(xi + xj + hub - &one);
        } else {
            total += pos(xi + xj - &one);
        }
        if !covered(i) {
            total += pos(xi + hub - &one);
        }
    }
    total
}

/// Every `T ⊆ [m]` with no two cyclically consecutive members.
pub fn independent_selections(m: usize) -> Vec<Vec<usize>> {
    (0u32..1 << m)
        .filter(|mask| {
            let rotated = (mask >> 1) | ((mask & 1) << (m - 1));
            mask & rotated == 0
        })
        .map(|mask| (1..=m).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

/// Sets for the triangle following the four-case layout, for `x` in any order.
pub fn triangle_sets(x: &[Rational]) -> Vec<IntervalSet> {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| x[b].cmp(&x[a]));
    let (x1, x2, x3) = (&x[order[0]], &x[order[1]], &x[order[2]]);
    let one = Rational::one();
    let two = Rational::from_int(2);
    let zero = Rational::zero();
    let s12 = x1 + x2;
    let s = &s12 + x3;
    let iv = |pairs: Vec<(Rational, Rational)>| IntervalSet::make(pairs).unwrap();
    let sorted = if s12 <= one {
        let third = if s <= one {
            iv(vec![(s12.clone(), s.clone())])
        } else {
            iv(vec![(s12.clone(), one.clone()), (zero.clone(), &s - &one)])
        };
        vec![
            iv(vec![(zero.clone(), x1.clone())]),
            iv(vec![(x1.clone(), s12.clone())]),
            third,
        ]
    } else {
        let second = iv(vec![(x1.clone(), one.clone()), (zero.clone(), &s12 - &one)]);
        let third = if s <= two {
            iv(vec![(&s12 - &one, &s - &one)])
        } else {
            iv(vec![(&s12 - &one, one.clone()), (zero.clone(), &s - &two)])
        };
        vec![iv(vec![(zero.clone(), x1.clone())]), second, third]
    };
    let mut out = vec![IntervalSet::empty(); 3];
    for (k, set) in sorted.into_iter().enumerate() {
        out[order[k]] = set;
    }
    out
}

/// A random bipartite graph on 2..=8 vertices.
pub fn bipartite_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=8);
    let side: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let edges: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| side[i - 1] != side[j - 1])
        .collect();
    let kept = edges.into_iter().filter(|_| rng.gen_bool(0.6)).collect::<Vec<_>>();
    Graph::new(n, kept).unwrap()
}

/// Raw pair lists on a 1/48 grid, allowing overlaps, touching and empty pairs.
pub fn raw_pairs(rng: &mut ChaCha8Rng) -> Vec<(Rational, Rational)> {
    let count = rng.gen_range(0..=5);
    (0..count)
        .map(|_| {
            let a = rng.gen_range(0..=48);
            let b = rng.gen_range(a..=48);
            (Rational::new(a, 48), Rational::new(b, 48))
        })
        .collect()
}
