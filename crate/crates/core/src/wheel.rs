//! Interval certificates for even wheels.
//!
//! The rim is `1..=m` (cyclic), the hub is `n = m + 1`. A selection `T` of
//! rim indices with no two cyclically consecutive gives the dual bound
//! `φ(T)`; the best one is found by a cycle DP, put into normal form, and
//! turned into sets `X_i` through a small difference-constraint system in
//! variables `z_i`. That system is feasible exactly when the network
//! `N(x, T)` has no negative cycle.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{rim_predecessor, rim_successor};
use crate::interval::{IntervalError, IntervalSet};
use crate::lp::{feasible_point, Feasibility, LpError};
use crate::rational::Rational;
use crate::relax::{Assignment, LinearSystem, Relation, Row, RowFamily, Var, ZRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WheelError {
    #[error("a wheel needs at least 3 rim vertices, x has {0} coordinates")]
    TooSmall(usize),
    #[error("certificates need an even rim, got m = {0}")]
    OddRim(usize),
    #[error("coordinate x{index} = {value} lies outside [0, 1]")]
    OutOfBox { index: usize, value: Rational },
    #[error("selection contains consecutive rim indices {0} and {1}")]
    Adjacent(usize, usize),
    #[error("rim index {0} outside 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("selection is not in normal form: {0}")]
    NotNormalized(String),
    #[error("z violates the system at rows {0:?}")]
    ZViolates(Vec<usize>),
    #[error("z-system infeasible")]
    ZInfeasible { witness: Vec<Rational> },
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Validates `x` as a point for the wheel with `x.len() - 1` rim vertices and
/// returns `m`.
pub fn rim_size(x: &[Rational]) -> Result<usize, WheelError> {
    if x.len() < 4 {
        return Err(WheelError::TooSmall(x.len()));
    }
    for (k, v) in x.iter().enumerate() {
        if v.is_negative() || *v > Rational::one() {
            return Err(WheelError::OutOfBox {
                index: k + 1,
                value: v.clone(),
            });
        }
    }
    Ok(x.len() - 1)
}

fn hub(x: &[Rational]) -> &Rational {
    &x[x.len() - 1]
}

/// `s_i = x_i + x_{i+1} + x_n`.
pub fn triple_sum(x: &[Rational], i: usize) -> Rational {
    let m = x.len() - 1;
    &x[i - 1] + &x[rim_successor(i, m) - 1] + hub(x)
}

fn in_band(s: &Rational) -> bool {
    *s >= Rational::one() && *s <= Rational::from_int(2)
}

/// The per-index bounds used by the `z`-system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WheelBounds {
    pub m: Vec<Rational>,
    pub big_m: Vec<Rational>,
    pub m_prime: Vec<Rational>,
    pub big_m_prime: Vec<Rational>,
}

impl WheelBounds {
    pub fn new(x: &[Rational]) -> Self {
        let k = x.len() - 1;
        let xn = hub(x);
        let one = Rational::one();
        let mut b = WheelBounds {
            m: vec![],
            big_m: vec![],
            m_prime: vec![],
            big_m_prime: vec![],
        };
        for i in 1..=k {
            let xi = &x[i - 1];
            let pair = xi + &x[rim_successor(i, k) - 1];
            b.m.push((xi - xn).pos_part());
            b.big_m.push(Rational::min_of(xi, &(&one - xn)));
            b.m_prime.push(Rational::min_of(&one, &pair) - xn);
            b.big_m_prime.push(Rational::max_of(&one, &pair) - xn);
        }
        b
    }

    pub fn lo(&self, i: usize) -> &Rational {
        &self.m[i - 1]
    }
    pub fn hi(&self, i: usize) -> &Rational {
        &self.big_m[i - 1]
    }
    pub fn pair_lo(&self, i: usize) -> &Rational {
        &self.m_prime[i - 1]
    }
    pub fn pair_hi(&self, i: usize) -> &Rational {
        &self.big_m_prime[i - 1]
    }
}

/// Rejects selections with out-of-range or cyclically consecutive indices.
pub fn check_selection(m: usize, t: &[usize]) -> Result<(), WheelError> {
    let set: BTreeSet<usize> = t.iter().copied().collect();
    for &i in &set {
        if i == 0 || i > m {
            return Err(WheelError::IndexOutOfRange(i, m));
        }
        let j = rim_successor(i, m);
        if set.contains(&j) {
            return Err(WheelError::Adjacent(i, j));
        }
    }
    Ok(())
}

/// The three max-terms `A_i` (rim edge), `B_i` (spoke), `C_i` (triangle).
pub struct Terms {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

impl Terms {
    pub fn new(x: &[Rational]) -> Self {
        let m = x.len() - 1;
        let one = Rational::one();
        let xn = hub(x);
        let mut t = Terms {
            a: vec![],
            b: vec![],
            c: vec![],
        };
        for i in 1..=m {
            let xi = &x[i - 1];
            let xj = &x[rim_successor(i, m) - 1];
            t.a.push((xi + xj - &one).pos_part());
            t.b.push((xi + xn - &one).pos_part());
            t.c.push((xi + xj + xn - &one).pos_part());
        }
        t
    }

    /// `w_i = C_i - A_i - B_i - B_{i+1}`, the gain of adding `i` to `T`.
    pub fn weight(&self, i: usize) -> Rational {
        let m = self.a.len();
        &self.c[i - 1] - &self.a[i - 1] - &self.b[i - 1] - &self.b[rim_successor(i, m) - 1]
    }

    pub fn base(&self) -> Rational {
        self.a.iter().chain(&self.b).sum()
    }
}

/// `φ(T)` straight from its three sums.
pub fn phi(x: &[Rational], t: &[usize]) -> Result<Rational, WheelError> {
    let m = rim_size(x)?;
    check_selection(m, t)?;
    let terms = Terms::new(x);
    let in_t: BTreeSet<usize> = t.iter().copied().collect();
    let covered: BTreeSet<usize> = t.iter().flat_map(|&i| [i, rim_successor(i, m)]).collect();
    let rim: Rational = (1..=m).filter(|i| !in_t.contains(i)).map(|i| &terms.a[i - 1]).sum();
    let spokes: Rational = (1..=m).filter(|i| !covered.contains(i)).map(|i| &terms.b[i - 1]).sum();
    let tri: Rational = in_t.iter().map(|&i| &terms.c[i - 1]).sum();
    Ok(rim + spokes + tri)
}

/// Best total weight of an independent set on the path `lo..=hi`.
fn path_best(w: &[Rational], lo: usize, hi: usize) -> Rational {
    let (mut take, mut skip) = (Rational::zero(), Rational::zero());
    if lo > hi {
        return skip;
    }
    for i in lo..=hi {
        let t = &skip + &w[i - 1];
        skip = Rational::max_of(&take, &skip);
        take = t;
    }
    Rational::max_of(&take, &skip)
}

/// Best total weight of a cyclically independent set on `1..=m`.
fn cycle_best(w: &[Rational]) -> Rational {
    let m = w.len();
    let without_first = path_best(w, 2, m);
    let with_first = &w[0] + path_best(w, 3, m - 1);
    Rational::max_of(&without_first, &with_first)
}

/// The lexicographically smallest sorted selection reaching `target`.
fn lex_smallest(w: &[Rational], target: &Rational) -> Vec<usize> {
    let m = w.len();
    let mut t: Vec<usize> = Vec::new();
    let mut acc = Rational::zero();
    let mut lo = 1;
    while acc != *target {
        let first_taken = t.first() == Some(&1);
        let pick = (lo..=m).find(|&c| {
            if c == m && first_taken {
                return false;
            }
            let hi = if first_taken || (t.is_empty() && c == 1) {
                m - 1
            } else {
                m
            };
            &acc + &w[c - 1] + path_best(w, c + 2, hi) == *target
        });
        let c = pick.expect("an optimal completion exists");
        acc += &w[c - 1];
        t.push(c);
        lo = c + 2;
    }
    t
}

/// A selection together with its `φ` value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TSelection {
    pub t: Vec<usize>,
    pub phi: Rational,
    pub normalized: bool,
}

/// `Φ*` and the lexicographically smallest optimal selection, before normalization.
pub fn optimal_t_raw(x: &[Rational]) -> Result<TSelection, WheelError> {
    rim_size(x)?;
    let terms = Terms::new(x);
    let m = x.len() - 1;
    let w: Vec<Rational> = (1..=m).map(|i| terms.weight(i)).collect();
    let best = cycle_best(&w);
    let t = lex_smallest(&w, &best);
    Ok(TSelection {
        t,
        phi: terms.base() + best,
        normalized: false,
    })
}

/// An optimal selection in normal form: drop members with `s_i < 1`, then
/// add, in ascending order, indices with `1 <= s_i <= 2` and no selected
/// neighbour, until nothing changes.
pub fn optimal_t(x: &[Rational]) -> Result<TSelection, WheelError> {
    let raw = optimal_t_raw(x)?;
    let m = x.len() - 1;
    let mut t: BTreeSet<usize> = raw.t.iter().copied().collect();
    let mut value = raw.phi.clone();
    loop {
        let before = t.clone();
        for &i in &t {
            assert!(
                triple_sum(x, i) <= Rational::from_int(2),
                "optimal selection has s_{i} > 2"
            );
        }
        t.retain(|&i| triple_sum(x, i) >= Rational::one());
        for i in 1..=m {
            let free = [rim_predecessor(i, m), i, rim_successor(i, m)]
                .iter()
                .all(|k| !t.contains(k));
            if free && in_band(&triple_sum(x, i)) {
                t.insert(i);
            }
        }
        let tv: Vec<usize> = t.iter().copied().collect();
        let now = phi(x, &tv)?;
        assert!(now >= value, "normalization decreased phi");
        value = now;
        if t == before {
            break;
        }
    }
    assert_eq!(value, raw.phi, "normalized selection lost optimality");
    Ok(TSelection {
        t: t.into_iter().collect(),
        phi: value,
        normalized: true,
    })
}

/// Conditions 1, 3 and 4 of the normal form (everything except optimality).
pub fn normal_form_violation(x: &[Rational], t: &[usize]) -> Option<String> {
    let m = x.len() - 1;
    if let Err(e) = check_selection(m, t) {
        return Some(e.to_string());
    }
    let set: BTreeSet<usize> = t.iter().copied().collect();
    for &i in &set {
        if !in_band(&triple_sum(x, i)) {
            return Some(format!("s_{i} = {} outside [1, 2]", triple_sum(x, i)));
        }
    }
    for i in 1..=m {
        let hit = [rim_predecessor(i, m), i, rim_successor(i, m)]
            .iter()
            .any(|k| set.contains(k));
        if in_band(&triple_sum(x, i)) && !hit {
            return Some(format!("index {i} has s_i in [1, 2] but no selected neighbour"));
        }
    }
    None
}

fn cover(m: usize, t: &[usize]) -> BTreeSet<usize> {
    t.iter().flat_map(|&i| [i, rim_successor(i, m)]).collect()
}

/// The `z`-system for `T`, rows grouped by kind and then by index.
pub fn z_system(x: &[Rational], t: &[usize]) -> Result<LinearSystem, WheelError> {
    rim_size(x)?;
    if let Some(why) = normal_form_violation(x, t) {
        return Err(WheelError::NotNormalized(why));
    }
    Ok(z_system_unchecked(x, t))
}

/// The `z`-system for any selection, skipping the normal-form check.
pub fn z_system_unchecked(x: &[Rational], t: &[usize]) -> LinearSystem {
    let m = x.len() - 1;
    let b = WheelBounds::new(x);
    let in_t: BTreeSet<usize> = t.iter().copied().collect();
    let covered = cover(m, t);
    let one = Rational::one;
    let z = |i: usize| vec![(Var::Z(i), one())];
    let zz = |i: usize| vec![(Var::Z(i), one()), (Var::Z(rim_successor(i, m)), one())];
    let mut sys = LinearSystem::new("z-system", 0, vec![]);
    sys.nz = m;
    let mut rows = Vec::new();
    for i in (1..=m).filter(|i| covered.contains(i)) {
        rows.push(Row::new(
            z(i),
            Relation::Ge,
            b.lo(i).clone(),
            RowFamily::ZSystem(ZRow::LowerCovered),
            format!("z{i}>=m{i}"),
        ));
    }
    for i in (1..=m).filter(|i| !covered.contains(i)) {
        rows.push(Row::new(
            z(i),
            Relation::Ge,
            b.hi(i).clone(),
            RowFamily::ZSystem(ZRow::LowerUncovered),
            format!("z{i}>=M{i}"),
        ));
    }
    for i in 1..=m {
        rows.push(Row::new(
            z(i),
            Relation::Le,
            b.hi(i).clone(),
            RowFamily::ZSystem(ZRow::Upper),
            format!("z{i}<=M{i}"),
        ));
    }
    for i in (1..=m).filter(|i| in_t.contains(i)) {
        rows.push(Row::new(
            zz(i),
            Relation::Ge,
            b.pair_hi(i).clone(),
            RowFamily::ZSystem(ZRow::PairLowerInT),
            format!("z{i}+z{}>=M'{i}", rim_successor(i, m)),
        ));
    }
    for i in (1..=m).filter(|i| !in_t.contains(i)) {
        rows.push(Row::new(
            zz(i),
            Relation::Ge,
            b.pair_lo(i).clone(),
            RowFamily::ZSystem(ZRow::PairLower),
            format!("z{i}+z{}>=m'{i}", rim_successor(i, m)),
        ));
    }
    for i in (1..=m).filter(|i| !in_t.contains(i)) {
        rows.push(Row::new(
            zz(i),
            Relation::Le,
            b.pair_hi(i).clone(),
            RowFamily::ZSystem(ZRow::PairUpper),
            format!("z{i}+z{}<=M'{i}", rim_successor(i, m)),
        ));
    }
    sys.extend_rows(rows);
    sys
}

/// `X_n = [0, x_n)` and, for rim vertices,
/// odd `i`: `[x_n, x_n + z_i) ∪ [0, x_i - z_i)`,
/// even `i`: `[1 - z_i, 1) ∪ [x_n - x_i + z_i, x_n)`.
pub fn build_intervals_wheel(x: &[Rational], t: &[usize], z: &[Rational]) -> Result<Vec<IntervalSet>, WheelError> {
    let m = rim_size(x)?;
    if m % 2 == 1 {
        return Err(WheelError::OddRim(m));
    }
    let sys = z_system_unchecked(x, t);
    let point = Assignment {
        z: z.to_vec(),
        ..Assignment::default()
    };
    let bad: Vec<usize> = sys.violations(&point).into_iter().map(|(k, _)| k).collect();
    if !bad.is_empty() || z.len() != m {
        return Err(WheelError::ZViolates(bad));
    }
    let xn = hub(x);
    let one = Rational::one();
    let mut sets = Vec::with_capacity(m + 1);
    for i in 1..=m {
        let (xi, zi) = (&x[i - 1], &z[i - 1]);
        let set = if i % 2 == 1 {
            IntervalSet::make([(xn.clone(), xn + zi), (Rational::zero(), xi - zi)])?
        } else {
            IntervalSet::make([(&one - zi, one.clone()), (xn - xi + zi, xn.clone())])?
        };
        sets.push(set);
    }
    sets.push(IntervalSet::make([(Rational::zero(), xn.clone())])?);
    Ok(sets)
}

/// Outcome of checking the target identity and its three local conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WheelChecks {
    pub measures: bool,
    pub edge_sum: Rational,
    pub phi: Rational,
    pub target: bool,
    /// Triangle sums on `T` equal `max(0, s_i - 1)`.
    pub triangles_on_t: bool,
    /// Rim intersections off `T` equal `max(0, x_i + x_{i+1} - 1)`.
    pub rim_off_t: bool,
    /// Spoke intersections off `T ∪ (T + 1)` equal `max(0, x_i + x_n - 1)`.
    pub spokes_off_cover: bool,
}

impl WheelChecks {
    pub fn all_pass(&self) -> bool {
        self.measures && self.target && self.triangles_on_t && self.rim_off_t && self.spokes_off_cover
    }
}

pub fn verify_eq_target(x: &[Rational], t: &[usize], sets: &[IntervalSet]) -> Result<WheelChecks, WheelError> {
    let m = rim_size(x)?;
    let n = m + 1;
    let mu = |i: usize, j: usize| sets[i - 1].intersect(&sets[j - 1]).measure();
    let terms = Terms::new(x);
    let in_t: BTreeSet<usize> = t.iter().copied().collect();
    let covered = cover(m, t);
    let edge_sum: Rational = (1..=m).map(|i| mu(i, rim_successor(i, m)) + mu(i, n)).sum();
    let value = phi(x, t)?;
    let triangles_on_t = in_t.iter().all(|&i| {
        let j = rim_successor(i, m);
        mu(i, j) + mu(i, n) + mu(j, n) == terms.c[i - 1]
    });
    let rim_off_t = (1..=m)
        .filter(|i| !in_t.contains(i))
        .all(|i| mu(i, rim_successor(i, m)) == terms.a[i - 1]);
    let spokes_off_cover = (1..=m)
        .filter(|i| !covered.contains(i))
        .all(|i| mu(i, n) == terms.b[i - 1]);
    Ok(WheelChecks {
        measures: sets.len() == n && sets.iter().zip(x).all(|(s, xi)| s.measure() == *xi),
        target: edge_sum == value,
        edge_sum,
        phi: value,
        triangles_on_t,
        rim_off_t,
        spokes_off_cover,
    })
}

/// Which dual multiplier an arc carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ArcKind {
    PiPlus(usize),
    PiMinus(usize),
    SigmaMinus(usize),
    SigmaPlus(usize),
}

/// Node 0 is `O`; node `k >= 1` is rim vertex `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub cost: Rational,
    pub kind: ArcKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowNetwork {
    pub m: usize,
    pub arcs: Vec<Arc>,
}

/// `N(x, T)`. An arc `(u, v)` with cost `c` encodes `p_v - p_u <= c` for the
/// potentials `p_O = 0`, `p_i = z_i` (odd `i`), `p_i = -z_i` (even `i`).
pub fn build_network(x: &[Rational], t: &[usize]) -> Result<FlowNetwork, WheelError> {
    let m = rim_size(x)?;
    if m % 2 == 1 {
        return Err(WheelError::OddRim(m));
    }
    check_selection(m, t)?;
    let b = WheelBounds::new(x);
    let in_t: BTreeSet<usize> = t.iter().copied().collect();
    let covered = cover(m, t);
    let mut arcs = Vec::new();
    let mut arc = |from, to, cost: Rational, kind| arcs.push(Arc { from, to, cost, kind });
    for i in 1..=m {
        let odd = i % 2 == 1;
        let lower = if covered.contains(&i) {
            b.lo(i).clone()
        } else {
            b.hi(i).clone()
        };
        if odd {
            arc(0, i, b.hi(i).clone(), ArcKind::PiPlus(i));
            arc(i, 0, -lower, ArcKind::PiMinus(i));
        } else {
            arc(0, i, -lower, ArcKind::PiMinus(i));
            arc(i, 0, b.hi(i).clone(), ArcKind::PiPlus(i));
        }
    }
    for i in 1..=m {
        let j = rim_successor(i, m);
        let (fwd, bwd) = if i % 2 == 1 { ((i, j), (j, i)) } else { ((j, i), (i, j)) };
        if in_t.contains(&i) {
            arc(fwd.0, fwd.1, -b.pair_hi(i), ArcKind::SigmaMinus(i));
        } else {
            arc(fwd.0, fwd.1, -b.pair_lo(i), ArcKind::SigmaMinus(i));
            arc(bwd.0, bwd.1, b.pair_hi(i).clone(), ArcKind::SigmaPlus(i));
        }
    }
    Ok(FlowNetwork { m, arcs })
}

/// A simple directed cycle given by its node sequence (first node not repeated).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeCycle {
    pub nodes: Vec<usize>,
    pub cost: Rational,
}

impl FlowNetwork {
    fn node_count(&self) -> usize {
        self.m + 1
    }

    /// Bellman–Ford from `O`: shortest distances if there is no negative cycle.
    pub fn shortest_distances(&self) -> Option<Vec<Rational>> {
        let nn = self.node_count();
        let mut dist: Vec<Option<Rational>> = vec![None; nn];
        dist[0] = Some(Rational::zero());
        for _ in 0..nn {
            let mut changed = false;
            for a in &self.arcs {
                if let Some(du) = dist[a.from].clone() {
                    let cand = du + &a.cost;
                    if dist[a.to].as_ref().is_none_or(|dv| cand < *dv) {
                        dist[a.to] = Some(cand);
                        changed = true;
                    }
                }
            }
            if !changed {
                return Some(
                    dist.into_iter()
                        .map(|d| d.expect("every node is reachable from O"))
                        .collect(),
                );
            }
        }
        None
    }

    /// A negative cycle with the fewest arcs, if any (ties broken by start
    /// node, then by arc order).
    pub fn min_arc_negative_cycle(&self) -> Option<NegativeCycle> {
        let nn = self.node_count();
        // best[k][s][v]: cheapest walk from s to v with exactly k arcs
        let mut layers: Vec<Vec<Vec<Option<(Rational, usize)>>>> = Vec::new();
        let mut cur: Vec<Vec<Option<(Rational, usize)>>> = vec![vec![None; nn]; nn];
        for (s, row) in cur.iter_mut().enumerate() {
            row[s] = Some((Rational::zero(), usize::MAX));
        }
        layers.push(cur);
        for k in 1..=nn {
            let prev = &layers[k - 1];
            let mut next: Vec<Vec<Option<(Rational, usize)>>> = vec![vec![None; nn]; nn];
            for s in 0..nn {
                for (ai, a) in self.arcs.iter().enumerate() {
                    if let Some((d, _)) = &prev[s][a.from] {
                        let cand = d + &a.cost;
                        let slot = &mut next[s][a.to];
                        if slot.as_ref().is_none_or(|(best, _)| cand < *best) {
                            *slot = Some((cand, ai));
                        }
                    }
                }
            }
            layers.push(next);
            for s in 0..nn {
                if let Some((c, _)) = &layers[k][s][s] {
                    if c.is_negative() {
                        let cost = c.clone();
                        let mut nodes = Vec::with_capacity(k);
                        let mut v = s;
                        for step in (1..=k).rev() {
                            let ai = layers[step][s][v].as_ref().expect("walk exists").1;
                            nodes.push(v);
                            v = self.arcs[ai].from;
                        }
                        nodes.reverse();
                        // rotate so the cycle starts at its smallest node
                        let pos = nodes
                            .iter()
                            .enumerate()
                            .min_by_key(|(_, n)| **n)
                            .map(|(p, _)| p)
                            .unwrap_or(0);
                        nodes.rotate_left(pos);
                        return Some(NegativeCycle { nodes, cost });
                    }
                }
            }
        }
        None
    }
}

/// `Ok(z)` read off Bellman–Ford potentials, or a minimum-arc negative cycle.
pub fn assert_no_negative_cycle(net: &FlowNetwork) -> Result<Vec<Rational>, NegativeCycle> {
    match net.shortest_distances() {
        Some(d) => Ok((1..=net.m)
            .map(|i| if i % 2 == 1 { d[i].clone() } else { -&d[i] })
            .collect()),
        None => Err(net.min_arc_negative_cycle().expect("Bellman-Ford saw a negative cycle")),
    }
}

/// Shape of a negative cycle relative to the rim order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CycleShape {
    /// The whole rim, `forward` meaning `1 -> 2 -> ... -> m -> 1`.
    Rim { forward: bool },
    /// `O -> a -> ... -> b -> O` along the rim; `indices` are the rim arcs
    /// `k` (joining `k` and `k + 1`) that the path uses.
    Path { forward: bool, indices: Vec<usize> },
}

pub fn classify_cycle(m: usize, cycle: &NegativeCycle) -> Option<CycleShape> {
    let nodes = &cycle.nodes;
    let len = nodes.len();
    let step_dir = |u: usize, v: usize| -> Option<(bool, usize)> {
        if rim_successor(u, m) == v {
            Some((true, u))
        } else if rim_successor(v, m) == u {
            Some((false, v))
        } else {
            None
        }
    };
    if nodes[0] == 0 {
        let path = &nodes[1..];
        if path.len() < 2 {
            return None;
        }
        let mut dir = None;
        let mut indices = Vec::new();
        for w in path.windows(2) {
            let (fwd, k) = step_dir(w[0], w[1])?;
            if dir.is_some_and(|d| d != fwd) {
                return None;
            }
            dir = Some(fwd);
            indices.push(k);
        }
        Some(CycleShape::Path { forward: dir?, indices })
    } else {
        if len != m {
            return None;
        }
        let (fwd, _) = step_dir(nodes[0], nodes[1])?;
        for k in 0..len {
            let (d, _) = step_dir(nodes[k], nodes[(k + 1) % len])?;
            if d != fwd {
                return None;
            }
        }
        Some(CycleShape::Rim { forward: fwd })
    }
}

/// The selection derived from a minimum-arc negative cycle. Forward cycles
/// switch the indices they cover to the even ones in the band; backward
/// cycles are the forward case of the instance rotated by one rim position,
/// which amounts to switching to the odd ones.
pub fn improved_t(x: &[Rational], t: &[usize], cycle: &NegativeCycle) -> Option<Vec<usize>> {
    let m = x.len() - 1;
    let shape = classify_cycle(m, cycle)?;
    let want_parity = |forward: bool| if forward { 0 } else { 1 };
    let mut out: BTreeSet<usize> = t.iter().copied().collect();
    let (forward, indices): (bool, Vec<usize>) = match shape {
        CycleShape::Rim { forward } => (forward, (1..=m).collect()),
        CycleShape::Path { forward, indices } => (forward, indices),
    };
    for k in &indices {
        out.remove(k);
    }
    for &k in &indices {
        if k % 2 == want_parity(forward) && in_band(&triple_sum(x, k)) {
            out.insert(k);
        }
    }
    Some(out.into_iter().collect())
}

/// `x` rotated by one rim position: `x'_k = x_{k+1}`, hub unchanged.
pub fn rotate_instance(x: &[Rational]) -> Vec<Rational> {
    let m = x.len() - 1;
    let mut out: Vec<Rational> = (1..=m).map(|k| x[rim_successor(k, m) - 1].clone()).collect();
    out.push(hub(x).clone());
    out
}

/// Everything the even-wheel pipeline produces for one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WheelCertificate {
    pub x: Vec<Rational>,
    pub tstar: Vec<usize>,
    pub phi: Rational,
    pub z: Vec<Rational>,
    pub intervals: Vec<IntervalSet>,
    pub checks: WheelChecks,
    /// Bellman–Ford found no negative cycle in `N(x, T*)`.
    pub network_ok: bool,
}

/// Optimal selection, `z`-system, a feasible `z`, sets, and the checks.
pub fn wheel_certificate(x: &[Rational]) -> Result<WheelCertificate, WheelError> {
    let m = rim_size(x)?;
    if m % 2 == 1 {
        return Err(WheelError::OddRim(m));
    }
    let sel = optimal_t(x)?;
    let sys = z_system(x, &sel.t)?;
    let z = match feasible_point(&sys, None)? {
        Feasibility::Feasible(p) => p.z,
        Feasibility::Infeasible(witness) => return Err(WheelError::ZInfeasible { witness }),
    };
    let intervals = build_intervals_wheel(x, &sel.t, &z)?;
    let checks = verify_eq_target(x, &sel.t, &intervals)?;
    let network_ok = build_network(x, &sel.t)?.shortest_distances().is_some();
    Ok(WheelCertificate {
        x: x.to_vec(),
        tstar: sel.t,
        phi: sel.phi,
        z,
        intervals,
        checks,
        network_ok,
    })
}
