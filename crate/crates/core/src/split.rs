//! Interval certificates for complete split graphs: a clique `V_1 = 1..=n1`
//! joined to an independent set `V_2 = n1+1..=n`.
//!
//! `V_2` vertices get `[0, x_j)`; clique vertices are placed greedily on the
//! staircase formed by the sets built so far. The blocks `A_p` recorded along
//! the way determine a set `S ⊆ V_2` whose height function takes two
//! consecutive values, which is what makes the edge sum match the clique
//! inequality bound.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::interval::{IntervalError, IntervalSet};
use crate::rational::{binom, Rational};
use crate::verify::edge_sum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("the clique side needs at least one vertex")]
    EmptyClique,
    #[error("x has {got} coordinates, expected {want}")]
    Dimension { got: usize, want: usize },
    #[error("coordinate x{index} = {value} lies outside [0, 1]")]
    OutOfBox { index: usize, value: Rational },
    #[error("coordinate x{0} is not strictly inside (0, 1)")]
    NotInterior(usize),
    #[error("coordinates are not sorted in decreasing order within each side")]
    NotSorted,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

fn validate(n1: usize, n2: usize, x: &[Rational]) -> Result<(), SplitError> {
    if n1 == 0 {
        return Err(SplitError::EmptyClique);
    }
    if x.len() != n1 + n2 {
        return Err(SplitError::Dimension {
            got: x.len(),
            want: n1 + n2,
        });
    }
    for (k, v) in x.iter().enumerate() {
        if v.is_negative() || *v > Rational::one() {
            return Err(SplitError::OutOfBox {
                index: k + 1,
                value: v.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Interior,
    Zero,
    One,
}

/// A point pushed off the faces of the cube, plus what is needed to undo it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interiorized {
    pub x: Vec<Rational>,
    pub epsilon: Option<Rational>,
    pub boundary: Vec<Boundary>,
}

/// Moves `0` to `ε` and `1` to `1 - ε`, with `ε` the smallest positive gap
/// among `{0, 1, x_i, 1 - x_i}` divided by `4n²`.
pub fn interiorize(x: &[Rational]) -> Interiorized {
    let (zero, one) = (Rational::zero(), Rational::one());
    let boundary: Vec<Boundary> = x
        .iter()
        .map(|v| {
            if *v == zero {
                Boundary::Zero
            } else if *v == one {
                Boundary::One
            } else {
                Boundary::Interior
            }
        })
        .collect();
    if boundary.iter().all(|b| *b == Boundary::Interior) {
        return Interiorized {
            x: x.to_vec(),
            epsilon: None,
            boundary,
        };
    }
    let mut points: Vec<Rational> = vec![zero.clone(), one.clone()];
    for v in x {
        points.push(v.clone());
        points.push(&one - v);
    }
    points.sort();
    points.dedup();
    let gap = points
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .expect("0 and 1 are distinct");
    let n = x.len() as i64;
    let eps = gap / Rational::from_int(4 * n * n);
    let moved = x
        .iter()
        .zip(&boundary)
        .map(|(v, b)| match b {
            Boundary::Zero => eps.clone(),
            Boundary::One => &one - &eps,
            Boundary::Interior => v.clone(),
        })
        .collect();
    Interiorized {
        x: moved,
        epsilon: Some(eps),
        boundary,
    }
}

impl Interiorized {
    /// Replaces the sets of boundary coordinates by `∅` or `[0, 1)`.
    pub fn restore(&self, sets: Vec<IntervalSet>) -> Vec<IntervalSet> {
        sets.into_iter()
            .zip(&self.boundary)
            .map(|(s, b)| match b {
                Boundary::Interior => s,
                Boundary::Zero => IntervalSet::empty(),
                Boundary::One => IntervalSet::full(),
            })
            .collect()
    }
}

/// Sorts each side by decreasing value, ties by index. `perm[k]` is the
/// original 0-based index of sorted position `k`.
pub fn sort_split(n1: usize, x: &[Rational]) -> (Vec<Rational>, Vec<usize>) {
    let mut perm: Vec<usize> = (0..x.len()).collect();
    perm[..n1].sort_by(|&a, &b| x[b].cmp(&x[a]).then(a.cmp(&b)));
    perm[n1..].sort_by(|&a, &b| x[b].cmp(&x[a]).then(a.cmp(&b)));
    let sorted = perm.iter().map(|&k| x[k].clone()).collect();
    (sorted, perm)
}

/// One iteration of the greedy loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitStep {
    pub vertex: usize,
    pub p: usize,
    pub set: IntervalSet,
    /// `(a_0, ..., a_L)` after the step, ending in `0`.
    pub a: Vec<Rational>,
    /// `(A_1, ..., A_L)` after the step.
    pub blocks: Vec<Vec<usize>>,
}

/// The staircase `a`, the blocks `A_p`, and the step trace. Vertex `n + 1`
/// is the sentinel with value `0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitState {
    pub n1: usize,
    pub n2: usize,
    pub a: Vec<Rational>,
    pub blocks: Vec<BTreeSet<usize>>,
    pub trace: Vec<SplitStep>,
}

impl SplitState {
    /// `a_p`, reading `0` past the end.
    pub fn a_at(&self, p: usize) -> Rational {
        self.a.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// `A_p` for `p >= 1`.
    pub fn block(&self, p: usize) -> &BTreeSet<usize> {
        &self.blocks[p - 1]
    }

    fn snapshot(&self) -> (Vec<Rational>, Vec<Vec<usize>>) {
        (
            self.a.clone(),
            self.blocks.iter().map(|b| b.iter().copied().collect()).collect(),
        )
    }
}

/// The greedy construction on sorted, interior input.
pub fn construct_split(n1: usize, n2: usize, x: &[Rational]) -> Result<(Vec<IntervalSet>, SplitState), SplitError> {
    validate(n1, n2, x)?;
    let n = n1 + n2;
    let one = Rational::one();
    for (k, v) in x.iter().enumerate() {
        if !v.is_positive() || *v >= one {
            return Err(SplitError::NotInterior(k + 1));
        }
    }
    let sorted = |s: &[Rational]| s.windows(2).all(|w| w[0] >= w[1]);
    if !sorted(&x[..n1]) || !sorted(&x[n1..]) {
        return Err(SplitError::NotSorted);
    }

    let mut sets: Vec<IntervalSet> = vec![IntervalSet::empty(); n];
    for j in n1..n {
        sets[j] = IntervalSet::interval(Rational::zero(), x[j].clone());
    }
    let mut a = vec![one.clone()];
    a.extend(x[n1..].iter().cloned());
    a.push(Rational::zero());
    let mut blocks: Vec<BTreeSet<usize>> = (n1 + 1..=n + 1).map(|j| BTreeSet::from([j])).collect();
    let mut state = SplitState {
        n1,
        n2,
        a: vec![],
        blocks: vec![],
        trace: vec![],
    };

    for i in 1..=n1 {
        let xi = &x[i - 1];
        let p = (1..a.len())
            .find(|&k| &a[k] + xi < one)
            .expect("the last staircase entry is 0");
        let top = &a[p] + &a[p - 1] + xi - &one;
        let set = IntervalSet::make([(a[p - 1].clone(), one.clone()), (a[p].clone(), top.clone())])?;
        assert_eq!(set.measure(), *xi, "greedy set has the wrong measure");
        if p == 1 {
            a[1] += xi;
            blocks[0].insert(i);
        } else {
            a[p - 1] = top;
            let merged = blocks.remove(p - 1);
            blocks[p - 2].extend(merged);
            blocks[p - 2].insert(i);
            a.remove(p);
        }
        // keep a trailing zero; a fresh one carries an empty block
        if a.last().is_some_and(|v| v.is_positive()) {
            a.push(Rational::zero());
            blocks.push(BTreeSet::new());
        }
        assert!(a.windows(2).all(|w| w[0] >= w[1]), "staircase lost monotonicity");
        sets[i - 1] = set.clone();
        state.a = a.clone();
        state.blocks = blocks.clone();
        let (sa, sb) = state.snapshot();
        state.trace.push(SplitStep {
            vertex: i,
            p,
            set,
            a: sa,
            blocks: sb,
        });
    }
    state.a = a;
    state.blocks = blocks;
    Ok((sets, state))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SCase {
    /// `S = V_2 \ {j_1, ..., j_k, j*}`.
    DropStar,
    /// `S = V_2 \ {j_1, ..., j_k}`.
    KeepStar,
}

/// The quantities read off the final blocks, all in sorted coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SDerivation {
    pub k: usize,
    /// `j_p = max A_p` for `p = 1..=k`; may be the sentinel `n + 1` at `p = k`.
    pub j: Vec<usize>,
    pub p0: Option<usize>,
    pub j_star: Option<usize>,
    pub s: Vec<usize>,
    pub case: SCase,
    /// The case the rule picks; differs from `case` only when forced.
    pub rule_case: SCase,
    /// The ordering chain between the staircase and the values `x_{j_p}`.
    pub chain_holds: bool,
}

/// `S` with the case chosen by the rule on `p_0` and `A_1`.
pub fn derive_s(state: &SplitState, x: &[Rational]) -> SDerivation {
    derive_s_as(state, x, None)
}

/// `S` with the case forced to `forced` when given.
pub fn derive_s_as(state: &SplitState, x: &[Rational], forced: Option<SCase>) -> SDerivation {
    let (n1, n2) = (state.n1, state.n2);
    let n = n1 + n2;
    let in_v2 = |v: usize| v > n1 && v <= n;
    let k = state.blocks.iter().filter(|b| b.iter().any(|&v| in_v2(v))).count();
    let j: Vec<usize> = (1..=k)
        .map(|p| *state.block(p).iter().max().expect("nonempty"))
        .collect();
    let p0 = (1..=state.blocks.len()).find(|&p| state.block(p).len() > 1);
    let j_star = p0.and_then(|p| state.block(p).iter().copied().find(|&v| in_v2(v)));
    let first = state.blocks.first();
    let count = |pred: &dyn Fn(usize) -> bool| first.map_or(0, |b| b.iter().filter(|&&v| pred(v)).count());
    let a1_v2 = count(&|v| in_v2(v));
    let a1_v1 = count(&|v| v <= n1);
    let rule_case = match p0 {
        Some(p) if p >= 2 || a1_v2 == a1_v1 + 1 => SCase::DropStar,
        _ => SCase::KeepStar,
    };
    let case = forced.unwrap_or(rule_case);
    let mut removed: BTreeSet<usize> = j.iter().copied().collect();
    if case == SCase::DropStar {
        removed.extend(j_star);
    }
    let s: Vec<usize> = (n1 + 1..=n).filter(|v| !removed.contains(v)).collect();

    let xv = |v: usize| if v <= n { x[v - 1].clone() } else { Rational::zero() };
    let mut chain_holds = k == 0 || (state.a_at(k + 1).is_zero() && state.a_at(1) < Rational::one());
    if let Some(p0) = p0.filter(|&p| p <= k) {
        for p in 1..=k {
            let xj = xv(j[p - 1]);
            let ok = if p < p0 {
                xj == state.a_at(p)
            } else {
                state.a_at(p + 1) <= xj && xj <= state.a_at(p)
            };
            chain_holds &= ok;
        }
        // j* only sits between a_{p0} and a_{p0-1} when it is removed from S
        if let Some(js) = j_star.filter(|_| case == SCase::DropStar) {
            chain_holds &= state.a_at(p0) <= xv(js) && xv(js) <= state.a_at(p0 - 1);
        }
    }
    SDerivation {
        k,
        j,
        p0,
        j_star,
        s,
        case,
        rule_case,
        chain_holds,
    }
}

/// A maximal constant piece `[start, end)` of a height function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightPiece {
    pub start: Rational,
    pub end: Rational,
    pub value: usize,
}

/// `t ↦ |{i : t ∈ X_i}|` on `[0, 1)` as a step function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightFunction {
    pub pieces: Vec<HeightPiece>,
}

impl HeightFunction {
    pub fn of<'a>(sets: impl IntoIterator<Item = &'a IntervalSet>) -> Self {
        let sets: Vec<&IntervalSet> = sets.into_iter().collect();
        let mut cuts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
        for s in &sets {
            cuts.extend(s.endpoints());
        }
        cuts.sort();
        cuts.dedup();
        let mut pieces: Vec<HeightPiece> = Vec::new();
        for w in cuts.windows(2) {
            let value = sets.iter().filter(|s| s.contains(&w[0])).count();
            match pieces.last_mut() {
                Some(last) if last.value == value => last.end = w[1].clone(),
                _ => pieces.push(HeightPiece {
                    start: w[0].clone(),
                    end: w[1].clone(),
                    value,
                }),
            }
        }
        HeightFunction { pieces }
    }

    pub fn values(&self) -> BTreeSet<usize> {
        self.pieces.iter().map(|p| p.value).collect()
    }

    /// Interior points where the value changes.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces.iter().skip(1).map(|p| p.start.clone()).collect()
    }

    /// `∫ h`, which equals the total measure of the sets.
    pub fn integral(&self) -> Rational {
        self.pieces
            .iter()
            .map(|p| (&p.end - &p.start) * Rational::from_int(p.value as i64))
            .sum()
    }
}

/// Results of the three checks on `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SProperties {
    /// `|S| <= n1 - 1`.
    pub size_bound: bool,
    /// `μ(X_i ∩ X_j) = max(0, x_i + x_j - 1)` for `i ∈ V_1`, `j ∈ V_2 \ S`.
    pub small_intersections: bool,
    pub alpha: usize,
    pub height: HeightFunction,
    /// `h` takes values in `{α, α + 1}` only.
    pub two_values: bool,
}

impl SProperties {
    pub fn all_pass(&self) -> bool {
        self.size_bound && self.small_intersections && self.two_values
    }
}

pub fn check_s_properties(n1: usize, x: &[Rational], sets: &[IntervalSet], s: &[usize]) -> SProperties {
    let n = x.len();
    let in_s: BTreeSet<usize> = s.iter().copied().collect();
    let small_intersections = (1..=n1).all(|i| {
        (n1 + 1..=n).filter(|j| !in_s.contains(j)).all(|j| {
            sets[i - 1].intersect(&sets[j - 1]).measure() == (&x[i - 1] + &x[j - 1] - Rational::one()).pos_part()
        })
    });
    let members: Vec<usize> = (1..=n1).chain(s.iter().copied()).collect();
    let total: Rational = members.iter().map(|&v| &x[v - 1]).sum();
    let alpha = total.floor_i64().expect("small sum") as usize;
    let height = HeightFunction::of(members.iter().map(|&v| &sets[v - 1]));
    let two_values = height.values().iter().all(|&h| h == alpha || h == alpha + 1);
    SProperties {
        size_bound: s.len() < n1,
        small_intersections,
        alpha,
        height,
        two_values,
    }
}

/// `α·x(V_1∪S) - C(α+1, 2) - Σ_ℓ (ℓ-1) x_{s_ℓ} + Σ_{i∈V_1, j∈V_2\S} max(0, x_i+x_j-1)`
/// with `S` listed by decreasing value.
pub fn accounting_value(n1: usize, x: &[Rational], s: &[usize], alpha: usize) -> Rational {
    let n = x.len();
    let in_s: BTreeSet<usize> = s.iter().copied().collect();
    let mut s_sorted: Vec<usize> = s.to_vec();
    s_sorted.sort_by(|&a, &b| x[b - 1].cmp(&x[a - 1]).then(a.cmp(&b)));
    let total: Rational = (1..=n1).chain(s.iter().copied()).map(|v| &x[v - 1]).sum();
    let al = alpha as i64;
    let clique = Rational::from_int(al) * total - binom(al + 1, 2);
    let inside: Rational = s_sorted
        .iter()
        .enumerate()
        .map(|(l, &v)| Rational::from_int(l as i64) * &x[v - 1])
        .sum();
    let cross: Rational = (1..=n1)
        .flat_map(|i| (n1 + 1..=n).filter(|j| !in_s.contains(j)).map(move |j| (i, j)))
        .map(|(i, j)| (&x[i - 1] + &x[j - 1] - Rational::one()).pos_part())
        .sum();
    clique - inside + cross
}

/// The construction run on the interior coordinates, in sorted labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedRun {
    pub n1: usize,
    pub n2: usize,
    pub x: Vec<Rational>,
    /// Caller label (1-based) of each sorted vertex.
    pub vertices: Vec<usize>,
    pub state: SplitState,
    pub derivation: SDerivation,
    pub properties: SProperties,
    pub edge_sum: Rational,
    pub accounting: Rational,
}

impl ReducedRun {
    pub fn accounting_holds(&self) -> bool {
        self.accounting == self.edge_sum
    }

    pub fn checks_pass(&self) -> bool {
        self.derivation.chain_holds && self.properties.all_pass() && self.accounting_holds()
    }
}

/// Everything the split pipeline produces. `s` and `sets` use caller labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitCertificate {
    pub n1: usize,
    pub n2: usize,
    pub x: Vec<Rational>,
    pub boundary: Vec<Boundary>,
    /// Absent when no clique vertex is strictly inside `(0, 1)`.
    pub run: Option<ReducedRun>,
    pub s: Vec<usize>,
    pub sets: Vec<IntervalSet>,
    pub edge_sum: Rational,
}

impl SplitCertificate {
    pub fn internal_checks_pass(&self) -> bool {
        self.run.as_ref().is_none_or(ReducedRun::checks_pass)
    }
}

fn boundary_of(v: &Rational) -> Boundary {
    if v.is_zero() {
        Boundary::Zero
    } else if *v == Rational::one() {
        Boundary::One
    } else {
        Boundary::Interior
    }
}

/// Coordinates at `0` or `1` force `X_i = ∅` or `[0, 1)`; the construction
/// runs on the remaining vertices, which again form a complete split graph.
pub fn split_certificate(n1: usize, n2: usize, x: &[Rational]) -> Result<SplitCertificate, SplitError> {
    validate(n1, n2, x)?;
    let g = Graph::complete_split(n1, n2).map_err(|_| SplitError::EmptyClique)?;
    let boundary: Vec<Boundary> = x.iter().map(boundary_of).collect();
    let inner: Vec<usize> = (0..x.len()).filter(|&k| boundary[k] == Boundary::Interior).collect();
    let (left, right): (Vec<usize>, Vec<usize>) = inner.iter().partition(|&&k| k < n1);
    let (r1, r2) = (left.len(), right.len());

    let mut sets: Vec<IntervalSet> = x
        .iter()
        .zip(&boundary)
        .map(|(v, b)| match b {
            Boundary::Zero => IntervalSet::empty(),
            Boundary::One => IntervalSet::full(),
            Boundary::Interior => IntervalSet::interval(Rational::zero(), v.clone()),
        })
        .collect();
    let mut run = None;
    let mut s = Vec::new();
    if r1 > 0 {
        let local: Vec<Rational> = left.iter().chain(&right).map(|&k| x[k].clone()).collect();
        let (xs, perm) = sort_split(r1, &local);
        let vertices: Vec<usize> = perm
            .iter()
            .map(|&k| if k < r1 { left[k] } else { right[k - r1] } + 1)
            .collect();
        let (sorted_sets, state) = construct_split(r1, r2, &xs)?;
        let mut derivation = derive_s(&state, &xs);
        let mut properties = check_s_properties(r1, &xs, &sorted_sets, &derivation.s);
        if !(properties.all_pass() && derivation.chain_holds) {
            let other = match derivation.case {
                SCase::DropStar => SCase::KeepStar,
                SCase::KeepStar => SCase::DropStar,
            };
            let alt = derive_s_as(&state, &xs, Some(other));
            let alt_props = check_s_properties(r1, &xs, &sorted_sets, &alt.s);
            if alt_props.all_pass() && alt.chain_holds {
                derivation = alt;
                properties = alt_props;
            }
        }
        let accounting = accounting_value(r1, &xs, &derivation.s, properties.alpha);
        let reduced_graph = Graph::complete_split(r1, r2).expect("r1 > 0");
        let reduced_sum = edge_sum(&reduced_graph, &sorted_sets);
        for (k, set) in sorted_sets.into_iter().enumerate() {
            sets[vertices[k] - 1] = set;
        }
        s = derivation.s.iter().map(|&v| vertices[v - 1]).collect();
        s.sort();
        run = Some(ReducedRun {
            n1: r1,
            n2: r2,
            x: xs,
            vertices,
            state,
            derivation,
            properties,
            edge_sum: reduced_sum,
            accounting,
        });
    }
    let total = edge_sum(&g, &sets);
    Ok(SplitCertificate {
        n1,
        n2,
        x: x.to_vec(),
        boundary,
        run,
        s,
        sets,
        edge_sum: total,
    })
}
