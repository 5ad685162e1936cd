//! Inequality systems over `x_1..x_n` and product variables `y_ij`.
//!
//! Builders cover the McCormick relaxation (over the edges or over every
//! pair), the triangle relaxation, clique inequalities, the complete split
//! graph system and the two extra odd-wheel inequalities. Every row carries a
//! family tag and a short note naming its parameters, so LP reports can say
//! which inequality was tight.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Family, Graph};
use crate::rational::{binom, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelaxError {
    #[error("clique inequality needs |W| >= 2, got {0}")]
    CliqueTooSmall(usize),
    #[error("alpha = {alpha} outside 1..={max}")]
    AlphaOutOfRange { alpha: usize, max: usize },
    #[error("odd-wheel inequalities need an odd rim size >= 3, got {0}")]
    NotOddWheel(usize),
    #[error("row references undeclared pair ({0}, {1})")]
    UndeclaredPair(usize, usize),
}

/// A variable of a [`LinearSystem`]. Pairs are stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    Y(usize, usize),
    /// Auxiliary variables (used by the wheel `z`-system).
    Z(usize),
}

impl Var {
    pub fn y(i: usize, j: usize) -> Var {
        Var::Y(i.min(j), i.max(j))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i, j) => write!(f, "y{i}_{j}"),
            Var::Z(i) => write!(f, "z{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Le,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowFamily {
    Box,
    McCormickLb,
    McCormickUb,
    Triangle,
    Clique { alpha: usize },
    WheelExtra1,
    WheelExtra2,
    ZSystem(ZRow),
}

/// The six row kinds of the wheel `z`-system. "Covered" means `i ∈ T ∪ (T + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ZRow {
    /// `z_i >= m_i`, covered `i`.
    LowerCovered,
    /// `z_i >= M_i`, uncovered `i`.
    LowerUncovered,
    /// `z_i <= M_i`.
    Upper,
    /// `z_i + z_{i+1} >= M'_i`, `i ∈ T`.
    PairLowerInT,
    /// `z_i + z_{i+1} >= m'_i`, `i ∉ T`.
    PairLower,
    /// `z_i + z_{i+1} <= M'_i`, `i ∉ T`.
    PairUpper,
}

impl ZRow {
    fn tag(self) -> &'static str {
        match self {
            ZRow::LowerCovered => "z_lower_covered",
            ZRow::LowerUncovered => "z_lower_uncovered",
            ZRow::Upper => "z_upper",
            ZRow::PairLowerInT => "z_pair_lower_in_t",
            ZRow::PairLower => "z_pair_lower",
            ZRow::PairUpper => "z_pair_upper",
        }
    }
}

impl RowFamily {
    pub fn tag(&self) -> String {
        match self {
            RowFamily::Box => "box".into(),
            RowFamily::McCormickLb => "mccormick_lb".into(),
            RowFamily::McCormickUb => "mccormick_ub".into(),
            RowFamily::Triangle => "triangle".into(),
            RowFamily::Clique { alpha } => format!("clique(alpha={alpha})"),
            RowFamily::WheelExtra1 => "wheel_extra_1".into(),
            RowFamily::WheelExtra2 => "wheel_extra_2".into(),
            RowFamily::ZSystem(k) => k.tag().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(Var, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
    pub family: RowFamily,
    pub note: String,
}

impl Row {
    pub fn new(
        coeffs: Vec<(Var, Rational)>,
        relation: Relation,
        rhs: Rational,
        family: RowFamily,
        note: impl Into<String>,
    ) -> Row {
        // merge repeated variables and drop zero coefficients
        let mut merged: BTreeMap<Var, Rational> = BTreeMap::new();
        for (v, c) in coeffs {
            *merged.entry(v).or_insert_with(Rational::zero) += c;
        }
        Row {
            coeffs: merged.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            relation,
            rhs,
            family,
            note: note.into(),
        }
    }

    pub fn lhs(&self, point: &Assignment) -> Rational {
        self.coeffs.iter().map(|(v, c)| c * point.get(*v)).sum()
    }

    /// Nonnegative iff the row holds at `point`.
    pub fn slack(&self, point: &Assignment) -> Rational {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => &self.rhs - lhs,
            Relation::Ge => lhs - &self.rhs,
        }
    }

    pub fn is_satisfied(&self, point: &Assignment) -> bool {
        !self.slack(point).is_negative()
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|(v, c)| format!("{c}*{v}")).collect();
        write!(
            f,
            "[{}] {} {} {}",
            self.family.tag(),
            terms.join(" + "),
            self.relation.symbol(),
            self.rhs
        )
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Row", 5)?;
        st.serialize_field("family", &self.family.tag())?;
        st.serialize_field("note", &self.note)?;
        let coeffs: Vec<(String, &Rational)> = self.coeffs.iter().map(|(v, c)| (v.to_string(), c)).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("relation", self.relation.symbol())?;
        st.serialize_field("rhs", &self.rhs)?;
        st.end()
    }
}

/// A full assignment of `x`, `y` and `z` values. Missing entries read as 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub x: Vec<Rational>,
    pub y: BTreeMap<(usize, usize), Rational>,
    pub z: Vec<Rational>,
}

impl Assignment {
    pub fn get(&self, v: Var) -> Rational {
        match v {
            Var::X(i) => self.x.get(i - 1).cloned().unwrap_or_default(),
            Var::Y(i, j) => self.y.get(&(i, j)).cloned().unwrap_or_default(),
            Var::Z(i) => self.z.get(i - 1).cloned().unwrap_or_default(),
        }
    }

    /// The integral lift `y_ij = x_i x_j` on the given pairs.
    pub fn product_lift(x: &[Rational], pairs: &[(usize, usize)]) -> Assignment {
        let y = pairs.iter().map(|&(i, j)| ((i, j), &x[i - 1] * &x[j - 1])).collect();
        Assignment {
            x: x.to_vec(),
            y,
            z: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearSystem {
    pub nx: usize,
    pub pairs: Vec<(usize, usize)>,
    pub nz: usize,
    pub name: String,
    pub rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(name: impl Into<String>, nx: usize, pairs: Vec<(usize, usize)>) -> Self {
        LinearSystem {
            nx,
            pairs,
            nz: 0,
            name: name.into(),
            rows: Vec::new(),
        }
    }

    pub fn has_pair(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i.min(j), i.max(j)))
    }

    pub fn push(&mut self, row: Row) -> Result<(), RelaxError> {
        for (v, _) in &row.coeffs {
            if let Var::Y(i, j) = v {
                if !self.has_pair(*i, *j) {
                    return Err(RelaxError::UndeclaredPair(*i, *j));
                }
            }
        }
        self.rows.push(row);
        Ok(())
    }

    /// Appends rows, panicking if any references an undeclared pair.
    pub fn extend_rows(&mut self, rows: impl IntoIterator<Item = Row>) {
        for row in rows {
            self.push(row).expect("row over declared pairs");
        }
    }

    pub fn with_rows(mut self, name: impl Into<String>, rows: impl IntoIterator<Item = Row>) -> Self {
        self.name = name.into();
        self.extend_rows(rows);
        self
    }

    pub fn count_family(&self, pred: impl Fn(&RowFamily) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.family)).count()
    }

    /// Rows violated at `point`, with their (negative) slacks.
    pub fn violations(&self, point: &Assignment) -> Vec<(usize, Rational)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(k, r)| {
                let s = r.slack(point);
                s.is_negative().then_some((k, s))
            })
            .collect()
    }

    pub fn is_satisfied(&self, point: &Assignment) -> bool {
        self.rows.iter().all(|r| r.is_satisfied(point))
    }
}

fn one() -> Rational {
    Rational::one()
}

fn box_rows(n: usize) -> Vec<Row> {
    (1..=n)
        .flat_map(|i| {
            [
                Row::new(
                    vec![(Var::X(i), one())],
                    Relation::Ge,
                    Rational::zero(),
                    RowFamily::Box,
                    format!("x{i}>=0"),
                ),
                Row::new(
                    vec![(Var::X(i), one())],
                    Relation::Le,
                    one(),
                    RowFamily::Box,
                    format!("x{i}<=1"),
                ),
            ]
        })
        .collect()
}

fn nonneg_row(i: usize, j: usize) -> Row {
    Row::new(
        vec![(Var::y(i, j), one())],
        Relation::Ge,
        Rational::zero(),
        RowFamily::McCormickLb,
        format!("y{i}_{j}>=0"),
    )
}

fn product_lb_row(i: usize, j: usize) -> Row {
    Row::new(
        vec![(Var::X(i), one()), (Var::X(j), one()), (Var::y(i, j), -one())],
        Relation::Le,
        one(),
        RowFamily::McCormickLb,
        format!("x{i}+x{j}-y{i}_{j}<=1"),
    )
}

fn ub_rows(i: usize, j: usize) -> [Row; 2] {
    [
        Row::new(
            vec![(Var::y(i, j), one()), (Var::X(i), -one())],
            Relation::Le,
            Rational::zero(),
            RowFamily::McCormickUb,
            format!("y{i}_{j}<=x{i}"),
        ),
        Row::new(
            vec![(Var::y(i, j), one()), (Var::X(j), -one())],
            Relation::Le,
            Rational::zero(),
            RowFamily::McCormickUb,
            format!("y{i}_{j}<=x{j}"),
        ),
    ]
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j))).collect()
}

/// McCormick relaxation over the edges of `g` (`full = false`) or over all
/// pairs of vertices (`full = true`), plus the box `0 <= x <= 1`.
pub fn mccormick(g: &Graph, full: bool) -> LinearSystem {
    let pairs = if full { all_pairs(g.n()) } else { g.edges().to_vec() };
    let name = if full { "mccormick_full" } else { "mccormick" };
    let mut sys = LinearSystem::new(name, g.n(), pairs.clone());
    let mut rows = box_rows(g.n());
    for &(i, j) in &pairs {
        rows.push(nonneg_row(i, j));
        rows.push(product_lb_row(i, j));
    }
    for &(i, j) in &pairs {
        rows.extend(ub_rows(i, j));
    }
    sys.extend_rows(rows);
    sys
}

pub fn triangle_row(i: usize, j: usize, k: usize) -> Row {
    Row::new(
        vec![
            (Var::y(i, j), one()),
            (Var::y(i, k), one()),
            (Var::y(j, k), one()),
            (Var::X(i), -one()),
            (Var::X(j), -one()),
            (Var::X(k), -one()),
        ],
        Relation::Ge,
        -one(),
        RowFamily::Triangle,
        format!("triangle({i},{j},{k})"),
    )
}

/// McCormick over the edges plus one triangle row per triangle of `g`.
pub fn triangle_relaxation(g: &Graph) -> LinearSystem {
    let rows: Vec<Row> = g
        .triangles()
        .into_iter()
        .map(|(i, j, k)| triangle_row(i, j, k))
        .collect();
    mccormick(g, false).with_rows("triangle", rows)
}

/// `y(E*(W)) >= alpha * x(W) - C(alpha + 1, 2)`.
pub fn clique_inequality(w: &[usize], alpha: usize) -> Result<Row, RelaxError> {
    let mut w = w.to_vec();
    w.sort_unstable();
    w.dedup();
    if w.len() < 2 {
        return Err(RelaxError::CliqueTooSmall(w.len()));
    }
    if alpha < 1 || alpha > w.len() - 1 {
        return Err(RelaxError::AlphaOutOfRange {
            alpha,
            max: w.len() - 1,
        });
    }
    let a = Rational::from_int(alpha as i64);
    let mut coeffs = Vec::new();
    for (p, &i) in w.iter().enumerate() {
        for &j in &w[p + 1..] {
            coeffs.push((Var::y(i, j), one()));
        }
        coeffs.push((Var::X(i), -a.clone()));
    }
    let members: Vec<String> = w.iter().map(|v| v.to_string()).collect();
    Ok(Row::new(
        coeffs,
        Relation::Ge,
        -binom(alpha as i64 + 1, 2),
        RowFamily::Clique { alpha },
        format!("clique(W={{{}}},alpha={alpha})", members.join(",")),
    ))
}

/// The complete split graph system: `y_ij >= x_i + x_j - 1` across the two
/// sides, `0 <= y_ij <= min(x_i, x_j)` for every pair, and the clique rows on
/// `V1 ∪ S` for every `S ⊆ V2` with `|S| <= n1 - 1` and `1 <= alpha <= n1 - 1`.
pub fn split_relaxation(n1: usize, n2: usize) -> LinearSystem {
    let n = n1 + n2;
    let pairs = all_pairs(n);
    let mut sys = LinearSystem::new("split", n, pairs.clone());
    let mut rows = box_rows(n);
    for &(i, j) in &pairs {
        rows.push(nonneg_row(i, j));
        if i <= n1 && j > n1 {
            rows.push(product_lb_row(i, j));
        }
    }
    for &(i, j) in &pairs {
        rows.extend(ub_rows(i, j));
    }
    let v2: Vec<usize> = (n1 + 1..=n).collect();
    for s in subsets_up_to(&v2, n1.saturating_sub(1)) {
        let mut w: Vec<usize> = (1..=n1).collect();
        w.extend(&s);
        for alpha in 1..n1 {
            rows.push(clique_inequality(&w, alpha).expect("alpha in range"));
        }
    }
    sys.extend_rows(rows);
    sys
}

/// All subsets of `items` with at most `max` elements, by size then lexicographically.
pub fn subsets_up_to(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for size in 1..=max.min(items.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&k| items[k]).collect());
            let mut p = size;
            while p > 0 && idx[p - 1] == items.len() - size + p - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            idx[p - 1] += 1;
            for q in p..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    out
}

/// The two extra lower bounds for the odd wheel with `m` rim vertices
/// (hub `n = m + 1`):
/// `y(E) >= (m-1)/2 x_n + Σ x_i - (m-1)/2` and
/// `y(E) >= (m+1)/2 x_n + 2 Σ x_i - m`.
pub fn wheel_extra_inequalities(m: usize) -> Result<[Row; 2], RelaxError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(RelaxError::NotOddWheel(m));
    }
    let g = Graph::wheel(m).expect("m >= 3");
    let hub = m + 1;
    let build = |hub_coef: i64, rim_coef: i64, constant: i64, family: RowFamily| {
        let mut coeffs: Vec<(Var, Rational)> = g.edges().iter().map(|&(i, j)| (Var::y(i, j), one())).collect();
        coeffs.push((Var::X(hub), Rational::from_int(-hub_coef)));
        coeffs.extend((1..=m).map(|i| (Var::X(i), Rational::from_int(-rim_coef))));
        let note = format!("y(E)>={hub_coef}x{hub}+{rim_coef}sum(x)-{constant}");
        Row::new(coeffs, Relation::Ge, Rational::from_int(-constant), family, note)
    };
    let half_down = (m as i64 - 1) / 2;
    let half_up = (m as i64 + 1) / 2;
    Ok([
        build(half_down, 1, half_down, RowFamily::WheelExtra1),
        build(half_up, 2, m as i64, RowFamily::WheelExtra2),
    ])
}

/// Triangle relaxation of an odd wheel with both extra inequalities.
pub fn odd_wheel_system(m: usize) -> Result<LinearSystem, RelaxError> {
    let extra = wheel_extra_inequalities(m)?;
    let g = Graph::wheel(m).expect("m >= 3");
    Ok(triangle_relaxation(&g).with_rows("triangle+wheel_extra", extra))
}

/// The natural relaxation for a graph's family: triangle relaxation for
/// wheels, the split system for complete split graphs, McCormick otherwise.
pub fn default_relaxation(g: &Graph) -> LinearSystem {
    match g.family() {
        Family::Wheel { .. } => triangle_relaxation(g),
        Family::CompleteSplit { n1, n2 } => split_relaxation(n1, n2),
        Family::Generic => mccormick(g, false),
    }
}
