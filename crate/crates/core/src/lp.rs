//! Exact linear programming.
//!
//! [`solve`] is a dense two-phase primal simplex over rationals with Bland's
//! rule. Every answer comes with a certificate that is checked before it is
//! returned: an optimal point plus dual multipliers, or a Farkas combination
//! of rows proving infeasibility.
//!
//! [`optimize`], [`lb`] and [`feasible_point`] solve LPs stated as a
//! [`LinearSystem`] with the `x` coordinates substituted.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::Graph;
use crate::rational::Rational;
use crate::relax::{Assignment, LinearSystem, Relation, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("x has {got} coordinates, the system has {want}")]
    Dimension { got: usize, want: usize },
    #[error("edge ({0}, {1}) has no y-variable in the system")]
    MissingPair(usize, usize),
    #[error("objective mentions {0}, which the system does not declare")]
    UnknownVariable(Var),
    #[error("system is infeasible at the given point")]
    Infeasible { witness: Vec<Rational> },
    #[error("objective is unbounded")]
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    NonNeg,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

impl LpRow {
    fn lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, c)| c * &point[*j]).sum()
    }

    /// The row as `g x <= h`; equality rows keep their orientation.
    fn le_form(&self) -> (Vec<(usize, Rational)>, Rational) {
        match self.cmp {
            Cmp::Ge => (self.coeffs.iter().map(|(j, c)| (*j, -c)).collect(), -&self.rhs),
            Cmp::Le | Cmp::Eq => (self.coeffs.clone(), self.rhs.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub bounds: Vec<VarBound>,
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<Rational>, bounds: Vec<VarBound>) -> Self {
        assert_eq!(objective.len(), bounds.len(), "one bound per variable");
        LpProblem {
            sense,
            objective,
            bounds,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, cmp: Cmp, rhs: Rational) {
        self.rows.push(LpRow { coeffs, cmp, rhs });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: Option<Rational>,
    /// Optimal point; empty otherwise.
    pub point: Vec<Rational>,
    /// One multiplier per row with `value = Σ duals_r rhs_r`; empty unless optimal.
    pub duals: Vec<Rational>,
    /// Rows holding with equality at the optimum.
    pub tight_rows: Vec<usize>,
    /// Infeasibility witness: multipliers on the rows written as `g x <= h`
    /// (nonnegative except on equality rows) with `Σ w h = -1` and `Σ w g`
    /// zero on free and nonnegative on bounded variables.
    pub farkas: Vec<Rational>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
    trace: Option<Vec<String>>,
}

impl Tableau {
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (k, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    d[k] -= cb * a;
                }
            }
        }
        d
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).map(|(&b, v)| &cost[b] * v).sum()
    }

    fn pivot(&mut self, r: usize, q: usize, d: &mut [Rational]) {
        let mut prow = std::mem::take(&mut self.rows[r]);
        let p = prow[q].clone();
        if p != Rational::one() {
            for v in prow.iter_mut().filter(|v| !v.is_zero()) {
                *v /= &p;
            }
            self.rhs[r] /= &p;
        }
        let nz: Vec<usize> = (0..self.ncols).filter(|&k| !prow[k].is_zero()).collect();
        let br = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][q].is_zero() {
                continue;
            }
            let f = self.rows[i][q].clone();
            let row = &mut self.rows[i];
            for &k in &nz {
                row[k] -= &f * &prow[k];
            }
            self.rhs[i] -= &f * &br;
        }
        let f = d[q].clone();
        if !f.is_zero() {
            for &k in &nz {
                d[k] -= &f * &prow[k];
            }
        }
        self.rows[r] = prow;
        if let Some(t) = self.trace.as_mut() {
            t.push(format!("pivot row {r} col {q}: col {} leaves", self.basis[r]));
        }
        self.basis[r] = q;
        self.pivots += 1;
    }

    /// Bland's rule until optimal (`true`) or unbounded (`false`).
    fn run(&mut self, d: &mut [Rational], allowed: &[bool]) -> bool {
        loop {
            let Some(q) = (0..self.ncols).find(|&j| allowed[j] && d[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, q, d);
        }
    }
}

/// Solves `problem` exactly.
pub fn solve(problem: &LpProblem) -> LpResult {
    solve_inner(problem, None).0
}

/// Like [`solve`], also returning a textual pivot log.
pub fn solve_traced(problem: &LpProblem) -> (LpResult, Vec<String>) {
    let (res, trace) = solve_inner(problem, Some(Vec::new()));
    (res, trace.unwrap_or_default())
}

fn solve_inner(problem: &LpProblem, trace: Option<Vec<String>>) -> (LpResult, Option<Vec<String>>) {
    let nv = problem.num_vars();
    let m = problem.rows.len();

    // structural columns: one per nonnegative variable, two per free one
    let mut plus = Vec::with_capacity(nv);
    let mut minus = Vec::with_capacity(nv);
    let mut ncols = 0;
    for b in &problem.bounds {
        plus.push(ncols);
        ncols += 1;
        if *b == VarBound::Free {
            minus.push(Some(ncols));
            ncols += 1;
        } else {
            minus.push(None);
        }
    }
    let nstruct = ncols;

    // rows scaled so the right-hand side is nonnegative
    let sigma: Vec<Rational> = problem
        .rows
        .iter()
        .map(|r| {
            if r.rhs.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            }
        })
        .collect();
    let cmps: Vec<Cmp> = problem
        .rows
        .iter()
        .zip(&sigma)
        .map(|(r, s)| match (r.cmp, s.is_negative()) {
            (Cmp::Le, true) => Cmp::Ge,
            (Cmp::Ge, true) => Cmp::Le,
            (c, _) => c,
        })
        .collect();

    let mut unit_col = vec![0; m];
    let mut is_art = vec![false; nstruct];
    let mut surplus = vec![None; m];
    for r in 0..m {
        if cmps[r] == Cmp::Ge {
            surplus[r] = Some(ncols);
            is_art.push(false);
            ncols += 1;
        }
        unit_col[r] = ncols;
        is_art.push(cmps[r] != Cmp::Le);
        ncols += 1;
    }

    let mut rows = vec![vec![Rational::zero(); ncols]; m];
    let mut rhs = Vec::with_capacity(m);
    for (r, row) in problem.rows.iter().enumerate() {
        for (j, c) in &row.coeffs {
            let c = c * &sigma[r];
            if let Some(mj) = minus[*j] {
                rows[r][mj] -= &c;
            }
            rows[r][plus[*j]] += c;
        }
        if let Some(s) = surplus[r] {
            rows[r][s] = -Rational::one();
        }
        rows[r][unit_col[r]] = Rational::one();
        rhs.push(&row.rhs * &sigma[r]);
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: unit_col.clone(),
        ncols,
        pivots: 0,
        trace,
    };

    let empty = |status, tab: &Tableau| LpResult {
        status,
        value: None,
        point: vec![],
        duals: vec![],
        tight_rows: vec![],
        farkas: vec![],
        pivots: tab.pivots,
    };

    // phase 1
    if is_art.iter().any(|&a| a) {
        let c1: Vec<Rational> = is_art
            .iter()
            .map(|&a| if a { Rational::one() } else { Rational::zero() })
            .collect();
        let mut d = tab.reduced_costs(&c1);
        let all = vec![true; ncols];
        tab.run(&mut d, &all);
        if tab.objective(&c1).is_positive() {
            let mut w: Vec<Rational> = (0..m)
                .map(|r| {
                    let pi = &c1[unit_col[r]] - &d[unit_col[r]];
                    let lam = -(pi * &sigma[r]);
                    if problem.rows[r].cmp == Cmp::Ge {
                        -lam
                    } else {
                        lam
                    }
                })
                .collect();
            let h: Rational = problem.rows.iter().zip(&w).map(|(row, wr)| wr * &row.le_form().1).sum();
            let scale = -h.recip().expect("phase-1 witness has nonzero rhs");
            for v in &mut w {
                *v *= &scale;
            }
            let mut res = empty(LpStatus::Infeasible, &tab);
            res.farkas = w;
            if let Err(e) = check_farkas(problem, &res.farkas) {
                panic!("simplex produced a bad infeasibility witness: {e}");
            }
            return (res, tab.trace);
        }
        // push zero-level artificials out of the basis where possible
        let mut dummy = vec![Rational::zero(); ncols];
        for r in 0..m {
            if is_art[tab.basis[r]] {
                if let Some(j) = (0..ncols).find(|&j| !is_art[j] && !tab.rows[r][j].is_zero()) {
                    tab.pivot(r, j, &mut dummy);
                }
            }
        }
    }

    // phase 2 (minimize; a max problem minimizes the negated objective)
    let flip = if problem.sense == Sense::Max {
        -Rational::one()
    } else {
        Rational::one()
    };
    let mut c2 = vec![Rational::zero(); ncols];
    for j in 0..nv {
        let c = &problem.objective[j] * &flip;
        if let Some(mj) = minus[j] {
            c2[mj] = -&c;
        }
        c2[plus[j]] = c;
    }
    let mut d = tab.reduced_costs(&c2);
    let allowed: Vec<bool> = is_art.iter().map(|a| !a).collect();
    if !tab.run(&mut d, &allowed) {
        return (empty(LpStatus::Unbounded, &tab), tab.trace);
    }

    let mut colval = vec![Rational::zero(); ncols];
    for (r, &b) in tab.basis.iter().enumerate() {
        colval[b] = tab.rhs[r].clone();
    }
    let point: Vec<Rational> = (0..nv)
        .map(|j| match minus[j] {
            Some(mj) => &colval[plus[j]] - &colval[mj],
            None => colval[plus[j]].clone(),
        })
        .collect();
    let value: Rational = problem.objective.iter().zip(&point).map(|(c, v)| c * v).sum();
    let duals: Vec<Rational> = (0..m).map(|r| -(&d[unit_col[r]] * &sigma[r]) * &flip).collect();
    let tight_rows = (0..m)
        .filter(|&r| problem.rows[r].lhs(&point) == problem.rows[r].rhs)
        .collect();
    let res = LpResult {
        status: LpStatus::Optimal,
        value: Some(value),
        point,
        duals,
        tight_rows,
        farkas: vec![],
        pivots: tab.pivots,
    };
    if let Err(e) = check_optimal(problem, &res) {
        panic!("simplex produced an unverifiable optimum: {e}");
    }
    (res, tab.trace)
}

/// Verifies an infeasibility witness against the problem data alone.
pub fn check_farkas(problem: &LpProblem, w: &[Rational]) -> Result<(), String> {
    if w.len() != problem.rows.len() {
        return Err("witness length differs from row count".into());
    }
    let mut g = vec![Rational::zero(); problem.num_vars()];
    let mut h = Rational::zero();
    for (r, (row, wr)) in problem.rows.iter().zip(w).enumerate() {
        if row.cmp != Cmp::Eq && wr.is_negative() {
            return Err(format!("negative multiplier on inequality row {r}"));
        }
        let (coeffs, rhs) = row.le_form();
        for (j, c) in coeffs {
            g[j] += wr * c;
        }
        h += wr * rhs;
    }
    for (j, gj) in g.iter().enumerate() {
        let ok = match problem.bounds[j] {
            VarBound::Free => gj.is_zero(),
            VarBound::NonNeg => !gj.is_negative(),
        };
        if !ok {
            return Err(format!("combined coefficient {gj} on variable {j}"));
        }
    }
    if !h.is_negative() {
        return Err(format!("combined right-hand side {h} is not negative"));
    }
    Ok(())
}

/// Verifies primal feasibility, the objective value, and dual optimality.
pub fn check_optimal(problem: &LpProblem, res: &LpResult) -> Result<(), String> {
    let value = res.value.as_ref().ok_or("no value")?;
    let x = &res.point;
    if x.len() != problem.num_vars() || res.duals.len() != problem.rows.len() {
        return Err("dimension mismatch".into());
    }
    for (j, b) in problem.bounds.iter().enumerate() {
        if *b == VarBound::NonNeg && x[j].is_negative() {
            return Err(format!("variable {j} = {} violates its bound", x[j]));
        }
    }
    for (r, row) in problem.rows.iter().enumerate() {
        let lhs = row.lhs(x);
        let ok = match row.cmp {
            Cmp::Le => lhs <= row.rhs,
            Cmp::Ge => lhs >= row.rhs,
            Cmp::Eq => lhs == row.rhs,
        };
        if !ok {
            return Err(format!("row {r} violated: {lhs} vs {}", row.rhs));
        }
    }
    let cx: Rational = problem.objective.iter().zip(x).map(|(c, v)| c * v).sum();
    if &cx != value {
        return Err(format!("objective {cx} differs from reported {value}"));
    }
    // a max problem is checked as the min of the negated objective
    let flip = if problem.sense == Sense::Max {
        -Rational::one()
    } else {
        Rational::one()
    };
    let mut reduced: Vec<Rational> = problem.objective.iter().map(|c| c * &flip).collect();
    let mut by = Rational::zero();
    for (r, (row, pi)) in problem.rows.iter().zip(&res.duals).enumerate() {
        let pi = pi * &flip;
        let ok = match row.cmp {
            Cmp::Le => !pi.is_positive(),
            Cmp::Ge => !pi.is_negative(),
            Cmp::Eq => true,
        };
        if !ok {
            return Err(format!("dual {pi} on row {r} has the wrong sign"));
        }
        for (j, c) in &row.coeffs {
            reduced[*j] -= &pi * c;
        }
        by += &pi * &row.rhs;
    }
    for (j, rj) in reduced.iter().enumerate() {
        let ok = match problem.bounds[j] {
            VarBound::Free => rj.is_zero(),
            VarBound::NonNeg => !rj.is_negative(),
        };
        if !ok {
            return Err(format!("reduced cost {rj} on variable {j}"));
        }
    }
    if by * &flip != *value {
        return Err("dual objective differs from primal".into());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowUse {
    Lp(usize),
    /// A sign bound on one variable, folded into its column.
    Bound {
        var: usize,
        primary: bool,
    },
    Constant,
}

/// A [`LinearSystem`] with `x` optionally fixed, as an [`LpProblem`].
struct SystemLp<'a> {
    sys: &'a LinearSystem,
    x: Option<&'a [Rational]>,
    vars: Vec<Var>,
    /// Substituted coefficients and right-hand side per system row.
    reduced: Vec<(Vec<(usize, Rational)>, Rational)>,
    uses: Vec<RowUse>,
    bound_row: Vec<Option<usize>>,
    problem: LpProblem,
}

fn substitute(
    sys: &LinearSystem,
    x: Option<&[Rational]>,
    index: &BTreeMap<Var, usize>,
) -> Vec<(Vec<(usize, Rational)>, Rational)> {
    sys.rows
        .iter()
        .map(|row| {
            let mut rhs = row.rhs.clone();
            let mut coeffs = Vec::new();
            for (v, c) in &row.coeffs {
                match (v, x) {
                    (Var::X(i), Some(x)) => rhs -= c * &x[i - 1],
                    _ => coeffs.push((index[v], c.clone())),
                }
            }
            (coeffs, rhs)
        })
        .collect()
}

impl<'a> SystemLp<'a> {
    fn new(
        sys: &'a LinearSystem,
        x: Option<&'a [Rational]>,
        objective: &[(Var, Rational)],
        sense: Sense,
    ) -> Result<Self, LpError> {
        if let Some(x) = x {
            if x.len() != sys.nx {
                return Err(LpError::Dimension {
                    got: x.len(),
                    want: sys.nx,
                });
            }
        }
        let mut vars = Vec::new();
        if x.is_none() {
            vars.extend((1..=sys.nx).map(Var::X));
        }
        vars.extend(sys.pairs.iter().map(|&(i, j)| Var::Y(i, j)));
        vars.extend((1..=sys.nz).map(Var::Z));
        let index: BTreeMap<Var, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let reduced = substitute(sys, x, &index);

        let nv = vars.len();
        let mut bounds = vec![VarBound::Free; nv];
        let mut bound_row = vec![None; nv];
        let mut uses = Vec::with_capacity(reduced.len());
        let mut lp_rows = Vec::new();
        for (r, (coeffs, rhs)) in reduced.iter().enumerate() {
            let rel = sys.rows[r].relation;
            let sign_bound = match coeffs.as_slice() {
                [(j, c)] if rhs.is_zero() => {
                    let lower = (rel == Relation::Ge) == c.is_positive();
                    lower.then_some(*j)
                }
                _ => None,
            };
            let u = if coeffs.is_empty() {
                RowUse::Constant
            } else if let Some(j) = sign_bound {
                bounds[j] = VarBound::NonNeg;
                let primary = bound_row[j].is_none();
                if primary {
                    bound_row[j] = Some(r);
                }
                RowUse::Bound { var: j, primary }
            } else {
                lp_rows.push(LpRow {
                    coeffs: coeffs.clone(),
                    cmp: match rel {
                        Relation::Le => Cmp::Le,
                        Relation::Ge => Cmp::Ge,
                    },
                    rhs: rhs.clone(),
                });
                RowUse::Lp(lp_rows.len() - 1)
            };
            uses.push(u);
        }

        let mut obj = vec![Rational::zero(); nv];
        for (v, c) in objective {
            match (v, x) {
                (Var::X(_), Some(_)) => {}
                _ => {
                    let j = *index.get(v).ok_or(LpError::UnknownVariable(*v))?;
                    obj[j] += c;
                }
            }
        }
        let mut problem = LpProblem::new(sense, obj, bounds);
        problem.rows = lp_rows;
        Ok(SystemLp {
            sys,
            x,
            vars,
            reduced,
            uses,
            bound_row,
            problem,
        })
    }

    fn objective_offset(&self, objective: &[(Var, Rational)]) -> Rational {
        match self.x {
            Some(x) => objective
                .iter()
                .filter_map(|(v, c)| match v {
                    Var::X(i) => Some(c * &x[i - 1]),
                    _ => None,
                })
                .sum(),
            None => Rational::zero(),
        }
    }

    fn constant_violation(&self) -> Option<usize> {
        (0..self.uses.len()).find(|&r| {
            self.uses[r] == RowUse::Constant && {
                let rhs = &self.reduced[r].1;
                match self.sys.rows[r].relation {
                    Relation::Le => rhs.is_negative(),
                    Relation::Ge => rhs.is_positive(),
                }
            }
        })
    }

    fn assignment(&self, point: &[Rational]) -> Assignment {
        let mut a = Assignment {
            x: self
                .x
                .map(<[Rational]>::to_vec)
                .unwrap_or_else(|| vec![Rational::zero(); self.sys.nx]),
            y: BTreeMap::new(),
            z: vec![Rational::zero(); self.sys.nz],
        };
        for (v, val) in self.vars.iter().zip(point) {
            match *v {
                Var::X(i) => a.x[i - 1] = val.clone(),
                Var::Y(i, j) => {
                    a.y.insert((i, j), val.clone());
                }
                Var::Z(i) => a.z[i - 1] = val.clone(),
            }
        }
        a
    }

    /// Lifts an LP-level witness to one over all system rows whose combined
    /// coefficients vanish exactly.
    fn lift_witness(&self, lp_w: &[Rational]) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); self.uses.len()];
        let mut g = vec![Rational::zero(); self.vars.len()];
        for (r, u) in self.uses.iter().enumerate() {
            if let RowUse::Lp(k) = u {
                w[r] = lp_w[*k].clone();
                let (coeffs, _) = self.problem.rows[*k].le_form();
                for (j, c) in coeffs {
                    g[j] += &lp_w[*k] * c;
                }
            }
        }
        for (j, gj) in g.iter().enumerate() {
            if gj.is_zero() {
                continue;
            }
            let r = self.bound_row[j].expect("positive residue only on bounded variables");
            let c = &self.reduced[r].0[0].1;
            // the bound row in <= form has coefficient -|c| on variable j
            w[r] = gj / c.abs();
        }
        w
    }
}

/// An optimum of an LP over a [`LinearSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemOptimum {
    pub value: Rational,
    pub point: Assignment,
    /// One multiplier per system row (see [`LpResult::duals`]).
    pub duals: Vec<Rational>,
    /// System rows holding with equality at `point`.
    pub tight_rows: Vec<usize>,
    pub pivots: usize,
}

/// Optimizes a linear objective over `sys` with `x` fixed (or free when `None`).
pub fn optimize(
    sys: &LinearSystem,
    x: Option<&[Rational]>,
    objective: &[(Var, Rational)],
    sense: Sense,
) -> Result<SystemOptimum, LpError> {
    let slp = SystemLp::new(sys, x, objective, sense)?;
    if let Some(r) = slp.constant_violation() {
        return Err(LpError::Infeasible {
            witness: constant_witness(&slp, r),
        });
    }
    let res = solve(&slp.problem);
    match res.status {
        LpStatus::Infeasible => Err(LpError::Infeasible {
            witness: slp.lift_witness(&res.farkas),
        }),
        LpStatus::Unbounded => Err(LpError::Unbounded),
        LpStatus::Optimal => {
            let point = slp.assignment(&res.point);
            // reduced costs price the folded sign bounds
            let mut reduced: Vec<Rational> = slp.problem.objective.clone();
            for (row, pi) in slp.problem.rows.iter().zip(&res.duals) {
                for (j, c) in &row.coeffs {
                    reduced[*j] -= pi * c;
                }
            }
            let duals = slp
                .uses
                .iter()
                .enumerate()
                .map(|(r, u)| match u {
                    RowUse::Lp(k) => res.duals[*k].clone(),
                    RowUse::Bound { var, primary: true } => &reduced[*var] / &slp.reduced[r].0[0].1,
                    _ => Rational::zero(),
                })
                .collect();
            let tight_rows = sys
                .rows
                .iter()
                .enumerate()
                .filter(|(_, row)| row.slack(&point).is_zero())
                .map(|(r, _)| r)
                .collect();
            Ok(SystemOptimum {
                value: res.value.expect("optimal") + slp.objective_offset(objective),
                point,
                duals,
                tight_rows,
                pivots: res.pivots,
            })
        }
    }
}

fn constant_witness(slp: &SystemLp<'_>, r: usize) -> Vec<Rational> {
    let mut w = vec![Rational::zero(); slp.uses.len()];
    w[r] = slp.reduced[r].1.abs().recip().expect("violated constant row");
    w
}

/// `LB_P(x) = min Σ_{ij ∈ E} y_ij` over `P` with `x` fixed.
pub fn lb(p: &LinearSystem, g: &Graph, x: &[Rational]) -> Result<SystemOptimum, LpError> {
    for &(i, j) in g.edges() {
        if !p.has_pair(i, j) {
            return Err(LpError::MissingPair(i, j));
        }
    }
    let objective: Vec<(Var, Rational)> = g
        .edges()
        .iter()
        .map(|&(i, j)| (Var::Y(i, j), Rational::one()))
        .collect();
    optimize(p, Some(x), &objective, Sense::Min)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Assignment),
    /// Nonnegative multipliers on the system rows (written as `g <= h`) whose
    /// combination reads `0 <= -1`.
    Infeasible(Vec<Rational>),
}

/// A point of `sys` with `x` fixed (or free), or a proof that none exists.
pub fn feasible_point(sys: &LinearSystem, x: Option<&[Rational]>) -> Result<Feasibility, LpError> {
    match optimize(sys, x, &[], Sense::Min) {
        Ok(opt) => Ok(Feasibility::Feasible(opt.point)),
        Err(LpError::Infeasible { witness }) => Ok(Feasibility::Infeasible(witness)),
        Err(e) => Err(e),
    }
}

/// Checks a system-level infeasibility witness directly from the rows.
pub fn check_infeasibility_witness(sys: &LinearSystem, x: Option<&[Rational]>, w: &[Rational]) -> bool {
    if w.len() != sys.rows.len() || w.iter().any(Rational::is_negative) {
        return false;
    }
    let mut g: BTreeMap<Var, Rational> = BTreeMap::new();
    let mut h = Rational::zero();
    for (row, wr) in sys.rows.iter().zip(w) {
        let sign = match row.relation {
            Relation::Le => Rational::one(),
            Relation::Ge => -Rational::one(),
        };
        let m = wr * &sign;
        let mut rhs = row.rhs.clone();
        for (v, c) in &row.coeffs {
            match (v, x) {
                (Var::X(i), Some(x)) => rhs -= c * &x[i - 1],
                _ => *g.entry(*v).or_insert_with(Rational::zero) += &m * c,
            }
        }
        h += m * rhs;
    }
    g.values().all(Rational::is_zero) && h.is_negative()
}
