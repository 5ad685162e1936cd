//! Checking interval certificates against LP lower bounds and the
//! envelope oracle, plus the odd five-wheel counterexample.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::envelope::{envelope_value, upper_boundary, EnvelopeError};
use crate::graph::{Family, Graph, GraphError, GraphJson};
use crate::interval::IntervalSet;
use crate::lp::{feasible_point, lb, optimize, Feasibility, LpError};
use crate::rational::Rational;
use crate::relax::{
    default_relaxation, mccormick, odd_wheel_system, split_relaxation, triangle_relaxation, wheel_extra_inequalities,
    Assignment, LinearSystem, RelaxError, Var,
};
use crate::split::{SCase, SplitCertificate};
use crate::wheel::WheelCertificate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("certificate has {sets} sets for {n} vertices")]
    SetCount { sets: usize, n: usize },
    #[error("x has {got} coordinates, the graph has {want} vertices")]
    Dimension { got: usize, want: usize },
    #[error("relaxation {0} does not fit this graph")]
    Mismatch(String),
    #[error(transparent)]
    Relax(#[from] RelaxError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `Σ_{ij ∈ E} μ(X_i ∩ X_j)`.
pub fn edge_sum(g: &Graph, sets: &[IntervalSet]) -> Rational {
    g.edges()
        .iter()
        .map(|&(i, j)| sets[i - 1].intersect(&sets[j - 1]).measure())
        .sum()
}

/// Names a relaxation that can be rebuilt from the graph alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelaxationId {
    Mccormick,
    MccormickFull,
    Triangle,
    Split,
    OddWheel,
    Default,
}

impl RelaxationId {
    pub fn build(self, g: &Graph) -> Result<LinearSystem, VerifyError> {
        Ok(match self {
            RelaxationId::Mccormick => mccormick(g, false),
            RelaxationId::MccormickFull => mccormick(g, true),
            RelaxationId::Triangle => triangle_relaxation(g),
            RelaxationId::Split => match g.family() {
                Family::CompleteSplit { n1, n2 } => split_relaxation(n1, n2),
                _ => return Err(VerifyError::Mismatch("split".into())),
            },
            RelaxationId::OddWheel => match g.family() {
                Family::Wheel { m } => odd_wheel_system(m)?,
                _ => return Err(VerifyError::Mismatch("odd_wheel".into())),
            },
            RelaxationId::Default => default_relaxation(g),
        })
    }

    pub fn parse(name: &str) -> Option<Self> {
        serde_json::from_value(serde_json::Value::String(name.to_string())).ok()
    }
}

/// Construction details carried along for inspection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    Wheel {
        tstar: Vec<usize>,
        phi: Rational,
        z: Vec<Rational>,
    },
    Split {
        a_trace: Vec<Vec<Rational>>,
        #[serde(rename = "A_trace")]
        blocks_trace: Vec<Vec<Vec<usize>>>,
        #[serde(rename = "S")]
        s: Vec<usize>,
        alpha: usize,
        case: Option<SCase>,
    },
    Manual,
}

fn ser_graph<S: Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    g.to_json().serialize(s)
}

fn de_graph<'de, D: Deserializer<'de>>(d: D) -> Result<Graph, D::Error> {
    let js = GraphJson::deserialize(d)?;
    Graph::from_json(&js).map_err(serde::de::Error::custom)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(serialize_with = "ser_graph", deserialize_with = "de_graph")]
    pub graph: Graph,
    pub x: Vec<Rational>,
    pub sets: Vec<IntervalSet>,
    pub claimed_lb: Rational,
    pub relaxation: RelaxationId,
    pub construction: Construction,
}

impl Certificate {
    pub fn from_wheel(cert: &WheelCertificate) -> Certificate {
        let m = cert.x.len() - 1;
        Certificate {
            graph: Graph::wheel(m).expect("pipeline checked the size"),
            x: cert.x.clone(),
            sets: cert.intervals.clone(),
            claimed_lb: cert.phi.clone(),
            relaxation: RelaxationId::Triangle,
            construction: Construction::Wheel {
                tstar: cert.tstar.clone(),
                phi: cert.phi.clone(),
                z: cert.z.clone(),
            },
        }
    }

    pub fn from_split(cert: &SplitCertificate) -> Certificate {
        let trace = cert.run.as_ref().map(|r| r.state.trace.as_slice()).unwrap_or(&[]);
        Certificate {
            graph: Graph::complete_split(cert.n1, cert.n2).expect("pipeline checked n1"),
            x: cert.x.clone(),
            sets: cert.sets.clone(),
            claimed_lb: cert.edge_sum.clone(),
            relaxation: RelaxationId::Split,
            construction: Construction::Split {
                a_trace: trace.iter().map(|s| s.a.clone()).collect(),
                blocks_trace: trace.iter().map(|s| s.blocks.clone()).collect(),
                s: cert.s.clone(),
                alpha: cert.run.as_ref().map_or(0, |r| r.properties.alpha),
                case: cert.run.as_ref().map(|r| r.derivation.case),
            },
        }
    }
}

/// Outcome of [`check_certificate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    /// Vertices whose set has the wrong measure.
    pub measure_failures: Vec<usize>,
    pub edge_sum: Rational,
    pub lb: Rational,
    pub claimed_lb: Rational,
    /// `LB >= edge sum`: the certificate is valid.
    pub valid: bool,
    /// `LB == edge sum`.
    pub equality: bool,
    pub claim_matches: bool,
    /// Family tags of the rows tight at the LP optimum.
    pub tight_families: Vec<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.measure_failures.is_empty() && self.valid
    }
}

pub fn check_certificate(cert: &Certificate) -> Result<CertificateReport, VerifyError> {
    let g = &cert.graph;
    if cert.sets.len() != g.n() {
        return Err(VerifyError::SetCount {
            sets: cert.sets.len(),
            n: g.n(),
        });
    }
    if cert.x.len() != g.n() {
        return Err(VerifyError::Dimension {
            got: cert.x.len(),
            want: g.n(),
        });
    }
    let measure_failures = cert
        .sets
        .iter()
        .zip(&cert.x)
        .enumerate()
        .filter(|(_, (s, xi))| s.measure() != **xi)
        .map(|(k, _)| k + 1)
        .collect();
    let sum = edge_sum(g, &cert.sets);
    let sys = cert.relaxation.build(g)?;
    let opt = lb(&sys, g, &cert.x)?;
    let mut tight_families: Vec<String> = opt.tight_rows.iter().map(|&k| sys.rows[k].family.tag()).collect();
    tight_families.sort();
    tight_families.dedup();
    Ok(CertificateReport {
        measure_failures,
        valid: opt.value >= sum,
        equality: opt.value == sum,
        claim_matches: cert.claimed_lb == opt.value,
        edge_sum: sum,
        lb: opt.value,
        claimed_lb: cert.claimed_lb.clone(),
        tight_families,
    })
}

/// Per-edge outcome of the upper-bound hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeMax {
    pub edge: (usize, usize),
    /// `None` when `y_ij` is unbounded over the relaxation.
    pub max: Option<Rational>,
    pub bound: Rational,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreconditionReport {
    pub edges: Vec<EdgeMax>,
    /// Hypothesis (1): every edge variable is at most `min(x_i, x_j)`.
    pub upper_bounds_hold: bool,
    /// Hypothesis (2): the point with `y_ij = min(x_i, x_j)` on edges is feasible.
    pub min_point_feasible: bool,
    /// Rows violated by that point, with their slack.
    pub violated_rows: Vec<(String, Rational)>,
}

impl PreconditionReport {
    pub fn passed(&self) -> bool {
        self.upper_bounds_hold && self.min_point_feasible
    }
}

/// The two hypotheses on `P` needed for interval certificates to apply.
/// Non-edge pairs of the point in (2) take `max(0, x_i + x_j - 1)`.
pub fn check_certificate_preconditions(
    p: &LinearSystem,
    g: &Graph,
    x: &[Rational],
) -> Result<PreconditionReport, VerifyError> {
    if x.len() != g.n() {
        return Err(VerifyError::Dimension {
            got: x.len(),
            want: g.n(),
        });
    }
    let mut edges = Vec::new();
    for &(i, j) in g.edges() {
        let bound = Rational::min_of(&x[i - 1], &x[j - 1]);
        let max = match optimize(p, Some(x), &[(Var::y(i, j), Rational::one())], crate::lp::Sense::Max) {
            Ok(opt) => Some(opt.value),
            Err(LpError::Unbounded) => None,
            Err(e) => return Err(e.into()),
        };
        let ok = max.as_ref().is_some_and(|v| *v <= bound);
        edges.push(EdgeMax {
            edge: (i, j),
            max,
            bound,
            ok,
        });
    }
    let mut point = Assignment {
        x: x.to_vec(),
        ..Default::default()
    };
    for &(i, j) in &p.pairs {
        let value = if g.has_edge(i, j) {
            Rational::min_of(&x[i - 1], &x[j - 1])
        } else {
            (&x[i - 1] + &x[j - 1] - Rational::one()).pos_part()
        };
        point.y.insert((i, j), value);
    }
    let violated_rows: Vec<(String, Rational)> = p
        .violations(&point)
        .into_iter()
        .map(|(k, slack)| (p.rows[k].note.clone(), slack))
        .collect();
    Ok(PreconditionReport {
        upper_bounds_hold: edges.iter().all(|e| e.ok),
        edges,
        min_point_feasible: violated_rows.is_empty(),
        violated_rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ExactnessVerdict {
    ExactAtX { value: Rational },
    Gap { lb: Rational, envelope: Rational },
}

impl ExactnessVerdict {
    pub fn is_exact(&self) -> bool {
        matches!(self, ExactnessVerdict::ExactAtX { .. })
    }
}

/// Compares the relaxation's lower bound at `x` with the true envelope.
pub fn exactness_verdict(p: &LinearSystem, g: &Graph, x: &[Rational]) -> Result<ExactnessVerdict, VerifyError> {
    let bound = lb(p, g, x)?.value;
    let env = envelope_value(g, x)?;
    Ok(if bound == env {
        ExactnessVerdict::ExactAtX { value: env }
    } else {
        ExactnessVerdict::Gap {
            lb: bound,
            envelope: env,
        }
    })
}

/// `max Σ_E y` over `P` at `x`, which should equal `Σ min(x_i, x_j)`.
pub fn upper_value(p: &LinearSystem, g: &Graph, x: &[Rational]) -> Result<Rational, VerifyError> {
    let objective: Vec<(Var, Rational)> = g
        .edges()
        .iter()
        .map(|&(i, j)| (Var::y(i, j), Rational::one()))
        .collect();
    Ok(optimize(p, Some(x), &objective, crate::lp::Sense::Max)?.value)
}

/// One of the two five-wheel points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiveWheelPoint {
    pub x: Vec<Rational>,
    /// `(x, y(E))`.
    pub projection: Vec<Rational>,
    pub triangle_rows_hold: bool,
    pub violated: String,
    /// How far `y(E)` falls short of the violated row.
    pub violation: Rational,
    pub other_row_holds: bool,
    pub lb_with_extras: Rational,
    pub envelope: Rational,
    pub upper: Rational,
}

impl FiveWheelPoint {
    pub fn passed(&self) -> bool {
        self.triangle_rows_hold
            && self.other_row_holds
            && self.violation.is_positive()
            && self.lb_with_extras == self.envelope
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiveWheelReport {
    pub left: FiveWheelPoint,
    pub right: FiveWheelPoint,
}

impl FiveWheelReport {
    pub fn passed(&self) -> bool {
        self.left.passed() && self.right.passed()
    }
}

fn five_wheel_point(
    rim: Rational,
    hub: Rational,
    spoke: Rational,
    rim_y: Rational,
    chord: Rational,
    violated: usize,
) -> FiveWheelPoint {
    let m = 5;
    let g = Graph::wheel(m).expect("five-wheel");
    let mut x = vec![rim; m];
    x.push(hub);
    let mut point = Assignment {
        x: x.clone(),
        ..Default::default()
    };
    for i in 1..=6 {
        for j in (i + 1)..=6 {
            let value = if j == 6 {
                spoke.clone()
            } else if g.has_edge(i, j) {
                rim_y.clone()
            } else {
                chord.clone()
            };
            point.y.insert((i, j), value);
        }
    }
    let y_edges: Rational = g.edges().iter().map(|&(i, j)| point.get(Var::y(i, j))).sum();
    let mut projection = x.clone();
    projection.push(y_edges);
    let tri = triangle_relaxation(&g);
    let extra = wheel_extra_inequalities(m).expect("odd wheel");
    let (bad, good) = if violated == 1 {
        (&extra[0], &extra[1])
    } else {
        (&extra[1], &extra[0])
    };
    let sys = odd_wheel_system(m).expect("odd wheel");
    let lb_with_extras = lb(&sys, &g, &x).expect("bounded").value;
    FiveWheelPoint {
        projection,
        triangle_rows_hold: tri.is_satisfied(&point),
        violated: bad.family.tag(),
        violation: -bad.slack(&point),
        other_row_holds: good.is_satisfied(&point),
        lb_with_extras,
        envelope: envelope_value(&g, &x).expect("small graph"),
        upper: upper_boundary(&g, &x),
        x,
    }
}

/// The two points showing that triangle rows alone miss the five-wheel hull.
pub fn five_wheel_counterexample() -> FiveWheelReport {
    let r = Rational::new;
    FiveWheelReport {
        left: five_wheel_point(r(1, 3), r(2, 3), r(1, 6), r(0, 1), r(1, 6), 1),
        right: five_wheel_point(r(2, 3), r(1, 3), r(1, 6), r(1, 3), r(1, 2), 2),
    }
}

/// Whether the system has a point over `x` at all.
pub fn is_feasible_at(p: &LinearSystem, x: &[Rational]) -> Result<bool, VerifyError> {
    Ok(matches!(feasible_point(p, Some(x))?, Feasibility::Feasible(_)))
}
