//! Ground truth for `X(f)`: the lower envelope as an LP over all `2^n`
//! hypercube vertices, and the closed-form upper boundary.

use thiserror::Error;

use crate::graph::Graph;
use crate::lp::{solve, Cmp, LpProblem, LpStatus, Sense, VarBound};
use crate::rational::Rational;

/// Largest `n` accepted without an explicit override.
pub const MAX_ORACLE_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("n = {n} exceeds the oracle guard of {max} vertices")]
    TooLarge { n: usize, max: usize },
    #[error("x has {got} coordinates, the graph has {want} vertices")]
    Dimension { got: usize, want: usize },
    #[error("coordinate x{index} = {value} lies outside [0, 1]")]
    OutOfBox { index: usize, value: Rational },
}

/// `f(v)` at a 0/1 vector: the number of edges with both ends set.
pub fn f_value(g: &Graph, v: &[bool]) -> Rational {
    let count = g.edges().iter().filter(|&&(i, j)| v[i - 1] && v[j - 1]).count();
    Rational::from_int(count as i64)
}

/// `f(x) = Σ x_i x_j` at an arbitrary point.
pub fn f_at(g: &Graph, x: &[Rational]) -> Rational {
    g.edges().iter().map(|&(i, j)| &x[i - 1] * &x[j - 1]).sum()
}

/// `max{z : (x, z) ∈ X(f)} = Σ min(x_i, x_j)`.
pub fn upper_boundary(g: &Graph, x: &[Rational]) -> Rational {
    g.edges()
        .iter()
        .map(|&(i, j)| Rational::min_of(&x[i - 1], &x[j - 1]))
        .sum()
}

/// The lower envelope value together with an optimal convex combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub value: Rational,
    /// `(vertex bitmask, weight)` pairs with positive weight; bit `i - 1` is `v_i`.
    pub combination: Vec<(u64, Rational)>,
}

fn check_point(g: &Graph, x: &[Rational]) -> Result<(), EnvelopeError> {
    if x.len() != g.n() {
        return Err(EnvelopeError::Dimension {
            got: x.len(),
            want: g.n(),
        });
    }
    for (k, v) in x.iter().enumerate() {
        if v.is_negative() || *v > Rational::one() {
            return Err(EnvelopeError::OutOfBox {
                index: k + 1,
                value: v.clone(),
            });
        }
    }
    Ok(())
}

/// `min{z : (x, z) ∈ X(f)}`, subject to the size guard.
pub fn envelope_value(g: &Graph, x: &[Rational]) -> Result<Rational, EnvelopeError> {
    envelope(g, x, false).map(|e| e.value)
}

/// Vertex bitmask of the staircase through `x`: the top-`k` coordinates set.
fn staircase(x: &[Rational]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].cmp(&x[a]));
    let mut masks = vec![0u64];
    let mut mask = 0u64;
    for i in order {
        mask |= 1 << i;
        masks.push(mask);
    }
    masks
}

/// Full envelope computation; `allow_large` lifts the size guard.
///
/// Column generation over the vertices: the staircase vertices start a
/// feasible master, and columns with negative reduced cost are added until
/// none remain, at which point the master duals certify optimality over all
/// `2^n` vertices.
pub fn envelope(g: &Graph, x: &[Rational], allow_large: bool) -> Result<Envelope, EnvelopeError> {
    let n = g.n();
    if n > MAX_ORACLE_VERTICES && !allow_large {
        return Err(EnvelopeError::TooLarge {
            n,
            max: MAX_ORACLE_VERTICES,
        });
    }
    check_point(g, x)?;
    let adjacency: Vec<u64> = (1..=n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << (u - 1)))
        .collect();
    let f_mask = |mask: u64| -> i64 {
        let twice: u32 = (0..n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (adjacency[b] & mask).count_ones())
            .sum();
        i64::from(twice / 2)
    };
    let mut columns = staircase(x);
    columns.sort_unstable();
    columns.dedup();
    loop {
        let cost: Vec<Rational> = columns.iter().map(|&m| Rational::from_int(f_mask(m))).collect();
        let mut p = LpProblem::new(Sense::Min, cost, vec![VarBound::NonNeg; columns.len()]);
        for (i, xi) in x.iter().enumerate() {
            let coeffs = columns
                .iter()
                .enumerate()
                .filter(|(_, m)| *m >> i & 1 == 1)
                .map(|(c, _)| (c, Rational::one()))
                .collect();
            p.add_row(coeffs, Cmp::Eq, xi.clone());
        }
        p.add_row(
            (0..columns.len()).map(|c| (c, Rational::one())).collect(),
            Cmp::Eq,
            Rational::one(),
        );
        let res = solve(&p);
        assert_eq!(res.status, LpStatus::Optimal, "the staircase columns are feasible");
        let (lambda, mu) = res.duals.split_at(n);
        let mut entering: Vec<(Rational, u64)> = (0..1u64 << n)
            .filter_map(|mask| {
                let priced: Rational = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| lambda[b].clone()).sum();
                let reduced = Rational::from_int(f_mask(mask)) - priced - &mu[0];
                reduced.is_negative().then_some((reduced, mask))
            })
            .collect();
        if entering.is_empty() {
            let combination = res
                .point
                .iter()
                .zip(&columns)
                .filter(|(w, _)| w.is_positive())
                .map(|(w, &m)| (m, w.clone()))
                .collect();
            return Ok(Envelope {
                value: res.value.expect("optimal"),
                combination,
            });
        }
        entering.sort();
        columns.extend(entering.into_iter().take(2 * n + 2).map(|(_, m)| m));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn xs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| r(s)).collect()
    }

    #[test]
    fn f_value_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(f_value(&k3, &[true; 3]), Rational::from_int(3));
        let w5 = Graph::wheel(5).unwrap();
        // three spokes plus rim edge (5, 1), since the rim has odd length
        assert_eq!(
            f_value(&w5, &[true, false, true, false, true, true]),
            Rational::from_int(4)
        );
        assert_eq!(f_value(&w5, &[false; 6]), Rational::zero());
    }

    #[test]
    fn envelope_examples() {
        let k3 = Graph::complete(3);
        let half = xs(&["1/2", "1/2", "1/2"]);
        let env = envelope(&k3, &half, false).unwrap();
        assert_eq!(env.value, r("1/2"));
        let total: Rational = env.combination.iter().map(|(_, w)| w.clone()).sum();
        assert_eq!(total, Rational::one());

        let w4 = Graph::wheel(4).unwrap();
        assert_eq!(envelope_value(&w4, &vec![r("1/2"); 5]).unwrap(), Rational::one());

        let x = xs(&["1", "0", "1", "1", "0", "1"]);
        let w5 = Graph::wheel(5).unwrap();
        let bits: Vec<bool> = x.iter().map(|v| v.is_positive()).collect();
        assert_eq!(envelope_value(&w5, &x).unwrap(), f_value(&w5, &bits));
    }

    #[test]
    fn upper_boundary_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(upper_boundary(&k3, &vec![r("1/2"); 3]), r("3/2"));
        let w5 = Graph::wheel(5).unwrap();
        assert_eq!(upper_boundary(&w5, &vec![Rational::one(); 6]), Rational::from_int(10));
        let left = xs(&["1/3", "1/3", "1/3", "1/3", "1/3", "2/3"]);
        assert_eq!(upper_boundary(&w5, &left), r("10/3"));
    }

    #[test]
    fn guards() {
        let g = Graph::complete(17);
        assert_eq!(
            envelope_value(&g, &vec![Rational::zero(); 17]),
            Err(EnvelopeError::TooLarge { n: 17, max: 16 })
        );
        let k3 = Graph::complete(3);
        assert!(matches!(
            envelope_value(&k3, &xs(&["2", "0", "0"])),
            Err(EnvelopeError::OutOfBox { .. })
        ));
        assert!(matches!(
            envelope_value(&k3, &xs(&["0"])),
            Err(EnvelopeError::Dimension { .. })
        ));
    }

    use proptest::prelude::*;

    fn unit_point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec(0i64..=12, n).prop_map(|v| v.into_iter().map(|k| Rational::new(k, 12)).collect())
    }

    /// The envelope LP with every vertex as a column.
    fn dense_envelope(g: &Graph, x: &[Rational]) -> Rational {
        let n = g.n();
        let cols = 1usize << n;
        let bits = |mask: usize| -> Vec<bool> { (0..n).map(|b| mask >> b & 1 == 1).collect() };
        let cost: Vec<Rational> = (0..cols).map(|m| f_value(g, &bits(m))).collect();
        let mut p = LpProblem::new(Sense::Min, cost, vec![VarBound::NonNeg; cols]);
        for (i, xi) in x.iter().enumerate() {
            let coeffs = (0..cols)
                .filter(|m| m >> i & 1 == 1)
                .map(|m| (m, Rational::one()))
                .collect();
            p.add_row(coeffs, Cmp::Eq, xi.clone());
        }
        p.add_row(
            (0..cols).map(|m| (m, Rational::one())).collect(),
            Cmp::Eq,
            Rational::one(),
        );
        solve(&p).value.unwrap()
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (2usize..=6).prop_flat_map(|n| {
            prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |keep| {
                let pairs = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)));
                Graph::new(n, pairs.zip(keep).filter(|(_, k)| *k).map(|(e, _)| e)).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn column_generation_matches_dense((g, x) in small_graph().prop_flat_map(|g| {
            let n = g.n();
            (Just(g), unit_point(n))
        })) {
            let env = envelope(&g, &x, false).unwrap();
            prop_assert_eq!(&env.value, &dense_envelope(&g, &x));
            let mut point = vec![Rational::zero(); g.n()];
            let mut value = Rational::zero();
            for (mask, w) in &env.combination {
                let bits: Vec<bool> = (0..g.n()).map(|b| mask >> b & 1 == 1).collect();
                value += w * f_value(&g, &bits);
                for (k, bit) in bits.iter().enumerate() {
                    if *bit {
                        point[k] += w;
                    }
                }
            }
            prop_assert_eq!(value, env.value);
            prop_assert_eq!(point, x);
        }

        #[test]
        fn envelope_sandwich_and_convexity(a in unit_point(5), b in unit_point(5)) {
            let g = Graph::wheel(4).unwrap();
            let ea = envelope_value(&g, &a).unwrap();
            let eb = envelope_value(&g, &b).unwrap();
            prop_assert!(ea <= f_at(&g, &a));
            prop_assert!(f_at(&g, &a) <= upper_boundary(&g, &a));
            let mid: Vec<Rational> = a.iter().zip(&b).map(|(p, q)| (p + q) * Rational::new(1, 2)).collect();
            let em = envelope_value(&g, &mid).unwrap();
            prop_assert!(em * Rational::from_int(2) <= ea + eb);
        }
    }
}
