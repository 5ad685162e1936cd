//! Graphs on the vertex set `{1, ..., n}` and the two families with explicit
//! certificates: wheels (rim cycle `1..=m` plus hub `m + 1`) and complete split
//! graphs (clique `1..=n1` joined to the independent set `n1+1..=n1+n2`).
//!
//! Vertices are 1-based throughout the crate.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a wheel needs at least 3 rim vertices, got {0}")]
    WheelTooSmall(usize),
    #[error("a complete split graph needs a nonempty clique")]
    EmptyClique,
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge ({0}, {1}) has an endpoint outside 1..={2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph declares family {family} but its edges do not match")]
    FamilyMismatch { family: String },
    #[error("bad family parameters: {0}")]
    BadParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Wheel with `m` rim vertices (vertex count `m + 1`).
    Wheel {
        m: usize,
    },
    CompleteSplit {
        n1: usize,
        n2: usize,
    },
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    family: Family,
}

impl Graph {
    /// A graph from an edge list; pairs are oriented as `(min, max)` and sorted.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a, b));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(GraphError::EndpointOutOfRange(a, b, n));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Graph {
            n,
            edges: seen.into_iter().collect(),
            family: Family::Generic,
        })
    }

    pub fn wheel(m: usize) -> Result<Self, GraphError> {
        if m < 3 {
            return Err(GraphError::WheelTooSmall(m));
        }
        let hub = m + 1;
        let mut edges: Vec<(usize, usize)> = (1..=m).map(|i| (i, rim_successor(i, m))).collect();
        edges.extend((1..=m).map(|i| (i, hub)));
        let mut g = Graph::new(hub, edges)?;
        g.family = Family::Wheel { m };
        Ok(g)
    }

    pub fn complete_split(n1: usize, n2: usize) -> Result<Self, GraphError> {
        if n1 == 0 {
            return Err(GraphError::EmptyClique);
        }
        let n = n1 + n2;
        let mut edges = Vec::new();
        for i in 1..=n1 {
            for j in (i + 1)..=n {
                edges.push((i, j));
            }
        }
        let mut g = Graph::new(n, edges)?;
        g.family = Family::CompleteSplit { n1, n2 };
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)));
        Graph::new(n, edges).expect("complete graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// All triangles `(i, j, k)` with `i < j < k`, in lexicographic order.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let adj = self.adjacency();
        let mut out = Vec::new();
        for &(i, j) in &self.edges {
            for k in (j + 1)..=self.n {
                if adj[i][k] && adj[j][k] {
                    out.push((i, j, k));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n + 1]; self.n + 1];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        adj
    }

    /// BFS 2-coloring, or an odd closed walk witnessing non-bipartiteness.
    pub fn bipartition(&self) -> Bipartition {
        let adj: Vec<Vec<usize>> = (0..=self.n)
            .map(|v| if v == 0 { vec![] } else { self.neighbors(v) })
            .collect();
        let mut color: Vec<Option<u8>> = vec![None; self.n + 1];
        let mut parent = vec![0usize; self.n + 1];
        for root in 1..=self.n {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &v in &adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(1 - cu);
                            parent[v] = u;
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => {
                            return Bipartition::OddCycle(odd_cycle(&parent, root, u, v));
                        }
                        _ => {}
                    }
                }
            }
        }
        Bipartition::Bipartite(color.into_iter().skip(1).map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.bipartition(), Bipartition::Bipartite(_))
    }

    pub fn to_json(&self) -> GraphJson {
        let (family, params) = match self.family {
            Family::Wheel { m } => ("wheel", vec![m]),
            Family::CompleteSplit { n1, n2 } => ("complete_split", vec![n1, n2]),
            Family::Generic => ("generic", vec![]),
        };
        GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            family: family.to_string(),
            params,
        }
    }

    pub fn from_json(js: &GraphJson) -> Result<Self, GraphError> {
        let mut g = Graph::new(js.n, js.edges.iter().map(|e| (e[0], e[1])))?;
        let expected = match js.family.as_str() {
            "generic" => return Ok(g),
            "wheel" => match js.params.as_slice() {
                [m] => Graph::wheel(*m)?,
                _ => return Err(GraphError::BadParams("wheel takes [m]".into())),
            },
            "complete_split" => match js.params.as_slice() {
                [n1, n2] => Graph::complete_split(*n1, *n2)?,
                _ => return Err(GraphError::BadParams("complete_split takes [n1, n2]".into())),
            },
            other => return Err(GraphError::BadParams(format!("unknown family {other:?}"))),
        };
        if expected.n != g.n || expected.edges != g.edges {
            return Err(GraphError::FamilyMismatch {
                family: js.family.clone(),
            });
        }
        g.family = expected.family;
        Ok(g)
    }
}

fn odd_cycle(parent: &[usize], root: usize, u: usize, v: usize) -> Vec<usize> {
    let path = |mut w: usize| {
        let mut p = vec![w];
        while w != root {
            w = parent[w];
            p.push(w);
        }
        p
    };
    let pu = path(u);
    let pv = path(v);
    // strip the common tail above the lowest common ancestor
    let (mut i, mut j) = (pu.len(), pv.len());
    while i > 1 && j > 1 && pu[i - 2] == pv[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut cycle: Vec<usize> = pu[..i].to_vec();
    cycle.extend(pv[..j - 1].iter().rev());
    cycle
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    /// Color (0 or 1) of each vertex `1..=n`.
    Bipartite(Vec<u8>),
    /// Vertices of an odd cycle, in order.
    OddCycle(Vec<usize>),
}

/// Rim successor on the cycle `1..=m`: `i mod m + 1`.
pub fn rim_successor(i: usize, m: usize) -> usize {
    i % m + 1
}

/// Rim predecessor on the cycle `1..=m`.
pub fn rim_predecessor(i: usize, m: usize) -> usize {
    if i == 1 {
        m
    } else {
        i - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub family: String,
    #[serde(default)]
    pub params: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_triangles(g: &Graph) -> Vec<(usize, usize, usize)> {
        let mut out = vec![];
        for i in 1..=g.n() {
            for j in i + 1..=g.n() {
                for k in j + 1..=g.n() {
                    if g.has_edge(i, j) && g.has_edge(i, k) && g.has_edge(j, k) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn wheel_shape() {
        let w5 = Graph::wheel(5).unwrap();
        assert_eq!(w5.n(), 6);
        assert_eq!(w5.edges().len(), 10);
        assert_eq!(w5.neighbors(6), vec![1, 2, 3, 4, 5]);
        let w4 = Graph::wheel(4).unwrap();
        let want: Vec<(usize, usize)> = vec![(1, 2), (1, 4), (1, 5), (2, 3), (2, 5), (3, 4), (3, 5), (4, 5)];
        assert_eq!(w4.edges(), want.as_slice());
        assert_eq!(Graph::wheel(12).unwrap().n(), 13);
        assert_eq!(Graph::wheel(2), Err(GraphError::WheelTooSmall(2)));
    }

    #[test]
    fn split_shape() {
        let g = Graph::complete_split(4, 5).unwrap();
        assert_eq!((g.n(), g.edges().len()), (9, 26));
        let k3 = Graph::complete_split(2, 1).unwrap();
        assert_eq!(k3.edges(), Graph::complete(3).edges());
        let big = Graph::complete_split(8, 13).unwrap();
        assert_eq!((big.n(), big.edges().len()), (21, 132));
        assert_eq!(Graph::complete_split(0, 3), Err(GraphError::EmptyClique));
        assert_eq!(Graph::complete_split(5, 0).unwrap().edges(), Graph::complete(5).edges());
    }

    #[test]
    fn triangles_match_brute_force() {
        assert_eq!(
            Graph::wheel(4).unwrap().triangles(),
            vec![(1, 2, 5), (1, 4, 5), (2, 3, 5), (3, 4, 5)]
        );
        for m in 3..9 {
            let w = Graph::wheel(m).unwrap();
            let t = w.triangles();
            assert_eq!(t, brute_triangles(&w));
            assert_eq!(t.len(), if m == 3 { 4 } else { m });
        }
        let g = Graph::complete_split(4, 5).unwrap();
        // C(4,3) inside the clique plus C(4,2) per independent vertex
        assert_eq!(g.triangles().len(), 4 + 6 * 5);
        assert_eq!(g.triangles(), brute_triangles(&g));
        let even_cycle = Graph::new(6, (1..=6).map(|i| (i, rim_successor(i, 6)))).unwrap();
        assert!(even_cycle.triangles().is_empty());
    }

    #[test]
    fn bipartite_detection() {
        let c6 = Graph::new(6, (1..=6).map(|i| (i, rim_successor(i, 6)))).unwrap();
        assert!(c6.is_bipartite());
        match Graph::wheel(4).unwrap().bipartition() {
            Bipartition::OddCycle(c) => assert_eq!(c.len() % 2, 1),
            other => panic!("{other:?}"),
        }
        let c5 = Graph::new(5, (1..=5).map(|i| (i, rim_successor(i, 5)))).unwrap();
        match c5.bipartition() {
            Bipartition::OddCycle(c) => {
                assert_eq!(c.len(), 5);
                for w in 0..c.len() {
                    assert!(c5.has_edge(c[w], c[(w + 1) % c.len()]));
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1, 1)));
        assert_eq!(Graph::new(3, [(1, 4)]), Err(GraphError::EndpointOutOfRange(1, 4, 3)));
        assert_eq!(Graph::new(3, [(1, 2), (2, 1)]), Err(GraphError::DuplicateEdge(1, 2)));
    }

    #[test]
    fn json_round_trip_checks_family() {
        let g = Graph::wheel(5).unwrap();
        let js = g.to_json();
        assert_eq!(Graph::from_json(&js).unwrap(), g);
        let mut bad = js.clone();
        bad.edges.pop();
        assert!(matches!(Graph::from_json(&bad), Err(GraphError::FamilyMismatch { .. })));
        let text = serde_json::to_string(&Graph::complete_split(2, 1).unwrap().to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"n":3,"edges":[[1,2],[1,3],[2,3]],"family":"complete_split","params":[2,1]}"#
        );
    }
}
