//! Combinatorics of colored orthogonality graphs: pentagon uniqueness for
//! five-state (3,3) bases, colored-graph isomorphism, and matching
//! feasibility for minimal qubit UPB graphs.

use crate::basis::{build_graph, OrthGraph, ProductBasis};
use crate::numerics::Tolerance;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is out of range for {2} vertices")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("a colored graph needs at least one color")]
    NoColors,
    #[error("too many vertices for brute-force isomorphism: {0} > 12")]
    TooLarge(usize),
    #[error("expected a qubit basis (all local dimensions 2), got dims {0:?}")]
    NotQubits(Vec<usize>),
}

/// A purely combinatorial colored graph: vertices, and one set of unordered
/// edges per color. Detached from any vector realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    edges: Vec<BTreeSet<(usize, usize)>>,
}

impl ColoredGraph {
    pub fn new(n: usize, edges: Vec<BTreeSet<(usize, usize)>>) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::NoColors);
        }
        for set in &edges {
            for &(a, b) in set {
                if a >= b || b >= n {
                    return Err(GraphError::EdgeOutOfRange(a, b, n));
                }
            }
        }
        Ok(ColoredGraph { n, edges })
    }

    pub fn from_orth_graph(g: &OrthGraph) -> Self {
        ColoredGraph {
            n: g.vertices(),
            edges: g.all_edges().to_vec(),
        }
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self, color: usize) -> &BTreeSet<(usize, usize)> {
        &self.edges[color]
    }

    pub fn all_edges(&self) -> &[BTreeSet<(usize, usize)>] {
        &self.edges
    }

    /// Number of edges of the given color at the given vertex.
    pub fn color_degree(&self, v: usize, color: usize) -> usize {
        self.edges[color]
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

fn isomorphic_under(g1: &ColoredGraph, g2: &ColoredGraph, color_map: &[usize]) -> bool {
    let n = g1.vertices();
    // Degree multiset pruning per color.
    for c in 0..g1.colors() {
        if g1.edges(c).len() != g2.edges(color_map[c]).len() {
            return false;
        }
        let mut d1: Vec<usize> = (0..n).map(|v| g1.color_degree(v, c)).collect();
        let mut d2: Vec<usize> = (0..n).map(|v| g2.color_degree(v, color_map[c])).collect();
        d1.sort_unstable();
        d2.sort_unstable();
        if d1 != d2 {
            return false;
        }
    }
    // Backtracking vertex assignment with incremental edge checks.
    fn extend(
        g1: &ColoredGraph,
        g2: &ColoredGraph,
        color_map: &[usize],
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let v = assign.len();
        if v == g1.vertices() {
            return true;
        }
        'cand: for img in 0..g2.vertices() {
            if used[img] {
                continue;
            }
            for u in 0..v {
                for c in 0..g1.colors() {
                    let key1 = (u.min(v), u.max(v));
                    let key2 = (assign[u].min(img), assign[u].max(img));
                    if g1.edges(c).contains(&key1) != g2.edges(color_map[c]).contains(&key2) {
                        continue 'cand;
                    }
                }
            }
            assign.push(img);
            used[img] = true;
            if extend(g1, g2, color_map, assign, used) {
                return true;
            }
            assign.pop();
            used[img] = false;
        }
        false
    }
    let mut assign = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(g1, g2, color_map, &mut assign, &mut used)
}

/// Exact colored-graph isomorphism by brute-force vertex permutation with
/// degree pruning; with `allow_color_permutation` the colors may also be
/// relabelled. Limited to 12 vertices.
pub fn colored_isomorphic(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    allow_color_permutation: bool,
) -> Result<bool, GraphError> {
    if g1.vertices() > 12 || g2.vertices() > 12 {
        return Err(GraphError::TooLarge(g1.vertices().max(g2.vertices())));
    }
    if g1.vertices() != g2.vertices() || g1.colors() != g2.colors() {
        return Ok(false);
    }
    let color_maps: Vec<Vec<usize>> = if allow_color_permutation {
        permutations(g1.colors())
    } else {
        vec![(0..g1.colors()).collect()]
    };
    Ok(color_maps
        .iter()
        .any(|cm| isomorphic_under(g1, g2, cm)))
}

/// All two-colorings of K5 in which every vertex has exactly two edges of
/// each color (the necessary pattern for a five-state (3,3) UPB), reduced
/// modulo graph isomorphism and color swap. The result is the single
/// pentagon/pentagram class.
pub fn enumerate_five_state_graphs() -> Vec<ColoredGraph> {
    let pairs: Vec<(usize, usize)> = (0..5)
        .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
        .collect();
    let mut classes: Vec<ColoredGraph> = Vec::new();
    for mask in 0u32..(1 << 10) {
        let mut edges = vec![BTreeSet::new(), BTreeSet::new()];
        for (bit, &pair) in pairs.iter().enumerate() {
            let color = ((mask >> bit) & 1) as usize;
            edges[color].insert(pair);
        }
        let g = ColoredGraph::new(5, edges).expect("edges within range");
        let feasible = (0..5).all(|v| g.color_degree(v, 0) == 2 && g.color_degree(v, 1) == 2);
        if !feasible {
            continue;
        }
        let known = classes
            .iter()
            .any(|c| colored_isomorphic(c, &g, true).expect("5 vertices"));
        if !known {
            classes.push(g);
        }
    }
    classes
}

/// Feasibility of the orthogonality graph of a hypothetical minimal
/// (n+1)-state UPB on n qubits: every pair of states covered, one color per
/// party, and each color class a matching (no repeated local states).
#[derive(Debug, Clone)]
pub enum QubitFeasibility {
    /// For odd n: a 1-factorization of K_{n+1} into n perfect matchings,
    /// one per party/color.
    Decomposition(Vec<Vec<(usize, usize)>>),
    /// For even n: n matchings of size <= n/2 cannot cover all pairs.
    Infeasible {
        pairs_needed: usize,
        pairs_available: usize,
    },
}

impl QubitFeasibility {
    /// The decomposition as a colored graph, when feasible.
    pub fn graph(&self) -> Option<ColoredGraph> {
        match self {
            QubitFeasibility::Decomposition(matchings) => {
                let n = matchings.len();
                let edges: Vec<BTreeSet<(usize, usize)>> = matchings
                    .iter()
                    .map(|m| m.iter().copied().collect())
                    .collect();
                Some(ColoredGraph::new(n + 1, edges).expect("valid by construction"))
            }
            QubitFeasibility::Infeasible { .. } => None,
        }
    }
}

/// Decides whether n parties of qubits admit the minimal (n+1)-vertex
/// orthogonality graph. Odd n: yes, by the round-robin 1-factorization of
/// K_{n+1}. Even n: no, by edge counting (each color class is a matching on
/// an odd number of vertices, so covers at most n/2 pairs).
pub fn minimal_qubit_feasibility(n_parties: usize) -> QubitFeasibility {
    assert!(n_parties >= 2, "need at least two parties");
    let n = n_parties;
    let vertices = n + 1;
    let pairs_needed = vertices * (vertices - 1) / 2;
    if n % 2 == 0 {
        // vertices odd: a matching covers at most (vertices-1)/2 = n/2 pairs.
        return QubitFeasibility::Infeasible {
            pairs_needed,
            pairs_available: n * (n / 2),
        };
    }
    // Round-robin 1-factorization of K_{n+1} (n+1 even): fix vertex n; in
    // round r pair (n, r) and ((r+i) mod n, (r-i) mod n) for i = 1..(n-1)/2.
    let mut matchings = Vec::with_capacity(n);
    for r in 0..n {
        let mut m = vec![(r.min(n), r.max(n))];
        for i in 1..=(n - 1) / 2 {
            let a = (r + i) % n;
            let b = (r + n - i) % n;
            m.push((a.min(b), a.max(b)));
        }
        m.sort_unstable();
        matchings.push(m);
    }
    QubitFeasibility::Decomposition(matchings)
}

/// Checks the structural pattern required of a GenShifts orthogonality
/// graph: qubit parties, one color per party, no doubly colored pair, every
/// pair covered, and every color class a perfect matching.
pub fn genshifts_graph_check(pb: &ProductBasis, tol: Tolerance) -> Result<bool, GraphError> {
    let dims = pb.dims().to_vec();
    if dims.iter().any(|&d| d != 2) {
        return Err(GraphError::NotQubits(dims));
    }
    let g = build_graph(pb, tol);
    let n = g.vertices();
    if n % 2 != 0 {
        return Ok(false);
    }
    for a in 0..n {
        for b in a + 1..n {
            // A doubly colored edge means the pair is distinguishable and
            // the basis cannot be a UPB; an uncovered pair is not orthogonal
            // at all.
            if g.pair_colors(a, b).len() != 1 {
                return Ok(false);
            }
        }
    }
    for c in 0..g.colors() {
        if g.edges(c).len() != n / 2 {
            return Ok(false);
        }
        for v in 0..n {
            let deg = g.edges(c).iter().filter(|&&(a, b)| a == v || b == v).count();
            if deg != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
