//! Product states, product bases, orthogonality verification, and
//! orthogonality-graph extraction.

use crate::numerics::{inner, kron_all, CVec, Tolerance};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BasisError {
    #[error("states {0} and {1} are not orthogonal (|<psi_{0}|psi_{1}>| = {2:.3e})")]
    PairNotOrthogonal(usize, usize, f64),
    #[error("state {state}, party {party}: local dimension {got} does not match declared {want}")]
    DimensionMismatch {
        state: usize,
        party: usize,
        got: usize,
        want: usize,
    },
    #[error("state {state}, party {party}: local vector has (near-)zero norm")]
    ZeroLocal { state: usize, party: usize },
    #[error("non-finite entry in state {state}, party {party}")]
    NonFinite { state: usize, party: usize },
    #[error("party count {got} does not match declared {want}")]
    PartyCountMismatch { got: usize, want: usize },
    #[error("cannot embed: new dimension {new} for party {party} is below current {old}")]
    ShrinkingDimension { party: usize, old: usize, new: usize },
    #[error("more states ({n}) than the ambient dimension ({d})")]
    TooManyStates { n: usize, d: usize },
}

/// One unit local vector per party; the atom of every construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    locals: Vec<CVec>,
}

impl ProductState {
    /// Builds a product state, normalizing each local vector.
    /// Panics on zero locals; use [`verify_pb`] for fallible validation.
    pub fn new(locals: Vec<CVec>) -> Self {
        let locals = locals
            .into_iter()
            .map(|l| {
                assert!(l.norm() > 0.0, "zero local vector");
                l.normalized()
            })
            .collect();
        ProductState { locals }
    }

    pub fn locals(&self) -> &[CVec] {
        &self.locals
    }

    pub fn local(&self, party: usize) -> &CVec {
        &self.locals[party]
    }

    pub fn parties(&self) -> usize {
        self.locals.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.locals.iter().map(|l| l.dim()).collect()
    }

    /// Full tensor vector, leftmost party most significant.
    pub fn global(&self) -> CVec {
        kron_all(&self.locals)
    }

    /// `<self|other>` = product of local inner products.
    pub fn overlap(&self, other: &ProductState) -> crate::numerics::Complex {
        debug_assert_eq!(self.parties(), other.parties());
        self.locals
            .iter()
            .zip(&other.locals)
            .map(|(a, b)| inner(a, b).expect("local dimension mismatch"))
            .product()
    }
}

/// An ordered set of mutually orthogonal product states with declared party
/// dimensions. Construct via [`verify_pb`]; all certificates refer to states
/// by index in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBasis {
    dims: Vec<usize>,
    states: Vec<ProductState>,
}

impl ProductBasis {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    /// Ambient dimension D = prod d_i.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn globals(&self) -> Vec<CVec> {
        self.states.iter().map(|s| s.global()).collect()
    }

    /// Assembles a basis without the quadratic orthogonality re-check.
    /// For internal search loops whose states are orthogonal by
    /// construction; final results must still go through [`verify_pb`].
    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, states: Vec<ProductState>) -> Self {
        ProductBasis { dims, states }
    }

    /// A new basis with one extra state; re-validates orthogonality.
    pub fn with_state(&self, state: ProductState, tol: Tolerance) -> Result<Self, BasisError> {
        let mut states = self.states.clone();
        states.push(state);
        let raw = states.into_iter().map(|s| s.locals).collect();
        verify_pb_owned(self.dims.clone(), raw, tol)
    }
}

/// Validates raw local vectors into a [`ProductBasis`]: checks finiteness,
/// dimensions, normalizes locals, and confirms pairwise global orthogonality
/// within `tol`.
pub fn verify_pb(
    dims: &[usize],
    raw_states: &[Vec<CVec>],
    tol: Tolerance,
) -> Result<ProductBasis, BasisError> {
    verify_pb_owned(dims.to_vec(), raw_states.to_vec(), tol)
}

fn verify_pb_owned(
    dims: Vec<usize>,
    raw_states: Vec<Vec<CVec>>,
    tol: Tolerance,
) -> Result<ProductBasis, BasisError> {
    let d_total: usize = dims.iter().product();
    if raw_states.len() > d_total {
        return Err(BasisError::TooManyStates {
            n: raw_states.len(),
            d: d_total,
        });
    }
    let mut states = Vec::with_capacity(raw_states.len());
    for (j, raw) in raw_states.into_iter().enumerate() {
        if raw.len() != dims.len() {
            return Err(BasisError::PartyCountMismatch {
                got: raw.len(),
                want: dims.len(),
            });
        }
        let mut locals = Vec::with_capacity(raw.len());
        for (i, l) in raw.into_iter().enumerate() {
            if !l.is_finite() {
                return Err(BasisError::NonFinite { state: j, party: i });
            }
            if l.dim() != dims[i] {
                return Err(BasisError::DimensionMismatch {
                    state: j,
                    party: i,
                    got: l.dim(),
                    want: dims[i],
                });
            }
            if l.norm() <= tol.eps() {
                return Err(BasisError::ZeroLocal { state: j, party: i });
            }
            locals.push(l.normalized());
        }
        states.push(ProductState { locals });
    }
    for j in 0..states.len() {
        for k in j + 1..states.len() {
            let ov = states[j].overlap(&states[k]).norm();
            if ov > tol.eps() {
                return Err(BasisError::PairNotOrthogonal(j, k, ov));
            }
        }
    }
    Ok(ProductBasis { dims, states })
}

/// Orthogonality graph: vertices = states, an edge of color `i` when two
/// states are orthogonal on party `i`. A pair may carry several colors.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthGraph {
    n: usize,
    edges: Vec<BTreeSet<(usize, usize)>>,
}

impl OrthGraph {
    pub fn new(n: usize, edges: Vec<BTreeSet<(usize, usize)>>) -> Self {
        for es in &edges {
            for &(a, b) in es {
                assert!(a < b && b < n, "edge out of range or unordered");
            }
        }
        OrthGraph { n, edges }
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

    /// Colors carried by an unordered pair.
    pub fn pair_colors(&self, a: usize, b: usize) -> Vec<usize> {
        let key = (a.min(b), a.max(b));
        (0..self.edges.len())
            .filter(|&c| self.edges[c].contains(&key))
            .collect()
    }

    /// True iff every vertex pair carries at least one color.
    pub fn covers_all_pairs(&self) -> bool {
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.pair_colors(a, b).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// Extracts the per-party colored orthogonality graph of a valid basis:
/// color `i` joins `(j,k)` iff the party-`i` locals of states j,k are
/// orthogonal within `tol`.
pub fn build_graph(pb: &ProductBasis, tol: Tolerance) -> OrthGraph {
    let n = pb.len();
    let m = pb.parties();
    let mut edges = vec![BTreeSet::new(); m];
    for j in 0..n {
        for k in j + 1..n {
            for (i, es) in edges.iter_mut().enumerate() {
                let ov = inner(pb.states()[j].local(i), pb.states()[k].local(i))
                    .expect("validated basis")
                    .norm();
                if ov <= tol.eps() {
                    es.insert((j, k));
                }
            }
        }
    }
    OrthGraph { n, edges }
}

/// The simple lower bound on the size of any UPB: `sum_i (d_i - 1) + 1`.
pub fn lower_bound_size(dims: &[usize]) -> usize {
    assert!(!dims.is_empty() && dims.iter().all(|&d| d >= 2));
    dims.iter().map(|d| d - 1).sum::<usize>() + 1
}

/// Zero-pads each local vector into larger local spaces. Pairwise inner
/// products are unchanged.
pub fn embed(pb: &ProductBasis, new_dims: &[usize]) -> Result<ProductBasis, BasisError> {
    if new_dims.len() != pb.parties() {
        return Err(BasisError::PartyCountMismatch {
            got: new_dims.len(),
            want: pb.parties(),
        });
    }
    for (i, (&old, &new)) in pb.dims().iter().zip(new_dims).enumerate() {
        if new < old {
            return Err(BasisError::ShrinkingDimension {
                party: i,
                old,
                new,
            });
        }
    }
    let states = pb
        .states()
        .iter()
        .map(|s| ProductState {
            locals: s
                .locals
                .iter()
                .zip(new_dims)
                .map(|(l, &d)| l.padded(d))
                .collect(),
        })
        .collect();
    Ok(ProductBasis {
        dims: new_dims.to_vec(),
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Complex;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn basis_state(dims: &[usize], ks: &[usize]) -> Vec<CVec> {
        dims.iter()
            .zip(ks)
            .map(|(&d, &k)| CVec::basis(d, k))
            .collect()
    }

    #[test]
    fn verify_accepts_computational_basis() {
        let tol = Tolerance::default();
        let dims = [2, 2];
        let raw: Vec<Vec<CVec>> = (0..2)
            .flat_map(|a| (0..2).map(move |b| basis_state(&[2, 2], &[a, b])))
            .collect();
        let pb = verify_pb(&dims, &raw, tol).unwrap();
        assert_eq!(pb.len(), 4);
        assert_eq!(pb.total_dim(), 4);
    }

    #[test]
    fn verify_rejects_duplicates() {
        let tol = Tolerance::default();
        let raw = vec![basis_state(&[2, 2], &[0, 0]), basis_state(&[2, 2], &[0, 0])];
        match verify_pb(&[2, 2], &raw, tol) {
            Err(BasisError::PairNotOrthogonal(0, 1, ov)) => assert!((ov - 1.0).abs() < 1e-12),
            other => panic!("expected PairNotOrthogonal, got {other:?}"),
        }
    }

    #[test]
    fn verify_rejects_dimension_mismatch() {
        let tol = Tolerance::default();
        let raw = vec![vec![CVec::basis(3, 0), CVec::basis(2, 0)]];
        assert!(matches!(
            verify_pb(&[2, 2], &raw, tol),
            Err(BasisError::DimensionMismatch { state: 0, party: 0, got: 3, want: 2 })
        ));
    }

    #[test]
    fn verify_normalizes_locals() {
        let tol = Tolerance::default();
        let raw = vec![vec![
            CVec::new(vec![c(3.0, 0.0), c(0.0, 0.0)]),
            CVec::new(vec![c(0.0, 2.0), c(0.0, 0.0)]),
        ]];
        let pb = verify_pb(&[2, 2], &raw, tol).unwrap();
        assert!((pb.states()[0].local(0).norm() - 1.0).abs() < 1e-14);
        assert!((pb.states()[0].global().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn graph_covers_pairs_and_colors() {
        let tol = Tolerance::default();
        // |0,0>, |1,+>: orthogonal on party 0 only.
        // |0,1> vs |0,0>: orthogonal on party 1 only.
        let plus = CVec::from_real(&[0.5f64.sqrt(), 0.5f64.sqrt()]);
        let raw = vec![
            basis_state(&[2, 2], &[0, 0]),
            vec![CVec::basis(2, 1), plus],
            basis_state(&[2, 2], &[0, 1]),
        ];
        let pb = verify_pb(&[2, 2], &raw, tol).unwrap();
        let g = build_graph(&pb, tol);
        assert!(g.covers_all_pairs());
        assert_eq!(g.pair_colors(0, 1), vec![0]);
        assert_eq!(g.pair_colors(0, 2), vec![1]);
        // |1,+> vs |0,1>: party 0 orthogonal only.
        assert_eq!(g.pair_colors(1, 2), vec![0]);
    }

    #[test]
    fn doubly_colored_edge_detected() {
        let tol = Tolerance::default();
        let raw = vec![basis_state(&[2, 2], &[0, 0]), basis_state(&[2, 2], &[1, 1])];
        let pb = verify_pb(&[2, 2], &raw, tol).unwrap();
        let g = build_graph(&pb, tol);
        assert_eq!(g.pair_colors(0, 1), vec![0, 1]);
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(lower_bound_size(&[3, 3]), 5);
        assert_eq!(lower_bound_size(&[2, 2, 2]), 4);
        for n in 2..8 {
            assert_eq!(lower_bound_size(&[2, n]), n + 1);
        }
    }

    #[test]
    fn embed_preserves_inner_products() {
        let tol = Tolerance::default();
        let plus = CVec::from_real(&[0.5f64.sqrt(), 0.5f64.sqrt()]);
        let raw = vec![
            basis_state(&[2, 2], &[0, 0]),
            vec![CVec::basis(2, 1), plus.clone()],
        ];
        let pb = verify_pb(&[2, 2], &raw, tol).unwrap();
        let big = embed(&pb, &[3, 3]).unwrap();
        assert_eq!(big.dims(), &[3, 3]);
        for j in 0..pb.len() {
            for k in 0..pb.len() {
                let a = pb.states()[j].overlap(&pb.states()[k]);
                let b = big.states()[j].overlap(&big.states()[k]);
                assert!((a - b).norm() < 1e-14);
            }
        }
        // Identity embed.
        let same = embed(&pb, &[2, 2]).unwrap();
        assert_eq!(same, pb);
        // Shrinking rejected.
        assert!(matches!(
            embed(&big, &[2, 3]),
            Err(BasisError::ShrinkingDimension { party: 0, old: 3, new: 2 })
        ));
    }

    #[test]
    fn with_state_revalidates() {
        let tol = Tolerance::default();
        let raw = vec![basis_state(&[2, 2], &[0, 0])];
        let pb = verify_pb(&[2, 2], &raw, tol).unwrap();
        let ok = pb.with_state(
            ProductState::new(basis_state(&[2, 2], &[1, 1])),
            tol,
        );
        assert_eq!(ok.unwrap().len(), 2);
        let bad = pb.with_state(ProductState::new(basis_state(&[2, 2], &[0, 0])), tol);
        assert!(bad.is_err());
    }
}
