//! Constructive random sampling of orthogonal product sets.
//!
//! Each new state picks a random assignment of the existing states to
//! parties and draws each local vector from the orthogonal complement of the
//! assigned locals, so mutual orthogonality holds by construction. Used to
//! cross-check the pruned search against exhaustive enumeration.

use crate::basis::{verify_pb, ProductBasis};
use crate::numerics::{complement, CVec, Complex, Tolerance};
use rand::Rng;

/// A random unit vector in the span of an orthonormal set.
fn random_combination(basis: &[CVec], rng: &mut impl Rng) -> CVec {
    loop {
        let mut acc = CVec::zeros(basis[0].dim());
        for b in basis {
            let z = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            acc = acc.add(&b.scaled(z));
        }
        if acc.norm() > 1e-6 {
            return acc.normalized();
        }
    }
}

/// A random unit vector in dimension `d`.
pub fn random_unit(d: usize, rng: &mut impl Rng) -> CVec {
    let full: Vec<CVec> = (0..d).map(|k| CVec::basis(d, k)).collect();
    random_combination(&full, rng)
}

/// Builds a random orthogonal product set of `n_states` states on `dims`, or
/// `None` when the constructive sampler gets stuck (it never returns an
/// invalid basis).
pub fn random_product_basis(
    dims: &[usize],
    n_states: usize,
    tol: Tolerance,
    rng: &mut impl Rng,
) -> Option<ProductBasis> {
    let m = dims.len();
    let mut states: Vec<Vec<CVec>> = Vec::with_capacity(n_states);
    'outer: for _ in 0..n_states {
        'attempt: for _ in 0..40 {
            let assign: Vec<usize> = (0..states.len()).map(|_| rng.gen_range(0..m)).collect();
            let mut locals = Vec::with_capacity(m);
            for (i, &d) in dims.iter().enumerate() {
                let spanned: Vec<CVec> = states
                    .iter()
                    .zip(&assign)
                    .filter(|(_, &a)| a == i)
                    .map(|(s, _)| s[i].clone())
                    .collect();
                let comp = complement(&spanned, d, tol);
                if comp.is_empty() {
                    continue 'attempt;
                }
                locals.push(random_combination(&comp, rng));
            }
            states.push(locals);
            continue 'outer;
        }
        return None;
    }
    Some(verify_pb(dims, &states, tol).expect("orthogonal by construction"))
}
