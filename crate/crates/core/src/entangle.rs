//! The complementary-projector state rho-bar of a product basis, PPT checks
//! across every bipartite cut, and entanglement/separability certificates.

use crate::basis::{embed, BasisError, ProductBasis, ProductState};
use crate::extend::{
    complete_search, is_extendible, product_span_dim, Completion, ExtendError, ExtendVerdict,
    ExtensionWitness,
};
use crate::numerics::{
    hermitian_eigenvalues, partial_transpose, CMat, CVec, NumericsError, Tolerance,
};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EntangleError {
    #[error("the basis already spans the whole space; rho_bar is undefined")]
    FullBasis,
    #[error("not a density operator: {0}")]
    InvalidDensity(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// A density operator on a multipartite tensor-product space.
#[derive(Debug, Clone)]
pub struct DensityOp {
    mat: CMat,
    dims: Vec<usize>,
}

impl DensityOp {
    /// Validates Hermiticity (1e-12), unit trace (1e-12), and positivity
    /// (min eigenvalue >= -1e-10).
    pub fn new(mat: CMat, dims: Vec<usize>, tol: Tolerance) -> Result<Self, EntangleError> {
        let total: usize = dims.iter().product();
        if mat.rows() != total || mat.cols() != total {
            return Err(EntangleError::InvalidDensity(format!(
                "matrix is {}x{} but dims product is {total}",
                mat.rows(),
                mat.cols()
            )));
        }
        let herm = mat.hermiticity_defect();
        if herm > 1e-12 {
            return Err(EntangleError::InvalidDensity(format!(
                "hermiticity defect {herm:.3e} > 1e-12"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(EntangleError::InvalidDensity(format!(
                "trace {tr} differs from 1"
            )));
        }
        let min = crate::numerics::min_eig_hermitian(&mat, tol)?;
        if min < -1e-10 {
            return Err(EntangleError::InvalidDensity(format!(
                "minimum eigenvalue {min:.3e} < -1e-10"
            )));
        }
        Ok(DensityOp { mat, dims })
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Rank by eigenvalue counting at the given tolerance.
    pub fn rank(&self, tol: Tolerance) -> Result<usize, EntangleError> {
        let eigs = hermitian_eigenvalues(&self.mat, tol)?;
        Ok(eigs.iter().filter(|&&e| e > tol.eps()).count())
    }
}

/// `rho_bar = (1/(D-n)) (I - sum_j |psi_j><psi_j|)`: the normalized projector
/// onto the orthogonal complement of the basis span. Errors with `FullBasis`
/// when the basis already spans the whole space.
pub fn rho_bar(pb: &ProductBasis) -> Result<DensityOp, EntangleError> {
    let d = pb.total_dim();
    let n = pb.len();
    if n >= d {
        return Err(EntangleError::FullBasis);
    }
    let mut proj = CMat::identity(d);
    for g in pb.globals() {
        proj = proj.sub(&CMat::projector(&g));
    }
    let mat = proj.scaled(1.0 / (d - n) as f64);
    DensityOp::new(mat, pb.dims().to_vec(), Tolerance::default())
}

/// Minimum eigenvalue of the partial transpose over one group of parties.
#[derive(Debug, Clone)]
pub struct CutReport {
    /// Parties whose indices were transposed (never contains party 0, so
    /// each bipartition is reported once).
    pub transposed: Vec<usize>,
    pub min_eigenvalue: f64,
}

/// Per-cut PPT evidence over every bipartition of the parties.
#[derive(Debug, Clone)]
pub struct PptReport {
    pub cuts: Vec<CutReport>,
}

impl PptReport {
    pub fn worst(&self) -> f64 {
        self.cuts
            .iter()
            .map(|c| c.min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_ppt(&self, tol: Tolerance) -> bool {
        self.worst() >= -tol.eps()
    }
}

fn transpose_group(rho: &CMat, dims: &[usize], group: &[usize]) -> Result<CMat, NumericsError> {
    let mut out = rho.clone();
    for &p in group {
        out = partial_transpose(&out, dims, p)?;
    }
    Ok(out)
}

/// Partial transposes every bipartite cut of the parties (the cut's group is
/// the side not containing party 0) and reports the minimum eigenvalue of
/// each result. PPT holds iff all minima are >= -tol. Cuts run in parallel.
pub fn ppt_all_cuts(rho: &DensityOp, tol: Tolerance) -> Result<PptReport, EntangleError> {
    let m = rho.dims().len();
    assert!(m >= 2, "ppt needs at least two parties");
    // Subsets of {1, .., m-1}: one representative per bipartition.
    let groups: Vec<Vec<usize>> = (1u64..(1 << (m - 1)))
        .map(|mask| {
            (1..m)
                .filter(|p| (mask >> (p - 1)) & 1 == 1)
                .collect::<Vec<usize>>()
        })
        .collect();
    let cuts: Result<Vec<CutReport>, NumericsError> = groups
        .into_par_iter()
        .map(|group| {
            let pt = transpose_group(rho.mat(), rho.dims(), &group)?;
            let min = crate::numerics::min_eig_hermitian(&pt, tol)?;
            Ok(CutReport {
                transposed: group,
                min_eigenvalue: min,
            })
        })
        .collect();
    Ok(PptReport { cuts: cuts? })
}

/// Outcome of [`certify`]: a re-verifiable classification of the
/// complementary state rho-bar of a product basis.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// The basis is unextendible; rho-bar is entangled yet PPT across every
    /// cut, hence bound entangled.
    Upb { ppt: PptReport },
    /// The product states in the range of rho-bar span strictly less than
    /// its rank, so rho-bar violates the range criterion: entangled, and
    /// bound because it is PPT.
    RangeDeficit {
        span_dim: usize,
        rank: usize,
        ppt: PptReport,
    },
    /// The basis completes to a full orthogonal product basis (possibly in a
    /// caller-supplied extension space); rho-bar is separable.
    SeparableByCompletion { completion: ProductBasis },
    /// No completion was found, but rho-bar is PPT on every cut and has rank
    /// at most two; no PPT state of rank <= 2 is bound entangled, so
    /// rho-bar is separable by that (cited, not re-proved) fact.
    PptAllCuts { ppt: PptReport, rank: usize },
    /// The search budget ran out, or the basis is extendible with full
    /// product span and no completion was found within budget.
    Inconclusive { reason: String },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Upb { .. } => "UPB",
            Certificate::RangeDeficit { .. } => "RangeDeficit",
            Certificate::SeparableByCompletion { .. } => "SeparableByCompletion",
            Certificate::PptAllCuts { .. } => "PPT-all-cuts",
            Certificate::Inconclusive { .. } => "Inconclusive",
        }
    }
}

/// Classifies rho-bar of the basis. See [`certify_with_extension`] for the
/// variant that searches for completions in a larger space.
pub fn certify(pb: &ProductBasis, tol: Tolerance, budget: u64) -> Result<Certificate, EntangleError> {
    certify_with_extension(pb, None, tol, budget)
}

/// Decision tree: unextendible => `Upb`; product-span deficit in the range
/// of rho-bar => `RangeDeficit`; completable (in the original space or in
/// `extension_dims` when supplied) => `SeparableByCompletion`; PPT with rank
/// <= 2 => `PptAllCuts` (separable by the rank-two fact); otherwise
/// `Inconclusive`.
pub fn certify_with_extension(
    pb: &ProductBasis,
    extension_dims: Option<&[usize]>,
    tol: Tolerance,
    budget: u64,
) -> Result<Certificate, EntangleError> {
    let d = pb.total_dim();
    let n = pb.len();
    if n == d {
        // A full orthogonal product basis is its own completion.
        return Ok(Certificate::SeparableByCompletion {
            completion: pb.clone(),
        });
    }
    match is_extendible(pb, tol, budget) {
        ExtendVerdict::BudgetExhausted => {
            return Ok(Certificate::Inconclusive {
                reason: format!("extendibility search exhausted the budget of {budget} nodes"),
            });
        }
        ExtendVerdict::NoWitness => {
            let rho = rho_bar(pb)?;
            let ppt = ppt_all_cuts(&rho, tol)?;
            return Ok(Certificate::Upb { ppt });
        }
        ExtendVerdict::Witness(_) => {}
    }
    let rank = d - n;
    let span = product_span_dim(pb, tol);
    if span < rank {
        let rho = rho_bar(pb)?;
        let ppt = ppt_all_cuts(&rho, tol)?;
        return Ok(Certificate::RangeDeficit {
            span_dim: span,
            rank,
            ppt,
        });
    }
    let search_basis = match extension_dims {
        Some(new_dims) => embed(pb, new_dims)?,
        None => pb.clone(),
    };
    match complete_search(&search_basis, tol, budget) {
        Ok(Completion::Complete(completion)) => {
            return Ok(Certificate::SeparableByCompletion { completion });
        }
        Ok(Completion::Incomplete { .. }) => {}
        Err(ExtendError::BudgetExhausted(nodes)) => {
            return Ok(Certificate::Inconclusive {
                reason: format!("completion search exhausted the budget after {nodes} nodes"),
            });
        }
        Err(ExtendError::Basis(e)) => return Err(EntangleError::Basis(e)),
    }
    let rho = rho_bar(pb)?;
    let ppt = ppt_all_cuts(&rho, tol)?;
    if ppt.is_ppt(tol) && rank <= 2 {
        return Ok(Certificate::PptAllCuts { ppt, rank });
    }
    Ok(Certificate::Inconclusive {
        reason: "extendible, full product span, and no completion found within budget".into(),
    })
}

/// Extracts the witness of an extendible verdict, for callers that need the
/// new state as evidence.
pub fn extension_evidence(pb: &ProductBasis, tol: Tolerance, budget: u64) -> Option<ExtensionWitness> {
    match is_extendible(pb, tol, budget) {
        ExtendVerdict::Witness(w) => Some(*w),
        _ => None,
    }
}

/// The basis with one party's local vectors complex-conjugated; used by the
/// partial-transpose covariance check.
pub fn conjugate_party(pb: &ProductBasis, party: usize) -> ProductBasis {
    let states: Vec<ProductState> = pb
        .states()
        .iter()
        .map(|s| {
            let locals: Vec<CVec> = s
                .locals()
                .iter()
                .enumerate()
                .map(|(i, l)| if i == party { l.conj() } else { l.clone() })
                .collect();
            ProductState::new(locals)
        })
        .collect();
    crate::basis::verify_pb(
        pb.dims(),
        &states.iter().map(|s| s.locals().to_vec()).collect::<Vec<_>>(),
        Tolerance::default(),
    )
    .expect("conjugation preserves orthogonality")
}
