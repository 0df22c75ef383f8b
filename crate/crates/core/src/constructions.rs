//! Generators for the named product-basis families, each returning a
//! validated [`ProductBasis`].

use crate::basis::{verify_pb, BasisError, ProductBasis};
use crate::numerics::{complement, CVec, Complex, Tolerance};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("prime {0} is not congruent to 1 mod 4")]
    BadPrime(usize),
    #[error("gentiles1 requires even n >= 4, got {0}")]
    OddDimension(usize),
    #[error("gentiles2 requires n > 3, m >= 3, n >= m, got ({m}, {n}); note (3,3) does not form a UPB")]
    BadDims { m: usize, n: usize },
    #[error("offset m={m} violates pi/2 <= 2*pi*m/p <= pi for p={p}")]
    BadOffset { m: usize, p: usize },
    #[error("parameter margin violated: |{quantity}| = {value:.3e} < {margin:.3e}")]
    MarginViolation {
        quantity: &'static str,
        value: f64,
        margin: f64,
    },
    #[error("genshifts requires k >= 2, got {0}")]
    BadShiftOrder(usize),
    #[error("tensor_upb requires bipartite inputs, got {0} parties")]
    NotBipartite(usize),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The five apex vectors of the pentagonal pyramid:
/// `v_i = N (cos 2*pi*i/5, sin 2*pi*i/5, h)` with `h = (1/2)sqrt(1+sqrt 5)`
/// and `N = 2/sqrt(5+sqrt 5)`. Nonadjacent vectors (index distance 2 mod 5)
/// are orthogonal.
pub fn pyramid_vectors() -> Vec<CVec> {
    let h = 0.5 * (1.0 + 5.0f64.sqrt()).sqrt();
    let n = 2.0 / (5.0 + 5.0f64.sqrt()).sqrt();
    (0..5)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / 5.0;
            CVec::from_real(&[n * a.cos(), n * a.sin(), n * h])
        })
        .collect()
}

/// The Pyramid UPB on (3,3): `psi_i = v_i (x) v_{2i mod 5}`.
pub fn pyramid() -> ProductBasis {
    let v = pyramid_vectors();
    let raw: Vec<Vec<CVec>> = (0..5)
        .map(|i| vec![v[i].clone(), v[(2 * i) % 5].clone()])
        .collect();
    verify_pb(&[3, 3], &raw, tol()).expect("pyramid is orthogonal by construction")
}

/// The Tiles UPB on (3,3): four interlocking tiles plus the stopper.
pub fn tiles() -> ProductBasis {
    let e = |k: usize| CVec::basis(3, k);
    let diff = |a: usize, b: usize| e(a).sub(&e(b));
    let stopper = CVec::from_real(&[1.0, 1.0, 1.0]);
    let raw = vec![
        vec![e(0), diff(0, 1)],
        vec![e(2), diff(1, 2)],
        vec![diff(0, 1), e(2)],
        vec![diff(1, 2), e(0)],
        vec![stopper.clone(), stopper],
    ];
    verify_pb(&[3, 3], &raw, tol()).expect("tiles is orthogonal by construction")
}

/// Parameters of the six-parameter (3,3) family. The margin guards the
/// strict-inequality conditions `cos/sin of theta and gamma != 0` for both
/// parties; set it to 0 to construct degenerate (non-UPB) members.
#[derive(Debug, Clone, Copy)]
pub struct Family33Params {
    pub gamma_a: f64,
    pub theta_a: f64,
    pub phi_a: f64,
    pub gamma_b: f64,
    pub theta_b: f64,
    pub phi_b: f64,
    pub margin: f64,
}

impl Family33Params {
    pub fn new(
        gamma_a: f64,
        theta_a: f64,
        phi_a: f64,
        gamma_b: f64,
        theta_b: f64,
        phi_b: f64,
    ) -> Self {
        Family33Params {
            gamma_a,
            theta_a,
            phi_a,
            gamma_b,
            theta_b,
            phi_b,
            margin: 1e-3,
        }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    /// The parameter point reproducing the Pyramid UPB:
    /// `phi = 0`, `theta = gamma = arccos((sqrt 5 - 1)/2)` for both parties.
    pub fn pyramid_point() -> Self {
        let t = ((5.0f64.sqrt() - 1.0) / 2.0).acos();
        Family33Params::new(t, t, 0.0, t, t, 0.0)
    }

    /// The parameter point reproducing the Tiles UPB:
    /// `phi = 0`, `theta = gamma = 3*pi/4` for both parties.
    pub fn tiles_point() -> Self {
        let t = 3.0 * PI / 4.0;
        Family33Params::new(t, t, 0.0, t, t, 0.0)
    }
}

/// One party's five local vectors of the six-parameter family, in the
/// canonical form order (|0>, |1>, theta-form, gamma-form, normalized form).
fn family33_party(gamma: f64, theta: f64, phi: f64) -> Vec<CVec> {
    let (cg, sg) = (gamma.cos(), gamma.sin());
    let (ct, st) = (theta.cos(), theta.sin());
    let eip = Complex::new(phi.cos(), phi.sin());
    let nn = (cg * cg + sg * sg * ct * ct).sqrt();
    vec![
        CVec::basis(3, 0),
        CVec::basis(3, 1),
        CVec::new(vec![re(ct), re(0.0), re(st)]),
        CVec::new(vec![re(sg * st), eip * cg, re(-sg * ct)]),
        CVec::new(vec![re(0.0), eip * (sg * ct / nn), re(cg / nn)]),
    ]
}

/// The six-parameter family of five-state product bases on (3,3). With all
/// angle margins respected the result is a UPB with the pentagon graph.
pub fn family33(params: Family33Params) -> Result<ProductBasis, ConstructError> {
    if params.margin > 0.0 {
        let checks = [
            ("cos theta_A", params.theta_a.cos()),
            ("sin theta_A", params.theta_a.sin()),
            ("cos gamma_A", params.gamma_a.cos()),
            ("sin gamma_A", params.gamma_a.sin()),
            ("cos theta_B", params.theta_b.cos()),
            ("sin theta_B", params.theta_b.sin()),
            ("cos gamma_B", params.gamma_b.cos()),
            ("sin gamma_B", params.gamma_b.sin()),
        ];
        for (quantity, value) in checks {
            if value.abs() < params.margin {
                return Err(ConstructError::MarginViolation {
                    quantity,
                    value: value.abs(),
                    margin: params.margin,
                });
            }
        }
    }
    let a = family33_party(params.gamma_a, params.theta_a, params.phi_a);
    let bf = family33_party(params.gamma_b, params.theta_b, params.phi_b);
    // Bob's states use the same forms in a rotated role:
    // beta_0 = |1>, beta_1 = gamma-form, beta_2 = |0>, beta_3 = theta-form,
    // beta_4 = normalized form.
    let b = [
        bf[1].clone(),
        bf[3].clone(),
        bf[0].clone(),
        bf[2].clone(),
        bf[4].clone(),
    ];
    let raw: Vec<Vec<CVec>> = (0..5).map(|i| vec![a[i].clone(), b[i].clone()]).collect();
    Ok(verify_pb(&[3, 3], &raw, tol())?)
}

/// Bob's four-dimensional vectors of Pyr34:
/// `w_j = N (sqrt(cos pi/5) cos(2j pi/5), sqrt(cos pi/5) sin(2j pi/5),
///          sqrt(cos 2pi/5) cos(4j pi/5), sqrt(cos 2pi/5) sin(4j pi/5))`
/// with `N = sqrt(2/sqrt 5)`; adjacent vectors are orthogonal.
pub fn pyr34_w_vectors() -> Vec<CVec> {
    let n = (2.0 / 5.0f64.sqrt()).sqrt();
    let c1 = (PI / 5.0).cos().sqrt();
    let c2 = (2.0 * PI / 5.0).cos().sqrt();
    (0..5)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / 5.0;
            let b = 4.0 * PI * j as f64 / 5.0;
            CVec::from_real(&[n * c1 * a.cos(), n * c1 * a.sin(), n * c2 * b.cos(), n * c2 * b.sin()])
        })
        .collect()
}

/// The Pyr34 product basis on (3,4): `v_j (x) w_j`. Extendible but
/// uncompletable in (3,4).
pub fn pyr34() -> ProductBasis {
    let v = pyramid_vectors();
    let w = pyr34_w_vectors();
    let raw: Vec<Vec<CVec>> = (0..5).map(|j| vec![v[j].clone(), w[j].clone()]).collect();
    verify_pb(&[3, 4], &raw, tol()).expect("pyr34 is orthogonal by construction")
}

/// Pyr34 plus the added state `v_0 (x) (w_0, w_1, w_4)^perp`; a strongly
/// uncompletable six-state basis.
pub fn pyr34_plus() -> ProductBasis {
    let v = pyramid_vectors();
    let w = pyr34_w_vectors();
    let perp = complement(&[w[0].clone(), w[1].clone(), w[4].clone()], 4, tol());
    assert_eq!(perp.len(), 1);
    let mut raw: Vec<Vec<CVec>> = (0..5).map(|j| vec![v[j].clone(), w[j].clone()]).collect();
    raw.push(vec![v[0].clone(), perp[0].clone()]);
    verify_pb(&[3, 4], &raw, tol()).expect("pyr34+ is orthogonal by construction")
}

/// Bob's five-outcome POVM directions for distinguishing Pyr34:
/// `u_j = (1/sqrt 2)(-sin(2j pi/5), cos(2j pi/5), -sin(4j pi/5), cos(4j pi/5))`.
/// `u_i` is orthogonal to `w_i, w_{i+2}, w_{i+3}` and `sum |u_j><u_j| = (5/4) I`.
pub fn pyr34_bob_povm() -> Vec<CVec> {
    let n = 1.0 / 2.0f64.sqrt();
    (0..5)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / 5.0;
            let b = 4.0 * PI * j as f64 / 5.0;
            CVec::from_real(&[-n * a.sin(), n * a.cos(), -n * b.sin(), n * b.cos()])
        })
        .collect()
}

/// The extended projector directions `x_i = (u_i, 0) + (1/2) e_4` in Bob's
/// five-dimensional extension; mutually orthogonal.
pub fn pyr34_x_vectors() -> Vec<CVec> {
    pyr34_bob_povm()
        .iter()
        .map(|u| u.padded(5).add(&CVec::basis(5, 4).scaled(re(0.5))))
        .collect()
}

/// The 15-state completion of Pyr34 in (3,5): the embedded five Pyr34
/// states, five x-type states `(v_a, v_b)^perp (x) x_i`, and five y-type
/// states `v_i (x) (w_i^perp in span(x_a, x_b))`.
pub fn pyr34_completion_35() -> ProductBasis {
    let v = pyramid_vectors();
    let w = pyr34_w_vectors();
    let x: Vec<CVec> = pyr34_x_vectors().iter().map(|xi| xi.normalized()).collect();
    let mut raw: Vec<Vec<CVec>> = (0..5)
        .map(|j| vec![v[j].clone(), w[j].padded(5)])
        .collect();
    // (v_a, v_b)^perp on Alice, tensored with x_i on Bob.
    let alice_pairs = [(1, 4), (0, 2), (1, 3), (2, 4), (0, 3)];
    for (i, &(a, b)) in alice_pairs.iter().enumerate() {
        let perp = complement(&[v[a].clone(), v[b].clone()], 3, tol());
        assert_eq!(perp.len(), 1);
        raw.push(vec![perp[0].clone(), x[i].clone()]);
    }
    // v_i on Alice, tensored with the vector in span(x_a, x_b) orthogonal
    // to the embedded w_i.
    let bob_spans = [(4, 1), (0, 2), (1, 3), (2, 4), (3, 0)];
    for (i, &(a, b)) in bob_spans.iter().enumerate() {
        let we = w[i].padded(5);
        let ca = crate::numerics::inner(&we, &x[a]).expect("dims match");
        let cb = crate::numerics::inner(&we, &x[b]).expect("dims match");
        let vec = x[a].scaled(cb).sub(&x[b].scaled(ca));
        raw.push(vec![v[i].clone(), vec]);
    }
    verify_pb(&[3, 5], &raw, tol()).expect("the (3,5) completion is orthogonal")
}

/// The Shifts UPB on three qubits:
/// `{|0,0,0>, |1,-,+>, |+,1,->, |-,+,1>}` (`genshifts(2)` with `psi_1 = |->`).
pub fn shifts() -> ProductBasis {
    genshifts(2).expect("k = 2 is valid")
}

/// GenShifts: 2k states on 2k-1 qubits. State 0 is `|0...0>`; state 1 is
/// `|1, psi_1, ..., psi_{k-1}, psi_{k-1}^perp, ..., psi_1^perp>` with
/// `psi_j = cos(j pi/4k)|0> + sin(j pi/4k)|1>` (pairwise neither orthogonal
/// nor identical, and neither orthogonal nor identical to |0>); the
/// remaining states are its cyclic right shifts.
pub fn genshifts(k: usize) -> Result<ProductBasis, ConstructError> {
    if k < 2 {
        return Err(ConstructError::BadShiftOrder(k));
    }
    let parties = 2 * k - 1;
    let psi = |j: usize| {
        let a = j as f64 * PI / (4.0 * k as f64);
        CVec::from_real(&[a.cos(), a.sin()])
    };
    let psi_perp = |j: usize| {
        let a = j as f64 * PI / (4.0 * k as f64);
        CVec::from_real(&[-a.sin(), a.cos()])
    };
    // Base pattern: |1>, psi_1..psi_{k-1}, psi_{k-1}^perp..psi_1^perp.
    let mut base: Vec<CVec> = vec![CVec::basis(2, 1)];
    for j in 1..k {
        base.push(psi(j));
    }
    for j in (1..k).rev() {
        base.push(psi_perp(j));
    }
    debug_assert_eq!(base.len(), parties);
    let mut raw: Vec<Vec<CVec>> = vec![vec![CVec::basis(2, 0); parties]];
    for t in 0..parties {
        // t-th cyclic right shift of the base pattern.
        let state: Vec<CVec> = (0..parties)
            .map(|i| base[(i + parties - t) % parties].clone())
            .collect();
        raw.push(state);
    }
    let dims = vec![2; parties];
    Ok(verify_pb(&dims, &raw, tol())?)
}

/// `omega_{m,k} = sum_{j=0}^{n/2-1} omega^{jm} |j+k mod n>`, `omega = e^{i4pi/n}`.
fn gentiles1_window(n: usize, m: usize, k: usize) -> CVec {
    let mut entries = vec![re(0.0); n];
    for j in 0..n / 2 {
        let a = 4.0 * PI * (j * m) as f64 / n as f64;
        entries[(j + k) % n] = Complex::new(a.cos(), a.sin());
    }
    CVec::new(entries)
}

/// GenTiles1 on (n,n) for even n >= 4: vertical tiles
/// `V_mk = |k> (x) omega_{m,k+1}`, horizontal tiles
/// `H_mk = omega_{m,k} (x) |k>` for m = 1..n/2-1, k = 0..n-1, plus the
/// uniform stopper; n^2 - 2n + 1 states.
pub fn gentiles1(n: usize) -> Result<ProductBasis, ConstructError> {
    if n < 4 || n % 2 != 0 {
        return Err(ConstructError::OddDimension(n));
    }
    let mut raw: Vec<Vec<CVec>> = Vec::new();
    for m in 1..n / 2 {
        for k in 0..n {
            raw.push(vec![CVec::basis(n, k), gentiles1_window(n, m, k + 1)]);
        }
    }
    for m in 1..n / 2 {
        for k in 0..n {
            raw.push(vec![gentiles1_window(n, m, k), CVec::basis(n, k)]);
        }
    }
    raw.push(vec![
        CVec::from_real(&vec![1.0; n]),
        CVec::from_real(&vec![1.0; n]),
    ]);
    let dims = [n, n];
    Ok(verify_pb(&dims, &raw, tol())?)
}

/// GenTiles2 on (m,n) for n > 3, m >= 3, n >= m: short tiles
/// `S_j = (|j> - |j+1 mod m>) (x) |j>`, long tiles `L_jk`, and the uniform
/// stopper; mn - 2m + 1 states. The (3,3) instance is rejected (it is not a
/// UPB).
pub fn gentiles2(m: usize, n: usize) -> Result<ProductBasis, ConstructError> {
    if n <= 3 || m < 3 || n < m {
        return Err(ConstructError::BadDims { m, n });
    }
    let mut raw: Vec<Vec<CVec>> = Vec::new();
    for j in 0..m {
        let s = CVec::basis(m, j).sub(&CVec::basis(m, (j + 1) % m));
        raw.push(vec![s, CVec::basis(n, j)]);
    }
    for j in 0..m {
        for k in 1..=(n.saturating_sub(3)) {
            let mut entries = vec![re(0.0); n];
            for i in 0..n - 2 {
                let a = 2.0 * PI * (i * k) as f64 / (n - 2) as f64;
                let z = Complex::new(a.cos(), a.sin());
                if i + 3 <= m {
                    entries[(i + j + 1) % m] += z;
                } else {
                    entries[i + 2] += z;
                }
            }
            raw.push(vec![CVec::basis(m, j), CVec::new(entries)]);
        }
    }
    raw.push(vec![
        CVec::from_real(&vec![1.0; m]),
        CVec::from_real(&vec![1.0; n]),
    ]);
    let dims = [m, n];
    Ok(verify_pb(&dims, &raw, tol())?)
}

/// GenPyramid apex vectors for prime `p` and offset `m`:
/// `v_i = N_p (cos 2pi i/p, sin 2pi i/p, h_p)` with
/// `h_p = sqrt(-cos 2pi m/p)` and `N_p = 1/sqrt(1 + |cos 2pi m/p|)`;
/// `v_i` is orthogonal to `v_{i +- m}`.
pub fn genpyramid_vectors(p: usize, m: usize) -> Vec<CVec> {
    let c = (2.0 * PI * m as f64 / p as f64).cos();
    let h = (-c).sqrt();
    let n = 1.0 / (1.0 + c.abs()).sqrt();
    (0..p)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / p as f64;
            CVec::from_real(&[n * a.cos(), n * a.sin(), n * h])
        })
        .collect()
}

/// GenPyramid UPB on n_parties copies of dimension 3 with p = 2*n_parties+1
/// prime states: `p_i = v_i (x) v_{2i mod p} (x) ... (x) v_{n i mod p}`.
/// The offset defaults to the smallest valid `m = ceil(p/4)`.
pub fn genpyramid(
    n_parties: usize,
    offset: Option<usize>,
) -> Result<ProductBasis, ConstructError> {
    let p = 2 * n_parties + 1;
    if !is_prime(p) {
        return Err(ConstructError::NotPrime(p));
    }
    let m = offset.unwrap_or_else(|| p.div_ceil(4));
    // pi/2 <= 2*pi*m/p <= pi, i.e. p/4 <= m <= p/2.
    if 4 * m < p || 2 * m > p {
        return Err(ConstructError::BadOffset { m, p });
    }
    let v = genpyramid_vectors(p, m);
    let raw: Vec<Vec<CVec>> = (0..p)
        .map(|i| {
            (1..=n_parties)
                .map(|k| v[(k * i) % p].clone())
                .collect()
        })
        .collect();
    let dims = vec![3; n_parties];
    Ok(verify_pb(&dims, &raw, tol())?)
}

/// The Sept UPB on (3,3,3): GenPyramid with p = 7 and offset 2, i.e.
/// `h = sqrt(-cos 4pi/7)`.
pub fn sept() -> ProductBasis {
    genpyramid(3, Some(2)).expect("p = 7 is prime and m = 2 is valid")
}

/// The Peres-style counterexample: seven integer vectors `r_i` with only
/// adjacent pairs orthogonal, assembled like Sept via
/// `v_{2i mod 7} = r_i`. Same orthogonality graph as Sept, yet extendible
/// because `r_1, r_2, r_5` are coplanar.
pub fn sept_counterexample_r_vectors() -> Vec<CVec> {
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [1.0, 0.0, 1.0],
        [1.0, 1.0, -1.0],
        [1.0, -1.0, 0.0],
        [1.0, 1.0, 1.0],
        [0.0, 1.0, -1.0],
    ]
    .iter()
    .map(|e| CVec::from_real(e))
    .collect()
}

pub fn sept_counterexample() -> ProductBasis {
    let r = sept_counterexample_r_vectors();
    // v_{2i mod 7} = r_i (indices 0-based), so v_j = r_{4j mod 7}.
    let v: Vec<CVec> = (0..7).map(|j| r[(4 * j) % 7].clone()).collect();
    let raw: Vec<Vec<CVec>> = (0..7)
        .map(|i| {
            vec![
                v[i % 7].clone(),
                v[(2 * i) % 7].clone(),
                v[(3 * i) % 7].clone(),
            ]
        })
        .collect();
    verify_pb(&[3, 3, 3], &raw, tol()).expect("counterexample set is orthogonal")
}

/// Number-theoretic data of the QuadRes construction.
#[derive(Debug, Clone)]
pub struct QuadResParams {
    pub p: usize,
    /// Local dimension n = (p+1)/2.
    pub n: usize,
    /// Quadratic residues mod p, ascending.
    pub residues: Vec<usize>,
    /// |N|^2 solving (|N|^2 + s)(|N|^2 - 1 - s) = 0 with the nonnegative root.
    pub norm_sq: f64,
    /// Smallest quadratic nonresidue.
    pub x: usize,
}

pub fn quadres_params(p: usize) -> Result<QuadResParams, ConstructError> {
    if !is_prime(p) {
        return Err(ConstructError::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(ConstructError::BadPrime(p));
    }
    let mut residues: Vec<usize> = (1..p).map(|x| (x * x) % p).collect();
    residues.sort_unstable();
    residues.dedup();
    let s_bar: f64 = residues
        .iter()
        .map(|&q| (2.0 * PI * q as f64 / p as f64).cos())
        .sum();
    let norm_sq = if s_bar <= 0.0 { -s_bar } else { 1.0 + s_bar };
    let x = (2..p)
        .find(|a| residues.binary_search(a).is_err())
        .expect("a nonresidue exists for every odd prime");
    Ok(QuadResParams {
        p,
        n: (p + 1) / 2,
        residues,
        norm_sq,
        x,
    })
}

/// `|Q(a)> = (N, 0, ...) + sum_{q in Q_p} e^{2 pi i q a / p} e_q`, with the
/// residues in ascending order indexing positions 1..n-1.
pub fn quadres_local(params: &QuadResParams, a: usize) -> CVec {
    let mut entries = vec![re(0.0); params.n];
    entries[0] = re(params.norm_sq.sqrt());
    for (k, &q) in params.residues.iter().enumerate() {
        let ang = 2.0 * PI * (q * a % params.p) as f64 / params.p as f64;
        entries[1 + k] = Complex::new(ang.cos(), ang.sin());
    }
    CVec::new(entries)
}

/// The QuadRes UPB on (n,n) with n = (p+1)/2, for primes p = 1 mod 4:
/// states `|Q(a)> (x) |Q(xa mod p)>` for a = 0..p-1.
pub fn quadres(p: usize) -> Result<ProductBasis, ConstructError> {
    let params = quadres_params(p)?;
    let raw: Vec<Vec<CVec>> = (0..p)
        .map(|a| {
            vec![
                quadres_local(&params, a),
                quadres_local(&params, (params.x * a) % p),
            ]
        })
        .collect();
    let dims = [params.n, params.n];
    Ok(verify_pb(&dims, &raw, tol())?)
}

/// Party-wise tensor product of two bipartite UPBs: l1*l2 states on
/// (n1*n2, m1*m2). UPB-ness of the result is guaranteed when both inputs are
/// UPBs (not re-verified here; the extendibility engine can certify it
/// independently).
pub fn tensor_upb(a: &ProductBasis, b: &ProductBasis) -> Result<ProductBasis, ConstructError> {
    if a.parties() != 2 {
        return Err(ConstructError::NotBipartite(a.parties()));
    }
    if b.parties() != 2 {
        return Err(ConstructError::NotBipartite(b.parties()));
    }
    let dims = [
        a.dims()[0] * b.dims()[0],
        a.dims()[1] * b.dims()[1],
    ];
    let mut raw = Vec::with_capacity(a.len() * b.len());
    for sa in a.states() {
        for sb in b.states() {
            raw.push(vec![
                crate::numerics::kron_all(&[sa.local(0).clone(), sb.local(0).clone()]),
                crate::numerics::kron_all(&[sa.local(1).clone(), sb.local(1).clone()]),
            ]);
        }
    }
    Ok(verify_pb(&dims, &raw, tol())?)
}
