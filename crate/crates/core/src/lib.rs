//! Product bases on multipartite Hilbert spaces: construction of the named
//! unextendible/uncompletable families, extendibility and completion search,
//! PPT and range-criterion certificates for the complementary states, and
//! separable-measurement building blocks.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`] — dense complex vectors/matrices, rank, orthogonal
//!   complements, Kronecker products, partial transpose, Hermitian spectra.
//! * [`basis`] — product states, orthogonality verification, orthogonality
//!   graphs.
//! * [`extend`] — the partition/local-rank decision engine: extendibility
//!   witnesses, product families, completion search, greedy augmentation.
//! * [`constructions`] — generators for Pyramid, Tiles, the six-parameter
//!   family, Pyr34 and friends, Shifts/GenShifts, GenTiles1/2, Sept,
//!   GenPyramid, QuadRes and tensor products.
//! * [`entangle`] — complementary-projector states, PPT across all bipartite
//!   cuts, entanglement/separability certificates.
//! * [`measure`] — separable measurements and Born-rule simulation.
//! * [`graphs`] — combinatorics of colored orthogonality graphs.
//! * [`sample`] — random orthogonal product sets for cross-checking searches.

pub mod basis;
pub mod constructions;
pub mod entangle;
pub mod extend;
pub mod graphs;
pub mod measure;
pub mod numerics;
pub mod sample;

pub use basis::{OrthGraph, ProductBasis, ProductState};
pub use numerics::{CMat, CVec, Complex, Tolerance};
