//! # cyclift
//!
//! Cyclic signatures on finite graphs and the spectral theory of their
//! lifts: Hermitian signed adjacency matrices and their Hadamard powers,
//! k-cyclic covering graphs, matching polynomials, interlacing checks, and
//! searches for signatures whose new eigenvalues meet the spectral bound of
//! the universal covering tree.
//!
//! The crate is organized around the pipeline:
//!
//! * [`graph`] — simple graphs with stable edge indexing, bipartitions,
//!   fundamental cycles, adjacency matrices.
//! * [`cover`] — spectral radius of the universal covering tree (exact for
//!   regular graphs and trees, a convergent lower estimate otherwise).
//! * [`signature`] — cyclic signatures, switching, balance, switching
//!   equivalence, and the signature JSON format.
//! * [`spectra`] — signed adjacency matrices `A^{s,i}`, k-cyclic lifts and
//!   their fiber layout, and the spectral identities relating them.
//! * [`poly`] / [`matching`] / [`expectation`] — real-rooted polynomial
//!   machinery: matching polynomials, characteristic polynomials, expected
//!   characteristic polynomials over product distributions, common
//!   interlacings, rank-one decompositions.
//! * [`search`] / [`tower`] — exhaustive, random, and greedy signature
//!   searches, and towers of certified lifts built from `K_{d,d}`.
//! * [`verify`] — randomized verification suites over the built-in
//!   [`corpus`].
//!
//! Everything is deterministic given inputs and seeds: enumeration orders
//! are fixed, random draws replay from explicit seeds, and parallel
//! reductions are ordered so results do not depend on worker count.

pub mod corpus;
pub mod cover;
pub mod error;
pub mod expectation;
pub mod graph;
pub mod hermitian;
pub mod matching;
pub mod poly;
pub mod search;
pub mod signature;
pub mod spectra;
pub mod tower;
pub mod verify;

pub use cover::{universal_cover_spectral_radius, SpectralRadius};
pub use error::{Error, Result};
pub use expectation::{
    convex_combination_real_rooted_check, expected_char_poly, rank_one_decomposition_check,
    uniform_expected_char_poly, EdgeAssignment, DEFAULT_ENUM_BUDGET,
};
pub use graph::{BipartitionWitness, Graph, OrientedEdge};
pub use hermitian::{HermitianMatrix, Spectrum};
pub use matching::{matching_counts, matching_polynomial, MatchingCounts};
pub use poly::{char_poly, has_common_interlacing, Polynomial};
pub use search::{
    exhaustive_search, greedy_conditional_search, one_sided_ok, random_search, two_sided_ok,
    SearchMode, SearchOutcome, DEFAULT_SEARCH_BUDGET, RAMANUJAN_TOL,
};
pub use signature::{
    balancing_switch, cycle_exponent, is_balanced, switch, switching_equivalent, CyclicSignature,
    SignatureFile, SwitchingFunction,
};
pub use spectra::{
    bipartite_symmetry_check, lift_graph, lift_spectrum_check, new_eigenvalues, signed_adjacency,
    switching_invariance_check, Lift, SpectrumReport,
};
pub use tower::{
    build_tower, build_tower_from, verify_certificate, verify_certificate_detailed,
    CertificateFile, RamanujanCertificate, Tower, TowerConfig, TowerStrategy,
};
