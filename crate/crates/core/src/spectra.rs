//! Signed adjacency matrices, their Hadamard powers, k-cyclic lifts, and the
//! spectral identities connecting them.
//!
//! For a signature s with values in the k-th roots of unity, `A^{s,i}` is the
//! Hermitian matrix whose (u, v) entry is `s_{uv}^i` on edges and 0 elsewhere.
//! The k-cyclic lift replaces each vertex by a fiber of k vertices and each
//! edge of exponent l by the k edges `(u_i, v_{i+l mod k})`; its spectrum is
//! the multiset union of the spectra of all Hadamard powers, which is what
//! [`lift_spectrum_check`] verifies numerically.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hermitian::{
    multiset_max_discrepancy, roots_of_unity, HermitianMatrix, Spectrum, SPECTRUM_TOL,
};
use crate::signature::{switch, CyclicSignature, SwitchingFunction};

/// Entrywise tolerance for exact matrix identities (conjugation, rank-one
/// decompositions).
pub const ENTRYWISE_TOL: f64 = 1e-12;

/// The Hermitian signed adjacency matrix `A^{s,i}` (entrywise i-th power).
/// `i = 0` gives the plain adjacency matrix.
pub fn signed_adjacency(g: &Graph, s: &CyclicSignature, power: u32) -> Result<HermitianMatrix> {
    s.check_graph(g)?;
    let k = s.k();
    if power >= k {
        return Err(Error::pre(format!(
            "Hadamard power {power} out of range for k = {k}"
        )));
    }
    let roots = roots_of_unity(k);
    let n = g.vertex_count();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (j, &(u, v)) in g.edges().iter().enumerate() {
        let t = ((power as u64 * s.exponents()[j] as u64) % k as u64) as usize;
        m[(u, v)] = roots[t];
        m[(v, u)] = roots[t].conj();
    }
    Ok(HermitianMatrix::new_unchecked(m))
}

/// A k-cyclic lift together with its fiber layout. Fiber vertex layout is
/// normative: base vertex u, fiber index i map to lifted vertex `u * k + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lift {
    pub graph: Graph,
    pub k: u32,
    pub base_n: usize,
}

impl Lift {
    pub fn fiber_vertex(&self, base: usize, fiber: usize) -> usize {
        base * self.k as usize + fiber
    }

    pub fn base_vertex(&self, lifted: usize) -> (usize, usize) {
        (lifted / self.k as usize, lifted % self.k as usize)
    }

    /// Edge-list text with a header comment recording the fiber layout.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = format!(
            "# {}-cyclic lift: base_n={} lifted_n={} fiber layout: lifted vertex = base_u * {} + fiber_i\n",
            self.k,
            self.base_n,
            self.graph.vertex_count(),
            self.k
        );
        for &(u, v) in self.graph.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Builds the k-cyclic lift of (g, s). Lift edges are emitted by base edge
/// index, then fiber index, which fixes their edge indices downstream.
pub fn lift_graph(g: &Graph, s: &CyclicSignature) -> Result<Lift> {
    s.check_graph(g)?;
    let k = s.k() as usize;
    let mut edges = Vec::with_capacity(k * g.edge_count());
    for (j, &(u, v)) in g.edges().iter().enumerate() {
        let l = s.exponents()[j] as usize;
        for i in 0..k {
            edges.push((u * k + i, v * k + (i + l) % k));
        }
    }
    let graph = Graph::new(k * g.vertex_count(), edges)?;
    Ok(Lift {
        graph,
        k: s.k(),
        base_n: g.vertex_count(),
    })
}

/// Report for the multiset spectral decomposition of a lift.
#[derive(Debug, Clone, Serialize)]
pub struct LiftSpectrumReport {
    pub matches: bool,
    pub max_discrepancy: f64,
}

/// Checks that the lift spectrum equals the multiset union of the Hadamard
/// power spectra, sorted elementwise within `1e-8 * (1 + spectral radius)`.
pub fn lift_spectrum_check(g: &Graph, s: &CyclicSignature) -> Result<LiftSpectrumReport> {
    let lift = lift_graph(g, s)?;
    let lifted = HermitianMatrix::from_real(lift.graph.adjacency_matrix())?.eigenvalues();
    let mut union = Spectrum::from_unsorted(Vec::new());
    for power in 0..s.k() {
        union = union.merge(&signed_adjacency(g, s, power)?.eigenvalues());
    }
    debug_assert_eq!(union.len(), lifted.len());
    let max_discrepancy = multiset_max_discrepancy(&lifted, &union)
        .ok_or_else(|| Error::pre("lift spectrum size mismatch"))?;
    let rho = lifted.spectral_radius().max(union.spectral_radius());
    Ok(LiftSpectrumReport {
        matches: max_discrepancy <= SPECTRUM_TOL * (1.0 + rho),
        max_discrepancy,
    })
}

/// The new eigenvalues of the lift: multiset union of the spectra of
/// `A^{s,i}` for i = 1..k-1, sorted.
pub fn new_eigenvalues(g: &Graph, s: &CyclicSignature) -> Result<Spectrum> {
    let mut union = Spectrum::from_unsorted(Vec::new());
    for power in 1..s.k() {
        union = union.merge(&signed_adjacency(g, s, power)?.eigenvalues());
    }
    Ok(union)
}

/// For bipartite g, the spectrum of every Hadamard power is symmetric about
/// zero; checks this within `1e-8 * (1 + spectral radius)`.
pub fn bipartite_symmetry_check(g: &Graph, s: &CyclicSignature, power: u32) -> Result<bool> {
    if g.bipartition().is_none() {
        return Err(Error::pre(
            "bipartite symmetry check requires a bipartite graph",
        ));
    }
    let spectrum = signed_adjacency(g, s, power)?.eigenvalues();
    let tol = SPECTRUM_TOL * (1.0 + spectrum.spectral_radius());
    Ok(spectrum.symmetry_discrepancy() <= tol)
}

/// Checks both halves of switching invariance: the sorted spectra of
/// `A^{s,i}` and `A^{s^theta,i}` agree within 1e-8, and the explicit
/// conjugation identity `A^{s^theta,i} = D^i(theta) A^{s,i} conj(D^i(theta))`
/// holds entrywise within 1e-12.
pub fn switching_invariance_check(
    g: &Graph,
    s: &CyclicSignature,
    theta: &SwitchingFunction,
    power: u32,
) -> Result<bool> {
    let switched = switch(g, s, theta)?;
    let a = signed_adjacency(g, s, power)?;
    let b = signed_adjacency(g, &switched, power)?;

    let sa = a.eigenvalues();
    let sb = b.eigenvalues();
    let rho = sa.spectral_radius().max(sb.spectral_radius());
    let spectra_agree = multiset_max_discrepancy(&sa, &sb)
        .map(|d| d <= SPECTRUM_TOL * (1.0 + rho))
        .unwrap_or(false);

    let roots = roots_of_unity(s.k());
    let n = g.vertex_count();
    let d: Vec<Complex64> = (0..n)
        .map(|u| roots[((power as u64 * theta.at(u) as u64) % s.k() as u64) as usize])
        .collect();
    let mut max_entry_diff = 0.0f64;
    for u in 0..n {
        for v in 0..n {
            let conjugated = d[u] * a.entry(u, v) * d[v].conj();
            max_entry_diff = max_entry_diff.max((conjugated - b.entry(u, v)).norm());
        }
    }
    Ok(spectra_agree && max_entry_diff <= ENTRYWISE_TOL)
}

/// The 0/1 level matrix `A_l`: entry (u, v) is 1 iff the oriented edge
/// (u, v) carries exponent l. Satisfies `A_l = A_{k-l}^T`.
pub fn level_matrix(g: &Graph, s: &CyclicSignature, level: u32) -> DMatrix<f64> {
    let n = g.vertex_count();
    let k = s.k();
    let mut m = DMatrix::zeros(n, n);
    for (j, &(u, v)) in g.edges().iter().enumerate() {
        let l = s.exponents()[j];
        if l == level {
            m[(u, v)] = 1.0;
        }
        if (k - l) % k == level {
            m[(v, u)] = 1.0;
        }
    }
    m
}

/// Assembles the lift adjacency as the block-circulant matrix with block
/// (b, c) equal to `A_{(c-b) mod k}`, in fiber-major vertex layout
/// (fiber index major, base vertex minor).
pub fn block_circulant_adjacency(g: &Graph, s: &CyclicSignature) -> DMatrix<f64> {
    let n = g.vertex_count();
    let k = s.k() as usize;
    let levels: Vec<DMatrix<f64>> = (0..s.k()).map(|l| level_matrix(g, s, l)).collect();
    let mut m = DMatrix::zeros(k * n, k * n);
    for b in 0..k {
        for c in 0..k {
            let block = &levels[(c + k - b) % k];
            for u in 0..n {
                for v in 0..n {
                    m[(b * n + u, c * n + v)] = block[(u, v)];
                }
            }
        }
    }
    m
}

/// Reconstructs `A^{s,i}` as the exact sum `sum_l xi^{i l} A_l`.
pub fn hadamard_power_from_levels(
    g: &Graph,
    s: &CyclicSignature,
    power: u32,
) -> DMatrix<Complex64> {
    let n = g.vertex_count();
    let k = s.k();
    let roots = roots_of_unity(k);
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for l in 0..k {
        let coeff = roots[((power as u64 * l as u64) % k as u64) as usize];
        let level = level_matrix(g, s, l);
        for u in 0..n {
            for v in 0..n {
                if level[(u, v)] != 0.0 {
                    m[(u, v)] += coeff * level[(u, v)];
                }
            }
        }
    }
    m
}

/// Spectrum report JSON: sorted eigenvalues plus the matrix size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub spectrum: Vec<f64>,
    pub matrix_size: usize,
}

impl SpectrumReport {
    pub fn new(spectrum: &Spectrum) -> Self {
        SpectrumReport {
            spectrum: spectrum.values().to_vec(),
            matrix_size: spectrum.len(),
        }
    }
}
