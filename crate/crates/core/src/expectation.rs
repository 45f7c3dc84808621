//! Expected characteristic polynomials of signed adjacency matrices over
//! product distributions on edge exponents, plus the numerical checks built
//! on them: real-rootedness of convex combinations and the rank-one
//! decomposition of Hadamard powers.
//!
//! Expectations are computed by full enumeration of the free-edge exponent
//! assignments in edge-lexicographic order, as probability-weighted averages
//! of monic characteristic polynomials. Positive scaling moves no roots, so
//! averages stand in for the underlying partial sums wherever only roots,
//! real-rootedness, or interlacings matter. Enumeration refuses to exceed
//! its budget instead of sampling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hermitian::{roots_of_unity, HermitianMatrix};
use crate::poly::{Polynomial, PolynomialSum, REAL_ROOT_TOL};
use crate::signature::CyclicSignature;
use crate::spectra::{signed_adjacency, ENTRYWISE_TOL};

/// Default enumeration budget: 3^12 completions.
pub const DEFAULT_ENUM_BUDGET: u128 = 531_441;

/// Completions summed sequentially per chunk; chunks merged in order, so
/// results are bit-stable for any worker count.
const CHUNK: u64 = 1024;

/// Per-edge exponent state for an expectation: pinned to one exponent, or
/// free with a distribution over `0..k`.
#[derive(Debug, Clone)]
pub enum EdgeAssignment {
    Fixed(u32),
    Weighted(Vec<f64>),
}

impl EdgeAssignment {
    pub fn uniform(k: u32) -> Self {
        EdgeAssignment::Weighted(vec![1.0 / k as f64; k as usize])
    }
}

/// Expected characteristic polynomial of `A^{s,power}` where each edge
/// exponent is distributed per `assign`. With uniform weights on every edge
/// this is the matching polynomial (for `power >= 1`).
pub fn expected_char_poly(
    g: &Graph,
    k: u32,
    power: u32,
    assign: &[EdgeAssignment],
    budget: u128,
) -> Result<Polynomial> {
    if k < 2 {
        return Err(Error::pre("signature group order k must be at least 2"));
    }
    if power >= k {
        return Err(Error::pre(format!(
            "Hadamard power {power} out of range for k = {k}"
        )));
    }
    if assign.len() != g.edge_count() {
        return Err(Error::pre(format!(
            "assignment covers {} edges but the graph has {}",
            assign.len(),
            g.edge_count()
        )));
    }
    let mut free = Vec::new();
    for (j, a) in assign.iter().enumerate() {
        match a {
            EdgeAssignment::Fixed(l) => {
                if *l >= k {
                    return Err(Error::pre(format!(
                        "fixed exponent {l} out of range for k = {k}"
                    )));
                }
            }
            EdgeAssignment::Weighted(p) => {
                if p.len() != k as usize {
                    return Err(Error::pre(format!(
                        "weight row on edge {j} has {} entries, expected {k}",
                        p.len()
                    )));
                }
                if p.iter().any(|&w| !(w >= 0.0)) {
                    return Err(Error::pre(format!("negative or NaN weight on edge {j}")));
                }
                let sum: f64 = p.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(Error::pre(format!(
                        "weights on edge {j} sum to {sum}, expected 1"
                    )));
                }
                free.push(j);
            }
        }
    }
    let total_u128 = (k as u128)
        .checked_pow(free.len() as u32)
        .ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            budget,
        })?;
    if total_u128 > budget {
        return Err(Error::BudgetExceeded {
            required: total_u128,
            budget,
        });
    }
    let total = u64::try_from(total_u128).map_err(|_| Error::BudgetExceeded {
        required: total_u128,
        budget,
    })?;

    // Positional values of each free-edge digit, first free edge most
    // significant: enumeration order is edge-lexicographic.
    let mut place = vec![1u64; free.len()];
    for t in (0..free.len().saturating_sub(1)).rev() {
        place[t] = place[t + 1] * k as u64;
    }

    let n = g.vertex_count();
    let base_exps: Vec<u32> = assign
        .iter()
        .map(|a| match a {
            EdgeAssignment::Fixed(l) => *l,
            EdgeAssignment::Weighted(_) => 0,
        })
        .collect();

    let chunk_count = total.div_ceil(CHUNK).max(1);
    let partials: Vec<PolynomialSum> = (0..chunk_count)
        .into_par_iter()
        .map(|ci| {
            let mut acc = PolynomialSum::new(n + 1);
            let mut exps = base_exps.clone();
            let lo = ci * CHUNK;
            let hi = (lo + CHUNK).min(total);
            for c in lo..hi {
                let mut weight = 1.0;
                for (t, &j) in free.iter().enumerate() {
                    let digit = ((c / place[t]) % k as u64) as usize;
                    exps[j] = digit as u32;
                    if let EdgeAssignment::Weighted(p) = &assign[j] {
                        weight *= p[digit];
                    }
                }
                if weight == 0.0 {
                    continue;
                }
                let spectrum = hadamard_power_matrix(g, k, power, &exps).eigenvalues();
                acc.add_scaled(&Polynomial::from_roots(spectrum.values()), weight);
            }
            acc
        })
        .collect();

    let mut sum = PolynomialSum::new(n + 1);
    for part in &partials {
        sum.merge(part);
    }
    Ok(sum.into_polynomial())
}

/// `A^{s,power}` straight from an exponent array, skipping signature
/// construction in the enumeration hot path.
fn hadamard_power_matrix(g: &Graph, k: u32, power: u32, exps: &[u32]) -> HermitianMatrix {
    let roots = roots_of_unity(k);
    let n = g.vertex_count();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (j, &(u, v)) in g.edges().iter().enumerate() {
        let t = ((power as u64 * exps[j] as u64) % k as u64) as usize;
        m[(u, v)] = roots[t];
        m[(v, u)] = roots[t].conj();
    }
    HermitianMatrix::new_unchecked(m)
}

/// Expectation under the uniform distribution on every edge.
pub fn uniform_expected_char_poly(
    g: &Graph,
    k: u32,
    power: u32,
    budget: u128,
) -> Result<Polynomial> {
    let assign: Vec<EdgeAssignment> = (0..g.edge_count())
        .map(|_| EdgeAssignment::uniform(k))
        .collect();
    expected_char_poly(g, k, power, &assign, budget)
}

/// Outcome of sampling random product distributions and testing the
/// weighted expected characteristic polynomial for real roots.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexCombinationReport {
    pub trials: u64,
    pub failures: u64,
    /// Worst relative imaginary part seen across all trials' roots.
    pub worst_relative_imag: f64,
}

/// Draws `trials` random distributions per edge (uniform on the simplex),
/// forms the weighted expected characteristic polynomial, and tests
/// real-rootedness within [`REAL_ROOT_TOL`].
pub fn convex_combination_real_rooted_check(
    g: &Graph,
    k: u32,
    power: u32,
    trials: u64,
    seed: u64,
    budget: u128,
) -> Result<ConvexCombinationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let assign: Vec<EdgeAssignment> = (0..g.edge_count())
            .map(|_| EdgeAssignment::Weighted(random_simplex_point(k as usize, &mut rng)))
            .collect();
        let p = expected_char_poly(g, k, power, &assign, budget)?;
        let imag = p.max_relative_imag()?;
        worst = worst.max(imag);
        if imag > REAL_ROOT_TOL {
            failures += 1;
        }
    }
    Ok(ConvexCombinationReport {
        trials,
        failures,
        worst_relative_imag: worst,
    })
}

/// Uniform sample from the probability simplex via normalized exponentials.
pub fn random_simplex_point(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// Verifies `A^{s,power} = sum_j r_j r_j^* - D` entrywise within 1e-12,
/// where r_j has `alpha` at one endpoint and `conj(alpha)` at the other with
/// `alpha^2 = s_j^power` realized as a 2k-th root of unity, and D is the
/// degree diagonal.
pub fn rank_one_decomposition_check(g: &Graph, s: &CyclicSignature, power: u32) -> Result<bool> {
    if power == 0 {
        return Err(Error::pre("rank-one decomposition requires power >= 1"));
    }
    let a = signed_adjacency(g, s, power)?;
    let k = s.k();
    let half_roots = roots_of_unity(2 * k);
    let n = g.vertex_count();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (j, &(u, v)) in g.edges().iter().enumerate() {
        let alpha =
            half_roots[((power as u64 * s.exponents()[j] as u64) % (2 * k) as u64) as usize];
        // r r^* restricted to the {u, v} block.
        m[(u, u)] += alpha * alpha.conj();
        m[(v, v)] += alpha.conj() * alpha;
        m[(u, v)] += alpha * alpha;
        m[(v, u)] += alpha.conj() * alpha.conj();
    }
    for u in 0..n {
        m[(u, u)] -= Complex64::new(g.degree(u) as f64, 0.0);
    }
    let mut max_diff = 0.0f64;
    for u in 0..n {
        for v in 0..n {
            max_diff = max_diff.max((m[(u, v)] - a.entry(u, v)).norm());
        }
    }
    Ok(max_diff <= ENTRYWISE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::matching_polynomial;
    use rand::SeedableRng;

    fn max_coeff_deviation(a: &Polynomial, b: &Polynomial) -> f64 {
        let len = a.coeffs().len().max(b.coeffs().len());
        (0..len)
            .map(|i| {
                let x = a.coeffs().get(i).copied().unwrap_or(0.0);
                let y = b.coeffs().get(i).copied().unwrap_or(0.0);
                (x - y).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn no_free_edges_gives_char_poly() {
        let g = Graph::parse("0 1\n1 2").unwrap();
        let assign = vec![EdgeAssignment::Fixed(1), EdgeAssignment::Fixed(2)];
        let p = expected_char_poly(&g, 3, 1, &assign, DEFAULT_ENUM_BUDGET).unwrap();
        let s = CyclicSignature::from_exponents(&g, 3, vec![1, 2]).unwrap();
        let direct = crate::poly::char_poly(&signed_adjacency(&g, &s, 1).unwrap());
        assert!(max_coeff_deviation(&p, &direct) < 1e-12);
    }

    #[test]
    fn k2_every_completion_is_x2_minus_1() {
        let g = Graph::parse("0 1").unwrap();
        let p = uniform_expected_char_poly(&g, 3, 1, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(max_coeff_deviation(&p, &Polynomial::from_coeffs(vec![-1.0, 0.0, 1.0])) < 1e-12);
    }

    #[test]
    fn uniform_expectation_equals_matching_polynomial() {
        for name in ["p3", "c3", "c4", "k23"] {
            let g = crate::corpus::get(name).unwrap();
            let mu = matching_polynomial(&g).unwrap();
            for k in [2u32, 3] {
                for power in 1..k {
                    let p = uniform_expected_char_poly(&g, k, power, DEFAULT_ENUM_BUDGET).unwrap();
                    let dev = max_coeff_deviation(&p, &mu);
                    assert!(dev <= 1e-6, "{name} k={k} i={power}: deviation {dev}");
                }
            }
        }
    }

    #[test]
    fn power_zero_expectation_is_plain_char_poly() {
        // For i = 0 every completion gives A itself.
        let g = crate::corpus::get("c4").unwrap();
        let p = uniform_expected_char_poly(&g, 3, 0, DEFAULT_ENUM_BUDGET).unwrap();
        let direct =
            crate::poly::char_poly(&HermitianMatrix::from_real(g.adjacency_matrix()).unwrap());
        assert!(max_coeff_deviation(&p, &direct) < 1e-9);
    }

    #[test]
    fn budget_is_enforced() {
        let g = crate::corpus::get("k33").unwrap();
        let err = uniform_expected_char_poly(&g, 3, 1, 100).unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                required: 19683,
                budget: 100
            }
        ));
    }

    #[test]
    fn malformed_weights_are_rejected() {
        let g = Graph::parse("0 1").unwrap();
        let bad_sum = vec![EdgeAssignment::Weighted(vec![0.5, 0.2, 0.2])];
        assert!(expected_char_poly(&g, 3, 1, &bad_sum, 100).is_err());
        let bad_len = vec![EdgeAssignment::Weighted(vec![0.5, 0.5])];
        assert!(expected_char_poly(&g, 3, 1, &bad_len, 100).is_err());
        let negative = vec![EdgeAssignment::Weighted(vec![1.5, -0.5, 0.0])];
        assert!(expected_char_poly(&g, 3, 1, &negative, 100).is_err());
    }

    #[test]
    fn point_mass_weights_match_fixed() {
        let g = crate::corpus::get("c3").unwrap();
        let fixed: Vec<EdgeAssignment> = vec![
            EdgeAssignment::Fixed(1),
            EdgeAssignment::Fixed(0),
            EdgeAssignment::Fixed(2),
        ];
        let point: Vec<EdgeAssignment> = [1usize, 0, 2]
            .iter()
            .map(|&l| {
                let mut w = vec![0.0; 3];
                w[l] = 1.0;
                EdgeAssignment::Weighted(w)
            })
            .collect();
        let a = expected_char_poly(&g, 3, 1, &fixed, DEFAULT_ENUM_BUDGET).unwrap();
        let b = expected_char_poly(&g, 3, 1, &point, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(max_coeff_deviation(&a, &b) < 1e-12);
    }

    #[test]
    fn convex_combinations_stay_real_rooted() {
        for name in ["c3", "p4"] {
            let g = crate::corpus::get(name).unwrap();
            let report =
                convex_combination_real_rooted_check(&g, 3, 1, 25, 42, DEFAULT_ENUM_BUDGET)
                    .unwrap();
            assert_eq!(
                report.failures, 0,
                "{name}: worst {}",
                report.worst_relative_imag
            );
        }
    }

    #[test]
    fn rank_one_decomposition_examples() {
        // K_2 with l = 0, i = 1: r = (1, 1), r r^* - D = adjacency.
        let g = Graph::parse("0 1").unwrap();
        let s = CyclicSignature::identity(&g, 3).unwrap();
        assert!(rank_one_decomposition_check(&g, &s, 1).unwrap());

        // K_2, k = 3, l = 1: alpha = e^{i pi / 3}, alpha^2 = xi.
        let s = CyclicSignature::from_exponents(&g, 3, vec![1]).unwrap();
        assert!(rank_one_decomposition_check(&g, &s, 1).unwrap());
        assert!(rank_one_decomposition_check(&g, &s, 0).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for name in ["c3", "c5", "k4", "k33"] {
            let g = crate::corpus::get(name).unwrap();
            for k in 2..=5u32 {
                let s = CyclicSignature::random(&g, k, &mut rng).unwrap();
                for power in 1..k {
                    assert!(
                        rank_one_decomposition_check(&g, &s, power).unwrap(),
                        "{name} k={k} i={power}"
                    );
                }
            }
        }
    }

    #[test]
    fn simplex_samples_are_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = random_simplex_point(4, &mut rng);
            assert!(p.iter().all(|&x| x >= 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
