//! Searches for signatures whose Hadamard-power spectra meet a spectral
//! bound: exhaustive enumeration in edge-lexicographic order, seeded random
//! sampling, and the greedy conditional-expectation walk down the tree of
//! partial assignments.
//!
//! All strategies are deterministic: exhaustive results are independent of
//! worker count (first passing assignment in enumeration order wins), random
//! search replays exactly from its seed, and greedy ties break to the
//! smallest exponent.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expectation::{expected_char_poly, EdgeAssignment};
use crate::graph::Graph;
use crate::signature::{CyclicSignature, SignatureFile};
use crate::spectra::{new_eigenvalues, signed_adjacency};

/// Acceptance slack: the spectral bound is non-strict, eigenvalues exactly
/// on it pass.
pub const RAMANUJAN_TOL: f64 = 1e-9;

/// Default exhaustive-search budget: 3^13 assignments.
pub const DEFAULT_SEARCH_BUDGET: u128 = 1_594_323;

/// What "passing" means: one Hadamard power bounded above, or all new
/// eigenvalues bounded in absolute value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    OneSided { power: u32 },
    TwoSided,
}

impl SearchMode {
    fn validate(&self, k: u32) -> Result<()> {
        match *self {
            SearchMode::OneSided { power } => {
                if power == 0 || power >= k {
                    Err(Error::pre(format!(
                        "one-sided mode requires 1 <= i <= k-1, got i = {power} with k = {k}"
                    )))
                } else {
                    Ok(())
                }
            }
            SearchMode::TwoSided => Ok(()),
        }
    }
}

/// Result of a signature search.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub signature: Option<CyclicSignature>,
    /// Candidates examined, in the deterministic order of the strategy.
    pub tested: u64,
    /// Statistic of the returned signature when present, otherwise the best
    /// (smallest) statistic seen.
    pub best_lambda_max: f64,
    pub strategy: &'static str,
    pub seed: u64,
    /// Number of passing assignments, when census mode scanned everything.
    pub census: Option<u64>,
}

/// Serialized form of a search outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcomeFile {
    pub signature: Option<SignatureFile>,
    pub tested: u64,
    pub best_lambda_max: f64,
    pub strategy: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<u64>,
}

impl SearchOutcome {
    pub fn to_file(&self, g: &Graph) -> SearchOutcomeFile {
        SearchOutcomeFile {
            signature: self
                .signature
                .as_ref()
                .map(|s| SignatureFile::from_signature(g, s)),
            tested: self.tested,
            best_lambda_max: self.best_lambda_max,
            strategy: self.strategy.to_string(),
            seed: self.seed,
            census: self.census,
        }
    }
}

/// True iff the largest eigenvalue of `A^{s,power}` is at most
/// `rho + 1e-9`.
pub fn one_sided_ok(g: &Graph, s: &CyclicSignature, power: u32, rho: f64) -> Result<bool> {
    if power == 0 || power >= s.k() {
        return Err(Error::pre(format!(
            "one-sided check requires 1 <= i <= k-1, got i = {power} with k = {}",
            s.k()
        )));
    }
    let spectrum = signed_adjacency(g, s, power)?.eigenvalues();
    Ok(spectrum.max().unwrap_or(0.0) <= rho + RAMANUJAN_TOL)
}

/// True iff every new eigenvalue (all powers i = 1..k-1) has absolute value
/// at most `rho + 1e-9`.
pub fn two_sided_ok(g: &Graph, s: &CyclicSignature, rho: f64) -> Result<bool> {
    Ok(new_eigenvalues(g, s)?.spectral_radius() <= rho + RAMANUJAN_TOL)
}

/// The statistic a candidate is judged by under `mode`.
fn candidate_stat(g: &Graph, s: &CyclicSignature, mode: SearchMode) -> Result<f64> {
    match mode {
        SearchMode::OneSided { power } => Ok(signed_adjacency(g, s, power)?
            .eigenvalues()
            .max()
            .unwrap_or(0.0)),
        SearchMode::TwoSided => Ok(new_eigenvalues(g, s)?.spectral_radius()),
    }
}

/// Cross-check run on every hit: on a bipartite graph, one-sided bounds for
/// every power force the two-sided bound via spectrum symmetry. A mismatch
/// means the eigensolver contradicted itself.
pub(crate) fn hit_cross_check(g: &Graph, s: &CyclicSignature, rho: f64) -> Result<()> {
    if g.bipartition().is_none() {
        return Ok(());
    }
    let all_one_sided = (1..s.k())
        .map(|power| one_sided_ok(g, s, power, rho))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|ok| ok);
    if all_one_sided && !two_sided_ok(g, s, rho)? {
        return Err(Error::pre(
            "one-sided bounds hold for every power but the two-sided check fails; \
             eigensolver inconsistency",
        ));
    }
    Ok(())
}

fn decode_assignment(g: &Graph, k: u32, index: u64) -> CyclicSignature {
    let m = g.edge_count();
    let mut exps = vec![0u32; m];
    let mut rem = index;
    for j in (0..m).rev() {
        exps[j] = (rem % k as u64) as u32;
        rem /= k as u64;
    }
    CyclicSignature::from_exponents(g, k, exps).expect("decoded exponents are in range")
}

/// Scans all k^m signatures in edge-lexicographic order. Without census,
/// stops at the first passing signature; with census, scans everything and
/// also reports how many assignments pass.
pub fn exhaustive_search(
    g: &Graph,
    k: u32,
    mode: SearchMode,
    rho: f64,
    census: bool,
    budget: u128,
) -> Result<SearchOutcome> {
    if k < 2 {
        return Err(Error::pre("signature group order k must be at least 2"));
    }
    mode.validate(k)?;
    let total_u128 =
        (k as u128)
            .checked_pow(g.edge_count() as u32)
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

    let eval = |c: u64| -> (f64, bool) {
        let s = decode_assignment(g, k, c);
        let stat = candidate_stat(g, &s, mode).expect("valid candidate");
        (stat, stat <= rho + RAMANUJAN_TOL)
    };

    if census {
        // Full scan: min over f64 and index minima commute with any
        // partitioning, so the reduction is worker-count independent.
        let (first, best, count) = (0..total)
            .into_par_iter()
            .fold(
                || (None::<u64>, f64::INFINITY, 0u64),
                |(first, best, count), c| {
                    let (stat, pass) = eval(c);
                    let first = match (first, pass) {
                        (None, true) => Some(c),
                        (f, _) => f,
                    };
                    (first, best.min(stat), count + u64::from(pass))
                },
            )
            .reduce(
                || (None, f64::INFINITY, 0u64),
                |a, b| {
                    let first = match (a.0, b.0) {
                        (Some(x), Some(y)) => Some(x.min(y)),
                        (x, y) => x.or(y),
                    };
                    (first, a.1.min(b.1), a.2 + b.2)
                },
            );
        let signature = first.map(|c| decode_assignment(g, k, c));
        let best_lambda_max = match &signature {
            Some(s) => {
                hit_cross_check(g, s, rho)?;
                candidate_stat(g, s, mode)?
            }
            None => best,
        };
        return Ok(SearchOutcome {
            signature,
            tested: total,
            best_lambda_max,
            strategy: "exhaustive",
            seed: 0,
            census: Some(count),
        });
    }

    match (0..total).into_par_iter().find_first(|&c| eval(c).1) {
        Some(c) => {
            let s = decode_assignment(g, k, c);
            hit_cross_check(g, &s, rho)?;
            let stat = candidate_stat(g, &s, mode)?;
            Ok(SearchOutcome {
                signature: Some(s),
                tested: c + 1,
                best_lambda_max: stat,
                strategy: "exhaustive",
                seed: 0,
                census: None,
            })
        }
        None => {
            let best = (0..total)
                .into_par_iter()
                .map(|c| eval(c).0)
                .reduce(|| f64::INFINITY, f64::min);
            Ok(SearchOutcome {
                signature: None,
                tested: total,
                best_lambda_max: best,
                strategy: "exhaustive",
                seed: 0,
                census: None,
            })
        }
    }
}

/// Draws uniform signatures from a seeded generator until one passes or the
/// iteration budget is exhausted.
pub fn random_search(
    g: &Graph,
    k: u32,
    mode: SearchMode,
    rho: f64,
    max_iters: u64,
    seed: u64,
) -> Result<SearchOutcome> {
    if max_iters == 0 {
        return Err(Error::pre("random search requires max_iters >= 1"));
    }
    mode.validate(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for it in 0..max_iters {
        let s = CyclicSignature::random(g, k, &mut rng)?;
        let stat = candidate_stat(g, &s, mode)?;
        best = best.min(stat);
        if stat <= rho + RAMANUJAN_TOL {
            hit_cross_check(g, &s, rho)?;
            return Ok(SearchOutcome {
                signature: Some(s),
                tested: it + 1,
                best_lambda_max: stat,
                strategy: "random",
                seed,
                census: None,
            });
        }
    }
    Ok(SearchOutcome {
        signature: None,
        tested: max_iters,
        best_lambda_max: best,
        strategy: "random",
        seed,
        census: None,
    })
}

/// Fixes edge exponents one at a time in edge order; at each step every
/// branch exponent t is scored by the largest root of the expected
/// characteristic polynomial over uniform completions, and the smallest
/// largest-root branch wins (ties to the smallest t). The walk ends at a
/// full signature whose largest eigenvalue is bounded by the largest root of
/// the matching polynomial.
pub fn greedy_conditional_search(
    g: &Graph,
    k: u32,
    power: u32,
    budget: u128,
) -> Result<SearchOutcome> {
    if k < 2 {
        return Err(Error::pre("signature group order k must be at least 2"));
    }
    if power == 0 || power >= k {
        return Err(Error::pre(format!(
            "greedy search requires 1 <= i <= k-1, got i = {power} with k = {k}"
        )));
    }
    let m = g.edge_count();
    // Step q evaluates k branches of k^(m-q-1) completions each; the first
    // step dominates, so the whole walk fits iff k^m does.
    let required = (k as u128)
        .checked_pow(m as u32)
        .ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            budget,
        })?;
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    // Branch scores equal in exact arithmetic differ by roundoff here; treat
    // anything this close as a tie so the smallest exponent wins.
    const TIE_TOL: f64 = 1e-12;
    let mut chosen: Vec<u32> = Vec::with_capacity(m);
    let mut evaluations = 0u64;
    for q in 0..m {
        let mut best_t = 0u32;
        let mut best_root = f64::INFINITY;
        for t in 0..k {
            let assign: Vec<EdgeAssignment> = (0..m)
                .map(|j| {
                    if j < q {
                        EdgeAssignment::Fixed(chosen[j])
                    } else if j == q {
                        EdgeAssignment::Fixed(t)
                    } else {
                        EdgeAssignment::uniform(k)
                    }
                })
                .collect();
            let p = expected_char_poly(g, k, power, &assign, budget)?;
            // Branch scores are real-rooted by the interlacing theory;
            // score by max real part so roundoff-split double roots do not
            // abort the walk.
            let root = p.largest_root_assuming_real(1e-3)?;
            evaluations += 1;
            if root + TIE_TOL * (1.0 + root.abs()) < best_root {
                best_root = root;
                best_t = t;
            }
        }
        chosen.push(best_t);
    }
    let s = CyclicSignature::from_exponents(g, k, chosen)?;
    let stat = signed_adjacency(g, &s, power)?
        .eigenvalues()
        .max()
        .unwrap_or(0.0);
    Ok(SearchOutcome {
        signature: Some(s),
        tested: evaluations,
        best_lambda_max: stat,
        strategy: "greedy",
        seed: 0,
        census: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::matching_polynomial;
    use crate::poly::REAL_ROOT_TOL;

    #[test]
    fn one_sided_on_single_edge() {
        let g = Graph::parse("0 1").unwrap();
        for l in 0..3 {
            let s = CyclicSignature::from_exponents(&g, 3, vec![l]).unwrap();
            assert!(one_sided_ok(&g, &s, 1, 1.0).unwrap());
            assert!(!one_sided_ok(&g, &s, 1, 0.5).unwrap());
        }
        let s = CyclicSignature::identity(&g, 3).unwrap();
        assert!(one_sided_ok(&g, &s, 0, 1.0).is_err());
        assert!(one_sided_ok(&g, &s, 3, 1.0).is_err());
    }

    #[test]
    fn c4_flipped_cycle_reaches_sqrt_two() {
        // C_4 with cycle exponent 1 at k = 2: eigenvalues 2 cos((2j+1)pi/4).
        let g = crate::corpus::get("c4").unwrap();
        let s = CyclicSignature::from_exponents(&g, 2, vec![1, 0, 0, 0]).unwrap();
        let spectrum = signed_adjacency(&g, &s, 1).unwrap().eigenvalues();
        let expect = 2.0f64.sqrt();
        assert!((spectrum.max().unwrap() - expect).abs() < 1e-9);
        assert!(one_sided_ok(&g, &s, 1, 2.0).unwrap());
    }

    #[test]
    fn triangle_identity_hits_its_spectral_radius() {
        let g = crate::corpus::get("c3").unwrap();
        let s = CyclicSignature::identity(&g, 3).unwrap();
        // Identity signature: lambda_max = 2 = rho bound for d = 2.
        assert!(one_sided_ok(&g, &s, 1, 2.0).unwrap());
    }

    #[test]
    fn two_sided_on_triangle_phase_one() {
        let g = crate::corpus::get("c3").unwrap();
        let s = CyclicSignature::from_exponents(&g, 3, vec![1, 0, 0]).unwrap();
        // New eigenvalues are the C_9 eigenvalues away from sigma(C_3); the
        // largest magnitude is 2 cos(pi / 9).
        let new = new_eigenvalues(&g, &s).unwrap();
        let expect = 2.0 * (std::f64::consts::PI / 9.0).cos();
        assert!((new.spectral_radius() - expect).abs() < 1e-9);
        assert!(two_sided_ok(&g, &s, 2.0).unwrap());
        assert!(!two_sided_ok(&g, &s, 1.8).unwrap());
    }

    #[test]
    fn two_sided_follows_from_one_sided_on_bipartite() {
        let g = crate::corpus::get("c4").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let rho = 2.0;
        for _ in 0..20 {
            let s = CyclicSignature::random(&g, 3, &mut rng).unwrap();
            let all_one_sided = (1..3).all(|i| one_sided_ok(&g, &s, i, rho).unwrap());
            if all_one_sided {
                assert!(two_sided_ok(&g, &s, rho).unwrap());
            }
        }
    }

    #[test]
    fn exhaustive_first_hit_on_k2() {
        let g = Graph::parse("0 1").unwrap();
        let out =
            exhaustive_search(&g, 3, SearchMode::OneSided { power: 1 }, 1.0, false, 100).unwrap();
        assert_eq!(out.tested, 1);
        assert!(out.signature.is_some());
        assert!((out.best_lambda_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_failure_scans_everything() {
        let g = crate::corpus::get("c3").unwrap();
        let out =
            exhaustive_search(&g, 2, SearchMode::OneSided { power: 1 }, -3.0, false, 100).unwrap();
        assert!(out.signature.is_none());
        assert_eq!(out.tested, 8);
        assert!(out.best_lambda_max > -3.0);
    }

    #[test]
    fn exhaustive_census_counts_passes() {
        // Two-sided on C_4 at k = 2 with rho = sqrt(2): only the four
        // odd-cycle-exponent signatures achieve the phased spectrum.
        let g = crate::corpus::get("c4").unwrap();
        let out = exhaustive_search(
            &g,
            2,
            SearchMode::TwoSided,
            2.0f64.sqrt(),
            true,
            DEFAULT_SEARCH_BUDGET,
        )
        .unwrap();
        assert_eq!(out.tested, 16);
        assert_eq!(out.census, Some(8));
        let s = out.signature.unwrap();
        // First passing assignment in edge-lexicographic order: 0001.
        assert_eq!(s.exponents(), &[0, 0, 0, 1]);
    }

    #[test]
    fn exhaustive_budget_enforced() {
        let g = crate::corpus::get("petersen").unwrap();
        let err = exhaustive_search(&g, 3, SearchMode::TwoSided, 2.9, false, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn random_search_is_deterministic() {
        let g = crate::corpus::get("k33").unwrap();
        let rho = 2.0 * 2.0f64.sqrt();
        let a = random_search(&g, 3, SearchMode::TwoSided, rho, 500, 1).unwrap();
        let b = random_search(&g, 3, SearchMode::TwoSided, rho, 500, 1).unwrap();
        assert!(a.signature.is_some());
        assert_eq!(a.signature, b.signature);
        assert_eq!(a.tested, b.tested);
        assert!(random_search(&g, 3, SearchMode::TwoSided, rho, 0, 1).is_err());
    }

    #[test]
    fn random_search_k2_immediate() {
        let g = Graph::parse("0 1").unwrap();
        let out = random_search(&g, 3, SearchMode::TwoSided, 1.0, 10, 0).unwrap();
        assert_eq!(out.tested, 1);
        assert!(out.signature.is_some());
    }

    #[test]
    fn greedy_on_k2_prefers_smallest_tie() {
        let g = Graph::parse("0 1").unwrap();
        let out = greedy_conditional_search(&g, 3, 1, 100).unwrap();
        let s = out.signature.unwrap();
        assert_eq!(s.exponents(), &[0]);
        assert!((out.best_lambda_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn greedy_meets_matching_root_bound_on_paths() {
        // P_3: largest root of x^3 - 2x is sqrt(2).
        let g = crate::corpus::get("p3").unwrap();
        let out = greedy_conditional_search(&g, 3, 1, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(out.best_lambda_max <= 2.0f64.sqrt() + 1e-6);

        // C_4 at k = 2: largest root of x^4 - 4x^2 + 2.
        let g = crate::corpus::get("c4").unwrap();
        let out = greedy_conditional_search(&g, 2, 1, DEFAULT_SEARCH_BUDGET).unwrap();
        let mu_root = matching_polynomial(&g)
            .unwrap()
            .largest_root(REAL_ROOT_TOL)
            .unwrap();
        assert!((mu_root - (2.0 + 2.0f64.sqrt()).sqrt()).abs() < 1e-9);
        assert!(out.best_lambda_max <= mu_root + 1e-6);
    }

    #[test]
    fn greedy_budget_enforced() {
        let g = crate::corpus::get("petersen").unwrap();
        assert!(matches!(
            greedy_conditional_search(&g, 3, 1, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
