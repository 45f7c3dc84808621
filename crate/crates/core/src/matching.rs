//! Exact matching counts and the matching polynomial
//! `mu_G(x) = sum_i (-1)^i m_i x^{N - 2i}`.
//!
//! Counts are computed by the vertex-deletion recursion
//! `m(G) = m(G - v) + sum_{u ~ v} x * m(G - v - u)` (v unmatched, or matched
//! to a neighbor), memoized on induced-subgraph vertex masks so repeated
//! subproblems are shared. Counts are exact 128-bit integers; overflow is an
//! error rather than a silent wrap.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::Polynomial;

/// Number of i-matchings for i = 0..floor(N/2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingCounts {
    counts: Vec<i128>,
}

impl MatchingCounts {
    /// `m_i`, zero beyond the maximum matching size.
    pub fn count(&self, i: usize) -> i128 {
        self.counts.get(i).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[i128] {
        &self.counts
    }

    /// Exact decimal strings, the JSON-safe form.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.counts.iter().map(i128::to_string).collect()
    }
}

/// Exact matching counts of `g`. Supports up to 128 vertices.
pub fn matching_counts(g: &Graph) -> Result<MatchingCounts> {
    let n = g.vertex_count();
    if n > 128 {
        return Err(Error::pre(format!(
            "matching counts support at most 128 vertices, got {n}"
        )));
    }
    let full: u128 = if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    };
    let mut memo: HashMap<u128, Vec<i128>> = HashMap::new();
    let mut counts = rec(g, full, &mut memo)?;
    counts.resize(n / 2 + 1, 0);
    Ok(MatchingCounts { counts })
}

fn rec(g: &Graph, mask: u128, memo: &mut HashMap<u128, Vec<i128>>) -> Result<Vec<i128>> {
    if mask == 0 {
        return Ok(vec![1]);
    }
    if let Some(hit) = memo.get(&mask) {
        return Ok(hit.clone());
    }
    let v = mask.trailing_zeros() as usize;
    let rest = mask & !(1u128 << v);
    // v unmatched.
    let mut counts = rec(g, rest, memo)?;
    // v matched to a present neighbor.
    for &(u, _) in g.incident(v) {
        if mask & (1u128 << u) == 0 {
            continue;
        }
        let sub = rec(g, rest & !(1u128 << u), memo)?;
        if counts.len() < sub.len() + 1 {
            counts.resize(sub.len() + 1, 0);
        }
        for (i, &c) in sub.iter().enumerate() {
            counts[i + 1] = counts[i + 1]
                .checked_add(c)
                .ok_or_else(|| Error::pre("matching counts overflow 128-bit integers"))?;
        }
    }
    memo.insert(mask, counts.clone());
    Ok(counts)
}

/// The matching polynomial with exact integer coefficients.
pub fn matching_polynomial(g: &Graph) -> Result<Polynomial> {
    let n = g.vertex_count();
    let counts = matching_counts(g)?;
    let mut coeffs = vec![0.0; n + 1];
    for (i, &m_i) in counts.counts().iter().enumerate() {
        if n >= 2 * i {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[n - 2 * i] = sign * m_i as f64;
        }
    }
    Ok(Polynomial::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: count matchings by enumerating all edge subsets.
    fn brute_force_counts(g: &Graph) -> Vec<i128> {
        let m = g.edge_count();
        assert!(m <= 20, "oracle is for small graphs");
        let mut counts = vec![0i128; g.vertex_count() / 2 + 1];
        for subset in 0u32..(1 << m) {
            let mut used = vec![false; g.vertex_count()];
            let mut ok = true;
            let mut size = 0;
            for j in 0..m {
                if subset & (1 << j) == 0 {
                    continue;
                }
                let (u, v) = g.endpoints(j);
                if used[u] || used[v] {
                    ok = false;
                    break;
                }
                used[u] = true;
                used[v] = true;
                size += 1;
            }
            if ok {
                counts[size] += 1;
            }
        }
        counts
    }

    #[test]
    fn counts_match_brute_force_on_small_graphs() {
        let graphs = [
            "0 1",
            "0 1\n1 2",
            "0 1\n1 2\n2 0",
            "0 1\n1 2\n2 3\n3 0",
            "0 1\n1 2\n2 3\n3 4\n4 0\n0 2\n1 3",
        ];
        for text in graphs {
            let g = Graph::parse(text).unwrap();
            let got = matching_counts(&g).unwrap();
            let want = brute_force_counts(&g);
            assert_eq!(got.counts(), &want[..], "graph {text:?}");
        }
        let k33 = Graph::complete_bipartite(3).unwrap();
        assert_eq!(
            matching_counts(&k33).unwrap().counts(),
            &brute_force_counts(&k33)[..]
        );
    }

    #[test]
    fn hand_enumerated_examples() {
        let k2 = Graph::parse("0 1").unwrap();
        assert_eq!(matching_counts(&k2).unwrap().counts(), &[1, 1]);

        // Path 0-1-2: both edges share vertex 1.
        let p3 = Graph::parse("0 1\n1 2").unwrap();
        assert_eq!(matching_counts(&p3).unwrap().counts(), &[1, 2]);
        assert_eq!(matching_counts(&p3).unwrap().count(2), 0);

        // C_4 has two perfect matchings.
        let c4 = Graph::parse("0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(matching_counts(&c4).unwrap().counts(), &[1, 4, 2]);
    }

    #[test]
    fn polynomials_from_counts() {
        let k2 = Graph::parse("0 1").unwrap();
        assert_eq!(
            matching_polynomial(&k2).unwrap().coeffs(),
            &[-1.0, 0.0, 1.0]
        );

        let p3 = Graph::parse("0 1\n1 2").unwrap();
        assert_eq!(
            matching_polynomial(&p3).unwrap().coeffs(),
            &[0.0, -2.0, 0.0, 1.0]
        );

        let c4 = Graph::parse("0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(
            matching_polynomial(&c4).unwrap().coeffs(),
            &[2.0, 0.0, -4.0, 0.0, 1.0]
        );
    }

    #[test]
    fn first_counts_are_one_and_edge_count() {
        for g in [
            Graph::complete_bipartite(3).unwrap(),
            Graph::parse("0 1\n1 2\n2 3\n3 4\n4 0").unwrap(),
        ] {
            let c = matching_counts(&g).unwrap();
            assert_eq!(c.count(0), 1);
            assert_eq!(c.count(1), g.edge_count() as i128);
        }
    }

    #[test]
    fn matching_polynomial_is_real_rooted_on_petersen() {
        // Heilmann-Lieb: mu_G is real-rooted; Petersen is the largest corpus
        // case with 15 edges.
        let petersen = crate::corpus::get("petersen").unwrap();
        let mu = matching_polynomial(&petersen).unwrap();
        assert!(mu.is_real_rooted(1e-7).unwrap());
        let bound = 2.0 * 2.0f64.sqrt();
        for r in mu.real_roots_sorted(1e-7).unwrap() {
            assert!(r.abs() <= bound + 1e-9);
        }
    }
}
