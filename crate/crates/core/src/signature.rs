//! Cyclic signatures: assignments of k-th roots of unity to oriented edges
//! with `s(reverse(e)) = s(e)^{-1}`.
//!
//! Exponents are stored on the canonical orientation of each edge only; the
//! reversal rule is applied on lookup, so inconsistent states are
//! unrepresentable. Switching, balance, and switching equivalence all reduce
//! to modular arithmetic on exponents because the signature group is abelian.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, OrientedEdge};

/// A map from oriented edges to exponents of the k-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSignature {
    k: u32,
    /// Exponent on the canonical orientation of each edge, each in `0..k`.
    exps: Vec<u32>,
}

impl CyclicSignature {
    pub fn from_exponents(g: &Graph, k: u32, exps: Vec<u32>) -> Result<Self> {
        if k < 2 {
            return Err(Error::pre("signature group order k must be at least 2"));
        }
        if exps.len() != g.edge_count() {
            return Err(Error::pre(format!(
                "signature has {} exponents but the graph has {} edges",
                exps.len(),
                g.edge_count()
            )));
        }
        if let Some(bad) = exps.iter().find(|&&l| l >= k) {
            return Err(Error::pre(format!(
                "exponent {bad} out of range for k = {k}"
            )));
        }
        Ok(CyclicSignature { k, exps })
    }

    /// The identity signature (every exponent zero).
    pub fn identity(g: &Graph, k: u32) -> Result<Self> {
        Self::from_exponents(g, k, vec![0; g.edge_count()])
    }

    /// Uniform random signature; each edge exponent is drawn i.i.d. from the
    /// caller's generator, in edge-index order.
    pub fn random(g: &Graph, k: u32, rng: &mut impl Rng) -> Result<Self> {
        if k < 2 {
            return Err(Error::pre("signature group order k must be at least 2"));
        }
        let exps = (0..g.edge_count())
            .map(|_| rng.random_range(0..k))
            .collect();
        Self::from_exponents(g, k, exps)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Exponents on canonical orientations, in edge-index order.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Exponent of an oriented edge; reversal negates mod k.
    pub fn exponent(&self, e: OrientedEdge) -> u32 {
        let l = self.exps[e.edge];
        if e.reversed {
            (self.k - l) % self.k
        } else {
            l
        }
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.exps.len() != g.edge_count() {
            return Err(Error::pre(format!(
                "signature on {} edges does not match graph with {} edges",
                self.exps.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

/// A vertex potential used for switching, exponents in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingFunction {
    k: u32,
    theta: Vec<u32>,
}

impl SwitchingFunction {
    pub fn from_exponents(g: &Graph, k: u32, theta: Vec<u32>) -> Result<Self> {
        if k < 2 {
            return Err(Error::pre(
                "switching function group order k must be at least 2",
            ));
        }
        if theta.len() != g.vertex_count() {
            return Err(Error::pre(format!(
                "switching function has {} entries but the graph has {} vertices",
                theta.len(),
                g.vertex_count()
            )));
        }
        if let Some(bad) = theta.iter().find(|&&t| t >= k) {
            return Err(Error::pre(format!(
                "exponent {bad} out of range for k = {k}"
            )));
        }
        Ok(SwitchingFunction { k, theta })
    }

    pub fn random(g: &Graph, k: u32, rng: &mut impl Rng) -> Result<Self> {
        let theta = (0..g.vertex_count())
            .map(|_| rng.random_range(0..k))
            .collect();
        Self::from_exponents(g, k, theta)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn exponents(&self) -> &[u32] {
        &self.theta
    }

    pub fn at(&self, v: usize) -> u32 {
        self.theta[v]
    }

    /// The pointwise inverse potential.
    pub fn inverse(&self) -> SwitchingFunction {
        SwitchingFunction {
            k: self.k,
            theta: self.theta.iter().map(|&t| (self.k - t) % self.k).collect(),
        }
    }
}

/// Switches `s` by `theta`: the exponent of oriented edge (u, v) becomes
/// `theta(u) + l(u, v) - theta(v) mod k`.
pub fn switch(
    g: &Graph,
    s: &CyclicSignature,
    theta: &SwitchingFunction,
) -> Result<CyclicSignature> {
    s.check_graph(g)?;
    if theta.theta.len() != g.vertex_count() || theta.k != s.k {
        return Err(Error::pre(
            "switching function does not match the signature's graph or k",
        ));
    }
    let k = s.k;
    let exps = g
        .edges()
        .iter()
        .zip(&s.exps)
        .map(|(&(u, v), &l)| (theta.theta[u] + l + (k - theta.theta[v])) % k)
        .collect();
    CyclicSignature::from_exponents(g, k, exps)
}

/// Sum of oriented-edge exponents around a closed walk, mod k.
pub fn cycle_exponent(g: &Graph, s: &CyclicSignature, cycle: &[OrientedEdge]) -> Result<u32> {
    s.check_graph(g)?;
    if !g.is_closed_walk(cycle) {
        return Err(Error::pre("cycle exponent requires a closed oriented walk"));
    }
    Ok(cycle
        .iter()
        .fold(0u32, |acc, &e| (acc + s.exponent(e)) % s.k))
}

/// True iff every cycle's signature is the identity. Fundamental cycles
/// suffice: they generate the cycle space and exponents add over symmetric
/// differences in the abelian group.
pub fn is_balanced(g: &Graph, s: &CyclicSignature) -> bool {
    debug_assert!(s.check_graph(g).is_ok());
    g.fundamental_cycles()
        .iter()
        .all(|c| cycle_exponent(g, s, c).map(|e| e == 0).unwrap_or(false))
}

/// A potential `theta` with `switch(s, theta)` identically zero, when one
/// exists. Built by propagating `theta(v) = theta(u) + l(u, v)` along a BFS
/// spanning forest and then checking the non-tree edges.
pub fn balancing_switch(g: &Graph, s: &CyclicSignature) -> Option<SwitchingFunction> {
    s.check_graph(g).ok()?;
    let k = s.k;
    let n = g.vertex_count();
    let mut theta = vec![0u32; n];
    let mut visited = vec![false; n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, j) in g.incident(u) {
                if visited[w] {
                    continue;
                }
                visited[w] = true;
                let l = s.exponent(g.oriented_from(j, u));
                theta[w] = (theta[u] + l) % k;
                queue.push_back(w);
            }
        }
    }
    let theta = SwitchingFunction { k, theta };
    let switched = switch(g, s, &theta).ok()?;
    switched.exps.iter().all(|&l| l == 0).then_some(theta)
}

/// A potential with `s2 = switch(s1, theta)`, when the signatures are
/// switching equivalent. In the abelian group this holds iff the edgewise
/// difference signature is balanced; its balancing switch, negated, carries
/// s1 to s2.
pub fn switching_equivalent(
    g: &Graph,
    s1: &CyclicSignature,
    s2: &CyclicSignature,
) -> Result<Option<SwitchingFunction>> {
    s1.check_graph(g)?;
    s2.check_graph(g)?;
    if s1.k != s2.k {
        return Err(Error::pre(format!(
            "signatures have different group orders: {} vs {}",
            s1.k, s2.k
        )));
    }
    let k = s1.k;
    let diff: Vec<u32> = s2
        .exps
        .iter()
        .zip(&s1.exps)
        .map(|(&b, &a)| (b + (k - a)) % k)
        .collect();
    let diff = CyclicSignature { k, exps: diff };
    let Some(theta) = balancing_switch(g, &diff) else {
        return Ok(None);
    };
    let theta = theta.inverse();
    debug_assert_eq!(&switch(g, s1, &theta).unwrap(), s2);
    Ok(Some(theta))
}

/// Signature JSON: `{"k": .., "edges": [{"u", "v", "l"}, ..]}` where `l` is
/// the exponent on orientation (u, v).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignatureFile {
    pub k: u32,
    pub edges: Vec<SignatureEdge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignatureEdge {
    pub u: usize,
    pub v: usize,
    pub l: u32,
}

impl SignatureFile {
    /// Serializes on canonical orientations in edge-index order.
    pub fn from_signature(g: &Graph, s: &CyclicSignature) -> Self {
        let edges = g
            .edges()
            .iter()
            .zip(s.exponents())
            .map(|(&(u, v), &l)| SignatureEdge { u, v, l })
            .collect();
        SignatureFile { k: s.k(), edges }
    }

    /// Reconstructs a signature on `g`, normalizing each entry to the
    /// canonical orientation via the reversal rule. Every graph edge must
    /// appear exactly once.
    pub fn into_signature(&self, g: &Graph) -> Result<CyclicSignature> {
        if self.k < 2 {
            return Err(Error::pre("signature group order k must be at least 2"));
        }
        let mut exps: Vec<Option<u32>> = vec![None; g.edge_count()];
        for entry in &self.edges {
            let Some(j) = g.edge_between(entry.u, entry.v) else {
                return Err(Error::pre(format!(
                    "signature edge ({}, {}) is not an edge of the graph",
                    entry.u, entry.v
                )));
            };
            if entry.l >= self.k {
                return Err(Error::pre(format!(
                    "exponent {} out of range for k = {}",
                    entry.l, self.k
                )));
            }
            let (lo, _) = g.endpoints(j);
            let canonical = if entry.u == lo {
                entry.l
            } else {
                (self.k - entry.l) % self.k
            };
            if exps[j].replace(canonical).is_some() {
                return Err(Error::pre(format!(
                    "signature lists edge ({}, {}) more than once",
                    entry.u, entry.v
                )));
            }
        }
        let exps = exps
            .into_iter()
            .enumerate()
            .map(|(j, e)| {
                e.ok_or_else(|| {
                    let (u, v) = g.endpoints(j);
                    Error::pre(format!("signature is missing edge ({u}, {v})"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CyclicSignature::from_exponents(g, self.k, exps)
    }
}
