//! Randomized verification suites over the fixed corpus: each suite stress
//! tests one spectral identity and reports the worst discrepancy it saw,
//! with the failing instance serialized when something breaks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus;
use crate::error::Result;
use crate::expectation::{
    convex_combination_real_rooted_check, expected_char_poly, uniform_expected_char_poly,
    EdgeAssignment, DEFAULT_ENUM_BUDGET,
};
use crate::graph::Graph;
use crate::hermitian::{multiset_max_discrepancy, HermitianMatrix};
use crate::matching::matching_polynomial;
use crate::poly::{has_common_interlacing, Polynomial, REAL_ROOT_TOL};
use crate::signature::{CyclicSignature, SignatureFile, SwitchingFunction};
use crate::spectra::{
    bipartite_symmetry_check, lift_spectrum_check, signed_adjacency, switching_invariance_check,
};
use crate::tower::GraphFile;

/// Environment hook: set to a suite name to inject a deliberately broken
/// instance into that suite, for exercising failure paths end to end.
pub const INJECT_DEFECT_ENV: &str = "CYCLIFT_INJECT_DEFECT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    LiftSpectrum,
    Symmetry,
    Switching,
    Expectation,
    Interlacing,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 5] = [
        SuiteKind::LiftSpectrum,
        SuiteKind::Symmetry,
        SuiteKind::Switching,
        SuiteKind::Expectation,
        SuiteKind::Interlacing,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteKind::LiftSpectrum => "lift-spectrum",
            SuiteKind::Symmetry => "symmetry",
            SuiteKind::Switching => "switching",
            SuiteKind::Expectation => "expectation",
            SuiteKind::Interlacing => "interlacing",
        }
    }

    pub fn from_name(name: &str) -> Option<SuiteKind> {
        SuiteKind::ALL.iter().copied().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub trials: u64,
    pub max_discrepancy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureDetail>,
}

/// The instance that broke a suite, serialized for reproduction.
#[derive(Debug, Clone, Serialize)]
pub struct FailureDetail {
    pub graph: GraphFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<SignatureFile>,
    pub message: String,
}

struct SuiteState {
    report: SuiteReport,
}

impl SuiteState {
    fn new(kind: SuiteKind, trials: u64) -> Self {
        SuiteState {
            report: SuiteReport {
                suite: kind.name().to_string(),
                passed: true,
                trials,
                max_discrepancy: 0.0,
                warning: None,
                failure: None,
            },
        }
    }

    fn observe(&mut self, discrepancy: f64) {
        self.report.max_discrepancy = self.report.max_discrepancy.max(discrepancy);
    }

    fn fail(&mut self, g: &Graph, s: Option<&CyclicSignature>, message: String) {
        if self.report.passed {
            self.report.passed = false;
            self.report.failure = Some(FailureDetail {
                graph: GraphFile::from_graph(g),
                signature: s.map(|sig| SignatureFile::from_signature(g, sig)),
                message,
            });
        }
    }
}

fn injected(kind: SuiteKind) -> bool {
    std::env::var(INJECT_DEFECT_ENV)
        .map(|v| v == kind.name())
        .unwrap_or(false)
}

/// Runs one suite with the given number of sampled trials.
pub fn run_suite(kind: SuiteKind, trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut state = SuiteState::new(kind, trials);
    if trials == 0
        && matches!(
            kind,
            SuiteKind::LiftSpectrum | SuiteKind::Symmetry | SuiteKind::Switching
        )
    {
        state.report.warning = Some("0 trials requested: vacuous pass".to_string());
        return Ok(state.report);
    }
    match kind {
        SuiteKind::LiftSpectrum => lift_spectrum_suite(&mut state, trials, seed)?,
        SuiteKind::Symmetry => symmetry_suite(&mut state, trials, seed)?,
        SuiteKind::Switching => switching_suite(&mut state, trials, seed)?,
        SuiteKind::Expectation => expectation_suite(&mut state)?,
        SuiteKind::Interlacing => interlacing_suite(&mut state, trials, seed)?,
    }
    if injected(kind) {
        inject_defect(kind, &mut state)?;
    }
    Ok(state.report)
}

/// Runs every suite.
pub fn run_all(trials: u64, seed: u64) -> Result<Vec<SuiteReport>> {
    SuiteKind::ALL
        .iter()
        .map(|&k| run_suite(k, trials, seed))
        .collect()
}

fn lift_spectrum_suite(state: &mut SuiteState, trials: u64, seed: u64) -> Result<()> {
    let graphs = corpus::all();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11f7);
    for t in 0..trials {
        let (name, g) = &graphs[(t as usize) % graphs.len()];
        let k = rng.random_range(2..=6u32);
        let s = CyclicSignature::random(g, k, &mut rng)?;
        let report = lift_spectrum_check(g, &s)?;
        state.observe(report.max_discrepancy);
        if !report.matches {
            state.fail(
                g,
                Some(&s),
                format!(
                    "lift spectrum decomposition failed on {name} (k={k}): discrepancy {}",
                    report.max_discrepancy
                ),
            );
        }
    }
    Ok(())
}

fn symmetry_suite(state: &mut SuiteState, trials: u64, seed: u64) -> Result<()> {
    let graphs = corpus::bipartite();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e77);
    for t in 0..trials {
        let (name, g) = &graphs[(t as usize) % graphs.len()];
        let k = rng.random_range(2..=6u32);
        let power = rng.random_range(0..k);
        let s = CyclicSignature::random(g, k, &mut rng)?;
        let spectrum = signed_adjacency(g, &s, power)?.eigenvalues();
        state.observe(spectrum.symmetry_discrepancy());
        if !bipartite_symmetry_check(g, &s, power)? {
            state.fail(
                g,
                Some(&s),
                format!("spectrum of {name} (k={k}, i={power}) is not symmetric about zero"),
            );
        }
    }
    Ok(())
}

fn switching_suite(state: &mut SuiteState, trials: u64, seed: u64) -> Result<()> {
    let graphs = corpus::all();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5317);
    for t in 0..trials {
        let (name, g) = &graphs[(t as usize) % graphs.len()];
        let k = rng.random_range(2..=6u32);
        let power = rng.random_range(0..k);
        let s = CyclicSignature::random(g, k, &mut rng)?;
        let theta = SwitchingFunction::random(g, k, &mut rng)?;
        let switched = crate::signature::switch(g, &s, &theta)?;
        let sa = signed_adjacency(g, &s, power)?.eigenvalues();
        let sb = signed_adjacency(g, &switched, power)?.eigenvalues();
        if let Some(d) = multiset_max_discrepancy(&sa, &sb) {
            state.observe(d);
        }
        if !switching_invariance_check(g, &s, &theta, power)? {
            state.fail(
                g,
                Some(&s),
                format!("switching invariance failed on {name} (k={k}, i={power})"),
            );
        }
    }
    Ok(())
}

fn expectation_suite(state: &mut SuiteState) -> Result<()> {
    // Fixed sweep: every corpus graph with m <= 7, k in {2,3,4}, i in 1..k.
    for (name, g) in corpus::with_max_edges(7) {
        let mu = matching_polynomial(&g)?;
        for k in 2..=4u32 {
            for power in 1..k {
                let p = uniform_expected_char_poly(&g, k, power, DEFAULT_ENUM_BUDGET)?;
                let dev = max_coeff_deviation(&p, &mu);
                state.observe(dev);
                if dev > 1e-6 {
                    state.fail(
                        &g,
                        None,
                        format!(
                            "expected characteristic polynomial deviates from the matching \
                             polynomial on {name} (k={k}, i={power}) by {dev:e}"
                        ),
                    );
                }
            }
        }
    }
    Ok(())
}

fn interlacing_suite(state: &mut SuiteState, trials: u64, seed: u64) -> Result<()> {
    // Convex-combination real-rootedness on the three small templates.
    let combo_graphs = ["c3", "p4", "c4"];
    let per_graph = trials.div_ceil(combo_graphs.len() as u64).max(1);
    for (idx, name) in combo_graphs.iter().enumerate() {
        let g = corpus::get(name).unwrap();
        let report = convex_combination_real_rooted_check(
            &g,
            3,
            1 + (idx as u32 % 2),
            per_graph,
            seed ^ 0x1a7e ^ idx as u64,
            DEFAULT_ENUM_BUDGET,
        )?;
        state.observe(report.worst_relative_imag);
        if report.failures > 0 {
            state.fail(
                &g,
                None,
                format!(
                    "{} of {} weighted expectations on {name} were not real-rooted",
                    report.failures, report.trials
                ),
            );
        }
    }

    // Random partial-assignment families must share an interlacing.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfa51);
    let families = trials.div_ceil(2).max(1);
    let pool = corpus::with_max_edges(7);
    let k = 3u32;
    for _ in 0..families {
        let (name, g) = &pool[rng.random_range(0..pool.len())];
        let m = g.edge_count();
        let q = rng.random_range(0..m);
        let prefix: Vec<u32> = (0..q).map(|_| rng.random_range(0..k)).collect();
        let power = rng.random_range(1..k);
        let family = (0..k)
            .map(|t| {
                let assign: Vec<EdgeAssignment> = (0..m)
                    .map(|j| {
                        if j < q {
                            EdgeAssignment::Fixed(prefix[j])
                        } else if j == q {
                            EdgeAssignment::Fixed(t)
                        } else {
                            EdgeAssignment::uniform(k)
                        }
                    })
                    .collect();
                expected_char_poly(g, k, power, &assign, DEFAULT_ENUM_BUDGET)
            })
            .collect::<Result<Vec<Polynomial>>>()?;
        if !has_common_interlacing(&family, REAL_ROOT_TOL)? {
            state.fail(
                g,
                None,
                format!("sibling family on {name} (q={q}, i={power}) has no common interlacing"),
            );
        }
    }
    Ok(())
}

/// Feeds the suite one instance that must fail: a Hermitian check on a
/// deliberately perturbed matrix for the spectral suites, a corrupted
/// polynomial comparison otherwise.
fn inject_defect(kind: SuiteKind, state: &mut SuiteState) -> Result<()> {
    let g = corpus::get("c4").unwrap();
    let s = CyclicSignature::identity(&g, 3)?;
    match kind {
        SuiteKind::LiftSpectrum | SuiteKind::Symmetry | SuiteKind::Switching => {
            let mut m = signed_adjacency(&g, &s, 1)?.matrix().clone();
            m[(0, 1)] += num_complex::Complex64::new(0.0, 1e-3);
            match HermitianMatrix::try_new(m) {
                Ok(_) => state.fail(
                    &g,
                    Some(&s),
                    "injected non-Hermitian matrix was accepted".into(),
                ),
                Err(e) => state.fail(&g, Some(&s), format!("injected defect: {e}")),
            }
        }
        SuiteKind::Expectation | SuiteKind::Interlacing => {
            state.fail(&g, None, "injected defect: corrupted comparison".into());
        }
    }
    state.observe(1e-3);
    Ok(())
}

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

/// Deviation helper shared with the CLI expectation command.
pub fn expectation_deviation(
    g: &Graph,
    k: u32,
    power: u32,
    budget: u128,
) -> Result<(Polynomial, f64)> {
    let p = uniform_expected_char_poly(g, k, power, budget)?;
    let mu = matching_polynomial(g)?;
    let dev = max_coeff_deviation(&p, &mu);
    Ok((p, dev))
}
