//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `--nocapture` to see them). Tolerances are pinned
//! here, not configurable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclift::corpus;
use cyclift::expectation::{
    convex_combination_real_rooted_check, expected_char_poly, rank_one_decomposition_check,
    uniform_expected_char_poly, EdgeAssignment, DEFAULT_ENUM_BUDGET,
};
use cyclift::hermitian::{multiset_max_discrepancy, HermitianMatrix, Spectrum};
use cyclift::matching::matching_polynomial;
use cyclift::poly::has_common_interlacing;
use cyclift::search::{exhaustive_search, greedy_conditional_search, SearchMode};
use cyclift::signature::{CyclicSignature, SwitchingFunction};
use cyclift::spectra::{
    lift_graph, lift_spectrum_check, signed_adjacency, switching_invariance_check,
};
use cyclift::tower::{build_tower, verify_certificate_detailed, RamanujanCertificate, TowerConfig};
use cyclift::universal_cover_spectral_radius;

const SPECTRUM_TOL: f64 = 1e-8;
const COEFF_TOL: f64 = 1e-6;
const ROOT_SLACK: f64 = 1e-9;
const REAL_ROOT_TOL: f64 = 1e-6;

fn pass(criterion: u32, name: &str, detail: String) {
    println!("criterion {criterion:02} ({name}): PASS [{detail}]");
}

#[test]
fn acceptance_01_lift_spectrum_decomposition() {
    let start = std::time::Instant::now();
    let graphs = corpus::all();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for t in 0..200u64 {
        let (name, g) = &graphs[(t as usize) % graphs.len()];
        let k = rng.random_range(2..=6u32);
        let s = CyclicSignature::random(g, k, &mut rng).unwrap();
        let report = lift_spectrum_check(g, &s).unwrap();
        worst = worst.max(report.max_discrepancy);
        assert!(
            report.matches,
            "instance {t} on {name} (k={k}): discrepancy {}",
            report.max_discrepancy
        );
    }
    pass(
        1,
        "lift spectrum decomposition",
        format!(
            "200 instances, worst discrepancy {worst:.3e}, {:?}",
            start.elapsed()
        ),
    );
}

#[test]
fn acceptance_02_expectation_identity() {
    let start = std::time::Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for (name, g) in corpus::with_max_edges(7) {
        let mu = matching_polynomial(&g).unwrap();
        for k in 2..=4u32 {
            for power in 1..k {
                let p = uniform_expected_char_poly(&g, k, power, DEFAULT_ENUM_BUDGET).unwrap();
                let dev = max_coeff_deviation(&p, &mu);
                worst = worst.max(dev);
                cases += 1;
                assert!(
                    dev <= COEFF_TOL,
                    "{name} k={k} i={power}: deviation {dev:e}"
                );
            }
        }
    }
    pass(
        2,
        "expectation equals matching polynomial",
        format!(
            "{cases} full enumerations, worst coefficient deviation {worst:.3e}, {:?}",
            start.elapsed()
        ),
    );
}

#[test]
fn acceptance_03_matching_root_bounds() {
    let start = std::time::Instant::now();
    for (name, g) in corpus::all() {
        let mu = matching_polynomial(&g).unwrap();
        let roots = mu.real_roots_sorted(REAL_ROOT_TOL).unwrap();
        let d_max = g.max_degree();
        // The degree bound needs a branching cover; K_2 (d_max = 1) is
        // covered by the exact tree bound below.
        if d_max >= 2 {
            let bound = 2.0 * ((d_max - 1) as f64).sqrt();
            for &r in &roots {
                assert!(
                    r.abs() <= bound + ROOT_SLACK,
                    "{name}: root {r} vs degree bound {bound}"
                );
            }
        }
        let rho = universal_cover_spectral_radius(&g).unwrap();
        for &r in &roots {
            assert!(
                r.abs() <= rho.value + ROOT_SLACK,
                "{name}: root {r} vs cover bound {} (exact: {})",
                rho.value,
                rho.exact
            );
        }
        if let Some(d) = g.regular_degree() {
            assert!(rho.exact, "{name}: regular graphs have exact cover radius");
            if d >= 2 {
                assert_eq!(rho.value, 2.0 * ((d - 1) as f64).sqrt(), "{name}");
            } else {
                assert_eq!(rho.value, 1.0, "{name}: K_2 covers itself");
            }
        }
    }
    pass(
        3,
        "matching polynomial root bounds",
        format!(
            "{} corpus graphs, {:?}",
            corpus::all().len(),
            start.elapsed()
        ),
    );
}

#[test]
fn acceptance_04_bipartite_symmetry() {
    let start = std::time::Instant::now();
    let graphs = corpus::bipartite();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst = 0.0f64;
    for t in 0..200u64 {
        let (name, g) = &graphs[(t as usize) % graphs.len()];
        let k = rng.random_range(2..=6u32);
        let power = rng.random_range(0..k);
        let s = CyclicSignature::random(g, k, &mut rng).unwrap();
        let spectrum = signed_adjacency(g, &s, power).unwrap().eigenvalues();
        let disc = spectrum.symmetry_discrepancy();
        let tol = SPECTRUM_TOL * (1.0 + spectrum.spectral_radius());
        worst = worst.max(disc);
        assert!(
            disc <= tol,
            "instance {t} on {name} (k={k}, i={power}): discrepancy {disc:e}"
        );
    }
    pass(
        4,
        "bipartite spectra symmetric about zero",
        format!(
            "200 instances, worst discrepancy {worst:.3e}, {:?}",
            start.elapsed()
        ),
    );
}

#[test]
fn acceptance_05_switching_invariance() {
    let start = std::time::Instant::now();
    let graphs = corpus::all();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for t in 0..100u64 {
        let (name, g) = &graphs[(t as usize) % graphs.len()];
        let k = rng.random_range(2..=6u32);
        let power = rng.random_range(0..k);
        let s = CyclicSignature::random(g, k, &mut rng).unwrap();
        let theta = SwitchingFunction::random(g, k, &mut rng).unwrap();
        assert!(
            switching_invariance_check(g, &s, &theta, power).unwrap(),
            "instance {t} on {name} (k={k}, i={power})"
        );
    }
    pass(
        5,
        "switching invariance + conjugation identity",
        format!("100 instances, {:?}", start.elapsed()),
    );
}

#[test]
fn acceptance_06_balanced_lift_structure() {
    let start = std::time::Instant::now();
    for (name, g) in corpus::all() {
        let components = g.component_labels().0;
        let base = HermitianMatrix::from_real(g.adjacency_matrix())
            .unwrap()
            .eigenvalues();
        for k in 2..=4u32 {
            let id = CyclicSignature::identity(&g, k).unwrap();
            let lift = lift_graph(&g, &id).unwrap();
            assert_eq!(
                lift.graph.component_labels().0,
                k as usize * components,
                "{name} k={k}: identity lift components"
            );
            let lifted = HermitianMatrix::from_real(lift.graph.adjacency_matrix())
                .unwrap()
                .eigenvalues();
            let mut copies = Spectrum::from_unsorted(Vec::new());
            for _ in 0..k {
                copies = copies.merge(&base);
            }
            let disc = multiset_max_discrepancy(&lifted, &copies).unwrap();
            let tol = SPECTRUM_TOL * (1.0 + lifted.spectral_radius());
            assert!(disc <= tol, "{name} k={k}: spectrum discrepancy {disc:e}");
        }
    }
    pass(
        6,
        "balanced lifts are disjoint copies",
        format!(
            "{} graphs x k in 2..=4, {:?}",
            corpus::all().len(),
            start.elapsed()
        ),
    );
}

#[test]
fn acceptance_07_greedy_guarantee() {
    let start = std::time::Instant::now();
    let mut cases = 0;
    for (name, g) in corpus::with_max_edges(10) {
        let mu_root = matching_polynomial(&g)
            .unwrap()
            .largest_root(REAL_ROOT_TOL)
            .unwrap();
        for power in 1..3u32 {
            let out = greedy_conditional_search(&g, 3, power, DEFAULT_ENUM_BUDGET).unwrap();
            cases += 1;
            assert!(
                out.best_lambda_max <= mu_root + 1e-6,
                "{name} i={power}: lambda_max {} vs matching root {mu_root}",
                out.best_lambda_max
            );
        }
    }
    pass(
        7,
        "greedy bounded by matching root",
        format!("{cases} runs (k=3, i in {{1,2}}), {:?}", start.elapsed()),
    );
}

#[test]
fn acceptance_08_k33_exhaustive_census() {
    let start = std::time::Instant::now();
    let g = corpus::get("k33").unwrap();
    let rho = 2.0 * 2.0f64.sqrt();
    let out = exhaustive_search(&g, 3, SearchMode::TwoSided, rho, true, 19_683).unwrap();
    assert_eq!(out.tested, 19_683);
    let census = out.census.unwrap();
    assert!(census > 0);
    // Frozen regression value from the first full scan of all 3^9
    // assignments.
    assert_eq!(census, 19_440);
    let s = out.signature.expect("at least one signature passes");
    assert!(cyclift::two_sided_ok(&g, &s, rho).unwrap());
    // Cross-check: all one-sided bounds hold on the bipartite K_{3,3}.
    for power in 1..3 {
        assert!(cyclift::one_sided_ok(&g, &s, power, rho).unwrap());
    }
    pass(
        8,
        "K_{3,3} census",
        format!(
            "{census} of 19683 signatures meet rho = 2*sqrt(2), {:?}",
            start.elapsed()
        ),
    );
}

#[test]
fn acceptance_09_tower_depth_3() {
    let start = std::time::Instant::now();
    // Default config: exhaustive at level 2 (3^9 assignments), seeded random
    // at level 3 (3^27 is out of enumeration reach).
    let cfg = TowerConfig::default();
    let tower = build_tower(3, 3, &cfg).unwrap();
    assert!(tower.is_complete(), "{:?}", tower.failure);
    assert_eq!(tower.certificates.len(), 3);
    let shapes: Vec<_> = tower
        .certificates
        .iter()
        .map(|c| (c.graph.vertex_count(), c.graph.edge_count()))
        .collect();
    assert_eq!(shapes, [(6, 9), (18, 27), (54, 81)]);
    for cert in &tower.certificates[1..] {
        assert!(
            cert.margin >= 0.0,
            "level {}: margin {}",
            cert.level,
            cert.margin
        );
        assert_eq!(cert.graph.regular_degree(), Some(3));
        assert!(cert.graph.bipartition().is_some());
        assert!(cert.graph.is_connected());
        // Cold-process verification: everything recomputed from the
        // serialized certificate alone.
        let json = serde_json::to_string(&cert.to_file()).unwrap();
        let parsed = serde_json::from_str(&json).unwrap();
        let reloaded = RamanujanCertificate::from_file(&parsed).unwrap();
        verify_certificate_detailed(&reloaded)
            .unwrap_or_else(|e| panic!("level {}: {e}", cert.level));
    }
    let margins: Vec<f64> = tower.certificates[1..].iter().map(|c| c.margin).collect();
    pass(
        9,
        "tower of depth 3",
        format!("margins {margins:?}, {:?}", start.elapsed()),
    );
}

#[test]
fn acceptance_10_interlacing_sampling() {
    let start = std::time::Instant::now();
    // 100 random weighted expectations across the three templates.
    let mut worst = 0.0f64;
    for (idx, name) in ["c3", "p4", "c4"].iter().enumerate() {
        let g = corpus::get(name).unwrap();
        let trials = if idx == 0 { 34 } else { 33 };
        let power = 1 + (idx as u32 % 2);
        let report = convex_combination_real_rooted_check(
            &g,
            3,
            power,
            trials,
            110 + idx as u64,
            DEFAULT_ENUM_BUDGET,
        )
        .unwrap();
        worst = worst.max(report.worst_relative_imag);
        assert_eq!(
            report.failures, 0,
            "{name}: worst imag {}",
            report.worst_relative_imag
        );
    }

    // 50 random partial-assignment sibling families share an interlacing.
    let pool = corpus::with_max_edges(7);
    let mut rng = ChaCha8Rng::seed_from_u64(210);
    for trial in 0..50 {
        let (name, g) = &pool[rng.random_range(0..pool.len())];
        let m = g.edge_count();
        let q = rng.random_range(0..m);
        let prefix: Vec<u32> = (0..q).map(|_| rng.random_range(0..3u32)).collect();
        let power = rng.random_range(1..3u32);
        let family: Vec<_> = (0..3u32)
            .map(|t| {
                let assign: Vec<EdgeAssignment> = (0..m)
                    .map(|j| {
                        if j < q {
                            EdgeAssignment::Fixed(prefix[j])
                        } else if j == q {
                            EdgeAssignment::Fixed(t)
                        } else {
                            EdgeAssignment::uniform(3)
                        }
                    })
                    .collect();
                expected_char_poly(g, 3, power, &assign, DEFAULT_ENUM_BUDGET).unwrap()
            })
            .collect();
        assert!(
            has_common_interlacing(&family, REAL_ROOT_TOL).unwrap(),
            "trial {trial} on {name} (q={q}, i={power})"
        );
    }
    pass(
        10,
        "interlacing sampling",
        format!(
            "100 convex combinations (worst imag {worst:.3e}) + 50 sibling families, {:?}",
            start.elapsed()
        ),
    );
}

#[test]
fn acceptance_11_rank_one_decomposition() {
    let start = std::time::Instant::now();
    let graphs = corpus::all();
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for t in 0..50u64 {
        let (name, g) = &graphs[(t as usize) % graphs.len()];
        let k = rng.random_range(2..=5u32);
        let power = rng.random_range(1..k);
        let s = CyclicSignature::random(g, k, &mut rng).unwrap();
        assert!(
            rank_one_decomposition_check(g, &s, power).unwrap(),
            "instance {t} on {name} (k={k}, i={power})"
        );
    }
    pass(
        11,
        "rank-one decomposition",
        format!("50 instances at 1e-12, {:?}", start.elapsed()),
    );
}

fn max_coeff_deviation(a: &cyclift::Polynomial, b: &cyclift::Polynomial) -> f64 {
    let len = a.coeffs().len().max(b.coeffs().len());
    (0..len)
        .map(|i| {
            let x = a.coeffs().get(i).copied().unwrap_or(0.0);
            let y = b.coeffs().get(i).copied().unwrap_or(0.0);
            (x - y).abs()
        })
        .fold(0.0, f64::max)
}
