//! cyclift: spectra of cyclic signatures, k-cyclic lifts, verification
//! suites, Ramanujan signature searches, and certified lift towers.
//!
//! Machine-readable JSON goes to stdout, human summaries to stderr. Exit
//! codes: 0 success, 1 verification failure, 2 parse error, 3 precondition
//! violation, 4 search exhaustion.

mod json_out;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use cyclift::tower::{CertificateFile, TowerConfig, TowerStrategy};
use cyclift::verify::{run_all, run_suite, SuiteKind, SuiteReport};
use cyclift::{
    exhaustive_search, greedy_conditional_search, random_search, signed_adjacency, two_sided_ok,
    universal_cover_spectral_radius, CyclicSignature, Error, Graph, SearchMode, SignatureFile,
    SpectrumReport, DEFAULT_ENUM_BUDGET, DEFAULT_SEARCH_BUDGET, RAMANUJAN_TOL,
};

const EXIT_VERIFY_FAILURE: i32 = 1;
const EXIT_PARSE: i32 = 2;
const EXIT_PRECONDITION: i32 = 3;
const EXIT_EXHAUSTED: i32 = 4;

/// Environment variable overriding the enumeration/search budgets.
const BUDGET_ENV: &str = "CYCLIFT_BUDGET";

#[derive(Parser)]
#[command(
    name = "cyclift",
    version,
    about = "Cyclic signatures, lifts, and their spectra"
)]
struct Cli {
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    json_indent: bool,

    /// Worker threads for parallel enumeration (default: all cores).
    /// Results are identical for any thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sorted spectrum of the Hadamard power A^{s,i}.
    Spectrum {
        /// Edge-list file of the base graph.
        graph: PathBuf,
        /// Signature JSON file.
        signature: PathBuf,
        /// Hadamard power i (0 gives the plain adjacency matrix).
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Print the k-cyclic lift as an edge list with a fiber-layout header.
    Lift { graph: PathBuf, signature: PathBuf },
    /// Run randomized verification suites over the built-in corpus.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for a signature meeting a spectral bound.
    Search {
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::TwoSided)]
        mode: ModeArg,
        /// Hadamard power for one-sided mode (and the greedy strategy).
        #[arg(long, default_value_t = 1)]
        i: u32,
        #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
        strategy: StrategyArg,
        /// Spectral bound: "auto" resolves the universal cover spectral
        /// radius, otherwise a number.
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        rho: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// With the exhaustive strategy, scan everything and count passes.
        #[arg(long)]
        census: bool,
        #[arg(long, default_value_t = 100_000)]
        max_iters: u64,
    },
    /// Build a tower of 3-cyclic lifts from K_{d,d}, certifying each level.
    Tower {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        levels: u32,
        #[arg(long, value_enum, default_value_t = TowerStrategyArg::Auto)]
        strategy: TowerStrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory receiving one certificate JSON file per level.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Allow k != 3 (no two-sided guarantee; experimental).
        #[arg(long)]
        allow_any_k: bool,
    },
    /// Print the matching polynomial and exact matching counts.
    MatchingPoly { graph: PathBuf },
    /// Print the expected characteristic polynomial over uniform random
    /// signatures and its deviation from the matching polynomial.
    Expectation {
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        i: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    OneSided,
    TwoSided,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Random,
    Greedy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TowerStrategyArg {
    Auto,
    Exhaustive,
    Random,
    Greedy,
}

impl From<TowerStrategyArg> for TowerStrategy {
    fn from(value: TowerStrategyArg) -> Self {
        match value {
            TowerStrategyArg::Auto => TowerStrategy::Auto,
            TowerStrategyArg::Exhaustive => TowerStrategy::Exhaustive,
            TowerStrategyArg::Random => TowerStrategy::Random,
            TowerStrategyArg::Greedy => TowerStrategy::Greedy,
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::Precondition(_) | Error::BudgetExceeded { .. } => EXIT_PRECONDITION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("cyclift: failed to configure thread pool: {e}");
            std::process::exit(EXIT_PRECONDITION);
        }
    }
    match run(&cli) {
        Ok(()) => {}
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("cyclift: {}", f.message);
            }
            std::process::exit(f.code);
        }
    }
}

fn budgets() -> Result<(u128, u128), Failure> {
    match std::env::var(BUDGET_ENV) {
        Err(_) => Ok((DEFAULT_ENUM_BUDGET, DEFAULT_SEARCH_BUDGET)),
        Ok(raw) => {
            let parsed: u128 = raw.parse().map_err(|_| {
                Failure::new(
                    EXIT_PRECONDITION,
                    format!("{BUDGET_ENV} must be an integer, got '{raw}'"),
                )
            })?;
            Ok((parsed, parsed))
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_PARSE,
            format!("cannot read graph file {}: {e}", path.display()),
        )
    })?;
    Ok(Graph::parse(&text)?)
}

fn read_signature(path: &Path, g: &Graph) -> Result<CyclicSignature, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_PARSE,
            format!("cannot read signature file {}: {e}", path.display()),
        )
    })?;
    let file: SignatureFile = serde_json::from_str(&text).map_err(|e| {
        Failure::new(
            EXIT_PARSE,
            format!("malformed signature JSON {}: {e}", path.display()),
        )
    })?;
    Ok(file.into_signature(g)?)
}

fn emit<T: serde::Serialize>(value: &T, indent: bool) {
    println!("{}", json_out::to_json_string(value, indent));
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Spectrum {
            graph,
            signature,
            power,
        } => {
            let g = read_graph(graph)?;
            let s = read_signature(signature, &g)?;
            let spectrum = signed_adjacency(&g, &s, *power)?.eigenvalues();
            eprintln!(
                "spectrum of A^(s,{power}) on {} vertices: [{:.6}, {:.6}]",
                g.vertex_count(),
                spectrum.min().unwrap_or(0.0),
                spectrum.max().unwrap_or(0.0)
            );
            emit(&SpectrumReport::new(&spectrum), cli.json_indent);
            Ok(())
        }
        Command::Lift { graph, signature } => {
            let g = read_graph(graph)?;
            let s = read_signature(signature, &g)?;
            let lift = cyclift::lift_graph(&g, &s)?;
            eprintln!(
                "{}-cyclic lift: {} vertices, {} edges",
                s.k(),
                lift.graph.vertex_count(),
                lift.graph.edge_count()
            );
            print!("{}", lift.to_edge_list_text());
            Ok(())
        }
        Command::Verify {
            suite,
            trials,
            seed,
        } => cmd_verify(suite, *trials, *seed, cli.json_indent),
        Command::Search {
            graph,
            k,
            mode,
            i,
            strategy,
            rho,
            seed,
            census,
            max_iters,
        } => cmd_search(
            graph,
            *k,
            *mode,
            *i,
            *strategy,
            rho,
            *seed,
            *census,
            *max_iters,
            cli.json_indent,
        ),
        Command::Tower {
            d,
            levels,
            strategy,
            seed,
            out,
            k,
            allow_any_k,
        } => cmd_tower(
            *d,
            *levels,
            *strategy,
            *seed,
            out,
            *k,
            *allow_any_k,
            cli.json_indent,
        ),
        Command::MatchingPoly { graph } => {
            let g = read_graph(graph)?;
            let counts = cyclift::matching_counts(&g)?;
            let poly = cyclift::matching_polynomial(&g)?;
            #[derive(serde::Serialize)]
            struct Out {
                coeffs: Vec<f64>,
                matching_counts: Vec<String>,
            }
            emit(
                &Out {
                    coeffs: poly.coeffs().to_vec(),
                    matching_counts: counts.to_decimal_strings(),
                },
                cli.json_indent,
            );
            Ok(())
        }
        Command::Expectation { graph, k, i } => {
            let g = read_graph(graph)?;
            let (enum_budget, _) = budgets()?;
            let (poly, deviation) =
                cyclift::verify::expectation_deviation(&g, *k, *i, enum_budget)?;
            eprintln!(
                "expected characteristic polynomial over {}^{} signatures; deviation from the \
                 matching polynomial: {deviation:.3e}",
                k,
                g.edge_count()
            );
            #[derive(serde::Serialize)]
            struct Out {
                coeffs: Vec<f64>,
                max_deviation_from_matching: f64,
            }
            emit(
                &Out {
                    coeffs: poly.coeffs().to_vec(),
                    max_deviation_from_matching: deviation,
                },
                cli.json_indent,
            );
            Ok(())
        }
    }
}

fn cmd_verify(suite: &str, trials: u64, seed: u64, indent: bool) -> Result<(), Failure> {
    let reports: Vec<SuiteReport> = if suite == "all" {
        run_all(trials, seed)?
    } else {
        let kind = SuiteKind::from_name(suite).ok_or_else(|| {
            Failure::new(
                EXIT_PRECONDITION,
                format!(
                    "unknown suite '{suite}'; expected all, {}",
                    SuiteKind::ALL.map(|k| k.name()).join(", ")
                ),
            )
        })?;
        vec![run_suite(kind, trials, seed)?]
    };
    for r in &reports {
        let status = if r.passed { "pass" } else { "FAIL" };
        eprintln!(
            "suite {:<14} {} (max discrepancy {:.3e})",
            r.suite, status, r.max_discrepancy
        );
        if let Some(w) = &r.warning {
            eprintln!("  warning: {w}");
        }
    }
    emit(&reports, indent);
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_VERIFY_FAILURE,
            "one or more verification suites failed",
        ))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    graph: &Path,
    k: u32,
    mode: ModeArg,
    power: u32,
    strategy: StrategyArg,
    rho_arg: &str,
    seed: u64,
    census: bool,
    max_iters: u64,
    indent: bool,
) -> Result<(), Failure> {
    let g = read_graph(graph)?;
    let (enum_budget, search_budget) = budgets()?;
    let rho = resolve_rho(rho_arg, &g)?;
    let mode = match mode {
        ModeArg::OneSided => SearchMode::OneSided { power },
        ModeArg::TwoSided => SearchMode::TwoSided,
    };
    if census && strategy != StrategyArg::Exhaustive {
        return Err(Failure::new(
            EXIT_PRECONDITION,
            "census mode requires the exhaustive strategy",
        ));
    }
    let outcome = match strategy {
        StrategyArg::Exhaustive => exhaustive_search(&g, k, mode, rho, census, search_budget)?,
        StrategyArg::Random => random_search(&g, k, mode, rho, max_iters, seed)?,
        StrategyArg::Greedy => greedy_conditional_search(&g, k, power, enum_budget)?,
    };
    // The greedy strategy always returns a signature; it passes only if that
    // signature actually meets the bound under the requested mode.
    let passed = match (&outcome.signature, strategy) {
        (None, _) => false,
        (Some(s), StrategyArg::Greedy) => match mode {
            SearchMode::OneSided { .. } => outcome.best_lambda_max <= rho + RAMANUJAN_TOL,
            SearchMode::TwoSided => two_sided_ok(&g, s, rho)?,
        },
        (Some(_), _) => true,
    };
    eprintln!(
        "strategy {} tested {} candidates; best statistic {:.9} vs rho {:.9}{}",
        outcome.strategy,
        outcome.tested,
        outcome.best_lambda_max,
        rho,
        match outcome.census {
            Some(c) => format!("; census {c} passing"),
            None => String::new(),
        }
    );
    emit(&outcome.to_file(&g), indent);
    if passed {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_EXHAUSTED,
            "no signature met the bound within the budget",
        ))
    }
}

fn resolve_rho(arg: &str, g: &Graph) -> Result<f64, Failure> {
    if arg == "auto" {
        let r = universal_cover_spectral_radius(g)?;
        eprintln!(
            "rho auto: {} {:.12}",
            if r.exact {
                "exact"
            } else {
                "estimated (from below)"
            },
            r.value
        );
        Ok(r.value)
    } else {
        arg.parse::<f64>().map_err(|_| {
            Failure::new(
                EXIT_PRECONDITION,
                format!("--rho must be 'auto' or a number, got '{arg}'"),
            )
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_tower(
    d: usize,
    levels: u32,
    strategy: TowerStrategyArg,
    seed: u64,
    out: &Path,
    k: u32,
    allow_any_k: bool,
    indent: bool,
) -> Result<(), Failure> {
    let (enum_budget, search_budget) = budgets()?;
    let cfg = TowerConfig {
        strategy: strategy.into(),
        seed,
        search_budget,
        enum_budget,
        k,
        allow_nonstandard_k: allow_any_k,
        ..TowerConfig::default()
    };
    let tower = cyclift::build_tower(d, levels, &cfg)?;
    fs::create_dir_all(out).map_err(|e| {
        Failure::new(
            EXIT_PRECONDITION,
            format!("cannot create {}: {e}", out.display()),
        )
    })?;
    let mut paths = Vec::new();
    for cert in &tower.certificates {
        let path = out.join(format!("level-{}.json", cert.level));
        let json = json_out::to_json_string(&cert.to_file(), indent);
        fs::write(&path, json + "\n").map_err(|e| {
            Failure::new(
                EXIT_PRECONDITION,
                format!("cannot write {}: {e}", path.display()),
            )
        })?;
        eprintln!(
            "level {}: {} vertices, {} edges, margin {:.9} -> {}",
            cert.level,
            cert.graph.vertex_count(),
            cert.graph.edge_count(),
            cert.margin,
            path.display()
        );
        paths.push(path);
    }
    // Re-verify every certificate from its file, exactly as an independent
    // process would.
    for path in &paths {
        let text = fs::read_to_string(path).map_err(|e| {
            Failure::new(
                EXIT_PARSE,
                format!("cannot re-read {}: {e}", path.display()),
            )
        })?;
        let file: CertificateFile = serde_json::from_str(&text).map_err(|e| {
            Failure::new(
                EXIT_PARSE,
                format!("malformed certificate {}: {e}", path.display()),
            )
        })?;
        let cert = cyclift::RamanujanCertificate::from_file(&file)?;
        if let Err(reason) = cyclift::verify_certificate_detailed(&cert) {
            return Err(Failure::new(
                EXIT_VERIFY_FAILURE,
                format!(
                    "certificate {} failed verification: {reason}",
                    path.display()
                ),
            ));
        }
        eprintln!("verified {}", path.display());
    }
    if let Some(failure) = &tower.failure {
        return Err(Failure::new(
            EXIT_EXHAUSTED,
            format!(
                "tower stopped at level {}: {} ({} of {levels} levels written)",
                failure.level,
                failure.reason,
                tower.certificates.len()
            ),
        ));
    }
    Ok(())
}
