//! The fixed verification corpus: small named graphs used by the
//! verification suites, searches, and tests. The edge lists are versioned
//! in-repo under `data/corpus/` and embedded at compile time.

use std::sync::OnceLock;

use crate::graph::Graph;

macro_rules! corpus {
    ($(($name:literal, $file:literal)),+ $(,)?) => {
        const SOURCES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../data/corpus/", $file)))),+
        ];
    };
}

corpus![
    ("k2", "k2.txt"),
    ("p3", "p3.txt"),
    ("p4", "p4.txt"),
    ("c3", "c3.txt"),
    ("c4", "c4.txt"),
    ("c5", "c5.txt"),
    ("c6", "c6.txt"),
    ("k4", "k4.txt"),
    ("k23", "k23.txt"),
    ("k33", "k33.txt"),
    ("petersen", "petersen.txt"),
];

fn parsed() -> &'static Vec<(&'static str, Graph)> {
    static CACHE: OnceLock<Vec<(&'static str, Graph)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        SOURCES
            .iter()
            .map(|&(name, text)| (name, Graph::parse(text).expect("corpus graph parses")))
            .collect()
    })
}

/// Corpus graph names in fixed order.
pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|&(n, _)| n).collect()
}

/// Look up a corpus graph by name.
pub fn get(name: &str) -> Option<Graph> {
    parsed()
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, g)| g.clone())
}

/// All corpus graphs with their names.
pub fn all() -> Vec<(&'static str, Graph)> {
    parsed().clone()
}

/// The bipartite subset of the corpus.
pub fn bipartite() -> Vec<(&'static str, Graph)> {
    parsed()
        .iter()
        .filter(|(_, g)| g.bipartition().is_some())
        .cloned()
        .collect()
}

/// Corpus graphs with at most `max_edges` edges.
pub fn with_max_edges(max_edges: usize) -> Vec<(&'static str, Graph)> {
    parsed()
        .iter()
        .filter(|(_, g)| g.edge_count() <= max_edges)
        .cloned()
        .collect()
}
