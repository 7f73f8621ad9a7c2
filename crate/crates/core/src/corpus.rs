//! Seeded corpus of small complexes: group balls of random defining graphs,
//! products, trees, grids and staircases.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{CubeComplex, GraphJson};
use crate::error::{CubexError, Result};
use crate::graph::DefiningGraph;
use crate::report::Source;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub source: Source,
    /// The complex itself, so files load without rebuilding.
    #[serde(flatten)]
    pub complex: GraphJson,
}

impl CorpusEntry {
    pub fn load(&self) -> Result<CubeComplex> {
        CubeComplex::from_graph(self.complex.vertices, &self.complex.edges)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("entry serializes")
    }
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> DefiningGraph {
    let n = rng.random_range(2..=max_n);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(0.5) {
                edges.push([a, b]);
            }
        }
    }
    DefiningGraph::unlabelled(n, &edges).expect("simple graph")
}

fn candidate(rng: &mut ChaCha8Rng) -> (String, Source) {
    match rng.random_range(0..7) {
        0 | 1 => {
            let g = random_graph(rng, 6);
            let radius = rng.random_range(1..=4);
            let coxeter = rng.random_bool(0.6);
            let name = format!(
                "{}-n{}-e{}-r{radius}",
                if coxeter { "racg" } else { "raag" },
                g.num_vertices(),
                g.num_edges()
            );
            let graph = g.to_json();
            let src = if coxeter {
                Source::Racg { graph, radius }
            } else {
                Source::Raag { graph, radius }
            };
            (name, src)
        }
        2 => {
            let (p, q) = (rng.random_range(1..=4), rng.random_range(1..=4));
            (format!("grid-{p}x{q}"), Source::Grid { p, q })
        }
        3 => {
            let n = rng.random_range(2..=12);
            let parents: Vec<usize> = (0..n - 1).map(|i| rng.random_range(0..=i)).collect();
            (format!("tree-{n}"), Source::Tree { parents })
        }
        4 => {
            let steps = rng.random_range(1..=8);
            (format!("staircase-{steps}"), Source::Staircase { steps })
        }
        5 => {
            let a = rng.random_range(1..=3);
            let n = rng.random_range(2..=5);
            let parents: Vec<usize> = (0..n - 1).map(|i| rng.random_range(0..=i)).collect();
            (
                format!("product-path{a}-tree{n}"),
                Source::Product {
                    left: Box::new(Source::Path { length: a }),
                    right: Box::new(Source::Tree { parents }),
                },
            )
        }
        _ => {
            let k = rng.random_range(1..=3);
            let boxes: Vec<(usize, usize)> = (0..k)
                .map(|_| (rng.random_range(1..=3), rng.random_range(1..=3)))
                .collect();
            (format!("tree-of-grids-{k}"), Source::TreeOfGrids { boxes })
        }
    }
}

/// `count` complexes with at most `max_vertices` vertices, reproducible from
/// `seed`. Candidates that come out too large or fail to build are redrawn.
pub fn corpus_generate(seed: u64, count: usize, max_vertices: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (name, source) = candidate(&mut rng);
        let Ok(built) = source.build() else {
            continue;
        };
        let x = built.complex;
        if x.num_vertices() > max_vertices.max(1) {
            continue;
        }
        out.push(CorpusEntry {
            name: format!("{:03}-{name}", out.len()),
            source,
            complex: x.to_graph_json(),
        });
    }
    out
}

/// Writes one `<name>.json` per entry into `dir`.
pub fn write_corpus(dir: &Path, entries: &[CorpusEntry]) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CubexError::Input(format!("{}: {e}", dir.display())))?;
    for e in entries {
        let path = dir.join(format!("{}.json", e.name));
        std::fs::write(&path, e.to_json_pretty() + "\n")
            .map_err(|err| CubexError::Input(format!("{}: {err}", path.display())))?;
    }
    Ok(())
}

/// The fixed corpus the test suites run over: hand-picked shapes plus the
/// first 40 seeded complexes of at most 120 vertices.
pub fn reference_corpus() -> Vec<CorpusEntry> {
    let fixed = [
        ("path-4", Source::Path { length: 4 }),
        ("star-3x2", Source::StarTree { arms: 3, length: 2 }),
        ("square", Source::Grid { p: 1, q: 1 }),
        ("grid-3x3", Source::Grid { p: 3, q: 3 }),
        ("grid-2x4", Source::Grid { p: 2, q: 4 }),
        ("cube-3", Source::Cube { dim: 3 }),
        ("staircase-6", Source::Staircase { steps: 6 }),
        (
            "tree-of-grids",
            Source::TreeOfGrids {
                boxes: vec![(2, 2), (1, 3), (2, 1)],
            },
        ),
        (
            "product-path2-star",
            Source::Product {
                left: Box::new(Source::Path { length: 2 }),
                right: Box::new(Source::StarTree { arms: 3, length: 1 }),
            },
        ),
        (
            "racg-c5-r3",
            Source::Racg {
                graph: DefiningGraph::cycle(5).to_json(),
                radius: 3,
            },
        ),
        (
            "racg-c4-r3",
            Source::Racg {
                graph: DefiningGraph::cycle(4).to_json(),
                radius: 3,
            },
        ),
        (
            "raag-p3-r2",
            Source::Raag {
                graph: DefiningGraph::path(3).to_json(),
                radius: 2,
            },
        ),
    ];
    let mut out: Vec<CorpusEntry> = fixed
        .into_iter()
        .map(|(name, source)| {
            let x = source.build().expect("fixed corpus builds");
            CorpusEntry {
                name: name.into(),
                source,
                complex: x.complex.to_graph_json(),
            }
        })
        .collect();
    out.extend(corpus_generate(0, 40, 120));
    out
}
