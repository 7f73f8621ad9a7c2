//! Batch pipeline: a JSON config names a complex and a list of analyses; the
//! output is a self-contained, deterministic JSON bundle.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::builders::{self, BraidOptions};
use crate::complex::{CubeComplex, GraphJson};
use crate::curve::{
    bottleneck_check, crossing_graph, cutvertex_crossing_check, delta0_vs_contact, hx_model,
    qi_crossing_contact, stability_l,
};
use crate::error::{CubexError, Result};
use crate::graph::{DefiningGraph, DefiningGraphJson};
use crate::hyperbolicity::{
    braid2_hyperbolic, distance_linf, four_point_delta, grid_thinness, join_thinness,
    link_diameters, link_has_induced_4cycle, max_flat_rectangle_thickness, meier_racg_hyperbolic,
    raag_acyl_hyperbolic, thin_bicycle_constant, MetricSpec,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Where the complex comes from.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    Racg {
        graph: DefiningGraphJson,
        radius: usize,
    },
    Raag {
        graph: DefiningGraphJson,
        radius: usize,
    },
    Braid {
        graph: DefiningGraphJson,
        strands: usize,
        #[serde(default)]
        subdivide: bool,
    },
    Grid {
        p: usize,
        q: usize,
    },
    Cube {
        dim: usize,
    },
    Path {
        length: usize,
    },
    Staircase {
        steps: usize,
    },
    Tree {
        parents: Vec<usize>,
    },
    StarTree {
        arms: usize,
        length: usize,
    },
    TreeOfGrids {
        boxes: Vec<(usize, usize)>,
    },
    Product {
        left: Box<Source>,
        right: Box<Source>,
    },
    Complex {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    File {
        path: String,
    },
}

/// A built complex with the defining graph it came from, if any.
#[derive(Clone, Debug)]
pub struct Built {
    pub complex: CubeComplex,
    pub gamma: Option<DefiningGraph>,
    pub group: Option<builders::GroupKind>,
    /// "finite complex", or the ball radius for group and cover pieces.
    pub scale: String,
}

fn graph_of(g: &DefiningGraphJson) -> Result<DefiningGraph> {
    DefiningGraph::new(g.labels.clone(), &g.edges)
}

impl Source {
    pub fn build(&self) -> Result<Built> {
        let finite = |complex: CubeComplex| Built {
            complex,
            gamma: None,
            group: None,
            scale: "finite complex".into(),
        };
        Ok(match self {
            Source::Racg { graph, radius } | Source::Raag { graph, radius } => {
                let gamma = graph_of(graph)?;
                let kind = if matches!(self, Source::Racg { .. }) {
                    builders::GroupKind::Coxeter
                } else {
                    builders::GroupKind::Artin
                };
                let ball = builders::GroupBall::build(
                    kind,
                    &gamma,
                    *radius,
                    builders::DEFAULT_VERTEX_BUDGET,
                )?;
                Built {
                    complex: ball.complex,
                    gamma: Some(gamma),
                    group: Some(kind),
                    scale: format!("ball of radius {radius}"),
                }
            }
            Source::Braid {
                graph,
                strands,
                subdivide,
            } => {
                let gamma = graph_of(graph)?;
                let opts = BraidOptions {
                    auto_subdivide: *subdivide,
                    ..BraidOptions::default()
                };
                let b = builders::graph_braid_complex(&gamma, *strands, &opts)?;
                let scale = match b.radius {
                    Some(r) => format!("cover ball of radius {r}"),
                    None => "finite complex".into(),
                };
                Built {
                    complex: b.complex,
                    gamma: Some(gamma),
                    group: None,
                    scale,
                }
            }
            Source::Grid { p, q } => finite(builders::grid(*p, *q)),
            Source::Cube { dim } => finite(builders::cube(*dim)),
            Source::Path { length } => finite(builders::path(*length)),
            Source::Staircase { steps } => {
                if *steps == 0 {
                    return Err(CubexError::Input(
                        "staircase needs at least one step".into(),
                    ));
                }
                finite(builders::staircase(*steps))
            }
            Source::Tree { parents } => {
                if parents.iter().enumerate().any(|(i, &p)| p > i) {
                    return Err(CubexError::Input(
                        "tree parents must precede their children".into(),
                    ));
                }
                finite(builders::tree_from_parents(parents))
            }
            Source::StarTree { arms, length } => finite(builders::star_tree(*arms, *length)),
            Source::TreeOfGrids { boxes } => {
                if boxes.is_empty() {
                    return Err(CubexError::Input("tree of grids needs a box".into()));
                }
                finite(builders::tree_of_grids(boxes).0)
            }
            Source::Product { left, right } => {
                let (l, r) = (left.build()?, right.build()?);
                Built {
                    complex: builders::product(&l.complex, &r.complex),
                    gamma: None,
                    group: None,
                    scale: if l.scale == r.scale {
                        l.scale
                    } else {
                        format!("{} × {}", l.scale, r.scale)
                    },
                }
            }
            Source::Complex { vertices, edges } => {
                finite(CubeComplex::from_graph(*vertices, edges)?)
            }
            Source::File { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CubexError::Input(format!("{path}: {e}")))?;
                finite(CubeComplex::from_json_str(&text)?)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Median,
    Thickness,
    JoinThinness,
    GridThinness,
    Links,
    Bicycles,
    FourPointL1,
    FourPointLinf,
    Linf,
    Meier,
    Braid2,
    RaagAcyl,
    CutVertex,
    Bottleneck,
    QiCrossingContact,
    Delta0,
    Stability,
    Hx,
}

impl Analysis {
    pub const ALL: [Analysis; 18] = [
        Analysis::Median,
        Analysis::Thickness,
        Analysis::JoinThinness,
        Analysis::GridThinness,
        Analysis::Links,
        Analysis::Bicycles,
        Analysis::FourPointL1,
        Analysis::FourPointLinf,
        Analysis::Linf,
        Analysis::Meier,
        Analysis::Braid2,
        Analysis::RaagAcyl,
        Analysis::CutVertex,
        Analysis::Bottleneck,
        Analysis::QiCrossingContact,
        Analysis::Delta0,
        Analysis::Stability,
        Analysis::Hx,
    ];

    pub fn name(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }

    /// Whether the analysis makes sense for this input.
    fn applies(self, b: &Built) -> bool {
        match self {
            Analysis::Meier => b.group == Some(builders::GroupKind::Coxeter),
            Analysis::RaagAcyl => b.group == Some(builders::GroupKind::Artin),
            Analysis::Braid2 => b.gamma.is_some() && b.group.is_none(),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub schema: u32,
    pub source: Source,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
    /// Run every analysis that applies to the source.
    #[serde(default)]
    pub all: bool,
    /// Record wall-times; bundles are then no longer byte-reproducible.
    #[serde(default)]
    pub timings: bool,
}

impl PipelineConfig {
    pub fn new(source: Source, analyses: Vec<Analysis>) -> Self {
        PipelineConfig {
            schema: SCHEMA_VERSION,
            source,
            analyses,
            all: false,
            timings: false,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = serde_json::from_str(text)?;
        if cfg.schema != SCHEMA_VERSION {
            let (line, column) = position_of(text, "\"schema\"");
            return Err(CubexError::Schema {
                line,
                column,
                message: format!(
                    "unsupported schema {}, expected {SCHEMA_VERSION}",
                    cfg.schema
                ),
            });
        }
        Ok(cfg)
    }
}

fn position_of(text: &str, needle: &str) -> (usize, usize) {
    let Some(off) = text.find(needle) else {
        return (1, 1);
    };
    let before = &text[..off];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A checked invariant or a proven bound failed.
    Failed,
    /// The analysis could not run (budget, precondition).
    Error,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AnalysisResult {
    pub analysis: Analysis,
    pub scale: String,
    pub status: Status,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ComplexSummary {
    pub vertices: usize,
    pub edges: usize,
    pub hyperplanes: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ReportBundle {
    pub schema: u32,
    pub source: Source,
    pub complex: ComplexSummary,
    pub results: Vec<AnalysisResult>,
    /// True iff no analysis failed.
    pub passed: bool,
}

impl ReportBundle {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

/// Value of one analysis and whether its checked claims held.
fn evaluate(a: Analysis, b: &Built) -> Result<(Value, bool)> {
    let x = &b.complex;
    let gamma = || {
        b.gamma
            .as_ref()
            .ok_or_else(|| CubexError::Input("needs a defining graph".into()))
    };
    Ok(match a {
        Analysis::Median => {
            let r = x.verify_median(true);
            (to_value(&r), r.ok)
        }
        Analysis::Thickness => {
            let t = max_flat_rectangle_thickness(x);
            (to_value(&t), true)
        }
        Analysis::JoinThinness => (json!(join_thinness(x)?), true),
        Analysis::GridThinness => (json!(grid_thinness(x)?), true),
        Analysis::Links => {
            let w = link_has_induced_4cycle(x);
            (json!({ "induced_4cycle": w.is_some(), "witness": w }), true)
        }
        Analysis::Bicycles => (json!(thin_bicycle_constant(&crossing_graph(x))?), true),
        Analysis::FourPointL1 => (to_value(&four_point_delta(x, MetricSpec::L1)?), true),
        Analysis::FourPointLinf => (to_value(&four_point_delta(x, MetricSpec::Linf)?), true),
        Analysis::Linf => {
            let n = x.num_vertices();
            let diam = (0..n)
                .into_par_iter()
                .map(|u| {
                    (u..n)
                        .map(|v| distance_linf(x, u, v))
                        .try_fold(0, |m, d| d.map(|d| d.max(m)))
                })
                .try_reduce(|| 0, |p, q| Ok(p.max(q)))?;
            (json!({ "pairs_agree": true, "linf_diameter": diam }), true)
        }
        Analysis::Meier => (json!(meier_racg_hyperbolic(gamma()?)), true),
        Analysis::Braid2 => (json!(braid2_hyperbolic(gamma()?)?), true),
        Analysis::RaagAcyl => (json!(raag_acyl_hyperbolic(gamma()?)), true),
        Analysis::CutVertex => (to_value(&cutvertex_crossing_check(x)?), true),
        Analysis::Bottleneck => {
            let r = link_diameters(x)
                .into_iter()
                .map(|d| d.ok_or(CubexError::Disconnected))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .unwrap_or(0);
            let twice_delta = 2 * r + 9;
            let rep = bottleneck_check(&crossing_graph(x), twice_delta)?;
            (
                json!({ "link_diameter": r, "twice_delta": twice_delta, "report": rep }),
                true,
            )
        }
        Analysis::QiCrossingContact => (to_value(&qi_crossing_contact(x)?), true),
        Analysis::Delta0 => {
            let r = delta0_vs_contact(x)?;
            let ok = r.violation.is_none();
            (to_value(&r), ok)
        }
        Analysis::Stability => (to_value(&stability_l(x)?), true),
        Analysis::Hx => {
            let h = hx_model(x)?;
            let ok = h.pass;
            (to_value(&h), ok)
        }
    })
}

fn run_one(a: Analysis, b: &Built, timings: bool) -> AnalysisResult {
    let start = Instant::now();
    let out = evaluate(a, b);
    let wall_ms = timings.then(|| start.elapsed().as_secs_f64() * 1e3);
    let (status, value, error) = match out {
        Ok((v, true)) => (Status::Ok, v, None),
        Ok((v, false)) => (Status::Failed, v, None),
        Err(e @ CubexError::InvariantViolation(_)) => {
            (Status::Failed, Value::Null, Some(e.to_string()))
        }
        Err(e) => (Status::Error, Value::Null, Some(e.to_string())),
    };
    AnalysisResult {
        analysis: a,
        scale: b.scale.clone(),
        status,
        value,
        error,
        wall_ms,
    }
}

/// Builds the source and runs the analyses in parallel; results keep the
/// order of the config (or of [`Analysis::ALL`] with `all`).
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<ReportBundle> {
    let built = cfg.source.build()?;
    let mut list: Vec<Analysis> = if cfg.all {
        Analysis::ALL
            .iter()
            .copied()
            .filter(|a| a.applies(&built))
            .collect()
    } else {
        cfg.analyses.clone()
    };
    let mut seen = std::collections::HashSet::new();
    list.retain(|a| seen.insert(*a));
    let results: Vec<AnalysisResult> = list
        .par_iter()
        .map(|&a| run_one(a, &built, cfg.timings))
        .collect();
    let x = &built.complex;
    Ok(ReportBundle {
        schema: SCHEMA_VERSION,
        source: cfg.source.clone(),
        complex: ComplexSummary {
            vertices: x.num_vertices(),
            edges: x.num_edges(),
            hyperplanes: x.num_hyperplanes(),
            dimension: x.dimension(),
        },
        passed: results.iter().all(|r| r.status != Status::Failed),
        results,
    })
}

/// Inline copy of a complex, for embedding in bundles and corpus files.
pub fn complex_source(x: &CubeComplex) -> Source {
    let GraphJson { vertices, edges } = x.to_graph_json();
    Source::Complex { vertices, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> DefiningGraphJson {
        DefiningGraph::cycle(4).to_json()
    }

    #[test]
    fn racg_square_bundle() {
        let mut cfg = PipelineConfig::new(
            Source::Racg {
                graph: c4(),
                radius: 4,
            },
            vec![],
        );
        cfg.all = true;
        let b = run_pipeline(&cfg).unwrap();
        let get = |a: Analysis| b.results.iter().find(|r| r.analysis == a).unwrap();
        assert_eq!(get(Analysis::Meier).value, json!(false));
        assert!(get(Analysis::Thickness).value["value"].as_u64().unwrap() >= 3);
        assert!(b.results.iter().all(|r| r.analysis != Analysis::RaagAcyl));
        assert!(b.passed, "{}", b.to_json_pretty());
        let again = run_pipeline(&cfg).unwrap();
        assert_eq!(b.to_json_pretty(), again.to_json_pretty());
    }

    #[test]
    fn empty_analysis_list() {
        let cfg = PipelineConfig::new(Source::Grid { p: 1, q: 1 }, vec![]);
        let b = run_pipeline(&cfg).unwrap();
        assert!(b.results.is_empty() && b.passed);
    }

    #[test]
    fn schema_errors_carry_positions() {
        let err = PipelineConfig::from_json_str(
            "{\n  \"schema\": 1,\n  \"source\": {\"builder\": \"grid\", \"p\": 2,}\n}",
        )
        .unwrap_err();
        assert!(matches!(err, CubexError::Schema { line: 3, .. }), "{err:?}");
        let err = PipelineConfig::from_json_str(
            "{\n \"schema\": 2, \"source\": {\"builder\": \"cube\", \"dim\": 2}}",
        )
        .unwrap_err();
        assert!(
            matches!(
                err,
                CubexError::Schema {
                    line: 2,
                    column: 2,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = PipelineConfig::from_json_str(
            r#"{"schema": 1, "source": {"builder": "cube", "dim": 2}, "analyses": ["nope"]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CubexError::Schema { line: 1, .. }));
    }

    #[test]
    fn config_round_trip() {
        let cfg = PipelineConfig::new(
            Source::Product {
                left: Box::new(Source::Path { length: 2 }),
                right: Box::new(Source::Staircase { steps: 3 }),
            },
            vec![Analysis::Thickness, Analysis::Hx],
        );
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(PipelineConfig::from_json_str(&text).unwrap(), cfg);
    }
}
