use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubex::corpus::{corpus_generate, reference_corpus, write_corpus};
use cubex::curve::{contact_graph, crossing_graph, hx_model};
use cubex::hyperbolicity::{four_point_delta, max_flat_rectangle_thickness, MetricSpec};
use cubex::hyperplanes::{max_grid, max_join};
use cubex::median::convex_hull;
use cubex::morse::{
    contracting_ball_check, contraction_constant_rect, morse_failure_witness, racg_special_morse,
    racg_special_morse_subgraph,
};
use cubex::report::{run_pipeline, Analysis, PipelineConfig, Source};
use cubex::{CubeComplex, CubexError, DefiningGraph};

#[derive(Parser)]
#[command(
    name = "cubex",
    version,
    about = "Finite CAT(0) cube complexes and hyperplane criteria"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a complex and print it as JSON.
    Build {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run analyses on a complex file and print the report bundle.
    Analyze {
        complex: PathBuf,
        #[command(flatten)]
        select: AnalysisArgs,
    },
    /// Four-point δ, flat-rectangle thickness and join/grid thinness.
    Hyperbolicity {
        complex: PathBuf,
        #[arg(long, value_enum, default_value_t = Metric::L1)]
        metric: Metric,
        /// Well-separation parameter for `--metric dl`.
        #[arg(long = "L", default_value_t = 0)]
        l: usize,
    },
    /// Graph criterion for a special subgroup of a right-angled Coxeter group to be Morse.
    Morse {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated vertex labels, or a graph file for the subgraph.
        #[arg(long)]
        sub: String,
    },
    /// Contraction constant of the convex hull of a vertex set.
    Contracting {
        complex: PathBuf,
        /// Comma-separated vertex ids.
        #[arg(long, value_delimiter = ',', required = true)]
        subcomplex: Vec<usize>,
        /// Also look for a quasigeodesic leaving the hull by at least this much.
        #[arg(long)]
        witness: Option<usize>,
    },
    /// Crossing or contact graph of the hyperplanes.
    CurveGraph {
        complex: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Crossing)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Emit::Dot)]
        emit: Emit,
    },
    /// The δ_L model at the stable scale L* and its four-point bound.
    Hx { complex: PathBuf },
    /// Run a pipeline from a config file or builder flags.
    Report {
        /// Pipeline config (JSON, schema 1).
        #[arg(long, conflicts_with_all = ["racg", "raag", "braid", "grid", "cube", "path", "staircase", "star", "complex"])]
        config: Option<PathBuf>,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        select: AnalysisArgs,
    },
    /// Write a seeded corpus of complexes, one JSON file each.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 120)]
        max_vertices: usize,
        /// Write the fixed reference corpus instead.
        #[arg(long)]
        reference: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Ball in the right-angled Coxeter group of this defining graph.
    #[arg(long, value_name = "GRAPH")]
    racg: Option<PathBuf>,
    /// Ball in the right-angled Artin group of this defining graph.
    #[arg(long, value_name = "GRAPH")]
    raag: Option<PathBuf>,
    /// Discretized configuration space of this graph.
    #[arg(long, value_name = "GRAPH")]
    braid: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    strands: usize,
    #[arg(long)]
    subdivide: bool,
    #[arg(long, value_name = "PxQ")]
    grid: Option<String>,
    #[arg(long, value_name = "DIM")]
    cube: Option<usize>,
    #[arg(long, value_name = "LENGTH")]
    path: Option<usize>,
    #[arg(long, value_name = "STEPS")]
    staircase: Option<usize>,
    #[arg(long, value_name = "ARMSxLENGTH")]
    star: Option<String>,
    /// A complex file.
    #[arg(long, value_name = "FILE")]
    complex: Option<PathBuf>,
    #[arg(short, long, default_value_t = 3)]
    radius: usize,
}

#[derive(Args)]
struct AnalysisArgs {
    /// Comma-separated analysis names.
    #[arg(long, value_delimiter = ',', value_parser = parse_analysis)]
    analysis: Vec<Analysis>,
    /// Every analysis that applies to the input.
    #[arg(long)]
    all: bool,
    /// Record wall-times (the bundle is then not reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    L1,
    Linf,
    Dl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Crossing,
    Contact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dot,
    Json,
}

fn parse_analysis(s: &str) -> Result<Analysis, String> {
    serde_json::from_value(Value::String(s.trim().to_owned())).map_err(|_| {
        let names: Vec<String> = Analysis::ALL.iter().map(|a| a.name()).collect();
        format!(
            "unknown analysis '{s}'; expected one of {}",
            names.join(", ")
        )
    })
}

fn read(path: &Path) -> cubex::Result<String> {
    std::fs::read_to_string(path).map_err(|e| CubexError::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> cubex::Result<DefiningGraph> {
    let text = read(path)?;
    let dot = path.extension().is_some_and(|e| e == "dot" || e == "gv") || {
        let t = text.trim_start();
        t.starts_with("graph") || t.starts_with("strict")
    };
    if dot {
        DefiningGraph::from_dot(&text)
    } else {
        DefiningGraph::from_json_str(&text)
    }
}

fn load_complex(path: &Path) -> cubex::Result<CubeComplex> {
    CubeComplex::from_json_str(&read(path)?)
}

fn pair(s: &str, what: &str) -> cubex::Result<(usize, usize)> {
    let bad = || CubexError::Input(format!("{what} expects AxB, got '{s}'"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

impl SourceArgs {
    fn to_source(&self) -> cubex::Result<Source> {
        let given = [
            self.racg.is_some(),
            self.raag.is_some(),
            self.braid.is_some(),
            self.grid.is_some(),
            self.cube.is_some(),
            self.path.is_some(),
            self.staircase.is_some(),
            self.star.is_some(),
            self.complex.is_some(),
        ];
        match given.iter().filter(|&&g| g).count() {
            0 => return Err(CubexError::Input("no input given; pass one of --racg, --raag, --braid, --grid, --cube, --path, --staircase, --star, --complex".into())),
            1 => {}
            _ => return Err(CubexError::Input("pass exactly one input".into())),
        }
        let radius = self.radius;
        Ok(if let Some(p) = &self.racg {
            Source::Racg {
                graph: load_graph(p)?.to_json(),
                radius,
            }
        } else if let Some(p) = &self.raag {
            Source::Raag {
                graph: load_graph(p)?.to_json(),
                radius,
            }
        } else if let Some(p) = &self.braid {
            Source::Braid {
                graph: load_graph(p)?.to_json(),
                strands: self.strands,
                subdivide: self.subdivide,
            }
        } else if let Some(s) = &self.grid {
            let (p, q) = pair(s, "--grid")?;
            Source::Grid { p, q }
        } else if let Some(dim) = self.cube {
            Source::Cube { dim }
        } else if let Some(length) = self.path {
            Source::Path { length }
        } else if let Some(steps) = self.staircase {
            Source::Staircase { steps }
        } else if let Some(s) = &self.star {
            let (arms, length) = pair(s, "--star")?;
            Source::StarTree { arms, length }
        } else {
            let p = self.complex.as_ref().unwrap();
            Source::File {
                path: p.display().to_string(),
            }
        })
    }
}

/// Printed output and whether every checked claim held.
struct Output {
    text: String,
    ok: bool,
}

fn json_out(v: &Value, ok: bool) -> Output {
    Output {
        text: serde_json::to_string_pretty(v).expect("json") + "\n",
        ok,
    }
}

fn pipeline(source: Source, select: &AnalysisArgs) -> cubex::Result<Output> {
    let mut cfg = PipelineConfig::new(source, select.analysis.clone());
    cfg.all = select.all;
    cfg.timings = select.timings;
    run_config(&cfg)
}

fn run_config(cfg: &PipelineConfig) -> cubex::Result<Output> {
    let bundle = run_pipeline(cfg)?;
    Ok(Output {
        text: bundle.to_json_pretty() + "\n",
        ok: bundle.passed,
    })
}

fn family_or_error<T: serde::Serialize>(r: cubex::Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).expect("json"),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn run(cmd: Command) -> cubex::Result<Output> {
    match cmd {
        Command::Build { source, output } => {
            let built = source.to_source()?.build()?;
            let text = built.complex.to_json_string() + "\n";
            match output {
                Some(p) => {
                    std::fs::write(&p, &text)
                        .map_err(|e| CubexError::Input(format!("{}: {e}", p.display())))?;
                    Ok(Output {
                        text: String::new(),
                        ok: true,
                    })
                }
                None => Ok(Output { text, ok: true }),
            }
        }
        Command::Analyze { complex, select } => {
            load_complex(&complex)?;
            pipeline(
                Source::File {
                    path: complex.display().to_string(),
                },
                &select,
            )
        }
        Command::Hyperbolicity { complex, metric, l } => {
            let x = load_complex(&complex)?;
            let spec = match metric {
                Metric::L1 => MetricSpec::L1,
                Metric::Linf => MetricSpec::Linf,
                Metric::Dl => MetricSpec::DeltaL { l },
            };
            let delta = four_point_delta(&x, spec)?;
            let thickness = max_flat_rectangle_thickness(&x);
            let join = max_join(&x);
            let grid = max_grid(&x);
            let thin = |r: &cubex::Result<cubex::hyperplanes::HyperplanePairFamily>| match r {
                Ok(f) => json!(f.thinness()),
                Err(CubexError::Budget { lower_bound }) => json!({ "at_least": lower_bound }),
                Err(e) => json!({ "error": e.to_string() }),
            };
            let v = json!({
                "metric": spec,
                "delta": delta.delta(),
                "twice_delta": delta.twice_delta,
                "exhaustive": delta.exhaustive,
                "thickness": thickness.value,
                "thinness": { "join": thin(&join), "grid": thin(&grid) },
                "witnesses": {
                    "quadruple": delta.witness,
                    "rectangle": thickness.witness,
                    "join": family_or_error(join),
                    "grid": family_or_error(grid),
                },
            });
            Ok(json_out(&v, true))
        }
        Command::Morse { graph, sub } => {
            let gamma = load_graph(&graph)?;
            let verdict = if Path::new(&sub).is_file() {
                racg_special_morse_subgraph(&gamma, &load_graph(Path::new(&sub))?)?
            } else {
                let idx: Vec<usize> = sub
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|l| {
                        gamma
                            .label_index(l)
                            .ok_or_else(|| CubexError::Input(format!("no vertex labelled '{l}'")))
                    })
                    .collect::<cubex::Result<_>>()?;
                racg_special_morse(&gamma, &idx)?
            };
            let square = verdict
                .square
                .map(|sq| sq.map(|v| gamma.labels()[v].clone()));
            Ok(json_out(
                &json!({ "morse": verdict.morse, "square": square }),
                true,
            ))
        }
        Command::Contracting {
            complex,
            subcomplex,
            witness,
        } => {
            let x = load_complex(&complex)?;
            if let Some(&v) = subcomplex.iter().find(|&&v| v >= x.num_vertices()) {
                return Err(CubexError::Input(format!("vertex {v} out of range")));
            }
            let y = convex_hull(&x, &subcomplex)?;
            let rect = contraction_constant_rect(&x, &y)?;
            let balls = contracting_ball_check(&x, &y, rect.value);
            let mut v = json!({
                "hull": y.members(),
                "contraction_constant": rect.value,
                "witness": rect.witness,
                "ball_check": balls,
            });
            if let Some(n) = witness {
                v["quasigeodesic"] = family_or_error(morse_failure_witness(&x, &y, n));
            }
            Ok(json_out(&v, balls.holds))
        }
        Command::CurveGraph {
            complex,
            kind,
            emit,
        } => {
            let x = load_complex(&complex)?;
            let g = match kind {
                Kind::Crossing => crossing_graph(&x),
                Kind::Contact => contact_graph(&x),
            };
            Ok(match emit {
                Emit::Dot => Output {
                    text: g.to_dot(),
                    ok: true,
                },
                Emit::Json => json_out(
                    &json!({ "nodes": g.num_nodes(), "labels": g.labels(), "edges": g.edges() }),
                    true,
                ),
            })
        }
        Command::Hx { complex } => {
            let x = load_complex(&complex)?;
            let h = hx_model(&x)?;
            let v = json!({
                "L_star": h.l_star,
                "delta": h.delta.delta(),
                "bound": h.bound,
                "pass": h.pass,
                "witness": h.delta.witness,
            });
            Ok(json_out(&v, h.pass))
        }
        Command::Report {
            config,
            source,
            select,
        } => match config {
            Some(p) => {
                let mut cfg = PipelineConfig::from_json_str(&read(&p)?)?;
                cfg.all |= select.all;
                cfg.timings |= select.timings;
                cfg.analyses.extend(select.analysis.iter().copied());
                run_config(&cfg)
            }
            None => pipeline(source.to_source()?, &select),
        },
        Command::Corpus {
            seed,
            count,
            max_vertices,
            reference,
            out,
        } => {
            let entries = if reference {
                reference_corpus()
            } else {
                corpus_generate(seed, count, max_vertices)
            };
            write_corpus(&out, &entries)?;
            let names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
            Ok(Output {
                text: names.join("\n") + "\n",
                ok: true,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
