//! Command-line front end: validation, labelling, extension, duality,
//! decomposition, balance checks, corpus runs and figure emission.
//!
//! Exit codes: 0 success (feasible / balanced / consistent), 1 domain
//! verdict failure (infeasible, violated, inconsistent labelling, corpus
//! mismatch), 2 invalid input, 64 usage error, 66 unreadable file.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use speiser_core::balance::{harness_row, tomasini_skeleton};
use speiser_core::corpus;
use speiser_core::decomposition::decompose;
use speiser_core::duality;
use speiser_core::extension::{self, ExtensionPlan};
use speiser_core::graph::{from_json, to_json, RotationGraph};
use speiser_core::labelling::{self, ConstructOutcome};
use speiser_core::map::DartId;
use speiser_core::render;

const EXIT_VERDICT: i32 = 1;
const EXIT_INPUT: i32 = 2;
const EXIT_USAGE: i32 = 64;
const EXIT_FILE: i32 = 66;

#[derive(Parser)]
#[command(name = "speiser", version, about = "Line-complex toolbox: extension, labelling, duality, decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Dot,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConditionArg {
    Hall,
    KochLei,
    Tomasini,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural invariants of a graph file.
    Validate { file: PathBuf },
    /// Admissible index range: largest valence and non-digon face count.
    Bounds { file: PathBuf },
    /// Construct the forced q-labelling from a seed dart.
    Label {
        file: PathBuf,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        seed: u32,
    },
    /// Verify a labelling file against a graph.
    VerifyLabel {
        file: PathBuf,
        #[arg(long)]
        labels: PathBuf,
    },
    /// Solve the extension problem at index q.
    Extend {
        file: PathBuf,
        #[arg(long)]
        q: u32,
        /// Also write the extended graph (requires feasibility).
        #[arg(long)]
        apply: Option<PathBuf>,
    },
    /// Dual of a tessellation graph (blue tiles -> circles).
    Dual {
        file: PathBuf,
        #[arg(long)]
        blue_face: Option<usize>,
    },
    /// Tessellation graph of a line complex.
    Primal { file: PathBuf },
    /// Homogenize a labelled tessellation graph by edge subdivision.
    Subdivide {
        file: PathBuf,
        #[arg(long)]
        blue_face: Option<usize>,
    },
    /// Forget all valence-2 vertices of a tessellation graph.
    Forget2 {
        file: PathBuf,
        #[arg(long)]
        blue_face: Option<usize>,
    },
    /// Nucleus, ends, divisor and structural tags.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Tomasini skeleton of a tessellation graph.
    Skeleton {
        file: PathBuf,
        #[arg(long)]
        blue_face: Option<usize>,
    },
    /// Balance conditions on one or more line-complex files.
    Balance {
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = ConditionArg::All)]
        condition: ConditionArg,
        #[arg(long, default_value_t = 12)]
        max_cycle: usize,
        #[arg(long, default_value_t = 8)]
        max_subgraph: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run every corpus entry and diff against its expectations.
    CorpusRun {
        #[arg(long)]
        corpus_dir: Option<PathBuf>,
    },
    /// Emit a DOT or SVG figure.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

fn read_file(path: &Path) -> String {
    match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            std::process::exit(EXIT_FILE);
        }
    }
}

fn load_graph(path: &Path) -> RotationGraph {
    match from_json(&read_file(path)) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("invalid graph {}: {e}", path.display());
            std::process::exit(EXIT_INPUT);
        }
    }
}

fn load_tgraph(path: &Path, blue_face: Option<usize>) -> duality::TGraph {
    let text = read_file(path);
    let spec: duality::TGraphSpec = match serde_json::from_str(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("invalid tessellation file {}: {e}", path.display());
            std::process::exit(EXIT_INPUT);
        }
    };
    match duality::tgraph_from_spec(&spec, blue_face) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("invalid tessellation graph {}: {e}", path.display());
            std::process::exit(EXIT_INPUT);
        }
    }
}

fn load_labelling(path: &Path, g: &RotationGraph) -> labelling::Labelling {
    let text = read_file(path);
    let spec: labelling::LabellingSpec = match serde_json::from_str(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("invalid labelling file {}: {e}", path.display());
            std::process::exit(EXIT_INPUT);
        }
    };
    match labelling::labelling_from_spec(&spec, g.map().dart_count()) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("labelling does not fit the graph: {e}");
            std::process::exit(EXIT_INPUT);
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) {
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                std::process::exit(EXIT_FILE);
            }
        }
        None => println!("{text}"),
    }
}

fn emit_json(out: &Option<PathBuf>, value: &serde_json::Value) {
    emit(out, &serde_json::to_string_pretty(value).expect("report serialization"));
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = match e.kind() {
                DisplayHelp | DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let out = cli.out.clone();
    match cli.command {
        Command::Validate { file } => {
            let g = load_graph(&file);
            emit_json(
                &out,
                &json!({
                    "valid": true,
                    "vertices": g.map().vertex_count(),
                    "edges": g.map().edge_count(),
                    "ends": g.ends().len(),
                    "periodic": g.periodic().is_some(),
                    "euler": if g.is_finite() { json!(g.map().euler_characteristic()) } else { json!(null) },
                }),
            );
        }
        Command::Bounds { file } => {
            let g = load_graph(&file);
            match labelling::q_bounds(&g) {
                Ok(b) => emit_json(&out, &json!({ "q_min": b.q_min, "q_max": b.q_max })),
                Err(e) => {
                    eprintln!("{e}");
                    std::process::exit(EXIT_INPUT);
                }
            }
        }
        Command::Label { file, q, seed } => {
            let g = load_graph(&file);
            match labelling::construct_labelling(&g, q, DartId(seed)) {
                Ok(ConstructOutcome::Consistent(l)) => {
                    emit_json(&out, &serde_json::to_value(labelling::labelling_to_spec(&l)).unwrap());
                }
                Ok(ConstructOutcome::Descended { initial, failing, q0, labelling: l0, .. }) => {
                    emit_json(
                        &out,
                        &json!({
                            "labelling": labelling::labelling_to_spec(&initial),
                            "minimality_failures": failing,
                            "descended_q": q0,
                            "descended_labelling": labelling::labelling_to_spec(&l0),
                        }),
                    );
                    std::process::exit(EXIT_VERDICT);
                }
                Ok(ConstructOutcome::Stuck { initial, failing, q_reached }) => {
                    emit_json(
                        &out,
                        &json!({
                            "labelling": labelling::labelling_to_spec(&initial),
                            "minimality_failures": failing,
                            "descent_stuck_at": q_reached,
                        }),
                    );
                    std::process::exit(EXIT_VERDICT);
                }
                Err(e) => {
                    eprintln!("{e}");
                    std::process::exit(EXIT_INPUT);
                }
            }
        }
        Command::VerifyLabel { file, labels } => {
            let g = load_graph(&file);
            let l = load_labelling(&labels, &g);
            let verdict = labelling::verify_labelling(&g, &l);
            emit_json(
                &out,
                &json!({
                    "ok": verdict.ok(),
                    "order_violations": verdict.order_violations.iter()
                        .map(|(v, m)| json!({"vertex": v.0, "detail": m})).collect::<Vec<_>>(),
                    "twin_violations": verdict.twin_violations,
                    "minimality_failures": verdict.minimality_failures,
                }),
            );
            if !verdict.ok() {
                std::process::exit(EXIT_VERDICT);
            }
        }
        Command::Extend { file, q, apply } => {
            let g = load_graph(&file);
            match extension::solve_extension(&g, q) {
                Ok(plan @ ExtensionPlan::Feasible { .. }) => {
                    if let Some(path) = apply {
                        match extension::apply_extension(&g, &plan) {
                            Ok(applied) => {
                                std::fs::write(&path, to_json(&applied.graph)).unwrap_or_else(|e| {
                                    eprintln!("cannot write {}: {e}", path.display());
                                    std::process::exit(EXIT_FILE);
                                });
                            }
                            Err(e) => {
                                eprintln!("{e}");
                                std::process::exit(EXIT_INPUT);
                            }
                        }
                    }
                    emit_json(&out, &serde_json::to_value(extension::plan_to_spec(&plan)).unwrap());
                }
                Ok(plan @ ExtensionPlan::Infeasible { .. }) => {
                    emit_json(&out, &serde_json::to_value(extension::plan_to_spec(&plan)).unwrap());
                    std::process::exit(EXIT_VERDICT);
                }
                Err(e) => {
                    eprintln!("{e}");
                    std::process::exit(EXIT_INPUT);
                }
            }
        }
        Command::Dual { file, blue_face } => {
            let t = load_tgraph(&file, blue_face);
            match duality::dual(&t) {
                Ok((g, _refs)) => emit(&out, &to_json(&g)),
                Err(e) => {
                    eprintln!("{e}");
                    std::process::exit(EXIT_INPUT);
                }
            }
        }
        Command::Primal { file } => {
            let g = load_graph(&file);
            match duality::primal(&g) {
                Ok((t, _refs)) => {
                    emit(&out, &serde_json::to_string_pretty(&duality::tgraph_to_spec(&t)).unwrap())
                }
                Err(e) => {
                    eprintln!("{e}");
                    std::process::exit(EXIT_INPUT);
                }
            }
        }
        Command::Subdivide { file, blue_face } => {
            let t = load_tgraph(&file, blue_face);
            match duality::subdivide_edges(&t) {
                Ok(a) => emit(&out, &serde_json::to_string_pretty(&duality::tgraph_to_spec(&a)).unwrap()),
                Err(e) => {
                    eprintln!("{e}");
                    std::process::exit(EXIT_INPUT);
                }
            }
        }
        Command::Forget2 { file, blue_face } => {
            let t = load_tgraph(&file, blue_face);
            match duality::forget_valence2(&t) {
                Ok(r) => emit(&out, &serde_json::to_string_pretty(&duality::tgraph_to_spec(&r)).unwrap()),
                Err(e) => {
                    eprintln!("{e}");
                    std::process::exit(EXIT_INPUT);
                }
            }
        }
        Command::Decompose { file, labels } => {
            let g = load_graph(&file);
            let l = labels.map(|p| load_labelling(&p, &g));
            match decompose(&g, l.as_ref()) {
                Ok(report) => emit_json(&out, &serde_json::to_value(&report).unwrap()),
                Err(e) => {
                    eprintln!("{e}");
                    std::process::exit(EXIT_INPUT);
                }
            }
        }
        Command::Skeleton { file, blue_face } => {
            let t = load_tgraph(&file, blue_face);
            let sk = tomasini_skeleton(&t);
            emit_json(&out, &serde_json::to_value(&sk).unwrap());
        }
        Command::Balance { files, condition, max_cycle, max_subgraph, format } => {
            if files.is_empty() {
                eprintln!("balance requires at least one graph file");
                std::process::exit(EXIT_USAGE);
            }
            let mut rows = Vec::new();
            let mut all_balanced = true;
            for file in &files {
                let g = load_graph(file);
                let name = file.file_stem().and_then(|s| s.to_str()).unwrap_or("graph").to_string();
                let row = match harness_row(&name, &g, max_cycle, max_subgraph) {
                    Ok(Some(row)) => row,
                    Ok(None) => {
                        eprintln!("{name}: tessellation side degenerate; not runnable");
                        std::process::exit(EXIT_INPUT);
                    }
                    Err(e) => {
                        eprintln!("{name}: {e}");
                        std::process::exit(EXIT_INPUT);
                    }
                };
                let checked: Vec<bool> = match condition {
                    ConditionArg::Hall => vec![row.hall.balanced],
                    ConditionArg::KochLei => vec![row.koch_lei.balanced],
                    ConditionArg::Tomasini => vec![row.tomasini.balanced],
                    ConditionArg::All => {
                        vec![row.hall.balanced, row.koch_lei.balanced, row.tomasini.balanced]
                    }
                };
                all_balanced &= checked.iter().all(|b| *b);
                rows.push(row);
            }
            match format {
                Format::Tsv => {
                    let mut text = String::from("name\thall\tkoch_lei\ttomasini\tagree\n");
                    for row in &rows {
                        text.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\n",
                            row.name, row.hall.balanced, row.koch_lei.balanced,
                            row.tomasini.balanced, row.agree
                        ));
                    }
                    emit(&out, text.trim_end());
                }
                _ => {
                    let value = json!(rows);
                    emit_json(&out, &value);
                }
            }
            if !all_balanced {
                std::process::exit(EXIT_VERDICT);
            }
        }
        Command::CorpusRun { corpus_dir } => {
            let dir = corpus::corpus_dir(corpus_dir.as_deref());
            match corpus::corpus_run(&dir) {
                Ok(report) => {
                    emit_json(&out, &serde_json::to_value(&report).unwrap());
                    if !report.pass {
                        std::process::exit(EXIT_VERDICT);
                    }
                }
                Err(corpus::CorpusError::Io(f, e)) => {
                    eprintln!("{f}: {e}");
                    std::process::exit(EXIT_FILE);
                }
                Err(e) => {
                    eprintln!("{e}");
                    std::process::exit(EXIT_INPUT);
                }
            }
        }
        Command::Render { file, format } => {
            let g = load_graph(&file);
            match format {
                Format::Svg => match render::to_svg(&g) {
                    Ok(svg) => emit(&out, &svg),
                    Err(e) => {
                        eprintln!("{e}");
                        std::process::exit(EXIT_INPUT);
                    }
                },
                _ => emit(&out, &render::to_dot(&g)),
            }
        }
    }
}
