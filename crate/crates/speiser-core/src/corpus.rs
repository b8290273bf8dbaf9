//! Bundled corpus management: every entry is a graph (or tessellation) file
//! plus a map of expected analysis results; the runner recomputes each
//! summary and diffs it against the expectations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::balance::harness_row;
use crate::decomposition::decompose;
use crate::extension::check_feasibility;
use crate::graph::RotationGraph;
use crate::labelling::{construct_labelling, labelling_from_spec, q_bounds, ConstructOutcome};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<CorpusEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub file: String,
    /// Where the instance comes from (function, figure in the literature, or
    /// a derivation note for computed expectations).
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labelling_file: Option<String>,
    /// Expected summary values; only the listed keys are compared.
    #[serde(default)]
    pub expected: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum CorpusError {
    #[error("manifest malformed: {0}")]
    ManifestMalformed(String),
    #[error("io error on {0}: {1}")]
    Io(String, String),
}

pub fn corpus_dir(cli_override: Option<&Path>) -> PathBuf {
    if let Some(p) = cli_override {
        return p.to_path_buf();
    }
    if let Ok(env) = std::env::var("SPEISER_CORPUS_DIR") {
        return PathBuf::from(env);
    }
    PathBuf::from("corpus")
}

pub fn load_manifest(dir: &Path) -> Result<Manifest, CorpusError> {
    let path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CorpusError::Io(path.display().to_string(), e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| CorpusError::ManifestMalformed(e.to_string()))
}

pub fn load_graph(dir: &Path, file: &str) -> Result<RotationGraph, CorpusError> {
    let path = dir.join(file);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CorpusError::Io(path.display().to_string(), e.to_string()))?;
    crate::graph::from_json(&text).map_err(|e| CorpusError::Io(file.to_string(), e))
}

/// Computes the full summary of one graph entry. Every value is derived
/// deterministically; expectations pin whichever keys matter per entry.
pub fn summarize(g: &RotationGraph, labelling_json: Option<&str>) -> BTreeMap<String, Value> {
    let mut out = BTreeMap::new();
    out.insert("vertices".into(), json!(g.map().vertex_count()));
    out.insert("edges".into(), json!(g.map().edge_count()));
    out.insert("declared_ends".into(), json!(g.ends().len()));
    out.insert("periodic".into(), json!(g.periodic().is_some()));
    match q_bounds(g) {
        Ok(b) => {
            out.insert("q_min".into(), json!(b.q_min));
            out.insert("q_max".into(), json!(b.q_max));
        }
        Err(e) => {
            out.insert("q_bounds_error".into(), json!(e.to_string()));
        }
    }
    // A labelling: supplied, or constructed when the graph is regular.
    let labelling = if let Some(text) = labelling_json {
        serde_json::from_str::<crate::labelling::LabellingSpec>(text)
            .ok()
            .and_then(|spec| labelling_from_spec(&spec, g.map().dart_count()).ok())
    } else {
        let q = g.map().vertices().map(|v| g.map().valence(v)).max().unwrap_or(0) as u32;
        match construct_labelling(g, q, crate::map::DartId(0)) {
            Ok(ConstructOutcome::Consistent(l)) => {
                out.insert("labelling".into(), json!("consistent"));
                Some(l)
            }
            Ok(ConstructOutcome::Descended { q0, failing, .. }) => {
                out.insert("labelling".into(), json!(format!("descended to {q0}")));
                out.insert("minimality_failures".into(), json!(failing));
                None
            }
            Ok(ConstructOutcome::Stuck { failing, .. }) => {
                out.insert("labelling".into(), json!("stuck"));
                out.insert("minimality_failures".into(), json!(failing));
                None
            }
            Err(_) => None,
        }
    };
    if let Some(l) = &labelling {
        let verdict = crate::labelling::verify_labelling(g, l);
        out.insert("labelling_ok".into(), json!(verdict.ok()));
        if !verdict.minimality_failures.is_empty() {
            out.insert("minimality_failures".into(), json!(verdict.minimality_failures));
        }
    }
    match decompose(g, labelling.as_ref()) {
        Ok(report) => {
            out.insert("log_ends".into(), json!(report.ends.len()));
            out.insert("nucleus_vertices".into(), json!(report.nucleus.vertices.len()));
            out.insert("nucleus_loose".into(), json!(report.nucleus.loose_darts));
            out.insert("p".into(), json!(report.counts.p));
            out.insert("r".into(), json!(report.counts.r));
            out.insert("per_period".into(), json!(report.counts.per_period));
            out.insert(
                "tags".into(),
                json!(report.tags.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>()),
            );
            out.insert("conformal".into(), json!(format!("{:?}", report.conformal)));
            let mut labels: Vec<Value> = report
                .divisor
                .entries
                .iter()
                .filter(|e| e.multiplicity.is_none())
                .map(|e| json!(e.label))
                .collect();
            labels.sort_by_key(|v| v.to_string());
            out.insert("logarithmic_labels".into(), json!(labels));
        }
        Err(e) => {
            out.insert("decompose_error".into(), json!(e.to_string()));
        }
    }
    if g.is_finite() {
        if let Ok(b) = q_bounds(g) {
            if let Some(q_max) = b.q_max {
                let mut feasible = Vec::new();
                for q in b.q_min.max(2)..=q_max {
                    if let Ok(Ok(())) = check_feasibility(g, q) {
                        feasible.push(q);
                    }
                }
                out.insert("feasible_q".into(), json!(feasible));
            }
        }
        if let Ok(Some(row)) = harness_row("", g, 12, 8) {
            out.insert(
                "balance".into(),
                json!({
                    "hall": row.hall.balanced,
                    "koch_lei": row.koch_lei.balanced,
                    "tomasini": row.tomasini.balanced,
                    "agree": row.agree,
                }),
            );
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub pass: bool,
    pub mismatches: BTreeMap<String, Value>,
    pub summary: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub entries: Vec<EntryReport>,
    pub pass: bool,
    pub warnings: Vec<String>,
}

pub fn corpus_run(dir: &Path) -> Result<RunReport, CorpusError> {
    let manifest = load_manifest(dir)?;
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    if manifest.entries.is_empty() {
        warnings.push("manifest lists no entries; vacuous pass".into());
    }
    for entry in &manifest.entries {
        let g = load_graph(dir, &entry.file)?;
        let labelling_json = match &entry.labelling_file {
            Some(f) => Some(
                std::fs::read_to_string(dir.join(f))
                    .map_err(|e| CorpusError::Io(f.clone(), e.to_string()))?,
            ),
            None => None,
        };
        let summary = summarize(&g, labelling_json.as_deref());
        let mut mismatches = BTreeMap::new();
        for (key, expected) in &entry.expected {
            let got = summary.get(key).cloned().unwrap_or(Value::Null);
            if &got != expected {
                mismatches.insert(
                    key.clone(),
                    json!({ "expected": expected, "got": got }),
                );
            }
        }
        entries.push(EntryReport {
            id: entry.id.clone(),
            pass: mismatches.is_empty(),
            mismatches,
            summary,
        });
    }
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    let pass = entries.iter().all(|e| e.pass);
    Ok(RunReport { entries, pass, warnings })
}
