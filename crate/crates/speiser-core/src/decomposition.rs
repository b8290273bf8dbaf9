//! Logarithmic-end detection, nucleus extraction, branch-point divisor and
//! structural classification.
//!
//! Faces translate into singularity data: a digon is an ordinary point, a
//! bounded 2m-gon an algebraic branch point of ramification index m, an
//! unbounded face a logarithmic one. Logarithmic ends are maximal
//! alternating-bundle ladders; the nucleus is what remains when they are
//! removed, keeping loose darts where they were attached.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{RotationGraph, VertexKind};
use crate::labelling::{Labelling, LabellingError};
use crate::map::{DartId, VertexId};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("face starting at {0:?} has odd side count {1}; the embedding is broken")]
    OddFace(DartId, usize),
    #[error("end {0} violates condition ({1}): {2}")]
    EndConditionViolated(usize, &'static str, String),
    #[error(transparent)]
    Labelling(#[from] LabellingError),
}

/// Classification of one face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceClass {
    /// A digon; dual to an ordinary (cosingular) point.
    Ordinary,
    /// A bounded 2m-gon, m >= 2: an algebraic branch point of index m.
    Algebraic { m: u32 },
    /// An unbounded face: a logarithmic branch point.
    Logarithmic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifiedFace {
    /// Smallest dart on the face boundary (its stable key).
    pub key: DartId,
    pub class: FaceClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<u32>,
}

/// Classifies every face. For periodic graphs the classification covers one
/// fundamental domain (faces whose smallest dart lies in the middle copy of
/// a three-copy unrolling), and `per_period` is set on the result.
pub struct FaceClassification {
    pub faces: Vec<ClassifiedFace>,
    /// Digons interior to declared ends, per end, per ladder period.
    pub end_digons: Vec<(usize, u32)>,
    pub per_period: bool,
}

pub fn classify_faces(
    g: &RotationGraph,
    l: Option<&Labelling>,
) -> Result<FaceClassification, DecompositionError> {
    if g.periodic().is_some() {
        return classify_periodic(g, l);
    }
    let faces = g.faces();
    let mut out = Vec::new();
    for f in &faces.bounded {
        let key = *f.darts.iter().min().unwrap();
        let n = f.darts.len();
        if n % 2 != 0 {
            return Err(DecompositionError::OddFace(key, n));
        }
        let class = if n == 2 {
            FaceClass::Ordinary
        } else {
            FaceClass::Algebraic { m: (n / 2) as u32 }
        };
        let label = match l {
            Some(l) => Some(crate::labelling::bounded_face_label(g, l, &f.darts)?),
            None => None,
        };
        out.push(ClassifiedFace { key, class, label });
    }
    for f in &faces.unbounded {
        let key = *f.darts.iter().min().unwrap();
        let label = match l {
            Some(l) => Some(crate::labelling::unbounded_face_label(g, l, &f.darts)?),
            None => None,
        };
        out.push(ClassifiedFace { key, class: FaceClass::Logarithmic, label });
    }
    out.sort_by_key(|f| f.key);
    let end_digons = faces.end_digons.iter().map(|d| (d.end, d.per_period)).collect();
    Ok(FaceClassification { faces: out, end_digons, per_period: false })
}

fn classify_periodic(
    g: &RotationGraph,
    l: Option<&Labelling>,
) -> Result<FaceClassification, DecompositionError> {
    let (unrolled, table) = g.unroll(3);
    let big_l = l.map(|l| {
        let mut labels = vec![0u32; unrolled.map().dart_count()];
        for (c, tab) in table.iter().enumerate() {
            for d in 0..g.map().dart_count() {
                labels[tab[d].idx()] = (l.labels[d] + c as u32 * l.shift) % l.q;
            }
        }
        Labelling { q: l.q, labels, shift: 0, cyclic_order_name: None }
    });
    let mid_range = {
        let nd = g.map().dart_count();
        DartId(nd as u32)..DartId(2 * nd as u32)
    };
    let in_middle = |d: DartId| d >= mid_range.start && d < mid_range.end;
    let faces = unrolled.faces();
    let mut out = Vec::new();
    for f in &faces.bounded {
        let key = *f.darts.iter().min().unwrap();
        if !in_middle(key) {
            continue;
        }
        let n = f.darts.len();
        if n % 2 != 0 {
            return Err(DecompositionError::OddFace(key, n));
        }
        let class = if n == 2 { FaceClass::Ordinary } else { FaceClass::Algebraic { m: (n / 2) as u32 } };
        let label = match &big_l {
            Some(bl) => Some(crate::labelling::bounded_face_label(&unrolled, bl, &f.darts)?),
            None => None,
        };
        out.push(ClassifiedFace { key: DartId(key.0 - mid_range.start.0), class, label });
    }
    for f in &faces.unbounded {
        let key = *f.darts.iter().min().unwrap();
        if !in_middle(key) {
            continue;
        }
        let label = match &big_l {
            Some(bl) => Some(crate::labelling::unbounded_face_label(&unrolled, bl, &f.darts)?),
            None => None,
        };
        out.push(ClassifiedFace { key: DartId(key.0 - mid_range.start.0), class: FaceClass::Logarithmic, label });
    }
    // Faces cut by the outer seam are the ones continuing into neighbor
    // copies; the middle copy sees each once per period through its darts.
    for f in &faces.seam_cut {
        let key = *f.darts.iter().min().unwrap();
        if !in_middle(key) {
            continue;
        }
        let label = match &big_l {
            Some(bl) => Some(crate::labelling::unbounded_face_label(&unrolled, bl, &f.darts)?),
            None => None,
        };
        out.push(ClassifiedFace { key: DartId(key.0 - mid_range.start.0), class: FaceClass::Logarithmic, label });
    }
    out.sort_by_key(|f| f.key);
    let end_digons = g
        .faces()
        .end_digons
        .iter()
        .map(|d| (d.end, d.per_period))
        .collect();
    Ok(FaceClassification { faces: out, end_digons, per_period: true })
}

/// A detected maximal logarithmic end.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogEnd {
    /// Index of the declared end this maximal end grew from.
    pub declared: usize,
    /// Vertex of the nucleus the maximal end hangs off.
    pub attachment: VertexId,
    /// Width of the bundle attaching the ladder to the nucleus.
    pub rho1: u32,
    /// Width of the following bundle; widths alternate rho1, rho2, ...
    pub rho2: u32,
    pub first_kind: VertexKind,
    /// Core vertices absorbed into the maximal ladder, innermost last.
    pub absorbed: Vec<VertexId>,
    /// Labels of the two unbounded faces flanking the end, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flank_labels: Option<(u32, u32)>,
}

/// Grows every declared end to a maximal ladder. Growth absorbs the current
/// attachment vertex while it has exactly one distinct neighbor besides the
/// ladder, carries no other loose darts, and its bundle widths continue the
/// alternation. Two ends eating the same bi-infinite ladder split it at the
/// first vertex carrying another end's attachment.
pub fn find_log_ends(g: &RotationGraph) -> Result<Vec<LogEnd>, DecompositionError> {
    let map = g.map();
    verify_declared_ends(g)?;
    let mut claimed: Vec<Option<usize>> = vec![None; map.vertex_count()];
    let mut out = Vec::new();
    for (i, end) in g.ends().iter().enumerate() {
        let mut attachment = map.vertex_of(end.attach);
        let mut rho1 = end.rho1;
        let mut rho2 = end.rho2;
        let mut first_kind = end.first_kind;
        let mut absorbed: Vec<VertexId> = Vec::new();
        loop {
            let u = attachment;
            if claimed[u.idx()].is_some() {
                break;
            }
            // Loose darts at u beyond this end's own attach bundle stop the
            // growth (another end or a seam hangs here).
            let other_loose = map
                .rotation(u)
                .iter()
                .filter(|&&d| map.is_loose(d))
                .filter(|&&d| match g.loose_role(d) {
                    Some(crate::graph::LooseRole::End { end, .. }) => end != i,
                    _ => true,
                })
                .count();
            if other_loose > 0 {
                break;
            }
            // Neighbors besides the ladder behind u (the vertex this end
            // absorbed last); vertices claimed by other ends still count,
            // they just stop the next absorption step.
            let behind = absorbed.last().copied();
            let mut neighbors: Vec<VertexId> = map
                .rotation(u)
                .iter()
                .filter_map(|&d| map.head(d))
                .filter(|&w| Some(w) != behind)
                .collect();
            neighbors.sort();
            neighbors.dedup();
            if neighbors.len() != 1 {
                break;
            }
            let w = neighbors[0];
            let width = map
                .rotation(u)
                .iter()
                .filter(|&&d| map.head(d) == Some(w))
                .count() as u32;
            // Alternation: the bundle behind u must have the other width.
            if width != rho2 {
                break;
            }
            absorbed.push(u);
            claimed[u.idx()] = Some(i);
            first_kind = g.kind(u);
            std::mem::swap(&mut rho1, &mut rho2);
            attachment = w;
        }
        out.push(LogEnd {
            declared: i,
            attachment,
            rho1,
            rho2,
            first_kind,
            absorbed,
            flank_labels: None,
        });
    }
    Ok(out)
}

/// Checks the declared end descriptors against the ladder conditions that
/// are visible from the core: positive widths, a single attachment vertex,
/// consistent first kind, and loose-bundle contiguity (already enforced at
/// build time).
fn verify_declared_ends(g: &RotationGraph) -> Result<(), DecompositionError> {
    for (i, e) in g.ends().iter().enumerate() {
        if e.rho1 < 1 || e.rho2 < 1 {
            return Err(DecompositionError::EndConditionViolated(
                i,
                "iii",
                "bundle widths must be at least 1".into(),
            ));
        }
        let u = g.map().vertex_of(e.attach);
        if g.kind(u) == e.first_kind {
            return Err(DecompositionError::EndConditionViolated(
                i,
                "ii",
                "ladder vertices must alternate kinds starting opposite the attachment".into(),
            ));
        }
    }
    Ok(())
}

/// The nucleus left over after removing the maximal ends: the surviving
/// vertices plus a count of loose darts (attach bundles of the maximal ends
/// and any declared loose structure on surviving vertices).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Nucleus {
    pub vertices: Vec<VertexId>,
    pub loose_darts: u32,
    pub edges: u32,
}

pub fn nucleus(g: &RotationGraph, ends: &[LogEnd]) -> Nucleus {
    let map = g.map();
    let mut absorbed = vec![false; map.vertex_count()];
    for e in ends {
        for &v in &e.absorbed {
            absorbed[v.idx()] = true;
        }
    }
    let vertices: Vec<VertexId> = map.vertices().filter(|v| !absorbed[v.idx()]).collect();
    let mut loose = 0u32;
    let mut edges = 0u32;
    for &v in &vertices {
        for &d in map.rotation(v) {
            match map.head(d) {
                None => loose += 1,
                Some(w) => {
                    if absorbed[w.idx()] {
                        loose += 1;
                    } else {
                        edges += 1;
                    }
                }
            }
        }
    }
    Nucleus { vertices, loose_darts: loose, edges: edges / 2 }
}

/// One branch-point entry: the face key, its label (if any) and the
/// ramification index, `None` standing for infinity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub face: DartId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<u32>,
    /// `Some(m)` for an algebraic branch point, `None` for a logarithmic one.
    pub multiplicity: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Divisor {
    pub entries: Vec<DivisorEntry>,
    /// Number of logarithmic branch points (unbounded faces).
    pub p: u32,
    /// Number of algebraic branch points.
    pub r: u32,
    pub delta: u32,
    pub per_period: bool,
}

pub fn branch_divisor(classification: &FaceClassification) -> Divisor {
    let mut entries = Vec::new();
    let mut p = 0;
    let mut r = 0;
    for f in &classification.faces {
        match f.class {
            FaceClass::Ordinary => {}
            FaceClass::Algebraic { m } => {
                r += 1;
                entries.push(DivisorEntry { face: f.key, label: f.label, multiplicity: Some(m) });
            }
            FaceClass::Logarithmic => {
                p += 1;
                entries.push(DivisorEntry { face: f.key, label: f.label, multiplicity: None });
            }
        }
    }
    Divisor { entries, p, r, delta: p + r, per_period: classification.per_period }
}

/// Structural class tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StructureTag {
    Rational,
    PolynomialLike,
    NFunction,
    FiniteSpeiser,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConformalTag {
    Elliptic,
    Parabolic,
    Unknown,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub tags: Vec<StructureTag>,
    pub conformal: ConformalTag,
    /// Degree `n` when the graph is finite (`n` blue tiles of the dual).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub fn classify_structure(
    g: &RotationGraph,
    classification: &FaceClassification,
    ends: &[LogEnd],
) -> Classification {
    let mut tags = Vec::new();
    let mut warnings = Vec::new();
    if g.meta().truncated == Some(true) {
        warnings.push("truncated window: structural tags suppressed".into());
        return Classification { tags, conformal: ConformalTag::Unknown, degree: None, warnings };
    }
    let finite = g.is_finite();
    let bounded_all_digons = classification
        .faces
        .iter()
        .all(|f| !matches!(f.class, FaceClass::Algebraic { .. }));
    let unbounded_finite = !classification.per_period
        || classification
            .faces
            .iter()
            .all(|f| f.class != FaceClass::Logarithmic);
    let non_digon_finite = g.non_digon_face_count().is_some();
    let degree = if finite {
        Some(g.vertices_of_kind(VertexKind::Circle).len() as u32)
    } else {
        None
    };
    if finite {
        tags.push(StructureTag::Rational);
        let max_side = g
            .faces()
            .bounded
            .iter()
            .map(|f| f.darts.len())
            .max()
            .unwrap_or(0);
        if let Some(n) = degree {
            if n >= 2 && max_side == 2 * n as usize {
                tags.push(StructureTag::PolynomialLike);
            }
        }
    } else {
        if bounded_all_digons && unbounded_finite && !classification.per_period {
            tags.push(StructureTag::NFunction);
        }
        if non_digon_finite {
            tags.push(StructureTag::FiniteSpeiser);
        }
    }
    let conformal = if finite {
        ConformalTag::Elliptic
    } else if tags.contains(&StructureTag::NFunction) || tags.contains(&StructureTag::FiniteSpeiser) {
        ConformalTag::Parabolic
    } else {
        ConformalTag::Unknown
    };
    if tags.contains(&StructureTag::FiniteSpeiser) && ends.len() == 1 {
        warnings.push(
            "a finite-type graph with exactly one logarithmic end cannot close up; check the input"
                .into(),
        );
    }
    Classification { tags, conformal, degree, warnings }
}

/// The full decomposition report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub nucleus: Nucleus,
    pub ends: Vec<LogEnd>,
    pub divisor: Divisor,
    pub tags: Vec<StructureTag>,
    pub conformal: ConformalTag,
    pub counts: ReportCounts,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Whether each end looks exponential (one flank label designated as the
    /// value at infinity) or h-tangent-like.
    pub end_types: Vec<EndType>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndType {
    Exponential,
    HTangent,
    Unlabelled,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportCounts {
    pub p: u32,
    pub r: u32,
    pub delta: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    pub per_period: bool,
}

pub fn decompose(
    g: &RotationGraph,
    l: Option<&Labelling>,
) -> Result<DecompositionReport, DecompositionError> {
    let classification = classify_faces(g, l)?;
    let mut ends = find_log_ends(g)?;
    annotate_flanks(g, l, &mut ends);
    let nuc = nucleus(g, &ends);
    let divisor = branch_divisor(&classification);
    let mut class = classify_structure(g, &classification, &ends);
    if !classification.per_period {
        let unbounded = classification
            .faces
            .iter()
            .filter(|f| f.class == FaceClass::Logarithmic)
            .count();
        if ends.len() > unbounded {
            class.warnings.push(format!(
                "{} ends but only {unbounded} unbounded faces; consecutive ends must be separated by one",
                ends.len()
            ));
        }
    }
    let end_types = ends
        .iter()
        .map(|e| match (e.flank_labels, g.meta().infinity_label) {
            (Some((a, b)), Some(inf)) if a == inf || b == inf => EndType::Exponential,
            (Some(_), Some(_)) => EndType::HTangent,
            _ => EndType::Unlabelled,
        })
        .collect();
    Ok(DecompositionReport {
        nucleus: nuc,
        counts: ReportCounts {
            p: divisor.p,
            r: divisor.r,
            delta: divisor.delta,
            q: l.map(|l| l.q),
            per_period: divisor.per_period,
        },
        ends,
        divisor,
        tags: class.tags,
        conformal: class.conformal,
        warnings: class.warnings,
        end_types,
    })
}

fn annotate_flanks(g: &RotationGraph, l: Option<&Labelling>, ends: &mut [LogEnd]) {
    let Some(l) = l else { return };
    if g.periodic().is_some() {
        return;
    }
    let faces = g.faces();
    let mut by_end: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for f in &faces.unbounded {
        if let Ok(lab) = crate::labelling::unbounded_face_label(g, l, &f.darts) {
            by_end.entry(f.flanks.0).or_default().push(lab);
            by_end.entry(f.flanks.1).or_default().push(lab);
        }
    }
    for e in ends.iter_mut() {
        if let Some(labs) = by_end.get(&e.declared) {
            if labs.len() >= 2 {
                e.flank_labels = Some((labs[0], labs[1]));
            } else if labs.len() == 1 {
                e.flank_labels = Some((labs[0], labs[0]));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EndDescriptor, GraphSpec, Meta, VertexSpec};
    use crate::graph::VertexKind::{Circle, Cross};
    use crate::map::DartId;

    #[test]
    fn end_of_matching_kind_is_rejected_at_build() {
        let spec = GraphSpec {
            vertices: vec![VertexSpec {
                id: 0,
                kind: Circle,
                rotation: vec![DartId(0), DartId(1), DartId(2)],
            }],
            twins: vec![],
            ends: vec![
                EndDescriptor { attach: DartId(0), rho1: 1, rho2: 2, first_kind: Circle },
                EndDescriptor { attach: DartId(1), rho1: 1, rho2: 2, first_kind: Cross },
                EndDescriptor { attach: DartId(2), rho1: 1, rho2: 2, first_kind: Cross },
            ],
            periodic: None,
            meta: Meta::default(),
        };
        assert!(build_graph(&spec).is_err());
    }

    #[test]
    fn single_end_finite_type_graph_draws_a_warning() {
        // A one-ended graph with finitely many non-digon faces cannot close
        // up into a line complex; the report flags it instead of failing.
        let spec = GraphSpec {
            vertices: vec![
                VertexSpec {
                    id: 0,
                    kind: Circle,
                    rotation: vec![DartId(0), DartId(1), DartId(2)],
                },
                VertexSpec { id: 1, kind: Cross, rotation: vec![DartId(4), DartId(3)] },
            ],
            twins: vec![(DartId(1), DartId(3)), (DartId(2), DartId(4))],
            ends: vec![EndDescriptor { attach: DartId(0), rho1: 1, rho2: 2, first_kind: Cross }],
            periodic: None,
            meta: Meta::default(),
        };
        let g = build_graph(&spec).unwrap();
        let report = decompose(&g, None).unwrap();
        assert_eq!(report.ends.len(), 1);
        assert!(report.tags.contains(&StructureTag::FiniteSpeiser));
        assert!(!report.warnings.is_empty(), "one-ended graph must be flagged");
    }

    #[test]
    fn end_growth_stops_at_branch_vertices() {
        // A vertex with three distinct neighbors can never join a ladder.
        let spec = GraphSpec {
            vertices: vec![
                VertexSpec {
                    id: 0,
                    kind: Circle,
                    rotation: vec![DartId(0), DartId(1), DartId(2)],
                },
                VertexSpec { id: 1, kind: Cross, rotation: vec![DartId(3), DartId(4)] },
                VertexSpec { id: 2, kind: Cross, rotation: vec![DartId(5), DartId(6)] },
                VertexSpec { id: 3, kind: Circle, rotation: vec![DartId(7), DartId(8)] },
            ],
            twins: vec![
                (DartId(1), DartId(3)),
                (DartId(2), DartId(5)),
                (DartId(4), DartId(7)),
                (DartId(6), DartId(8)),
            ],
            ends: vec![EndDescriptor { attach: DartId(0), rho1: 1, rho2: 2, first_kind: Cross }],
            periodic: None,
            meta: Meta::default(),
        };
        let g = build_graph(&spec).unwrap();
        let ends = find_log_ends(&g).unwrap();
        assert_eq!(ends.len(), 1);
        assert!(ends[0].absorbed.is_empty(), "the square blocks absorption");
        let nuc = nucleus(&g, &ends);
        assert_eq!(nuc.vertices.len(), 4);
        assert_eq!(nuc.loose_darts, 1);
    }
}
