//! Bipartite line-complex graphs over a combinatorial map.
//!
//! A [`RotationGraph`] couples a [`CombMap`] with vertex kinds (circle or
//! cross), an optional list of logarithmic-end descriptors hanging off loose
//! darts, and an optional periodic seam for graphs that repeat a finite motif
//! over the integers. Finite graphs have neither ends nor a seam and must be
//! properly embedded in the sphere (Euler characteristic 2).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::map::{CombMap, DartId, FaceWalk, MapError, VertexId};

/// The two vertex classes of the bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Circle,
    Cross,
}

impl VertexKind {
    pub fn other(self) -> VertexKind {
        match self {
            VertexKind::Circle => VertexKind::Cross,
            VertexKind::Cross => VertexKind::Circle,
        }
    }
}

/// Finite description of one semi-infinite logarithmic end.
///
/// The end is a ladder of edge bundles with alternating widths hanging off
/// the core: the bundle attaching the ladder to the core has `rho1` parallel
/// edges (the loose darts starting at `attach`), the next bundle has `rho2`,
/// then `rho1` again, and so on. `first_kind` is the kind of the first ladder
/// vertex, the one the attach bundle reaches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndDescriptor {
    pub attach: DartId,
    pub rho1: u32,
    pub rho2: u32,
    pub first_kind: VertexKind,
}

/// Periodic repetition: the motif's `outgoing` darts glue to the next copy's
/// `incoming` darts, pairwise in order, for every integer shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicSeam {
    pub outgoing: Vec<DartId>,
    pub incoming: Vec<DartId>,
}

/// Free-form provenance and naming tags. `label_names` optionally maps label
/// residues to singular-value names for reports; `infinity_label`, when set,
/// marks the label playing the role of the value at infinity.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub label_names: BTreeMap<u32, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinity_label: Option<u32>,
    /// Marks a deliberately cut-down window into a larger graph; structural
    /// classification is suppressed for such entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated: Option<bool>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("not bipartite: edge joins two {0:?} vertices")]
    NotBipartite(VertexKind),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("graph is not connected")]
    Disconnected,
    #[error("finite graph is not a sphere embedding: V - E + F = {0}, expected 2")]
    NotSpherical(i64),
    #[error("end {0}: {1}")]
    BadEnd(usize, String),
    #[error("periodic seam: {0}")]
    BadSeam(String),
    #[error("loose dart {0:?} is not claimed by any end or seam")]
    UnclaimedLooseDart(DartId),
    #[error("vertex valence {0} is below 2 at {1:?}")]
    ValenceTooSmall(usize, VertexId),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(VertexId),
}

/// What a loose dart belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LooseRole {
    End { end: usize, slot: u32 },
    SeamOut { pair: usize },
    SeamIn { pair: usize },
}

/// A validated bipartite line-complex graph.
#[derive(Clone, Debug)]
pub struct RotationGraph {
    map: CombMap,
    kinds: Vec<VertexKind>,
    ends: Vec<EndDescriptor>,
    periodic: Option<PeriodicSeam>,
    meta: Meta,
    loose_roles: BTreeMap<DartId, LooseRole>,
}

impl RotationGraph {
    pub fn new(
        map: CombMap,
        kinds: Vec<VertexKind>,
        ends: Vec<EndDescriptor>,
        periodic: Option<PeriodicSeam>,
        meta: Meta,
    ) -> Result<RotationGraph, GraphError> {
        assert_eq!(kinds.len(), map.vertex_count());
        for d in map.darts() {
            if let Some(t) = map.twin(d) {
                let ku = kinds[map.vertex_of(d).idx()];
                let kv = kinds[map.vertex_of(t).idx()];
                if ku == kv {
                    return Err(GraphError::NotBipartite(ku));
                }
            }
        }
        if !map.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let mut loose_roles: BTreeMap<DartId, LooseRole> = BTreeMap::new();
        for (i, end) in ends.iter().enumerate() {
            if end.rho1 < 1 || end.rho2 < 1 {
                return Err(GraphError::BadEnd(i, "bundle widths must be positive".into()));
            }
            // The attach bundle is rho1 consecutive loose darts, counterclockwise
            // from `attach`, all at the same vertex.
            let mut d = end.attach;
            if d.idx() >= map.dart_count() {
                return Err(GraphError::BadEnd(i, format!("unknown dart {d:?}")));
            }
            let v = map.vertex_of(d);
            if kinds[v.idx()] == end.first_kind {
                return Err(GraphError::BadEnd(i, "end attaches to a vertex of its own first kind".into()));
            }
            for slot in 0..end.rho1 {
                if map.vertex_of(d) != v {
                    return Err(GraphError::BadEnd(i, "attach bundle leaves its vertex".into()));
                }
                if !map.is_loose(d) {
                    return Err(GraphError::BadEnd(i, format!("dart {d:?} in attach bundle has a twin")));
                }
                if loose_roles.insert(d, LooseRole::End { end: i, slot }).is_some() {
                    return Err(GraphError::BadEnd(i, format!("dart {d:?} claimed twice")));
                }
                d = map.rot_next(d);
            }
        }
        if let Some(seam) = &periodic {
            if seam.outgoing.len() != seam.incoming.len() || seam.outgoing.is_empty() {
                return Err(GraphError::BadSeam("outgoing/incoming lengths differ or are empty".into()));
            }
            for (p, (&o, &i)) in seam.outgoing.iter().zip(&seam.incoming).enumerate() {
                for (d, role) in [(o, LooseRole::SeamOut { pair: p }), (i, LooseRole::SeamIn { pair: p })] {
                    if d.idx() >= map.dart_count() || !map.is_loose(d) {
                        return Err(GraphError::BadSeam(format!("dart {d:?} is missing or has a twin")));
                    }
                    if loose_roles.insert(d, role).is_some() {
                        return Err(GraphError::BadSeam(format!("dart {d:?} claimed twice")));
                    }
                }
                // Seam gluing must stay bipartite.
                let ko = kinds[map.vertex_of(o).idx()];
                let ki = kinds[map.vertex_of(i).idx()];
                if ko == ki {
                    return Err(GraphError::NotBipartite(ko));
                }
            }
        }
        for d in map.darts() {
            if map.is_loose(d) && !loose_roles.contains_key(&d) {
                return Err(GraphError::UnclaimedLooseDart(d));
            }
        }
        let g = RotationGraph { map, kinds, ends, periodic, meta, loose_roles };
        if g.is_finite() {
            let chi = g.map.euler_characteristic();
            if chi != 2 {
                return Err(GraphError::NotSpherical(chi));
            }
        }
        Ok(g)
    }

    pub fn map(&self) -> &CombMap {
        &self.map
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.kinds[v.idx()]
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn ends(&self) -> &[EndDescriptor] {
        &self.ends
    }

    pub fn periodic(&self) -> Option<&PeriodicSeam> {
        self.periodic.as_ref()
    }

    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut Meta {
        &mut self.meta
    }

    /// Finite graphs have no ends and no periodic seam.
    pub fn is_finite(&self) -> bool {
        self.ends.is_empty() && self.periodic.is_none()
    }

    pub fn loose_role(&self, d: DartId) -> Option<LooseRole> {
        self.loose_roles.get(&d).copied()
    }

    /// Valence including loose (end or seam) darts.
    pub fn valence(&self, v: VertexId) -> Result<usize, GraphError> {
        if v.idx() >= self.map.vertex_count() {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.map.valence(v))
    }

    pub fn vertices_of_kind(&self, k: VertexKind) -> Vec<VertexId> {
        self.map.vertices().filter(|&v| self.kind(v) == k).collect()
    }

    /// Distinct neighbor vertices of `v` through real edges.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .map
            .rotation(v)
            .iter()
            .filter_map(|&d| self.map.head(d))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Faces of the graph, classified. Digon families interior to declared
    /// ends are summarized per end rather than enumerated.
    pub fn faces(&self) -> Faces {
        let mut bounded = Vec::new();
        let mut unbounded = Vec::new();
        let mut seam_cut = Vec::new();
        for walk in self.map.trace_faces() {
            match walk {
                FaceWalk::Closed(darts) => bounded.push(BoundedFace { darts }),
                FaceWalk::Fragment { enter, darts } => {
                    let exit = *darts.last().unwrap();
                    let enter_role = self.loose_roles[&enter];
                    let exit_role = self.loose_roles[&exit];
                    match (enter_role, exit_role) {
                        (LooseRole::End { end: e1, slot: s1 }, LooseRole::End { end: e2, slot: s2 })
                            if e1 == e2 && s2 == s1 + 1 && darts.len() == 1 =>
                        {
                            // Corner between consecutive darts of one attach
                            // bundle: part of that end's digon family.
                            continue;
                        }
                        (LooseRole::End { end: e1, .. }, LooseRole::End { end: e2, .. }) => {
                            unbounded.push(UnboundedFace { darts, flanks: (e1, e2) });
                        }
                        _ => seam_cut.push(SeamFace { darts }),
                    }
                }
            }
        }
        let end_digons = self
            .ends
            .iter()
            .enumerate()
            .map(|(i, e)| EndDigonFamily {
                end: i,
                per_period: (e.rho1 - 1) + (e.rho2 - 1),
            })
            .collect();
        Faces { bounded, unbounded, seam_cut, end_digons }
    }

    /// Number of faces that are not digons: bounded non-digons plus every
    /// unbounded face. `None` when the graph is periodic with at least one
    /// such face per motif (the count is then infinite).
    pub fn non_digon_face_count(&self) -> Option<usize> {
        let faces = self.faces();
        let core = faces.bounded.iter().filter(|f| f.darts.len() != 2).count()
            + faces.unbounded.len();
        if self.periodic.is_some() {
            let per_motif = core + faces.seam_cut.len();
            if per_motif > 0 {
                return None;
            }
        }
        Some(core)
    }

    /// Unrolls a periodic graph into `copies` glued copies of the motif.
    /// The outermost seam darts stay loose (marked as seam cut). Also returns
    /// the dart translation table: `darts[copy][motif dart] = unrolled dart`.
    pub fn unroll(&self, copies: usize) -> (RotationGraph, Vec<Vec<DartId>>) {
        let seam = self.periodic.clone().expect("unroll requires a periodic graph");
        assert!(copies >= 1);
        let nd = self.map.dart_count();
        let nv = self.map.vertex_count();
        let translate = |c: usize, d: DartId| DartId((c * nd) as u32 + d.0);
        let mut rotations = Vec::with_capacity(nv * copies);
        let mut kinds = Vec::with_capacity(nv * copies);
        let mut twins: Vec<(DartId, DartId)> = Vec::new();
        let mut ends = Vec::new();
        for c in 0..copies {
            for v in self.map.vertices() {
                rotations.push(
                    self.map
                        .rotation(v)
                        .iter()
                        .map(|&d| translate(c, d))
                        .collect::<Vec<_>>(),
                );
                kinds.push(self.kind(v));
            }
            for d in self.map.darts() {
                if let Some(t) = self.map.twin(d) {
                    if d < t {
                        twins.push((translate(c, d), translate(c, t)));
                    }
                }
            }
            for e in &self.ends {
                ends.push(EndDescriptor { attach: translate(c, e.attach), ..e.clone() });
            }
            if c + 1 < copies {
                for (&o, &i) in seam.outgoing.iter().zip(&seam.incoming) {
                    twins.push((translate(c, o), translate(c + 1, i)));
                }
            }
        }
        // Outermost seam darts remain loose; declare them through a synthetic
        // seam so validation accepts them.
        let outer = PeriodicSeam {
            outgoing: seam.outgoing.iter().map(|&o| translate(copies - 1, o)).collect(),
            incoming: seam.incoming.iter().map(|&i| translate(0, i)).collect(),
        };
        let map = CombMap::new(rotations, &twins, nd * copies).expect("unroll produced a bad map");
        let g = RotationGraph::new(map, kinds, ends, Some(outer), self.meta.clone())
            .expect("unroll produced an invalid graph");
        let table = (0..copies)
            .map(|c| self.map.darts().map(|d| translate(c, d)).collect())
            .collect();
        (g, table)
    }

    /// Canonical form for isomorphism tests; folds in vertex kinds, loose
    /// roles and end shapes, and optionally per-dart labels.
    pub fn canonical_form(&self, labels: Option<&[u32]>) -> Vec<u64> {
        let tag = |d: DartId| -> u64 {
            let kind = match self.kind(self.map.vertex_of(d)) {
                VertexKind::Circle => 1u64,
                VertexKind::Cross => 2u64,
            };
            let role = match self.loose_roles.get(&d) {
                None => 0u64,
                Some(LooseRole::End { end, .. }) => {
                    let e = &self.ends[*end];
                    let fk = if e.first_kind == VertexKind::Circle { 1 } else { 2 };
                    3 + ((e.rho1 as u64) << 2 | (e.rho2 as u64) << 18 | fk << 34)
                }
                Some(LooseRole::SeamOut { pair }) => 1_000_000 + *pair as u64,
                Some(LooseRole::SeamIn { pair }) => 2_000_000 + *pair as u64,
            };
            let lab = labels.map_or(0u64, |l| 1 + l[d.idx()] as u64);
            kind | role << 8 | lab << 48
        };
        self.map.canonical_form(&tag)
    }

    pub fn is_isomorphic(&self, other: &RotationGraph) -> bool {
        self.map.dart_count() == other.map.dart_count()
            && self.canonical_form(None) == other.canonical_form(None)
    }

    /// Rebuilds the graph after the underlying map was edited, revalidating
    /// every invariant.
    pub fn rebuild(
        map: CombMap,
        kinds: Vec<VertexKind>,
        ends: Vec<EndDescriptor>,
        periodic: Option<PeriodicSeam>,
        meta: Meta,
    ) -> Result<RotationGraph, GraphError> {
        RotationGraph::new(map, kinds, ends, periodic, meta)
    }

    /// Deconstructs into parts for editing.
    pub fn into_parts(self) -> (CombMap, Vec<VertexKind>, Vec<EndDescriptor>, Option<PeriodicSeam>, Meta) {
        (self.map, self.kinds, self.ends, self.periodic, self.meta)
    }
}

/// A bounded face with its boundary walk.
#[derive(Clone, Debug)]
pub struct BoundedFace {
    pub darts: Vec<DartId>,
}

/// An unbounded face: its finite boundary fragment in the core plus the two
/// ends it runs between (which may coincide).
#[derive(Clone, Debug)]
pub struct UnboundedFace {
    pub darts: Vec<DartId>,
    pub flanks: (usize, usize),
}

/// A face fragment cut by the periodic seam (part of a face that continues
/// into neighboring motif copies).
#[derive(Clone, Debug)]
pub struct SeamFace {
    pub darts: Vec<DartId>,
}

/// Digons interior to a declared end, summarized.
#[derive(Clone, Copy, Debug)]
pub struct EndDigonFamily {
    pub end: usize,
    pub per_period: u32,
}

#[derive(Clone, Debug)]
pub struct Faces {
    pub bounded: Vec<BoundedFace>,
    pub unbounded: Vec<UnboundedFace>,
    pub seam_cut: Vec<SeamFace>,
    pub end_digons: Vec<EndDigonFamily>,
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// Serialized graph description (the on-disk JSON schema).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub twins: Vec<(DartId, DartId)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ends: Vec<EndDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicSeam>,
    #[serde(default, skip_serializing_if = "meta_is_empty")]
    pub meta: Meta,
}

fn meta_is_empty(m: &Meta) -> bool {
    m == &Meta::default()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: u32,
    pub kind: VertexKind,
    pub rotation: Vec<DartId>,
}

/// Builds and validates a graph from its file description.
pub fn build_graph(spec: &GraphSpec) -> Result<RotationGraph, GraphError> {
    // Vertex ids must be dense and in order; rotations carry dense dart ids.
    let mut rotations: Vec<Vec<DartId>> = Vec::with_capacity(spec.vertices.len());
    let mut kinds = Vec::with_capacity(spec.vertices.len());
    let mut dart_count = 0usize;
    for (i, v) in spec.vertices.iter().enumerate() {
        if v.id as usize != i {
            return Err(GraphError::Map(MapError::UnknownVertex(VertexId(v.id))));
        }
        for &d in &v.rotation {
            dart_count = dart_count.max(d.idx() + 1);
        }
        rotations.push(v.rotation.clone());
        kinds.push(v.kind);
    }
    let map = CombMap::new(rotations, &spec.twins, dart_count)?;
    RotationGraph::new(map, kinds, spec.ends.clone(), spec.periodic.clone(), spec.meta.clone())
}

/// Serializes a graph back into its file description.
pub fn to_spec(g: &RotationGraph) -> GraphSpec {
    let map = g.map();
    let vertices = map
        .vertices()
        .map(|v| VertexSpec {
            id: v.0,
            kind: g.kind(v),
            rotation: map.rotation(v).to_vec(),
        })
        .collect();
    let mut twins = Vec::new();
    for d in map.darts() {
        if let Some(t) = map.twin(d) {
            if d < t {
                twins.push((d, t));
            }
        }
    }
    GraphSpec {
        vertices,
        twins,
        ends: g.ends().to_vec(),
        periodic: g.periodic().cloned(),
        meta: g.meta().clone(),
    }
}

pub fn from_json(json: &str) -> Result<RotationGraph, String> {
    let spec: GraphSpec = serde_json::from_str(json).map_err(|e| e.to_string())?;
    build_graph(&spec).map_err(|e| e.to_string())
}

pub fn to_json(g: &RotationGraph) -> String {
    serde_json::to_string_pretty(&to_spec(g)).expect("graph serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn single_edge() -> RotationGraph {
        let spec = GraphSpec {
            vertices: vec![
                VertexSpec { id: 0, kind: VertexKind::Circle, rotation: vec![DartId(0)] },
                VertexSpec { id: 1, kind: VertexKind::Cross, rotation: vec![DartId(1)] },
            ],
            twins: vec![(DartId(0), DartId(1))],
            ends: vec![],
            periodic: None,
            meta: Meta::default(),
        };
        build_graph(&spec).unwrap()
    }

    #[test]
    fn single_edge_has_one_face() {
        let g = single_edge();
        let faces = g.faces();
        assert_eq!(faces.bounded.len(), 1);
        assert_eq!(faces.bounded[0].darts.len(), 2);
        assert_eq!(g.map().euler_characteristic(), 2);
    }

    #[test]
    fn circle_circle_edge_is_rejected() {
        let spec = GraphSpec {
            vertices: vec![
                VertexSpec { id: 0, kind: VertexKind::Circle, rotation: vec![DartId(0)] },
                VertexSpec { id: 1, kind: VertexKind::Circle, rotation: vec![DartId(1)] },
            ],
            twins: vec![(DartId(0), DartId(1))],
            ends: vec![],
            periodic: None,
            meta: Meta::default(),
        };
        assert!(matches!(build_graph(&spec), Err(GraphError::NotBipartite(_))));
    }

    #[test]
    fn json_roundtrip_is_isomorphic() {
        let g = single_edge();
        let back = from_json(&to_json(&g)).unwrap();
        assert!(g.is_isomorphic(&back));
    }
}
