//! Rotation-system combinatorial maps.
//!
//! A [`CombMap`] stores darts (half-edges) grouped into cyclic rotations, one
//! per vertex, listed counterclockwise, together with the twin involution.
//! Faces are the orbits of `next-after-twin`, so the embedding is entirely
//! combinatorial. Darts without a twin are *loose*: they mark spots where a
//! semi-infinite structure (a logarithmic end or a periodic seam) is attached
//! by a layer above this one.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a dart (half-edge). Dense, assigned in input order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DartId(pub u32);

/// Identifier of a vertex. Dense, assigned in input order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl fmt::Debug for DartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl DartId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl VertexId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum MapError {
    #[error("dart {0:?} appears in no rotation or in more than one rotation slot")]
    BadRotation(DartId),
    #[error("twin pairing is not a fixed-point-free involution at dart {0:?}")]
    BadTwinPairing(DartId),
    #[error("loop edge at vertex {0:?}: a dart and its twin share a vertex")]
    LoopEdge(VertexId),
    #[error("graph is not connected")]
    Disconnected,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(VertexId),
    #[error("unknown dart {0:?}")]
    UnknownDart(DartId),
}

#[derive(Clone, Debug)]
struct DartInfo {
    vertex: VertexId,
    twin: Option<DartId>,
    /// Position of the dart inside its vertex rotation.
    pos: u32,
}

/// A combinatorial map: cyclic dart rotations (counterclockwise) plus the
/// twin involution. Loose darts have no twin.
#[derive(Clone, Debug)]
pub struct CombMap {
    rotations: Vec<Vec<DartId>>,
    darts: Vec<DartInfo>,
}

impl CombMap {
    /// Builds a map from per-vertex rotations and twin pairs. Every dart id
    /// in `0..dart_count` must appear in exactly one rotation slot; twin
    /// pairs must be disjoint; loops are rejected.
    pub fn new(
        rotations: Vec<Vec<DartId>>,
        twins: &[(DartId, DartId)],
        dart_count: usize,
    ) -> Result<CombMap, MapError> {
        let mut darts: Vec<Option<DartInfo>> = vec![None; dart_count];
        for (v, rot) in rotations.iter().enumerate() {
            for (pos, &d) in rot.iter().enumerate() {
                if d.idx() >= dart_count {
                    return Err(MapError::UnknownDart(d));
                }
                if darts[d.idx()].is_some() {
                    return Err(MapError::BadRotation(d));
                }
                darts[d.idx()] = Some(DartInfo {
                    vertex: VertexId(v as u32),
                    twin: None,
                    pos: pos as u32,
                });
            }
        }
        let mut darts: Vec<DartInfo> = darts
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.ok_or(MapError::BadRotation(DartId(i as u32))))
            .collect::<Result<_, _>>()?;
        for &(a, b) in twins {
            if a.idx() >= dart_count || b.idx() >= dart_count {
                return Err(MapError::UnknownDart(if a.idx() >= dart_count { a } else { b }));
            }
            if a == b || darts[a.idx()].twin.is_some() || darts[b.idx()].twin.is_some() {
                return Err(MapError::BadTwinPairing(a));
            }
            if darts[a.idx()].vertex == darts[b.idx()].vertex {
                return Err(MapError::LoopEdge(darts[a.idx()].vertex));
            }
            darts[a.idx()].twin = Some(b);
            darts[b.idx()].twin = Some(a);
        }
        Ok(CombMap { rotations, darts })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    /// Number of edges (twin pairs).
    pub fn edge_count(&self) -> usize {
        self.darts.iter().filter(|d| d.twin.is_some()).count() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.rotations.len() as u32).map(VertexId)
    }

    pub fn darts(&self) -> impl Iterator<Item = DartId> {
        (0..self.darts.len() as u32).map(DartId)
    }

    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        &self.rotations[v.idx()]
    }

    pub fn vertex_of(&self, d: DartId) -> VertexId {
        self.darts[d.idx()].vertex
    }

    pub fn twin(&self, d: DartId) -> Option<DartId> {
        self.darts[d.idx()].twin
    }

    pub fn is_loose(&self, d: DartId) -> bool {
        self.darts[d.idx()].twin.is_none()
    }

    pub fn loose_darts(&self) -> Vec<DartId> {
        self.darts().filter(|&d| self.is_loose(d)).collect()
    }

    /// Head vertex of the edge holding `d` (the twin's vertex).
    pub fn head(&self, d: DartId) -> Option<VertexId> {
        self.twin(d).map(|t| self.vertex_of(t))
    }

    /// Valence of a vertex, loose darts included.
    pub fn valence(&self, v: VertexId) -> usize {
        self.rotations[v.idx()].len()
    }

    /// Next dart counterclockwise around the vertex of `d`.
    pub fn rot_next(&self, d: DartId) -> DartId {
        let info = &self.darts[d.idx()];
        let rot = &self.rotations[info.vertex.idx()];
        rot[(info.pos as usize + 1) % rot.len()]
    }

    /// Previous dart counterclockwise (= next clockwise).
    pub fn rot_prev(&self, d: DartId) -> DartId {
        let info = &self.darts[d.idx()];
        let rot = &self.rotations[info.vertex.idx()];
        rot[(info.pos as usize + rot.len() - 1) % rot.len()]
    }

    /// Next dart along the face to the left of `d`. `None` when `d` is loose,
    /// i.e. the walk escapes into an attached end.
    pub fn face_next(&self, d: DartId) -> Option<DartId> {
        self.twin(d).map(|t| self.rot_next(t))
    }

    /// True when the map is connected (on vertices, through edges). Vertexless
    /// maps count as connected.
    pub fn is_connected(&self) -> bool {
        if self.rotations.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(VertexId(0));
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &d in self.rotation(v) {
                if let Some(w) = self.head(d) {
                    if !seen[w.idx()] {
                        seen[w.idx()] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        count == self.vertex_count()
    }

    /// Traces all faces. Closed walks become [`FaceWalk::Closed`]; walks that
    /// run into loose darts are split into fragments, one per loose dart: the
    /// fragment begins right after a loose dart in rotation order and ends at
    /// the next loose dart it reaches (inclusive).
    pub fn trace_faces(&self) -> Vec<FaceWalk> {
        let mut out = Vec::new();
        let mut visited = vec![false; self.dart_count()];
        // Fragments first, seeded deterministically from each loose dart.
        let mut loose: Vec<DartId> = self.loose_darts();
        loose.sort();
        for &l in &loose {
            let start = self.rot_next(l);
            let mut walk = vec![start];
            visited[start.idx()] = true;
            let mut cur = start;
            while let Some(next) = self.face_next(cur) {
                walk.push(next);
                visited[next.idx()] = true;
                cur = next;
            }
            debug_assert!(self.is_loose(*walk.last().unwrap()));
            out.push(FaceWalk::Fragment { enter: l, darts: walk });
        }
        // Remaining orbits are closed faces.
        for d in self.darts() {
            if visited[d.idx()] || self.is_loose(d) {
                continue;
            }
            let mut walk = vec![d];
            visited[d.idx()] = true;
            let mut cur = d;
            loop {
                let next = self.face_next(cur).expect("closed walk left the core");
                if next == d {
                    break;
                }
                walk.push(next);
                visited[next.idx()] = true;
                cur = next;
            }
            out.push(FaceWalk::Closed(walk));
        }
        out.sort_by_key(|w| w.min_dart());
        out
    }

    /// Euler characteristic `V - E + F` using closed faces only. Equals 2
    /// exactly for a connected map on the sphere with no loose darts.
    pub fn euler_characteristic(&self) -> i64 {
        let f = self
            .trace_faces()
            .iter()
            .filter(|w| matches!(w, FaceWalk::Closed(_)))
            .count() as i64;
        self.vertex_count() as i64 - self.edge_count() as i64 + f
    }

    /// Inserts `count` parallel copies of the edge holding `d`, nested so the
    /// new twins do not cross: copies sit after `d` in its rotation and in
    /// mirrored order before `twin(d)`. Returns the new darts on `d`'s side.
    pub fn insert_parallel(&mut self, d: DartId, count: usize) -> Vec<DartId> {
        let t = self.twin(d).expect("cannot parallel a loose dart");
        let u = self.vertex_of(d);
        let v = self.vertex_of(t);
        let base = self.darts.len() as u32;
        let mut new_u = Vec::new();
        let mut new_v = Vec::new();
        for i in 0..count {
            let du = DartId(base + 2 * i as u32);
            let dv = DartId(base + 2 * i as u32 + 1);
            self.darts.push(DartInfo { vertex: u, twin: Some(dv), pos: 0 });
            self.darts.push(DartInfo { vertex: v, twin: Some(du), pos: 0 });
            new_u.push(du);
            new_v.push(dv);
        }
        let pos_u = self.darts[d.idx()].pos as usize;
        let rot_u = &mut self.rotations[u.idx()];
        for (i, &du) in new_u.iter().enumerate() {
            rot_u.insert(pos_u + 1 + i, du);
        }
        let pos_t = self.darts[t.idx()].pos as usize;
        let rot_v = &mut self.rotations[v.idx()];
        for &dv in new_v.iter() {
            rot_v.insert(pos_t, dv);
        }
        self.refresh_positions(u);
        if v != u {
            self.refresh_positions(v);
        }
        new_u
    }

    /// Splits the edge holding `d` by a new valence-2 vertex; `d..twin` turns
    /// into `d -> mid -> twin`. Returns the new vertex.
    pub fn split_edge(&mut self, d: DartId) -> VertexId {
        let t = self.twin(d).expect("cannot split a loose dart");
        let mid = VertexId(self.rotations.len() as u32);
        let a = DartId(self.darts.len() as u32);
        let b = DartId(self.darts.len() as u32 + 1);
        // a pairs with d, b pairs with t; around mid the rotation is [a, b].
        self.darts.push(DartInfo { vertex: mid, twin: Some(d), pos: 0 });
        self.darts.push(DartInfo { vertex: mid, twin: Some(t), pos: 1 });
        self.darts[d.idx()].twin = Some(a);
        self.darts[t.idx()].twin = Some(b);
        self.rotations.push(vec![a, b]);
        mid
    }

    /// Removes a valence-2 vertex, merging its two edges into one. Fails when
    /// the merge would create a loop. The two darts of `v` disappear and ids
    /// are compacted; the returned table maps old dart ids to new ones.
    pub fn smooth_vertex(&mut self, v: VertexId) -> Result<Vec<Option<DartId>>, MapError> {
        if self.valence(v) != 2 {
            return Err(MapError::UnknownVertex(v));
        }
        let a = self.rotation(v)[0];
        let b = self.rotation(v)[1];
        let ta = self.twin(a).ok_or(MapError::UnknownDart(a))?;
        let tb = self.twin(b).ok_or(MapError::UnknownDart(b))?;
        if self.vertex_of(ta) == self.vertex_of(tb) {
            return Err(MapError::LoopEdge(self.vertex_of(ta)));
        }
        self.darts[ta.idx()].twin = Some(tb);
        self.darts[tb.idx()].twin = Some(ta);
        Ok(self.remove_vertex_and_darts(v, &[a, b]))
    }

    /// Deletes the listed darts (and their rotation slots) plus the vertex if
    /// given; compacts ids. Used by the editing layers above.
    fn remove_vertex_and_darts(&mut self, v: VertexId, gone: &[DartId]) -> Vec<Option<DartId>> {
        let mut dart_map: Vec<Option<DartId>> = vec![None; self.darts.len()];
        let mut next = 0u32;
        for d in 0..self.darts.len() {
            if gone.contains(&DartId(d as u32)) {
                continue;
            }
            dart_map[d] = Some(DartId(next));
            next += 1;
        }
        let mut new_rot: Vec<Vec<DartId>> = Vec::new();
        for (vi, rot) in self.rotations.iter().enumerate() {
            if vi == v.idx() {
                continue;
            }
            new_rot.push(rot.iter().filter_map(|d| dart_map[d.idx()]).collect());
        }
        let mut new_darts: Vec<DartInfo> = Vec::new();
        for (di, info) in self.darts.iter().enumerate() {
            let Some(_) = dart_map[di] else { continue };
            let nv = if info.vertex.idx() > v.idx() {
                VertexId(info.vertex.0 - 1)
            } else {
                info.vertex
            };
            new_darts.push(DartInfo {
                vertex: nv,
                twin: info.twin.and_then(|t| dart_map[t.idx()]),
                pos: 0,
            });
        }
        self.rotations = new_rot;
        self.darts = new_darts;
        for v in 0..self.rotations.len() {
            self.refresh_positions(VertexId(v as u32));
        }
        dart_map
    }

    fn refresh_positions(&mut self, v: VertexId) {
        let rot = self.rotations[v.idx()].clone();
        for (pos, d) in rot.into_iter().enumerate() {
            self.darts[d.idx()].pos = pos as u32;
        }
    }

    /// Canonical dart relabeling: a breadth-first encoding of (rotation,
    /// twin) minimized over all starting darts. Two connected maps are
    /// isomorphic (orientation-preserving) iff their encodings match.
    /// `tag` supplies an extra per-dart symbol folded into the encoding
    /// (vertex kinds, labels, end data).
    pub fn canonical_form(&self, tag: &dyn Fn(DartId) -> u64) -> Vec<u64> {
        let mut best: Option<Vec<u64>> = None;
        for start in self.darts() {
            let enc = self.encode_from(start, tag);
            if best.as_ref().map_or(true, |b| enc < *b) {
                best = Some(enc);
            }
        }
        best.unwrap_or_default()
    }

    fn encode_from(&self, start: DartId, tag: &dyn Fn(DartId) -> u64) -> Vec<u64> {
        const LOOSE: u64 = u64::MAX;
        let mut index = vec![u32::MAX; self.dart_count()];
        let mut order = Vec::with_capacity(self.dart_count());
        let assign = |d: DartId, index: &mut Vec<u32>, order: &mut Vec<DartId>| {
            if index[d.idx()] == u32::MAX {
                index[d.idx()] = order.len() as u32;
                order.push(d);
            }
        };
        assign(start, &mut index, &mut order);
        let mut i = 0;
        let mut enc = Vec::new();
        while i < order.len() {
            let d = order[i];
            let n = self.rot_next(d);
            assign(n, &mut index, &mut order);
            enc.push(index[n.idx()] as u64);
            match self.twin(d) {
                Some(t) => {
                    assign(t, &mut index, &mut order);
                    enc.push(index[t.idx()] as u64);
                }
                None => enc.push(LOOSE),
            }
            enc.push(tag(d));
            i += 1;
        }
        enc
    }
}

/// One traced face walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceWalk {
    /// A closed boundary walk; the face is a bounded cell.
    Closed(Vec<DartId>),
    /// A walk that runs between two loose darts: it starts right after
    /// `enter` in rotation order and its last dart is itself loose. The face
    /// continues into whatever hangs off those loose darts.
    Fragment { enter: DartId, darts: Vec<DartId> },
}

impl FaceWalk {
    pub fn darts(&self) -> &[DartId] {
        match self {
            FaceWalk::Closed(d) => d,
            FaceWalk::Fragment { darts, .. } => darts,
        }
    }

    pub fn side_count(&self) -> usize {
        self.darts().len()
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, FaceWalk::Closed(_))
    }

    fn min_dart(&self) -> DartId {
        match self {
            FaceWalk::Closed(d) => *d.iter().min().unwrap(),
            FaceWalk::Fragment { enter, .. } => *enter,
        }
    }
}
