//! Planar duality between tessellation-side graphs (t-graphs, A-maps) and
//! line complexes, plus the two homogenization moves: edge subdivision and
//! valence-2 forgetting.
//!
//! Both sides share the same dart set: the dual swaps the roles of vertex
//! rotations and face walks while keeping the twin involution, so applying
//! it twice restores the original map exactly. Blue tiles become circle
//! vertices and grey tiles cross vertices.

use serde::{Deserialize, Serialize};

use crate::graph::{GraphError, Meta, RotationGraph, VertexKind};
use crate::labelling::Labelling;
use crate::map::{CombMap, DartId, FaceWalk, MapError, VertexId};

/// Tile colors of a tessellation-side graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TileColor {
    Blue,
    Grey,
}

impl TileColor {
    pub fn other(self) -> TileColor {
        match self {
            TileColor::Blue => TileColor::Grey,
            TileColor::Grey => TileColor::Blue,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum DualityError {
    #[error("face adjacency is not two-colorable")]
    NotTwoColorable,
    #[error("only finite graphs can be dualized")]
    UnsupportedInfinite,
    #[error("vertex labelling is inconsistent: {0}")]
    LabellingInconsistent(String),
    #[error("A-map is not homogeneous: face sizes {0:?}")]
    NotHomogeneous(Vec<usize>),
    #[error("forgetting valence-2 vertex {0:?} would create a loop")]
    WouldLoop(VertexId),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A finite tessellation-side graph: a map whose faces carry a proper
/// two-coloring. Vertex labels (when present) live in `Z_q`.
#[derive(Clone, Debug)]
pub struct TGraph {
    pub map: CombMap,
    /// Color per face, indexed like [`TGraph::faces`].
    pub colors: Vec<TileColor>,
    pub vertex_labels: Option<(u32, Vec<u32>)>,
    pub meta: Meta,
}

impl TGraph {
    /// Faces in canonical order (sorted by smallest dart).
    pub fn faces(&self) -> Vec<Vec<DartId>> {
        self.map
            .trace_faces()
            .into_iter()
            .map(|w| match w {
                FaceWalk::Closed(d) => d,
                FaceWalk::Fragment { .. } => panic!("t-graph has loose darts"),
            })
            .collect()
    }

    /// Index of the face whose walk contains `d`.
    pub fn face_of(&self, faces: &[Vec<DartId>], d: DartId) -> usize {
        faces
            .iter()
            .position(|f| f.contains(&d))
            .expect("dart belongs to some face")
    }

    /// The tile color on the left of `d`.
    pub fn left_color(&self, faces: &[Vec<DartId>], d: DartId) -> TileColor {
        self.colors[self.face_of(faces, d)]
    }

    /// Darts pointing along the graph orientation (blue tile on the left).
    pub fn forward_darts(&self) -> Vec<DartId> {
        let faces = self.faces();
        self.map
            .darts()
            .filter(|&d| self.left_color(&faces, d) == TileColor::Blue)
            .collect()
    }

    pub fn blue_tile_count(&self) -> usize {
        self.colors.iter().filter(|c| **c == TileColor::Blue).count()
    }
}

/// Computes the proper two-coloring of the faces, seeding `blue_seed`
/// (a face index) as blue.
pub fn two_color_faces(map: &CombMap, blue_seed: usize) -> Result<Vec<TileColor>, DualityError> {
    let faces: Vec<Vec<DartId>> = map
        .trace_faces()
        .into_iter()
        .map(|w| match w {
            FaceWalk::Closed(d) => Ok(d),
            FaceWalk::Fragment { .. } => Err(DualityError::UnsupportedInfinite),
        })
        .collect::<Result<_, _>>()?;
    let mut face_of_dart = vec![usize::MAX; map.dart_count()];
    for (i, f) in faces.iter().enumerate() {
        for &d in f {
            face_of_dart[d.idx()] = i;
        }
    }
    let mut colors: Vec<Option<TileColor>> = vec![None; faces.len()];
    colors[blue_seed] = Some(TileColor::Blue);
    let mut queue = std::collections::VecDeque::from([blue_seed]);
    while let Some(f) = queue.pop_front() {
        let c = colors[f].unwrap();
        for &d in &faces[f] {
            let t = map.twin(d).expect("finite map");
            let g = face_of_dart[t.idx()];
            match colors[g] {
                None => {
                    colors[g] = Some(c.other());
                    queue.push_back(g);
                }
                Some(existing) if existing == c => return Err(DualityError::NotTwoColorable),
                Some(_) => {}
            }
        }
    }
    colors
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(DualityError::NotTwoColorable)
}

pub fn tgraph_new(
    map: CombMap,
    blue_seed: usize,
    vertex_labels: Option<(u32, Vec<u32>)>,
    meta: Meta,
) -> Result<TGraph, DualityError> {
    if !map.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let colors = two_color_faces(&map, blue_seed)?;
    Ok(TGraph { map, colors, vertex_labels, meta })
}

/// Back-reference tables tying a graph to its dual: both directions are by
/// construction index maps between faces and vertices.
#[derive(Clone, Debug)]
pub struct DualRefs {
    /// primal face index -> dual vertex id (identity by construction).
    pub face_to_vertex: Vec<VertexId>,
    /// primal vertex id -> dual face index.
    pub vertex_to_face: Vec<usize>,
}

/// The dual map: rotations become face walks, the twin involution stays.
fn dual_map(map: &CombMap) -> Result<(CombMap, Vec<Vec<DartId>>), DualityError> {
    let faces: Vec<Vec<DartId>> = map
        .trace_faces()
        .into_iter()
        .map(|w| match w {
            FaceWalk::Closed(d) => Ok(d),
            FaceWalk::Fragment { .. } => Err(DualityError::UnsupportedInfinite),
        })
        .collect::<Result<_, _>>()?;
    let mut twins = Vec::new();
    for d in map.darts() {
        if let Some(t) = map.twin(d) {
            if d < t {
                twins.push((d, t));
            }
        }
    }
    let dual = CombMap::new(faces.clone(), &twins, map.dart_count())?;
    Ok((dual, faces))
}

/// Tessellation graph to line complex: one circle vertex per blue tile, one
/// cross vertex per grey tile, one edge per primal edge.
pub fn dual(t: &TGraph) -> Result<(RotationGraph, DualRefs), DualityError> {
    let (dual, faces) = dual_map(&t.map)?;
    let kinds: Vec<VertexKind> = t
        .colors
        .iter()
        .map(|c| match c {
            TileColor::Blue => VertexKind::Circle,
            TileColor::Grey => VertexKind::Cross,
        })
        .collect();
    let g = RotationGraph::new(dual, kinds, vec![], None, t.meta.clone())?;
    let refs = back_refs(&g, &faces, &t.map);
    Ok((g, refs))
}

fn back_refs(dual: &RotationGraph, primal_faces: &[Vec<DartId>], primal: &CombMap) -> DualRefs {
    // Dual vertex i is primal face i verbatim. The dual face holding a
    // primal vertex's rotation is found through any of its darts.
    let face_to_vertex = (0..primal_faces.len() as u32).map(VertexId).collect();
    let dual_faces = dual.faces();
    let mut face_of_dart = std::collections::BTreeMap::new();
    for (i, f) in dual_faces.bounded.iter().enumerate() {
        for &d in &f.darts {
            face_of_dart.insert(d, i);
        }
    }
    let vertex_to_face = primal
        .vertices()
        .map(|v| face_of_dart[&primal.rotation(v)[0]])
        .collect();
    DualRefs { face_to_vertex, vertex_to_face }
}

/// Line complex to tessellation graph: the inverse of [`dual`] up to
/// isomorphism (and on the nose on the shared dart set). New vertices are
/// the old faces; new tiles are the old vertices, blue iff the old vertex
/// was a circle.
pub fn primal(s: &RotationGraph) -> Result<(TGraph, DualRefs), DualityError> {
    if !s.is_finite() {
        return Err(DualityError::UnsupportedInfinite);
    }
    let (dual, faces) = dual_map(s.map())?;
    let new_faces = dual.trace_faces();
    let mut colors = vec![TileColor::Blue; new_faces.len()];
    let mut vertex_to_face = vec![usize::MAX; s.map().vertex_count()];
    for (i, w) in new_faces.iter().enumerate() {
        // A face of the dual is a rotation orbit of the original map, so all
        // its darts share their original vertex.
        let old_vertex = s.map().vertex_of(w.darts()[0]);
        vertex_to_face[old_vertex.idx()] = i;
        colors[i] = match s.kind(old_vertex) {
            VertexKind::Circle => TileColor::Blue,
            VertexKind::Cross => TileColor::Grey,
        };
    }
    let t = TGraph { map: dual, colors, vertex_labels: None, meta: s.meta().clone() };
    let refs = DualRefs {
        face_to_vertex: (0..faces.len() as u32).map(VertexId).collect(),
        vertex_to_face,
    };
    Ok((t, refs))
}

/// Subdivides every edge according to the vertex labelling: an edge from
/// label `h` to label `j` along the orientation (blue on the left) with gap
/// `j - h = v + 1 >= 2 (mod q)` receives `v` new valence-2 vertices labelled
/// `h+1, ..., h+v`. The result is the homogeneous A-map of the labelling.
pub fn subdivide_edges(t: &TGraph) -> Result<TGraph, DualityError> {
    let Some((q, ref labels)) = t.vertex_labels else {
        return Err(DualityError::LabellingInconsistent("vertex labels required".into()));
    };
    let faces = t.faces();
    let mut map = t.map.clone();
    let mut labels = labels.clone();
    // Remember a blue anchor dart to re-seed the coloring afterwards.
    let blue_anchor = t
        .map
        .darts()
        .find(|&d| t.left_color(&faces, d) == TileColor::Blue)
        .expect("some dart borders a blue tile");
    // Forward darts carry the orientation.
    let forward: Vec<DartId> = t
        .map
        .darts()
        .filter(|&d| t.left_color(&faces, d) == TileColor::Blue)
        .collect();
    for d in forward {
        let tail = map.vertex_of(d);
        let head = map.vertex_of(map.twin(d).unwrap());
        let h = labels[tail.idx()];
        let j = labels[head.idx()];
        let gap = (j + q - h) % q;
        if gap == 0 {
            return Err(DualityError::LabellingInconsistent(format!(
                "edge {d:?} joins two vertices labelled {h}"
            )));
        }
        // Insert gap-1 vertices walking from the tail; after each split the
        // dart toward the head is the twin of the new vertex's second dart.
        let mut cur = d;
        for step in 1..gap {
            let mid = map.split_edge(cur);
            labels.push((h + step) % q);
            debug_assert_eq!(labels.len(), map.vertex_count());
            // Continue along the second dart of the new vertex.
            cur = map.rotation(mid)[1];
        }
    }
    let new_faces_list = map.trace_faces();
    let seed = new_faces_list
        .iter()
        .position(|w| w.darts().contains(&blue_anchor))
        .expect("anchor survived subdivision");
    let colors = two_color_faces(&map, seed)?;
    Ok(TGraph { map, colors, vertex_labels: Some((q, labels)), meta: t.meta.clone() })
}

/// Checks homogeneity (every tile a q-gon) and returns the common size.
pub fn homogeneous_size(t: &TGraph) -> Result<usize, DualityError> {
    let sizes: Vec<usize> = t.faces().iter().map(|f| f.len()).collect();
    if sizes.windows(2).all(|w| w[0] == w[1]) && !sizes.is_empty() {
        Ok(sizes[0])
    } else {
        Err(DualityError::NotHomogeneous(sizes))
    }
}

/// Removes every valence-2 vertex, merging its two edges; the inverse of
/// [`subdivide_edges`] up to the forgotten labels. A dart bordering a blue
/// tile at a surviving vertex is tracked through the id compaction so the
/// coloring carries over exactly.
pub fn forget_valence2(a: &TGraph) -> Result<TGraph, DualityError> {
    let faces = a.faces();
    let mut anchor = a
        .map
        .darts()
        .find(|&d| {
            a.map.valence(a.map.vertex_of(d)) != 2 && a.left_color(&faces, d) == TileColor::Blue
        })
        .ok_or_else(|| DualityError::LabellingInconsistent("no vertex of valence >= 3".into()))?;
    let mut map = a.map.clone();
    let mut labels = a.vertex_labels.clone();
    loop {
        let Some(v) = map.vertices().find(|&v| map.valence(v) == 2) else { break };
        let remap = map.smooth_vertex(v).map_err(|_| DualityError::WouldLoop(v))?;
        anchor = remap[anchor.idx()]
            .expect("anchor dart sits at a surviving vertex");
        if let Some((_, ref mut l)) = labels {
            l.remove(v.idx());
        }
    }
    let new_faces = map.trace_faces();
    let seed = new_faces
        .iter()
        .position(|w| w.darts().contains(&anchor))
        .expect("anchor dart lies on some face");
    let colors = two_color_faces(&map, seed)?;
    Ok(TGraph { map, colors, vertex_labels: labels, meta: a.meta.clone() })
}

/// Transports an A-map vertex labelling to edge labels of the dual line
/// complex: an edge whose endpoints are labelled `{a, a+1}` receives label
/// `a`. Requires a homogeneous labelled A-map.
pub fn transport_labels_to_dual(a: &TGraph, dual_graph: &RotationGraph) -> Result<Labelling, DualityError> {
    let Some((q, ref labels)) = a.vertex_labels else {
        return Err(DualityError::LabellingInconsistent("vertex labels required".into()));
    };
    let mut out = vec![0u32; a.map.dart_count()];
    for d in a.map.darts() {
        let u = labels[a.map.vertex_of(d).idx()];
        let w = labels[a.map.vertex_of(a.map.twin(d).expect("finite")).idx()];
        let gap = (w + q - u) % q;
        let a_label = if gap == 1 {
            u
        } else if (u + q - w) % q == 1 {
            w
        } else {
            return Err(DualityError::LabellingInconsistent(format!(
                "edge {d:?} joins labels {u} and {w}, not consecutive"
            )));
        };
        out[d.idx()] = a_label;
    }
    let _ = dual_graph;
    Ok(Labelling { q, labels: out, shift: 0, cyclic_order_name: None })
}

/// Transports line-complex edge labels back to vertex labels on the primal
/// tessellation graph: each tile (dual vertex) takes its face label.
pub fn transport_labels_to_primal(
    s: &RotationGraph,
    l: &Labelling,
    t: &TGraph,
) -> Result<(u32, Vec<u32>), DualityError> {
    // Vertices of the primal t are the faces of s, in face order.
    let map = crate::labelling::face_label_map(s, l)
        .map_err(|e| DualityError::LabellingInconsistent(e.to_string()))?;
    let faces = s.faces();
    let mut ordered: Vec<(DartId, u32)> = faces
        .bounded
        .iter()
        .map(|f| {
            let m = *f.darts.iter().min().unwrap();
            (m, map[&m])
        })
        .collect();
    ordered.sort();
    if ordered.len() != t.map.vertex_count() {
        return Err(DualityError::LabellingInconsistent(
            "face/vertex count mismatch in label transport".into(),
        ));
    }
    Ok((l.q, ordered.into_iter().map(|(_, x)| x).collect()))
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TGraphSpec {
    pub vertices: Vec<TVertexSpec>,
    pub twins: Vec<(DartId, DartId)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub face_colors: Vec<(usize, TileColor)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_labels: Option<Vec<(u32, u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default)]
    pub meta: Meta,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TVertexSpec {
    pub id: u32,
    pub rotation: Vec<DartId>,
}

pub fn tgraph_from_spec(spec: &TGraphSpec, blue_face_override: Option<usize>) -> Result<TGraph, DualityError> {
    let mut rotations = Vec::new();
    let mut dart_count = 0;
    for (i, v) in spec.vertices.iter().enumerate() {
        if v.id as usize != i {
            return Err(MapError::UnknownVertex(VertexId(v.id)).into());
        }
        for &d in &v.rotation {
            dart_count = dart_count.max(d.idx() + 1);
        }
        rotations.push(v.rotation.clone());
    }
    let map = CombMap::new(rotations, &spec.twins, dart_count)?;
    let seed = blue_face_override
        .or_else(|| {
            spec.face_colors
                .iter()
                .find(|(_, c)| *c == TileColor::Blue)
                .map(|(i, _)| *i)
        })
        .unwrap_or(0);
    let labels = match (&spec.vertex_labels, spec.q) {
        (Some(pairs), Some(q)) => {
            let mut l = vec![0u32; spec.vertices.len()];
            for &(v, x) in pairs {
                l[v as usize] = x % q;
            }
            Some((q, l))
        }
        _ => None,
    };
    let t = tgraph_new(map, seed, labels, spec.meta.clone())?;
    // Declared colors, if complete, must agree with the computed ones.
    for &(i, c) in &spec.face_colors {
        if t.colors.get(i) != Some(&c) {
            return Err(DualityError::NotTwoColorable);
        }
    }
    Ok(t)
}

pub fn tgraph_to_spec(t: &TGraph) -> TGraphSpec {
    let vertices = t
        .map
        .vertices()
        .map(|v| TVertexSpec { id: v.0, rotation: t.map.rotation(v).to_vec() })
        .collect();
    let mut twins = Vec::new();
    for d in t.map.darts() {
        if let Some(tw) = t.map.twin(d) {
            if d < tw {
                twins.push((d, tw));
            }
        }
    }
    TGraphSpec {
        vertices,
        twins,
        face_colors: t.colors.iter().enumerate().map(|(i, &c)| (i, c)).collect(),
        vertex_labels: t
            .vertex_labels
            .as_ref()
            .map(|(_, l)| l.iter().enumerate().map(|(i, &x)| (i as u32, x)).collect()),
        q: t.vertex_labels.as_ref().map(|(q, _)| *q),
        meta: t.meta.clone(),
    }
}
