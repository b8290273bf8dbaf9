//! Consistent q-labellings on line complexes.
//!
//! Edge labels live in `Z_q`, both darts of an edge carrying the same label.
//! Around a circle vertex the labels appear in strictly ascending cyclic
//! order counterclockwise, around a cross vertex in descending order, and the
//! labelling is *minimal* when every label owns at least one face that is not
//! a digon. On a q-regular graph the ascending/descending steps are forced to
//! be exactly one, so a labelling is determined by its value on a single seed
//! dart; two seeds differ by a global additive shift.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{GraphError, RotationGraph, VertexKind};
use crate::map::{DartId, VertexId};

/// A dart -> Z_q label assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelling {
    pub q: u32,
    /// One label per dart, indexed by dart id.
    pub labels: Vec<u32>,
    /// For periodic graphs: labels of motif copy `k` are `labels + k*shift`.
    pub shift: u32,
    pub cyclic_order_name: Option<String>,
}

impl Labelling {
    pub fn label(&self, d: DartId) -> u32 {
        self.labels[d.idx()]
    }
}

/// Admissible index range for a graph: `q_min` is the largest vertex valence,
/// `q_max` the number of faces that are not digons (`None` when infinite).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QBounds {
    pub q_min: u32,
    pub q_max: Option<u32>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LabellingError {
    #[error("vertex {0:?} has valence {1} < 2")]
    ValenceTooSmall(VertexId, usize),
    #[error("graph is not {0}-regular: vertex {1:?} has valence {2}")]
    NotRegular(u32, VertexId, usize),
    #[error("end {0} has bundle widths {1}+{2} != q = {3}")]
    EndNotRegular(usize, u32, u32, u32),
    #[error("label propagation conflict at dart {dart:?}: forced {forced} but already {assigned} (mod {q}); conflicting cycle {cycle:?}")]
    PropagationConflict { dart: DartId, forced: u32, assigned: u32, q: u32, cycle: Vec<DartId> },
    #[error("periodic labelling has inconsistent shift between copies")]
    InconsistentShift,
    #[error("label {0} has a face that is not a digon")]
    LabelHasNonDigonFace(u32),
    #[error("labelling is undefined on dart {0:?}")]
    UndefinedLabel(DartId),
    #[error("face starting at dart {0:?} has boundary labels {1:?}, not an adjacent pair")]
    InconsistentFaceBoundary(DartId, Vec<u32>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Largest valence and non-digon face count.
pub fn q_bounds(g: &RotationGraph) -> Result<QBounds, LabellingError> {
    let mut q_min = 0usize;
    for v in g.map().vertices() {
        let val = g.map().valence(v);
        if val < 2 {
            return Err(LabellingError::ValenceTooSmall(v, val));
        }
        q_min = q_min.max(val);
    }
    for e in g.ends() {
        q_min = q_min.max((e.rho1 + e.rho2) as usize);
    }
    Ok(QBounds { q_min: q_min as u32, q_max: g.non_digon_face_count().map(|n| n as u32) })
}

/// Checks q-regularity of every vertex, including the implicit end ladders.
pub fn check_regular(g: &RotationGraph, q: u32) -> Result<(), LabellingError> {
    for v in g.map().vertices() {
        let val = g.map().valence(v);
        if val != q as usize {
            return Err(LabellingError::NotRegular(q, v, val));
        }
    }
    for (i, e) in g.ends().iter().enumerate() {
        if e.rho1 + e.rho2 != q {
            return Err(LabellingError::EndNotRegular(i, e.rho1, e.rho2, q));
        }
    }
    Ok(())
}

/// One unit of the forced propagation: stepping counterclockwise in a
/// rotation adds one at a circle vertex and subtracts one at a cross vertex.
fn rot_step(g: &RotationGraph, v: VertexId) -> i64 {
    match g.kind(v) {
        VertexKind::Circle => 1,
        VertexKind::Cross => -1,
    }
}

/// Propagates the forced labelling over all darts of a (finite or
/// finite-type) q-regular graph, seed dart getting label 0. For periodic
/// graphs the propagation runs on an unrolled copy to determine the shift.
pub fn construct_labelling(
    g: &RotationGraph,
    q: u32,
    seed: DartId,
) -> Result<ConstructOutcome, LabellingError> {
    check_regular(g, q)?;
    let (labels, shift) = if g.periodic().is_some() {
        propagate_periodic(g, q, seed)?
    } else {
        (propagate(g, q, seed)?, 0)
    };
    let labelling = Labelling { q, labels, shift, cyclic_order_name: None };
    let failing = minimality_failures(g, &labelling);
    if failing.is_empty() {
        return Ok(ConstructOutcome::Consistent(labelling));
    }
    // Descent: forget the smallest failing label, relabel into Z_{q-1} and
    // retry, until the minimality condition holds or the index bottoms out.
    let mut cur_g = g.clone();
    let mut cur_l = labelling.clone();
    loop {
        let fails = minimality_failures(&cur_g, &cur_l);
        let Some(&j) = fails.first() else {
            return Ok(ConstructOutcome::Descended {
                initial: labelling,
                failing,
                q0: cur_l.q,
                graph: cur_g,
                labelling: cur_l,
            });
        };
        if cur_l.q <= 2 {
            return Ok(ConstructOutcome::Stuck { initial: labelling, failing, q_reached: cur_l.q });
        }
        let (ng, nl) = forget_digon_label(&cur_g, &cur_l, j)?;
        if ng.map().vertices().any(|v| ng.map().valence(v) < 2) {
            return Ok(ConstructOutcome::Stuck { initial: labelling, failing, q_reached: cur_l.q });
        }
        cur_g = ng;
        cur_l = nl;
    }
}

/// Result of [`construct_labelling`].
#[derive(Clone, Debug)]
pub enum ConstructOutcome {
    /// The labelling satisfies both the local order condition and minimality.
    Consistent(Labelling),
    /// The forced labelling exists but fails minimality; the descent reached
    /// a consistent labelling of index `q0 < q` on the digon-forgotten graph.
    Descended {
        initial: Labelling,
        failing: Vec<u32>,
        q0: u32,
        graph: RotationGraph,
        labelling: Labelling,
    },
    /// Minimality failed and the descent could not continue (q would drop
    /// below 2 or valences below 2).
    Stuck { initial: Labelling, failing: Vec<u32>, q_reached: u32 },
}

impl ConstructOutcome {
    pub fn consistent(self) -> Option<Labelling> {
        match self {
            ConstructOutcome::Consistent(l) => Some(l),
            _ => None,
        }
    }
}

fn propagate(g: &RotationGraph, q: u32, seed: DartId) -> Result<Vec<u32>, LabellingError> {
    let map = g.map();
    let n = map.dart_count();
    if seed.idx() >= n {
        return Err(GraphError::Map(crate::map::MapError::UnknownDart(seed)).into());
    }
    let mut labels: Vec<Option<u32>> = vec![None; n];
    let mut parent: Vec<Option<DartId>> = vec![None; n];
    labels[seed.idx()] = Some(0);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(seed);
    while let Some(d) = queue.pop_front() {
        let l = labels[d.idx()].unwrap() as i64;
        let v = map.vertex_of(d);
        let mut targets: Vec<(DartId, i64)> = vec![
            (map.rot_next(d), l + rot_step(g, v)),
            (map.rot_prev(d), l - rot_step(g, v)),
        ];
        if let Some(t) = map.twin(d) {
            targets.push((t, l));
        }
        for (nd, nl) in targets {
            let nl = nl.rem_euclid(q as i64) as u32;
            match labels[nd.idx()] {
                None => {
                    labels[nd.idx()] = Some(nl);
                    parent[nd.idx()] = Some(d);
                    queue.push_back(nd);
                }
                Some(existing) if existing != nl => {
                    let cycle = conflict_cycle(&parent, d, nd);
                    return Err(LabellingError::PropagationConflict {
                        dart: nd,
                        forced: nl,
                        assigned: existing,
                        q,
                        cycle,
                    });
                }
                Some(_) => {}
            }
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or(LabellingError::UndefinedLabel(DartId(i as u32))))
        .collect()
}

/// The conflicting cycle: the two propagation paths from the seed that force
/// different labels on the same dart, joined at their common prefix.
fn conflict_cycle(parent: &[Option<DartId>], from: DartId, at: DartId) -> Vec<DartId> {
    let chain = |mut d: DartId| {
        let mut path = vec![d];
        while let Some(p) = parent[d.idx()] {
            path.push(p);
            d = p;
        }
        path
    };
    let mut a = chain(from);
    let mut b = chain(at);
    a.reverse();
    b.reverse();
    let mut common = 0;
    while common < a.len() && common < b.len() && a[common] == b[common] {
        common += 1;
    }
    let mut cycle: Vec<DartId> = a[common.saturating_sub(1)..].to_vec();
    cycle.extend(b[common.saturating_sub(1)..].iter().rev());
    cycle
}

fn propagate_periodic(g: &RotationGraph, q: u32, seed: DartId) -> Result<(Vec<u32>, u32), LabellingError> {
    let (unrolled, table) = g.unroll(3);
    // Seed sits in the middle copy so both seams are constrained.
    let mid_seed = table[1][seed.idx()];
    let labels = propagate(&unrolled, q, mid_seed)?;
    let nd = g.map().dart_count();
    let mut shift: Option<i64> = None;
    for d in 0..nd {
        let s = (labels[table[1][d].idx()] as i64 - labels[table[0][d].idx()] as i64).rem_euclid(q as i64);
        let s2 = (labels[table[2][d].idx()] as i64 - labels[table[1][d].idx()] as i64).rem_euclid(q as i64);
        if s != s2 || shift.map_or(false, |prev| prev != s) {
            return Err(LabellingError::InconsistentShift);
        }
        shift = Some(s);
    }
    let motif: Vec<u32> = (0..nd).map(|d| labels[table[0][d].idx()]).collect();
    Ok((motif, shift.unwrap_or(0) as u32))
}

/// Everything [`verify_labelling`] can complain about.
#[derive(Clone, Debug, Default)]
pub struct Verdict {
    /// Vertices whose rotation labels repeat or break the cyclic order.
    pub order_violations: Vec<(VertexId, String)>,
    /// Edges whose two darts carry different labels.
    pub twin_violations: Vec<DartId>,
    /// Labels with no non-digon face.
    pub minimality_failures: Vec<u32>,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.order_violations.is_empty()
            && self.twin_violations.is_empty()
            && self.minimality_failures.is_empty()
    }
}

/// Total check of the labelling conditions; lists every violation.
pub fn verify_labelling(g: &RotationGraph, l: &Labelling) -> Verdict {
    let mut verdict = Verdict::default();
    let map = g.map();
    for d in map.darts() {
        if let Some(t) = map.twin(d) {
            if d < t && l.label(d) != l.label(t) {
                verdict.twin_violations.push(d);
            }
        }
    }
    for v in map.vertices() {
        let rot = map.rotation(v);
        let labs: Vec<u32> = rot.iter().map(|&d| l.label(d)).collect();
        let mut seen = std::collections::BTreeSet::new();
        if !labs.iter().all(|x| seen.insert(*x)) {
            verdict.order_violations.push((v, format!("repeated label in {labs:?}")));
            continue;
        }
        // Strict cyclic order: counterclockwise gaps (ascending at circle,
        // descending at cross) must make exactly one full turn.
        let sign = rot_step(g, v);
        let mut total = 0i64;
        for i in 0..labs.len() {
            let a = labs[i] as i64;
            let b = labs[(i + 1) % labs.len()] as i64;
            let gap = (sign * (b - a)).rem_euclid(l.q as i64);
            if gap == 0 && labs.len() > 1 {
                verdict.order_violations.push((v, format!("zero gap in {labs:?}")));
                total = -1;
                break;
            }
            total += gap;
        }
        if total >= 0 && labs.len() > 1 && total != l.q as i64 {
            verdict.order_violations.push((v, format!("labels {labs:?} wind {total} instead of {}", l.q)));
        }
    }
    verdict.minimality_failures = minimality_failures(g, l);
    verdict
}

/// Labels for which every face is a digon.
pub fn minimality_failures(g: &RotationGraph, l: &Labelling) -> Vec<u32> {
    let mut owned = vec![false; l.q as usize];
    let mut mark = |lab: Option<u32>| {
        if let Some(j) = lab {
            owned[(j % l.q) as usize] = true;
        }
    };
    if g.periodic().is_some() {
        // Work on an unrolled copy and close label orbits under the shift.
        let (unrolled, table) = g.unroll(3);
        let mut big = vec![0u32; unrolled.map().dart_count()];
        for (c, tab) in table.iter().enumerate() {
            for d in 0..g.map().dart_count() {
                big[tab[d].idx()] = (l.labels[d] + c as u32 * l.shift) % l.q;
            }
        }
        let big_l = Labelling { q: l.q, labels: big, shift: 0, cyclic_order_name: None };
        let faces = unrolled.faces();
        let mut motif_labels: Vec<u32> = Vec::new();
        for f in &faces.bounded {
            if f.darts.len() != 2 {
                if let Ok(j) = face_label(&unrolled, &big_l, &FaceRef::Bounded(&f.darts)) {
                    motif_labels.push(j);
                }
            }
        }
        for f in &faces.unbounded {
            if let Ok(j) = face_label(&unrolled, &big_l, &FaceRef::Unbounded(&f.darts, first_enter(&unrolled, &f.darts))) {
                motif_labels.push(j);
            }
        }
        for f in &faces.seam_cut {
            if let Ok(j) = face_label(&unrolled, &big_l, &FaceRef::Unbounded(&f.darts, first_enter(&unrolled, &f.darts))) {
                motif_labels.push(j);
            }
        }
        for j in motif_labels {
            let mut cur = j;
            loop {
                mark(Some(cur));
                cur = (cur + l.shift) % l.q;
                if cur == j {
                    break;
                }
            }
        }
    } else {
        let faces = g.faces();
        for f in &faces.bounded {
            if f.darts.len() != 2 {
                mark(face_label(g, l, &FaceRef::Bounded(&f.darts)).ok());
            }
        }
        for f in &faces.unbounded {
            mark(face_label(g, l, &FaceRef::Unbounded(&f.darts, first_enter(g, &f.darts))).ok());
        }
    }
    (0..l.q).filter(|&j| !owned[j as usize]).collect()
}

fn first_enter(g: &RotationGraph, darts: &[DartId]) -> DartId {
    // The loose dart preceding the fragment in rotation order.
    g.map().rot_prev(darts[0])
}

enum FaceRef<'a> {
    Bounded(&'a [DartId]),
    /// Fragment darts plus the loose dart entering the fragment.
    Unbounded(&'a [DartId], DartId),
}

/// The label `j` of a face whose boundary alternates `j-1, j`: the label of
/// the dart leaving a circle corner (entering a cross corner).
fn face_label(g: &RotationGraph, l: &Labelling, face: &FaceRef) -> Result<u32, LabellingError> {
    let map = g.map();
    // Corner list: (side entering the corner, dart leaving it).
    let mut corners: Vec<(DartId, DartId)> = Vec::new();
    match face {
        FaceRef::Bounded(darts) => {
            for i in 0..darts.len() {
                let d = darts[i];
                let out = darts[(i + 1) % darts.len()];
                corners.push((map.twin(d).expect("bounded face has twins"), out));
            }
        }
        FaceRef::Unbounded(darts, enter) => {
            corners.push((*enter, darts[0]));
            for i in 0..darts.len() - 1 {
                corners.push((map.twin(darts[i]).expect("interior fragment dart"), darts[i + 1]));
            }
        }
    }
    let mut boundary: Vec<u32> = corners.iter().map(|&(_, out)| l.label(out)).collect();
    if let FaceRef::Unbounded(_, enter) = face {
        boundary.push(l.label(*enter));
    }
    boundary.sort_unstable();
    boundary.dedup();
    let bad = || {
        let d0 = corners[0].1;
        LabellingError::InconsistentFaceBoundary(d0, boundary.clone())
    };
    if boundary.len() > 2 {
        return Err(bad());
    }
    for &(inc, out) in &corners {
        let v = map.vertex_of(out);
        if g.kind(v) == VertexKind::Circle {
            let j = l.label(out);
            if (j + l.q - 1) % l.q != l.label(inc) {
                return Err(bad());
            }
            return Ok(j);
        }
    }
    // Fragment consisting of a single cross corner: the entering side holds j.
    Ok(l.label(corners[0].0))
}

/// Total face -> label map over the bounded and unbounded faces.
pub fn face_label_map(
    g: &RotationGraph,
    l: &Labelling,
) -> Result<BTreeMap<DartId, u32>, LabellingError> {
    let faces = g.faces();
    let mut out = BTreeMap::new();
    for f in &faces.bounded {
        let j = face_label(g, l, &FaceRef::Bounded(&f.darts))?;
        out.insert(*f.darts.iter().min().unwrap(), j);
    }
    for f in &faces.unbounded {
        let j = face_label(g, l, &FaceRef::Unbounded(&f.darts, first_enter(g, &f.darts)))?;
        out.insert(*f.darts.iter().min().unwrap(), j);
    }
    Ok(out)
}

/// Label of one unbounded face (exposed for decomposition reports).
pub fn unbounded_face_label(
    g: &RotationGraph,
    l: &Labelling,
    darts: &[DartId],
) -> Result<u32, LabellingError> {
    face_label(g, l, &FaceRef::Unbounded(darts, first_enter(g, darts)))
}

pub fn bounded_face_label(
    g: &RotationGraph,
    l: &Labelling,
    darts: &[DartId],
) -> Result<u32, LabellingError> {
    face_label(g, l, &FaceRef::Bounded(darts))
}

/// Deletes every edge labelled `j` (each vertex loses exactly one dart when
/// the graph is q-regular) and renames the remaining labels into `Z_{q-1}`,
/// preserving their cyclic order. Requires every `j`-face to be a digon.
pub fn forget_digon_label(
    g: &RotationGraph,
    l: &Labelling,
    j: u32,
) -> Result<(RotationGraph, Labelling), LabellingError> {
    let faces = g.faces();
    for f in &faces.bounded {
        if f.darts.len() != 2 {
            if let Ok(lab) = face_label(g, l, &FaceRef::Bounded(&f.darts)) {
                if lab == j {
                    return Err(LabellingError::LabelHasNonDigonFace(j));
                }
            }
        }
    }
    for f in &faces.unbounded {
        if let Ok(lab) = face_label(g, l, &FaceRef::Unbounded(&f.darts, first_enter(g, &f.darts))) {
            if lab == j {
                return Err(LabellingError::LabelHasNonDigonFace(j));
            }
        }
    }
    let map = g.map();
    let keep: Vec<DartId> = map.darts().filter(|&d| l.label(d) != j).collect();
    let mut dart_map: BTreeMap<DartId, DartId> = BTreeMap::new();
    for (i, &d) in keep.iter().enumerate() {
        dart_map.insert(d, DartId(i as u32));
    }
    let rotations: Vec<Vec<DartId>> = map
        .vertices()
        .map(|v| map.rotation(v).iter().filter_map(|d| dart_map.get(d).copied()).collect())
        .collect();
    let mut twins = Vec::new();
    for &d in &keep {
        if let Some(t) = map.twin(d) {
            if d < t && l.label(d) != j {
                twins.push((dart_map[&d], dart_map[&t]));
            }
        }
    }
    // Ends: the forgotten label sits in either the attach bundle run or the
    // complementary run; the corresponding width shrinks by one.
    let mut ends = Vec::new();
    for e in g.ends() {
        let attach_labels: Vec<u32> = {
            let mut d = e.attach;
            let mut out = Vec::new();
            for _ in 0..e.rho1 {
                out.push(l.label(d));
                d = map.rot_next(d);
            }
            out
        };
        let in_attach = attach_labels.contains(&j);
        let new_attach = if in_attach {
            let mut d = e.attach;
            while l.label(d) == j {
                d = map.rot_next(d);
            }
            d
        } else {
            e.attach
        };
        ends.push(crate::graph::EndDescriptor {
            attach: dart_map[&new_attach],
            rho1: e.rho1 - if in_attach { 1 } else { 0 },
            rho2: e.rho2 - if in_attach { 0 } else { 1 },
            first_kind: e.first_kind,
        });
    }
    let new_map = crate::map::CombMap::new(rotations, &twins, keep.len()).map_err(GraphError::from)?;
    let new_g = RotationGraph::new(new_map, g.kinds().to_vec(), ends, g.periodic().cloned(), g.meta().clone())?;
    let relabel = |x: u32| if x > j { x - 1 } else { x };
    let labels = keep.iter().map(|&d| relabel(l.label(d))).collect();
    Ok((
        new_g,
        Labelling { q: l.q - 1, labels, shift: relabel_shift(l.shift, l.q), cyclic_order_name: None },
    ))
}

fn relabel_shift(shift: u32, _q: u32) -> u32 {
    // Shifts are only meaningful for periodic graphs; forgetting a label
    // keeps the residual shift as-is in the smaller alphabet.
    shift
}

/// Inverse of [`forget_digon_label`]: beside every edge labelled `j` a
/// parallel copy is inserted, carrying a fresh label placed right after `j`
/// in the cyclic order. All new faces between an original edge and its copy
/// are digons, so the result is (q+1)-regular with minimality failing
/// exactly at the new label.
pub fn insert_digon_label(
    g: &RotationGraph,
    l: &Labelling,
    j: u32,
) -> Result<(RotationGraph, Labelling), LabellingError> {
    let (mut map, kinds, mut ends, periodic, meta) = g.clone().into_parts();
    let relabel = |x: u32| if x > j { x + 1 } else { x };
    let mut labels: Vec<u32> = l.labels.iter().map(|&x| relabel(x)).collect();
    // Insert beside the circle-side dart of every j-labelled edge.
    let mut targets: Vec<DartId> = Vec::new();
    for d in map.darts() {
        if l.label(d) == j && g.kind(map.vertex_of(d)) == VertexKind::Circle {
            if map.twin(d).is_some() {
                targets.push(d);
            }
        }
    }
    for d in targets {
        let new = map.insert_parallel(d, 1);
        for nd in new {
            let t = map.twin(nd).unwrap();
            for x in [nd, t] {
                if x.idx() >= labels.len() {
                    labels.resize(x.idx() + 1, 0);
                }
                labels[x.idx()] = j + 1;
            }
        }
    }
    // Loose j-darts sit in attach bundles: widen the bundle by one loose dart
    // carrying the new label. Ladder-interior j-edges are implicit; only the
    // widths change.
    let mut new_ends = Vec::new();
    for e in ends.drain(..) {
        let mut d = e.attach;
        let mut run = Vec::new();
        for _ in 0..e.rho1 {
            run.push(d);
            d = map.rot_next(d);
        }
        let has_j = run.iter().any(|&d| l.label(d) == j);
        if has_j {
            let u = map.vertex_of(e.attach);
            let circle = g.kind(u) == VertexKind::Circle;
            // Labels ascend counterclockwise at a circle vertex and descend
            // at a cross vertex, so the new `j+1` dart goes right after the
            // `j` dart at a circle and right before it at a cross.
            let jd = *run.iter().find(|&&d| l.label(d) == j).unwrap();
            let new_id = insert_loose_beside(&mut map, jd, circle);
            if new_id.idx() >= labels.len() {
                labels.resize(new_id.idx() + 1, 0);
            }
            labels[new_id.idx()] = j + 1;
            // The attach pointer stays at the first dart of the widened run;
            // it moves only when the new dart lands in front of it.
            let attach = if !circle && jd == e.attach { new_id } else { e.attach };
            new_ends.push(crate::graph::EndDescriptor {
                attach,
                rho1: e.rho1 + 1,
                rho2: e.rho2,
                first_kind: e.first_kind,
            });
        } else {
            new_ends.push(crate::graph::EndDescriptor { rho1: e.rho1, rho2: e.rho2 + 1, ..e });
        }
    }
    let new_g = RotationGraph::rebuild(map, kinds, new_ends, periodic, meta)?;
    Ok((
        new_g,
        Labelling { q: l.q + 1, labels, shift: l.shift, cyclic_order_name: None },
    ))
}

/// Adds a loose dart right after (ccw) or right before the given dart in its
/// vertex rotation. Implemented here since it touches map internals only
/// lightly: rebuild the map with one extra rotation slot.
fn insert_loose_beside(map: &mut crate::map::CombMap, d: DartId, after: bool) -> DartId {
    let new_id = DartId(map.dart_count() as u32);
    let v = map.vertex_of(d);
    let mut rotations: Vec<Vec<DartId>> = map.vertices().map(|v| map.rotation(v).to_vec()).collect();
    let rot = &mut rotations[v.idx()];
    let pos = rot.iter().position(|&x| x == d).unwrap();
    rot.insert(if after { pos + 1 } else { pos }, new_id);
    let mut twins = Vec::new();
    for x in map.darts() {
        if let Some(t) = map.twin(x) {
            if x < t {
                twins.push((x, t));
            }
        }
    }
    *map = crate::map::CombMap::new(rotations, &twins, map.dart_count() + 1).expect("loose insert");
    new_id
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabellingSpec {
    pub q: u32,
    pub labels: Vec<(DartId, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<u32>,
}

pub fn labelling_to_spec(l: &Labelling) -> LabellingSpec {
    LabellingSpec {
        q: l.q,
        labels: l.labels.iter().enumerate().map(|(i, &x)| (DartId(i as u32), x)).collect(),
        shift: if l.shift == 0 { None } else { Some(l.shift) },
    }
}

pub fn labelling_from_spec(spec: &LabellingSpec, dart_count: usize) -> Result<Labelling, LabellingError> {
    let mut labels = vec![u32::MAX; dart_count];
    for &(d, x) in &spec.labels {
        if d.idx() < dart_count {
            labels[d.idx()] = x % spec.q;
        }
    }
    if let Some(i) = labels.iter().position(|&x| x == u32::MAX) {
        return Err(LabellingError::UndefinedLabel(DartId(i as u32)));
    }
    Ok(Labelling { q: spec.q, labels, shift: spec.shift.unwrap_or(0), cyclic_order_name: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EndDescriptor, GraphSpec, Meta, PeriodicSeam, VertexSpec};
    use crate::graph::VertexKind::{Circle, Cross};

    fn ladder() -> RotationGraph {
        build_graph(&GraphSpec {
            vertices: vec![
                VertexSpec { id: 0, kind: Circle, rotation: vec![DartId(0), DartId(1)] },
                VertexSpec { id: 1, kind: Cross, rotation: vec![DartId(2), DartId(3)] },
            ],
            twins: vec![(DartId(1), DartId(2))],
            ends: vec![
                EndDescriptor { attach: DartId(0), rho1: 1, rho2: 1, first_kind: Cross },
                EndDescriptor { attach: DartId(3), rho1: 1, rho2: 1, first_kind: Circle },
            ],
            periodic: None,
            meta: Meta::default(),
        })
        .unwrap()
    }

    #[test]
    fn ladder_labels_alternate_and_faces_split() {
        let g = ladder();
        let l = construct_labelling(&g, 2, DartId(0)).unwrap().consistent().unwrap();
        assert_eq!(l.labels[1], l.labels[2], "twins share their label");
        assert_ne!(l.labels[0], l.labels[1], "rotation steps alternate");
        // The two unbounded faces must receive the two distinct labels.
        let faces = g.faces();
        assert_eq!(faces.unbounded.len(), 2);
        let mut labels: Vec<u32> = faces
            .unbounded
            .iter()
            .map(|f| unbounded_face_label(&g, &l, &f.darts).unwrap())
            .collect();
        labels.sort();
        assert_eq!(labels, vec![0, 1]);
    }

    #[test]
    fn valence_below_two_is_rejected_by_bounds() {
        let g = build_graph(&GraphSpec {
            vertices: vec![
                VertexSpec { id: 0, kind: Circle, rotation: vec![DartId(0)] },
                VertexSpec { id: 1, kind: Cross, rotation: vec![DartId(1)] },
            ],
            twins: vec![(DartId(0), DartId(1))],
            ends: vec![],
            periodic: None,
            meta: Meta::default(),
        })
        .unwrap();
        assert!(matches!(q_bounds(&g), Err(LabellingError::ValenceTooSmall(_, 1))));
    }

    #[test]
    fn non_regular_graph_cannot_be_labelled() {
        let g = ladder();
        assert!(matches!(
            construct_labelling(&g, 3, DartId(0)),
            Err(LabellingError::NotRegular(3, _, 2))
        ));
    }

    #[test]
    fn repeated_label_at_a_vertex_is_flagged() {
        let g = ladder();
        let l = Labelling { q: 2, labels: vec![0, 0, 0, 0], shift: 0, cyclic_order_name: None };
        let verdict = verify_labelling(&g, &l);
        assert!(!verdict.order_violations.is_empty());
    }

    #[test]
    fn forgetting_a_label_with_a_real_face_fails() {
        // The 4-cycle (z^2 ladder): both labels own 4-gon faces.
        let g = build_graph(&GraphSpec {
            vertices: vec![
                VertexSpec { id: 0, kind: Circle, rotation: vec![DartId(0), DartId(7)] },
                VertexSpec { id: 1, kind: Cross, rotation: vec![DartId(2), DartId(1)] },
                VertexSpec { id: 2, kind: Circle, rotation: vec![DartId(4), DartId(3)] },
                VertexSpec { id: 3, kind: Cross, rotation: vec![DartId(6), DartId(5)] },
            ],
            twins: vec![
                (DartId(0), DartId(1)),
                (DartId(2), DartId(3)),
                (DartId(4), DartId(5)),
                (DartId(6), DartId(7)),
            ],
            ends: vec![],
            periodic: None,
            meta: Meta::default(),
        })
        .unwrap();
        let l = construct_labelling(&g, 2, DartId(0)).unwrap().consistent().unwrap();
        assert!(matches!(
            forget_digon_label(&g, &l, 0),
            Err(LabellingError::LabelHasNonDigonFace(0))
        ));
    }

    #[test]
    fn twisted_periodic_seam_conflicts() {
        // A 2-vertex motif whose seam gluing winds the labels: propagation
        // must refuse it rather than return something inconsistent.
        let spec = GraphSpec {
            vertices: vec![
                VertexSpec {
                    id: 0,
                    kind: Circle,
                    rotation: vec![DartId(0), DartId(1), DartId(2)],
                },
                VertexSpec {
                    id: 1,
                    kind: Cross,
                    rotation: vec![DartId(3), DartId(4), DartId(5)],
                },
            ],
            twins: vec![(DartId(1), DartId(3)), (DartId(2), DartId(4))],
            ends: vec![],
            periodic: Some(PeriodicSeam {
                outgoing: vec![DartId(5)],
                incoming: vec![DartId(0)],
            }),
            meta: Meta::default(),
        };
        let g = build_graph(&spec).unwrap();
        let out = construct_labelling(&g, 3, DartId(0));
        assert!(
            matches!(out, Err(LabellingError::PropagationConflict { .. }))
                || matches!(out, Err(LabellingError::InconsistentShift)),
            "twisted seam must be rejected, got {out:?}"
        );
    }
}
