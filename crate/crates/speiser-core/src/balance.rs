//! Local-balance conditions and their experimental comparison.
//!
//! Three conditions claim to decide whether a tessellation graph comes from
//! a branched self-cover of the sphere: the Hall neighborhood inequalities
//! on the dual line complex, the cycle condition on the oriented t-graph
//! (strictly more blue than grey tiles on the left of every qualifying
//! cycle), and the skeleton counting conditions. The harness runs all three
//! and reports any disagreement with full certificates.

use serde::{Deserialize, Serialize};

use crate::duality::{TGraph, TileColor};
use crate::extension::HallWitness;
use crate::graph::RotationGraph;
use crate::labelling::q_bounds;
use crate::map::DartId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Hall,
    KochLei,
    Tomasini,
}

/// A violation certificate, re-checkable on its own.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Certificate {
    Hall { q: u32, witness: HallWitness },
    NoAdmissibleIndex { q_min: u32, q_max: Option<u32> },
    Cycle { darts: Vec<DartId>, blue_left: u32, grey_left: u32 },
    GlobalTiles { blue: u32, grey: u32 },
    Subgraph { vertices: Vec<SkeletonNode>, blacks: u32, faces: u32 },
    GlobalSkeleton { blacks: u32, faces: u32 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BalanceVerdict {
    pub condition: Condition,
    pub balanced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Enumeration bounds in force, when the check is exhaustive only up to
    /// a size limit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    /// Set when the enumeration was truncated by the bound, so a `balanced`
    /// answer is only valid within it.
    pub truncated: bool,
}

// ---------------------------------------------------------------------------
// Koch-Lei cycle condition
// ---------------------------------------------------------------------------

/// Checks the oriented-cycle condition: every simple directed cycle (each
/// edge traversed with its blue tile on the left) must see strictly more
/// blue than grey tiles in the region on its left. Cycles longer than
/// `max_cycle_len` are not enumerated; `truncated` reports whether any were
/// skipped.
pub fn koch_lei_check(t: &TGraph, max_cycle_len: usize) -> BalanceVerdict {
    let blue = t.blue_tile_count() as u32;
    let grey = t.colors.len() as u32 - blue;
    if blue != grey {
        return BalanceVerdict {
            condition: Condition::KochLei,
            balanced: false,
            certificate: Some(Certificate::GlobalTiles { blue, grey }),
            bound: Some(max_cycle_len),
            truncated: false,
        };
    }
    let faces = t.faces();
    let mut face_of_dart = vec![usize::MAX; t.map.dart_count()];
    for (i, f) in faces.iter().enumerate() {
        for &d in f {
            face_of_dart[d.idx()] = i;
        }
    }
    // Forward darts: blue tile on the left.
    let forward: Vec<DartId> = t
        .map
        .darts()
        .filter(|&d| t.colors[face_of_dart[d.idx()]] == TileColor::Blue)
        .collect();
    let mut out_darts: Vec<Vec<DartId>> = vec![Vec::new(); t.map.vertex_count()];
    for &d in &forward {
        out_darts[t.map.vertex_of(d).idx()].push(d);
    }
    let nv = t.map.vertex_count();
    let mut truncated = false;
    // Enumerate simple directed cycles: root each cycle at its smallest
    // vertex so it is found exactly once.
    for root in 0..nv {
        let mut stack: Vec<DartId> = Vec::new();
        let mut on_path = vec![false; nv];
        on_path[root] = true;
        if let Some(cert) = dfs_cycles(
            t,
            &face_of_dart,
            &out_darts,
            root,
            root,
            &mut stack,
            &mut on_path,
            max_cycle_len,
            &mut truncated,
        ) {
            return BalanceVerdict {
                condition: Condition::KochLei,
                balanced: false,
                certificate: Some(cert),
                bound: Some(max_cycle_len),
                truncated,
            };
        }
    }
    BalanceVerdict {
        condition: Condition::KochLei,
        balanced: true,
        certificate: None,
        bound: Some(max_cycle_len),
        truncated,
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs_cycles(
    t: &TGraph,
    face_of_dart: &[usize],
    out_darts: &[Vec<DartId>],
    root: usize,
    cur: usize,
    stack: &mut Vec<DartId>,
    on_path: &mut Vec<bool>,
    bound: usize,
    truncated: &mut bool,
) -> Option<Certificate> {
    for &d in &out_darts[cur] {
        let head = t.map.vertex_of(t.map.twin(d).unwrap()).idx();
        if head == root {
            // Closing dart: the stack plus `d` is a simple directed cycle.
            stack.push(d);
            let cert = check_cycle(t, face_of_dart, stack);
            stack.pop();
            if cert.is_some() {
                return cert;
            }
            continue;
        }
        if head < root || on_path[head] {
            continue;
        }
        if stack.len() + 2 > bound {
            *truncated = true;
            continue;
        }
        stack.push(d);
        on_path[head] = true;
        let res = dfs_cycles(t, face_of_dart, out_darts, root, head, stack, on_path, bound, truncated);
        on_path[head] = false;
        stack.pop();
        if res.is_some() {
            return res;
        }
    }
    None
}

/// Counts blue and grey tiles strictly inside the left region of the cycle.
fn check_cycle(t: &TGraph, face_of_dart: &[usize], cycle: &[DartId]) -> Option<Certificate> {
    let mut blocked_edges = std::collections::BTreeSet::new();
    for &d in cycle {
        blocked_edges.insert(d);
        blocked_edges.insert(t.map.twin(d).unwrap());
    }
    let faces = t.faces();
    // Flood fill from the face left of the first cycle dart.
    let seed = face_of_dart[cycle[0].idx()];
    let mut in_region = vec![false; faces.len()];
    in_region[seed] = true;
    let mut queue = std::collections::VecDeque::from([seed]);
    while let Some(f) = queue.pop_front() {
        for &d in &faces[f] {
            if blocked_edges.contains(&d) {
                continue;
            }
            let g = face_of_dart[t.map.twin(d).unwrap().idx()];
            if !in_region[g] {
                in_region[g] = true;
                queue.push_back(g);
            }
        }
    }
    let mut blue = 0u32;
    let mut grey = 0u32;
    for (f, &inside) in in_region.iter().enumerate() {
        if inside {
            match t.colors[f] {
                TileColor::Blue => blue += 1,
                TileColor::Grey => grey += 1,
            }
        }
    }
    if blue <= grey {
        Some(Certificate::Cycle { darts: cycle.to_vec(), blue_left: blue, grey_left: grey })
    } else {
        None
    }
}

/// Re-checks a cycle certificate from scratch.
pub fn recheck_cycle(t: &TGraph, cert: &Certificate) -> bool {
    let Certificate::Cycle { darts, blue_left, grey_left } = cert else { return false };
    let faces = t.faces();
    let mut face_of_dart = vec![usize::MAX; t.map.dart_count()];
    for (i, f) in faces.iter().enumerate() {
        for &d in f {
            face_of_dart[d.idx()] = i;
        }
    }
    match check_cycle(t, &face_of_dart, darts) {
        Some(Certificate::Cycle { blue_left: b, grey_left: g, .. }) => b == *blue_left && g == *grey_left,
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Tomasini skeleton
// ---------------------------------------------------------------------------

/// A node of the skeleton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SkeletonNode {
    /// One per blue tile (by face index in the source graph).
    Black(u32),
    /// A surviving source vertex.
    Red(u32),
}

/// Bipartite incidence skeleton: one black vertex per blue tile joined to
/// every vertex on that tile's boundary (with multiplicity), after erasing
/// red vertices of valence 1 together with their edges.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Skeleton {
    pub blacks: Vec<u32>,
    pub reds: Vec<u32>,
    /// Edges as (black face index, red vertex id) pairs, with multiplicity.
    pub edges: Vec<(u32, u32)>,
}

/// Builds the skeleton of a tessellation graph. Valence-2 vertices (the
/// subdivision corners of an A-map) end up red leaves and are erased, so the
/// skeleton of an A-map equals the skeleton of its valence-2-forgotten
/// t-graph.
pub fn tomasini_skeleton(t: &TGraph) -> Skeleton {
    let faces = t.faces();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut blacks = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        if t.colors[i] != TileColor::Blue {
            continue;
        }
        blacks.push(i as u32);
        for &d in f {
            // One corner per boundary dart: the corner at the dart's vertex.
            edges.push((i as u32, t.map.vertex_of(d).0));
        }
    }
    let mut red_valence = std::collections::BTreeMap::new();
    for &(_, r) in &edges {
        *red_valence.entry(r).or_insert(0u32) += 1;
    }
    let keep: std::collections::BTreeSet<u32> = red_valence
        .iter()
        .filter(|(_, &v)| v > 1)
        .map(|(&r, _)| r)
        .collect();
    edges.retain(|&(_, r)| keep.contains(&r));
    edges.sort();
    Skeleton { blacks, reds: keep.into_iter().collect(), edges }
}

/// Tomasini's two counting conditions. Global: as many black vertices as
/// skeleton faces. Local: every connected subgraph with more than one black
/// vertex has at least as many black vertices as faces. Faces of a connected
/// planar subgraph are counted by Euler's formula; induced subgraphs suffice
/// because adding an edge inside a fixed vertex set only raises the face
/// count.
pub fn tomasini_balance(sk: &Skeleton, max_subgraph_blacks: usize) -> BalanceVerdict {
    let v = sk.blacks.len() + sk.reds.len();
    let e = sk.edges.len();
    let faces = (e as i64 - v as i64 + 2).max(0) as u32;
    let blacks = sk.blacks.len() as u32;
    if blacks != faces {
        return BalanceVerdict {
            condition: Condition::Tomasini,
            balanced: false,
            certificate: Some(Certificate::GlobalSkeleton { blacks, faces }),
            bound: Some(max_subgraph_blacks),
            truncated: false,
        };
    }
    // Node list: blacks then reds; adjacency with multiplicity.
    let mut nodes: Vec<SkeletonNode> = Vec::new();
    let mut index = std::collections::BTreeMap::new();
    for &b in &sk.blacks {
        index.insert(SkeletonNode::Black(b), nodes.len());
        nodes.push(SkeletonNode::Black(b));
    }
    for &r in &sk.reds {
        index.insert(SkeletonNode::Red(r), nodes.len());
        nodes.push(SkeletonNode::Red(r));
    }
    let n = nodes.len();
    let mut adj = vec![vec![0u32; n]; n];
    for &(b, r) in &sk.edges {
        let i = index[&SkeletonNode::Black(b)];
        let j = index[&SkeletonNode::Red(r)];
        adj[i][j] += 1;
        adj[j][i] += 1;
    }
    let black_count = sk.blacks.len();
    let mut truncated = false;
    // Enumerate connected induced subgraphs by growing from each anchor,
    // allowing only nodes greater than the anchor to avoid duplicates.
    let mut violation: Option<Certificate> = None;
    for anchor in 0..n {
        if violation.is_some() {
            break;
        }
        let mut chosen = vec![false; n];
        chosen[anchor] = true;
        grow_subgraphs(
            &nodes,
            &adj,
            anchor,
            &mut chosen,
            black_count,
            max_subgraph_blacks,
            &mut truncated,
            &mut violation,
        );
    }
    match violation {
        Some(cert) => BalanceVerdict {
            condition: Condition::Tomasini,
            balanced: false,
            certificate: Some(cert),
            bound: Some(max_subgraph_blacks),
            truncated,
        },
        None => BalanceVerdict {
            condition: Condition::Tomasini,
            balanced: true,
            certificate: None,
            bound: Some(max_subgraph_blacks),
            truncated,
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn grow_subgraphs(
    nodes: &[SkeletonNode],
    adj: &[Vec<u32>],
    anchor: usize,
    chosen: &mut Vec<bool>,
    total_blacks: usize,
    max_blacks: usize,
    truncated: &mut bool,
    violation: &mut Option<Certificate>,
) {
    if violation.is_some() {
        return;
    }
    if let Some(cert) = evaluate_subgraph(nodes, adj, chosen) {
        *violation = Some(cert);
        return;
    }
    // Frontier: nodes above the anchor adjacent to the chosen set.
    let n = nodes.len();
    let mut frontier: Vec<usize> = Vec::new();
    for u in anchor + 1..n {
        if chosen[u] {
            continue;
        }
        if (0..n).any(|v| chosen[v] && adj[v][u] > 0) {
            frontier.push(u);
        }
    }
    let blacks_now = (0..n).filter(|&u| chosen[u] && matches!(nodes[u], SkeletonNode::Black(_))).count();
    for u in frontier {
        let is_black = matches!(nodes[u], SkeletonNode::Black(_));
        if is_black && blacks_now + 1 > max_blacks {
            *truncated = true;
            continue;
        }
        chosen[u] = true;
        grow_subgraphs(nodes, adj, anchor, chosen, total_blacks, max_blacks, truncated, violation);
        chosen[u] = false;
        if violation.is_some() {
            return;
        }
    }
    let _ = total_blacks;
}

fn evaluate_subgraph(nodes: &[SkeletonNode], adj: &[Vec<u32>], chosen: &[bool]) -> Option<Certificate> {
    let n = nodes.len();
    let verts: Vec<usize> = (0..n).filter(|&u| chosen[u]).collect();
    let blacks = verts
        .iter()
        .filter(|&&u| matches!(nodes[u], SkeletonNode::Black(_)))
        .count() as u32;
    if blacks <= 1 {
        return None;
    }
    let mut e = 0u32;
    for (ai, &a) in verts.iter().enumerate() {
        for &b in &verts[ai + 1..] {
            e += adj[a][b];
        }
    }
    let v = verts.len() as u32;
    let faces = (e as i64 - v as i64 + 2).max(0) as u32;
    if blacks < faces {
        Some(Certificate::Subgraph {
            vertices: verts.iter().map(|&u| nodes[u]).collect(),
            blacks,
            faces,
        })
    } else {
        None
    }
}

/// Re-checks a subgraph certificate: recounts blacks, edges and faces of the
/// induced subgraph.
pub fn recheck_subgraph(sk: &Skeleton, cert: &Certificate) -> bool {
    let Certificate::Subgraph { vertices, blacks, faces } = cert else { return false };
    let set: std::collections::BTreeSet<SkeletonNode> = vertices.iter().copied().collect();
    let b = vertices.iter().filter(|v| matches!(v, SkeletonNode::Black(_))).count() as u32;
    let e = sk
        .edges
        .iter()
        .filter(|&&(bk, r)| set.contains(&SkeletonNode::Black(bk)) && set.contains(&SkeletonNode::Red(r)))
        .count() as u32;
    let v = vertices.len() as u32;
    let f = (e as i64 - v as i64 + 2).max(0) as u32;
    b == *blacks && f == *faces && b < f
}

// ---------------------------------------------------------------------------
// Hall side and the harness
// ---------------------------------------------------------------------------

/// Hall verdict for a finite pre-Speiser graph: does any index q >= q_min
/// admit a feasible extension?
///
/// Every neighborhood inequality is linear in q, so the feasible indices
/// form an interval; its lower endpoint cannot exceed the largest valence
/// plus twice the edge count. Sweeping that far decides existence exactly.
pub fn hall_check(g: &RotationGraph) -> Result<BalanceVerdict, crate::extension::ExtensionError> {
    let bounds = q_bounds(g).map_err(crate::extension::ExtensionError::Labelling)?;
    let sweep_end = bounds.q_min + 2 * g.map().edge_count() as u32 + 1;
    let mut last = None;
    for q in bounds.q_min.max(2)..=sweep_end {
        match crate::extension::check_feasibility(g, q) {
            Ok(Ok(())) => {
                return Ok(BalanceVerdict {
                    condition: Condition::Hall,
                    balanced: true,
                    certificate: None,
                    bound: None,
                    truncated: false,
                });
            }
            Ok(Err(witness)) => last = Some(Certificate::Hall { q, witness }),
            Err(crate::extension::ExtensionError::GloballyUnbalanced { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(BalanceVerdict {
        condition: Condition::Hall,
        balanced: false,
        certificate: last.or(Some(Certificate::NoAdmissibleIndex {
            q_min: bounds.q_min,
            q_max: bounds.q_max,
        })),
        bound: None,
        truncated: false,
    })
}

/// Tri-verdict for one instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HarnessRow {
    pub name: String,
    pub hall: BalanceVerdict,
    pub koch_lei: BalanceVerdict,
    pub tomasini: BalanceVerdict,
    pub agree: bool,
}

/// Runs the three checks on a finite pre-Speiser graph; the t-graph side is
/// derived by dualizing and forgetting valence-2 vertices. Returns `None`
/// when the tessellation side is degenerate (no vertex of valence >= 3
/// survives), in which case the comparison is not runnable.
pub fn harness_row(
    name: &str,
    g: &RotationGraph,
    max_cycle: usize,
    max_subgraph: usize,
) -> Result<Option<HarnessRow>, String> {
    let hall = hall_check(g).map_err(|e| e.to_string())?;
    // A dual with loops means some tile touches itself along an edge, i.e.
    // the tiles are not Jordan regions and the tessellation-side conditions
    // do not apply; same when no vertex of valence >= 3 survives the
    // valence-2 forgetting.
    let Ok((t_raw, _)) = crate::duality::primal(g) else {
        return Ok(None);
    };
    let t = match crate::duality::forget_valence2(&t_raw) {
        Ok(t) => t,
        Err(_) => return Ok(None),
    };
    if t.map.vertex_count() == 0 {
        return Ok(None);
    }
    let koch_lei = koch_lei_check(&t, max_cycle);
    let sk = tomasini_skeleton(&t);
    let tomasini = tomasini_balance(&sk, max_subgraph);
    let agree = hall.balanced == koch_lei.balanced && koch_lei.balanced == tomasini.balanced;
    Ok(Some(HarnessRow {
        name: name.to_string(),
        hall,
        koch_lei,
        tomasini,
        agree,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{tgraph_new, TGraph};
    use crate::map::CombMap;

    /// One blue and one grey 4-gon tile: the trivial two-tile tessellation.
    fn two_tile() -> TGraph {
        let rotations = vec![
            vec![DartId(0), DartId(7)],
            vec![DartId(2), DartId(1)],
            vec![DartId(4), DartId(3)],
            vec![DartId(6), DartId(5)],
        ];
        let twins = [
            (DartId(0), DartId(1)),
            (DartId(2), DartId(3)),
            (DartId(4), DartId(5)),
            (DartId(6), DartId(7)),
        ];
        let map = CombMap::new(rotations, &twins, 8).unwrap();
        tgraph_new(map, 0, None, Default::default()).unwrap()
    }

    #[test]
    fn two_tile_tessellation_is_balanced() {
        let t = two_tile();
        let verdict = koch_lei_check(&t, 12);
        assert!(verdict.balanced, "{verdict:?}");
        assert!(!verdict.truncated);
    }

    #[test]
    fn single_blue_tile_skeleton_collapses_to_one_black_vertex() {
        let t = two_tile();
        let sk = tomasini_skeleton(&t);
        // All boundary vertices have valence 2, so every red vertex sits on
        // exactly one blue corner and is erased.
        assert_eq!(sk.blacks.len(), 1);
        assert!(sk.reds.is_empty());
        assert!(sk.edges.is_empty());
        let verdict = tomasini_balance(&sk, 8);
        assert!(verdict.balanced, "one black vertex is vacuously balanced: {verdict:?}");
    }

    #[test]
    fn certificates_recheck() {
        // Build a skeleton violating the local count by hand: two blacks
        // joined to two reds by a 4-cycle plus a third red splitting a face.
        let sk = Skeleton {
            blacks: vec![0, 1],
            reds: vec![10, 11, 12],
            edges: vec![(0, 10), (0, 11), (0, 12), (1, 10), (1, 11), (1, 12)],
        };
        let verdict = tomasini_balance(&sk, 8);
        assert!(!verdict.balanced);
        let cert = verdict.certificate.unwrap();
        match &cert {
            Certificate::GlobalSkeleton { blacks, faces } => {
                assert_eq!((*blacks, *faces), (2, 3));
            }
            Certificate::Subgraph { .. } => assert!(recheck_subgraph(&sk, &cert)),
            other => panic!("unexpected certificate {other:?}"),
        }
    }
}

