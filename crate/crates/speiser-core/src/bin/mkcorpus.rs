//! Corpus generator (development tool): builds each bundled instance,
//! verifies its pinned properties, and writes the JSON files.

use std::collections::BTreeMap;

use speiser_core::decomposition::{decompose, find_log_ends};
use speiser_core::extension::{solve_extension, ExtensionPlan};
use speiser_core::graph::{
    build_graph, to_spec, EndDescriptor, GraphSpec, Meta, PeriodicSeam, RotationGraph, VertexKind,
    VertexSpec,
};
use speiser_core::labelling::{construct_labelling, q_bounds, ConstructOutcome};
use speiser_core::map::DartId;

/// Slot tokens for building rotations: E(edge id, side 0/1) or L(loose tag).
#[derive(Clone, Copy, Debug, PartialEq)]
enum Slot {
    E(usize, u8),
    L(&'static str),
}

struct Builder {
    kinds: Vec<VertexKind>,
    rotations: Vec<Vec<Slot>>,
}

impl Builder {
    fn new(kinds: &[VertexKind]) -> Builder {
        Builder { kinds: kinds.to_vec(), rotations: vec![Vec::new(); kinds.len()] }
    }

    fn rot(&mut self, v: usize, slots: &[Slot]) {
        self.rotations[v] = slots.to_vec();
    }

    /// Resolves slots to dart ids (in vertex-then-slot order) and returns the
    /// spec plus the dart id of each loose tag and each edge side.
    fn resolve(&self) -> (GraphSpec, BTreeMap<&'static str, DartId>) {
        let mut next = 0u32;
        let mut vertices = Vec::new();
        let mut loose = BTreeMap::new();
        let mut edge_sides: BTreeMap<(usize, u8), DartId> = BTreeMap::new();
        for (v, slots) in self.rotations.iter().enumerate() {
            let mut rotation = Vec::new();
            for &s in slots {
                let d = DartId(next);
                next += 1;
                rotation.push(d);
                match s {
                    Slot::E(e, side) => {
                        assert!(edge_sides.insert((e, side), d).is_none(), "edge side repeated");
                    }
                    Slot::L(tag) => {
                        assert!(loose.insert(tag, d).is_none(), "loose tag repeated");
                    }
                }
            }
            vertices.push(VertexSpec { id: v as u32, kind: self.kinds[v], rotation });
        }
        let mut twins = Vec::new();
        let edges: std::collections::BTreeSet<usize> =
            edge_sides.keys().map(|&(e, _)| e).collect();
        for e in edges {
            let a = edge_sides[&(e, 0)];
            let b = edge_sides
                .get(&(e, 1))
                .unwrap_or_else(|| panic!("edge {e} missing side 1"));
            twins.push((a, *b));
        }
        (
            GraphSpec { vertices, twins, ends: vec![], periodic: None, meta: Meta::default() },
            loose,
        )
    }
}

fn write(name: &str, spec: &GraphSpec) {
    let g = build_graph(spec).unwrap_or_else(|e| panic!("{name}: invalid graph: {e}"));
    let path = format!("corpus/{name}.json");
    std::fs::write(&path, speiser_core::graph::to_json(&g)).unwrap();
    println!("wrote {path}");
}

fn face_sizes(g: &RotationGraph) -> Vec<usize> {
    let f = g.faces();
    let mut sizes: Vec<usize> = f.bounded.iter().map(|b| b.darts.len()).collect();
    sizes.sort();
    sizes
}

const O: VertexKind = VertexKind::Circle;
const X: VertexKind = VertexKind::Cross;

fn exp_ladder() {
    let mut b = Builder::new(&[O, X]);
    b.rot(0, &[Slot::L("a"), Slot::E(0, 0)]);
    b.rot(1, &[Slot::E(0, 1), Slot::L("b")]);
    let (mut spec, loose) = b.resolve();
    spec.ends = vec![
        EndDescriptor { attach: loose["a"], rho1: 1, rho2: 1, first_kind: X },
        EndDescriptor { attach: loose["b"], rho1: 1, rho2: 1, first_kind: O },
    ];
    spec.meta = Meta {
        name: Some("exp-ladder".into()),
        source: Some("index-2 line complex of exp (or tanh): a bi-infinite ladder".into()),
        label_names: BTreeMap::from([(0, "a1".into()), (1, "a2=infinity".into())]),
        infinity_label: Some(1),
        truncated: None,
    };
    let g = build_graph(&spec).unwrap();
    let ends = find_log_ends(&g).unwrap();
    assert_eq!(ends.len(), 2, "exp ladder must have 2 maximal ends");
    let rep = decompose(&g, construct_labelling(&g, 2, DartId(0)).unwrap().consistent().as_ref()).unwrap();
    assert_eq!(rep.nucleus.vertices.len(), 0, "exp ladder nucleus must be empty");
    assert_eq!(rep.counts.p, 2);
    assert_eq!(rep.counts.r, 0);
    write("exp-ladder", &spec);
}

fn airy() {
    let mut b = Builder::new(&[O]);
    b.rot(0, &[Slot::L("a"), Slot::L("b"), Slot::L("c")]);
    let (mut spec, loose) = b.resolve();
    for tag in ["a", "b", "c"] {
        spec.ends.push(EndDescriptor { attach: loose[tag], rho1: 1, rho2: 2, first_kind: X });
    }
    spec.meta = Meta {
        name: Some("airy".into()),
        source: Some("index-3 line complex of Bi/Ai: one circle vertex, three ends".into()),
        label_names: BTreeMap::from([(0, "-i".into()), (1, "i".into()), (2, "infinity".into())]),
        infinity_label: Some(2),
        truncated: None,
    };
    let g = build_graph(&spec).unwrap();
    let l = construct_labelling(&g, 3, DartId(0)).unwrap().consistent().expect("airy labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    assert_eq!(rep.ends.len(), 3);
    assert_eq!(rep.nucleus.vertices.len(), 1);
    assert_eq!(rep.nucleus.loose_darts, 3);
    assert_eq!(rep.counts.p, 3);
    write("airy", &spec);
}

fn w4() {
    // Ten-vertex path with alternating bundle widths 1,2,...,1 and two ends
    // hanging at each terminal vertex.
    let kinds = [O, X, O, X, O, X, O, X, O, X];
    let mut b = Builder::new(&kinds);
    // Edges 0..8 along the path; even index = single, odd = double (pair
    // 2k-1 uses edge ids 100+k for the second copy).
    b.rot(0, &[Slot::E(0, 0), Slot::L("a_up"), Slot::L("a_dn")]);
    b.rot(1, &[Slot::E(0, 1), Slot::E(1, 0), Slot::E(101, 0)]);
    b.rot(2, &[Slot::E(2, 0), Slot::E(101, 1), Slot::E(1, 1)]);
    b.rot(3, &[Slot::E(2, 1), Slot::E(3, 0), Slot::E(103, 0)]);
    b.rot(4, &[Slot::E(4, 0), Slot::E(103, 1), Slot::E(3, 1)]);
    b.rot(5, &[Slot::E(4, 1), Slot::E(5, 0), Slot::E(105, 0)]);
    b.rot(6, &[Slot::E(6, 0), Slot::E(105, 1), Slot::E(5, 1)]);
    b.rot(7, &[Slot::E(6, 1), Slot::E(7, 0), Slot::E(107, 0)]);
    b.rot(8, &[Slot::E(8, 0), Slot::E(107, 1), Slot::E(7, 1)]);
    b.rot(9, &[Slot::E(8, 1), Slot::L("c_dn"), Slot::L("c_up")]);
    let (mut spec, loose) = b.resolve();
    spec.ends = vec![
        EndDescriptor { attach: loose["a_up"], rho1: 1, rho2: 2, first_kind: X },
        EndDescriptor { attach: loose["a_dn"], rho1: 1, rho2: 2, first_kind: X },
        EndDescriptor { attach: loose["c_dn"], rho1: 1, rho2: 2, first_kind: O },
        EndDescriptor { attach: loose["c_up"], rho1: 1, rho2: 2, first_kind: O },
    ];
    spec.meta = Meta {
        name: Some("w4".into()),
        source: Some("index-3 line complex with four ends over three asymptotic values (erfi-type N-function)".into()),
        label_names: BTreeMap::new(),
        infinity_label: None,
        truncated: None,
    };
    let g = build_graph(&spec).unwrap();
    let l = construct_labelling(&g, 3, DartId(0)).unwrap().consistent().expect("w4 labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    assert_eq!(rep.ends.len(), 4, "w4 ends: {:?}", rep.ends);
    assert_eq!(rep.nucleus.vertices.len(), 10, "w4 nucleus: {:?}", rep.nucleus);
    assert_eq!(rep.nucleus.loose_darts, 4);
    assert_eq!(rep.counts.p, 4);
    assert_eq!(rep.counts.r, 0);
    // Exactly one label must flank two of the four unbounded faces.
    let mut counts = BTreeMap::new();
    for e in &rep.divisor.entries {
        if e.multiplicity.is_none() {
            *counts.entry(e.label.unwrap()).or_insert(0) += 1;
        }
    }
    let mut mult: Vec<u32> = counts.values().copied().collect();
    mult.sort();
    assert_eq!(mult, vec![1, 1, 2], "w4 unbounded label multiplicities: {counts:?}");
    let doubled = *counts.iter().find(|(_, &c)| c == 2).unwrap().0;
    let singles: Vec<u32> = counts.iter().filter(|(_, &c)| c == 1).map(|(&l, _)| l).collect();
    let mut spec = spec;
    spec.meta.label_names = BTreeMap::from([
        (doubled, "0".into()),
        (singles[0], "-3i/sqrt(pi)".into()),
        (singles[1], "3i/sqrt(pi)".into()),
    ]);
    write("w4", &spec);
}

fn fig4()
{
    // (a): one circle vertex, four (1,3) ends.
    let mut b = Builder::new(&[O]);
    b.rot(0, &[Slot::L("a"), Slot::L("b"), Slot::L("c"), Slot::L("d")]);
    let (mut spec, loose) = b.resolve();
    for tag in ["a", "b", "c", "d"] {
        spec.ends.push(EndDescriptor { attach: loose[tag], rho1: 1, rho2: 3, first_kind: X });
    }
    spec.meta.name = Some("nev4-a".into());
    spec.meta.source = Some("index-4 line complex, four ends, one-vertex nucleus (Nevanlinna family)".into());
    let g = build_graph(&spec).unwrap();
    let l = construct_labelling(&g, 4, DartId(0)).unwrap().consistent().expect("nev4-a labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    assert_eq!((rep.ends.len(), rep.nucleus.vertices.len()), (4, 1));
    write("nev4-a", &spec);

    // (b): two-vertex nucleus; each vertex hosts a (1,3) and a (2,2) end.
    let mut b = Builder::new(&[O, X]);
    b.rot(0, &[Slot::E(0, 0), Slot::L("a"), Slot::L("b1"), Slot::L("b2")]);
    b.rot(1, &[Slot::E(0, 1), Slot::L("c"), Slot::L("d1"), Slot::L("d2")]);
    let (mut spec, loose) = b.resolve();
    spec.ends = vec![
        EndDescriptor { attach: loose["a"], rho1: 1, rho2: 3, first_kind: X },
        EndDescriptor { attach: loose["b1"], rho1: 2, rho2: 2, first_kind: X },
        EndDescriptor { attach: loose["c"], rho1: 1, rho2: 3, first_kind: O },
        EndDescriptor { attach: loose["d1"], rho1: 2, rho2: 2, first_kind: O },
    ];
    spec.meta.name = Some("nev4-b".into());
    spec.meta.source = Some("index-4 line complex, four ends, two-vertex nucleus (Nevanlinna family)".into());
    let g = build_graph(&spec).unwrap();
    let l = construct_labelling(&g, 4, DartId(0)).unwrap().consistent().expect("nev4-b labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    assert_eq!((rep.ends.len(), rep.nucleus.vertices.len()), (4, 2), "{:?}", rep.ends);
    write("nev4-b", &spec);

    // (c): three-vertex nucleus joined by double edges; the outer vertices
    // host two (1,3) ends each.
    let mut b = Builder::new(&[O, X, O]);
    b.rot(0, &[Slot::E(0, 0), Slot::L("a"), Slot::L("b"), Slot::E(1, 0)]);
    b.rot(1, &[Slot::E(2, 0), Slot::E(0, 1), Slot::E(1, 1), Slot::E(3, 0)]);
    b.rot(2, &[Slot::L("c"), Slot::E(2, 1), Slot::E(3, 1), Slot::L("d")]);
    let (mut spec, loose) = b.resolve();
    for (tag, fk) in [("a", X), ("b", X), ("c", X), ("d", X)] {
        spec.ends.push(EndDescriptor { attach: loose[tag], rho1: 1, rho2: 3, first_kind: fk });
    }
    spec.meta.name = Some("nev4-c".into());
    spec.meta.source = Some("index-4 line complex, four ends, three-vertex nucleus (Nevanlinna family)".into());
    let g = build_graph(&spec).unwrap();
    let l = construct_labelling(&g, 4, DartId(0)).unwrap().consistent().expect("nev4-c labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    assert_eq!((rep.ends.len(), rep.nucleus.vertices.len()), (4, 3), "{:?}", rep.ends);
    assert_eq!(face_sizes(&g), vec![2, 2]);
    write("nev4-c", &spec);

    // (d): index 3, four ends over three labels, two-vertex nucleus.
    let mut b = Builder::new(&[O, X]);
    b.rot(0, &[Slot::E(0, 0), Slot::L("a"), Slot::L("b")]);
    b.rot(1, &[Slot::E(0, 1), Slot::L("c"), Slot::L("d")]);
    let (mut spec, loose) = b.resolve();
    for (tag, fk) in [("a", X), ("b", X), ("c", O), ("d", O)] {
        spec.ends.push(EndDescriptor { attach: loose[tag], rho1: 1, rho2: 2, first_kind: fk });
    }
    spec.meta.name = Some("nev4-d".into());
    spec.meta.source = Some("index-3 line complex with four ends; one asymptotic value doubled".into());
    let g = build_graph(&spec).unwrap();
    let l = construct_labelling(&g, 3, DartId(0)).unwrap().consistent().expect("nev4-d labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    assert_eq!((rep.ends.len(), rep.nucleus.vertices.len()), (4, 2));
    assert_eq!(rep.counts.p, 4);
    write("nev4-d", &spec);

    // (e): insert a digon beside every label-2 edge of (d): a 4-labelled
    // graph whose new label owns only digons.
    let (ge, le) = speiser_core::labelling::insert_digon_label(&g, &l, 2).expect("insert digons");
    let verdict = speiser_core::labelling::verify_labelling(&ge, &le);
    assert!(verdict.order_violations.is_empty() && verdict.twin_violations.is_empty());
    assert_eq!(verdict.minimality_failures, vec![3], "nev4-e must fail minimality at the new label");
    let mut espec = to_spec(&ge);
    espec.meta.name = Some("nev4-e".into());
    espec.meta.source = Some(
        "4-labelled graph from nev4-d with a digon inserted at every vertex: the extra label has no non-digon face"
            .into(),
    );
    write("nev4-e", &espec);
    let lspec = speiser_core::labelling::labelling_to_spec(&le);
    std::fs::write("corpus/nev4-e.labels.json", serde_json::to_string_pretty(&lspec).unwrap()).unwrap();
    // Forgetting the bad label must give (d) back.
    let (gd, _) = speiser_core::labelling::forget_digon_label(&ge, &le, 3).unwrap();
    assert!(gd.is_isomorphic(&g), "forgetting the inserted label must restore nev4-d");
}

fn eph() {
    // Lattice quad + bridge + pocket tree, one (2,2) end in the middle.
    let kinds = [O, O, O, O, O, O, X, X, X, X, X, X];
    // 0 o1, 1 o2, 2 m, 3 p1, 4 p2, 5 p3; 6 x1, 7 x2, 8 t, 9 c1, 10 c2, 11 c3.
    let mut b = Builder::new(&kinds);
    b.rot(0, &[Slot::E(0, 0), Slot::E(1, 0)]); // o1: x1, x2
    b.rot(1, &[Slot::E(2, 0), Slot::E(3, 0)]); // o2: x2, x1
    b.rot(2, &[Slot::E(4, 0), Slot::L("e1"), Slot::L("e2"), Slot::E(5, 0)]); // m: x1, end, end, t
    b.rot(3, &[Slot::E(6, 0), Slot::E(7, 0), Slot::E(8, 0)]); // p1: t, c1, c1
    b.rot(4, &[Slot::E(9, 0), Slot::E(10, 0), Slot::E(11, 0)]); // p2: t, c2, c2
    b.rot(5, &[Slot::E(12, 0), Slot::E(13, 0), Slot::E(14, 0)]); // p3: t, c3, c3
    b.rot(6, &[Slot::E(0, 1), Slot::E(4, 1), Slot::E(3, 1)]); // x1: o1, m, o2
    b.rot(7, &[Slot::E(2, 1), Slot::E(1, 1)]); // x2: o2, o1
    b.rot(8, &[Slot::E(5, 1), Slot::E(12, 1), Slot::E(9, 1), Slot::E(6, 1)]); // t: m, p3, p2, p1
    b.rot(9, &[Slot::E(7, 1), Slot::E(8, 1)]); // c1 hmm mirrored pair
    b.rot(10, &[Slot::E(10, 1), Slot::E(11, 1)]);
    b.rot(11, &[Slot::E(13, 1), Slot::E(14, 1)]);
    let (mut spec, loose) = b.resolve();
    spec.ends = vec![EndDescriptor { attach: loose["e1"], rho1: 2, rho2: 2, first_kind: X }];
    spec.meta = Meta {
        name: Some("eph".into()),
        source: Some("window into a line complex mixing lattice, single-end and tree behavior".into()),
        label_names: BTreeMap::new(),
        infinity_label: None,
        truncated: Some(true),
    };
    let g = build_graph(&spec).unwrap();
    let rep = decompose(&g, None).unwrap();
    assert_eq!(rep.ends.len(), 1, "eph must expose exactly one end");
    assert!(rep.tags.is_empty());
    write("eph", &spec);
}

/// Exhaustive rotation search: given per-vertex dart groupings (edge slots),
/// find rotations whose faces have the target size multiset.
fn search_rotations(
    kinds: &[VertexKind],
    edges: &[(usize, usize)],
    target_faces: &[usize],
) -> Option<GraphSpec> {
    // Darts: edge i side 0 at edges[i].0, side 1 at edges[i].1.
    let nv = kinds.len();
    let mut darts_at: Vec<Vec<(usize, u8)>> = vec![Vec::new(); nv];
    for (i, &(u, v)) in edges.iter().enumerate() {
        darts_at[u].push((i, 0));
        darts_at[v].push((i, 1));
    }
    // Permutations per vertex, first dart fixed to kill cyclic symmetry.
    fn perms(items: &[(usize, u8)]) -> Vec<Vec<(usize, u8)>> {
        if items.len() <= 2 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        let rest: Vec<_> = items[1..].to_vec();
        permute(&rest, &mut Vec::new(), &mut |p| {
            let mut v = vec![items[0]];
            v.extend_from_slice(p);
            out.push(v);
        });
        out
    }
    fn permute(items: &[(usize, u8)], cur: &mut Vec<(usize, u8)>, f: &mut dyn FnMut(&[(usize, u8)])) {
        if items.is_empty() {
            f(cur);
            return;
        }
        for (i, &x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            cur.push(x);
            permute(&rest, cur, f);
            cur.pop();
        }
    }
    let choices: Vec<Vec<Vec<(usize, u8)>>> = darts_at.iter().map(|d| perms(d)).collect();
    let mut idx = vec![0usize; nv];
    let mut target = target_faces.to_vec();
    target.sort();
    loop {
        // Assemble and test.
        let mut b = Builder::new(kinds);
        for v in 0..nv {
            let slots: Vec<Slot> = choices[v][idx[v]].iter().map(|&(e, s)| Slot::E(e, s)).collect();
            b.rot(v, &slots);
        }
        let (spec, _) = b.resolve();
        if let Ok(g) = build_graph(&spec) {
            let mut sizes = face_sizes(&g);
            sizes.sort();
            if sizes == target && g.map().euler_characteristic() == 2 {
                return Some(spec);
            }
        }
        // Next index vector.
        let mut v = 0;
        loop {
            if v == nv {
                return None;
            }
            idx[v] += 1;
            if idx[v] < choices[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

fn thurston_fig10() {
    // Pre-Speiser graph dual to Thurston's tessellation with 2,3,4,5-gon
    // tiles: 8 vertices, 12 edges, six quadrilateral faces, largest valence
    // 5, extendable at both q=5 and q=6.
    let kinds = [O, O, O, O, X, X, X, X];
    // Candidate degree matrices: circle valences (5,3,2,2), cross (4,3,3,2).
    let circle_deg = [5usize, 3, 2, 2];
    let cross_deg = [4usize, 3, 3, 2];
    let mats = degree_matrices(&circle_deg, &cross_deg);
    println!("fig10: {} candidate degree matrices", mats.len());
    for mat in mats {
        let mut edges = Vec::new();
        for (i, row) in mat.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                for _ in 0..m {
                    edges.push((i, 4 + j));
                }
            }
        }
        if edges.len() != 12 {
            continue;
        }
        if let Some(spec) = search_rotations(&kinds, &edges, &[4, 4, 4, 4, 4, 4]) {
            let g = build_graph(&spec).unwrap();
            let b = q_bounds(&g).unwrap();
            if (b.q_min, b.q_max) != (5, Some(6)) {
                continue;
            }
            let p5 = solve_extension(&g, 5).unwrap();
            let p6 = solve_extension(&g, 6).unwrap();
            let (ExtensionPlan::Feasible { .. }, ExtensionPlan::Feasible { .. }) = (&p5, &p6)
            else {
                println!("  candidate infeasible at 5 or 6, skipping");
                continue;
            };
            let a5 = speiser_core::extension::apply_extension(&g, &p5).unwrap();
            let a6 = speiser_core::extension::apply_extension(&g, &p6).unwrap();
            let ok5 = matches!(a5.labelling, Ok(ConstructOutcome::Consistent(_)));
            let ok6 = matches!(a6.labelling, Ok(ConstructOutcome::Consistent(_)));
            println!("  candidate: labels at 5: {ok5}, at 6: {ok6}");
            if !(ok5 && ok6) {
                continue;
            }
            let mut spec = spec;
            spec.meta.name = Some("thurston-fig10".into());
            spec.meta.source = Some(
                "dual of the degree-4 tessellation with 2-,3-,4-,5-gon tiles attributed to Thurston (Koch and Tan Lei, fig. 10)"
                    .into(),
            );
            write("thurston-fig10", &spec);
            // Resolutions.
            let mut s5 = to_spec(&a5.graph);
            s5.meta.name = Some("thurston-fig10-q5".into());
            s5.meta.source = Some("index-5 extension of thurston-fig10".into());
            write("thurston-fig10-q5", &s5);
            let mut s6 = to_spec(&a6.graph);
            s6.meta.name = Some("thurston-fig10-q6".into());
            s6.meta.source = Some("index-6 extension of thurston-fig10 (generic degree-4 rational)".into());
            write("thurston-fig10-q6", &s6);
            // The historical labelled 6-regular graph: insert a digon beside
            // every label-3 edge of the q=5 resolution; the new label (value
            // w5 in 1-based naming) owns only digons.
            let l5 = match construct_labelling(&a5.graph, 5, DartId(0)).unwrap() {
                ConstructOutcome::Consistent(l) => l,
                _ => unreachable!(),
            };
            let (ge, le) = speiser_core::labelling::insert_digon_label(&a5.graph, &l5, 3).unwrap();
            let verdict = speiser_core::labelling::verify_labelling(&ge, &le);
            assert!(verdict.order_violations.is_empty());
            assert_eq!(verdict.minimality_failures, vec![4]);
            let (back, _) = speiser_core::labelling::forget_digon_label(&ge, &le, 4).unwrap();
            assert!(back.is_isomorphic(&a5.graph));
            let mut especs = to_spec(&ge);
            especs.meta.name = Some("thurston-fig10-labelled6".into());
            especs.meta.source =
                Some("6-regular labelled graph whose fifth label owns only digons (Thurston's figure-10 labelling)".into());
            especs.meta.label_names =
                (0..6).map(|i| (i as u32, format!("w{}", i + 1))).collect();
            write("thurston-fig10-labelled6", &especs);
            let lspec = speiser_core::labelling::labelling_to_spec(&le);
            std::fs::write(
                "corpus/thurston-fig10-labelled6.labels.json",
                serde_json::to_string_pretty(&lspec).unwrap(),
            )
            .unwrap();
            return;
        }
    }
    panic!("no fig10 candidate found");
}

fn degree_matrices(rows: &[usize], cols: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let nr = rows.len();
    let nc = cols.len();
    let mut mat = vec![vec![0usize; nc]; nr];
    fn rec(
        mat: &mut Vec<Vec<usize>>,
        rows: &[usize],
        cols: &[usize],
        r: usize,
        c: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let nr = rows.len();
        let nc = cols.len();
        if r == nr {
            if (0..nc).all(|j| (0..nr).map(|i| mat[i][j]).sum::<usize>() == cols[j]) {
                out.push(mat.clone());
            }
            return;
        }
        if c == nc {
            if mat[r].iter().sum::<usize>() == rows[r] {
                rec(mat, rows, cols, r + 1, 0, out);
            }
            return;
        }
        let row_used: usize = mat[r][..c].iter().sum();
        let col_used: usize = (0..r).map(|i| mat[i][c]).sum();
        let max = (rows[r] - row_used).min(cols[c].saturating_sub(col_used));
        for m in 0..=max {
            mat[r][c] = m;
            rec(mat, rows, cols, r, c + 1, out);
        }
        mat[r][c] = 0;
    }
    rec(&mut mat, rows, cols, 0, 0, &mut out);
    out
}

fn no_local_balance() {
    // Pocket of two cross vertices reachable only through two pole circles;
    // globally balanced but the pocket starves at every index.
    let kinds = [O, O, O, O, O, X, X, X, X, X];
    // 0..4 = o1..o5, 5..9 = x1..x5.
    // Edges: poles o4 (id 3), o5 (id 4); pocket x2 (6), x3 (7); hub x1 (5);
    // ring through x1: o1 (0), x4 (8), o2 (1), x5 (9), o3 (2).
    let edges = vec![
        (3, 6), // g1 o4-x2
        (3, 6), // g2
        (4, 6), // g3 o5-x2
        (4, 7), // g4 o5-x3
        (4, 7), // g5
        (3, 7), // g6 o4-x3
        (3, 5), // p1 o4-x1
        (3, 5), // p2
        (4, 5), // p3 o5-x1
        (4, 8), // a0 o5-x4
        (0, 5), // r1 o1-x1
        (0, 8), // r2 o1-x4
        (1, 8), // r3 o2-x4
        (1, 9), // r4 o2-x5
        (2, 9), // r5 o3-x5
        (2, 5), // r6 o3-x1
    ];
    let target = [2, 2, 2, 4, 4, 6, 6, 6];
    let spec = search_rotations(&kinds, &edges, &target).expect("no-local-balance embedding");
    let mut spec = spec;
    spec.meta.name = Some("no-local-balance".into());
    spec.meta.source = Some(
        "globally balanced pre-Speiser graph whose two inner cross vertices violate the neighborhood inequality at every index"
            .into(),
    );
    let g = build_graph(&spec).unwrap();
    let b = q_bounds(&g).unwrap();
    println!("no-local-balance bounds: {b:?}");
    assert_eq!(b.q_min, 5);
    for q in 5..=8 {
        let prof = speiser_core::extension::deficiencies(&g, q).unwrap();
        let bal = speiser_core::extension::global_balance(&g, &prof);
        assert!(bal.balanced, "q={q} must be globally balanced");
        let plan = solve_extension(&g, q).unwrap();
        let w = plan.witness().unwrap_or_else(|| panic!("q={q} must be infeasible"));
        assert_eq!(w.side, X, "q={q} witness side");
        assert_eq!(w.set.len(), 2, "q={q} witness size: {w:?}");
    }
    let w = speiser_core::extension::hall_witness_search(&g, 7, 3).unwrap().unwrap();
    assert_eq!(w.set.len(), 2, "search witness at q=7: {w:?}");
    write("no-local-balance", &spec);
}

fn periodic_graphs() {
    // exp of exp: two-vertex motif, one up end, one down end, seam width 1.
    let mut b = Builder::new(&[O, X]);
    b.rot(0, &[Slot::L("in"), Slot::L("up"), Slot::E(0, 0)]);
    b.rot(1, &[Slot::E(0, 1), Slot::L("dn"), Slot::L("out")]);
    let (mut spec, loose) = b.resolve();
    spec.ends = vec![
        EndDescriptor { attach: loose["up"], rho1: 1, rho2: 2, first_kind: X },
        EndDescriptor { attach: loose["dn"], rho1: 1, rho2: 2, first_kind: O },
    ];
    spec.periodic = Some(PeriodicSeam { outgoing: vec![loose["out"]], incoming: vec![loose["in"]] });
    spec.meta.name = Some("exp-exp".into());
    spec.meta.source = Some("periodic motif of the index-3 line complex of exp(exp z)".into());
    let g = build_graph(&spec).unwrap();
    let l = construct_labelling(&g, 3, DartId(0)).unwrap().consistent().expect("exp-exp labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    println!("exp-exp: p={} r={} shift={}", rep.counts.p, rep.counts.r, l.shift);
    assert!(rep.counts.per_period);
    write("exp-exp", &spec);

    // exp(sin z): square tile + two (2,2) ends per period; the chain to the
    // next period runs through a cross vertex w so the seam stays bipartite.
    let mut b = Builder::new(&[O, X, O, X, X]);
    // 0 a (west), 1 t (north), 2 c (east), 3 b (south), 4 w (chain).
    b.rot(0, &[Slot::E(0, 0), Slot::L("in1"), Slot::L("in2"), Slot::E(3, 0)]); // a: t, in, in, b
    b.rot(1, &[Slot::E(1, 0), Slot::L("u1"), Slot::L("u2"), Slot::E(0, 1)]); // t: c, up, up, a
    b.rot(2, &[Slot::E(2, 0), Slot::E(4, 0), Slot::E(5, 0), Slot::E(1, 1)]); // c: b, w, w, t
    b.rot(3, &[Slot::E(3, 1), Slot::L("d1"), Slot::L("d2"), Slot::E(2, 1)]); // b: a, dn, dn, c
    b.rot(4, &[Slot::E(5, 1), Slot::E(4, 1), Slot::L("o1"), Slot::L("o2")]); // w: c, c, out, out
    let (mut spec, loose) = b.resolve();
    spec.ends = vec![
        EndDescriptor { attach: loose["u1"], rho1: 2, rho2: 2, first_kind: O },
        EndDescriptor { attach: loose["d1"], rho1: 2, rho2: 2, first_kind: O },
    ];
    spec.periodic = Some(PeriodicSeam {
        outgoing: vec![loose["o1"], loose["o2"]],
        incoming: vec![loose["in2"], loose["in1"]],
    });
    spec.meta.name = Some("exp-sin".into());
    spec.meta.source = Some("periodic motif of the index-4 line complex of exp(sin z)".into());
    let g = build_graph(&spec).unwrap();
    let l = construct_labelling(&g, 4, DartId(0)).unwrap().consistent().expect("exp-sin labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    println!(
        "exp-sin: p={} r={} shift={} tags={:?}",
        rep.counts.p, rep.counts.r, l.shift, rep.tags
    );
    assert!(rep
        .divisor
        .entries
        .iter()
        .any(|e| e.multiplicity == Some(2)), "exp-sin needs a 4-gon");
    assert!(!rep.tags.contains(&speiser_core::decomposition::StructureTag::FiniteSpeiser));
    write("exp-sin", &spec);

    // sin(z) exp(sin z): octagon + square per period.
    let kinds = [O, O, O, O, O, O, X, X, X, X, X, X, X];
    // 0 A,1 B,2 C,3 D,4 E,5 F; 6 P,7 Q,8 R,9 S,10 T,11 U,12 W.
    let mut b = Builder::new(&kinds);
    // Octagon A-P-B-Q-C-R-D-S, edges 0..7; square E-T-F-U edges 8..11;
    // bridge Q=E double edges 12,13; chain F=W double 14,15; seam W->A.
    b.rot(0, &[Slot::E(0, 0), Slot::L("in1"), Slot::L("in2"), Slot::E(7, 1)]); // A: P, in, in, S
    b.rot(1, &[Slot::E(2, 0), Slot::L("bu1"), Slot::L("bu2"), Slot::E(1, 1)]); // B: Q, up, up, P
    b.rot(2, &[Slot::E(3, 1), Slot::E(4, 0), Slot::L("cd1"), Slot::L("cd2")]); // C: Q, R, dn, dn
    b.rot(3, &[Slot::E(6, 0), Slot::L("du1"), Slot::L("du2"), Slot::E(5, 1)]); // D: S, up, up, R
    b.rot(4, &[Slot::E(8, 0), Slot::E(13, 1), Slot::E(12, 1), Slot::E(11, 1)]); // E: T, Q, Q, U
    b.rot(5, &[Slot::E(9, 1), Slot::E(10, 0), Slot::E(14, 0), Slot::E(15, 0)]); // F: T, U, W, W
    b.rot(6, &[Slot::E(1, 0), Slot::L("pu1"), Slot::L("pu2"), Slot::E(0, 1)]); // P: B, up, up, A
    b.rot(7, &[Slot::E(3, 0), Slot::E(12, 0), Slot::E(13, 0), Slot::E(2, 1)]); // Q: C, E, E, B
    b.rot(8, &[Slot::E(5, 0), Slot::L("rd1"), Slot::L("rd2"), Slot::E(4, 1)]); // R: D, dn, dn, C
    b.rot(9, &[Slot::E(7, 0), Slot::L("sd1"), Slot::L("sd2"), Slot::E(6, 1)]); // S: A, dn, dn, D
    b.rot(10, &[Slot::E(9, 0), Slot::L("tu1"), Slot::L("tu2"), Slot::E(8, 1)]); // T: F, up, up, E
    b.rot(11, &[Slot::E(11, 0), Slot::L("ud1"), Slot::L("ud2"), Slot::E(10, 1)]); // U: E, dn, dn, F
    b.rot(12, &[Slot::E(15, 1), Slot::E(14, 1), Slot::L("o1"), Slot::L("o2")]); // W: F, F, out, out
    let (mut spec, loose) = b.resolve();
    for (tag, fk) in [
        ("bu1", X), ("cd1", X), ("du1", X), ("pu1", O), ("rd1", O), ("sd1", O), ("tu1", O), ("ud1", O),
    ] {
        spec.ends.push(EndDescriptor { attach: loose[tag], rho1: 2, rho2: 2, first_kind: fk });
    }
    spec.periodic = Some(PeriodicSeam {
        outgoing: vec![loose["o1"], loose["o2"]],
        incoming: vec![loose["in2"], loose["in1"]],
    });
    spec.meta.name = Some("sin-exp-sin".into());
    spec.meta.source = Some("periodic motif of the index-4 line complex of sin(z)exp(sin z)".into());
    let g = build_graph(&spec).unwrap();
    let l = construct_labelling(&g, 4, DartId(0)).unwrap().consistent().expect("sin-exp-sin labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    let has8 = rep.divisor.entries.iter().any(|e| e.multiplicity == Some(4));
    let has4 = rep.divisor.entries.iter().any(|e| e.multiplicity == Some(2));
    println!("sin-exp-sin: p={} r={} 8gon={has8} 4gon={has4}", rep.counts.p, rep.counts.r);
    assert!(has8 && has4);
    write("sin-exp-sin", &spec);

    // sin(z^2)-like: unbounded faces but no logarithmic ends. A 3-regular
    // chain: one square tile per period, joined to its neighbors by short
    // digon-bead strings, so 4-gons and digons separate the two unbounded
    // faces and no semi-infinite ladder exists.
    let kinds = [O, O, O, O, X, X, X, X];
    // 0 a (west), 1 b (east), 2 o1, 3 o2; 4 p (north), 5 q (south), 6 x1, 7 x3.
    let mut b = Builder::new(&kinds);
    b.rot(0, &[Slot::E(0, 0), Slot::L("in_a"), Slot::E(3, 1)]); // a: p, in, q
    b.rot(1, &[Slot::E(2, 0), Slot::E(4, 0), Slot::E(1, 1)]); // b: q, x1, p
    b.rot(2, &[Slot::E(6, 1), Slot::E(5, 1), Slot::L("out_o1")]); // o1: x1, x1, out
    b.rot(3, &[Slot::E(7, 1), Slot::E(8, 0), Slot::E(9, 0)]); // o2: p, x3, x3
    b.rot(4, &[Slot::E(1, 0), Slot::E(7, 0), Slot::E(0, 1)]); // p: b, o2, a
    b.rot(5, &[Slot::E(3, 0), Slot::L("in_q"), Slot::E(2, 1)]); // q: a, in, b
    b.rot(6, &[Slot::E(4, 1), Slot::E(5, 0), Slot::E(6, 0)]); // x1: b, o1, o1
    b.rot(7, &[Slot::E(9, 1), Slot::E(8, 1), Slot::L("out_x3")]); // x3: o2, o2, out
    let (mut spec, loose) = b.resolve();
    spec.periodic = Some(PeriodicSeam {
        outgoing: vec![loose["out_o1"], loose["out_x3"]],
        incoming: vec![loose["in_q"], loose["in_a"]],
    });
    spec.meta.name = Some("sin-z2".into());
    spec.meta.source = Some("periodic motif of an index-3 line complex whose unbounded faces are separated by 4-gons and digons (sin z^2-type)".into());
    let g = build_graph(&spec).unwrap();
    let ends = find_log_ends(&g).unwrap();
    assert!(ends.is_empty(), "sin-z2 has no logarithmic ends");
    let l = construct_labelling(&g, 3, DartId(0)).unwrap().consistent().expect("sin-z2 labels");
    let rep = decompose(&g, Some(&l)).unwrap();
    println!("sin-z2: p={} r={}", rep.counts.p, rep.counts.r);
    write("sin-z2", &spec);
}

fn main() {
    std::fs::create_dir_all("corpus").unwrap();
    exp_ladder();
    airy();
    w4();
    fig4();
    eph();
    no_local_balance();
    thurston_fig10();
    periodic_graphs();
    if std::env::var("DUMP").is_ok() {
        dump_summaries();
    }
    println!("done");
}


#[allow(dead_code)]
fn dump_summaries() {
    let dir = std::path::Path::new("corpus");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| {
            let n = e.unwrap().file_name().into_string().unwrap();
            (n.ends_with(".json") && !n.ends_with(".labels.json") && n != "manifest.json").then_some(n)
        })
        .collect();
    names.sort();
    for n in names {
        let g = speiser_core::corpus::load_graph(dir, &n).unwrap();
        let lab = n.replace(".json", ".labels.json");
        let lab_text = std::fs::read_to_string(dir.join(&lab)).ok();
        let s = speiser_core::corpus::summarize(&g, lab_text.as_deref());
        println!("=== {n}");
        println!("{}", serde_json::to_string_pretty(&s).unwrap());
    }
}
