//! DOT and SVG emission.
//!
//! Figures are schematic: the nucleus is laid out on concentric circles at
//! the center and each logarithmic end becomes a ray of three drawn ladder
//! periods. Nucleus edges are red, end edges black. Coordinates are integer
//! fixed-point so output bytes are stable across runs.

use std::fmt::Write as _;

use crate::decomposition::{find_log_ends, nucleus};
use crate::graph::{RotationGraph, VertexKind};
use crate::map::VertexId;

#[derive(Debug, Clone, thiserror::Error)]
pub enum RenderError {
    #[error("periodic graphs render one motif only; pass the unrolled graph to draw more")]
    UnsupportedPeriodic,
    #[error("decomposition failed: {0}")]
    Decomposition(String),
}

/// Graphviz DOT output; every parallel edge is emitted separately so edge
/// counts can be checked by reparsing.
pub fn to_dot(g: &RotationGraph) -> String {
    let mut out = String::new();
    let name = g.meta().name.clone().unwrap_or_else(|| "speiser".into());
    let _ = writeln!(out, "graph \"{}\" {{", name.replace('"', "'"));
    let _ = writeln!(out, "  layout=neato;");
    for v in g.map().vertices() {
        let (shape, label) = match g.kind(v) {
            VertexKind::Circle => ("circle", "o"),
            VertexKind::Cross => ("box", "x"),
        };
        let _ = writeln!(out, "  v{} [shape={shape},label=\"{label}{}\"];", v.0, v.0);
    }
    for d in g.map().darts() {
        if let Some(t) = g.map().twin(d) {
            if d < t {
                let u = g.map().vertex_of(d);
                let w = g.map().vertex_of(t);
                let _ = writeln!(out, "  v{} -- v{};", u.0, w.0);
            }
        }
    }
    for (i, e) in g.ends().iter().enumerate() {
        let u = g.map().vertex_of(e.attach);
        let _ = writeln!(
            out,
            "  end{i} [shape=plaintext,label=\"end {i} ({}:{})\"];",
            e.rho1, e.rho2
        );
        let _ = writeln!(out, "  v{} -- end{i} [style=dashed];", u.0);
    }
    if g.periodic().is_some() {
        let _ = writeln!(out, "  seam [shape=plaintext,label=\"... repeats ...\"];");
    }
    let _ = writeln!(out, "}}");
    out
}

/// Fixed-point coordinate in hundredths.
fn fx(x: i64) -> String {
    format!("{}.{:02}", x / 100, (x % 100).abs())
}

/// Integer cosine/sine table lookup for 1/100 turns.
fn circle_point(cx: i64, cy: i64, radius: i64, turn_hundredths: i64) -> (i64, i64) {
    // Coarse trigonometry on a 100-step circle; precision is irrelevant for
    // a schematic but the values must be deterministic integers.
    let angle = (turn_hundredths.rem_euclid(100)) as f64 / 100.0 * std::f64::consts::TAU;
    let x = cx + (radius as f64 * angle.cos()).round() as i64;
    let y = cy + (radius as f64 * angle.sin()).round() as i64;
    (x, y)
}

/// Schematic SVG: nucleus centered, ends as rays.
pub fn to_svg(g: &RotationGraph) -> Result<String, RenderError> {
    if g.periodic().is_some() {
        return Err(RenderError::UnsupportedPeriodic);
    }
    let ends = find_log_ends(g).map_err(|e| RenderError::Decomposition(e.to_string()))?;
    let nuc = nucleus(g, &ends);
    let mut absorbed_by: Vec<Option<usize>> = vec![None; g.map().vertex_count()];
    for (i, e) in ends.iter().enumerate() {
        for &v in &e.absorbed {
            absorbed_by[v.idx()] = Some(i);
        }
    }
    let center = (50_00i64, 50_00i64);
    let mut pos: Vec<(i64, i64)> = vec![(0, 0); g.map().vertex_count()];
    let n_core = nuc.vertices.len().max(1) as i64;
    for (i, &v) in nuc.vertices.iter().enumerate() {
        pos[v.idx()] = if nuc.vertices.len() == 1 {
            center
        } else {
            circle_point(center.0, center.1, 12_00, i as i64 * 100 / n_core)
        };
    }
    // Ends radiate outward; absorbed core vertices line up along their ray.
    let n_ends = ends.len().max(1) as i64;
    let mut ray_points: Vec<Vec<(i64, i64)>> = Vec::new();
    for (i, e) in ends.iter().enumerate() {
        let turn = i as i64 * 100 / n_ends;
        for (k, &v) in e.absorbed.iter().rev().enumerate() {
            pos[v.idx()] = circle_point(center.0, center.1, 18_00 + 6_00 * k as i64, turn);
        }
        let base = 18_00 + 6_00 * e.absorbed.len() as i64;
        let ray: Vec<(i64, i64)> = (0..6)
            .map(|k| circle_point(center.0, center.1, base + 5_00 * k, turn))
            .collect();
        ray_points.push(ray);
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 100 100\" width=\"480\" height=\"480\">"
    );
    let in_nucleus = |v: VertexId| absorbed_by[v.idx()].is_none();
    for d in g.map().darts() {
        if let Some(t) = g.map().twin(d) {
            if d < t {
                let u = g.map().vertex_of(d);
                let w = g.map().vertex_of(t);
                let color = if in_nucleus(u) && in_nucleus(w) { "#cc0000" } else { "#000000" };
                let (x1, y1) = pos[u.idx()];
                let (x2, y2) = pos[w.idx()];
                let _ = writeln!(
                    out,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"0.4\"/>",
                    fx(x1), fx(y1), fx(x2), fx(y2)
                );
            }
        }
    }
    for (i, ray) in ray_points.iter().enumerate() {
        for w in ray.windows(2) {
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-width=\"0.4\" stroke-dasharray=\"1,1\"/>",
                fx(w[0].0), fx(w[0].1), fx(w[1].0), fx(w[1].1)
            );
        }
        let last = ray.last().unwrap();
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"2.5\">end {i}</text>",
            fx(last.0), fx(last.1)
        );
    }
    for v in g.map().vertices() {
        let (x, y) = pos[v.idx()];
        match g.kind(v) {
            VertexKind::Circle => {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"1.2\" fill=\"white\" stroke=\"black\" stroke-width=\"0.3\"/>",
                    fx(x), fx(y)
                );
            }
            VertexKind::Cross => {
                let _ = writeln!(
                    out,
                    "<g stroke=\"black\" stroke-width=\"0.3\"><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/></g>",
                    fx(x - 100), fx(y - 100), fx(x + 100), fx(y + 100),
                    fx(x - 100), fx(y + 100), fx(x + 100), fx(y - 100)
                );
            }
        }
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
