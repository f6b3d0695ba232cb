//! Polyline simplification: the normalized free-space event graph with its
//! 0/1-weight min-link path, global min-k / min-ε simplification in three
//! vertex modes, the bi-criteria dynamic program, and two baseline
//! simplifiers (greedy disk sweep and the local shortcut-graph method).

mod bicriteria;
mod event_graph;

pub use bicriteria::bicriteria_simplify;
pub use event_graph::{
    build_event_graph, min_link_path, BoundaryClass, EventEdge, EventGraph, EventNode,
};

use crate::frechet::frechet_distance;
use crate::geom::{
    ball_segment_intersection, point_segment_distance, segment_intersection, GeomError, Point,
    Polyline, Segment, Tolerance,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimplifyError {
    #[error("event graph is empty: source or sink is blocked")]
    EmptyGraph,
    #[error("no monotone path exists in the event graph")]
    Unreachable,
    #[error("FAILED")]
    Failed,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Which points may serve as vertices of a simplification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexMode {
    /// Vertices of the input curves.
    InputVertices,
    /// Vertices of one designated curve only.
    OneCurveVertices,
    /// Any point of the Euclidean plane (realised through event points).
    AnyPlanePoint,
}

/// A simplification together with its link count and recomputed error.
#[derive(Debug, Clone)]
pub struct SimplificationResult {
    pub curve: Polyline,
    /// Number of segments of `curve`.
    pub links: usize,
    /// Fréchet distance from `curve` to the original, recomputed post-hoc.
    pub achieved_eps: f64,
    pub mode: VertexMode,
    /// Event-graph nodes (after merging) used to produce the result.
    pub events: usize,
}

impl SimplificationResult {
    fn from_curve(
        curve: Polyline,
        original: &Polyline,
        mode: VertexMode,
        events: usize,
        tol: &Tolerance,
    ) -> Self {
        let achieved = frechet_distance(&curve, original, tol);
        let links = curve.num_edges();
        SimplificationResult { curve, links, achieved_eps: achieved, mode, events }
    }
}

/// Decides whether the segment `a -> b`, with `a` matched to arc position
/// `s0` and `b` to `s1` on `curve`, admits a monotone matching to the
/// sub-curve `curve[s0..s1]` with every pair within `eps`.
///
/// Exact single-edge free-space propagation: the matching must cross the
/// disk of each interior vertex in a non-decreasing parameter order, and
/// between crossings the free set inside a cell is convex.
pub(crate) fn shortcut_feasible(
    a: Point,
    b: Point,
    curve: &Polyline,
    s0: f64,
    s1: f64,
    eps: f64,
    tol: &Tolerance,
) -> bool {
    let slack = tol.slack(eps);
    if a.dist(curve.point_at_arc(s0)) > eps + slack {
        return false;
    }
    if b.dist(curve.point_at_arc(s1)) > eps + slack {
        return false;
    }
    let seg = Segment::new(a, b);
    let mut lo_run = 0.0f64;
    for v in curve.vertices_strictly_inside(s0, s1) {
        match ball_segment_intersection(curve.vertex(v), eps, seg) {
            None => return false,
            Some((lo, hi)) => {
                lo_run = lo_run.max(lo);
                if lo_run > hi + 1e-9 {
                    return false;
                }
            }
        }
    }
    true
}

/// A candidate shortcut line or segment feeding event-point generation.
#[derive(Debug, Clone, Copy)]
pub struct Shortcut {
    pub seg: Segment,
    pub kind: ShortcutKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShortcutKind {
    /// Segment between two allowed vertices.
    Direct,
    /// Forward extension of a direct shortcut beyond its later endpoint.
    Extension,
    /// Reflected continuation of a shortcut across an edge it crosses.
    Reflection,
}

/// Candidate shortcuts for the given mode. `InputVertices` yields all
/// segments between vertex pairs of the allowed vertex set;
/// `OneCurveVertices` restricts to the designated curve `p`;
/// `AnyPlanePoint` adds forward extensions through previous vertices and
/// reflected continuations where a shortcut crosses an edge.
pub fn shortcut_candidates(p: &Polyline, q: &Polyline, mode: VertexMode) -> Vec<Shortcut> {
    let mut verts: Vec<Point> = p.vertices().to_vec();
    if mode != VertexMode::OneCurveVertices && q != p {
        verts.extend_from_slice(q.vertices());
    }
    let mut out = Vec::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            out.push(Shortcut { seg: Segment::new(verts[i], verts[j]), kind: ShortcutKind::Direct });
        }
    }
    if mode == VertexMode::AnyPlanePoint {
        let reach = p.length().max(q.length());
        let direct: Vec<Segment> = out.iter().map(|s| s.seg).collect();
        for seg in &direct {
            if let Some(u) = (seg.b - seg.a).unit() {
                out.push(Shortcut {
                    seg: Segment::new(seg.b, seg.b + u.scale(reach)),
                    kind: ShortcutKind::Extension,
                });
            }
        }
        for seg in &direct {
            let d = match (seg.b - seg.a).unit() {
                Some(d) => d,
                None => continue,
            };
            for e in 0..q.num_edges() {
                let edge = q.edge(e);
                if let Some((ts, te)) = segment_intersection(*seg, edge) {
                    if ts <= 1e-9 || ts >= 1.0 - 1e-9 || te <= 1e-9 || te >= 1.0 - 1e-9 {
                        continue;
                    }
                    let x = seg.point_at(ts);
                    let u = match (edge.b - edge.a).unit() {
                        Some(u) => u,
                        None => continue,
                    };
                    // reflect the shortcut direction across the edge
                    let dot = d.dot(u);
                    let r = u.scale(2.0 * dot);
                    let rd = crate::geom::Vec2 { x: r.x - d.x, y: r.y - d.y };
                    let rest = seg.b.dist(x);
                    if rest > 1e-12 {
                        out.push(Shortcut {
                            seg: Segment::new(x, x + rd.scale(rest)),
                            kind: ShortcutKind::Reflection,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Globally optimal min-k simplification of `p` at error `eps`: the
/// shortest path of the event graph of `p` against itself, mapped back to
/// the plane.
pub fn min_k_simplify(
    p: &Polyline,
    eps: f64,
    mode: VertexMode,
    tol: &Tolerance,
) -> Result<SimplificationResult, SimplifyError> {
    let graph = build_event_graph(p, p, eps, mode, tol)?;
    let path = min_link_path(&graph)?;
    let events = graph.nodes.len();
    let mut pts: Vec<Point> = Vec::with_capacity(path.len());
    for &idx in &path {
        let pp = graph.nodes[idx].plane_point;
        match pts.last() {
            Some(last) if last.dist(pp) <= 1e-12 => {}
            _ => pts.push(pp),
        }
    }
    let merged = merge_collinear(&pts, tol);
    let curve = Polyline::new(merged)?;
    Ok(SimplificationResult::from_curve(curve, p, mode, events, tol))
}

fn merge_collinear(pts: &[Point], tol: &Tolerance) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts {
        while out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            if crate::geom::collinear_continuation(a, b, p, tol) {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// Smallest candidate error whose min-k simplification uses at most `k`
/// links. Candidates are the event distances (vertex–vertex, vertex–edge,
/// vertex–shortcut), rounded up to multiples of `delta`.
pub fn min_eps_simplify(
    p: &Polyline,
    k: usize,
    delta: f64,
    mode: VertexMode,
    tol: &Tolerance,
) -> Result<SimplificationResult, SimplifyError> {
    assert!(k >= 1, "link budget must be at least 1");
    assert!(delta > 0.0, "delta must be positive");
    let mut cands = epsilon_candidates(p, delta);
    cands.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cands.dedup_by(|a, b| (*a - *b).abs() <= tol.abs_tol);
    // binary search over the sorted candidates: link count is non-increasing in eps
    let mut lo = 0usize;
    let mut hi = cands.len() - 1;
    debug_assert!(min_k_simplify(p, cands[hi], mode, tol)?.links <= k);
    if min_k_simplify(p, cands[0], mode, tol)?.links <= k {
        hi = 0;
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if min_k_simplify(p, cands[mid], mode, tol)?.links <= k {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    min_k_simplify(p, cands[hi], mode, tol)
}

fn quantize_up(v: f64, delta: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        (v / delta).ceil() * delta
    }
}

fn epsilon_candidates(p: &Polyline, delta: f64) -> Vec<f64> {
    let n = p.num_vertices();
    let mut out = vec![0.0];
    for i in 0..n {
        for j in i + 1..n {
            out.push(quantize_up(p.vertex(i).dist(p.vertex(j)), delta));
        }
    }
    for i in 0..n {
        for e in 0..p.num_edges() {
            out.push(quantize_up(point_segment_distance(p.vertex(i), p.edge(e)), delta));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let sc = Segment::new(p.vertex(a), p.vertex(b));
            for v in 0..n {
                out.push(quantize_up(point_segment_distance(p.vertex(v), sc), delta));
            }
        }
    }
    // always-feasible fallback: the largest pairwise vertex distance
    out.push(quantize_up(p.max_vertex_distance(p), delta));
    out
}

/// Greedy disk-sweep baseline: repeatedly extends the current anchor to the
/// farthest vertex whose prefix stays within `eps` of the anchor-to-candidate
/// segment. Error is at most `eps`; the link count carries no guarantee.
pub fn greedy_disk_simplify(
    p: &Polyline,
    eps: f64,
    tol: &Tolerance,
) -> Result<SimplificationResult, SimplifyError> {
    let n = p.num_vertices();
    let mut keep = vec![0usize];
    let mut anchor = 0usize;
    while anchor < n - 1 {
        let mut best = anchor + 1;
        for j in anchor + 2..n {
            if shortcut_feasible(
                p.vertex(anchor),
                p.vertex(j),
                p,
                p.arc_length(anchor),
                p.arc_length(j),
                eps,
                tol,
            ) {
                best = j;
            } else {
                break;
            }
        }
        keep.push(best);
        anchor = best;
    }
    let pts: Vec<Point> = keep.iter().map(|&i| p.vertex(i)).collect();
    let curve = Polyline::new(merge_collinear(&pts, tol))?;
    Ok(SimplificationResult::from_curve(curve, p, VertexMode::InputVertices, 0, tol))
}

/// Shortcut-graph simplifier: keeps a vertex subset where every shortcut has
/// Fréchet distance at most `eps` to the sub-curve it replaces, and takes an
/// unweighted shortest path over the shortcut graph. Serves as the
/// α-approximate simplifier consumed by the p-mean pipeline.
pub fn imai_iri_simplify(
    p: &Polyline,
    eps: f64,
    tol: &Tolerance,
) -> Result<SimplificationResult, SimplifyError> {
    let n = p.num_vertices();
    // BFS over vertices; edge (i, j) exists iff the shortcut is feasible
    let mut dist = vec![usize::MAX; n];
    let mut pred = vec![usize::MAX; n];
    dist[0] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(0usize);
    while let Some(i) = queue.pop_front() {
        if i == n - 1 {
            break;
        }
        for j in i + 1..n {
            if dist[j] != usize::MAX {
                continue;
            }
            if shortcut_feasible(
                p.vertex(i),
                p.vertex(j),
                p,
                p.arc_length(i),
                p.arc_length(j),
                eps,
                tol,
            ) {
                dist[j] = dist[i] + 1;
                pred[j] = i;
                queue.push_back(j);
            }
        }
    }
    assert_ne!(dist[n - 1], usize::MAX, "adjacent-vertex shortcuts are always feasible");
    let mut keep = vec![n - 1];
    let mut cur = n - 1;
    while cur != 0 {
        cur = pred[cur];
        keep.push(cur);
    }
    keep.reverse();
    let pts: Vec<Point> = keep.iter().map(|&i| p.vertex(i)).collect();
    let curve = Polyline::new(pts)?;
    Ok(SimplificationResult::from_curve(curve, p, VertexMode::InputVertices, 0, tol))
}

#[cfg(test)]
mod tests;
