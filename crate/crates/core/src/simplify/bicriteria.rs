//! Bi-criteria simplification: augment the curve with the event points of
//! the error-`eps` event graph, then run a direction-aware shortcut dynamic
//! program over the augmented vertex sequence. Relative to the optimal
//! simplification with unrestricted plane vertices, the output has at most
//! twice the links and at most twice the error.

use super::{
    merge_collinear, shortcut_candidates, shortcut_feasible, SimplificationResult, SimplifyError,
    VertexMode,
};
use crate::geom::{
    ball_segment_intersection, same_direction, segment_intersection, Point, Polyline, Tolerance,
    Vec2,
};

/// Event points on `p`: free-interval endpoints of the disks of radius `eps`
/// around the vertices of `q`, plus crossings of vertex-pair shortcuts with
/// the edges of `p`. Positions are snapped to multiples of `delta`.
fn event_points(p: &Polyline, q: &Polyline, eps: f64, delta: f64, tol: &Tolerance) -> Vec<f64> {
    let mut arcs: Vec<f64> = Vec::new();
    for i in 0..q.num_vertices() {
        for e in 0..p.num_edges() {
            if let Some((lo, hi)) = ball_segment_intersection(q.vertex(i), eps, p.edge(e)) {
                arcs.push(p.arc_of(e, lo));
                arcs.push(p.arc_of(e, hi));
            }
        }
    }
    for sc in shortcut_candidates(q, q, VertexMode::InputVertices) {
        for e in 0..p.num_edges() {
            if let Some((_, te)) = segment_intersection(sc.seg, p.edge(e)) {
                if te > 1e-9 && te < 1.0 - 1e-9 {
                    arcs.push(p.arc_of(e, te));
                }
            }
        }
    }
    let total = p.length();
    if delta > 0.0 {
        for a in arcs.iter_mut() {
            *a = (*a / delta).round() * delta;
            *a = a.clamp(0.0, total);
        }
    }
    arcs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    arcs.dedup_by(|a, b| (*a - *b).abs() <= tol.slack(total).max(1e-12));
    // drop events that coincide with curve vertices
    let vertex_arcs: Vec<f64> = (0..p.num_vertices()).map(|i| p.arc_length(i)).collect();
    arcs.retain(|&a| {
        !vertex_arcs.iter().any(|&v| (a - v).abs() <= tol.slack(total).max(1e-12))
    });
    arcs
}

/// Bi-criteria simplification of `p` at error `eps`, with event points from
/// the diagram against `q` (pass `p` itself for plain simplification) and
/// event positions rounded to multiples of `delta`.
///
/// The shortcut feasibility threshold is `2 * eps`: a plane-optimal
/// k-simplification at error `eps` always admits an on-curve counterpart
/// with at most `2k` links within `2 * eps`, which is what the dynamic
/// program searches for.
pub fn bicriteria_simplify(
    p: &Polyline,
    q: &Polyline,
    eps: f64,
    delta: f64,
    tol: &Tolerance,
) -> Result<SimplificationResult, SimplifyError> {
    assert!(eps > 0.0, "eps must be positive");
    let events = event_points(p, q, eps, delta, tol);
    let n_events = events.len();
    let mut arcs: Vec<f64> = (0..p.num_vertices()).map(|i| p.arc_length(i)).collect();
    arcs.extend_from_slice(&events);
    arcs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pts: Vec<Point> = arcs.iter().map(|&a| p.point_at_arc(a)).collect();
    let m = arcs.len();
    let threshold = 2.0 * eps;

    // feasible shortcut edges (k -> j), k < j
    let mut in_edges: Vec<Vec<usize>> = vec![Vec::new(); m];
    for j in 1..m {
        for k in 0..j {
            if pts[k].dist(pts[j]) <= 1e-12 {
                continue;
            }
            if shortcut_feasible(pts[k], pts[j], p, arcs[k], arcs[j], threshold, tol) {
                in_edges[j].push(k);
            }
        }
    }

    // per-node summary after processing: minimal link count plus the set of
    // incoming directions achieving it, each with its predecessor
    let mut best: Vec<Option<(u32, Vec<(Vec2, usize)>)>> = vec![None; m];
    best[0] = Some((0, Vec::new()));
    for j in 1..m {
        let mut cost_j = u32::MAX;
        let mut dirs_j: Vec<(Vec2, usize)> = Vec::new();
        for &k in &in_edges[j] {
            let Some((cost_k, dirs_k)) = &best[k] else { continue };
            let d = match (pts[j] - pts[k]).unit() {
                Some(d) => d,
                None => continue,
            };
            let step = if dirs_k.iter().any(|(dk, _)| same_direction(*dk, d, tol)) {
                0
            } else {
                1
            };
            let c = cost_k + step;
            if c < cost_j {
                cost_j = c;
                dirs_j.clear();
                dirs_j.push((d, k));
            } else if c == cost_j && !dirs_j.iter().any(|(dj, _)| same_direction(*dj, d, tol)) {
                dirs_j.push((d, k));
            }
        }
        if cost_j != u32::MAX {
            best[j] = Some((cost_j, dirs_j));
        }
    }
    let Some((links, _)) = &best[m - 1] else {
        return Err(SimplifyError::Failed);
    };
    let links = *links;

    // backtrack: at each node pick a minimal entry whose direction matches
    // the outgoing edge when that continuation was counted as free
    let mut rev = vec![m - 1];
    let mut j = m - 1;
    let mut need: Option<Vec2> = None;
    while j != 0 {
        let (_, dirs) = best[j].as_ref().unwrap();
        let &(d, k) = match need {
            Some(nd) => dirs
                .iter()
                .find(|(dj, _)| same_direction(*dj, nd, tol))
                .unwrap_or(&dirs[0]),
            None => &dirs[0],
        };
        // was the edge k -> j free for its predecessor?
        let (cost_k, dirs_k) = best[k].as_ref().unwrap();
        let (cost_j, _) = best[j].as_ref().unwrap();
        need = if cost_j == cost_k {
            // continuation: the predecessor must leave along the same direction
            debug_assert!(dirs_k.iter().any(|(dk, _)| same_direction(*dk, d, tol)));
            Some(d)
        } else {
            None
        };
        rev.push(k);
        j = k;
    }
    rev.reverse();
    let corner_pts: Vec<Point> = rev.iter().map(|&i| pts[i]).collect();
    let merged = merge_collinear(&corner_pts, tol);
    let curve = Polyline::new(merged)?;
    let result =
        SimplificationResult::from_curve(curve, p, VertexMode::AnyPlanePoint, n_events, tol);
    debug_assert_eq!(result.links as u32, links);
    Ok(result)
}
