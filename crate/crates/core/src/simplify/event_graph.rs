//! The event graph of the normalized free-space diagram.
//!
//! Nodes are free-space points on grid boundaries (and shortcut crossings)
//! carrying their Euclidean-plane image; edges connect monotone pairs whose
//! plane segment stays within the error of the reference sub-curves. The
//! scaling of the normalized diagram is realised by storing plane points
//! directly, so a shortest path maps to a minimum-complexity polyline.
//!
//! Edge weights are 0 exactly when the edge continues the direction class a
//! shortcut-crossing node was created with, and 1 otherwise, so the shortest
//! path counts direction changes.

use super::{shortcut_candidates, shortcut_feasible, SimplifyError, VertexMode};
use crate::geom::{
    ball_segment_intersection, same_direction, segment_intersection, Point, Polyline, Segment,
    Tolerance, Vec2,
};
use std::collections::VecDeque;

/// Which free-space boundary an event node sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryClass {
    /// Grid line of a curve vertex (the node's anchor is that vertex).
    Vertical,
    /// Matched position coincides with a reference-curve vertex.
    Horizontal,
    /// Crossing of a candidate shortcut with the reference curve.
    Shortcut,
}

/// A node of the event graph: an anchor point in the plane matched to an
/// arc position of the reference curve.
#[derive(Debug, Clone)]
pub struct EventNode {
    /// (anchor rank, edge index containing the matched position).
    pub cell: (usize, usize),
    pub boundary: BoundaryClass,
    /// Parameter of the matched position within edge `cell.1`.
    pub t: f64,
    /// Matched arc-length position on the reference curve.
    pub arc: f64,
    /// Euclidean-plane location this free-space point maps to.
    pub plane_point: Point,
    /// Direction of the incoming shortcut for pass-through nodes.
    pub dir_class: Option<Vec2>,
}

#[derive(Debug, Clone, Copy)]
pub struct EventEdge {
    pub from: usize,
    pub to: usize,
    pub weight: u8,
}

#[derive(Debug, Clone)]
pub struct EventGraph {
    pub nodes: Vec<EventNode>,
    pub edges: Vec<EventEdge>,
    pub source: usize,
    pub sink: usize,
    out: Vec<Vec<usize>>,
}

impl EventGraph {
    /// Assembles a graph from explicit parts (used by tests and the p-mean
    /// search, which build bespoke node sets).
    pub fn from_raw(
        nodes: Vec<EventNode>,
        edges: Vec<EventEdge>,
        source: usize,
        sink: usize,
    ) -> Self {
        let mut out = vec![Vec::new(); nodes.len()];
        for (idx, e) in edges.iter().enumerate() {
            out[e.from].push(idx);
        }
        EventGraph { nodes, edges, source, sink, out }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }
}

struct Anchor {
    point: Point,
    /// Ordering key along the reference curve.
    order: f64,
    /// Strict subsequence rank for vertex-restricted modes.
    strict_rank: Option<usize>,
    dir: Option<Vec2>,
    boundary: BoundaryClass,
}

/// Builds the event graph for simplifying against the reference curve `q`
/// with corner anchors drawn from `p` according to `mode`. Passing the same
/// curve twice yields the self-simplification graph used by min-k.
pub fn build_event_graph(
    p: &Polyline,
    q: &Polyline,
    eps: f64,
    mode: VertexMode,
    tol: &Tolerance,
) -> Result<EventGraph, SimplifyError> {
    build_event_graph_quantized(p, q, eps, mode, None, tol)
}

/// Like [`build_event_graph`] with matched positions optionally snapped to
/// multiples of `delta` (merging duplicates), which bounds the node count on
/// large inputs at the cost of link optimality.
pub fn build_event_graph_quantized(
    p: &Polyline,
    q: &Polyline,
    eps: f64,
    mode: VertexMode,
    delta: Option<f64>,
    tol: &Tolerance,
) -> Result<EventGraph, SimplifyError> {
    if p == q {
        build_self_graph(p, eps, mode, delta, tol)
    } else {
        build_pair_graph(p, q, eps, mode, tol)
    }
}

fn dedup_sorted(vals: &mut Vec<f64>, slack: f64) {
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals.dedup_by(|a, b| (*a - *b).abs() <= slack);
}

fn quantize_positions(pool: &mut Vec<f64>, delta: Option<f64>, total: f64, slack: f64) {
    if let Some(d) = delta.filter(|&d| d > 0.0) {
        for v in pool.iter_mut() {
            *v = (*v / d).round() * d;
            *v = v.clamp(0.0, total);
        }
    }
    dedup_sorted(pool, slack);
}

/// Arc positions where candidate shortcuts cross the reference curve, with
/// the crossing plane point and the shortcut direction.
fn shortcut_crossings(
    shortcuts: &[super::Shortcut],
    q: &Polyline,
) -> Vec<(f64, Point, Vec2)> {
    let mut out = Vec::new();
    for sc in shortcuts {
        let dir = match (sc.seg.b - sc.seg.a).unit() {
            Some(d) => d,
            None => continue,
        };
        for e in 0..q.num_edges() {
            if let Some((_, te)) = segment_intersection(sc.seg, q.edge(e)) {
                if te <= 1e-9 || te >= 1.0 - 1e-9 {
                    continue;
                }
                let arc = q.arc_of(e, te);
                out.push((arc, q.point_at_arc(arc), dir));
            }
        }
    }
    out
}

fn build_self_graph(
    p: &Polyline,
    eps: f64,
    mode: VertexMode,
    delta: Option<f64>,
    tol: &Tolerance,
) -> Result<EventGraph, SimplifyError> {
    let n = p.num_vertices();
    let total = p.length();
    let arc_slack = tol.slack(total).max(1e-12);
    let slack = tol.slack(eps);

    // shared position pool: vertex arcs plus the free-interval endpoints of
    // every vertex disk on every edge (the grid crossings of the diagram)
    let mut pool: Vec<f64> = (0..n).map(|i| p.arc_length(i)).collect();
    for i in 0..n {
        for e in 0..p.num_edges() {
            if let Some((lo, hi)) = ball_segment_intersection(p.vertex(i), eps, p.edge(e)) {
                pool.push(p.arc_of(e, lo));
                pool.push(p.arc_of(e, hi));
            }
        }
    }

    let mut anchors: Vec<Anchor> = (0..n)
        .map(|i| Anchor {
            point: p.vertex(i),
            order: p.arc_length(i),
            strict_rank: if mode == VertexMode::AnyPlanePoint { None } else { Some(i) },
            dir: None,
            boundary: BoundaryClass::Vertical,
        })
        .collect();

    if mode != VertexMode::InputVertices {
        let shortcuts = shortcut_candidates(p, p, mode);
        let crossings = shortcut_crossings(&shortcuts, p);
        for &(arc, pt, dir) in &crossings {
            pool.push(arc);
            // pass-through node class: enterable only along the shortcut
            anchors.push(Anchor {
                point: pt,
                order: arc,
                strict_rank: None,
                dir: Some(dir),
                boundary: BoundaryClass::Shortcut,
            });
        }
        if mode == VertexMode::AnyPlanePoint {
            // corner-capable event anchors at the grid crossings and the
            // shortcut crossings themselves
            let mut event_arcs: Vec<f64> = pool.clone();
            quantize_positions(&mut event_arcs, delta, total, arc_slack);
            for &s in &event_arcs {
                anchors.push(Anchor {
                    point: p.point_at_arc(s),
                    order: s,
                    strict_rank: None,
                    dir: None,
                    boundary: BoundaryClass::Horizontal,
                });
            }
        }
    }

    quantize_positions(&mut pool, delta, total, arc_slack);

    // node generation: vertex anchors take every pool position in their free
    // set (needed for exactness); event anchors only their own neighbourhood
    let mut nodes: Vec<EventNode> = Vec::new();
    let mut node_anchor: Vec<usize> = Vec::new();
    let mut source = None;
    let mut sink = None;
    for (a_idx, anchor) in anchors.iter().enumerate() {
        let strict_endpoint = anchor.strict_rank == Some(0) || anchor.strict_rank == Some(n - 1);
        let positions: Vec<f64> = if anchor.boundary == BoundaryClass::Vertical {
            pool.iter()
                .copied()
                .filter(|&s| anchor.point.dist(p.point_at_arc(s)) <= eps + slack)
                .filter(|&s| {
                    if strict_endpoint {
                        // the first and last vertex only ever anchor the path ends
                        if anchor.strict_rank == Some(0) {
                            s <= arc_slack
                        } else {
                            s >= total - arc_slack
                        }
                    } else {
                        true
                    }
                })
                .collect()
        } else {
            let mut own: Vec<f64> = vec![anchor.order];
            for e in 0..p.num_edges() {
                if let Some((lo, hi)) = ball_segment_intersection(anchor.point, eps, p.edge(e)) {
                    own.push(p.arc_of(e, lo));
                    own.push(p.arc_of(e, hi));
                }
            }
            for i in 0..n {
                if anchor.point.dist(p.vertex(i)) <= eps + slack {
                    own.push(p.arc_length(i));
                }
            }
            quantize_positions(&mut own, delta, total, arc_slack);
            own
        };
        for s in positions {
            let (e, t) = p.locate_arc(s);
            let idx = nodes.len();
            nodes.push(EventNode {
                cell: (a_idx, e),
                boundary: anchor.boundary,
                t,
                arc: s,
                plane_point: anchor.point,
                dir_class: anchor.dir,
            });
            node_anchor.push(a_idx);
            if anchor.strict_rank == Some(0) && s <= arc_slack {
                source = Some(idx);
            }
            if anchor.strict_rank == Some(n - 1) && s >= total - arc_slack {
                sink = Some(idx);
            }
            if mode == VertexMode::AnyPlanePoint {
                if a_idx == 0 && s <= arc_slack {
                    source = Some(idx);
                }
                if a_idx == n - 1 && s >= total - arc_slack {
                    sink = Some(idx);
                }
            }
        }
    }
    let (source, sink) = match (source, sink) {
        (Some(s), Some(t)) => (s, t),
        _ => return Err(SimplifyError::EmptyGraph),
    };

    let mut edges: Vec<EventEdge> = Vec::new();
    for u in 0..nodes.len() {
        let au = &anchors[node_anchor[u]];
        for v in 0..nodes.len() {
            if u == v {
                continue;
            }
            let av = &anchors[node_anchor[v]];
            match (au.strict_rank, av.strict_rank) {
                (Some(ru), Some(rv)) if rv <= ru => continue,
                _ => {}
            }
            let (su, sv) = (nodes[u].arc, nodes[v].arc);
            if sv < su - arc_slack {
                continue;
            }
            // same-position pairs are kept one-directional to stay acyclic
            if (sv - su).abs() <= arc_slack && v < u {
                continue;
            }
            let dir = (nodes[v].plane_point - nodes[u].plane_point).unit();
            if let Some(req) = av.dir {
                match dir {
                    Some(d) if same_direction(d, req, tol) => {}
                    _ => continue,
                }
            }
            if !shortcut_feasible(
                nodes[u].plane_point,
                nodes[v].plane_point,
                p,
                su.min(sv),
                sv.max(su),
                eps,
                tol,
            ) {
                continue;
            }
            let weight = edge_weight(au.dir, dir, tol);
            edges.push(EventEdge { from: u, to: v, weight });
        }
    }
    Ok(EventGraph::from_raw(nodes, edges, source, sink))
}

fn edge_weight(from_dir: Option<Vec2>, edge_dir: Option<Vec2>, tol: &Tolerance) -> u8 {
    match (from_dir, edge_dir) {
        // no plane movement: free
        (_, None) => 0,
        (Some(fd), Some(d)) if same_direction(fd, d, tol) => 0,
        _ => 1,
    }
}

/// Event graph for a representative of two distinct curves: anchors must
/// stay within `eps` of both, and every edge must be feasible against both
/// sub-curves. Node positions pair an arc on `p` with an arc on `q`.
fn build_pair_graph(
    p: &Polyline,
    q: &Polyline,
    eps: f64,
    mode: VertexMode,
    tol: &Tolerance,
) -> Result<EventGraph, SimplifyError> {
    let refs: [(&Polyline, f64); 2] = [(p, eps), (q, eps)];
    let mut anchor_pts: Vec<Point> = match mode {
        VertexMode::OneCurveVertices => p.vertices().to_vec(),
        _ => {
            let mut v = p.vertices().to_vec();
            v.extend_from_slice(q.vertices());
            v
        }
    };
    if mode == VertexMode::AnyPlanePoint {
        for sc in shortcut_candidates(p, q, mode) {
            for (curve, _) in &refs {
                for e in 0..curve.num_edges() {
                    if let Some((ts, _)) = segment_intersection(sc.seg, curve.edge(e)) {
                        anchor_pts.push(sc.seg.point_at(ts));
                    }
                }
            }
        }
    }
    multi_reference_graph(&refs, &anchor_pts, tol)
}

/// Shared machinery for representative-curve graphs over one or more
/// reference curves with per-curve error budgets.
pub(crate) fn multi_reference_graph(
    refs: &[(&Polyline, f64)],
    anchor_pts: &[Point],
    tol: &Tolerance,
) -> Result<EventGraph, SimplifyError> {
    // deduplicate anchors
    let mut anchors: Vec<Point> = Vec::new();
    for &pt in anchor_pts {
        if !anchors.iter().any(|a| a.dist(pt) <= 1e-9) {
            anchors.push(pt);
        }
    }

    // candidate matched positions per anchor per reference: free-interval
    // endpoints of the anchor's own disk plus reference vertex arcs
    struct MNode {
        anchor: usize,
        pos: Vec<f64>,
    }
    let mut mnodes: Vec<MNode> = Vec::new();
    for (a_idx, &a) in anchors.iter().enumerate() {
        let mut per_ref: Vec<Vec<f64>> = Vec::with_capacity(refs.len());
        let mut empty = false;
        for &(curve, eps_r) in refs {
            let slack = tol.slack(eps_r);
            let mut own: Vec<f64> = Vec::new();
            for e in 0..curve.num_edges() {
                if let Some((lo, hi)) = ball_segment_intersection(a, eps_r, curve.edge(e)) {
                    own.push(curve.arc_of(e, lo));
                    own.push(curve.arc_of(e, hi));
                }
            }
            for i in 0..curve.num_vertices() {
                if a.dist(curve.vertex(i)) <= eps_r + slack {
                    own.push(curve.arc_length(i));
                }
            }
            dedup_sorted(&mut own, tol.slack(curve.length()).max(1e-12));
            if own.is_empty() {
                empty = true;
                break;
            }
            per_ref.push(own);
        }
        if empty {
            continue;
        }
        // cartesian product of the per-reference candidate positions
        let mut combos: Vec<Vec<f64>> = vec![Vec::new()];
        for opts in &per_ref {
            let mut next = Vec::with_capacity(combos.len() * opts.len());
            for c in &combos {
                for &o in opts {
                    let mut c2 = c.clone();
                    c2.push(o);
                    next.push(c2);
                }
            }
            combos = next;
        }
        for pos in combos {
            mnodes.push(MNode { anchor: a_idx, pos });
        }
    }

    let is_start = |nd: &MNode| {
        nd.pos.iter().zip(refs).all(|(&s, &(c, _))| s <= tol.slack(c.length()).max(1e-12))
    };
    let is_end = |nd: &MNode| {
        nd.pos
            .iter()
            .zip(refs)
            .all(|(&s, &(c, _))| s >= c.length() - tol.slack(c.length()).max(1e-12))
    };
    if !mnodes.iter().any(&is_start) || !mnodes.iter().any(&is_end) {
        return Err(SimplifyError::EmptyGraph);
    }

    let (base, _) = refs[0];
    let mut nodes: Vec<EventNode> = mnodes
        .iter()
        .map(|nd| {
            let (e, t) = base.locate_arc(nd.pos[0]);
            EventNode {
                cell: (nd.anchor, e),
                boundary: BoundaryClass::Vertical,
                t,
                arc: nd.pos[0],
                plane_point: anchors[nd.anchor],
                dir_class: None,
            }
        })
        .collect();

    let mut edges: Vec<EventEdge> = Vec::new();
    for u in 0..mnodes.len() {
        'next: for v in 0..mnodes.len() {
            if u == v {
                continue;
            }
            let mut strictly_before = false;
            for (r, &(curve, eps_r)) in refs.iter().enumerate() {
                let slack = tol.slack(curve.length()).max(1e-12);
                let (su, sv) = (mnodes[u].pos[r], mnodes[v].pos[r]);
                if sv < su - slack {
                    continue 'next;
                }
                if sv > su + slack {
                    strictly_before = true;
                }
                if !shortcut_feasible(
                    anchors[mnodes[u].anchor],
                    anchors[mnodes[v].anchor],
                    curve,
                    su.min(sv),
                    sv.max(su),
                    eps_r,
                    tol,
                ) {
                    continue 'next;
                }
            }
            if !strictly_before && v < u {
                continue; // tie-break equal-position pairs to one direction
            }
            let dir = (nodes[v].plane_point - nodes[u].plane_point).unit();
            edges.push(EventEdge { from: u, to: v, weight: edge_weight(None, dir, tol) });
        }
    }

    // virtual source and sink: the representative may start at any anchor
    // lying inside every start disk and end inside every end disk. Callers
    // strip the first and last node of a reported path.
    let source = nodes.len();
    nodes.push(EventNode {
        cell: (usize::MAX, 0),
        boundary: BoundaryClass::Vertical,
        t: 0.0,
        arc: 0.0,
        plane_point: base.vertex(0),
        dir_class: None,
    });
    let sink = nodes.len();
    nodes.push(EventNode {
        cell: (usize::MAX, 1),
        boundary: BoundaryClass::Vertical,
        t: 1.0,
        arc: base.length(),
        plane_point: base.vertex(base.num_vertices() - 1),
        dir_class: None,
    });
    for (i, nd) in mnodes.iter().enumerate() {
        if is_start(nd) {
            edges.push(EventEdge { from: source, to: i, weight: 0 });
        }
        if is_end(nd) {
            edges.push(EventEdge { from: i, to: sink, weight: 0 });
        }
    }
    Ok(EventGraph::from_raw(nodes, edges, source, sink))
}

/// 0/1-weight shortest path from source to sink: deque-based BFS with
/// deterministic tie-breaking toward lower node indices (nodes are created
/// in lexicographic (i, j, t) order).
pub fn min_link_path(g: &EventGraph) -> Result<Vec<usize>, SimplifyError> {
    if g.nodes.is_empty() {
        return Err(SimplifyError::EmptyGraph);
    }
    let n = g.nodes.len();
    let mut dist = vec![u32::MAX; n];
    let mut pred = vec![usize::MAX; n];
    let mut dq: VecDeque<(usize, u32)> = VecDeque::new();
    dist[g.source] = 0;
    dq.push_back((g.source, 0));
    while let Some((u, du)) = dq.pop_front() {
        if du > dist[u] {
            continue;
        }
        for &eidx in &g.out[u] {
            let e = &g.edges[eidx];
            let nd = du + e.weight as u32;
            if nd < dist[e.to] {
                dist[e.to] = nd;
                pred[e.to] = u;
                if e.weight == 0 {
                    dq.push_front((e.to, nd));
                } else {
                    dq.push_back((e.to, nd));
                }
            }
        }
    }
    if dist[g.sink] == u32::MAX {
        return Err(SimplifyError::Unreachable);
    }
    let mut path = vec![g.sink];
    let mut cur = g.sink;
    while cur != g.source {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    Ok(path)
}

/// Total weight of a node path in `g` (smallest over parallel edges).
pub fn path_weight(g: &EventGraph, path: &[usize]) -> u32 {
    let mut w = 0;
    for win in path.windows(2) {
        let best = g.out[win[0]]
            .iter()
            .map(|&e| &g.edges[e])
            .filter(|e| e.to == win[1])
            .map(|e| e.weight as u32)
            .min()
            .expect("consecutive path nodes are connected");
        w += best;
    }
    w
}
