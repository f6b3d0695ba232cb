//! Free-space diagrams, Fréchet decision/value, monotone matchings and the
//! discrete Fréchet distance for a pair of polylines.
//!
//! The free space of two curves at error `eps` is the set of parameter pairs
//! whose points lie within `eps` of each other; the Fréchet distance is at
//! most `eps` iff a monotone path crosses the diagram from `(0,0)` to
//! `(1,1)`. The decision procedure propagates reachable intervals over cell
//! boundaries; the value is found by bisection with critical-value snapping.

use crate::geom::{
    ball_segment_intersection, point_segment_distance, Point, Polyline, Tolerance,
};
use thiserror::Error;

/// Parameter-space slack for interval bookkeeping on cell boundaries.
const PARAM_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum FrechetError {
    #[error("no monotone matching exists at the requested error")]
    Infeasible,
}

type Interval = Option<(f64, f64)>;

fn clip_low(iv: Interval, lo: f64) -> Interval {
    match iv {
        Some((a, b)) if b + PARAM_TOL >= lo => Some((a.max(lo), b.max(lo))),
        _ => None,
    }
}

/// One cell of a free-space diagram: the free sub-intervals on its four
/// boundary edges. Intervals on boundaries shared with adjacent cells are
/// identical by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeSpaceCell {
    pub i: usize,
    pub j: usize,
    pub left: Interval,
    pub right: Interval,
    pub bottom: Interval,
    pub top: Interval,
}

/// Free-space diagram of two polylines at a fixed error.
///
/// `vertical[i][j]` is the free interval on the grid line of P's vertex `i`
/// against Q's edge `j`; `horizontal[i][j]` the free interval on the grid
/// line of Q's vertex `j` against P's edge `i`.
#[derive(Debug, Clone)]
pub struct FreeSpaceDiagram {
    pub eps: f64,
    n_edges: usize,
    m_edges: usize,
    vertical: Vec<Vec<Interval>>,
    horizontal: Vec<Vec<Interval>>,
}

impl FreeSpaceDiagram {
    pub fn dims(&self) -> (usize, usize) {
        (self.n_edges, self.m_edges)
    }

    /// Free interval on P-vertex line `i` against Q-edge `j`.
    pub fn vertical_interval(&self, i: usize, j: usize) -> Interval {
        self.vertical[i][j]
    }

    /// Free interval on Q-vertex line `j` against P-edge `i`.
    pub fn horizontal_interval(&self, i: usize, j: usize) -> Interval {
        self.horizontal[i][j]
    }

    pub fn cell(&self, i: usize, j: usize) -> FreeSpaceCell {
        FreeSpaceCell {
            i,
            j,
            left: self.vertical[i][j],
            right: self.vertical[i + 1][j],
            bottom: self.horizontal[i][j],
            top: self.horizontal[i][j + 1],
        }
    }
}

/// Builds the free-space diagram of `p` and `q` at error `eps`.
pub fn build_fsd(p: &Polyline, q: &Polyline, eps: f64) -> FreeSpaceDiagram {
    let n_edges = p.num_edges();
    let m_edges = q.num_edges();
    let mut vertical = vec![vec![None; m_edges]; n_edges + 1];
    let mut horizontal = vec![vec![None; m_edges + 1]; n_edges];
    for (i, col) in vertical.iter_mut().enumerate() {
        for (j, iv) in col.iter_mut().enumerate() {
            *iv = ball_segment_intersection(p.vertex(i), eps, q.edge(j));
        }
    }
    for (i, row) in horizontal.iter_mut().enumerate() {
        for (j, iv) in row.iter_mut().enumerate() {
            *iv = ball_segment_intersection(q.vertex(j), eps, p.edge(i));
        }
    }
    FreeSpaceDiagram { eps, n_edges, m_edges, vertical, horizontal }
}

/// Reachability tables over the free-space diagram: per boundary, the
/// sub-interval reachable by a monotone path from the start corner.
struct Reach {
    vertical: Vec<Vec<Interval>>,
    horizontal: Vec<Vec<Interval>>,
}

fn covers_unit(iv: Interval) -> bool {
    matches!(iv, Some((a, b)) if a <= PARAM_TOL && b >= 1.0 - PARAM_TOL)
}

fn propagate(fsd: &FreeSpaceDiagram) -> Reach {
    let (ne, me) = fsd.dims();
    let mut vr: Vec<Vec<Interval>> = vec![vec![None; me]; ne + 1];
    let mut hr: Vec<Vec<Interval>> = vec![vec![None; me + 1]; ne];

    // walk up the left edge while the corridor stays fully free
    for j in 0..me {
        let free = fsd.vertical[0][j];
        let entered = if j == 0 {
            matches!(free, Some((a, _)) if a <= PARAM_TOL)
        } else {
            covers_unit(vr[0][j - 1]) && matches!(free, Some((a, _)) if a <= PARAM_TOL)
        };
        vr[0][j] = if entered { free } else { None };
        if vr[0][j].is_none() {
            break;
        }
    }
    // walk right along the bottom edge
    for i in 0..ne {
        let free = fsd.horizontal[i][0];
        let entered = if i == 0 {
            matches!(free, Some((a, _)) if a <= PARAM_TOL)
        } else {
            covers_unit(hr[i - 1][0]) && matches!(free, Some((a, _)) if a <= PARAM_TOL)
        };
        hr[i][0] = if entered { free } else { None };
        if hr[i][0].is_none() {
            break;
        }
    }

    for i in 0..ne {
        for j in 0..me {
            let left = vr[i][j];
            let bottom = hr[i][j];
            vr[i + 1][j] = if bottom.is_some() {
                fsd.vertical[i + 1][j]
            } else if let Some((lo, _)) = left {
                clip_low(fsd.vertical[i + 1][j], lo)
            } else {
                None
            };
            hr[i][j + 1] = if left.is_some() {
                fsd.horizontal[i][j + 1]
            } else if let Some((lo, _)) = bottom {
                clip_low(fsd.horizontal[i][j + 1], lo)
            } else {
                None
            };
        }
    }
    Reach { vertical: vr, horizontal: hr }
}

fn sink_reached(reach: &Reach, ne: usize, me: usize) -> bool {
    let via_right = matches!(reach.vertical[ne][me - 1], Some((_, b)) if b >= 1.0 - PARAM_TOL);
    let via_top = matches!(reach.horizontal[ne - 1][me], Some((_, b)) if b >= 1.0 - PARAM_TOL);
    via_right || via_top
}

/// True iff the Fréchet distance between `p` and `q` is at most `eps`.
pub fn decide_frechet(p: &Polyline, q: &Polyline, eps: f64) -> bool {
    let tol = Tolerance::default();
    if p.vertex(0).dist(q.vertex(0)) > eps + tol.slack(eps) {
        return false;
    }
    let last = p.vertex(p.num_vertices() - 1).dist(q.vertex(q.num_vertices() - 1));
    if last > eps + tol.slack(eps) {
        return false;
    }
    let fsd = build_fsd(p, q, eps);
    let reach = propagate(&fsd);
    sink_reached(&reach, fsd.n_edges, fsd.m_edges)
}

/// Fréchet distance by bisection over the decision procedure, snapped to the
/// nearest vertex–vertex / vertex–edge critical value when one certifies.
pub fn frechet_distance(p: &Polyline, q: &Polyline, tol: &Tolerance) -> f64 {
    let lower = p
        .vertex(0)
        .dist(q.vertex(0))
        .max(p.vertex(p.num_vertices() - 1).dist(q.vertex(q.num_vertices() - 1)));
    let upper = p.max_vertex_distance(q);
    if decide_frechet(p, q, lower) {
        return lower;
    }
    let mut lo = lower;
    let mut hi = upper;
    for _ in 0..100 {
        if hi - lo <= tol.slack(hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if decide_frechet(p, q, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // snap to a critical value inside the bracket when possible
    let mut candidates: Vec<f64> = Vec::new();
    let slack = tol.slack(hi);
    let mut push = |v: f64| {
        if v >= lo - slack && v <= hi + slack {
            candidates.push(v);
        }
    };
    for i in 0..p.num_vertices() {
        for j in 0..q.num_vertices() {
            push(p.vertex(i).dist(q.vertex(j)));
        }
    }
    for i in 0..p.num_vertices() {
        for j in 0..q.num_edges() {
            push(point_segment_distance(p.vertex(i), q.edge(j)));
        }
    }
    for j in 0..q.num_vertices() {
        for i in 0..p.num_edges() {
            push(point_segment_distance(q.vertex(j), p.edge(i)));
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for c in candidates {
        if decide_frechet(p, q, c) {
            return c;
        }
    }
    hi
}

/// One matched pair of a monotone matching: arc-length positions on both
/// curves together with the matched plane points.
#[derive(Debug, Clone, Copy)]
pub struct MatchedPair {
    /// Arc-length position on P.
    pub s: f64,
    /// Arc-length position on Q.
    pub t: f64,
    pub p_point: Point,
    pub q_point: Point,
}

/// A monotone matching between two curves: arc positions non-decreasing on
/// both sides, start matched to start and end to end.
#[derive(Debug, Clone)]
pub struct Matching {
    pub pairs: Vec<MatchedPair>,
}

impl Matching {
    pub fn max_pair_distance(&self) -> f64 {
        self.pairs.iter().map(|m| m.p_point.dist(m.q_point)).fold(0.0, f64::max)
    }

    pub fn is_monotone(&self) -> bool {
        self.pairs.windows(2).all(|w| {
            w[1].s >= w[0].s - PARAM_TOL && w[1].t >= w[0].t - PARAM_TOL
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Crossing {
    /// On P-vertex line `line`, within Q-edge `row`, at edge parameter `t`.
    V { line: usize, row: usize, t: f64 },
    /// On Q-vertex line `line`, within P-edge `col`, at edge parameter `t`.
    H { col: usize, line: usize, t: f64 },
}

impl Crossing {
    fn grid(&self) -> (f64, f64) {
        match *self {
            Crossing::V { line, row, t } => (line as f64, row as f64 + t),
            Crossing::H { col, line, t } => (col as f64 + t, line as f64),
        }
    }
}

/// Extracts a monotone matching witnessing `d_F(p, q) <= eps`, following the
/// lowermost feasible path through the free-space diagram. The matching's
/// pairs include every cell-boundary crossing of the path.
pub fn frechet_matching(p: &Polyline, q: &Polyline, eps: f64) -> Result<Matching, FrechetError> {
    let fsd = build_fsd(p, q, eps);
    let reach = propagate(&fsd);
    let (ne, me) = fsd.dims();
    if !sink_reached(&reach, ne, me) {
        return Err(FrechetError::Infeasible);
    }

    // backward walk, preferring the lowest entry into each cell
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut cur = Crossing::V { line: ne, row: me - 1, t: 1.0 };
    if !matches!(reach.vertical[ne][me - 1], Some((_, b)) if b >= 1.0 - PARAM_TOL) {
        cur = Crossing::H { col: ne - 1, line: me, t: 1.0 };
    }
    loop {
        crossings.push(cur);
        // cell that produced the current crossing
        let (ci, cj) = match cur {
            Crossing::V { line, row, .. } => {
                if line == 0 {
                    break; // on the left edge of the diagram
                }
                (line - 1, row)
            }
            Crossing::H { col, line, .. } => {
                if line == 0 {
                    break; // on the bottom edge
                }
                (col, line - 1)
            }
        };
        let bottom = reach.horizontal[ci][cj];
        let left = reach.vertical[ci][cj];
        let limit_s = match cur {
            Crossing::H { t, .. } => t,
            Crossing::V { .. } => 1.0,
        };
        let limit_t = match cur {
            Crossing::V { t, .. } => t,
            Crossing::H { .. } => 1.0,
        };
        cur = if let Some((blo, bhi)) = bottom.filter(|&(blo, _)| blo <= limit_s + PARAM_TOL) {
            Crossing::H { col: ci, line: cj, t: bhi.min(limit_s).max(blo) }
        } else if let Some((llo, _)) = left.filter(|&(llo, _)| llo <= limit_t + PARAM_TOL) {
            Crossing::V { line: ci, row: cj, t: llo }
        } else {
            unreachable!("forward reach marked this boundary reachable");
        };
    }
    // finish the walk along the diagram edge down to the start corner
    match *crossings.last().unwrap() {
        Crossing::V { line: 0, row, .. } => {
            for j in (0..=row).rev() {
                crossings.push(Crossing::V { line: 0, row: j, t: 0.0 });
            }
        }
        Crossing::H { col, line: 0, .. } => {
            for i in (0..=col).rev() {
                crossings.push(Crossing::H { col: i, line: 0, t: 0.0 });
            }
        }
        _ => {}
    }
    crossings.reverse();

    let grid_to_arc = |pl: &Polyline, x: f64| -> f64 {
        let e = (x.floor() as usize).min(pl.num_edges() - 1);
        pl.arc_of(e, x - e as f64)
    };
    let mut pairs: Vec<MatchedPair> = Vec::new();
    for c in crossings {
        let (gx, gy) = c.grid();
        let s = grid_to_arc(p, gx);
        let t = grid_to_arc(q, gy);
        let pair = MatchedPair { s, t, p_point: p.point_at_arc(s), q_point: q.point_at_arc(t) };
        if let Some(last) = pairs.last() {
            if (last.s - pair.s).abs() <= PARAM_TOL && (last.t - pair.t).abs() <= PARAM_TOL {
                continue;
            }
        }
        pairs.push(pair);
    }
    Ok(Matching { pairs })
}

/// Discrete Fréchet distance between vertex sequences: the standard O(nm)
/// coupling dynamic program. Accepts single-vertex sequences.
pub fn discrete_frechet(p: &[Point], q: &[Point]) -> f64 {
    assert!(!p.is_empty() && !q.is_empty());
    let m = q.len();
    let mut prev = vec![0.0f64; m];
    let mut row = vec![0.0f64; m];
    for (i, &pp) in p.iter().enumerate() {
        for (j, &qq) in q.iter().enumerate() {
            let d = pp.dist(qq);
            let best = match (i, j) {
                (0, 0) => d,
                (0, _) => row[j - 1].max(d),
                (_, 0) => prev[0].max(d),
                (_, _) => prev[j].min(prev[j - 1]).min(row[j - 1]).max(d),
            };
            row[j] = best;
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[m - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn line(coords: &[(f64, f64)]) -> Polyline {
        Polyline::from_xy(coords)
    }

    fn random_polyline(rng: &mut StdRng, n: usize) -> Polyline {
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Polyline::from_xy(&pts)
    }

    #[test]
    fn fsd_identical_segments_at_zero_eps() {
        let p = line(&[(0.0, 0.0), (1.0, 0.0)]);
        let fsd = build_fsd(&p, &p, 0.0);
        let cell = fsd.cell(0, 0);
        // free space is exactly the diagonal: degenerate corner intervals
        let (a, b) = cell.left.unwrap();
        assert!(a.abs() < 1e-9 && b.abs() < 1e-9);
        let (a, b) = cell.right.unwrap();
        assert!((a - 1.0).abs() < 1e-9 && (b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fsd_disjoint_cells_empty() {
        let p = line(&[(0.0, 0.0), (1.0, 0.0)]);
        let q = line(&[(0.0, 1.0), (1.0, 1.0)]);
        let fsd = build_fsd(&p, &q, 0.5);
        let cell = fsd.cell(0, 0);
        assert!(cell.left.is_none() && cell.right.is_none());
        assert!(cell.bottom.is_none() && cell.top.is_none());
    }

    #[test]
    fn fsd_boundary_intervals_agree_with_direct_distance() {
        let mut rng = StdRng::seed_from_u64(7);
        let p = random_polyline(&mut rng, 4);
        let q = random_polyline(&mut rng, 4);
        let eps = 0.8;
        let fsd = build_fsd(&p, &q, eps);
        for _ in 0..10_000 {
            let i = rng.random_range(0..p.num_vertices());
            let j = rng.random_range(0..q.num_edges());
            let t: f64 = rng.random_range(0.0..1.0);
            let free = p.vertex(i).dist(q.edge(j).point_at(t)) <= eps;
            let in_interval = match fsd.vertical_interval(i, j) {
                Some((a, b)) => t >= a - 1e-7 && t <= b + 1e-7,
                None => false,
            };
            if free {
                assert!(in_interval, "free point outside interval at ({i},{j},{t})");
            } else if in_interval {
                // allowed only within tolerance of the boundary
                let d = p.vertex(i).dist(q.edge(j).point_at(t));
                assert!(d <= eps + 1e-6);
            }
        }
    }

    #[test]
    fn shared_boundaries_are_identical() {
        let mut rng = StdRng::seed_from_u64(3);
        let p = random_polyline(&mut rng, 5);
        let q = random_polyline(&mut rng, 4);
        let fsd = build_fsd(&p, &q, 0.6);
        let (ne, me) = fsd.dims();
        for i in 0..ne - 1 {
            for j in 0..me {
                assert_eq!(fsd.cell(i, j).right, fsd.cell(i + 1, j).left);
            }
        }
        for i in 0..ne {
            for j in 0..me - 1 {
                assert_eq!(fsd.cell(i, j).top, fsd.cell(i, j + 1).bottom);
            }
        }
    }

    #[test]
    fn decide_identity_at_zero() {
        let p = line(&[(0.0, 0.0), (1.0, 0.5), (2.0, -0.25), (3.0, 1.0)]);
        assert!(decide_frechet(&p, &p, 0.0));
    }

    #[test]
    fn decide_uniform_offset() {
        let p = line(&[(0.0, 0.0), (1.0, 0.0)]);
        let q = line(&[(0.0, 1.0), (1.0, 1.0)]);
        assert!(!decide_frechet(&p, &q, 0.99));
        assert!(decide_frechet(&p, &q, 1.0));
    }

    #[test]
    fn distance_identical_is_zero() {
        let p = line(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        assert_eq!(frechet_distance(&p, &p, &Tolerance::default()), 0.0);
    }

    #[test]
    fn distance_peak_instance() {
        let p = line(&[(0.0, 0.0), (4.0, 0.0)]);
        let q = line(&[(0.0, 0.0), (2.0, 1.0), (4.0, 0.0)]);
        let d = frechet_distance(&p, &q, &Tolerance::default());
        assert!((d - 1.0).abs() < 1e-6, "d = {d}");
    }

    #[test]
    fn distance_translated_copy() {
        let p = line(&[(0.0, 0.0), (1.0, 0.3), (2.5, -0.2)]);
        let q = line(&[(0.0, 0.7), (1.0, 1.0), (2.5, 0.5)]);
        let d = frechet_distance(&p, &q, &Tolerance::default());
        assert!((d - 0.7).abs() < 1e-6, "d = {d}");
    }

    #[test]
    fn matching_identity() {
        let p = line(&[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]);
        let m = frechet_matching(&p, &p, 0.0).unwrap();
        assert!(m.is_monotone());
        assert!(m.max_pair_distance() <= 1e-9);
        for pair in &m.pairs {
            assert!((pair.s - pair.t).abs() <= 1e-9);
        }
    }

    #[test]
    fn matching_offset_parallel() {
        let p = line(&[(0.0, 0.0), (2.0, 0.0)]);
        let q = line(&[(0.0, 1.0), (2.0, 1.0)]);
        let m = frechet_matching(&p, &q, 1.0).unwrap();
        assert!(m.is_monotone());
        assert!(m.max_pair_distance() <= 1.0 + 1e-9);
        for pair in &m.pairs {
            assert!((pair.p_point.dist(pair.q_point) - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn matching_infeasible_reports_error() {
        let p = line(&[(0.0, 0.0), (1.0, 0.0)]);
        let q = line(&[(0.0, 1.0), (1.0, 1.0)]);
        assert_eq!(frechet_matching(&p, &q, 0.5).unwrap_err(), FrechetError::Infeasible);
    }

    #[test]
    fn matching_random_pairs_within_eps() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let p = random_polyline(&mut rng, rng.random_range(2..6));
            let q = random_polyline(&mut rng, rng.random_range(2..6));
            let d = frechet_distance(&p, &q, &Tolerance::default());
            let eps = d + 1e-7;
            let m = frechet_matching(&p, &q, eps).unwrap();
            assert!(m.is_monotone());
            assert!(m.max_pair_distance() <= eps + 1e-9);
            let first = m.pairs.first().unwrap();
            let last = m.pairs.last().unwrap();
            assert!(first.s.abs() <= 1e-9 && first.t.abs() <= 1e-9);
            assert!((last.s - p.length()).abs() <= 1e-9);
            assert!((last.t - q.length()).abs() <= 1e-9);
        }
    }

    #[test]
    fn discrete_identity_zero() {
        let p = line(&[(0.0, 0.0), (1.0, 2.0), (3.0, 1.0)]);
        assert_eq!(discrete_frechet(p.vertices(), p.vertices()), 0.0);
    }

    #[test]
    fn discrete_single_pair() {
        let p = [Point::new(0.0, 0.0)];
        let q = [Point::new(3.0, 4.0)];
        assert!((discrete_frechet(&p, &q) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn decide_monotone_in_eps() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let p = random_polyline(&mut rng, 4);
            let q = random_polyline(&mut rng, 5);
            let d = frechet_distance(&p, &q, &Tolerance::default());
            for k in 1..=5 {
                let eps = d + k as f64 * 0.1;
                assert!(decide_frechet(&p, &q, eps));
            }
        }
    }
}
