//! Exact-tolerance planar primitives shared by every other module.
//!
//! All geometric comparisons go through a single [`Tolerance`] record so that
//! tie-breaking stays reproducible across the event-enumeration code paths.
//! Directions are represented as unit vectors, never as numeric slopes, so
//! vertical edges need no special casing.

use thiserror::Error;

/// Consecutive vertices closer than this are merged at construction.
const DUP_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("polyline needs at least 2 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
}

/// A point in the plane, in dataset units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist_sq(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn lerp(&self, other: Point, t: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }

    pub fn midpoint(&self, other: Point) -> Point {
        self.lerp(other, 0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Sub for Point {
    type Output = Vec2;
    fn sub(self, rhs: Point) -> Vec2 {
        Vec2 { x: self.x - rhs.x, y: self.y - rhs.y }
    }
}

impl std::ops::Add<Vec2> for Point {
    type Output = Point;
    fn add(self, rhs: Vec2) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// A displacement between two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn dot(&self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(&self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn scale(&self, s: f64) -> Vec2 {
        Vec2 { x: self.x * s, y: self.y * s }
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn unit(&self) -> Option<Vec2> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }
}

/// A closed segment between two points. Degenerate segments (`a == b`) are
/// allowed; every operation handles them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.a.lerp(self.b, t)
    }

    pub fn len(&self) -> f64 {
        self.a.dist(self.b)
    }
}

/// Absolute/relative tolerance pair threaded through geometric comparisons.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_tol: 1e-9, rel_tol: 1e-9 }
    }
}

impl Tolerance {
    pub fn abs(abs_tol: f64) -> Self {
        Tolerance { abs_tol, rel_tol: 0.0 }
    }

    /// Slack used when comparing two magnitudes of size roughly `scale`.
    pub fn slack(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }

    pub fn eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.slack(a.abs().max(b.abs()))
    }

    /// `a <= b` up to tolerance.
    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b + self.slack(a.abs().max(b.abs()))
    }
}

/// An ordered vertex sequence in the plane with at least two distinct
/// vertices. Consecutive duplicates are removed at construction and
/// cumulative arc lengths are cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pts: Vec<Point>,
    cum: Vec<f64>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self, GeomError> {
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(GeomError::NonFinite(i));
            }
        }
        let mut pts: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            match pts.last() {
                Some(last) if last.dist(p) <= DUP_EPS => {}
                _ => pts.push(p),
            }
        }
        if pts.len() < 2 {
            return Err(GeomError::TooFewVertices(pts.len()));
        }
        let mut cum = Vec::with_capacity(pts.len());
        cum.push(0.0);
        for w in pts.windows(2) {
            cum.push(cum.last().unwrap() + w[0].dist(w[1]));
        }
        Ok(Polyline { pts, cum })
    }

    /// Convenience constructor from coordinate pairs; panics on invalid input.
    pub fn from_xy(coords: &[(f64, f64)]) -> Self {
        Polyline::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
            .expect("valid polyline")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.pts
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.pts[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.pts.len()
    }

    pub fn num_edges(&self) -> usize {
        self.pts.len() - 1
    }

    pub fn edge(&self, i: usize) -> Segment {
        Segment::new(self.pts[i], self.pts[i + 1])
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// Arc-length position of vertex `i`; non-decreasing in `i`.
    pub fn arc_length(&self, i: usize) -> f64 {
        self.cum[i]
    }

    /// Point at arc-length position `s` (clamped to `[0, length]`).
    pub fn point_at_arc(&self, s: f64) -> Point {
        let (e, t) = self.locate_arc(s);
        self.edge(e).point_at(t)
    }

    /// Maps an arc-length position to `(edge index, edge parameter)`.
    pub fn locate_arc(&self, s: f64) -> (usize, f64) {
        let s = s.clamp(0.0, self.length());
        // partition_point: first vertex with cum > s, so e is the edge containing s
        let idx = self.cum.partition_point(|&c| c <= s);
        let e = idx.saturating_sub(1).min(self.num_edges() - 1);
        let len = self.cum[e + 1] - self.cum[e];
        let t = if len > 0.0 { (s - self.cum[e]) / len } else { 0.0 };
        (e, t.clamp(0.0, 1.0))
    }

    /// Arc-length position of edge parameter `t` on edge `e`.
    pub fn arc_of(&self, e: usize, t: f64) -> f64 {
        self.cum[e] + (self.cum[e + 1] - self.cum[e]) * t
    }

    /// Vertex indices whose arc position lies strictly inside `(s0, s1)`.
    pub fn vertices_strictly_inside(&self, s0: f64, s1: f64) -> std::ops::Range<usize> {
        let lo = self.cum.partition_point(|&c| c <= s0 + DUP_EPS);
        let hi = self.cum.partition_point(|&c| c < s1 - DUP_EPS);
        lo..hi.max(lo)
    }

    /// Largest pairwise distance between vertices of `self` and `other`.
    pub fn max_vertex_distance(&self, other: &Polyline) -> f64 {
        let mut m: f64 = 0.0;
        for p in &self.pts {
            for q in &other.pts {
                m = m.max(p.dist(*q));
            }
        }
        m
    }
}

/// Minimum distance from `p` to any point of segment `s`.
pub fn point_segment_distance(p: Point, s: Segment) -> f64 {
    p.dist(closest_point_on_segment(p, s).1)
}

/// Parameter and point of the closest point of `s` to `p`.
pub fn closest_point_on_segment(p: Point, s: Segment) -> (f64, Point) {
    let d = s.b - s.a;
    let len_sq = d.dot(d);
    if len_sq == 0.0 {
        return (0.0, s.a);
    }
    let t = ((p - s.a).dot(d) / len_sq).clamp(0.0, 1.0);
    (t, s.point_at(t))
}

/// Closed sub-interval `[t_lo, t_hi]` of segment parameters whose points lie
/// within distance `r` of `c`, or `None` when the disk misses the segment.
/// The interval is connected because a disk intersected with a line is.
pub fn ball_segment_intersection(c: Point, r: f64, s: Segment) -> Option<(f64, f64)> {
    let tol = Tolerance::default();
    let (t_near, near) = closest_point_on_segment(c, s);
    let dist = c.dist(near);
    if dist > r + tol.slack(r) {
        return None;
    }
    let d = s.b - s.a;
    let len_sq = d.dot(d);
    if len_sq == 0.0 {
        return Some((0.0, 1.0));
    }
    // |s.a + t d - c|^2 = r^2, solved for t
    let f = s.a - c;
    let b = f.dot(d);
    let c0 = f.dot(f) - r * r;
    let disc = b * b - len_sq * c0;
    if disc <= 0.0 {
        // numerically tangent: degenerate interval at the closest point
        return Some((t_near, t_near));
    }
    let sq = disc.sqrt();
    let t_lo = ((-b - sq) / len_sq).clamp(0.0, 1.0);
    let t_hi = ((-b + sq) / len_sq).clamp(0.0, 1.0);
    Some((t_lo, t_hi))
}

/// True iff the direction of `b - a` equals the direction of `c - b` within
/// tolerance. Direction equality, not mere collinearity: a reversal is false.
pub fn collinear_continuation(a: Point, b: Point, c: Point, tol: &Tolerance) -> bool {
    match ((b - a).unit(), (c - b).unit()) {
        (Some(u), Some(v)) => (u.x - v.x).hypot(u.y - v.y) <= tol.slack(1.0).max(tol.abs_tol),
        _ => false,
    }
}

/// Same-direction test for unit vectors.
pub fn same_direction(u: Vec2, v: Vec2, tol: &Tolerance) -> bool {
    (u.x - v.x).hypot(u.y - v.y) <= tol.slack(1.0).max(tol.abs_tol)
}

/// Intersection parameters `(t1, t2)` of two segments when they cross in a
/// single point; `None` for parallel, collinear-overlapping or disjoint pairs.
pub fn segment_intersection(s1: Segment, s2: Segment) -> Option<(f64, f64)> {
    let d1 = s1.b - s1.a;
    let d2 = s2.b - s2.a;
    let denom = d1.cross(d2);
    let scale = d1.norm().max(d2.norm());
    if denom.abs() <= 1e-12 * scale * scale {
        return None;
    }
    let w = s2.a - s1.a;
    let t1 = w.cross(d2) / denom;
    let t2 = w.cross(d1) / denom;
    if (-1e-12..=1.0 + 1e-12).contains(&t1) && (-1e-12..=1.0 + 1e-12).contains(&t2) {
        Some((t1.clamp(0.0, 1.0), t2.clamp(0.0, 1.0)))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn point_segment_distance_perpendicular_foot() {
        let d = point_segment_distance(pt(0.0, 1.0), Segment::new(pt(-1.0, 0.0), pt(1.0, 0.0)));
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_segment_distance_clamps_to_endpoint() {
        let d = point_segment_distance(pt(2.0, 0.0), Segment::new(pt(0.0, 0.0), pt(1.0, 0.0)));
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_segment_distance_degenerate_segment() {
        let d = point_segment_distance(pt(3.0, 4.0), Segment::new(pt(0.0, 0.0), pt(0.0, 0.0)));
        assert!((d - 5.0).abs() < 1e-12);
    }

    #[test]
    fn ball_segment_unit_disk_cuts_quarters() {
        let iv = ball_segment_intersection(pt(0.0, 0.0), 1.0, Segment::new(pt(-2.0, 0.0), pt(2.0, 0.0)))
            .unwrap();
        assert!((iv.0 - 0.25).abs() < 1e-12);
        assert!((iv.1 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn ball_segment_disjoint() {
        let iv = ball_segment_intersection(pt(0.0, 5.0), 1.0, Segment::new(pt(-2.0, 0.0), pt(2.0, 0.0)));
        assert!(iv.is_none());
    }

    #[test]
    fn ball_segment_matches_dense_sampling() {
        // oracle: scan 1e6 parameters and record the first/last one inside the disk
        let c = pt(0.3, 0.4);
        let r = 0.9;
        let s = Segment::new(pt(0.0, 0.0), pt(1.0, 0.0));
        let n = 1_000_000;
        let mut lo = None;
        let mut hi = None;
        for i in 0..=n {
            let t = i as f64 / n as f64;
            if s.point_at(t).dist(c) <= r {
                if lo.is_none() {
                    lo = Some(t);
                }
                hi = Some(t);
            }
        }
        let (t_lo, t_hi) = ball_segment_intersection(c, r, s).unwrap();
        assert!((t_lo - lo.unwrap()).abs() <= 1e-6);
        assert!((t_hi - hi.unwrap()).abs() <= 1e-6);
    }

    #[test]
    fn collinear_continuation_examples() {
        let tol = Tolerance::default();
        assert!(collinear_continuation(pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0), &tol));
        assert!(!collinear_continuation(pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 0.0), &tol));
        let loose = Tolerance::abs(1e-5);
        assert!(collinear_continuation(pt(0.0, 0.0), pt(1.0, 1.0), pt(2.0, 2.0000001), &loose));
    }

    #[test]
    fn polyline_removes_consecutive_duplicates() {
        let p = Polyline::new(vec![pt(0.0, 0.0), pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 0.0)]).unwrap();
        assert_eq!(p.num_vertices(), 2);
        assert!((p.length() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polyline_rejects_too_few() {
        assert_eq!(
            Polyline::new(vec![pt(0.0, 0.0), pt(0.0, 0.0)]),
            Err(GeomError::TooFewVertices(1))
        );
    }

    #[test]
    fn polyline_arc_lookup_round_trips() {
        let p = Polyline::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 2.0)]);
        assert!((p.length() - 3.0).abs() < 1e-12);
        let (e, t) = p.locate_arc(1.5);
        assert_eq!(e, 1);
        assert!((t - 0.25).abs() < 1e-12);
        assert!((p.arc_of(e, t) - 1.5).abs() < 1e-12);
        assert_eq!(p.point_at_arc(1.5), pt(1.0, 0.5));
    }

    #[test]
    fn vertices_strictly_inside_excludes_ends() {
        let p = Polyline::from_xy(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        let r = p.vertices_strictly_inside(0.0, 3.0);
        assert_eq!(r, 1..3);
        let r = p.vertices_strictly_inside(1.0, 2.0);
        assert_eq!(r.len(), 0);
    }
}
