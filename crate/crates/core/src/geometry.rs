//! Planar geometry primitives: polygons, clipping, enclosing/inscribed
//! circles, oriented bounding rectangles, point/polyline distances.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("consecutive duplicate vertex at index {0}")]
    DuplicateVertex(usize),
    #[error("polygon is self-intersecting (edges {0} and {1})")]
    SelfIntersecting(usize, usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polyline needs at least 2 points, got {0}")]
    TooFewPoints(usize),
}

/// A point in the plane, world units.
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

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// A simple closed polygon. Vertices are stored counter-clockwise without a
/// repeated closing point.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates simplicity and normalizes orientation to CCW. The O(n^2)
    /// segment-pair test runs only here, never in inner loops.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        for v in &vertices {
            if !v.is_finite() {
                return Err(GeometryError::NonFinite);
            }
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeometryError::DuplicateVertex(i));
            }
        }
        // Non-adjacent edge pairs must not intersect; adjacent pairs may only
        // share their common endpoint.
        for i in 0..n {
            let (a1, a2) = (vertices[i], vertices[(i + 1) % n]);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (b1, b2) = (vertices[j], vertices[(j + 1) % n]);
                if adjacent {
                    if segments_properly_intersect(a1, a2, b1, b2) {
                        return Err(GeometryError::SelfIntersecting(i, j));
                    }
                } else if segments_intersect(a1, a2, b1, b2) {
                    return Err(GeometryError::SelfIntersecting(i, j));
                }
            }
        }
        if signed_area(&vertices).abs() == 0.0 {
            return Err(GeometryError::ZeroArea);
        }
        Ok(Self::new_unchecked(vertices))
    }

    /// Skips the simplicity test; still normalizes orientation. Used for
    /// polygons produced internally (partition outlines).
    pub fn new_unchecked(mut vertices: Vec<Point>) -> Self {
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Enclosed area; orientation-independent.
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    /// Sum of edge lengths including the closing edge.
    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].dist(self.vertices[(i + 1) % n]))
            .sum()
    }

    /// (min corner, max corner) of the axis-aligned bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            min.x = min.x.min(v.x);
            min.y = min.y.min(v.y);
            max.x = max.x.max(v.x);
            max.y = max.y.max(v.y);
        }
        (min, max)
    }

    pub fn bounding_diagonal(&self) -> f64 {
        let (min, max) = self.bounding_box();
        min.dist(max)
    }

    /// Even-odd ray cast. Points exactly on the boundary may land either way.
    pub fn contains(&self, p: Point) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (vi, vj) = (self.vertices[i], self.vertices[j]);
            if (vi.y > p.y) != (vj.y > p.y)
                && p.x < (vj.x - vi.x) * (p.y - vi.y) / (vj.y - vi.y) + vi.x
            {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    /// Signed distance from `p` to the polygon boundary: positive inside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        let n = self.vertices.len();
        let mut d = f64::INFINITY;
        for i in 0..n {
            d = d.min(dist_point_segment(
                p,
                self.vertices[i],
                self.vertices[(i + 1) % n],
            ));
        }
        if self.contains(p) {
            d
        } else {
            -d
        }
    }
}

/// An open polyline of at least 2 points.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::TooFewPoints(points.len()));
        }
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(GeometryError::DuplicateVertex(0));
            }
        }
        Ok(Polyline { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].dist(w[1])).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

/// A rotated rectangle; `angle` is the direction of the first half-extent
/// axis, normalized to [0, pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    pub center: Point,
    pub half_extents: (f64, f64),
    pub angle: f64,
}

impl OrientedRect {
    pub fn side_lengths(&self) -> (f64, f64) {
        (2.0 * self.half_extents.0, 2.0 * self.half_extents.1)
    }

    pub fn area(&self) -> f64 {
        4.0 * self.half_extents.0 * self.half_extents.1
    }
}

pub(crate) fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        sum += a.x * b.y - b.x * a.y;
    }
    0.5 * sum
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-form segment intersection test (shared endpoints count).
pub(crate) fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// True crossing in the interior of both segments.
pub(crate) fn segments_properly_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Clips a (possibly non-convex) vertex ring against one axis-aligned
/// half-plane. `keep_ge` selects `coord >= bound` versus `coord <= bound`.
///
/// The intersection point is computed from the same expression regardless of
/// traversal direction so that neighboring cells sharing a grid line produce
/// identical points.
fn clip_half_plane(input: &[Point], axis: usize, bound: f64, keep_ge: bool) -> Vec<Point> {
    let coord = |p: &Point| if axis == 0 { p.x } else { p.y };
    let inside = |p: &Point| {
        if keep_ge {
            coord(p) >= bound
        } else {
            coord(p) <= bound
        }
    };
    let intersect = |a: &Point, b: &Point| -> Point {
        let t = (bound - coord(a)) / (coord(b) - coord(a));
        if axis == 0 {
            Point::new(bound, a.y + t * (b.y - a.y))
        } else {
            Point::new(a.x + t * (b.x - a.x), bound)
        }
    };
    let mut out = Vec::with_capacity(input.len() + 4);
    let n = input.len();
    for i in 0..n {
        let cur = input[i];
        let next = input[(i + 1) % n];
        let (ci, ni) = (inside(&cur), inside(&next));
        if ci {
            out.push(cur);
        }
        if ci != ni {
            out.push(intersect(&cur, &next));
        }
    }
    out
}

/// Intersection of `vertices` with the axis-aligned rectangle
/// `[min, min + (w, h)]` (Sutherland-Hodgman; the rectangle is the convex
/// clip window, the polygon the subject).
pub fn clip_polygon_to_rect(vertices: &[Point], min: Point, w: f64, h: f64) -> Vec<Point> {
    let mut out = clip_half_plane(vertices, 0, min.x, true);
    if out.is_empty() {
        return out;
    }
    out = clip_half_plane(&out, 0, min.x + w, false);
    if out.is_empty() {
        return out;
    }
    out = clip_half_plane(&out, 1, min.y, true);
    if out.is_empty() {
        return out;
    }
    clip_half_plane(&out, 1, min.y + h, false)
}

/// Area of the intersection of `p` with the axis-aligned square cell of the
/// given size at `cell_min`. Results below 1e-12 are floating-point slivers
/// and reported as empty.
pub fn clip_to_cell(p: &Polygon, cell_min: Point, size: f64) -> f64 {
    let clipped = clip_polygon_to_rect(p.vertices(), cell_min, size, size);
    let a = signed_area(&clipped).abs();
    if a < 1e-12 {
        0.0
    } else {
        a.min(size * size)
    }
}

fn circle_from_two(a: Point, b: Point) -> Circle {
    let center = Point::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
    Circle {
        center,
        radius: center.dist(a),
    }
}

fn circle_from_three(a: Point, b: Point, c: Point) -> Option<Circle> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-30 {
        return None;
    }
    let a2 = a.x * a.x + a.y * a.y;
    let b2 = b.x * b.x + b.y * b.y;
    let c2 = c.x * c.x + c.y * c.y;
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let center = Point::new(ux, uy);
    Some(Circle {
        center,
        radius: center.dist(a),
    })
}

fn circle_contains(c: &Circle, p: Point, eps: f64) -> bool {
    c.center.dist(p) <= c.radius + eps
}

/// Smallest circle enclosing all polygon vertices (Welzl's algorithm with a
/// deterministic shuffle).
pub fn min_enclosing_circle(p: &Polygon) -> Circle {
    let mut pts: Vec<Point> = p.vertices().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x57e1_21);
    pts.shuffle(&mut rng);
    welzl(&pts)
}

fn welzl(points: &[Point]) -> Circle {
    let eps = 1e-10;
    let mut c = Circle {
        center: points[0],
        radius: 0.0,
    };
    for i in 1..points.len() {
        if circle_contains(&c, points[i], eps) {
            continue;
        }
        c = Circle {
            center: points[i],
            radius: 0.0,
        };
        for j in 0..i {
            if circle_contains(&c, points[j], eps) {
                continue;
            }
            c = circle_from_two(points[i], points[j]);
            for k in 0..j {
                if circle_contains(&c, points[k], eps) {
                    continue;
                }
                c = circle_from_three(points[i], points[j], points[k])
                    .unwrap_or(circle_from_two(points[i], points[j]));
            }
        }
    }
    c
}

#[derive(PartialEq)]
struct PoiCell {
    potential: f64,
    center: Point,
    half: f64,
    dist: f64,
}

impl Eq for PoiCell {}

impl Ord for PoiCell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.potential
            .partial_cmp(&other.potential)
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for PoiCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Largest circle inscribed in `p`, to within `tol` of the true radius
/// (pole-of-inaccessibility grid refinement with a priority queue).
pub fn max_inscribed_circle(p: &Polygon, tol: f64) -> Circle {
    let (min, max) = p.bounding_box();
    let (w, h) = (max.x - min.x, max.y - min.y);
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<PoiCell>, center: Point, half: f64| {
        let dist = p.signed_distance(center);
        heap.push(PoiCell {
            potential: dist + half * std::f64::consts::SQRT_2,
            center,
            half,
            dist,
        });
    };
    let s = w.min(h) / 2.0;
    let mut y = min.y + s;
    while y < max.y + s {
        let mut x = min.x + s;
        while x < max.x + s {
            push(&mut heap, Point::new(x, y), s);
            x += 2.0 * s;
        }
        y += 2.0 * s;
    }
    let centroid = Point::new(
        p.vertices().iter().map(|v| v.x).sum::<f64>() / p.len() as f64,
        p.vertices().iter().map(|v| v.y).sum::<f64>() / p.len() as f64,
    );
    let mut best = Circle {
        center: centroid,
        radius: p.signed_distance(centroid).max(0.0),
    };
    while let Some(cell) = heap.pop() {
        if cell.dist > best.radius {
            best = Circle {
                center: cell.center,
                radius: cell.dist,
            };
        }
        if cell.potential - best.radius <= tol {
            continue;
        }
        let q = cell.half / 2.0;
        for (dx, dy) in [(-q, -q), (q, -q), (-q, q), (q, q)] {
            push(
                &mut heap,
                Point::new(cell.center.x + dx, cell.center.y + dy),
                q,
            );
        }
    }
    best
}

/// Andrew's monotone chain; returns hull in CCW order without repetition.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap()
            .then(a.y.partial_cmp(&b.y).unwrap())
    });
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() * 2);
    for &p in pts.iter().chain(pts.iter().rev().skip(1)) {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Minimum-area oriented bounding rectangle via rotating calipers over the
/// convex hull: the optimum is flush with some hull edge.
pub fn rotated_min_bounding_rect(p: &Polygon) -> OrientedRect {
    let hull = convex_hull(p.vertices());
    let n = hull.len();
    if n < 3 {
        // Degenerate hull; fall back to the axis-aligned box.
        let (min, max) = p.bounding_box();
        return OrientedRect {
            center: Point::new(0.5 * (min.x + max.x), 0.5 * (min.y + max.y)),
            half_extents: (0.5 * (max.x - min.x), 0.5 * (max.y - min.y)),
            angle: 0.0,
        };
    }
    let mut best: Option<(f64, OrientedRect)> = None;
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let theta = (b.y - a.y).atan2(b.x - a.x);
        let (c, s) = (theta.cos(), theta.sin());
        let (mut min_u, mut max_u) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut min_v, mut max_v) = (f64::INFINITY, f64::NEG_INFINITY);
        for &q in &hull {
            let u = q.x * c + q.y * s;
            let v = -q.x * s + q.y * c;
            min_u = min_u.min(u);
            max_u = max_u.max(u);
            min_v = min_v.min(v);
            max_v = max_v.max(v);
        }
        let area = (max_u - min_u) * (max_v - min_v);
        if best.as_ref().map_or(true, |(ba, _)| area < *ba) {
            let cu = 0.5 * (min_u + max_u);
            let cv = 0.5 * (min_v + max_v);
            let center = Point::new(cu * c - cv * s, cu * s + cv * c);
            let mut angle = theta.rem_euclid(std::f64::consts::PI);
            if angle >= std::f64::consts::PI {
                angle = 0.0;
            }
            best = Some((
                area,
                OrientedRect {
                    center,
                    half_extents: (0.5 * (max_u - min_u), 0.5 * (max_v - min_v)),
                    angle,
                },
            ));
        }
    }
    best.unwrap().1
}

/// Distance from `a` to the segment `p`-`q`.
pub fn dist_point_segment(a: Point, p: Point, q: Point) -> f64 {
    let (dx, dy) = (q.x - p.x, q.y - p.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return a.dist(p);
    }
    let t = (((a.x - p.x) * dx + (a.y - p.y) * dy) / len2).clamp(0.0, 1.0);
    a.dist(Point::new(p.x + t * dx, p.y + t * dy))
}

/// Minimum distance from `a` to any segment of `l`.
pub fn dist_point_polyline(a: Point, l: &Polyline) -> f64 {
    dist_point_points(a, l.points())
}

pub(crate) fn dist_point_points(a: Point, pts: &[Point]) -> f64 {
    pts.windows(2)
        .map(|w| dist_point_segment(a, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(f64, f64)]) -> Polygon {
        Polygon::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn unit_square() -> Polygon {
        poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    #[test]
    fn area_basic_shapes() {
        assert_eq!(unit_square().area(), 1.0);
        assert_eq!(poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).area(), 0.5);
        // L-shape, shoelace by hand: 3.0
        let l = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        assert!((l.area() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn area_orientation_independent() {
        let mut v: Vec<Point> = unit_square().vertices().to_vec();
        v.reverse();
        let rev = Polygon::new(v).unwrap();
        assert_eq!(rev.area(), 1.0);
    }

    #[test]
    fn perimeter_basic_shapes() {
        assert_eq!(unit_square().perimeter(), 4.0);
        assert_eq!(poly(&[(0.0, 0.0), (4.0, 0.0), (4.0, 1.0), (0.0, 1.0)]).perimeter(), 10.0);
        // 3-4-5 triangle
        assert_eq!(poly(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]).perimeter(), 12.0);
    }

    #[test]
    fn perimeter_invariant_under_vertex_rotation() {
        let l = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let mut v = l.vertices().to_vec();
        v.rotate_left(2);
        let rotated = Polygon::new(v).unwrap();
        assert!((l.perimeter() - rotated.perimeter()).abs() < 1e-12);
    }

    #[test]
    fn constructor_rejects_invalid() {
        assert!(Polygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).is_err());
        // bowtie
        let bow = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ]);
        assert!(matches!(bow, Err(GeometryError::SelfIntersecting(_, _))));
        assert!(Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
        ])
        .is_err());
        assert!(Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(f64::NAN, 0.0),
            Point::new(1.0, 0.0),
        ])
        .is_err());
    }

    #[test]
    fn orientation_normalized_to_ccw() {
        let cw = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(signed_area(cw.vertices()) > 0.0);
    }

    #[test]
    fn clip_to_cell_basic() {
        let big = poly(&[(-10.0, -10.0), (10.0, -10.0), (10.0, 10.0), (-10.0, 10.0)]);
        // cell fully inside
        assert!((clip_to_cell(&big, Point::new(0.0, 0.0), 2.0) - 4.0).abs() < 1e-12);
        // cell fully outside
        assert_eq!(clip_to_cell(&big, Point::new(11.0, 11.0), 2.0), 0.0);
    }

    /// Half-plane clip oracle: the unit cell at the origin bisected by the
    /// right polygon edge x = 0.5 keeps exactly the left half.
    #[test]
    fn clip_to_cell_bisected_oracle() {
        let half = poly(&[(0.0, -5.0), (0.5, -5.0), (0.5, 5.0), (0.0, 5.0)]);
        let got = clip_to_cell(&half, Point::new(0.0, 0.0), 1.0);
        assert!((got - 0.5).abs() < 1e-12);
    }

    #[test]
    fn clip_to_cell_monotone_under_cell_growth() {
        let l = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let mut prev = 0.0;
        for k in 1..=10 {
            let size = 0.3 * k as f64;
            let a = clip_to_cell(&l, Point::new(0.2, 0.2), size);
            assert!(a >= prev - 1e-12);
            prev = a;
        }
    }

    #[test]
    fn min_enclosing_circle_cases() {
        // three points on a circle of radius 2
        let r = 2.0;
        let tri = poly(&[
            (r, 0.0),
            (r * (2.0 * std::f64::consts::PI / 3.0).cos(), r * (2.0 * std::f64::consts::PI / 3.0).sin()),
            (r * (4.0 * std::f64::consts::PI / 3.0).cos(), r * (4.0 * std::f64::consts::PI / 3.0).sin()),
        ]);
        let c = min_enclosing_circle(&tri);
        assert!((c.radius - 2.0).abs() < 1e-9);

        let c = min_enclosing_circle(&unit_square());
        assert!((c.radius - 0.5f64.sqrt()).abs() < 1e-9);
        assert!((c.center.x - 0.5).abs() < 1e-9 && (c.center.y - 0.5).abs() < 1e-9);

        let rect = poly(&[(0.0, 0.0), (4.0, 0.0), (4.0, 1.0), (0.0, 1.0)]);
        let c = min_enclosing_circle(&rect);
        assert!((c.radius - 17.0f64.sqrt() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn min_enclosing_circle_contains_all_vertices() {
        let l = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let c = min_enclosing_circle(&l);
        for v in l.vertices() {
            assert!(c.center.dist(*v) <= c.radius + 1e-9);
        }
    }

    #[test]
    fn max_inscribed_circle_cases() {
        let c = max_inscribed_circle(&unit_square(), 1e-4);
        assert!((c.radius - 0.5).abs() < 1e-3);
        assert!((c.center.x - 0.5).abs() < 2e-3 && (c.center.y - 0.5).abs() < 2e-3);

        let thin = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.1), (0.0, 0.1)]);
        let c = max_inscribed_circle(&thin, 1e-4);
        assert!((c.radius - 0.05).abs() < 1e-3);
    }

    #[test]
    fn max_inscribed_circle_regular_ngon() {
        // apothem of a regular 360-gon with circumradius 1
        let n = 360;
        let verts: Vec<Point> = (0..n)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        let p = Polygon::new(verts).unwrap();
        let c = max_inscribed_circle(&p, 1e-5);
        let apothem = (std::f64::consts::PI / n as f64).cos();
        assert!((c.radius - apothem).abs() < 1e-3);
    }

    #[test]
    fn rmbr_axis_aligned_rect() {
        let rect = poly(&[(0.0, 0.0), (4.0, 0.0), (4.0, 1.0), (0.0, 1.0)]);
        let r = rotated_min_bounding_rect(&rect);
        let (a, b) = r.side_lengths();
        assert!(((a.max(b)) - 4.0).abs() < 1e-9);
        assert!(((a.min(b)) - 1.0).abs() < 1e-9);
        assert!((r.area() - 4.0).abs() < 1e-9);
    }

    /// Hull-edge enumeration oracle: for a convex polygon the minimum-area
    /// rect is flush with some hull edge; enumerate them directly.
    #[test]
    fn rmbr_rotated_square_oracle() {
        let s = std::f64::consts::FRAC_1_SQRT_2; // unit square rotated 45 deg
        let sq = poly(&[(s, 0.0), (2.0 * s, s), (s, 2.0 * s), (0.0, s)]);
        let hull = convex_hull(sq.vertices());
        let mut oracle_best = f64::INFINITY;
        let n = hull.len();
        for i in 0..n {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            let theta = (b.y - a.y).atan2(b.x - a.x);
            let (c, sn) = (theta.cos(), theta.sin());
            let us: Vec<f64> = hull.iter().map(|q| q.x * c + q.y * sn).collect();
            let vs: Vec<f64> = hull.iter().map(|q| -q.x * sn + q.y * c).collect();
            let w = us.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - us.iter().cloned().fold(f64::INFINITY, f64::min);
            let h = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - vs.iter().cloned().fold(f64::INFINITY, f64::min);
            oracle_best = oracle_best.min(w * h);
        }
        let r = rotated_min_bounding_rect(&sq);
        assert!((r.area() - oracle_best).abs() < 1e-9);
        let (a, b) = r.side_lengths();
        assert!((a - 1.0).abs() < 1e-9 && (b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rmbr_equilateral_triangle() {
        let tri = poly(&[(0.0, 0.0), (2.0, 0.0), (1.0, 3.0f64.sqrt())]);
        let r = rotated_min_bounding_rect(&tri);
        // base 2, height sqrt(3)
        assert!((r.area() - 2.0 * 3.0f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn rmbr_contains_vertices_and_bounds_area() {
        let l = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let r = rotated_min_bounding_rect(&l);
        assert!(r.area() >= l.area() - 1e-9);
        let (c, s) = (r.angle.cos(), r.angle.sin());
        for v in l.vertices() {
            let dx = v.x - r.center.x;
            let dy = v.y - r.center.y;
            let u = dx * c + dy * s;
            let w = -dx * s + dy * c;
            assert!(u.abs() <= r.half_extents.0 + 1e-9);
            assert!(w.abs() <= r.half_extents.1 + 1e-9);
        }
    }

    #[test]
    fn dist_point_polyline_cases() {
        let l = Polyline::new(vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        assert_eq!(dist_point_polyline(Point::new(0.5, 0.0), &l), 0.0);
        assert_eq!(dist_point_polyline(Point::new(0.0, 1.0), &l), 1.0);
        let seg = Polyline::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        assert_eq!(dist_point_polyline(Point::new(3.0, 0.0), &seg), 2.0);
    }

    #[test]
    fn inscribed_never_exceeds_enclosing() {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = crate::corpus::generate_polygon(&mut rng, (6, 14));
            let outer = min_enclosing_circle(&p);
            let inner = max_inscribed_circle(&p, 1e-3 * p.bounding_diagonal());
            assert!(inner.radius <= outer.radius + 1e-6);
        }
    }

    #[test]
    fn clip_partition_of_unity_random_polygons() {
        for seed in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let p = crate::corpus::generate_polygon(&mut rng, (6, 14));
            let (min, max) = p.bounding_box();
            let s = (max.x - min.x).max(max.y - min.y) / 7.3;
            let mut sum = 0.0;
            let cols = ((max.x - min.x) / s).ceil() as usize;
            let rows = ((max.y - min.y) / s).ceil() as usize;
            for r in 0..rows {
                for c in 0..cols {
                    sum += clip_to_cell(
                        &p,
                        Point::new(min.x + c as f64 * s, min.y + r as f64 * s),
                        s,
                    );
                }
            }
            assert!((sum - p.area()).abs() / p.area() < 1e-9);
        }
    }
}
