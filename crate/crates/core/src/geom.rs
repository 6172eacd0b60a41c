//! Planar and spatial primitives, tolerant predicates, and the validated
//! [`PlanarDomain`] type.
//!
//! All coordinates are `f64`. Predicates treat quantities within
//! [`EPS_GEOM`] of zero as zero; scene coordinates are expected to be
//! `O(10)` so an absolute tolerance is adequate.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::shortest_path::PathEngine;
use crate::space::FreeSpace;
use std::sync::{Arc, OnceLock};

/// Absolute tolerance for geometric predicates.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        Point2::new(r * theta.cos(), r * theta.sin())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Polar angle in `(-π, π]`.
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        Point2::new(self.x / n, self.y / n)
    }

    /// Rotation by +90°.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    pub fn rotated(self, theta: f64) -> Point2 {
        let (s, c) = theta.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment2 {
    pub a: Point2,
    pub b: Point2,
}

impl Segment2 {
    pub fn new(a: Point2, b: Point2) -> Result<Self, GeomError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if a.dist(b) <= EPS_GEOM {
            return Err(GeomError::DegenerateSegment(a));
        }
        Ok(Segment2 { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn dir(&self) -> Point2 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> Point2 {
        self.a.lerp(self.b, 0.5)
    }

    pub fn dist_to_point(&self, p: Point2) -> f64 {
        dist_point_segment(p, self.a, self.b)
    }
}

/// Sign of twice the signed area of `(p, q, r)`: `+1` counterclockwise,
/// `-1` clockwise, `0` when `|area| <= EPS_GEOM`.
pub fn orientation(p: Point2, q: Point2, r: Point2) -> i8 {
    let area2 = (q - p).cross(r - p);
    if area2.abs() <= EPS_GEOM {
        0
    } else if area2 > 0.0 {
        1
    } else {
        -1
    }
}

/// Signed distance of `r` from the directed line `p -> q` (positive on the left).
pub fn signed_line_dist(p: Point2, q: Point2, r: Point2) -> f64 {
    let d = q - p;
    d.cross(r - p) / d.norm()
}

pub fn dist_point_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

pub fn dist_segment_segment(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    if segments_intersect_closed(a, b, c, d) {
        return 0.0;
    }
    dist_point_segment(a, c, d)
        .min(dist_point_segment(b, c, d))
        .min(dist_point_segment(c, a, b))
        .min(dist_point_segment(d, a, b))
}

/// Distance between segments `ab` and `cd` with the nearest point on `ab`.
pub fn closest_on_first(a: Point2, b: Point2, c: Point2, d: Point2) -> (f64, Point2) {
    let r = b - a;
    let s = d - c;
    let den = r.cross(s);
    if den.abs() > 0.0 {
        let t = (c - a).cross(s) / den;
        let u = (c - a).cross(r) / den;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            return (0.0, a + r * t);
        }
    }
    let proj = |p: Point2, x: Point2, y: Point2| -> Point2 {
        let v = y - x;
        let l2 = v.dot(v);
        if l2 == 0.0 {
            x
        } else {
            x + v * ((p - x).dot(v) / l2).clamp(0.0, 1.0)
        }
    };
    let mut best = (a.dist(proj(a, c, d)), a);
    for (dd, at) in [
        (b.dist(proj(b, c, d)), b),
        (c.dist(proj(c, a, b)), proj(c, a, b)),
        (d.dist(proj(d, a, b)), proj(d, a, b)),
    ] {
        if dd < best.0 {
            best = (dd, at);
        }
    }
    best
}

fn segments_intersect_closed(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    d1.signum() * d2.signum() < 0.0 && d3.signum() * d4.signum() < 0.0
}

/// How two segments meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentRelation {
    Disjoint,
    /// Open interiors intersect transversally.
    ProperCross,
    /// They share a point but do not cross (endpoint contact, T-junction).
    Touch,
    /// Collinear with an overlap of positive length.
    CollinearOverlap,
}

pub fn segment_relation(s: &Segment2, t: &Segment2) -> SegmentRelation {
    let o_ta = signed_line_dist(s.a, s.b, t.a);
    let o_tb = signed_line_dist(s.a, s.b, t.b);
    let o_sa = signed_line_dist(t.a, t.b, s.a);
    let o_sb = signed_line_dist(t.a, t.b, s.b);
    let z = |v: f64| v.abs() <= EPS_GEOM;
    if z(o_ta) && z(o_tb) {
        // collinear: compare projections onto s
        let d = s.dir();
        let len = d.norm();
        let u = d * (1.0 / len);
        let p0 = (t.a - s.a).dot(u);
        let p1 = (t.b - s.a).dot(u);
        let (lo, hi) = if p0 <= p1 { (p0, p1) } else { (p1, p0) };
        let overlap = hi.min(len) - lo.max(0.0);
        return if overlap > EPS_GEOM {
            SegmentRelation::CollinearOverlap
        } else if overlap >= -EPS_GEOM {
            SegmentRelation::Touch
        } else {
            SegmentRelation::Disjoint
        };
    }
    if !z(o_ta) && !z(o_tb) && !z(o_sa) && !z(o_sb) {
        if o_ta.signum() != o_tb.signum() && o_sa.signum() != o_sb.signum() {
            return SegmentRelation::ProperCross;
        }
        return SegmentRelation::Disjoint;
    }
    let touching = (z(o_ta) && s.dist_to_point(t.a) <= EPS_GEOM)
        || (z(o_tb) && s.dist_to_point(t.b) <= EPS_GEOM)
        || (z(o_sa) && t.dist_to_point(s.a) <= EPS_GEOM)
        || (z(o_sb) && t.dist_to_point(s.b) <= EPS_GEOM);
    if touching {
        SegmentRelation::Touch
    } else {
        SegmentRelation::Disjoint
    }
}

/// True iff the open interiors of `s` and `t` intersect transversally.
/// Endpoint contact and collinear overlap are not crossings; use
/// [`segment_relation`] to tell them apart.
pub fn properly_cross(s: &Segment2, t: &Segment2) -> bool {
    segment_relation(s, t) == SegmentRelation::ProperCross
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    vertices: Vec<Point2>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeomError> {
        if vertices.len() < 2 {
            return Err(GeomError::PolylineTooShort);
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GeomError::DegenerateSegment(w[0]));
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        *self.vertices.last().unwrap()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v }
    }

    /// Cumulative arc length at each vertex.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = Vec::with_capacity(self.vertices.len());
        let mut s = 0.0;
        acc.push(0.0);
        for (a, b) in self.segments() {
            s += a.dist(b);
            acc.push(s);
        }
        acc
    }

    /// Point at arc length `s` (clamped to `[0, length]`).
    pub fn point_at(&self, s: f64) -> Point2 {
        let cum = self.cumulative();
        let total = *cum.last().unwrap();
        let s = s.clamp(0.0, total);
        let i = match cum.partition_point(|&c| c <= s) {
            0 => 0,
            k => (k - 1).min(self.vertices.len() - 2),
        };
        let seg = cum[i + 1] - cum[i];
        let t = if seg > 0.0 { (s - cum[i]) / seg } else { 0.0 };
        self.vertices[i].lerp(self.vertices[i + 1], t)
    }

    /// The sub-polyline between arc lengths `s <= t`.
    pub fn sub_path(&self, s: f64, t: f64) -> Vec<Point2> {
        let cum = self.cumulative();
        let mut out = vec![self.point_at(s)];
        for (i, &c) in cum.iter().enumerate() {
            if c > s && c < t {
                out.push(self.vertices[i]);
            }
        }
        let end = self.point_at(t);
        if out.last() != Some(&end) {
            out.push(end);
        }
        out
    }
}

pub fn polyline_length(pts: &[Point2]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// A closed polygon given by its vertex ring (no repeated closing vertex).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    /// Builds a polygon and checks it is simple.
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeomError> {
        let p = Polygon::new_unchecked(vertices)?;
        if !p.is_simple() {
            return Err(GeomError::NotSimple);
        }
        Ok(p)
    }

    /// Builds a polygon checking only vertex count and finiteness.
    pub fn new_unchecked(vertices: Vec<Point2>) -> Result<Self, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::PolygonTooSmall);
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// Same ring with the opposite orientation, keeping vertex 0 first.
    pub fn reversed(&self) -> Polygon {
        let mut v = Vec::with_capacity(self.vertices.len());
        v.push(self.vertices[0]);
        v.extend(self.vertices[1..].iter().rev());
        Polygon { vertices: v }
    }

    pub fn oriented_ccw(self) -> Polygon {
        if self.signed_area() < 0.0 {
            self.reversed()
        } else {
            self
        }
    }

    pub fn oriented_cw(self) -> Polygon {
        if self.signed_area() > 0.0 {
            self.reversed()
        } else {
            self
        }
    }

    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        if self.signed_area().abs() <= EPS_GEOM {
            return false;
        }
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if a.dist(b) <= EPS_GEOM {
                return false;
            }
            for j in (i + 1)..n {
                let (c, d) = (self.vertices[j], self.vertices[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let s = Segment2 { a, b };
                let t = Segment2 { a: c, b: d };
                match segment_relation(&s, &t) {
                    SegmentRelation::Disjoint => {}
                    SegmentRelation::Touch if adjacent => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Crossing-number point-in-polygon test (no tolerance).
    pub fn contains_point(&self, p: Point2) -> bool {
        let mut inside = false;
        let n = self.vertices.len();
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[j]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    pub fn boundary_dist(&self, p: Point2) -> f64 {
        self.edges()
            .map(|(a, b)| dist_point_segment(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn transformed(&self, f: impl Fn(Point2) -> Point2) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
        }
    }

    /// Point at perimeter arc length `s` from vertex 0, going along the ring.
    pub fn point_at_arclength(&self, s: f64) -> Point2 {
        let total = self.perimeter();
        let mut s = s.rem_euclid(total);
        for (a, b) in self.edges() {
            let l = a.dist(b);
            if s <= l {
                return a.lerp(b, s / l);
            }
            s -= l;
        }
        self.vertices[0]
    }

    pub fn regular(n: usize, radius: f64, phase: f64) -> Polygon {
        let vertices = (0..n)
            .map(|k| Point2::polar(radius, phase + 2.0 * PI * k as f64 / n as f64))
            .collect();
        Polygon { vertices }
    }
}

/// Position of a point relative to a closed region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// Approach side for points on a two-sided slit, relative to the slit's
/// direction `a -> b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            _ => Err(format!("unknown side `{s}` (expected left|right)")),
        }
    }
}

/// A closed planar region: an outer simple polygon minus hole polygons,
/// with slit segments as additional two-sided boundary.
///
/// The outer ring is stored counterclockwise, holes clockwise.
#[derive(Clone, Debug)]
pub struct PlanarDomain {
    outer: Polygon,
    holes: Vec<Polygon>,
    slits: Vec<Segment2>,
    space: Arc<FreeSpace>,
    engine: OnceLock<Arc<PathEngine>>,
}

impl PlanarDomain {
    pub fn new(
        outer: Polygon,
        holes: Vec<Polygon>,
        slits: Vec<Segment2>,
    ) -> Result<Self, GeomError> {
        if !outer.is_simple() {
            return Err(GeomError::NotSimple);
        }
        let outer = outer.oriented_ccw();
        let mut hs = Vec::with_capacity(holes.len());
        for (i, h) in holes.into_iter().enumerate() {
            if !h.is_simple() {
                return Err(GeomError::InvalidHole(i, "not simple"));
            }
            let h = h.oriented_cw();
            if h.vertices().iter().any(|&p| !outer.contains_point(p) || outer.boundary_dist(p) <= EPS_GEOM) {
                return Err(GeomError::InvalidHole(i, "not strictly inside the outer boundary"));
            }
            if polygons_touch(&outer, &h) {
                return Err(GeomError::InvalidHole(i, "touches the outer boundary"));
            }
            for (j, g) in hs.iter().enumerate() {
                let g: &Polygon = g;
                if polygons_touch(g, &h)
                    || g.contains_point(h.vertices()[0])
                    || h.contains_point(g.vertices()[0])
                {
                    return Err(GeomError::InvalidHole(i, if j < i { "overlaps another hole" } else { "overlap" }));
                }
            }
            hs.push(h);
        }
        for (i, s) in slits.iter().enumerate() {
            if s.length() <= EPS_GEOM || !s.a.is_finite() || !s.b.is_finite() {
                return Err(GeomError::InvalidSlit(i, "degenerate"));
            }
            for (j, t) in slits.iter().enumerate().take(i) {
                match segment_relation(s, t) {
                    SegmentRelation::ProperCross => {
                        return Err(GeomError::CrossingSegments(j, i))
                    }
                    SegmentRelation::CollinearOverlap => {
                        return Err(GeomError::OverlappingSegments(j, i))
                    }
                    _ => {}
                }
            }
            for ring in std::iter::once(&outer).chain(hs.iter()) {
                for (a, b) in ring.edges() {
                    match segment_relation(s, &Segment2 { a, b }) {
                        SegmentRelation::ProperCross => {
                            return Err(GeomError::InvalidSlit(i, "crosses a polygon edge"))
                        }
                        SegmentRelation::CollinearOverlap => {
                            return Err(GeomError::InvalidSlit(i, "runs along a polygon edge"))
                        }
                        _ => {}
                    }
                }
            }
        }
        let space = FreeSpace::new(outer.clone(), hs.clone(), slits.clone());
        for (i, s) in slits.iter().enumerate() {
            for p in [s.a, s.b, s.midpoint()] {
                if space.locate(p) == Location::Exterior {
                    return Err(GeomError::InvalidSlit(i, "outside the region"));
                }
            }
        }
        if !boundary_touch_graph_is_forest(&outer, &hs, &slits) {
            return Err(GeomError::DisconnectedInterior);
        }
        Ok(PlanarDomain {
            outer,
            holes: hs,
            slits,
            space: Arc::new(space),
            engine: OnceLock::new(),
        })
    }

    pub fn polygon(outer: Polygon) -> Result<Self, GeomError> {
        PlanarDomain::new(outer, Vec::new(), Vec::new())
    }

    pub fn outer(&self) -> &Polygon {
        &self.outer
    }

    pub fn holes(&self) -> &[Polygon] {
        &self.holes
    }

    pub fn slits(&self) -> &[Segment2] {
        &self.slits
    }

    pub(crate) fn space(&self) -> &Arc<FreeSpace> {
        &self.space
    }

    /// Shortest-path engine over this domain, built on first use.
    pub(crate) fn engine(&self) -> &Arc<PathEngine> {
        self.engine
            .get_or_init(|| Arc::new(PathEngine::new(self.space.clone(), Vec::new())))
    }

    /// Applies a point map to every piece; the map must be a similarity.
    pub fn transformed(&self, f: impl Fn(Point2) -> Point2 + Copy) -> Result<Self, GeomError> {
        PlanarDomain::new(
            self.outer.transformed(f),
            self.holes.iter().map(|h| h.transformed(f)).collect(),
            self.slits
                .iter()
                .map(|s| Segment2 { a: f(s.a), b: f(s.b) })
                .collect(),
        )
    }

    /// Euclidean distance from `p` to the nearest boundary piece.
    pub fn boundary_dist(&self, p: Point2) -> f64 {
        self.space.boundary_dist(p)
    }
}

fn polygons_touch(p: &Polygon, q: &Polygon) -> bool {
    p.edges().any(|(a, b)| {
        q.edges().any(|(c, d)| {
            segment_relation(&Segment2 { a, b }, &Segment2 { a: c, b: d }) != SegmentRelation::Disjoint
        })
    })
}

/// Int Y stays connected iff the contact graph of boundary pieces (outer
/// ring, holes, slits; one edge per distinct contact point) has no cycle.
fn boundary_touch_graph_is_forest(outer: &Polygon, holes: &[Polygon], slits: &[Segment2]) -> bool {
    let n = 1 + holes.len() + slits.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let rings: Vec<&Polygon> = std::iter::once(outer).chain(holes.iter()).collect();
    let mut contacts: Vec<(usize, usize)> = Vec::new();
    for (si, s) in slits.iter().enumerate() {
        let node = 1 + holes.len() + si;
        for (ri, ring) in rings.iter().enumerate() {
            for p in [s.a, s.b] {
                if ring.boundary_dist(p) <= EPS_GEOM {
                    contacts.push((node, ri));
                }
            }
        }
        for (ti, t) in slits.iter().enumerate().take(si) {
            let other = 1 + holes.len() + ti;
            let mut pts: Vec<Point2> = Vec::new();
            for p in [s.a, s.b] {
                if t.dist_to_point(p) <= EPS_GEOM {
                    pts.push(p);
                }
            }
            for p in [t.a, t.b] {
                if s.dist_to_point(p) <= EPS_GEOM && !pts.iter().any(|q| q.dist(p) <= EPS_GEOM) {
                    pts.push(p);
                }
            }
            contacts.extend(std::iter::repeat_n((node, other), pts.len()));
        }
    }
    for (a, b) in contacts {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Classifies `p` as interior, boundary (within [`EPS_GEOM`]), or exterior.
pub fn contains(domain: &PlanarDomain, p: Point2) -> Location {
    domain.space.locate(p)
}

/// Moves a boundary point `p` a distance `delta` into the interior along the
/// bisector of the free angular sector at `p`.
///
/// Points with more than one free sector (slit interiors, slit roots)
/// require a side `hint`.
pub fn inward_offset(
    domain: &PlanarDomain,
    p: Point2,
    delta: f64,
    hint: Option<Side>,
) -> Result<Point2, GeomError> {
    domain.space.inward_offset(p, delta, hint)
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    pub fn scale(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment3 {
    pub a: Point3,
    pub b: Point3,
}

impl Segment3 {
    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Sine of the angle between the segment's endpoints seen from the
    /// origin; zero when the segment lies on a ray from the origin.
    pub fn ray_residual(&self) -> f64 {
        let c = self.a.cross(self.b).norm();
        let n = self.a.norm() * self.b.norm();
        if n == 0.0 {
            0.0
        } else {
            c / n
        }
    }
}

/// Closest distance between two 3-D segments.
pub fn dist_segment3(s: &Segment3, t: &Segment3) -> f64 {
    let d1 = s.b - s.a;
    let d2 = t.b - t.a;
    let r = s.a - t.a;
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);
    let (mut sc, mut tc);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return s.a.dist(t.a);
    }
    if a <= f64::EPSILON {
        sc = 0.0;
        tc = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if e <= f64::EPSILON {
            tc = 0.0;
            sc = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            sc = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            tc = (b * sc + f) / e;
            if tc < 0.0 {
                tc = 0.0;
                sc = (-c / a).clamp(0.0, 1.0);
            } else if tc > 1.0 {
                tc = 1.0;
                sc = ((b - c) / a).clamp(0.0, 1.0);
            }
        }
    }
    let p = s.a + d1.scale(sc);
    let q = t.a + d2.scale(tc);
    p.dist(q)
}

/// A discretized ruled surface: consecutive rulings sampled along a
/// parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strip3 {
    rulings: Vec<Segment3>,
}

impl Strip3 {
    pub fn new(rulings: Vec<Segment3>) -> Result<Self, GeomError> {
        if rulings.len() < 2 {
            return Err(GeomError::StripTooShort);
        }
        Ok(Strip3 { rulings })
    }

    pub fn rulings(&self) -> &[Segment3] {
        &self.rulings
    }

    pub fn max_ray_residual(&self) -> f64 {
        self.rulings
            .iter()
            .map(Segment3::ray_residual)
            .fold(0.0, f64::max)
    }
}
