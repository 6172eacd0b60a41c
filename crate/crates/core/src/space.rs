//! Free-space model shared by domains and obstacle scenes.
//!
//! The free region is the inside of an outer polygon, minus the interiors
//! of blocker polygons, minus a set of two-sided segments. All three are
//! stored as straight *elements*. Every point gets one or more free angular
//! *sectors*; a point on a two-sided segment has two, a free segment tip has
//! one sector of full turn bounded by the segment's ray.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use crate::error::GeomError;
use crate::geom::{dist_point_segment, signed_line_dist, Location, Point2, Polygon, Segment2, Side, EPS_GEOM};

const MAX_FEATURE_PROBE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ElemKind {
    Outer,
    Blocker(usize),
    Segment(usize),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Elem {
    pub a: usize,
    pub b: usize,
    pub pa: Point2,
    pub pb: Point2,
    pub kind: ElemKind,
}

/// A free angular wedge at a point, counterclockwise from `start`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    pub start: f64,
    pub span: f64,
    /// Far points of the bounding rays, used for collinearity tests.
    start_ray: Option<Point2>,
    end_ray: Option<Point2>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Dir {
    Inside,
    OnStart,
    OnEnd,
    /// Along the single ray of a full-turn sector.
    OnBoth,
    Outside,
}

pub(crate) const SIDE_L: u8 = 1;
pub(crate) const SIDE_R: u8 = 2;

impl Sector {
    pub const FULL: Sector = Sector { start: 0.0, span: TAU, start_ray: None, end_ray: None };

    pub fn is_full(&self) -> bool {
        self.span >= TAU
    }

    pub fn bisector(&self) -> f64 {
        self.start + 0.5 * self.span
    }

    /// A sector is worth a graph node only when it is reflex.
    pub fn is_reflex(&self) -> bool {
        self.span > PI + 1e-9
    }

    pub(crate) fn classify(&self, at: Point2, d: Point2) -> Dir {
        if self.start_ray.is_none() && self.end_ray.is_none() {
            return Dir::Inside;
        }
        let on = |r: Option<Point2>| match r {
            Some(z) => (z - at).dot(d) > 0.0 && signed_line_dist(at, at + d, z).abs() <= EPS_GEOM,
            None => false,
        };
        let s = on(self.start_ray);
        if self.is_full() {
            return if s { Dir::OnBoth } else { Dir::Inside };
        }
        if s {
            return Dir::OnStart;
        }
        if on(self.end_ray) {
            return Dir::OnEnd;
        }
        let rel = (d.angle() - self.start).rem_euclid(TAU);
        if rel < self.span {
            Dir::Inside
        } else {
            Dir::Outside
        }
    }

    pub fn contains_dir(&self, at: Point2, d: Point2) -> bool {
        !matches!(self.classify(at, d), Dir::Outside)
    }
}

/// Sides of travel from which the free space is reachable when arriving
/// along this classification.
pub(crate) fn arrival_need(c: Dir) -> u8 {
    match c {
        Dir::Inside | Dir::OnBoth => SIDE_L | SIDE_R,
        // free space lies counterclockwise of the reversed direction, i.e. to the right
        Dir::OnStart => SIDE_R,
        Dir::OnEnd => SIDE_L,
        Dir::Outside => 0,
    }
}

pub(crate) fn departure_sides(c: Dir) -> u8 {
    match c {
        Dir::Inside | Dir::OnBoth => SIDE_L | SIDE_R,
        Dir::OnStart => SIDE_L,
        Dir::OnEnd => SIDE_R,
        Dir::Outside => 0,
    }
}

struct Grid {
    x0: f64,
    y0: f64,
    cw: f64,
    ch: f64,
    nx: usize,
    ny: usize,
    start: Vec<u32>,
    items: Vec<u32>,
}

impl Grid {
    fn build(elems: &[Elem], lo: Point2, hi: Point2) -> Grid {
        let n = elems.len().max(1);
        let w = (hi.x - lo.x).max(1e-6);
        let h = (hi.y - lo.y).max(1e-6);
        let target = (2 * n).clamp(16, 1 << 18) as f64;
        let cell = (w * h / target).sqrt();
        let nx = ((w / cell).ceil() as usize).clamp(1, 2048);
        let ny = ((h / cell).ceil() as usize).clamp(1, 2048);
        let mut g = Grid {
            x0: lo.x,
            y0: lo.y,
            cw: w / nx as f64,
            ch: h / ny as f64,
            nx,
            ny,
            start: Vec::new(),
            items: Vec::new(),
        };
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); nx * ny];
        for (i, e) in elems.iter().enumerate() {
            g.for_cells(e.pa, e.pb, 4.0 * EPS_GEOM, |c| {
                buckets[c].push(i as u32);
                true
            });
        }
        let mut start = Vec::with_capacity(nx * ny + 1);
        let mut items = Vec::new();
        for b in buckets {
            start.push(items.len() as u32);
            items.extend(b);
        }
        start.push(items.len() as u32);
        g.start = start;
        g.items = items;
        g
    }

    fn col(&self, x: f64) -> usize {
        (((x - self.x0) / self.cw).floor().max(0.0) as usize).min(self.nx - 1)
    }

    fn row(&self, y: f64) -> usize {
        (((y - self.y0) / self.ch).floor().max(0.0) as usize).min(self.ny - 1)
    }

    fn cell(&self, c: usize) -> &[u32] {
        &self.items[self.start[c] as usize..self.start[c + 1] as usize]
    }

    /// Visits every cell within `pad` of segment `pq`, roughly in order from
    /// `p` to `q`. Stops early when `f` returns false.
    fn for_cells(&self, p: Point2, q: Point2, pad: f64, mut f: impl FnMut(usize) -> bool) -> bool {
        let (xmin, xmax) = (p.x.min(q.x) - pad, p.x.max(q.x) + pad);
        let c0 = self.col(xmin);
        let c1 = self.col(xmax);
        let dx = q.x - p.x;
        let cols: Box<dyn Iterator<Item = usize>> = if dx >= 0.0 {
            Box::new(c0..=c1)
        } else {
            Box::new((c0..=c1).rev())
        };
        for c in cols {
            let xa = (self.x0 + c as f64 * self.cw).max(xmin);
            let xb = (self.x0 + (c + 1) as f64 * self.cw).min(xmax);
            let (ya, yb) = if dx.abs() < 1e-300 {
                (p.y, q.y)
            } else {
                let ta = ((xa - p.x) / dx).clamp(0.0, 1.0);
                let tb = ((xb - p.x) / dx).clamp(0.0, 1.0);
                (p.y + (q.y - p.y) * ta, p.y + (q.y - p.y) * tb)
            };
            let r0 = self.row(ya.min(yb) - pad);
            let r1 = self.row(ya.max(yb) + pad);
            if q.y >= p.y {
                for r in r0..=r1 {
                    if !f(r * self.nx + c) {
                        return false;
                    }
                }
            } else {
                for r in (r0..=r1).rev() {
                    if !f(r * self.nx + c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn for_box(&self, p: Point2, rad: f64, mut f: impl FnMut(usize)) {
        let (c0, c1) = (self.col(p.x - rad), self.col(p.x + rad));
        let (r0, r1) = (self.row(p.y - rad), self.row(p.y + rad));
        for r in r0..=r1 {
            for c in c0..=c1 {
                f(r * self.nx + c);
            }
        }
    }
}

/// Reusable per-thread dedupe buffer for grid scans.
pub(crate) struct Scratch {
    stamp: Vec<u32>,
    cur: u32,
    events: Vec<(f64, usize)>,
}

impl Scratch {
    fn next(&mut self) -> u32 {
        self.cur = self.cur.wrapping_add(1);
        if self.cur == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.cur = 1;
        }
        self.cur
    }
}

#[derive(Clone, Debug)]
pub(crate) struct FreeSpace {
    outer: Polygon,
    blockers: Vec<Polygon>,
    verts: Vec<Point2>,
    elems: Vec<Elem>,
    vert_sectors: Vec<Vec<Sector>>,
    vert_key: HashMap<(i64, i64), Vec<usize>>,
    grid: std::sync::Arc<GridHolder>,
}

// Grid is not Debug/Clone-friendly; wrap it.
struct GridHolder(Grid);

impl std::fmt::Debug for GridHolder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Grid({}x{})", self.0.nx, self.0.ny)
    }
}

const KEY_SCALE: f64 = 1e7;

fn key(p: Point2) -> (i64, i64) {
    ((p.x * KEY_SCALE).floor() as i64, (p.y * KEY_SCALE).floor() as i64)
}

impl FreeSpace {
    pub fn new(outer: Polygon, blockers: Vec<Polygon>, segments: Vec<Segment2>) -> FreeSpace {
        let mut verts: Vec<Point2> = Vec::new();
        let mut vert_key: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut intern = |p: Point2, verts: &mut Vec<Point2>| -> usize {
            let (kx, ky) = key(p);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = vert_key.get(&(kx + dx, ky + dy)) {
                        for &i in list {
                            if verts[i].dist(p) <= EPS_GEOM {
                                return i;
                            }
                        }
                    }
                }
            }
            verts.push(p);
            vert_key.entry((kx, ky)).or_default().push(verts.len() - 1);
            verts.len() - 1
        };
        let mut elems = Vec::new();
        let mut push_ring = |ring: &Polygon, kind: ElemKind, verts: &mut Vec<Point2>, elems: &mut Vec<Elem>| {
            for (a, b) in ring.edges() {
                let (ia, ib) = (intern(a, verts), intern(b, verts));
                elems.push(Elem { a: ia, b: ib, pa: a, pb: b, kind });
            }
        };
        push_ring(&outer, ElemKind::Outer, &mut verts, &mut elems);
        for (i, b) in blockers.iter().enumerate() {
            push_ring(b, ElemKind::Blocker(i), &mut verts, &mut elems);
        }
        for (i, s) in segments.iter().enumerate() {
            let (ia, ib) = (intern(s.a, &mut verts), intern(s.b, &mut verts));
            elems.push(Elem { a: ia, b: ib, pa: s.a, pb: s.b, kind: ElemKind::Segment(i) });
        }
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &verts {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let grid = Grid::build(&elems, lo, hi);
        // rebuild the key map (the closure above owned a mutable borrow)
        let mut vk: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, &p) in verts.iter().enumerate() {
            vk.entry(key(p)).or_default().push(i);
        }
        let mut fs = FreeSpace {
            outer,
            blockers,
            verts,
            elems,
            vert_sectors: Vec::new(),
            vert_key: vk,
            grid: std::sync::Arc::new(GridHolder(grid)),
        };
        let sectors = (0..fs.verts.len()).map(|i| fs.compute_sectors(fs.verts[i], Some(i))).collect();
        fs.vert_sectors = sectors;
        fs
    }

    pub fn verts(&self) -> &[Point2] {
        &self.verts
    }

    pub fn vert_sectors(&self, i: usize) -> &[Sector] {
        &self.vert_sectors[i]
    }

    pub(crate) fn scratch(&self) -> Scratch {
        Scratch { stamp: vec![0; self.elems.len()], cur: 0, events: Vec::new() }
    }

    pub fn vertex_at(&self, p: Point2) -> Option<usize> {
        let (kx, ky) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = self.vert_key.get(&(kx + dx, ky + dy)) {
                    for &i in list {
                        if self.verts[i].dist(p) <= EPS_GEOM {
                            return Some(i);
                        }
                    }
                }
            }
        }
        None
    }

    fn grid(&self) -> &Grid {
        &self.grid.0
    }

    fn near_elems(&self, p: Point2, rad: f64) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        self.grid().for_box(p, rad, |c| {
            for &e in self.grid().cell(c) {
                out.push(e as usize);
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn boundary_dist(&self, p: Point2) -> f64 {
        self.elems
            .iter()
            .map(|e| dist_point_segment(p, e.pa, e.pb))
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum distance from a polyline to any element, with the nearest
    /// point on the polyline.
    pub fn clearance(&self, path: &[Point2]) -> (f64, Point2) {
        let mut best = (f64::INFINITY, path[0]);
        for w in path.windows(2) {
            for e in &self.elems {
                let c = crate::geom::closest_on_first(w[0], w[1], e.pa, e.pb);
                if c.0 < best.0 {
                    best = c;
                }
            }
        }
        best
    }

    fn strictly_free(&self, q: Point2) -> bool {
        self.outer.contains_point(q) && !self.blockers.iter().any(|b| b.contains_point(q))
    }

    pub fn locate(&self, p: Point2) -> Location {
        let on = self
            .near_elems(p, 2.0 * EPS_GEOM)
            .into_iter()
            .any(|e| dist_point_segment(p, self.elems[e].pa, self.elems[e].pb) <= EPS_GEOM);
        if !on {
            return if self.strictly_free(p) { Location::Interior } else { Location::Exterior };
        }
        let outside_outer = !self.outer.contains_point(p) && self.outer.boundary_dist(p) > EPS_GEOM;
        let in_blocker = self
            .blockers
            .iter()
            .any(|b| b.contains_point(p) && b.boundary_dist(p) > EPS_GEOM);
        if outside_outer || in_blocker {
            Location::Exterior
        } else {
            Location::Boundary
        }
    }

    /// Free sectors at `p`; `vertex` names `p` when it is an element endpoint.
    pub fn compute_sectors(&self, p: Point2, vertex: Option<usize>) -> Vec<Sector> {
        let mut rays: Vec<(f64, Point2)> = Vec::new();
        let mut min_inc_len = f64::INFINITY;
        let cand = self.near_elems(p, 2.0 * EPS_GEOM);
        let mut incident = Vec::new();
        for &ei in &cand {
            let e = &self.elems[ei];
            let at_a = vertex == Some(e.a) || e.pa.dist(p) <= EPS_GEOM;
            let at_b = vertex == Some(e.b) || e.pb.dist(p) <= EPS_GEOM;
            if at_a {
                rays.push(((e.pb - p).angle(), e.pb));
            } else if at_b {
                rays.push(((e.pa - p).angle(), e.pa));
            } else if dist_point_segment(p, e.pa, e.pb) <= EPS_GEOM {
                rays.push(((e.pa - p).angle(), e.pa));
                rays.push(((e.pb - p).angle(), e.pb));
            } else {
                continue;
            }
            incident.push(ei);
            min_inc_len = min_inc_len.min(e.pa.dist(e.pb));
        }
        if rays.is_empty() {
            return if self.strictly_free(p) { vec![Sector::FULL] } else { Vec::new() };
        }
        for r in rays.iter_mut() {
            r.0 = r.0.rem_euclid(TAU);
        }
        rays.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut uniq: Vec<(f64, Point2)> = Vec::new();
        for r in rays {
            match uniq.last() {
                Some(l) if r.0 - l.0 <= 1e-9 => {}
                _ => uniq.push(r),
            }
        }
        if uniq.len() > 1 && uniq[0].0 + TAU - uniq.last().unwrap().0 <= 1e-9 {
            uniq.pop();
        }
        // probe distance: stay clear of everything not touching p
        let mut feature = MAX_FEATURE_PROBE;
        for ei in self.near_elems(p, MAX_FEATURE_PROBE) {
            if incident.contains(&ei) {
                continue;
            }
            let e = &self.elems[ei];
            feature = feature.min(dist_point_segment(p, e.pa, e.pb));
        }
        let h = 0.5 * feature.min(min_inc_len).min(MAX_FEATURE_PROBE);
        let n = uniq.len();
        let mut out = Vec::new();
        for i in 0..n {
            let (s, sp) = uniq[i];
            let (e, ep) = if i + 1 < n { uniq[i + 1] } else { (uniq[0].0 + TAU, uniq[0].1) };
            // a single ray bounds a full turn; keep it exact
            let span = if n == 1 { TAU } else { e - s };
            let mid = s + 0.5 * span;
            let q = p + Point2::polar(h, mid);
            if self.strictly_free(q) {
                out.push(Sector { start: s, span, start_ray: Some(sp), end_ray: Some(ep) });
            }
        }
        out
    }

    /// Sectors at an arbitrary point, reusing vertex data where possible.
    pub fn sectors_at(&self, p: Point2) -> (Option<usize>, Vec<Sector>) {
        match self.vertex_at(p) {
            Some(i) => (Some(i), self.vert_sectors[i].clone()),
            None => (None, self.compute_sectors(p, None)),
        }
    }

    /// Picks the sector at `p` addressed by `hint`.
    pub fn select_sector(&self, p: Point2, hint: Option<Side>) -> Result<(Option<usize>, Sector), GeomError> {
        if !p.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let (v, secs) = self.sectors_at(p);
        match secs.len() {
            0 => Err(GeomError::OutsideRegion(p)),
            1 => Ok((v, secs[0])),
            _ => {
                let side = hint.ok_or(GeomError::HintRequired(p))?;
                let dir = self.side_direction(p, side).ok_or(GeomError::HintRequired(p))?;
                secs.iter()
                    .find(|s| s.classify(p, dir) == Dir::Inside)
                    .map(|s| (v, *s))
                    .ok_or(GeomError::HintRequired(p))
            }
        }
    }

    /// Direction pointing to the requested side of the first two-sided
    /// piece through `p` (falls back to any incident element).
    fn side_direction(&self, p: Point2, side: Side) -> Option<Point2> {
        let cand = self.near_elems(p, 2.0 * EPS_GEOM);
        let mut best: Option<&Elem> = None;
        for &ei in &cand {
            let e = &self.elems[ei];
            if dist_point_segment(p, e.pa, e.pb) > EPS_GEOM {
                continue;
            }
            let better = match (best, e.kind) {
                (None, _) => true,
                (Some(b), ElemKind::Segment(i)) => match b.kind {
                    ElemKind::Segment(j) => i < j,
                    _ => true,
                },
                _ => false,
            };
            if better {
                best = Some(e);
            }
        }
        let e = best?;
        let u = (e.pb - e.pa).normalized();
        let n = match side {
            Side::Left => u.perp(),
            Side::Right => -u.perp(),
        };
        let along = if e.pa.dist(p) <= EPS_GEOM {
            u
        } else if e.pb.dist(p) <= EPS_GEOM {
            -u
        } else {
            Point2::ORIGIN
        };
        Some(along + n)
    }

    pub fn inward_offset(&self, p: Point2, delta: f64, hint: Option<Side>) -> Result<Point2, GeomError> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(GeomError::OffsetFailed { point: p, delta });
        }
        if self.locate(p) != Location::Boundary {
            return Err(GeomError::NotOnBoundary(p));
        }
        let (v, s) = self.select_sector(p, hint)?;
        let q = p + Point2::polar(delta, s.bisector());
        if self.locate(q) != Location::Interior {
            return Err(GeomError::OffsetFailed { point: p, delta });
        }
        let mut sc = self.scratch();
        if !self.edge_ok(p, &s, v, q, &Sector::FULL, None, &mut sc) {
            return Err(GeomError::OffsetFailed { point: p, delta });
        }
        Ok(q)
    }

    /// Whether the straight segment from `p` (leaving through sector `sp`)
    /// to `q` (entering through sector `sq`) is the limit of free paths.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn edge_ok(
        &self,
        p: Point2,
        sp: &Sector,
        vp: Option<usize>,
        q: Point2,
        sq: &Sector,
        vq: Option<usize>,
        sc: &mut Scratch,
    ) -> bool {
        let d = q - p;
        let len = d.norm();
        if len <= EPS_GEOM {
            return false;
        }
        let out = sp.classify(p, d);
        let mut mask = departure_sides(out);
        if mask == 0 {
            return false;
        }
        let need_end = arrival_need(sq.classify(q, -d));
        if need_end == 0 {
            return false;
        }
        let u = d * (1.0 / len);
        let stamp = sc.next();
        sc.events.clear();
        let grid = self.grid();
        let mut blocked = false;
        {
            let stamps = &mut sc.stamp;
            let events = &mut sc.events;
            let (bx0, bx1) = (p.x.min(q.x) - EPS_GEOM, p.x.max(q.x) + EPS_GEOM);
            let (by0, by1) = (p.y.min(q.y) - EPS_GEOM, p.y.max(q.y) + EPS_GEOM);
            grid.for_cells(p, q, 2.0 * EPS_GEOM, |c| {
                for &ei in grid.cell(c) {
                    let ei = ei as usize;
                    if stamps[ei] == stamp {
                        continue;
                    }
                    stamps[ei] = stamp;
                    let e = &self.elems[ei];
                    if e.pa.x.max(e.pb.x) < bx0
                        || e.pa.x.min(e.pb.x) > bx1
                        || e.pa.y.max(e.pb.y) < by0
                        || e.pa.y.min(e.pb.y) > by1
                    {
                        continue;
                    }
                    let sa = u.cross(e.pa - p);
                    let sb = u.cross(e.pb - p);
                    for (s, pt, vi) in [(sa, e.pa, e.a), (sb, e.pb, e.b)] {
                        if s.abs() <= EPS_GEOM && Some(vi) != vp && Some(vi) != vq {
                            let t = (pt - p).dot(u);
                            if t > EPS_GEOM && t < len - EPS_GEOM {
                                events.push((t, vi));
                            }
                        }
                    }
                    if sa.abs() > EPS_GEOM && sb.abs() > EPS_GEOM && (sa > 0.0) != (sb > 0.0) {
                        let ev = e.pb - e.pa;
                        let el = ev.norm();
                        let rp = ev.cross(p - e.pa) / el;
                        let rq = ev.cross(q - e.pa) / el;
                        if rp.abs() > EPS_GEOM && rq.abs() > EPS_GEOM && (rp > 0.0) != (rq > 0.0) {
                            blocked = true;
                            return false;
                        }
                    }
                }
                true
            });
        }
        if blocked {
            return false;
        }
        if !sc.events.is_empty() {
            sc.events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            sc.events.dedup_by_key(|e| e.1);
            let mut last = usize::MAX;
            for &(_, w) in sc.events.iter() {
                if w == last {
                    continue;
                }
                last = w;
                let at = self.verts[w];
                let mut next = 0u8;
                for s in &self.vert_sectors[w] {
                    let ca = s.classify(at, -d);
                    let cd = s.classify(at, d);
                    if ca == Dir::Outside || cd == Dir::Outside {
                        continue;
                    }
                    if mask & arrival_need(ca) != 0 {
                        next |= departure_sides(cd);
                    }
                }
                mask = next;
                if mask == 0 {
                    return false;
                }
            }
        }
        mask & need_end != 0
    }
}
