//! Exact Euclidean shortest paths amid segment and polygon obstacles.
//!
//! Paths bend only at reflex free sectors of obstacle vertices, so the
//! search runs over a visibility graph whose nodes are (point, sector)
//! pairs. Small scenes get a precomputed graph; large ones evaluate
//! visibility lazily from each settled node.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::PathError;
use crate::geom::{segment_relation, Location, PlanarDomain, Point2, Polygon, Polyline, Segment2, SegmentRelation, Side, EPS_GEOM};
use crate::space::{FreeSpace, Sector};

/// Above this many graph nodes visibility is evaluated on demand.
const LAZY_NODE_THRESHOLD: usize = 1500;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstacleScene {
    pub boundary: Polygon,
    pub obstacle_segments: Vec<Segment2>,
    pub obstacle_polygons: Vec<Polygon>,
    pub terminals: Vec<Point2>,
}

impl ObstacleScene {
    pub fn new(
        boundary: Polygon,
        obstacle_segments: Vec<Segment2>,
        obstacle_polygons: Vec<Polygon>,
        terminals: Vec<Point2>,
    ) -> Result<Self, PathError> {
        let s = ObstacleScene { boundary, obstacle_segments, obstacle_polygons, terminals };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), PathError> {
        if !self.boundary.is_simple() {
            return Err(PathError::SceneInvalid("boundary polygon is not simple".into()));
        }
        for (i, p) in self.obstacle_polygons.iter().enumerate() {
            if !p.is_simple() {
                return Err(PathError::SceneInvalid(format!("obstacle polygon {i} is not simple")));
            }
        }
        check_segments_disjoint(&self.obstacle_segments)?;
        let space = self.free_space();
        for &t in &self.terminals {
            if space.locate(t) == Location::Exterior {
                return Err(PathError::BadTerminal(t));
            }
        }
        Ok(())
    }

    /// The same problem on a validated domain: holes become obstacle
    /// polygons, slits become obstacle segments.
    pub fn from_domain(domain: &PlanarDomain, terminals: Vec<Point2>) -> ObstacleScene {
        ObstacleScene {
            boundary: domain.outer().clone(),
            obstacle_segments: domain.slits().to_vec(),
            obstacle_polygons: domain.holes().to_vec(),
            terminals,
        }
    }

    pub(crate) fn free_space(&self) -> FreeSpace {
        FreeSpace::new(
            self.boundary.clone().oriented_ccw(),
            self.obstacle_polygons.clone(),
            self.obstacle_segments.clone(),
        )
    }
}

/// Pairwise crossing/overlap check using a sweep over x-extents.
pub(crate) fn check_segments_disjoint(segs: &[Segment2]) -> Result<(), PathError> {
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&i, &j| segs[i].a.x.min(segs[i].b.x).total_cmp(&segs[j].a.x.min(segs[j].b.x)));
    for (oi, &i) in order.iter().enumerate() {
        let xmax = segs[i].a.x.max(segs[i].b.x) + EPS_GEOM;
        for &j in &order[oi + 1..] {
            if segs[j].a.x.min(segs[j].b.x) > xmax {
                break;
            }
            match segment_relation(&segs[i], &segs[j]) {
                SegmentRelation::ProperCross => {
                    return Err(PathError::SceneInvalid(format!("obstacle segments {} and {} cross", i.min(j), i.max(j))))
                }
                SegmentRelation::CollinearOverlap => {
                    return Err(PathError::SceneInvalid(format!("obstacle segments {} and {} overlap", i.min(j), i.max(j))))
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// A path endpoint with an optional approach side for two-sided pieces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Terminal {
    pub point: Point2,
    pub hint: Option<Side>,
}

impl Terminal {
    pub fn new(point: Point2) -> Self {
        Terminal { point, hint: None }
    }

    pub fn with_hint(point: Point2, hint: Option<Side>) -> Self {
        Terminal { point, hint }
    }
}

impl From<Point2> for Terminal {
    fn from(p: Point2) -> Self {
        Terminal::new(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphNode {
    pub point: Point2,
    pub(crate) vertex: Option<usize>,
    pub(crate) sector: Sector,
}

impl GraphNode {
    pub fn sector_span(&self) -> f64 {
        self.sector.span
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathResult {
    /// Path vertices from source to target; empty when unreached.
    pub vertices: Vec<Point2>,
    pub length: f64,
    pub reached: bool,
    /// Graph certificate: query-space node ids along the path
    /// (`n` is the source, `n + 1` the target, `n` = node count).
    pub nodes: Vec<usize>,
}

impl PathResult {
    pub fn polyline(&self) -> Option<Polyline> {
        Polyline::new(self.vertices.clone()).ok()
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapKey(f64, usize);

impl Eq for HeapKey {}

impl Ord for HeapKey {
    fn cmp(&self, o: &Self) -> Ordering {
        // min-heap on estimate, then lexicographic node order
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Nodes of the free space plus (for small scenes) their visibility edges.
pub struct PathEngine {
    space: Arc<FreeSpace>,
    nodes: Vec<GraphNode>,
    adj: Option<Vec<Vec<(u32, f64)>>>,
}

impl std::fmt::Debug for PathEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PathEngine")
            .field("nodes", &self.nodes.len())
            .field("precomputed", &self.adj.is_some())
            .finish()
    }
}

impl PathEngine {
    pub(crate) fn new(space: Arc<FreeSpace>, extra: Vec<GraphNode>) -> PathEngine {
        let lazy = PathEngine::vertex_nodes(&space).len() + extra.len() > LAZY_NODE_THRESHOLD;
        PathEngine::with_mode(space, extra, !lazy)
    }

    pub(crate) fn with_mode(space: Arc<FreeSpace>, extra: Vec<GraphNode>, precompute: bool) -> PathEngine {
        let mut nodes = PathEngine::vertex_nodes(&space);
        nodes.extend(extra);
        let mut e = PathEngine { space, nodes, adj: None };
        if precompute {
            e.adj = Some(e.all_edges());
        }
        e
    }

    fn vertex_nodes(space: &FreeSpace) -> Vec<GraphNode> {
        let mut nodes = Vec::new();
        for (i, &p) in space.verts().iter().enumerate() {
            for s in space.vert_sectors(i) {
                if s.is_reflex() {
                    nodes.push(GraphNode { point: p, vertex: Some(i), sector: *s });
                }
            }
        }
        nodes
    }

    fn all_edges(&self) -> Vec<Vec<(u32, f64)>> {
        let n = self.nodes.len();
        let upper: Vec<Vec<(u32, f64)>> = (0..n)
            .into_par_iter()
            .map_init(
                || self.space.scratch(),
                |sc, i| {
                    let a = &self.nodes[i];
                    ((i + 1)..n)
                        .filter(|&j| self.visible(a, &self.nodes[j], sc))
                        .map(|j| (j as u32, a.point.dist(self.nodes[j].point)))
                        .collect()
                },
            )
            .collect();
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for (i, row) in upper.iter().enumerate() {
            for &(j, w) in row {
                adj[i].push((j, w));
                adj[j as usize].push((i as u32, w));
            }
        }
        for row in adj.iter_mut() {
            row.sort_by_key(|e| e.0);
        }
        adj
    }

    fn visible(&self, a: &GraphNode, b: &GraphNode, sc: &mut crate::space::Scratch) -> bool {
        self.space.edge_ok(a.point, &a.sector, a.vertex, b.point, &b.sector, b.vertex, sc)
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn is_precomputed(&self) -> bool {
        self.adj.is_some()
    }

    pub(crate) fn terminal_node(&self, t: Terminal) -> Result<GraphNode, PathError> {
        if self.space.locate(t.point) == Location::Exterior {
            return Err(PathError::BadTerminal(t.point));
        }
        let (vertex, sector) = self.space.select_sector(t.point, t.hint)?;
        Ok(GraphNode { point: t.point, vertex, sector })
    }

    pub fn shortest_path(&self, a: Terminal, b: Terminal) -> Result<PathResult, PathError> {
        let s = self.terminal_node(a)?;
        let t = self.terminal_node(b)?;
        Ok(self.query(&s, &t, None))
    }

    /// Search from `src` to `dst`; `skip` removes one undirected edge
    /// (query-space ids).
    pub(crate) fn query(&self, src: &GraphNode, dst: &GraphNode, skip: Option<(usize, usize)>) -> PathResult {
        let n = self.nodes.len();
        let (si, ti) = (n, n + 1);
        if src.point.dist(dst.point) <= EPS_GEOM && sectors_meet(&src.sector, &dst.sector) {
            return PathResult { vertices: vec![src.point], length: 0.0, reached: true, nodes: vec![si] };
        }
        let skipped = |u: usize, v: usize| matches!(skip, Some((x, y)) if (x == u && y == v) || (x == v && y == u));
        let node = |i: usize| -> &GraphNode {
            if i == si {
                src
            } else if i == ti {
                dst
            } else {
                &self.nodes[i]
            }
        };
        // edges from the source and into the target
        let fan = |end: &GraphNode, reverse: bool| -> Vec<bool> {
            (0..n)
                .into_par_iter()
                .map_init(
                    || self.space.scratch(),
                    |sc, j| {
                        if reverse {
                            self.visible(&self.nodes[j], end, sc)
                        } else {
                            self.visible(end, &self.nodes[j], sc)
                        }
                    },
                )
                .collect()
        };
        let (src_vis, dst_vis) = if self.adj.is_some() {
            (Some(fan(src, false)), Some(fan(dst, true)))
        } else {
            (None, None)
        };
        let direct = {
            let mut sc = self.space.scratch();
            self.visible(src, dst, &mut sc)
        };
        let h = |i: usize| node(i).point.dist(dst.point);
        let mut dist = vec![f64::INFINITY; n + 2];
        let mut prev = vec![usize::MAX; n + 2];
        let mut done = vec![false; n + 2];
        let mut heap = BinaryHeap::new();
        dist[si] = 0.0;
        heap.push(HeapKey(h(si), si));
        while let Some(HeapKey(_, u)) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            if u == ti {
                break;
            }
            let du = dist[u];
            let pu = node(u).point;
            let mut relax = |v: usize, w: f64, heap: &mut BinaryHeap<HeapKey>| {
                if done[v] || skipped(u, v) {
                    return;
                }
                let nd = du + w;
                if nd < dist[v] || (nd == dist[v] && u < prev[v]) {
                    dist[v] = nd;
                    prev[v] = u;
                    heap.push(HeapKey(nd + h(v), v));
                }
            };
            match (&self.adj, &src_vis, &dst_vis) {
                (Some(adj), Some(sv), Some(dv)) => {
                    if u == si {
                        for j in 0..n {
                            if sv[j] {
                                relax(j, pu.dist(self.nodes[j].point), &mut heap);
                            }
                        }
                        if direct {
                            relax(ti, pu.dist(dst.point), &mut heap);
                        }
                    } else {
                        for &(j, w) in &adj[u] {
                            relax(j as usize, w, &mut heap);
                        }
                        if dv[u] {
                            relax(ti, pu.dist(dst.point), &mut heap);
                        }
                    }
                }
                _ => {
                    let here = *node(u);
                    let open: Vec<usize> = (0..n).filter(|&j| !done[j]).collect();
                    let vis: Vec<(usize, f64)> = open
                        .par_iter()
                        .map_init(
                            || self.space.scratch(),
                            |sc, &j| {
                                let other = &self.nodes[j];
                                if self.visible(&here, other, sc) {
                                    Some((j, pu.dist(other.point)))
                                } else {
                                    None
                                }
                            },
                        )
                        .flatten()
                        .collect();
                    for (j, w) in vis {
                        relax(j, w, &mut heap);
                    }
                    let to_dst = if u == si {
                        direct
                    } else {
                        let mut sc = self.space.scratch();
                        self.visible(&here, dst, &mut sc)
                    };
                    if to_dst {
                        relax(ti, pu.dist(dst.point), &mut heap);
                    }
                }
            }
        }
        if !done[ti] {
            return PathResult { vertices: Vec::new(), length: f64::INFINITY, reached: false, nodes: Vec::new() };
        }
        let mut ids = vec![ti];
        let mut cur = ti;
        while cur != si {
            cur = prev[cur];
            ids.push(cur);
        }
        ids.reverse();
        let vertices: Vec<Point2> = ids.iter().map(|&i| node(i).point).collect();
        let length = crate::geom::polyline_length(&vertices);
        PathResult { vertices, length, reached: true, nodes: ids }
    }
}

fn sectors_meet(a: &Sector, b: &Sector) -> bool {
    a.is_full() || b.is_full() || ((a.start - b.start).rem_euclid(TAU) < 1e-9 && (a.span - b.span).abs() < 1e-9)
}

/// Explicit visibility graph with the scene terminals included as nodes.
pub struct VisibilityGraph {
    engine: PathEngine,
    terminals: Vec<usize>,
}

impl VisibilityGraph {
    pub fn build(scene: &ObstacleScene) -> Result<Self, PathError> {
        scene.validate()?;
        let space = Arc::new(scene.free_space());
        let base = PathEngine::vertex_nodes(&space).len();
        let mut extra = Vec::new();
        let mut terminals = Vec::new();
        for &t in &scene.terminals {
            let (vertex, secs) = space.sectors_at(t);
            for s in secs {
                terminals.push(base + extra.len());
                extra.push(GraphNode { point: t, vertex, sector: s });
            }
        }
        let engine = PathEngine::with_mode(space, extra, true);
        Ok(VisibilityGraph { engine, terminals })
    }

    pub fn node_count(&self) -> usize {
        self.engine.nodes.len()
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.engine.nodes
    }

    pub fn terminal_nodes(&self) -> &[usize] {
        &self.terminals
    }

    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let adj = self.engine.adj.as_ref().expect("graph is precomputed");
        let mut out = Vec::new();
        for (i, row) in adj.iter().enumerate() {
            for &(j, w) in row {
                if i < j as usize {
                    out.push((i, j as usize, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let adj = self.engine.adj.as_ref().expect("graph is precomputed");
        adj[i].iter().any(|e| e.0 as usize == j)
    }

    pub fn engine(&self) -> &PathEngine {
        &self.engine
    }

    pub fn shortest_path(&self, a: Terminal, b: Terminal) -> Result<PathResult, PathError> {
        self.engine.shortest_path(a, b)
    }

    /// Shortest path with one undirected query-space edge removed.
    pub fn shortest_path_without(&self, a: Terminal, b: Terminal, edge: (usize, usize)) -> Result<PathResult, PathError> {
        let s = self.engine.terminal_node(a)?;
        let t = self.engine.terminal_node(b)?;
        Ok(self.engine.query(&s, &t, Some(edge)))
    }
}

/// Globally shortest obstacle-avoiding path inside the scene boundary.
pub fn shortest_path(scene: &ObstacleScene, a: Point2, b: Point2) -> Result<PathResult, PathError> {
    shortest_path_terminals(scene, a.into(), b.into())
}

pub fn shortest_path_terminals(scene: &ObstacleScene, a: Terminal, b: Terminal) -> Result<PathResult, PathError> {
    scene.validate()?;
    let engine = PathEngine::new(Arc::new(scene.free_space()), Vec::new());
    engine.shortest_path(a, b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfinedPathResult {
    pub path: PathResult,
    /// The circumscribed polygon used as the forbidden floor.
    pub floor: Polygon,
    /// Largest radial excess of the floor polygon over the disk.
    pub chord_error: f64,
}

/// Polygon circumscribed about the circle of radius `r`, tangent at the
/// directions `tangent_dirs` and with no edge spanning more than `2π/m`.
pub fn circumscribed_floor(r: f64, m: usize, tangent_dirs: &[f64]) -> (Polygon, f64) {
    let mut dirs: Vec<f64> = tangent_dirs.iter().map(|t| t.rem_euclid(TAU)).collect();
    dirs.sort_by(f64::total_cmp);
    dirs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if dirs.is_empty() {
        dirs.push(0.0);
    }
    let mut tangents = Vec::new();
    for (i, &d) in dirs.iter().enumerate() {
        let next = if i + 1 < dirs.len() { dirs[i + 1] } else { dirs[0] + TAU };
        let arc = next - d;
        let pieces = ((m as f64 * arc / TAU).ceil() as usize).max(if dirs.len() == 1 { 3 } else { 1 });
        for k in 0..pieces {
            tangents.push(d + arc * k as f64 / pieces as f64);
        }
    }
    let k = tangents.len();
    let mut verts = Vec::with_capacity(k);
    let mut worst: f64 = 0.0;
    for i in 0..k {
        let a = tangents[i];
        let b = if i + 1 < k { tangents[i + 1] } else { tangents[0] + TAU };
        let half = 0.5 * (b - a);
        worst = worst.max(half);
        verts.push(Point2::polar(r / half.cos(), a + half));
    }
    let poly = Polygon::new_unchecked(verts).expect("at least three tangents");
    (poly, r * (1.0 / worst.cos() - 1.0))
}

/// Shortest path that also avoids the open disk of radius `r_min` about
/// the origin, replaced by a circumscribed polygon so that the result is a
/// valid lower bound for the disk constraint.
pub fn shortest_path_confined(
    scene: &ObstacleScene,
    a: Point2,
    b: Point2,
    r_min: f64,
    m_circle: usize,
) -> Result<ConfinedPathResult, PathError> {
    if !(r_min > 0.0) || m_circle < 3 {
        return Err(PathError::SceneInvalid("floor radius must be positive and m_circle >= 3".into()));
    }
    for p in [a, b] {
        if p.norm() < r_min - EPS_GEOM {
            return Err(PathError::TerminalInsideFloor { point: p, r_min });
        }
    }
    let (floor, chord_error) = circumscribed_floor(r_min, m_circle, &[a.angle(), b.angle()]);
    let mut s = scene.clone();
    s.obstacle_polygons.push(floor.clone());
    s.terminals = vec![a, b];
    let path = shortest_path(&s, a, b)?;
    Ok(ConfinedPathResult { path, floor, chord_error })
}
