//! Test-side reference implementations, written without the library's
//! geometry so that agreement is evidence rather than tautology.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type P = [f64; 2];

fn sub(a: P, b: P) -> P {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: P, b: P) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn dist(a: P, b: P) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn turn(p: P, q: P, r: P) -> f64 {
    cross(sub(q, p), sub(r, p))
}

/// Interiors cross at a single point transversally.
pub fn crosses(p: P, q: P, r: P, s: P) -> bool {
    let e = 1e-14;
    let d1 = turn(r, s, p);
    let d2 = turn(r, s, q);
    let d3 = turn(p, q, r);
    let d4 = turn(p, q, s);
    ((d1 > e && d2 < -e) || (d1 < -e && d2 > e)) && ((d3 > e && d4 < -e) || (d3 < -e && d4 > e))
}

pub fn point_seg(p: P, a: P, b: P) -> f64 {
    let d = sub(b, a);
    let t = ((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1]);
    let t = t.clamp(0.0, 1.0);
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

pub fn seg_seg(a: P, b: P, c: P, d: P) -> f64 {
    if crosses(a, b, c, d) {
        return 0.0;
    }
    point_seg(a, c, d).min(point_seg(b, c, d)).min(point_seg(c, a, b)).min(point_seg(d, a, b))
}

/// Shortest path length in a convex room amid disjoint segments in general
/// position: Dijkstra over terminals and all endpoints, an edge being
/// admissible unless it crosses some segment.
pub fn brute_length(segs: &[(P, P)], a: P, b: P) -> f64 {
    let mut nodes = vec![a, b];
    for &(p, q) in segs {
        nodes.push(p);
        nodes.push(q);
    }
    let n = nodes.len();
    let seen = |i: usize, j: usize| !segs.iter().any(|&(p, q)| crosses(nodes[i], nodes[j], p, q));
    let mut d = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    d[0] = 0.0;
    for _ in 0..n {
        let u = match (0..n).filter(|&i| !done[i]).min_by(|&i, &j| d[i].total_cmp(&d[j])) {
            Some(u) if d[u].is_finite() => u,
            _ => break,
        };
        done[u] = true;
        for v in 0..n {
            if !done[v] && seen(u, v) {
                d[v] = d[v].min(d[u] + dist(nodes[u], nodes[v]));
            }
        }
    }
    d[1]
}

pub fn chord_clear(segs: &[(P, P)], a: P, b: P) -> bool {
    !segs.iter().any(|&(p, q)| crosses(a, b, p, q))
}

/// Random segment of length 0.1..0.45 inside the unit square.
fn random_seg(rng: &mut ChaCha8Rng) -> (P, P) {
    loop {
        let a = [rng.gen_range(0.02..0.98), rng.gen_range(0.02..0.98)];
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let l = rng.gen_range(0.1..0.45);
        let b = [a[0] + l * t.cos(), a[1] + l * t.sin()];
        if (0.02..0.98).contains(&b[0]) && (0.02..0.98).contains(&b[1]) {
            return (a, b);
        }
    }
}

/// Adds a segment kept at least `gap` away from the others.
pub fn push_segment(rng: &mut ChaCha8Rng, segs: &mut Vec<(P, P)>, keep_clear: &[P], gap: f64) {
    loop {
        let s = random_seg(rng);
        if segs.iter().all(|&(p, q)| seg_seg(s.0, s.1, p, q) > gap) && keep_clear.iter().all(|&t| point_seg(t, s.0, s.1) > gap) {
            segs.push(s);
            return;
        }
    }
}

/// Point of the unit square at least `gap` from every segment.
pub fn random_terminal(rng: &mut ChaCha8Rng, segs: &[(P, P)], gap: f64) -> P {
    loop {
        let t = [rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99)];
        if segs.iter().all(|&(p, q)| point_seg(t, p, q) > gap) {
            return t;
        }
    }
}

/// Segments separated by more than `gap` and `k` terminals clear of them.
pub fn random_instance(rng: &mut ChaCha8Rng, n_segs: usize, k: usize, gap: f64) -> (Vec<(P, P)>, Vec<P>) {
    let mut segs = Vec::new();
    for _ in 0..n_segs {
        push_segment(rng, &mut segs, &[], gap);
    }
    let terms = (0..k).map(|_| random_terminal(rng, &segs, gap)).collect();
    (segs, terms)
}

pub fn pt(p: P) -> relmetric::Point2 {
    relmetric::Point2::new(p[0], p[1])
}

pub fn unit_square() -> relmetric::Polygon {
    relmetric::Polygon::new(vec![pt([0.0, 0.0]), pt([1.0, 0.0]), pt([1.0, 1.0]), pt([0.0, 1.0])]).unwrap()
}

/// The same instance as a library scene in the unit square.
pub fn scene(segs: &[(P, P)], terms: &[P]) -> relmetric::ObstacleScene {
    let s = segs.iter().map(|&(a, b)| relmetric::Segment2::new(pt(a), pt(b)).unwrap()).collect();
    relmetric::ObstacleScene::new(unit_square(), s, vec![], terms.iter().map(|&t| pt(t)).collect()).unwrap()
}

/// Convex polygon: sorted random angles on an ellipse.
pub fn convex_polygon(rng: &mut ChaCha8Rng, n: usize) -> relmetric::Polygon {
    let (a, b): (f64, f64) = (rng.gen_range(0.8..1.5), rng.gen_range(0.5..1.0));
    let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    t.sort_by(f64::total_cmp);
    t.dedup_by(|x, y| (*x - *y).abs() < 1e-2);
    if t.len() < 3 {
        t = vec![0.0, 2.0, 4.0];
    }
    relmetric::Polygon::new(t.iter().map(|&s| pt([a * s.cos(), b * s.sin()])).collect()).unwrap()
}

/// Polyline from A to D that never dips under the floor of truncation
/// `levels` nor leaves the disk of radius 4: polar points with angular
/// steps at most 0.02 and radii kept at `floor/cos(0.01)` or more, so
/// every chord clears the floor. Leaves A and enters D radially.
pub fn synthetic_confined_path(rng: &mut ChaCha8Rng, levels: usize) -> Vec<relmetric::Point2> {
    use relmetric::constructions::family::{floor_radius, point_a, point_d, APEX_ANGLE};
    let step: f64 = 0.02;
    let lo = floor_radius(levels) / (0.5 * step).cos() * (1.0 + 1e-9);
    let hi = 3.99;
    let mut pts = vec![point_a()];
    let mut theta = 0.0;
    pts.push(relmetric::Point2::polar(rng.gen_range(lo..hi), theta));
    while theta < APEX_ANGLE {
        theta = (theta + rng.gen_range(-0.4..1.0) * step).clamp(0.0, APEX_ANGLE);
        pts.push(relmetric::Point2::polar(rng.gen_range(lo..hi), theta));
    }
    pts.push(point_d());
    pts
}
