//! Radial obstacle segments inside the angle AOD, the radius layers, and
//! the confined length bound they force.

use std::f64::consts::{FRAC_PI_6, TAU};

use serde::{Deserialize, Serialize};

use crate::error::ConstructionError;
use crate::geom::{Point2, Polygon, Polyline, Segment2, EPS_GEOM};
use crate::shortest_path::{shortest_path, shortest_path_confined, ObstacleScene, PathResult};

/// Largest supported number of levels.
pub const MAX_LEVELS: usize = 5;

/// Opening of the angle AOD.
pub const APEX_ANGLE: f64 = FRAC_PI_6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentFamilySpec {
    pub levels: usize,
}

impl SegmentFamilySpec {
    pub fn new(levels: usize) -> Result<Self, ConstructionError> {
        let s = SegmentFamilySpec { levels };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        if self.levels == 0 || self.levels > MAX_LEVELS {
            return Err(ConstructionError::SpecInvalid(format!(
                "levels must be in 1..={MAX_LEVELS}, got {}",
                self.levels
            )));
        }
        Ok(())
    }
}

pub fn point_a() -> Point2 {
    Point2::new(1.0, 0.0)
}

pub fn point_d() -> Point2 {
    Point2::polar(1.0, APEX_ANGLE)
}

/// The triangle with vertices `O`, `scale·A`, `scale·D`.
pub fn triangle(scale: f64) -> Polygon {
    Polygon::new(vec![Point2::ORIGIN, point_a() * scale, point_d() * scale]).expect("nondegenerate")
}

/// Number of segments on level `j`: the integer part of `(2π)^j`.
pub fn level_count(j: usize) -> usize {
    TAU.powi(j as i32).floor() as usize
}

pub fn family_count(levels: usize) -> usize {
    (1..=levels).map(level_count).sum()
}

/// Polar angle of the `k`-th segment on level `j`.
pub fn segment_angle(j: usize, k: usize) -> f64 {
    k as f64 * TAU.powi(-(j as i32)) * APEX_ANGLE
}

/// Inner radius of level `j`; the outer radius is eleven times larger.
pub fn inner_radius(j: usize) -> f64 {
    0.5f64.powi(j as i32)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySegment {
    pub level: usize,
    pub index: usize,
    pub segment: Segment2,
}

pub fn family_members(spec: &SegmentFamilySpec) -> Result<Vec<FamilySegment>, ConstructionError> {
    spec.validate()?;
    let mut out = Vec::with_capacity(family_count(spec.levels));
    for j in 1..=spec.levels {
        let r = inner_radius(j);
        for k in 1..=level_count(j) {
            let phi = segment_angle(j, k);
            let segment = Segment2::new(Point2::polar(r, phi), Point2::polar(11.0 * r, phi))?;
            out.push(FamilySegment { level: j, index: k, segment });
        }
    }
    Ok(out)
}

pub fn segment_family(spec: &SegmentFamilySpec) -> Result<Vec<Segment2>, ConstructionError> {
    Ok(family_members(spec)?.into_iter().map(|m| m.segment).collect())
}

/// Obstacle scene: the family inside `scale·ΔAOD`, terminals A and D.
pub fn family_scene(spec: &SegmentFamilySpec, scale: f64, with_segments: bool) -> Result<ObstacleScene, ConstructionError> {
    let segs = if with_segments { segment_family(spec)? } else { Vec::new() };
    Ok(ObstacleScene::new(triangle(scale), segs, Vec::new(), vec![point_a(), point_d()])?)
}

/// Radius band `[4·2^-j, 8·2^-j]` of layer `j`.
pub fn layer_band(j: usize) -> (f64, f64) {
    (4.0 * 0.5f64.powi(j as i32), 8.0 * 0.5f64.powi(j as i32))
}

/// Floor radius `4·2^-J` used to confine paths at truncation `J`.
pub fn floor_radius(levels: usize) -> f64 {
    layer_band(levels).0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PigeonholeReport {
    pub j0: usize,
    pub coverage: f64,
    pub required: f64,
    /// Angular measure covered inside each layer `1..=J`.
    pub per_layer: Vec<f64>,
}

/// Finds a layer in which the path sweeps an angle of at least
/// `2^-j0·π/6`.
pub fn verify_pigeonhole(path: &Polyline, levels: usize) -> Result<PigeonholeReport, ConstructionError> {
    if levels == 0 {
        return Err(ConstructionError::SpecInvalid("levels must be positive".into()));
    }
    let lo = floor_radius(levels);
    let hi = 4.0;
    let tol = 1e-9;
    for &v in path.vertices() {
        let r = v.norm();
        if r < lo - tol || r > hi + tol {
            return Err(ConstructionError::PathNotConfined { lo, hi, at: v });
        }
    }
    // the radius along a segment is convex, so its minimum may be interior
    for (a, b) in path.segments() {
        let d = b - a;
        let t = (-(a.dot(d)) / d.dot(d)).clamp(0.0, 1.0);
        let m = a + d * t;
        if m.norm() < lo - tol {
            return Err(ConstructionError::PathNotConfined { lo, hi, at: m });
        }
    }
    let mut per_layer = Vec::with_capacity(levels);
    for j in 1..=levels {
        let (rl, rh) = layer_band(j);
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        for (a, b) in path.segments() {
            for (s, t) in clip_to_annulus(a, b, rl, rh) {
                let pa = a.lerp(b, s).angle();
                let pb = a.lerp(b, t).angle();
                intervals.push((pa.min(pb), pa.max(pb)));
            }
        }
        per_layer.push(union_measure(&mut intervals));
    }
    for (i, &c) in per_layer.iter().enumerate() {
        let j = i + 1;
        let required = 0.5f64.powi(j as i32) * APEX_ANGLE;
        if c >= required - 1e-12 {
            return Ok(PigeonholeReport { j0: j, coverage: c, required, per_layer });
        }
    }
    // unreachable for paths from A to D by the covering argument
    let best = per_layer
        .iter()
        .enumerate()
        .max_by(|x, y| (x.1 / 0.5f64.powi(x.0 as i32 + 1)).total_cmp(&(y.1 / 0.5f64.powi(y.0 as i32 + 1))))
        .map(|(i, c)| (i + 1, *c))
        .unwrap();
    Ok(PigeonholeReport {
        j0: 0,
        coverage: best.1,
        required: 0.5f64.powi(best.0 as i32) * APEX_ANGLE,
        per_layer,
    })
}

impl PigeonholeReport {
    pub fn satisfied(&self) -> bool {
        self.j0 > 0
    }
}

/// Parameter sub-intervals of `a + t(b − a)`, `t ∈ [0,1]`, with radius in
/// `[rl, rh]`. At most two intervals since the squared radius is a convex
/// quadratic.
pub fn clip_to_annulus(a: Point2, b: Point2, rl: f64, rh: f64) -> Vec<(f64, f64)> {
    let d = b - a;
    let qa = d.dot(d);
    let qb = 2.0 * a.dot(d);
    let qc = a.dot(a);
    // roots of |a + t d|^2 = r^2
    let roots = |r: f64| -> Option<(f64, f64)> {
        let disc = qb * qb - 4.0 * qa * (qc - r * r);
        if disc < 0.0 {
            None
        } else {
            let s = disc.sqrt();
            Some(((-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)))
        }
    };
    // inside the outer circle
    let (o0, o1) = match roots(rh) {
        None => return Vec::new(),
        Some((x, y)) => (x.max(0.0), y.min(1.0)),
    };
    if o0 >= o1 {
        return Vec::new();
    }
    match roots(rl) {
        None => vec![(o0, o1)],
        Some((i0, i1)) => {
            let mut out = Vec::new();
            if i0 > o0 {
                out.push((o0, i0.min(o1)));
            }
            if i1 < o1 {
                out.push((i1.max(o0), o1));
            }
            out.retain(|(s, t)| t > s);
            out
        }
    }
}

fn union_measure(iv: &mut [(f64, f64)]) -> f64 {
    iv.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for &(s, t) in iv.iter() {
        cur = match cur {
            None => Some((s, t)),
            Some((cs, ct)) if s <= ct => Some((cs, ct.max(t))),
            Some((cs, ct)) => {
                total += ct - cs;
                Some((s, t))
            }
        };
    }
    if let Some((cs, ct)) = cur {
        total += ct - cs;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthBoundConfig {
    pub m_circle: usize,
    pub tol_floor: f64,
    /// Triangle scale of the region paths must stay in.
    pub region_scale: f64,
}

impl Default for LengthBoundConfig {
    fn default() -> Self {
        LengthBoundConfig { m_circle: 256, tol_floor: 0.01, region_scale: 4.0 }
    }
}

/// Lower bound the confined lengths must meet.
pub const TARGET_LENGTH: f64 = 6.0;

#[derive(Clone, Debug, PartialEq)]
pub struct LengthBound {
    pub levels: usize,
    /// Confined shortest length; `+∞` when A and D are separated.
    pub length: f64,
    pub path: PathResult,
    pub floor_radius: f64,
    pub chord_error: f64,
    pub threshold: f64,
    pub passes: bool,
}

/// Confined shortest A→D length among the family at truncation `J`.
pub fn verify_length_bound(spec: &SegmentFamilySpec, cfg: &LengthBoundConfig) -> Result<LengthBound, ConstructionError> {
    spec.validate()?;
    let scene = family_scene(spec, cfg.region_scale, true)?;
    confined_length(spec.levels, &scene, cfg)
}

/// Same confinement with the obstacle set replaced by `segments`.
pub fn confined_length_with(levels: usize, segments: Vec<Segment2>, cfg: &LengthBoundConfig) -> Result<LengthBound, ConstructionError> {
    let scene = ObstacleScene::new(triangle(cfg.region_scale), segments, Vec::new(), vec![point_a(), point_d()])?;
    confined_length(levels, &scene, cfg)
}

fn confined_length(levels: usize, scene: &ObstacleScene, cfg: &LengthBoundConfig) -> Result<LengthBound, ConstructionError> {
    let r = floor_radius(levels);
    let res = shortest_path_confined(scene, point_a(), point_d(), r, cfg.m_circle)?;
    let threshold = TARGET_LENGTH * (1.0 - cfg.tol_floor);
    Ok(LengthBound {
        levels,
        length: res.path.length,
        passes: res.path.length >= threshold,
        path: res.path,
        floor_radius: r,
        chord_error: res.chord_error,
        threshold,
    })
}

/// The same scene without the floor: paths may dive under every level.
pub fn unconfined_length(spec: &SegmentFamilySpec, region_scale: f64) -> Result<PathResult, ConstructionError> {
    let scene = family_scene(spec, region_scale, true)?;
    Ok(shortest_path(&scene, point_a(), point_d())?)
}

/// Levels whose segments run uninterrupted from the floor to beyond the
/// confining triangle; any one of them separates A from D.
pub fn separating_levels(levels: usize, region_scale: f64) -> Vec<usize> {
    let floor = floor_radius(levels);
    (1..=levels)
        .filter(|&j| inner_radius(j) <= floor + EPS_GEOM && 11.0 * inner_radius(j) >= region_scale)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn counts() {
        assert_eq!(level_count(1), 6);
        assert_eq!(level_count(2), 39);
        assert_eq!(family_count(1), 6);
        assert_eq!(family_count(2), 45);
        assert_eq!(segment_family(&SegmentFamilySpec::new(2).unwrap()).unwrap().len(), 45);
        assert!(SegmentFamilySpec::new(0).is_err());
        assert!(SegmentFamilySpec::new(6).is_err());
    }

    #[test]
    fn layers_tile() {
        for j in 2..=5 {
            assert_eq!(layer_band(j).1, layer_band(j - 1).0);
        }
        assert_eq!(layer_band(1).1, 4.0);
    }

    #[test]
    fn clip_examples() {
        // radial segment from r=1 to r=5 through layer [2,4]
        let iv = clip_to_annulus(Point2::new(1.0, 0.0), Point2::new(5.0, 0.0), 2.0, 4.0);
        assert_eq!(iv.len(), 1);
        assert!((iv[0].0 - 0.25).abs() < 1e-12 && (iv[0].1 - 0.75).abs() < 1e-12);
        // chord dipping under the inner circle gives two pieces
        let iv = clip_to_annulus(Point2::new(-3.0, 1.0), Point2::new(3.0, 1.0), 2.0, 4.0);
        assert_eq!(iv.len(), 2);
    }

    #[test]
    fn arc_at_radius_four_is_layer_one() {
        let pts: Vec<Point2> = (0..=64).map(|i| Point2::polar(3.999, APEX_ANGLE * i as f64 / 64.0)).collect();
        let mut v = vec![point_a()];
        v.extend(pts);
        v.push(point_d());
        let r = verify_pigeonhole(&Polyline::new(v).unwrap(), 2).unwrap();
        assert_eq!(r.j0, 1);
        assert!(r.coverage >= PI / 12.0);
    }

    #[test]
    fn unconfined_path_rejected() {
        let pl = Polyline::new(vec![point_a(), Point2::new(0.01, 0.0), point_d()]).unwrap();
        assert!(matches!(verify_pigeonhole(&pl, 2), Err(ConstructionError::PathNotConfined { .. })));
    }
}
