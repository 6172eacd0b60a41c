//! Spiral strips in space: each planar segment is swept about the axis OA
//! along an Archimedes spiral, and rotated back into the angle AOD.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::ConstructionError;
use crate::geom::{dist_segment3, Point2, Point3, Segment3, Strip3};

use super::family::{family_members, inner_radius, segment_angle, SegmentFamilySpec, APEX_ANGLE};
use super::spiral::{segment_axis_distance, SpiralSpec};

/// Largest truncation the strip generator accepts.
pub const MAX_STRIP_LEVELS: usize = 3;

/// Axis OA in space; the angle AOD lies in the plane z = 0.
pub const AXIS: Point3 = Point3::new(1.0, 0.0, 0.0);

/// Ratio bound for triangles cut at a trapezium corner.
pub const STAR2_BOUND: f64 = 2.5;

/// Rotation about `axis` into the half-plane of the angle AOD: the first
/// coordinate runs along the axis, the second is the distance from it.
pub fn proj_rot(p: Point3, axis: Point3) -> Result<Point2, ConstructionError> {
    let a = axis.scale(1.0 / axis.norm());
    let along = p.dot(a);
    let perp = (p - a.scale(along)).norm();
    if perp == 0.0 && along >= 0.0 {
        return Ok(Point2::new(along, 0.0));
    }
    let ang = perp.atan2(along);
    if ang > APEX_ANGLE + 1e-12 {
        return Err(ConstructionError::OutsideCone(format!(
            "({}, {}, {}) is at angle {ang} from the axis",
            p.x, p.y, p.z
        )));
    }
    Ok(Point2::new(along, perp))
}

/// Point `x(ψ)` of the swept curve for segment `(j, k)`.
pub fn sweep_point(j: usize, k: usize, spiral: &SpiralSpec, psi: f64) -> Point3 {
    let c = inner_radius(j) * segment_angle(j, k).cos();
    let r = spiral.radius(psi);
    Point3::new(c, r * psi.cos(), r * psi.sin())
}

/// Ruling `{λ x(ψ) : λ ∈ [1, 11]}`.
pub fn ruling(p: Point3) -> Segment3 {
    Segment3 { a: p, b: p.scale(11.0) }
}

/// The planar image of a strip: corners `x`, `11x`, `11x_end`, `x_end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trapezium {
    pub vertices: [Point2; 4],
}

impl Trapezium {
    pub fn for_strip(j: usize, k: usize, spiral: &SpiralSpec) -> Self {
        let c = inner_radius(j) * segment_angle(j, k).cos();
        let x = Point2::new(c, spiral.rho0);
        let xe = Point2::new(c, spiral.radius(TAU * spiral.coils as f64));
        Trapezium { vertices: [x, x * 11.0, xe * 11.0, xe] }
    }

    /// Interior angle at each corner.
    pub fn angles(&self) -> [f64; 4] {
        let v = &self.vertices;
        std::array::from_fn(|i| {
            let a = v[(i + 1) % 4] - v[i];
            let b = v[(i + 3) % 4] - v[i];
            a.cross(b).abs().atan2(a.dot(b))
        })
    }

    /// Largest distance by which `p` falls outside; zero or negative inside.
    pub fn outside_by(&self, p: Point2) -> f64 {
        let v = &self.vertices;
        let area: f64 = (0..4).map(|i| v[i].cross(v[(i + 1) % 4])).sum();
        let s = area.signum();
        (0..4)
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % 4]);
                -s * (b - a).cross(p - a) / a.dist(b)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StripData {
    pub level: usize,
    pub index: usize,
    pub spiral: SpiralSpec,
    pub strip: Strip3,
    pub trapezium: Trapezium,
    /// Angles from the axis spanned by the strip, `[low, high]`.
    pub cone: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripsReport {
    pub strip_count: usize,
    pub ruling_count: usize,
    /// Smallest distance between rulings of different strips.
    pub min_distance: f64,
    pub closest_pair: (usize, usize),
    /// Smallest lower bound on strip distances from the cone separation.
    pub min_cone_bound: f64,
    pub max_ray_residual: f64,
    /// Largest deviation of a ruling's length from `10·|x(ψ)|`.
    pub max_length_error: f64,
    /// Largest amount a projected ruling endpoint leaves its trapezium.
    pub max_trapezium_excess: f64,
    /// Largest `| |proj_rot(p)| − |p| |` over ruling endpoints.
    pub max_norm_error: f64,
}

impl StripsReport {
    pub fn disjoint(&self) -> bool {
        self.min_distance > 0.0 && self.min_cone_bound > 0.0
    }
}

/// Angular gap from each family ray to its nearest neighbour, in family order.
pub fn angular_gaps(spec: &SegmentFamilySpec) -> Result<Vec<f64>, ConstructionError> {
    let members = family_members(spec)?;
    let mut order: Vec<(f64, usize)> = members.iter().enumerate().map(|(i, m)| (segment_angle(m.level, m.index), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut gaps = vec![f64::INFINITY; members.len()];
    for w in order.windows(2) {
        let g = w[1].0 - w[0].0;
        gaps[w[0].1] = gaps[w[0].1].min(g);
        gaps[w[1].1] = gaps[w[1].1].min(g);
    }
    Ok(gaps)
}

/// One spiral per family segment with the pitch chosen so each strip stays
/// within a third of its angular gap below its own ray.
pub fn default_strip_spirals(spec: &SegmentFamilySpec, coils: usize, samples_per_coil: usize) -> Result<Vec<SpiralSpec>, ConstructionError> {
    let members = family_members(spec)?;
    let gaps = angular_gaps(spec)?;
    Ok(members
        .iter()
        .zip(&gaps)
        .map(|(m, &g)| {
            let phi = segment_angle(m.level, m.index);
            let g = g.min(phi);
            let shrink = (1.0 - (phi - g / 3.0).tan() / phi.tan()).min(0.25);
            let rho0 = segment_axis_distance(m.level, m.index);
            SpiralSpec { rho0, coils, pitch: shrink * rho0 / (TAU * coils as f64), samples_per_coil }
        })
        .collect())
}

pub fn strips_3d(spec: &SegmentFamilySpec, spirals: &[SpiralSpec]) -> Result<(Vec<StripData>, StripsReport), ConstructionError> {
    spec.validate()?;
    if spec.levels > MAX_STRIP_LEVELS {
        return Err(ConstructionError::SpecInvalid(format!("strips support at most {MAX_STRIP_LEVELS} levels")));
    }
    let members = family_members(spec)?;
    if spirals.len() != members.len() {
        return Err(ConstructionError::SpecInvalid(format!("{} spirals for {} segments", spirals.len(), members.len())));
    }
    let mut data = Vec::with_capacity(members.len());
    let (mut resid, mut len_err, mut excess, mut norm_err) = (0.0f64, 0.0f64, f64::NEG_INFINITY, 0.0f64);
    for (m, sp) in members.iter().zip(spirals) {
        sp.validate_shape()?;
        if sp.samples_per_coil == 0 {
            return Err(ConstructionError::SpecInvalid("samples per coil must be positive".into()));
        }
        let want = segment_axis_distance(m.level, m.index);
        if (sp.rho0 - want).abs() > 1e-12 * want.max(1.0) {
            return Err(ConstructionError::SpecInvalid(format!(
                "spiral for segment ({}, {}) starts at radius {} instead of {want}",
                m.level, m.index, sp.rho0
            )));
        }
        let trap = Trapezium::for_strip(m.level, m.index, sp);
        let mut rulings = Vec::new();
        for psi in sp.parameters() {
            let x = sweep_point(m.level, m.index, sp, psi);
            let r = ruling(x);
            len_err = len_err.max((r.length() - 10.0 * x.norm()).abs());
            for p in [r.a, r.b] {
                let q = proj_rot(p, AXIS)?;
                norm_err = norm_err.max((q.norm() - p.norm()).abs());
                excess = excess.max(trap.outside_by(q));
            }
            rulings.push(r);
        }
        let strip = Strip3::new(rulings)?;
        resid = resid.max(strip.max_ray_residual());
        let c = inner_radius(m.level) * segment_angle(m.level, m.index).cos();
        let lo = sp.radius(TAU * sp.coils as f64).atan2(c);
        let hi = sp.rho0.atan2(c);
        data.push(StripData { level: m.level, index: m.index, spiral: *sp, strip, trapezium: trap, cone: (lo, hi) });
    }
    let (min_distance, closest_pair) = min_strip_distance(&data);
    let min_cone_bound = min_cone_bound(&data);
    let ruling_count = data.iter().map(|d| d.strip.rulings().len()).sum();
    let report = StripsReport {
        strip_count: data.len(),
        ruling_count,
        min_distance,
        closest_pair,
        min_cone_bound,
        max_ray_residual: resid,
        max_length_error: len_err,
        max_trapezium_excess: excess,
        max_norm_error: norm_err,
    };
    Ok((data, report))
}

fn min_norm(d: &StripData) -> f64 {
    d.strip.rulings().iter().map(|r| r.a.norm()).fold(f64::INFINITY, f64::min)
}

/// Lower bound from cone separation: points at angles differing by `Δ`
/// are at least `min|p|·sin Δ` apart. Zero when cones overlap.
pub fn cone_bound(a: &StripData, b: &StripData) -> f64 {
    let gap = (b.cone.0 - a.cone.1).max(a.cone.0 - b.cone.1);
    if gap <= 0.0 {
        return 0.0;
    }
    min_norm(a).min(min_norm(b)) * gap.min(std::f64::consts::FRAC_PI_2).sin()
}

fn min_cone_bound(data: &[StripData]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..data.len() {
        for j in i + 1..data.len() {
            best = best.min(cone_bound(&data[i], &data[j]));
        }
    }
    best
}

/// Exhaustive ruling-pair minimum over all strip pairs.
fn min_strip_distance(data: &[StripData]) -> (f64, (usize, usize)) {
    let pairs: Vec<(usize, usize)> = (0..data.len()).flat_map(|i| (i + 1..data.len()).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut best = f64::INFINITY;
            for r in data[i].strip.rulings() {
                for s in data[j].strip.rulings() {
                    best = best.min(dist_segment3(r, s));
                }
            }
            (best, (i, j))
        })
        .reduce(|| (f64::INFINITY, (0, 0)), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Star2Report {
    pub samples: usize,
    pub max_ratio: f64,
    /// Corner and side distances of the worst sample.
    pub worst: (usize, f64, f64),
    pub per_vertex_max: [f64; 4],
    /// `1/sin(θ/2)` at each corner: the supremum over triangles there.
    pub per_vertex_sup: [f64; 4],
    pub within_bound: bool,
}

/// `(a + b)/c` for the triangle with corner `v`, one point at distance `a`
/// along the next side and one at `b` along the previous side.
fn corner_ratio(t: &Trapezium, v: usize, a: f64, b: f64) -> f64 {
    let o = t.vertices[v];
    let p = o + (t.vertices[(v + 1) % 4] - o).normalized() * a;
    let q = o + (t.vertices[(v + 3) % 4] - o).normalized() * b;
    (a + b) / p.dist(q)
}

/// Sampled ratios of two sides over the third for triangles cut at the
/// corners; corners are visited in turn and the isosceles case at each is
/// always included.
pub fn verify_star2(t: &Trapezium, samples: usize, seed: u64) -> Star2Report {
    let samples = samples.max(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = &t.vertices;
    let side = |i: usize, d: usize| v[i].dist(v[(i + d) % 4]);
    let mut per = [0.0f64; 4];
    let mut worst = (0, 0.0, 0.0);
    let mut best = 0.0f64;
    let mut record = |i: usize, a: f64, b: f64, per: &mut [f64; 4]| {
        let r = corner_ratio(t, i, a, b);
        per[i] = per[i].max(r);
        if r > best {
            best = r;
            worst = (i, a, b);
        }
    };
    for i in 0..4 {
        let m = side(i, 1).min(side(i, 3));
        record(i, 0.5 * m, 0.5 * m, &mut per);
    }
    for s in 4..samples {
        let i = s % 4;
        let a = side(i, 1) * rng.gen_range(1e-6..=1.0);
        let b = side(i, 3) * rng.gen_range(1e-6..=1.0);
        record(i, a, b, &mut per);
    }
    let ang = t.angles();
    Star2Report {
        samples,
        max_ratio: best,
        worst,
        per_vertex_max: per,
        per_vertex_sup: std::array::from_fn(|i| 1.0 / (0.5 * ang[i]).sin()),
        within_bound: best <= STAR2_BOUND,
    }
}

/// `(1/2)·sin(π/3) > 2/5`, decided in integers: `5√3 > 8 ⇔ 75 > 64`.
pub fn star2_constant_holds() -> bool {
    5 * 5 * 3 > 8 * 8
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_6;

    #[test]
    fn proj_rot_basics() {
        let p = Point3::new(0.9, 0.3, 0.0);
        let q = proj_rot(p, AXIS).unwrap();
        assert_eq!((q.x, q.y), (0.9, 0.3));
        let r = Point3::new(0.9, 0.2, -0.25);
        assert!((proj_rot(r, AXIS).unwrap().norm() - r.norm()).abs() < 1e-15);
        assert!(matches!(proj_rot(Point3::new(0.5, 1.0, 0.0), AXIS), Err(ConstructionError::OutsideCone(_))));
        let edge = Point3::new(FRAC_PI_6.cos(), 0.0, FRAC_PI_6.sin());
        assert!(proj_rot(edge, AXIS).is_ok());
    }

    #[test]
    fn trapezium_angles() {
        let sp = SpiralSpec::new(segment_axis_distance(1, 3), 2, 1e-3);
        let t = Trapezium::for_strip(1, 3, &sp);
        let phi = segment_angle(1, 3);
        let a = t.angles();
        assert!((a[0] - (std::f64::consts::FRAC_PI_2 + phi)).abs() < 1e-12);
        assert!((a[1] - (std::f64::consts::FRAC_PI_2 - phi)).abs() < 1e-12);
        assert!((a.iter().sum::<f64>() - TAU).abs() < 1e-12);
        assert!(t.outside_by(Point2::new(1.0, 0.01)) > 0.0);
    }

    #[test]
    fn strips_level_one() {
        let spec = SegmentFamilySpec::new(1).unwrap();
        let sp = default_strip_spirals(&spec, 2, 16).unwrap();
        let (data, rep) = strips_3d(&spec, &sp).unwrap();
        assert_eq!(data.len(), 6);
        assert!(rep.disjoint());
        assert!(rep.min_distance >= rep.min_cone_bound);
        assert!(rep.max_ray_residual <= 1e-9);
        assert!(rep.max_trapezium_excess <= 1e-12);
    }

    #[test]
    fn star2_isosceles() {
        let sp = SpiralSpec::new(segment_axis_distance(1, 5), 2, 1e-3);
        let t = Trapezium::for_strip(1, 5, &sp);
        let rep = verify_star2(&t, 1000, 7);
        assert!(rep.within_bound);
        for i in 0..4 {
            assert!(rep.per_vertex_max[i] <= rep.per_vertex_sup[i] * (1.0 + 1e-12));
        }
        assert!(star2_constant_holds());
    }

    #[test]
    fn rejects_wrong_spiral() {
        let spec = SegmentFamilySpec::new(1).unwrap();
        let mut sp = default_strip_spirals(&spec, 2, 16).unwrap();
        sp[0].rho0 *= 2.0;
        assert!(strips_3d(&spec, &sp).is_err());
        assert!(strips_3d(&SegmentFamilySpec::new(4).unwrap(), &sp).is_err());
    }
}
