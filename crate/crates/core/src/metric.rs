//! The boundary-relative metric: inward-offset limits, distance matrices,
//! axiom checks, geodesic extraction and convexity tests.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::MetricError;
use crate::geom::{Location, PlanarDomain, Point2, Polyline, Side, EPS_GEOM};
use crate::shortest_path::{PathResult, Terminal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extrapolation {
    /// Geodesic of the closed region, the exact limit for polygonal domains.
    Closure,
    /// Length at the smallest offset.
    LastValue,
    /// Linear extrapolation of the two smallest offsets to zero.
    Richardson,
}

impl std::str::FromStr for Extrapolation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closure" => Ok(Extrapolation::Closure),
            "last-value" | "last" => Ok(Extrapolation::LastValue),
            "richardson" => Ok(Extrapolation::Richardson),
            _ => Err(format!("unknown extrapolation `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub offsets: Vec<f64>,
    pub tol_metric: f64,
    pub extrapolation: Extrapolation,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { offsets: vec![1e-2, 1e-3, 1e-4], tol_metric: 1e-6, extrapolation: Extrapolation::Closure }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<(), MetricError> {
        if self.offsets.is_empty() {
            return Err(MetricError::BadConfig("offset list is empty".into()));
        }
        if self.offsets.iter().any(|d| !(*d > 0.0) || !d.is_finite()) {
            return Err(MetricError::BadConfig("offsets must be positive".into()));
        }
        if self.offsets.windows(2).any(|w| w[1] >= w[0]) {
            return Err(MetricError::BadConfig("offsets must be strictly decreasing".into()));
        }
        if !(self.tol_metric >= 0.0) {
            return Err(MetricError::BadConfig("tolerance must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub value: f64,
    /// `(δ, length)` for each offset that produced interior points.
    pub per_offset: Vec<(f64, f64)>,
    pub converged: bool,
    /// Shortest length in the closed region.
    pub closure: f64,
}

impl DistanceEstimate {
    pub fn is_unreachable(&self) -> bool {
        self.value.is_infinite()
    }

    fn exact(v: f64) -> Self {
        DistanceEstimate { value: v, per_offset: Vec::new(), converged: true, closure: v }
    }
}

/// Shortest path in the closed region; its length is the relative metric
/// for polygonal domains.
pub fn closure_path(domain: &PlanarDomain, x: Terminal, y: Terminal) -> Result<PathResult, MetricError> {
    for p in [x.point, y.point] {
        if domain.space().locate(p) == Location::Exterior {
            return Err(MetricError::Geom(crate::GeomError::OutsideRegion(p)));
        }
    }
    Ok(domain.engine().shortest_path(x, y)?)
}

/// The relative metric between `x` and `y`. Points on a two-sided piece
/// need a side hint. An infinite `value` means the two points cannot be
/// joined.
pub fn rho(domain: &PlanarDomain, x: Terminal, y: Terminal, cfg: &MetricConfig) -> Result<DistanceEstimate, MetricError> {
    cfg.validate()?;
    let closure = closure_path(domain, x, y)?.length;
    let lx = domain.space().locate(x.point);
    let ly = domain.space().locate(y.point);
    if lx == Location::Interior && ly == Location::Interior {
        return Ok(DistanceEstimate::exact(closure));
    }
    let mut per_offset = Vec::with_capacity(cfg.offsets.len());
    for &d in &cfg.offsets {
        let shift = |t: Terminal, loc: Location| -> Result<Point2, crate::GeomError> {
            if loc == Location::Boundary {
                domain.space().inward_offset(t.point, d, t.hint)
            } else {
                Ok(t.point)
            }
        };
        let (xs, ys) = match (shift(x, lx), shift(y, ly)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(crate::GeomError::OffsetFailed { .. }), _) | (_, Err(crate::GeomError::OffsetFailed { .. })) => {
                warn!("offset {d} too large near {} or {}; skipped", x.point, y.point);
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        };
        let l = domain.engine().shortest_path(Terminal::new(xs), Terminal::new(ys))?.length;
        per_offset.push((d, l));
    }
    if per_offset.is_empty() {
        return Err(MetricError::Geom(crate::GeomError::OffsetFailed {
            point: x.point,
            delta: *cfg.offsets.last().unwrap(),
        }));
    }
    let value = if closure.is_infinite() {
        f64::INFINITY
    } else {
        match cfg.extrapolation {
            Extrapolation::Closure => closure,
            Extrapolation::LastValue => per_offset.last().unwrap().1,
            Extrapolation::Richardson => {
                let n = per_offset.len();
                if n < 2 {
                    per_offset[0].1
                } else {
                    let (d0, l0) = per_offset[n - 2];
                    let (d1, l1) = per_offset[n - 1];
                    (l1 + (l1 - l0) * d1 / (d0 - d1)).max(0.0)
                }
            }
        }
    };
    let converged = if closure.is_infinite() {
        per_offset.iter().all(|p| p.1.is_infinite())
    } else {
        let diffs: Vec<f64> = per_offset.windows(2).map(|w| (w[0].1 - w[1].1).abs()).collect();
        let monotone = diffs.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        let (dl, ll) = *per_offset.last().unwrap();
        monotone && (ll - closure).abs() <= 2.0 * dl + 1e-9
    };
    if !converged {
        warn!("offset sequence for {} -> {} did not settle: {:?}", x.point, y.point, per_offset);
    }
    Ok(DistanceEstimate { value, per_offset, converged, closure })
}

/// Like [`rho`] but an infinite distance is an error.
pub fn rho_finite(domain: &PlanarDomain, x: Terminal, y: Terminal, cfg: &MetricConfig) -> Result<DistanceEstimate, MetricError> {
    let r = rho(domain, x, y, cfg)?;
    if r.is_unreachable() {
        return Err(MetricError::Unreachable(x.point, y.point));
    }
    Ok(r)
}

/// Symmetric matrix of [`rho`] values over `points`, one evaluation per
/// unordered pair.
pub fn distance_matrix(domain: &PlanarDomain, points: &[Terminal], cfg: &MetricConfig) -> Result<Vec<Vec<DistanceEstimate>>, MetricError> {
    cfg.validate()?;
    let n = points.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let vals: Vec<Result<DistanceEstimate, MetricError>> =
        pairs.par_iter().map(|&(i, j)| rho(domain, points[i], points[j], cfg)).collect();
    let mut m = vec![vec![DistanceEstimate::exact(0.0); n]; n];
    for (&(i, j), v) in pairs.iter().zip(vals) {
        let v = v?;
        m[i][j] = v.clone();
        m[j][i] = v;
    }
    Ok(m)
}

pub fn values(m: &[Vec<DistanceEstimate>]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(|e| e.value).collect()).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub symmetry_violations: Vec<(usize, usize)>,
    /// `(i, j, k)` with `M[i][k] > M[i][j] + M[j][k] + tol`.
    pub triangle_violations: Vec<(usize, usize, usize)>,
    /// Nonzero diagonal entries or negative entries.
    pub identity_violations: Vec<(usize, usize)>,
    pub non_finite: Vec<(usize, usize)>,
}

impl AxiomReport {
    pub fn total(&self) -> usize {
        self.symmetry_violations.len() + self.triangle_violations.len() + self.identity_violations.len() + self.non_finite.len()
    }

    pub fn is_clean(&self) -> bool {
        self.total() == 0
    }
}

pub fn check_metric_axioms(m: &[Vec<f64>], tol: f64) -> AxiomReport {
    let n = m.len();
    let mut r = AxiomReport::default();
    for i in 0..n {
        for j in 0..n {
            let v = m[i][j];
            if !v.is_finite() {
                r.non_finite.push((i, j));
                continue;
            }
            if (i == j && v.abs() > tol) || v < -tol {
                r.identity_violations.push((i, j));
            }
            if i < j && (v - m[j][i]).abs() > tol {
                r.symmetry_violations.push((i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let (a, b, c) = (m[i][k], m[i][j], m[j][k]);
                if a.is_finite() && b.is_finite() && c.is_finite() && a > b + c + tol {
                    r.triangle_violations.push((i, j, k));
                }
            }
        }
    }
    r
}

/// Terminals to try at `p`: both sides on two-sided points, else none.
pub(crate) fn side_candidates(domain: &PlanarDomain, p: Point2) -> Vec<Terminal> {
    if domain.space().sectors_at(p).1.len() > 1 {
        vec![Terminal::with_hint(p, Some(Side::Left)), Terminal::with_hint(p, Some(Side::Right))]
    } else {
        vec![Terminal::new(p)]
    }
}

fn closure_min(domain: &PlanarDomain, a: Point2, b: Point2) -> Result<f64, MetricError> {
    let mut best = f64::INFINITY;
    for ta in side_candidates(domain, a) {
        for tb in side_candidates(domain, b) {
            best = best.min(closure_path(domain, ta, tb)?.length);
        }
    }
    Ok(best)
}

/// Minimum number of grid points used for geodesic checks.
pub const MIN_GEODESIC_GRID: usize = 11;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCheck {
    pub path: Polyline,
    pub length: f64,
    pub grid: Vec<f64>,
    /// Largest `|ρ(γ(s), γ(t)) − (t − s)|` over grid pairs.
    pub max_deviation: f64,
    /// Largest `ρ(γ(s), γ(t)) − (t − s)`, clamped at zero.
    pub one_sided_excess: f64,
    /// Largest `length(γ|[s,t]) − (t − s)`.
    pub subpath_excess: f64,
}

/// Extracts the geodesic from `x` to `y` parametrized by arc length and
/// checks that the metric restricted to it is the parameter difference.
pub fn extract_geodesic(domain: &PlanarDomain, x: Terminal, y: Terminal, cfg: &MetricConfig) -> Result<GeodesicCheck, MetricError> {
    extract_geodesic_on_grid(domain, x, y, cfg, MIN_GEODESIC_GRID)
}

pub fn extract_geodesic_on_grid(
    domain: &PlanarDomain,
    x: Terminal,
    y: Terminal,
    cfg: &MetricConfig,
    grid_points: usize,
) -> Result<GeodesicCheck, MetricError> {
    cfg.validate()?;
    let res = closure_path(domain, x, y)?;
    if !res.reached {
        return Err(MetricError::Unreachable(x.point, y.point));
    }
    let path = res
        .polyline()
        .ok_or_else(|| MetricError::BadConfig("endpoints coincide".into()))?;
    let length = path.length();
    let n = grid_points.max(MIN_GEODESIC_GRID);
    let grid: Vec<f64> = (0..n).map(|i| length * i as f64 / (n - 1) as f64).collect();
    let pts: Vec<Point2> = grid.iter().map(|&t| path.point_at(t)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let rhos: Vec<Result<f64, MetricError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            if i == 0 && j == n - 1 {
                Ok(length)
            } else {
                closure_min(domain, pts[i], pts[j])
            }
        })
        .collect();
    let mut max_dev: f64 = 0.0;
    let mut one_sided: f64 = 0.0;
    let mut sub_excess: f64 = 0.0;
    for (&(i, j), r) in pairs.iter().zip(rhos) {
        let r = r?;
        let dt = grid[j] - grid[i];
        max_dev = max_dev.max((r - dt).abs());
        one_sided = one_sided.max(r - dt);
        let sub = crate::geom::polyline_length(&path.sub_path(grid[i], grid[j]));
        sub_excess = sub_excess.max(sub - dt);
    }
    Ok(GeodesicCheck { path, length, grid, max_deviation: max_dev, one_sided_excess: one_sided.max(0.0), subpath_excess: sub_excess })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityWitness {
    pub i: usize,
    pub j: usize,
    /// Point of the clipped geodesic closest to the boundary.
    pub at: Point2,
    pub clearance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    /// True at this sample resolution and clearance only.
    pub strictly_convex: bool,
    pub samples: usize,
    pub eta: f64,
    pub pairs_checked: usize,
    pub witnesses: Vec<ConvexityWitness>,
}

/// Scans every sample pair: the geodesic, with `eta` of arc length cut
/// from both ends, must stay strictly off the boundary.
pub fn check_strict_convexity(domain: &PlanarDomain, samples: &[Terminal], eta: f64, cfg: &MetricConfig) -> Result<ConvexityReport, MetricError> {
    cfg.validate()?;
    let n = samples.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let found: Vec<Result<Option<ConvexityWitness>, MetricError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let res = closure_path(domain, samples[i], samples[j])?;
            if !res.reached {
                return Err(MetricError::Unreachable(samples[i].point, samples[j].point));
            }
            let Some(pl) = res.polyline() else { return Ok(None) };
            let len = pl.length();
            if len <= 2.0 * eta {
                return Ok(None);
            }
            let inner = pl.sub_path(eta, len - eta);
            let (clear, at) = domain.space().clearance(&inner);
            Ok((clear <= EPS_GEOM).then_some(ConvexityWitness { i, j, at, clearance: clear }))
        })
        .collect();
    let mut witnesses = Vec::new();
    for f in found {
        if let Some(w) = f? {
            witnesses.push(w);
        }
    }
    Ok(ConvexityReport { strictly_convex: witnesses.is_empty(), samples: n, eta, pairs_checked: pairs.len(), witnesses })
}

/// [`check_strict_convexity`] for boundary samples only.
pub fn check_property_circ(domain: &PlanarDomain, samples: &[Terminal], eta: f64, cfg: &MetricConfig) -> Result<ConvexityReport, MetricError> {
    for s in samples {
        if domain.space().locate(s.point) != Location::Boundary {
            return Err(MetricError::Geom(crate::GeomError::NotOnBoundary(s.point)));
        }
    }
    check_strict_convexity(domain, samples, eta, cfg)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbientReport {
    pub max_discrepancy: f64,
    pub worst_pair: Option<usize>,
}

/// Largest gap between the relative metric and the Euclidean distance.
pub fn check_rho_equals_ambient(domain: &PlanarDomain, pairs: &[(Terminal, Terminal)], cfg: &MetricConfig) -> Result<AmbientReport, MetricError> {
    let mut worst = 0.0;
    let mut at = None;
    for (k, &(x, y)) in pairs.iter().enumerate() {
        let r = rho_finite(domain, x, y, cfg)?;
        let gap = (r.value - x.point.dist(y.point)).abs();
        if gap > worst || at.is_none() {
            worst = gap;
            at = Some(k);
        }
    }
    Ok(AmbientReport { max_discrepancy: worst, worst_pair: at })
}

/// `m` points equally spaced by perimeter length along the outer
/// boundary, starting at its first vertex.
pub fn outer_boundary_samples(domain: &PlanarDomain, m: usize) -> Vec<Point2> {
    let per = domain.outer().perimeter();
    (0..m).map(|i| domain.outer().point_at_arclength(per * i as f64 / m as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Polygon, Segment2};

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn square() -> PlanarDomain {
        PlanarDomain::polygon(Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]).unwrap()).unwrap()
    }

    fn slit_square() -> PlanarDomain {
        PlanarDomain::new(
            Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]).unwrap(),
            vec![],
            vec![Segment2::new(p(0.5, 0.0), p(0.5, 0.5)).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn rho_convex() {
        let cfg = MetricConfig::default();
        let r = rho(&square(), p(0.0, 0.0).into(), p(1.0, 1.0).into(), &cfg).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.converged);
        assert_eq!(r.per_offset.len(), 3);
        let z = rho(&square(), p(0.0, 0.5).into(), p(0.0, 0.5).into(), &cfg).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn rho_slit_sides() {
        let d = slit_square();
        let cfg = MetricConfig::default();
        let x = p(0.5, 0.25);
        let r = rho(&d, Terminal::with_hint(x, Some(Side::Left)), Terminal::with_hint(x, Some(Side::Right)), &cfg).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12, "{}", r.value);
        assert!(r.converged);
        let same = rho(&d, Terminal::with_hint(x, Some(Side::Left)), Terminal::with_hint(x, Some(Side::Left)), &cfg).unwrap();
        assert_eq!(same.value, 0.0);
        assert!(rho(&d, Terminal::new(x), Terminal::new(p(0.1, 0.1)), &cfg).is_err());
    }

    #[test]
    fn extrapolation_modes_agree_roughly() {
        let d = slit_square();
        let x = Terminal::with_hint(p(0.5, 0.25), Some(Side::Left));
        let y = Terminal::new(p(1.0, 0.25));
        for e in [Extrapolation::Closure, Extrapolation::LastValue, Extrapolation::Richardson] {
            let cfg = MetricConfig { extrapolation: e, ..Default::default() };
            let r = rho(&d, x, y, &cfg).unwrap();
            assert!((r.value - (0.25 + 0.3125f64.sqrt())).abs() < 3e-4, "{e:?} {}", r.value);
        }
    }

    #[test]
    fn axioms_detect_planted_defect() {
        let good = vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]];
        assert!(check_metric_axioms(&good, 1e-6).is_clean());
        let bad = vec![vec![0.0, 0.1, 10.0], vec![0.1, 0.0, 0.1], vec![10.0, 0.1, 0.0]];
        let r = check_metric_axioms(&bad, 1e-6);
        assert!(r.triangle_violations.contains(&(0, 1, 2)));
    }

    #[test]
    fn geodesic_slit_detour() {
        let d = slit_square();
        let g = extract_geodesic(&d, p(0.25, 0.25).into(), p(0.75, 0.25).into(), &MetricConfig::default()).unwrap();
        assert_eq!(g.path.vertices().len(), 3);
        assert!(g.max_deviation <= 1e-9, "{}", g.max_deviation);
        assert!(g.one_sided_excess <= 1e-9);
    }

    #[test]
    fn config_validation() {
        let bad = MetricConfig { offsets: vec![1e-3, 1e-2], ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = MetricConfig { offsets: vec![], ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
