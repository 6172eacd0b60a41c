//! A Jordan domain whose boundary teeth make interior paths toward the
//! origin zigzag, truncated after `N` teeth and closed by a short cap.

use serde::{Deserialize, Serialize};

use crate::error::ConstructionError;
use crate::geom::{PlanarDomain, Point2, Polygon, Segment2};
use crate::metric::{rho, MetricConfig};
use crate::shortest_path::Terminal;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombSpec {
    pub depth: usize,
    pub cap_width: f64,
}

impl CombSpec {
    /// Depth `n` with the default cap width `1/(4n²)`.
    pub fn new(depth: usize) -> Self {
        CombSpec { depth, cap_width: default_cap_width(depth) }
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        if self.depth < 2 {
            return Err(ConstructionError::SpecInvalid(format!("depth must be at least 2, got {}", self.depth)));
        }
        let n = self.depth as f64;
        if !(self.cap_width > 0.0 && self.cap_width < 1.0 / (2.0 * n * n)) {
            return Err(ConstructionError::SpecInvalid(format!(
                "cap width must lie in (0, 1/(2N^2)) = (0, {}), got {}",
                1.0 / (2.0 * n * n),
                self.cap_width
            )));
        }
        Ok(())
    }
}

pub fn default_cap_width(depth: usize) -> f64 {
    let n = depth as f64;
    1.0 / (4.0 * n * n)
}

/// Lowest point of the `n`-th upper tooth.
pub fn tooth_tip(n: usize) -> Point2 {
    let q = 4.0 * n as f64 + 3.0;
    Point2::new(4.0 / q, 2.0 / q)
}

fn inv(n: usize) -> f64 {
    1.0 / n as f64
}

/// The four tooth families and the top segment, in generation order.
#[derive(Clone, Debug, PartialEq)]
pub struct CombSegments {
    /// `(1/n, 1/n) → (1/(n+1), 0)`, `n = 1..=N`.
    pub slopes: Vec<Segment2>,
    /// `(1/n, 1/n) → (1/n, 0)`, `n = 2..=N`.
    pub risers: Vec<Segment2>,
    /// `(1/n, 2/n) → tip_n`, `n = 1..=N`.
    pub upper_outer: Vec<Segment2>,
    /// `(1/(n+1), 2/(n+1)) → tip_n`, `n = 1..=N`.
    pub upper_inner: Vec<Segment2>,
    pub top: Segment2,
}

impl CombSegments {
    pub fn all(&self) -> Vec<Segment2> {
        let mut v = Vec::new();
        v.extend(&self.slopes);
        v.extend(&self.risers);
        v.extend(&self.upper_outer);
        v.extend(&self.upper_inner);
        v.push(self.top);
        v
    }

    pub fn teeth_count(&self) -> usize {
        self.slopes.len() + self.risers.len() + self.upper_outer.len() + self.upper_inner.len()
    }
}

pub fn comb_segments(spec: &CombSpec) -> Result<CombSegments, ConstructionError> {
    spec.validate()?;
    let n_max = spec.depth;
    let mut s = CombSegments {
        slopes: Vec::new(),
        risers: Vec::new(),
        upper_outer: Vec::new(),
        upper_inner: Vec::new(),
        top: Segment2::new(Point2::new(1.0, 2.0), Point2::new(1.0, 1.0))?,
    };
    for n in 1..=n_max {
        s.slopes.push(Segment2::new(Point2::new(inv(n), inv(n)), Point2::new(inv(n + 1), 0.0))?);
        if n >= 2 {
            s.risers.push(Segment2::new(Point2::new(inv(n), inv(n)), Point2::new(inv(n), 0.0))?);
        }
        s.upper_outer.push(Segment2::new(Point2::new(inv(n), 2.0 * inv(n)), tooth_tip(n))?);
        s.upper_inner.push(Segment2::new(Point2::new(inv(n + 1), 2.0 * inv(n + 1)), tooth_tip(n))?);
    }
    Ok(s)
}

/// Vertex ring of the truncated comb, in the listed (clockwise) order.
pub fn comb_ring(spec: &CombSpec) -> Result<Vec<Point2>, ConstructionError> {
    spec.validate()?;
    let n_max = spec.depth;
    let c = spec.cap_width;
    let mut v = vec![Point2::new(1.0, 1.0)];
    for n in 1..=n_max {
        v.push(Point2::new(inv(n + 1), 0.0));
        if n < n_max {
            v.push(Point2::new(inv(n + 1), inv(n + 1)));
        }
    }
    v.push(Point2::new(c, 0.0));
    v.push(Point2::new(c, 2.0 * c));
    for n in (1..=n_max).rev() {
        v.push(Point2::new(inv(n + 1), 2.0 * inv(n + 1)));
        v.push(tooth_tip(n));
    }
    v.push(Point2::new(1.0, 2.0));
    Ok(v)
}

pub fn comb_domain(spec: &CombSpec) -> Result<PlanarDomain, ConstructionError> {
    let ring = comb_ring(spec)?;
    let poly = Polygon::new(ring)?;
    Ok(PlanarDomain::polygon(poly)?)
}

/// Reference point on the closing top segment.
pub fn comb_reference_point() -> Point2 {
    Point2::new(1.0, 1.5)
}

/// Midpoint of the cap.
pub fn cap_target(spec: &CombSpec) -> Point2 {
    Point2::new(spec.cap_width, spec.cap_width)
}

/// Channel point above the `n`-th lower peak; interior for `n >= 2`.
pub fn channel_point(n: usize) -> Point2 {
    Point2::new(inv(n), 1.5 * inv(n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombDivergence {
    /// `(N, d(N))` in the order given.
    pub rows: Vec<(usize, f64)>,
    pub strictly_increasing: bool,
    pub min_increment: f64,
}

/// Distance from `e` to the cap midpoint for each depth.
pub fn comb_divergence(depths: &[usize], e: Point2, cfg: &MetricConfig) -> Result<CombDivergence, ConstructionError> {
    let mut rows = Vec::with_capacity(depths.len());
    for &n in depths {
        let spec = CombSpec::new(n);
        let dom = comb_domain(&spec)?;
        let d = rho(&dom, Terminal::new(e), Terminal::new(cap_target(&spec)), cfg)?;
        rows.push((n, d.value));
    }
    let incs: Vec<f64> = rows.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let min_increment = incs.iter().copied().fold(f64::INFINITY, f64::min);
    let strictly_increasing = incs.iter().all(|&d| d > 0.0);
    Ok(CombDivergence { rows, strictly_increasing, min_increment })
}
