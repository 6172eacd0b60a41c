//! Seeded random domains: star-shaped outer ring, optional central hole,
//! slits hanging from the boundary and free-floating ones.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::geom::{Location, PlanarDomain, Point2, Polygon, Segment2, Side};
use crate::shortest_path::Terminal;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomDomainConfig {
    pub vertices: usize,
    pub with_hole: bool,
    /// Radial slits starting at outer vertices.
    pub boundary_slits: usize,
    /// Slits touching nothing, on a circle of radius 0.4.
    pub free_slits: usize,
}

impl Default for RandomDomainConfig {
    fn default() -> Self {
        RandomDomainConfig { vertices: 10, with_hole: false, boundary_slits: 1, free_slits: 1 }
    }
}

/// At least 8 outer vertices with radii in `[0.6, 1]`. Boundary slits end
/// at radius 0.45 or more, free slits sit on radius 0.4, the hole has
/// radius 0.15.
pub fn random_domain(seed: u64, cfg: &RandomDomainConfig) -> Result<PlanarDomain, GeomError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.vertices.max(8);
    let step = TAU / n as f64;
    let mut angles: Vec<f64> = (0..n).map(|i| (i as f64 + rng.gen_range(0.1..0.9)) * step).collect();
    angles.sort_by(f64::total_cmp);
    let radii: Vec<f64> = (0..n).map(|_| rng.gen_range(0.6..1.0)).collect();
    let ring: Vec<Point2> = angles.iter().zip(&radii).map(|(&a, &r)| Point2::polar(r, a)).collect();
    let outer = Polygon::new(ring.clone())?;
    let holes = if cfg.with_hole {
        let ph = rng.gen_range(0.0..TAU);
        vec![Polygon::regular(5, 0.15, ph).oriented_cw()]
    } else {
        Vec::new()
    };
    let mut slits = Vec::new();
    let mut used = vec![false; n];
    for _ in 0..cfg.boundary_slits.min(n) {
        let mut v = rng.gen_range(0..n);
        while used[v] {
            v = (v + 1) % n;
        }
        used[v] = true;
        let tip = rng.gen_range(0.45..0.55) / radii[v];
        slits.push(Segment2::new(ring[v], ring[v] * tip)?);
    }
    // free slits occupy disjoint angular windows
    let k = cfg.free_slits;
    for i in 0..k {
        let w = TAU / k.max(1) as f64;
        let a0 = i as f64 * w + rng.gen_range(0.0..0.3 * w);
        let a1 = a0 + rng.gen_range(0.2..0.5) * w.min(1.0);
        slits.push(Segment2::new(Point2::polar(0.4, a0), Point2::polar(0.4, a1))?);
    }
    PlanarDomain::new(outer, holes, slits)
}

/// Mixed sample points: outer-boundary points, slit points with a random
/// side, and interior points, in that rotation.
pub fn random_terminals(domain: &PlanarDomain, m: usize, seed: u64) -> Vec<Terminal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per = domain.outer().perimeter();
    let mut out = Vec::with_capacity(m);
    let mut kind = 0;
    while out.len() < m {
        kind = (kind + 1) % 3;
        match kind {
            0 => out.push(Terminal::new(domain.outer().point_at_arclength(rng.gen_range(0.0..per)))),
            1 if !domain.slits().is_empty() => {
                let s = domain.slits()[rng.gen_range(0..domain.slits().len())];
                let p = s.a.lerp(s.b, rng.gen_range(0.1..0.9));
                let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
                out.push(Terminal::with_hint(p, Some(side)));
            }
            _ => loop {
                let p = Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if crate::geom::contains(domain, p) == Location::Interior {
                    out.push(Terminal::new(p));
                    break;
                }
            },
        }
    }
    out
}
