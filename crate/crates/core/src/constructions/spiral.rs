//! Archimedes-spiral labyrinths: a path entering between the two outer
//! coils and leaving between the two inner ones must follow every coil.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::ConstructionError;
use crate::geom::{Point2, Polygon, Segment2};
use crate::shortest_path::{shortest_path, ObstacleScene, PathResult};

use super::family::{inner_radius, segment_angle};

pub const DEFAULT_SAMPLES_PER_COIL: usize = 64;

/// Length a labyrinth passage must reach.
pub const LABYRINTH_TARGET: f64 = 10.0;

/// Relative agreement required between the default and doubled sampling.
pub const SAMPLING_AGREEMENT: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpiralSpec {
    /// Starting radius.
    pub rho0: f64,
    pub coils: usize,
    /// Radius lost per radian of turning.
    pub pitch: f64,
    pub samples_per_coil: usize,
}

impl SpiralSpec {
    pub fn new(rho0: f64, coils: usize, pitch: f64) -> Self {
        SpiralSpec { rho0, coils, pitch, samples_per_coil: DEFAULT_SAMPLES_PER_COIL }
    }

    /// Spiral for the `k`-th segment of level `j`: its starting radius is
    /// the distance of the segment's inner end from the axis OA.
    pub fn for_segment(j: usize, k: usize, coils: usize, pitch: f64) -> Self {
        SpiralSpec::new(segment_axis_distance(j, k), coils, pitch)
    }

    /// Radius, coil and pitch checks only; sampling density is not
    /// constrained.
    pub fn validate_shape(&self) -> Result<(), ConstructionError> {
        let bad = |m: String| Err(ConstructionError::SpecInvalid(m));
        if !(self.rho0 > 0.0) || !self.rho0.is_finite() {
            return bad(format!("starting radius must be positive, got {}", self.rho0));
        }
        if self.coils == 0 {
            return bad("at least one coil is needed".into());
        }
        if !(self.pitch > 0.0) {
            return bad(format!("pitch must be positive, got {}", self.pitch));
        }
        if TAU * self.coils as f64 * self.pitch >= self.rho0 {
            return bad(format!(
                "pitch too large: 2*pi*M*eps = {} reaches the starting radius {}",
                TAU * self.coils as f64 * self.pitch,
                self.rho0
            ));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        self.validate_shape()?;
        let bad = |m: String| Err(ConstructionError::SpecInvalid(m));
        if self.samples_per_coil < 8 {
            return bad("need at least 8 samples per coil".into());
        }
        // chords must not bridge the gap between neighbouring coils
        let sag = self.rho0 * (1.0 - (std::f64::consts::PI / self.samples_per_coil as f64).cos());
        if sag >= 0.5 * TAU * self.pitch {
            return bad(format!("{} samples per coil are too coarse for pitch {}", self.samples_per_coil, self.pitch));
        }
        Ok(())
    }

    pub fn radius(&self, psi: f64) -> f64 {
        self.rho0 - self.pitch * psi
    }

    pub fn point(&self, psi: f64) -> Point2 {
        Point2::polar(self.radius(psi), psi)
    }

    /// Sample parameters `ψ_m` covering `[0, 2πM]`.
    pub fn parameters(&self) -> Vec<f64> {
        let n = self.samples_per_coil * self.coils;
        (0..=n).map(|i| TAU * self.coils as f64 * i as f64 / n as f64).collect()
    }

    pub fn polyline_points(&self) -> Vec<Point2> {
        self.parameters().into_iter().map(|p| self.point(p)).collect()
    }
}

/// Distance from the axis OA of the inner end of segment `(j, k)`.
pub fn segment_axis_distance(j: usize, k: usize) -> f64 {
    inner_radius(j) * segment_angle(j, k).sin()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Labyrinth {
    pub scene: ObstacleScene,
    pub entrance: Segment2,
    pub exit: Segment2,
    pub start: Point2,
    pub goal: Point2,
}

pub fn spiral_labyrinth(spec: &SpiralSpec) -> Result<Labyrinth, ConstructionError> {
    spec.validate()?;
    let pts = spec.polyline_points();
    let segs: Vec<Segment2> = pts.windows(2).map(|w| Segment2::new(w[0], w[1])).collect::<Result<_, _>>()?;
    let m = spec.coils as f64;
    let entrance = Segment2::new(spec.point(0.0), spec.point(TAU))?;
    let exit = Segment2::new(spec.point(TAU * (m - 1.0)), spec.point(TAU * m))?;
    let r = 1.5 * spec.rho0;
    let bound = Polygon::new(vec![Point2::new(-r, -r), Point2::new(r, -r), Point2::new(r, r), Point2::new(-r, r)])?;
    let (start, goal) = (entrance.midpoint(), exit.midpoint());
    let scene = ObstacleScene::new(bound, segs, Vec::new(), vec![start, goal])?;
    Ok(Labyrinth { scene, entrance, exit, start, goal })
}

pub fn labyrinth_path(spec: &SpiralSpec) -> Result<PathResult, ConstructionError> {
    let lab = spiral_labyrinth(spec)?;
    Ok(shortest_path(&lab.scene, lab.start, lab.goal)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Star1Report {
    pub coils: usize,
    pub length: f64,
    /// Length at twice the sampling density.
    pub length_fine: f64,
    pub sampling_agrees: bool,
    /// Lengths for `M = 1..=M*`.
    pub lengths: Vec<(usize, f64)>,
}

impl Star1Report {
    pub fn previous_length(&self) -> Option<f64> {
        self.lengths.iter().rev().nth(1).map(|x| x.1)
    }
}

/// Smallest coil count whose labyrinth forces a passage of length at
/// least [`LABYRINTH_TARGET`].
pub fn verify_star1(rho0: f64, pitch: f64, max_coils: usize) -> Result<Star1Report, ConstructionError> {
    let mut lengths = Vec::new();
    for m in 1..=max_coils {
        let spec = SpiralSpec::new(rho0, m, pitch);
        let l = labyrinth_path(&spec)?.length;
        lengths.push((m, l));
        if l >= LABYRINTH_TARGET {
            let fine = SpiralSpec { samples_per_coil: 2 * spec.samples_per_coil, ..spec };
            let lf = labyrinth_path(&fine)?.length;
            return Ok(Star1Report {
                coils: m,
                length: l,
                length_fine: lf,
                sampling_agrees: (lf - l).abs() <= SAMPLING_AGREEMENT * l,
                lengths,
            });
        }
    }
    Err(ConstructionError::NotReachedWithinBound(max_coils))
}

pub fn verify_star1_for_segment(j: usize, k: usize, pitch: f64, max_coils: usize) -> Result<Star1Report, ConstructionError> {
    verify_star1(segment_axis_distance(j, k), pitch, max_coils)
}
