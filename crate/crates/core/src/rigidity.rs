//! Boundary profiles in the relative metric, their dihedral alignment, and
//! the Euclidean congruence they predict.

use serde::{Deserialize, Serialize};

use crate::error::RigidityError;
use crate::geom::{PlanarDomain, Point2};
use crate::metric::{check_strict_convexity, distance_matrix, outer_boundary_samples, values, MetricConfig};
use crate::shortest_path::Terminal;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryProfile {
    pub domain_id: String,
    /// Boundary points in boundary order, equally spaced by arc length
    /// from the first outer vertex.
    pub samples: Vec<Point2>,
    pub matrix: Vec<Vec<f64>>,
    /// `max/min − 1` over consecutive relative distances, wrap included.
    pub gap_spread: f64,
}

impl BoundaryProfile {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.domain_id = id.into();
        self
    }

    pub fn euclidean_matrix(&self) -> Vec<Vec<f64>> {
        self.samples.iter().map(|p| self.samples.iter().map(|q| p.dist(*q)).collect()).collect()
    }
}

pub fn boundary_profile(domain: &PlanarDomain, m: usize, cfg: &MetricConfig) -> Result<BoundaryProfile, RigidityError> {
    if !domain.holes().is_empty() || !domain.slits().is_empty() {
        return Err(RigidityError::MultipleBoundaryComponents);
    }
    if m < 2 {
        return Err(RigidityError::TooFewSamples(m));
    }
    let samples = outer_boundary_samples(domain, m);
    let terms: Vec<Terminal> = samples.iter().copied().map(Terminal::new).collect();
    let matrix = values(&distance_matrix(domain, &terms, cfg)?);
    if let Some((i, j)) = unreachable_entry(&matrix) {
        return Err(crate::MetricError::Unreachable(samples[i], samples[j]).into());
    }
    let gaps: Vec<f64> = (0..m).map(|i| matrix[i][(i + 1) % m]).collect();
    let lo = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = gaps.iter().copied().fold(0.0, f64::max);
    let n = domain.outer().len();
    Ok(BoundaryProfile { domain_id: format!("{n}-gon"), samples, matrix, gap_spread: hi / lo - 1.0 })
}

fn unreachable_entry(m: &[Vec<f64>]) -> Option<(usize, usize)> {
    for (i, r) in m.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            if v.is_infinite() {
                return Some((i, j));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlignmentResult {
    pub shift: usize,
    pub reflected: bool,
    /// Largest entrywise gap `|M₁[i][j] − M₂[σ(i)][σ(j)]|`.
    pub residual: f64,
    pub isometric: bool,
}

impl AlignmentResult {
    /// Index in the second profile matched with index `i` of the first.
    pub fn map(&self, i: usize, m: usize) -> usize {
        if self.reflected {
            (self.shift + m - i % m) % m
        } else {
            (self.shift + i) % m
        }
    }

    /// The alignment taking the second profile back onto the first.
    pub fn inverse(&self, m: usize) -> AlignmentResult {
        let shift = if self.reflected { self.shift } else { (m - self.shift) % m };
        AlignmentResult { shift, ..*self }
    }
}

fn aligned_gap(a: &[Vec<f64>], b: &[Vec<f64>], al: &AlignmentResult) -> f64 {
    let m = a.len();
    let mut worst = 0.0f64;
    for i in 0..m {
        let si = al.map(i, m);
        for j in 0..m {
            worst = worst.max((a[i][j] - b[si][al.map(j, m)]).abs());
        }
    }
    worst
}

/// Best of the `2m` dihedral alignments; ties keep the first found
/// (rotations before reflections, shifts ascending).
pub fn compare_profiles(p1: &BoundaryProfile, p2: &BoundaryProfile, tol: f64) -> Result<AlignmentResult, RigidityError> {
    let m = p1.len();
    if p2.len() != m {
        return Err(RigidityError::SizeMismatch(m, p2.len()));
    }
    let mut best = AlignmentResult { shift: 0, reflected: false, residual: f64::INFINITY, isometric: false };
    for reflected in [false, true] {
        for shift in 0..m {
            let mut al = AlignmentResult { shift, reflected, residual: 0.0, isometric: false };
            al.residual = aligned_gap(&p1.matrix, &p2.matrix, &al);
            if al.residual < best.residual {
                best = al;
            }
        }
    }
    best.isometric = best.residual <= tol;
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Congruence {
    pub congruent: bool,
    pub max_gap: f64,
}

/// Compares Euclidean distance matrices of the aligned samples: equal
/// matrices mean the sample sets differ by a rigid motion.
pub fn euclidean_congruence(
    p1: &BoundaryProfile,
    p2: &BoundaryProfile,
    alignment: &AlignmentResult,
    tol: f64,
) -> Result<Congruence, RigidityError> {
    if p1.len() != p2.len() {
        return Err(RigidityError::SizeMismatch(p1.len(), p2.len()));
    }
    if alignment.residual > tol {
        return Err(RigidityError::NotAligned(alignment.residual));
    }
    let gap = aligned_gap(&p1.euclidean_matrix(), &p2.euclidean_matrix(), alignment);
    Ok(Congruence { congruent: gap <= tol, max_gap: gap })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TransferVerdict {
    /// Both domains pass, as predicted.
    Confirmed,
    /// Precondition fails; the reason is given.
    NotApplicable(String),
    /// The second domain fails at the working resolution only.
    ResolutionArtifact,
    /// Matched profiles, convex first domain, and a persistent failure.
    FalsificationCandidate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub first_convex: bool,
    pub alignment: AlignmentResult,
    pub second_convex: Option<bool>,
    pub verdict: TransferVerdict,
}

/// If the first domain is strictly convex and its boundary profile matches
/// the second's, the second must be strictly convex too.
pub fn convexity_transfer_test(
    y1: &PlanarDomain,
    y2: &PlanarDomain,
    m: usize,
    eta: f64,
    cfg: &MetricConfig,
    tol: f64,
) -> Result<TransferReport, RigidityError> {
    let convex_at = |d: &PlanarDomain, m: usize| -> Result<bool, RigidityError> {
        let s: Vec<Terminal> = outer_boundary_samples(d, m).into_iter().map(Terminal::new).collect();
        Ok(check_strict_convexity(d, &s, eta, cfg)?.strictly_convex)
    };
    let p1 = boundary_profile(y1, m, cfg)?;
    let p2 = boundary_profile(y2, m, cfg)?;
    let alignment = compare_profiles(&p1, &p2, tol)?;
    let first_convex = convex_at(y1, m)?;
    let na = |why: &str| TransferVerdict::NotApplicable(why.to_string());
    if !first_convex {
        return Ok(TransferReport { first_convex, alignment, second_convex: None, verdict: na("first domain is not strictly convex") });
    }
    if !alignment.isometric {
        return Ok(TransferReport {
            first_convex,
            alignment,
            second_convex: None,
            verdict: na("boundary profiles do not match"),
        });
    }
    let second = convex_at(y2, m)?;
    let verdict = if second {
        TransferVerdict::Confirmed
    } else if convex_at(y2, 2 * m)? {
        TransferVerdict::ResolutionArtifact
    } else {
        TransferVerdict::FalsificationCandidate
    };
    Ok(TransferReport { first_convex, alignment, second_convex: Some(second), verdict })
}
