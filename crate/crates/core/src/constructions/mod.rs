//! Generators and verifiers for the explicit constructions: the comb
//! domain, the radial segment family, spiral labyrinths, spiral strips in
//! space and their planar projections.

pub mod comb;
pub mod family;
pub mod spiral;
pub mod strips;
pub mod theorem;

pub use comb::{comb_divergence, comb_domain, CombSpec};
pub use family::{segment_family, verify_length_bound, verify_pigeonhole, SegmentFamilySpec};
pub use spiral::{spiral_labyrinth, verify_star1, SpiralSpec};
pub use strips::{proj_rot, strips_3d, verify_star2, Trapezium};
pub use theorem::theorem22_report;
