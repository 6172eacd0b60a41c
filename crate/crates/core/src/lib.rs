//! Boundary-relative intrinsic metrics on planar domains.

pub mod error;
pub mod geom;
pub mod constructions;
pub mod metric;
pub mod random;
pub mod rigidity;
pub mod shortest_path;
mod space;

pub use error::{ConstructionError, GeomError, MetricError, PathError, RigidityError};
pub use geom::{contains, inward_offset, orientation, properly_cross, Location, PlanarDomain, Point2, Point3, Polygon, Polyline, Segment2, Segment3, Side, Strip3, EPS_GEOM};
pub use shortest_path::{shortest_path, shortest_path_confined, ObstacleScene, PathResult, Terminal, VisibilityGraph};
pub use space::Sector;
