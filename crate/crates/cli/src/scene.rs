//! The JSON scene format shared by every subcommand.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use relmetric::metric::{Extrapolation, MetricConfig};
use relmetric::{ObstacleScene, PlanarDomain, Point2, Polygon, Segment2, Side, Terminal};

use crate::CliError;

type Xy = [f64; 2];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub outer: Vec<Xy>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub holes: Vec<Vec<Xy>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub slits: Vec<[Xy; 2]>,
}

/// Free space bounded by `boundary` with obstacle segments and polygons.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSpec {
    pub boundary: Vec<Xy>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub segments: Vec<[Xy; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polygons: Vec<Vec<Xy>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    #[serde(default = "default_offsets")]
    pub offsets: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol_metric: f64,
    #[serde(default = "default_m_circle")]
    pub m_circle: usize,
    #[serde(default = "default_extrapolation")]
    pub extrapolation: Extrapolation,
}

fn default_offsets() -> Vec<f64> {
    MetricConfig::default().offsets
}
fn default_tol() -> f64 {
    MetricConfig::default().tol_metric
}
fn default_m_circle() -> usize {
    256
}
fn default_extrapolation() -> Extrapolation {
    Extrapolation::Closure
}

impl Default for ConfigSpec {
    fn default() -> Self {
        ConfigSpec {
            offsets: default_offsets(),
            tol_metric: default_tol(),
            m_circle: default_m_circle(),
            extrapolation: default_extrapolation(),
        }
    }
}

impl ConfigSpec {
    pub fn metric(&self) -> MetricConfig {
        MetricConfig { offsets: self.offsets.clone(), tol_metric: self.tol_metric, extrapolation: self.extrapolation }
    }
}

/// Parameters a generated scene was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Generator {
    Comb { depth: usize, cap_width: f64 },
    Family { levels: usize, scale: f64 },
    Spiral { rho0: f64, coils: usize, pitch: f64, samples_per_coil: usize },
    Strips { levels: usize, coils: usize, samples_per_coil: usize },
    Random { seed: u64, vertices: usize, with_hole: bool, boundary_slits: usize, free_slits: usize },
}

/// Planar image of one strip, recorded by `gen strips`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripEntry {
    pub level: usize,
    pub index: usize,
    pub rho0: f64,
    pub pitch: f64,
    pub trapezium: [Xy; 4],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstacles: Option<ObstacleSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strips: Vec<StripEntry>,
    #[serde(default)]
    pub points: BTreeMap<String, Xy>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub hints: BTreeMap<String, Side>,
    #[serde(default)]
    pub config: ConfigSpec,
}

fn pt(p: Xy) -> Point2 {
    Point2::new(p[0], p[1])
}

pub fn xy(p: Point2) -> Xy {
    [p.x, p.y]
}

fn ring(v: &[Xy]) -> Vec<Point2> {
    v.iter().copied().map(pt).collect()
}

fn segs(v: &[[Xy; 2]]) -> Result<Vec<Segment2>, CliError> {
    v.iter().map(|s| Segment2::new(pt(s[0]), pt(s[1])).map_err(CliError::from)).collect()
}

impl SceneFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("scene: {e}")))
    }

    /// Canonical text: pretty JSON with sorted point names.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scene serializes");
        s.push('\n');
        s
    }

    pub fn hash(&self) -> String {
        let d = Sha256::digest(self.to_text().as_bytes());
        d.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn planar_domain(&self) -> Result<PlanarDomain, CliError> {
        let d = self.domain.as_ref().ok_or_else(|| CliError::Usage("scene has no `domain`".into()))?;
        let outer = Polygon::new(ring(&d.outer))?;
        let holes = d.holes.iter().map(|h| Polygon::new(ring(h))).collect::<Result<Vec<_>, _>>()?;
        Ok(PlanarDomain::new(outer, holes, segs(&d.slits)?)?)
    }

    pub fn obstacle_scene(&self) -> Result<ObstacleScene, CliError> {
        let o = self.obstacles.as_ref().ok_or_else(|| CliError::Usage("scene has no `obstacles`".into()))?;
        let polys = o.polygons.iter().map(|h| Polygon::new(ring(h))).collect::<Result<Vec<_>, _>>()?;
        let terms = self.points.values().copied().map(pt).collect();
        ObstacleScene::new(Polygon::new(ring(&o.boundary))?, segs(&o.segments)?, polys, terms).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn terminal(&self, name: &str) -> Result<Terminal, CliError> {
        let p = self.points.get(name).ok_or_else(|| CliError::Usage(format!("unknown point `{name}`")))?;
        Ok(Terminal::with_hint(pt(*p), self.hints.get(name).copied()))
    }

    pub fn set_domain(&mut self, d: &PlanarDomain) {
        self.domain = Some(DomainSpec {
            outer: d.outer().vertices().iter().copied().map(xy).collect(),
            holes: d.holes().iter().map(|h| h.vertices().iter().copied().map(xy).collect()).collect(),
            slits: d.slits().iter().map(|s| [xy(s.a), xy(s.b)]).collect(),
        });
    }

    pub fn set_obstacles(&mut self, s: &ObstacleScene) {
        self.obstacles = Some(ObstacleSpec {
            boundary: s.boundary.vertices().iter().copied().map(xy).collect(),
            segments: s.obstacle_segments.iter().map(|s| [xy(s.a), xy(s.b)]).collect(),
            polygons: s.obstacle_polygons.iter().map(|h| h.vertices().iter().copied().map(xy).collect()).collect(),
        });
    }
}
