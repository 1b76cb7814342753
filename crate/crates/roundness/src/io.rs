//! JSON file formats for metric spaces, simplices, point sets and family
//! pairs. Field names are fixed and unknown fields are rejected, so a file
//! either matches the documented schema or parsing fails loudly.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{LpError, LpPointSet};
use crate::metric::{validate_labeled_metric, FiniteMetricSpace, MetricViolation};
use crate::simplex::{SignedSimplex, SimplexError, Vertex};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid metric: {}", format_violations(.0))]
    Metric(Vec<MetricViolation>),
    #[error("invalid point set: {0}")]
    Points(#[from] LpError),
    #[error("invalid simplex: {0}")]
    Simplex(#[from] SimplexError),
    #[error("simplex file references universe path {path}, which is not a metric or points file: {detail}")]
    UniversePath { path: String, detail: String },
}

fn format_violations(violations: &[MetricViolation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// `{"labels": ["a", ...], "dist": [[0, ...], ...]}` with row-major
/// distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
}

impl MetricFile {
    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        MetricFile {
            labels: space.labels().to_vec(),
            dist: space.matrix().to_vec(),
        }
    }

    pub fn into_space(self, eps_tri: f64) -> Result<FiniteMetricSpace, IoError> {
        validate_labeled_metric(self.labels, self.dist, eps_tri).map_err(IoError::Metric)
    }
}

/// `{"p": 1.0, "points": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsFile {
    pub p: f64,
    pub points: Vec<Vec<f64>>,
}

impl PointsFile {
    pub fn from_point_set(ps: &LpPointSet) -> Self {
        PointsFile { p: ps.exponent(), points: ps.points().to_vec() }
    }

    pub fn into_point_set(self, eps_c: f64) -> Result<LpPointSet, IoError> {
        Ok(LpPointSet::new(self.p, self.points, eps_c)?)
    }
}

/// One weighted vertex reference: `{"id": 0, "w": 1.0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedVertex {
    pub id: usize,
    pub w: f64,
}

/// The universe a simplex lives over: a path to a metric or points file, or
/// either one inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UniverseSpec {
    Path(String),
    Metric(MetricFile),
    Points(PointsFile),
}

/// `{"universe": <path or inline>, "x": [{"id":, "w":}, ...], "y": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexFile {
    pub universe: UniverseSpec,
    pub x: Vec<WeightedVertex>,
    pub y: Vec<WeightedVertex>,
}

/// `{"xs": [[...], ...], "ys": [[...], ...]}`: two equal-sized vector
/// families for the numerical-set identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamiliesFile {
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<Vec<f64>>,
}

/// A resolved simplex universe.
#[derive(Debug, Clone)]
pub enum Universe {
    Metric(FiniteMetricSpace),
    Points(LpPointSet),
}

impl Universe {
    pub fn len(&self) -> usize {
        match self {
            Universe::Metric(m) => m.len(),
            Universe::Points(ps) => ps.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn parse_metric_json(text: &str) -> Result<MetricFile, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_points_json(text: &str) -> Result<PointsFile, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_simplex_json(text: &str) -> Result<SimplexFile, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_families_json(text: &str) -> Result<FamiliesFile, IoError> {
    Ok(serde_json::from_str(text)?)
}

fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_metric(path: &Path, eps_tri: f64) -> Result<FiniteMetricSpace, IoError> {
    parse_metric_json(&read_file(path)?)?.into_space(eps_tri)
}

pub fn load_points(path: &Path, eps_c: f64) -> Result<LpPointSet, IoError> {
    parse_points_json(&read_file(path)?)?.into_point_set(eps_c)
}

pub fn load_families(path: &Path) -> Result<FamiliesFile, IoError> {
    parse_families_json(&read_file(path)?)
}

/// Resolves a universe spec. Relative paths are taken against `base_dir`,
/// the directory of the simplex file that referenced them; a path file may
/// contain either format and is disambiguated by parsing.
pub fn resolve_universe(
    spec: UniverseSpec,
    base_dir: &Path,
    eps_tri: f64,
    eps_c: f64,
) -> Result<Universe, IoError> {
    match spec {
        UniverseSpec::Metric(file) => Ok(Universe::Metric(file.into_space(eps_tri)?)),
        UniverseSpec::Points(file) => Ok(Universe::Points(file.into_point_set(eps_c)?)),
        UniverseSpec::Path(path) => {
            let resolved = if Path::new(&path).is_absolute() {
                Path::new(&path).to_path_buf()
            } else {
                base_dir.join(&path)
            };
            let text = read_file(&resolved)?;
            if let Ok(metric) = parse_metric_json(&text) {
                return Ok(Universe::Metric(metric.into_space(eps_tri)?));
            }
            match parse_points_json(&text) {
                Ok(points) => Ok(Universe::Points(points.into_point_set(eps_c)?)),
                Err(e) => Err(IoError::UniversePath { path, detail: e.to_string() }),
            }
        }
    }
}

/// A fully resolved simplex: the validated simplex plus its universe.
#[derive(Debug, Clone)]
pub struct LoadedSimplex {
    pub universe: Universe,
    pub simplex: SignedSimplex,
}

pub fn simplex_from_file(
    file: SimplexFile,
    base_dir: &Path,
    eps_tri: f64,
    eps_c: f64,
    eps_w: f64,
) -> Result<LoadedSimplex, IoError> {
    let universe = resolve_universe(file.universe, base_dir, eps_tri, eps_c)?;
    let to_vertices = |side: &[WeightedVertex]| -> Vec<Vertex> {
        side.iter().map(|v| Vertex::new(v.id, v.w)).collect()
    };
    let simplex = SignedSimplex::new(
        to_vertices(&file.x),
        to_vertices(&file.y),
        universe.len(),
        eps_w,
    )?;
    Ok(LoadedSimplex { universe, simplex })
}

pub fn load_simplex(
    path: &Path,
    eps_tri: f64,
    eps_c: f64,
    eps_w: f64,
) -> Result<LoadedSimplex, IoError> {
    let file = parse_simplex_json(&read_file(path)?)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    simplex_from_file(file, base, eps_tri, eps_c, eps_w)
}
