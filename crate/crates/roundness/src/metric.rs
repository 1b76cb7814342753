//! Finite metric spaces: validation, the distance-power transform and the
//! small generators used as test families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Default absolute slack allowed on the triangle inequality.
pub const DEFAULT_EPS_TRI: f64 = 1e-9;

/// One violated metric axiom, with the offending indices. Distances are
/// reported as stored; nothing is repaired.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum MetricViolation {
    Empty,
    NotSquare { row: usize, len: usize, expected: usize },
    NonFinite { row: usize, col: usize },
    NonzeroDiagonal { index: usize, value: f64 },
    Asymmetric { row: usize, col: usize, forward: f64, backward: f64 },
    NonPositiveOffDiagonal { row: usize, col: usize, value: f64 },
    Triangle { from: usize, via: usize, to: usize, direct: f64, detour: f64 },
    LabelCountMismatch { labels: usize, rows: usize },
}

impl std::fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricViolation::Empty => write!(f, "distance matrix is empty"),
            MetricViolation::NotSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            MetricViolation::NonFinite { row, col } => {
                write!(f, "entry ({row},{col}) is not finite")
            }
            MetricViolation::NonzeroDiagonal { index, value } => {
                write!(f, "diagonal entry {index} is {value}, expected 0")
            }
            MetricViolation::Asymmetric { row, col, forward, backward } => {
                write!(f, "asymmetry at ({row},{col}): {forward} vs {backward}")
            }
            MetricViolation::NonPositiveOffDiagonal { row, col, value } => {
                write!(f, "off-diagonal entry ({row},{col}) is {value}, expected > 0")
            }
            MetricViolation::Triangle { from, via, to, direct, detour } => {
                write!(
                    f,
                    "triangle violation ({from},{to}) via {via}: {direct} > {detour}"
                )
            }
            MetricViolation::LabelCountMismatch { labels, rows } => {
                write!(f, "{labels} labels for {rows} points")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("transform exponent {0} outside [0, 2]")]
    TransformExponent(f64),
    #[error("cycle metric needs n >= 3, got {0}")]
    CycleTooSmall(usize),
    #[error("ultrametric generator needs n >= 2, got {0}")]
    UltrametricTooSmall(usize),
    #[error("transformed distances violate the metric axioms under floating-point evaluation")]
    TransformInvalid(Vec<MetricViolation>),
}

/// A validated finite metric space: labelled points plus a symmetric distance
/// matrix. Point identity is by index; there is no ambient coordinate system
/// at this layer. Immutable after construction. The triangle tolerance it
/// was validated under travels with it so derived spaces are held to the
/// same standard.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
    #[serde(skip)]
    eps_tri: f64,
}

/// Checks every metric axiom on `dist` and returns either a validated space
/// or the full list of violations, each naming the axiom and the offending
/// indices. Symmetry is required exactly as stored; only the triangle
/// inequality gets the `eps_tri` slack.
pub fn validate_metric(
    dist: Vec<Vec<f64>>,
    eps_tri: f64,
) -> Result<FiniteMetricSpace, Vec<MetricViolation>> {
    let labels = (0..dist.len()).map(|i| i.to_string()).collect();
    validate_labeled_metric(labels, dist, eps_tri)
}

/// Same as [`validate_metric`] but with caller-supplied point labels.
pub fn validate_labeled_metric(
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
    eps_tri: f64,
) -> Result<FiniteMetricSpace, Vec<MetricViolation>> {
    let mut violations = Vec::new();
    let n = dist.len();
    if n == 0 {
        violations.push(MetricViolation::Empty);
        return Err(violations);
    }
    if labels.len() != n {
        violations.push(MetricViolation::LabelCountMismatch { labels: labels.len(), rows: n });
    }
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            violations.push(MetricViolation::NotSquare { row: i, len: row.len(), expected: n });
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    for (i, row) in dist.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                violations.push(MetricViolation::NonFinite { row: i, col: j });
            }
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    for i in 0..n {
        if dist[i][i] != 0.0 {
            violations.push(MetricViolation::NonzeroDiagonal { index: i, value: dist[i][i] });
        }
        for j in (i + 1)..n {
            if dist[i][j] != dist[j][i] {
                violations.push(MetricViolation::Asymmetric {
                    row: i,
                    col: j,
                    forward: dist[i][j],
                    backward: dist[j][i],
                });
            }
            if dist[i][j] <= 0.0 {
                violations.push(MetricViolation::NonPositiveOffDiagonal {
                    row: i,
                    col: j,
                    value: dist[i][j],
                });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let detour = dist[i][k] + dist[k][j];
                if dist[i][j] > detour + eps_tri {
                    violations.push(MetricViolation::Triangle {
                        from: i,
                        via: k,
                        to: j,
                        direct: dist[i][j],
                        detour,
                    });
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(FiniteMetricSpace { labels, dist, eps_tri })
    } else {
        Err(violations)
    }
}

impl FiniteMetricSpace {
    /// Number of points.
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// Replaces every distance by d^(p/2), the distance-power rescaling that
    /// carries strict p-negative type to strict 2-negative type. Only valid
    /// for p in [0, 2]; at p = 0 the result is the discrete metric. The
    /// output is re-validated against the tolerance this space was built
    /// with; the power of a metric is a metric, so a failure can only come
    /// from floating-point slack at extreme scales and is reported rather
    /// than repaired.
    pub fn metric_transform(&self, p: f64) -> Result<Self, MetricError> {
        if !(0.0..=2.0).contains(&p) {
            return Err(MetricError::TransformExponent(p));
        }
        let q = p / 2.0;
        let n = self.len();
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    dist[i][j] = if p == 0.0 { 1.0 } else { self.dist[i][j].powf(q) };
                }
            }
        }
        validate_labeled_metric(self.labels.clone(), dist, self.eps_tri)
            .map_err(MetricError::TransformInvalid)
    }
}

/// Shortest-path metric of the n-cycle graph.
pub fn cycle_metric(n: usize) -> Result<FiniteMetricSpace, MetricError> {
    if n < 3 {
        return Err(MetricError::CycleTooSmall(n));
    }
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let around = i.abs_diff(j);
            dist[i][j] = around.min(n - around) as f64;
        }
    }
    Ok(validate_metric(dist, DEFAULT_EPS_TRI).expect("cycle metric is a metric"))
}

/// Generates a random ultrametric space on `n` points, deterministic for a
/// fixed seed.
///
/// The construction recursively splits the point set in two, assigns the
/// current diameter to every cross pair and shrinks the diameter strictly on
/// the way down, which is exactly a random binary merge tree with strictly
/// decreasing level values. Cross pairs at a node share one stored f64, so
/// the strong triangle inequality d(x,z) <= max(d(x,y), d(y,z)) holds
/// exactly, not merely within tolerance.
pub fn random_ultrametric(n: usize, seed: u64) -> Result<FiniteMetricSpace, MetricError> {
    if n < 2 {
        return Err(MetricError::UltrametricTooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut dist = vec![vec![0.0; n]; n];
    let diameter = rng.gen_range(1.6..2.0);
    split_level(&mut rng, &mut dist, &order, diameter);
    Ok(validate_metric(dist, DEFAULT_EPS_TRI).expect("ultrametrics satisfy the metric axioms"))
}

fn split_level(rng: &mut ChaCha8Rng, dist: &mut [Vec<f64>], group: &[usize], diameter: f64) {
    if group.len() <= 1 {
        return;
    }
    let cut = rng.gen_range(1..group.len());
    let (left, right) = group.split_at(cut);
    for &a in left {
        for &b in right {
            dist[a][b] = diameter;
            dist[b][a] = diameter;
        }
    }
    // Each child level is strictly smaller. The ratio is kept close to 1 so
    // that d^p stays well away from the eigenvalue threshold even at large p.
    let left_diameter = diameter * rng.gen_range(0.96..0.995);
    let right_diameter = diameter * rng.gen_range(0.96..0.995);
    split_level(rng, dist, left, left_diameter);
    split_level(rng, dist, right, right_diameter);
}
