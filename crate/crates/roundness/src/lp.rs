//! Finite-dimensional l_p point sets and the coordinatewise theory: virtual
//! degeneracy, balancedness, kernel extraction, the disjoint-support and
//! numerical-set identities, and the virtually degenerate subspace
//! generators.
//!
//! Throughout, gaps over l_p use ||x - y||_p^p as the powered distance
//! functional, so they decompose coordinatewise. For 0 < p < 1 the metric on
//! the point set is d(x, y) = sum |x(w) - y(w)|^p itself and negative-type
//! questions about it are asked at exponent 1; this keeps every statement in
//! ||.||_p^p form and sidesteps the quasi-norm triangle failure.

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::metric::{validate_metric, FiniteMetricSpace, DEFAULT_EPS_TRI};
use crate::simplex::{gamma_with, GapValue, SignedSimplex, Vertex};
use crate::Tolerances;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("point set exponent must be a positive finite real, got {0}")]
    InvalidExponent(f64),
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("point {row} has {len} coordinates, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("points need at least one coordinate")]
    NoCoordinates,
    #[error("non-finite coordinate at point {point}, coordinate {coord}")]
    NonFiniteCoordinate { point: usize, coord: usize },
    #[error("points {a} and {b} coincide within tolerance")]
    DuplicatePoints { a: usize, b: usize },
    #[error("simplex references id {id} but the point set has {points} points")]
    IdOutOfRange { id: usize, points: usize },
    #[error("simplex is degenerate; virtual degeneracy is defined for non-degenerate simplices")]
    DegenerateSimplex,
    #[error("families are degenerate as a weight-one simplex (one is a permutation of the other)")]
    DegenerateFamilies,
    #[error("families must have the same size, got {xs} and {ys}")]
    FamilySizeMismatch { xs: usize, ys: usize },
    #[error("families must be non-empty")]
    EmptyFamily,
    #[error("vector is zero within tolerance")]
    ZeroVector,
    #[error("vectors have different lengths: {left} vs {right}")]
    VectorLengthMismatch { left: usize, right: usize },
    #[error("the virtual-degeneracy criterion for strictness applies only for 0 < p < 2, got {0}")]
    ExponentOutOfRange(f64),
    #[error("vectors are linearly dependent")]
    NotLinearlyIndependent,
    #[error("supports are disjoint; the construction needs an intersecting coordinate")]
    DisjointSupports,
    #[error("restrictions to each other's support are not proportional (first mismatch at coordinate {at})")]
    RestrictionsNotProportional { at: usize },
    #[error("basis needs at least one vector")]
    EmptyBasis,
    #[error("dimension {got} too small: pairwise prime products require at least {needed}")]
    DimsTooSmall { needed: usize, got: usize },
    #[error("distance between points {i} and {j} left the floating range: {value}")]
    DistanceOutOfRange { i: usize, j: usize, value: f64 },
    #[error("induced distances violate the metric axioms under floating-point evaluation")]
    InducedMetricInvalid(Vec<crate::metric::MetricViolation>),
    #[error("non-finite entry in input vector at position {0}")]
    NonFiniteEntry(usize),
    #[error("constructed point set is invalid: {0}")]
    Internal(&'static str),
}

fn check_finite_entries(v: &[f64]) -> Result<(), LpError> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(at) => Err(LpError::NonFiniteEntry(at)),
        None => Ok(()),
    }
}

/// A finite point set in l_p^(M): an exponent and an N x M coordinate
/// matrix. Points are pairwise distinct; immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpPointSet {
    p: f64,
    coords: Vec<Vec<f64>>,
}

impl LpPointSet {
    pub fn new(p: f64, coords: Vec<Vec<f64>>, eps_c: f64) -> Result<Self, LpError> {
        if !p.is_finite() || p <= 0.0 {
            return Err(LpError::InvalidExponent(p));
        }
        if coords.is_empty() {
            return Err(LpError::EmptyPointSet);
        }
        let m = coords[0].len();
        if m == 0 {
            return Err(LpError::NoCoordinates);
        }
        for (row, point) in coords.iter().enumerate() {
            if point.len() != m {
                return Err(LpError::RaggedRow { row, len: point.len(), expected: m });
            }
            for (coord, &v) in point.iter().enumerate() {
                if !v.is_finite() {
                    return Err(LpError::NonFiniteCoordinate { point: row, coord });
                }
            }
        }
        for a in 0..coords.len() {
            for b in (a + 1)..coords.len() {
                let distinct = coords[a]
                    .iter()
                    .zip(&coords[b])
                    .any(|(x, y)| (x - y).abs() > eps_c);
                if !distinct {
                    return Err(LpError::DuplicatePoints { a, b });
                }
            }
        }
        Ok(LpPointSet { p, coords })
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.coords[0].len()
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.coords[k]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.coords
    }

    /// ||z_i - z_j||_p^p, the powered distance every gap over this set uses.
    pub fn powered_distance(&self, i: usize, j: usize) -> f64 {
        diff_norm_p_pow(&self.coords[i], &self.coords[j], self.p)
    }
}

/// sum_w |v(w)|^p.
pub fn norm_p_pow(v: &[f64], p: f64) -> f64 {
    v.iter().map(|x| x.abs().powf(p)).sum()
}

fn diff_norm_p_pow(a: &[f64], b: &[f64], p: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs().powf(p)).sum()
}

/// The metric induced by the point set: the l_p norm distance for p >= 1,
/// and d(x, y) = ||x - y||_p^p itself for 0 < p < 1 (which is a metric, the
/// powered form being subadditive). Fails only when a power overflows the
/// floating range.
pub fn lp_distance_matrix(ps: &LpPointSet) -> Result<FiniteMetricSpace, LpError> {
    let n = ps.len();
    let p = ps.exponent();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let pow = ps.powered_distance(i, j);
            let d = if p >= 1.0 { pow.powf(1.0 / p) } else { pow };
            // distinct points must keep a positive finite distance; extreme
            // exponents can overflow to inf or underflow to 0
            if !d.is_finite() || d <= 0.0 {
                return Err(LpError::DistanceOutOfRange { i, j, value: d });
            }
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    // the axioms hold mathematically; at extreme magnitudes the absolute
    // triangle slack can still lose to rounding, which is reported rather
    // than repaired
    validate_metric(dist, DEFAULT_EPS_TRI).map_err(LpError::InducedMetricInvalid)
}

fn check_ids(simplex: &SignedSimplex, ps: &LpPointSet) -> Result<(), LpError> {
    let max = simplex.max_id();
    if max >= ps.len() {
        return Err(LpError::IdOutOfRange { id: max, points: ps.len() });
    }
    Ok(())
}

/// The gap of a simplex over an l_p point set, with ||.||_p^p as the powered
/// distance functional.
pub fn gamma_p_lp(simplex: &SignedSimplex, ps: &LpPointSet) -> Result<GapValue, LpError> {
    check_ids(simplex, ps)?;
    let value = gamma_with(simplex, |i, j| ps.powered_distance(i, j));
    Ok(GapValue { p: ps.exponent(), value })
}

/// One run of equal coordinate values, with the x- and y-side weight it
/// carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub low: f64,
    pub high: f64,
    pub m: f64,
    pub n: f64,
}

/// Scalar-simplex verdict for one coordinate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoordinateReport {
    pub omega: usize,
    pub clusters: Vec<ClusterSummary>,
    pub balanced: bool,
}

/// Per-coordinate breakdown of a virtual-degeneracy check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VdReport {
    pub virtually_degenerate: bool,
    pub coordinates: Vec<CoordinateReport>,
}

/// Sorts items by value and opens a new cluster whenever the gap between
/// consecutive values exceeds `eps_c`. With `eps_c` = 0 this is exact
/// comparison, the right mode for integer or dyadic inputs. Chain merging is
/// order robust, but adversarially spaced values can over-merge; that is the
/// price of a deterministic rule with tolerances.
fn cluster_weighted(values: &mut [(f64, f64, f64)], eps_c: f64) -> Vec<ClusterSummary> {
    values.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite coordinates"));
    let mut clusters: Vec<ClusterSummary> = Vec::new();
    for &(v, m, n) in values.iter() {
        match clusters.last_mut() {
            Some(c) if v - c.high <= eps_c => {
                c.high = v;
                c.m += m;
                c.n += n;
            }
            _ => clusters.push(ClusterSummary { low: v, high: v, m, n }),
        }
    }
    clusters
}

/// Checks whether every coordinate's induced scalar simplex is degenerate:
/// coordinate values are clustered within `tol.eps_c` and each cluster must
/// carry matching x- and y-weight within `tol.eps_w`. Returns the full
/// per-coordinate report alongside the verdict. The input simplex must be
/// non-degenerate, since that is what the notion is defined for.
pub fn is_virtually_degenerate(
    simplex: &SignedSimplex,
    ps: &LpPointSet,
    tol: &Tolerances,
) -> Result<VdReport, LpError> {
    check_ids(simplex, ps)?;
    if simplex.is_degenerate(tol.eps_w) {
        return Err(LpError::DegenerateSimplex);
    }
    let mut coordinates = Vec::with_capacity(ps.dim());
    let mut all = true;
    for omega in 0..ps.dim() {
        let mut values: Vec<(f64, f64, f64)> = Vec::with_capacity(simplex.s() + simplex.t());
        for v in simplex.xs() {
            values.push((ps.point(v.id)[omega], v.weight, 0.0));
        }
        for v in simplex.ys() {
            values.push((ps.point(v.id)[omega], 0.0, v.weight));
        }
        let clusters = cluster_weighted(&mut values, tol.eps_c);
        let balanced = clusters.iter().all(|c| (c.m - c.n).abs() <= tol.eps_w);
        all &= balanced;
        coordinates.push(CoordinateReport { omega, clusters, balanced });
    }
    Ok(VdReport { virtually_degenerate: all, coordinates })
}

/// True iff the weighted side sums agree as vectors:
/// || sum m_j x_j - sum n_i y_i ||_inf <= eps.
pub fn is_balanced(simplex: &SignedSimplex, ps: &LpPointSet, eps: f64) -> Result<bool, LpError> {
    Ok(balance_defect(simplex, ps)?
        .iter()
        .all(|d| d.abs() <= eps))
}

/// sum m_j x_j - sum n_i y_i as a coordinate vector.
pub fn balance_defect(simplex: &SignedSimplex, ps: &LpPointSet) -> Result<Vec<f64>, LpError> {
    check_ids(simplex, ps)?;
    let mut defect = vec![0.0; ps.dim()];
    for v in simplex.xs() {
        for (d, c) in defect.iter_mut().zip(ps.point(v.id)) {
            *d += v.weight * c;
        }
    }
    for v in simplex.ys() {
        for (d, c) in defect.iter_mut().zip(ps.point(v.id)) {
            *d -= v.weight * c;
        }
    }
    Ok(defect)
}

/// Basis of all virtually degenerate weightings of a point set.
#[derive(Debug, Clone, Serialize)]
pub struct VdKernel {
    /// Each vector sums to zero and satisfies every per-coordinate cluster
    /// constraint; splitting one by sign yields a virtually degenerate
    /// simplex.
    pub basis: Vec<Vec<f64>>,
    pub constraint_count: usize,
}

impl VdKernel {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Singular values and full right singular vectors of `a`, robust to wide
/// matrices (rows are zero-padded so the kernel directions are not lost to a
/// thin decomposition).
pub(crate) fn right_singular(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (rows, cols) = a.shape();
    let padded = if rows < cols {
        let mut square = DMatrix::zeros(cols, cols);
        square.view_mut((0, 0), (rows, cols)).copy_from(a);
        square
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    (svd.singular_values.iter().cloned().collect(), v_t.transpose())
}

/// Assembles the cluster-incidence system of the point set (one row per
/// coordinate-value cluster, a 1 for each member point) and returns a basis
/// of its kernel. A weighting over distinct points is a virtually degenerate
/// simplex exactly when every such cluster carries zero total weight, so the
/// point set admits a virtually degenerate simplex iff the kernel is
/// non-trivial.
pub fn vd_kernel(ps: &LpPointSet, tol: &Tolerances) -> VdKernel {
    let n = ps.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for omega in 0..ps.dim() {
        let mut values: Vec<(f64, usize)> =
            (0..n).map(|k| (ps.point(k)[omega], k)).collect();
        values.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite coordinates"));
        let mut cluster_start = 0;
        for k in 1..=n {
            let open_new = k == n || values[k].0 - values[k - 1].0 > tol.eps_c;
            if open_new {
                let mut row = vec![0.0; n];
                for &(_, idx) in &values[cluster_start..k] {
                    row[idx] = 1.0;
                }
                rows.push(row);
                cluster_start = k;
            }
        }
    }
    let constraint_count = rows.len();
    let a = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let (singular, v) = right_singular(&a);
    let sigma_max = singular.iter().cloned().fold(0.0_f64, f64::max);
    let threshold = 1e-10 * sigma_max.max(1.0);
    let mut basis = Vec::new();
    for (k, &sigma) in singular.iter().enumerate() {
        if sigma <= threshold {
            let mut alpha: Vec<f64> = v.column(k).iter().cloned().collect();
            crate::negtype::normalize_alpha(&mut alpha);
            let sum: f64 = alpha.iter().sum();
            assert!(
                sum.abs() <= 1e-6,
                "kernel vector must sum to zero, got {sum}"
            );
            basis.push(alpha);
        }
    }
    basis.sort_by(|a, b| a.partial_cmp(b).expect("finite weights"));
    VdKernel { basis, constraint_count }
}

/// Strict p-negative type of an l_p point set for 0 < p < 2, decided by the
/// virtual-degeneracy criterion: strict iff the set admits no virtually
/// degenerate simplex, i.e. iff the cluster kernel is trivial.
pub fn strict_p_negtype_lp(ps: &LpPointSet, tol: &Tolerances) -> Result<bool, LpError> {
    let p = ps.exponent();
    if p <= 0.0 || p >= 2.0 {
        return Err(LpError::ExponentOutOfRange(p));
    }
    Ok(vd_kernel(ps, tol).is_trivial())
}

fn support(v: &[f64], eps: f64) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > eps)
        .map(|(i, _)| i)
        .collect()
}

/// Are the supports of `u` and `v` disjoint? Entries with |.| <= eps count
/// as zero.
pub fn disjoint_support_check(u: &[f64], v: &[f64], eps: f64) -> Result<bool, LpError> {
    if u.len() != v.len() {
        return Err(LpError::VectorLengthMismatch { left: u.len(), right: v.len() });
    }
    check_finite_entries(u)?;
    check_finite_entries(v)?;
    let su = support(u, eps);
    let sv = support(v, eps);
    if su.is_empty() || sv.is_empty() {
        return Err(LpError::ZeroVector);
    }
    Ok(!su.iter().any(|i| v[*i].abs() > eps))
}

/// ||u + v||_p^p + ||u - v||_p^p - 2(||u||_p^p + ||v||_p^p). Zero for
/// disjointly supported vectors at every p, zero for every pair at p = 2,
/// and non-zero otherwise for p in [1,2) and (2,inf).
pub fn parallelogram_equality_residual(u: &[f64], v: &[f64], p: f64) -> Result<f64, LpError> {
    if u.len() != v.len() {
        return Err(LpError::VectorLengthMismatch { left: u.len(), right: v.len() });
    }
    check_finite_entries(u)?;
    check_finite_entries(v)?;
    if u.iter().all(|x| *x == 0.0) || v.iter().all(|x| *x == 0.0) {
        return Err(LpError::ZeroVector);
    }
    let sum: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    let diff: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    Ok(norm_p_pow(&sum, p) + norm_p_pow(&diff, p)
        - 2.0 * (norm_p_pow(u, p) + norm_p_pow(v, p)))
}

/// Outcome of the numerical-set identity check on two equal-sized families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElsnerReport {
    /// Whether the within-sums equal the cross-sums, i.e. the gap of the
    /// weight-one simplex vanishes.
    pub equality_holds: bool,
    /// Whether, coordinate by coordinate, the two families are identical as
    /// numerical sets (equal sorted multisets).
    pub per_coordinate_identical: bool,
    /// The gap itself.
    pub residual: f64,
}

/// Elsner-style identity check: for 0 < p < 2 the weight-one simplex
/// [x_j(1); y_i(1)] has zero gap exactly when, for every coordinate, the two
/// families are identical numerical sets. Both sides of the equivalence are
/// computed independently and reported. The families must not be a global
/// permutation of each other (that simplex is degenerate and the equality is
/// trivial).
pub fn elsner_identity_check(
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    p: f64,
    tol: &Tolerances,
) -> Result<ElsnerReport, LpError> {
    if xs.is_empty() || ys.is_empty() {
        return Err(LpError::EmptyFamily);
    }
    if xs.len() != ys.len() {
        return Err(LpError::FamilySizeMismatch { xs: xs.len(), ys: ys.len() });
    }
    if !p.is_finite() || p <= 0.0 {
        return Err(LpError::InvalidExponent(p));
    }
    let m = xs[0].len();
    for fam in [xs, ys] {
        for (row, v) in fam.iter().enumerate() {
            if v.len() != m {
                return Err(LpError::RaggedRow { row, len: v.len(), expected: m });
            }
            check_finite_entries(v)?;
        }
    }
    if families_match(xs, ys, tol.eps_c) {
        return Err(LpError::DegenerateFamilies);
    }

    let n = xs.len();
    let mut cross = 0.0;
    for x in xs {
        for y in ys {
            cross += diff_norm_p_pow(x, y, p);
        }
    }
    let mut within = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            within += diff_norm_p_pow(&xs[a], &xs[b], p);
            within += diff_norm_p_pow(&ys[a], &ys[b], p);
        }
    }
    let residual = cross - within;
    let equality_holds = residual.abs() <= tol.eps_w * cross.abs().max(1.0);

    let mut per_coordinate_identical = true;
    for omega in 0..m {
        let mut xv: Vec<f64> = xs.iter().map(|v| v[omega]).collect();
        let mut yv: Vec<f64> = ys.iter().map(|v| v[omega]).collect();
        xv.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        yv.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        if xv.iter().zip(&yv).any(|(a, b)| (a - b).abs() > tol.eps_c) {
            per_coordinate_identical = false;
            break;
        }
    }
    Ok(ElsnerReport { equality_holds, per_coordinate_identical, residual })
}

/// Does some pairing match every x to an equal y (within eps per
/// coordinate)? Greedy matching is fine for an equality relation at desk
/// scale.
fn families_match(xs: &[Vec<f64>], ys: &[Vec<f64>], eps: f64) -> bool {
    let mut used = vec![false; ys.len()];
    'outer: for x in xs {
        for (i, y) in ys.iter().enumerate() {
            if !used[i] && x.iter().zip(y).all(|(a, b)| (a - b).abs() <= eps) {
                used[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// The six points and weight-one (3,3)-simplex produced by the
/// restriction-proportionality construction.
#[derive(Debug, Clone, Serialize)]
pub struct VdsPair {
    pub kappa: f64,
    /// x1 = ku - v, x2 = -ku, x3 = v, y1 = v - ku, y2 = ku, y3 = -v.
    pub points: Vec<Vec<f64>>,
    pub simplex: SignedSimplex,
}

/// Builds a virtually degenerate (3,3)-simplex from two vectors whose
/// supports intersect and whose restrictions to each other's support are
/// proportional (kappa * u[v] = v[u]). Each failed hypothesis is rejected by
/// name. The output is verified virtually degenerate before being returned.
pub fn construct_vds_pair(u: &[f64], v: &[f64], eps: f64) -> Result<VdsPair, LpError> {
    if u.len() != v.len() {
        return Err(LpError::VectorLengthMismatch { left: u.len(), right: v.len() });
    }
    check_finite_entries(u)?;
    check_finite_entries(v)?;
    let su = support(u, eps);
    let sv = support(v, eps);
    if su.is_empty() || sv.is_empty() {
        return Err(LpError::ZeroVector);
    }
    let scale = u
        .iter()
        .chain(v)
        .fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let mut independent = false;
    for a in 0..u.len() {
        for b in (a + 1)..u.len() {
            if (u[a] * v[b] - u[b] * v[a]).abs() > eps * scale.max(1.0) * scale.max(1.0) {
                independent = true;
            }
        }
    }
    if !independent {
        return Err(LpError::NotLinearlyIndependent);
    }
    let shared: Vec<usize> = su.iter().cloned().filter(|&i| v[i].abs() > eps).collect();
    let Some(&first) = shared.first() else {
        return Err(LpError::DisjointSupports);
    };
    let kappa = v[first] / u[first];
    for &w in &shared {
        if (kappa * u[w] - v[w]).abs() > eps * scale.max(1.0) * kappa.abs().max(1.0) {
            return Err(LpError::RestrictionsNotProportional { at: w });
        }
    }

    let ku: Vec<f64> = u.iter().map(|x| kappa * x).collect();
    let combine = |sign_ku: f64, sign_v: f64| -> Vec<f64> {
        ku.iter()
            .zip(v)
            .map(|(a, b)| sign_ku * a + sign_v * b)
            .collect()
    };
    let points = vec![
        combine(1.0, -1.0),  // x1 = ku - v
        combine(-1.0, 0.0),  // x2 = -ku
        combine(0.0, 1.0),   // x3 = v
        combine(-1.0, 1.0),  // y1 = v - ku
        combine(1.0, 0.0),   // y2 = ku
        combine(0.0, -1.0),  // y3 = -v
    ];
    let simplex = SignedSimplex::new(
        (0..3).map(|id| Vertex::new(id, 1.0)).collect(),
        (3..6).map(|id| Vertex::new(id, 1.0)).collect(),
        6,
        1e-9,
    )
    .map_err(|_| LpError::Internal("pair simplex construction"))?;
    let ps = LpPointSet::new(1.0, points.clone(), 0.0)
        .map_err(|_| LpError::Internal("constructed points must be pairwise distinct"))?;
    let report = is_virtually_degenerate(&simplex, &ps, &Tolerances::default())?;
    if !report.virtually_degenerate {
        return Err(LpError::Internal("construction failed its own degeneracy check"));
    }
    Ok(VdsPair { kappa, points, simplex })
}

/// Support relationship of one basis pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSupportReport {
    pub i: usize,
    pub j: usize,
    /// 1-based coordinates where both vectors are non-zero.
    pub shared_support: Vec<usize>,
    pub kappa: Option<f64>,
    pub linearly_independent: bool,
    pub restrictions_proportional: bool,
    /// True when the pair satisfies every hypothesis of the pair
    /// construction, with the kappa above.
    pub hypotheses_ok: bool,
}

/// A truncated basis of a virtually degenerate subspace, with the pairwise
/// support analysis that certifies the construction hypotheses.
#[derive(Debug, Clone, Serialize)]
pub struct TruncatedBasis {
    /// Truncation length: coordinates l = 1..=dims were materialized.
    pub dims: usize,
    pub vectors: Vec<Vec<f64>>,
    pub pairs: Vec<PairSupportReport>,
}

fn first_primes(k: usize) -> Vec<usize> {
    let mut primes = Vec::with_capacity(k);
    let mut candidate = 2;
    while primes.len() < k {
        if primes.iter().all(|p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

fn analyze_pairs(vectors: &[Vec<f64>]) -> Vec<PairSupportReport> {
    let mut pairs = Vec::new();
    for i in 0..vectors.len() {
        for j in (i + 1)..vectors.len() {
            let u = &vectors[i];
            let v = &vectors[j];
            // generated entries are exact dyadic/rational values, so the
            // support and proportionality tests are exact comparisons
            let shared: Vec<usize> = (0..u.len())
                .filter(|&l| u[l] != 0.0 && v[l] != 0.0)
                .map(|l| l + 1)
                .collect();
            let mut independent = false;
            'outer: for a in 0..u.len() {
                for b in (a + 1)..u.len() {
                    if u[a] * v[b] != u[b] * v[a] {
                        independent = true;
                        break 'outer;
                    }
                }
            }
            let kappa = shared.first().map(|&l| v[l - 1] / u[l - 1]);
            let restrictions_proportional = match kappa {
                Some(k) => shared.iter().all(|&l| k * u[l - 1] == v[l - 1]),
                None => false,
            };
            let hypotheses_ok =
                independent && !shared.is_empty() && restrictions_proportional;
            pairs.push(PairSupportReport {
                i,
                j,
                shared_support: shared,
                kappa,
                linearly_independent: independent,
                restrictions_proportional,
                hypotheses_ok,
            });
        }
    }
    pairs
}

fn truncated_prime_basis(
    count: usize,
    dims: usize,
    entry: impl Fn(usize, usize) -> f64,
) -> Result<TruncatedBasis, LpError> {
    if count == 0 {
        return Err(LpError::EmptyBasis);
    }
    let primes = first_primes(count.max(2));
    // every pairwise product must fit inside the truncation, the binding one
    // being the largest pair (for count = 1 the first two primes still set
    // the floor so the intersection structure is visible)
    let needed = if count >= 2 {
        primes[count - 2] * primes[count - 1]
    } else {
        primes[0] * primes[1]
    };
    if dims < needed {
        return Err(LpError::DimsTooSmall { needed, got: dims });
    }
    let mut vectors = Vec::with_capacity(count);
    for (n, &prime) in primes.iter().take(count).enumerate() {
        let mut v = vec![0.0; dims];
        for l in 1..=dims {
            if l % prime == 0 {
                v[l - 1] = entry(n, l);
            }
        }
        vectors.push(v);
    }
    let pairs = analyze_pairs(&vectors);
    Ok(TruncatedBasis { dims, vectors, pairs })
}

/// Truncation of the prime-divisibility basis x_n(l) = 2^(-l) when the n-th
/// prime divides l, else 0 (coordinates 1-based up to `dims`). Every pair
/// shares support on the multiples of the prime product and has kappa = 1,
/// so each pair satisfies the construction hypotheses; the subspace spanned
/// is virtually degenerate without containing disjointly supported vectors.
/// Per-coordinate checks are unaffected by truncation.
pub fn infvds_basis(count: usize, dims: usize) -> Result<TruncatedBasis, LpError> {
    truncated_prime_basis(count, dims, |_, l| (2.0_f64).powi(-(l as i32)))
}

/// The variant basis x_n(l) = p_n^(-l) on the same support pattern. Shared
/// supports intersect but the restrictions are no longer proportional once a
/// pair shares two or more coordinates, so this generator does not feed the
/// pair construction; it is provided as raw material only.
pub fn infvds_variant_basis(count: usize, dims: usize) -> Result<TruncatedBasis, LpError> {
    truncated_prime_basis(count, dims, |n, l| {
        (first_primes(n + 1)[n] as f64).powi(-(l as i32))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::DEFAULT_EPS_W;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn points(p: f64, coords: &[&[f64]]) -> LpPointSet {
        LpPointSet::new(p, coords.iter().map(|r| r.to_vec()).collect(), 1e-9).unwrap()
    }

    fn weight_one_simplex(xs: &[usize], ys: &[usize], universe: usize) -> SignedSimplex {
        SignedSimplex::new(
            xs.iter().map(|&id| Vertex::new(id, 1.0)).collect(),
            ys.iter().map(|&id| Vertex::new(id, 1.0)).collect(),
            universe,
            DEFAULT_EPS_W,
        )
        .unwrap()
    }

    /// The affinely dependent four-point set whose kernel is trivial:
    /// (0,0), (1,1), (3,1), (2,0).
    fn counterexample4(p: f64) -> LpPointSet {
        points(p, &[&[0.0, 0.0], &[1.0, 1.0], &[3.0, 1.0], &[2.0, 0.0]])
    }

    /// {0, u+v, u, v} for u = (1,0), v = (0,1).
    fn parallelogram(p: f64) -> LpPointSet {
        points(p, &[&[0.0, 0.0], &[1.0, 1.0], &[1.0, 0.0], &[0.0, 1.0]])
    }

    #[test]
    fn distances_match_hand_values() {
        let d = lp_distance_matrix(&points(1.0, &[&[0.0, 0.0], &[1.0, 1.0]])).unwrap();
        assert_eq!(d.distance(0, 1), 2.0);
        let d = lp_distance_matrix(&points(2.0, &[&[0.0, 0.0], &[3.0, 4.0]])).unwrap();
        assert_eq!(d.distance(0, 1), 5.0);
        let d = lp_distance_matrix(&points(0.5, &[&[0.0], &[4.0]])).unwrap();
        assert_eq!(d.distance(0, 1), 2.0);
    }

    #[test]
    fn parallelogram_gap_vanishes() {
        let ps = parallelogram(1.0);
        let d = weight_one_simplex(&[0, 1], &[2, 3], 4);
        assert_eq!(gamma_p_lp(&d, &ps).unwrap().value, 0.0);

        // u = (1,0), v = (0,2) at p = 1.5: per-coordinate degeneracy forces
        // the same cancellation
        let ps = points(1.5, &[&[0.0, 0.0], &[1.0, 2.0], &[1.0, 0.0], &[0.0, 2.0]]);
        let d = weight_one_simplex(&[0, 1], &[2, 3], 4);
        assert!(gamma_p_lp(&d, &ps).unwrap().value.abs() <= 1e-12);
    }

    #[test]
    fn balanced_pairing_of_the_four_point_set_has_positive_gap() {
        let ps = counterexample4(1.0);
        let d = weight_one_simplex(&[0, 2], &[1, 3], 4);
        let gap = gamma_p_lp(&d, &ps).unwrap().value;
        assert!(gap > 1e-9, "gap = {gap}");
    }

    #[test]
    fn vd_verdicts_on_the_named_fixtures() {
        let ps = parallelogram(1.0);
        let d = weight_one_simplex(&[0, 1], &[2, 3], 4);
        let report = is_virtually_degenerate(&d, &ps, &tol()).unwrap();
        assert!(report.virtually_degenerate);
        assert!(report.coordinates.iter().all(|c| c.balanced));

        let ps = counterexample4(1.0);
        let d = weight_one_simplex(&[0, 2], &[1, 3], 4);
        let report = is_virtually_degenerate(&d, &ps, &tol()).unwrap();
        assert!(!report.virtually_degenerate);
        // coordinate 0 clusters {0}, {1}, {2}, {3} with unmatched weights
        assert!(!report.coordinates[0].balanced);

        let degenerate = SignedSimplex::new(
            vec![Vertex::new(0, 1.0)],
            vec![Vertex::new(0, 1.0)],
            4,
            DEFAULT_EPS_W,
        )
        .unwrap();
        assert!(matches!(
            is_virtually_degenerate(&degenerate, &ps, &tol()),
            Err(LpError::DegenerateSimplex)
        ));
    }

    #[test]
    fn balancedness_matches_vector_arithmetic() {
        let ps = counterexample4(1.0);
        let d = weight_one_simplex(&[0, 2], &[1, 3], 4);
        assert!(is_balanced(&d, &ps, 1e-9).unwrap());

        let ps = parallelogram(1.0);
        let d = weight_one_simplex(&[0, 1], &[2, 3], 4);
        assert!(is_balanced(&d, &ps, 1e-9).unwrap());

        // [0(1), u(1); v(2)] with u = (2,0), v = (0,1): (2,0) vs (0,2)
        let ps = points(1.0, &[&[0.0, 0.0], &[2.0, 0.0], &[0.0, 1.0]]);
        let d = SignedSimplex::new(
            vec![Vertex::new(0, 1.0), Vertex::new(1, 1.0)],
            vec![Vertex::new(2, 2.0)],
            3,
            DEFAULT_EPS_W,
        )
        .unwrap();
        assert!(!is_balanced(&d, &ps, 1e-9).unwrap());
    }

    #[test]
    fn kernel_finds_the_parallelogram_weighting_and_nothing_spurious() {
        let kernel = vd_kernel(&parallelogram(1.0), &tol());
        assert_eq!(kernel.dimension(), 1);
        let alpha = &kernel.basis[0];
        let expected = [1.0, 1.0, -1.0, -1.0];
        for (a, e) in alpha.iter().zip(expected) {
            assert!((a - e).abs() <= 1e-8, "alpha = {alpha:?}");
        }

        assert!(vd_kernel(&counterexample4(1.0), &tol()).is_trivial());
        assert!(vd_kernel(&points(1.0, &[&[0.0, 0.0], &[1.0, 2.0]]), &tol()).is_trivial());
        assert!(vd_kernel(&points(1.0, &[&[0.5, 0.5]]), &tol()).is_trivial());
    }

    #[test]
    fn strictness_via_the_kernel_criterion() {
        for p in [0.5, 1.0, 1.5] {
            assert!(strict_p_negtype_lp(&counterexample4(p), &tol()).unwrap());
            assert!(!strict_p_negtype_lp(&parallelogram(p), &tol()).unwrap());
        }
        assert!(strict_p_negtype_lp(&points(1.0, &[&[0.0], &[2.0]]), &tol()).unwrap());
        assert!(matches!(
            strict_p_negtype_lp(&counterexample4(2.0), &tol()),
            Err(LpError::ExponentOutOfRange(_))
        ));
    }

    #[test]
    fn disjoint_support_and_parallelogram_residual() {
        assert!(disjoint_support_check(&[1.0, 0.0], &[0.0, 1.0], 1e-9).unwrap());
        assert_eq!(
            parallelogram_equality_residual(&[1.0, 0.0], &[0.0, 1.0], 1.0).unwrap(),
            0.0
        );

        assert!(!disjoint_support_check(&[1.0, 1.0], &[0.0, 1.0], 1e-9).unwrap());
        // ||(1,2)||_1 + ||(1,0)||_1 - 2(2 + 1) = 3 + 1 - 6
        assert_eq!(
            parallelogram_equality_residual(&[1.0, 1.0], &[0.0, 1.0], 1.0).unwrap(),
            -2.0
        );

        // p = 2 is the parallelogram identity: zero for every pair
        for (u, v) in [
            (vec![1.0, 1.0], vec![0.0, 1.0]),
            (vec![2.0, -1.0], vec![0.5, 3.0]),
        ] {
            assert!(
                parallelogram_equality_residual(&u, &v, 2.0)
                    .unwrap()
                    .abs()
                    <= 1e-12
            );
        }

        assert!(matches!(
            disjoint_support_check(&[0.0, 0.0], &[0.0, 1.0], 1e-9),
            Err(LpError::ZeroVector)
        ));
    }

    #[test]
    fn elsner_check_agrees_on_both_routes() {
        // ys permutes xs independently per coordinate, without being a
        // global permutation of the vectors
        let xs = vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![3.0, 5.0]];
        let ys = vec![vec![1.0, 0.0], vec![0.0, 5.0], vec![3.0, 2.0]];
        for p in [0.5, 1.0, 1.5] {
            let report = elsner_identity_check(&xs, &ys, p, &tol()).unwrap();
            assert!(report.equality_holds, "p = {p}: residual {}", report.residual);
            assert!(report.per_coordinate_identical);
        }

        // perturbing one coordinate breaks both verdicts
        let mut ys_bad = ys.clone();
        ys_bad[1][1] += 0.25;
        let report = elsner_identity_check(&xs, &ys_bad, 1.0, &tol()).unwrap();
        assert!(!report.equality_holds);
        assert!(!report.per_coordinate_identical);
        assert!(report.residual > 0.0);

        // single pair: residual is the powered distance itself
        let report =
            elsner_identity_check(&[vec![0.0, 0.0]], &[vec![1.0, 2.0]], 1.0, &tol()).unwrap();
        assert!(!report.equality_holds);
        assert!(!report.per_coordinate_identical);
        assert_eq!(report.residual, 3.0);

        // a globally permuted family is degenerate as a simplex
        let perm = vec![vec![3.0, 5.0], vec![0.0, 0.0], vec![1.0, 2.0]];
        assert!(matches!(
            elsner_identity_check(&xs, &perm, 1.0, &tol()),
            Err(LpError::DegenerateFamilies)
        ));
    }

    #[test]
    fn pair_construction_on_the_overlap_example() {
        let built = construct_vds_pair(&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0], 1e-9).unwrap();
        assert_eq!(built.kappa, 1.0);
        let expected: Vec<Vec<f64>> = vec![
            vec![1.0, 0.0, -1.0],
            vec![-1.0, -1.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![-1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![0.0, -1.0, -1.0],
        ];
        assert_eq!(built.points, expected);
        let ps = LpPointSet::new(1.0, built.points.clone(), 0.0).unwrap();
        let report = is_virtually_degenerate(&built.simplex, &ps, &tol()).unwrap();
        assert!(report.virtually_degenerate);
        assert_eq!(report.coordinates.len(), 3);
        assert!(report.coordinates.iter().all(|c| c.balanced));
    }

    #[test]
    fn pair_construction_rejections_are_named() {
        assert!(matches!(
            construct_vds_pair(&[1.0, 0.0], &[0.0, 1.0], 1e-9),
            Err(LpError::DisjointSupports)
        ));
        assert!(matches!(
            construct_vds_pair(&[1.0, 0.0], &[2.0, 0.0], 1e-9),
            Err(LpError::NotLinearlyIndependent)
        ));
        assert!(matches!(
            construct_vds_pair(&[1.0, 1.0, 0.0], &[1.0, 2.0, 1.0], 1e-9),
            Err(LpError::RestrictionsNotProportional { .. })
        ));
    }

    #[test]
    fn prime_basis_supports_and_errors() {
        let basis = infvds_basis(2, 6).unwrap();
        let s1 = support(&basis.vectors[0], 0.0);
        let s2 = support(&basis.vectors[1], 0.0);
        assert_eq!(s1, vec![1, 3, 5]); // 0-based multiples of 2: l = 2, 4, 6
        assert_eq!(s2, vec![2, 5]); // l = 3, 6
        assert_eq!(basis.pairs[0].shared_support, vec![6]);
        assert_eq!(basis.pairs[0].kappa, Some(1.0));
        assert!(basis.pairs[0].hypotheses_ok);

        let basis = infvds_basis(3, 15).unwrap();
        let shared: Vec<&Vec<usize>> =
            basis.pairs.iter().map(|p| &p.shared_support).collect();
        assert_eq!(shared[0], &vec![6, 12]);
        assert_eq!(shared[1], &vec![10]);
        assert_eq!(shared[2], &vec![15]);

        assert!(matches!(
            infvds_basis(2, 5),
            Err(LpError::DimsTooSmall { needed: 6, got: 5 })
        ));
    }

    #[test]
    fn variant_basis_breaks_proportionality_on_long_overlaps() {
        let basis = infvds_variant_basis(2, 12).unwrap();
        // shared support {6, 12} with values 2^-l vs 3^-l: not proportional
        let pair = &basis.pairs[0];
        assert_eq!(pair.shared_support, vec![6, 12]);
        assert!(pair.linearly_independent);
        assert!(!pair.restrictions_proportional);
        assert!(!pair.hypotheses_ok);
    }

    #[test]
    fn point_set_validation_names_failures() {
        assert!(matches!(
            LpPointSet::new(0.0, vec![vec![0.0]], 1e-9),
            Err(LpError::InvalidExponent(_))
        ));
        assert!(matches!(
            LpPointSet::new(1.0, vec![vec![0.0], vec![1e-12]], 1e-9),
            Err(LpError::DuplicatePoints { a: 0, b: 1 })
        ));
        assert!(matches!(
            LpPointSet::new(1.0, vec![vec![0.0], vec![1.0, 2.0]], 1e-9),
            Err(LpError::RaggedRow { row: 1, .. })
        ));
    }
}
