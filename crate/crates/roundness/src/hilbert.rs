//! The p = 2 layer, where everything is exact linear algebra: the gap of a
//! simplex equals the squared norm of its balance defect, so 2-polygonal
//! equalities are precisely the balanced simplices and strict 2-negative
//! type is precisely affine independence.

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::lp::{balance_defect, gamma_p_lp, LpError, LpPointSet};
use crate::negtype::normalize_alpha;
use crate::simplex::{SignedSimplex, Vertex};

/// Relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum HilbertError {
    #[error("operation requires exponent 2, the point set has p = {0}")]
    ExponentNotTwo(f64),
    #[error("difference matrix left the floating range; coordinates are too extreme for rank analysis")]
    NumericRange,
    #[error("affine analysis needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("coefficient vector has {len} entries for {points} points")]
    CoefficientLength { len: usize, points: usize },
    #[error("coefficient vector is zero")]
    ZeroCoefficients,
    #[error("coefficients do not sum to zero: {sum}")]
    CoefficientsNotZeroSum { sum: f64 },
    #[error("coefficients do not annihilate the points: defect norm {defect}")]
    CoefficientsNotAnnihilating { defect: f64 },
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Both sides of the squared-defect identity, evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gamma2Identity {
    /// || sum m_j x_j - sum n_i y_i ||^2
    pub lhs: f64,
    /// gamma_2 of the simplex.
    pub gap: f64,
}

/// The two equivalent faces of a 2-polygonal equality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Polygonal2 {
    pub gap_zero: bool,
    pub balanced: bool,
    pub gap: f64,
    pub defect_norm: f64,
}

/// Affine-dependence analysis of a point set: the rank of the difference
/// matrix {z_k - z_0}, and one annihilating coefficient vector when the
/// points are dependent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineReport {
    pub rank: usize,
    pub dependent: bool,
    /// Coefficients c over all points with sum c = 0 and sum c_k z_k = 0,
    /// normalized to max-entry 1; present exactly when `dependent`.
    pub dependency: Option<Vec<f64>>,
}

fn require_p2(ps: &LpPointSet) -> Result<(), HilbertError> {
    if ps.exponent() != 2.0 {
        return Err(HilbertError::ExponentNotTwo(ps.exponent()));
    }
    Ok(())
}

/// Evaluates the identity ||sum m_j x_j - sum n_i y_i||^2 = gamma_2(D), both
/// sides computed on their own: the left from the balance defect, the right
/// from the pairwise distance sums.
pub fn gamma2_identity(
    simplex: &SignedSimplex,
    ps: &LpPointSet,
) -> Result<Gamma2Identity, HilbertError> {
    require_p2(ps)?;
    let defect = balance_defect(simplex, ps)?;
    let lhs = defect.iter().map(|d| d * d).sum();
    let gap = gamma_p_lp(simplex, ps)?.value;
    Ok(Gamma2Identity { lhs, gap })
}

/// Classifies a simplex at p = 2: is the gap zero, and is the simplex
/// balanced? The identity couples the tolerances: the gap is compared
/// against eps^2 and the defect norm against eps, so the two verdicts agree
/// wherever the arithmetic does.
pub fn classify_2_polygonal(
    simplex: &SignedSimplex,
    ps: &LpPointSet,
    eps: f64,
) -> Result<Polygonal2, HilbertError> {
    let id = gamma2_identity(simplex, ps)?;
    let defect_norm = id.lhs.max(0.0).sqrt();
    Ok(Polygonal2 {
        gap_zero: id.gap.abs() <= eps * eps,
        balanced: defect_norm <= eps,
        gap: id.gap,
        defect_norm,
    })
}

/// Rank of the difference matrix {z_k - z_0} via singular values, with one
/// extracted dependency when the rank falls short. The dependency is the
/// right singular vector of the smallest singular value, extended by
/// c_0 = -(c_1 + ... + c_n) so it annihilates the points with zero sum.
pub fn affine_dependence(ps: &LpPointSet) -> Result<AffineReport, HilbertError> {
    let n = ps.len();
    if n < 2 {
        return Err(HilbertError::TooFewPoints(n));
    }
    let m = ps.dim();
    let base = ps.point(0);
    let diffs = DMatrix::from_fn(m, n - 1, |r, c| ps.point(c + 1)[r] - base[r]);
    if diffs.iter().any(|v| !v.is_finite()) {
        return Err(HilbertError::NumericRange);
    }
    let (singular, v) = crate::lp::right_singular(&diffs);
    if singular.iter().any(|s| !s.is_finite()) {
        return Err(HilbertError::NumericRange);
    }
    let sigma_max = singular.iter().cloned().fold(0.0_f64, f64::max);
    let threshold = DEFAULT_RANK_THRESHOLD * sigma_max.max(f64::MIN_POSITIVE);
    let rank = singular.iter().filter(|s| **s > threshold).count();
    let dependent = rank < n - 1;
    let dependency = if dependent {
        let smallest = singular
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite singular values"))
            .map(|(k, _)| k)
            .expect("n >= 2 gives at least one singular value");
        let tail = v.column(smallest);
        let mut c = Vec::with_capacity(n);
        c.push(-tail.iter().sum::<f64>());
        c.extend(tail.iter());
        normalize_alpha(&mut c);
        Some(c)
    } else {
        None
    };
    Ok(AffineReport { rank, dependent, dependency })
}

/// Turns an annihilating zero-sum coefficient vector into the balanced
/// simplex it encodes: positive coefficients form the x side, negative ones
/// the y side, zeros are dropped. The preconditions (c non-zero, zero sum,
/// zero weighted point sum) are all checked against `eps`.
pub fn balanced_simplex_from_dependency(
    ps: &LpPointSet,
    c: &[f64],
    eps: f64,
) -> Result<SignedSimplex, HilbertError> {
    if c.len() != ps.len() {
        return Err(HilbertError::CoefficientLength { len: c.len(), points: ps.len() });
    }
    let scale = c.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return Err(HilbertError::ZeroCoefficients);
    }
    let sum: f64 = c.iter().sum();
    if sum.abs() > eps * scale.max(1.0) {
        return Err(HilbertError::CoefficientsNotZeroSum { sum });
    }
    let mut weighted = vec![0.0; ps.dim()];
    for (k, &ck) in c.iter().enumerate() {
        for (w, coord) in weighted.iter_mut().zip(ps.point(k)) {
            *w += ck * coord;
        }
    }
    let point_scale = ps
        .points()
        .iter()
        .flatten()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let defect = weighted.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if defect > eps * (scale * point_scale * ps.len() as f64).max(1.0) {
        return Err(HilbertError::CoefficientsNotAnnihilating { defect });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, &ck) in c.iter().enumerate() {
        if ck > eps {
            xs.push(Vertex::new(k, ck));
        } else if ck < -eps {
            ys.push(Vertex::new(k, -ck));
        }
    }
    if xs.is_empty() || ys.is_empty() {
        return Err(HilbertError::ZeroCoefficients);
    }
    Ok(SignedSimplex::from_parts(xs, ys))
}

/// Strict 2-negative type of a point set under the Euclidean metric, decided
/// by affine independence. A single point is vacuously strict.
pub fn strict_2_negtype(ps: &LpPointSet) -> Result<bool, HilbertError> {
    require_p2(ps)?;
    if ps.len() == 1 {
        return Ok(true);
    }
    Ok(!affine_dependence(ps)?.dependent)
}
