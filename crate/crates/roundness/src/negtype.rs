//! Eigenvalue certificates for p-negative type, generalized roundness by
//! bisection, polygonal-equality witnesses and the non-embedding verdict.
//!
//! A space has p-negative type exactly when the quadratic form of the
//! powered distance matrix D_p is non-positive on the hyperplane of zero-sum
//! weight vectors. Restricting the form to a basis of that hyperplane turns
//! the question into the sign of the largest eigenvalue of a symmetric
//! (n-1) x (n-1) matrix, which is what everything here runs on.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::metric::FiniteMetricSpace;
use crate::Tolerances;

/// Default cap for the roundness bisection.
pub const DEFAULT_P_MAX: f64 = crate::DEFAULT_P_MAX;

#[derive(Debug, Error)]
pub enum NegTypeError {
    #[error("negative type fails at p = {p} (lambda_max = {lambda_max}); witnesses are only defined where the type inequality holds")]
    TypeFails { p: f64, lambda_max: f64 },
    #[error("the form does not pass the negative-type test at p = 0, so the input cannot be a metric space")]
    NotAMetricAtZero { lambda_max: f64 },
    #[error("source space does not have strict {q}-negative type (lambda_max = {lambda_max})")]
    SourceNotStrict { q: f64, lambda_max: f64 },
    #[error("exponent order violated: q = {q} must be >= the witness exponent p = {p}")]
    ExponentOrder { p: f64, q: f64 },
    #[error("eigensolver produced non-finite values")]
    NumericFailure,
    #[error("bisection parameters out of range: {0}")]
    BadParameters(&'static str),
}

/// Choice of basis for the zero-sum hyperplane. Verdicts are basis
/// independent; the difference basis is the default because it is sparse and
/// well conditioned at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pi0Basis {
    /// Columns e_k - e_{k+1}, k = 1..n-1.
    Difference,
    /// Columns e_k - (1/n) * ones, k = 1..n-1.
    MeanCentered,
}

/// The powered distance form restricted to the zero-sum hyperplane.
#[derive(Debug, Clone)]
pub struct NegTypeForm {
    pub p: f64,
    matrix: DMatrix<f64>,
    basis: DMatrix<f64>,
    projected: DMatrix<f64>,
}

/// Eigenvalue summary for one exponent: the verdict plus the data it was
/// decided on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigCertificate {
    pub p: f64,
    pub holds: bool,
    pub lambda_max: f64,
    pub eps_eig: f64,
}

/// Result of the roundness bisection. `certificate_high` is absent when the
/// predicate still holds at the cap.
#[derive(Debug, Clone, Serialize)]
pub struct RoundnessReport {
    pub roundness: f64,
    pub at_cap: bool,
    pub iterations: u32,
    pub p_max: f64,
    pub tol_p: f64,
    pub certificate_low: EigCertificate,
    pub certificate_high: Option<EigCertificate>,
}

/// A zero-sum weight vector achieving a (near-)zero quadratic form:
/// a non-trivial p-polygonal equality, normalized to max-entry 1 with the
/// first non-zero entry positive.
#[derive(Debug, Clone, Serialize)]
pub struct EqualityWitness {
    pub p: f64,
    pub alpha: Vec<f64>,
    pub residual: f64,
}

/// Certificate chain for the non-embedding principle: a source of strict
/// q-negative type cannot be isometric to any host subset carrying the
/// witness's non-trivial p-polygonal equality.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub obstructed: bool,
    pub p: f64,
    pub q: f64,
    pub source_strict_at_q: EigCertificate,
    pub source_strict_at_p: EigCertificate,
    pub witness_residual: f64,
}

fn power_matrix(space: &FiniteMetricSpace, p: f64) -> DMatrix<f64> {
    let n = space.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else if p == 0.0 {
            1.0
        } else {
            space.distance(i, j).powf(p)
        }
    })
}

fn basis_matrix(n: usize, basis: Pi0Basis) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(n, n.saturating_sub(1));
    match basis {
        Pi0Basis::Difference => {
            for k in 0..n.saturating_sub(1) {
                b[(k, k)] = 1.0;
                b[(k + 1, k)] = -1.0;
            }
        }
        Pi0Basis::MeanCentered => {
            let mean = 1.0 / n as f64;
            for k in 0..n.saturating_sub(1) {
                for i in 0..n {
                    b[(i, k)] = if i == k { 1.0 - mean } else { -mean };
                }
            }
        }
    }
    b
}

impl NegTypeForm {
    pub fn new(space: &FiniteMetricSpace, p: f64) -> Self {
        Self::with_basis(space, p, Pi0Basis::Difference)
    }

    pub fn with_basis(space: &FiniteMetricSpace, p: f64, basis: Pi0Basis) -> Self {
        let matrix = power_matrix(space, p);
        let basis = basis_matrix(space.len(), basis);
        let raw = basis.transpose() * &matrix * &basis;
        // Symmetrize explicitly; the eigensolver assumes exact symmetry.
        let projected = (&raw + raw.transpose()) * 0.5;
        NegTypeForm { p, matrix, basis, projected }
    }

    pub fn projected(&self) -> &DMatrix<f64> {
        &self.projected
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// alpha^T D_p alpha, evaluated directly against the powered distance
    /// matrix (not through the projection).
    pub fn quadratic_form(&self, alpha: &[f64]) -> f64 {
        let a = DVector::from_column_slice(alpha);
        (a.transpose() * &self.matrix * &a)[(0, 0)]
    }

    fn eigen(&self) -> Result<(DVector<f64>, DMatrix<f64>), NegTypeError> {
        if self.projected.nrows() == 0 {
            return Ok((DVector::zeros(0), DMatrix::zeros(0, 0)));
        }
        let eig = self.projected.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(NegTypeError::NumericFailure);
        }
        Ok((eig.eigenvalues, eig.eigenvectors))
    }
}

fn certificate(
    form: &NegTypeForm,
    tol: &Tolerances,
    strict: bool,
) -> Result<EigCertificate, NegTypeError> {
    let (values, _) = form.eigen()?;
    // A one-point space has an empty hyperplane: the inequalities hold
    // vacuously, strictly so.
    let lambda_max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lambda_abs = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let eps_eig = tol.eps_eig_scale * lambda_abs.max(1.0);
    let holds = if strict {
        lambda_max <= -eps_eig
    } else {
        lambda_max <= eps_eig
    };
    Ok(EigCertificate { p: form.p, holds, lambda_max, eps_eig })
}

/// Does the space have p-negative type? Holds iff the largest eigenvalue of
/// the projected form is at most the scaled threshold.
pub fn has_negative_type(
    space: &FiniteMetricSpace,
    p: f64,
    tol: &Tolerances,
) -> Result<EigCertificate, NegTypeError> {
    certificate(&NegTypeForm::new(space, p), tol, false)
}

/// Does the space have strict p-negative type? Holds iff the projected form
/// is negative definite, i.e. the largest eigenvalue clears the threshold on
/// the negative side.
pub fn has_strict_negative_type(
    space: &FiniteMetricSpace,
    p: f64,
    tol: &Tolerances,
) -> Result<EigCertificate, NegTypeError> {
    certificate(&NegTypeForm::new(space, p), tol, true)
}

/// Same certificates under an explicit choice of hyperplane basis. Verdicts
/// must not depend on this choice; the property tests pin that down.
pub fn has_negative_type_with_basis(
    space: &FiniteMetricSpace,
    p: f64,
    tol: &Tolerances,
    basis: Pi0Basis,
    strict: bool,
) -> Result<EigCertificate, NegTypeError> {
    certificate(&NegTypeForm::with_basis(space, p, basis), tol, strict)
}

/// Bisects the monotone negative-type predicate over [0, p_max] and returns
/// the supremal exponent within `tol_p`, or flags `at_cap` when the
/// predicate still holds at the cap (ultrametrics, one-point spaces and
/// other spaces of unbounded type). The reported value is never asserted to
/// be positive; it is whatever the certificates support.
pub fn generalized_roundness(
    space: &FiniteMetricSpace,
    p_max: f64,
    tol_p: f64,
    tol: &Tolerances,
) -> Result<RoundnessReport, NegTypeError> {
    if !p_max.is_finite() || p_max <= 0.0 {
        return Err(NegTypeError::BadParameters("p_max must be a positive finite real"));
    }
    if !tol_p.is_finite() || tol_p <= 0.0 {
        return Err(NegTypeError::BadParameters("tol_p must be a positive finite real"));
    }
    let at_zero = has_negative_type(space, 0.0, tol)?;
    if !at_zero.holds {
        return Err(NegTypeError::NotAMetricAtZero { lambda_max: at_zero.lambda_max });
    }
    let at_cap = has_negative_type(space, p_max, tol)?;
    if at_cap.holds {
        return Ok(RoundnessReport {
            roundness: p_max,
            at_cap: true,
            iterations: 0,
            p_max,
            tol_p,
            certificate_low: at_cap,
            certificate_high: None,
        });
    }
    let mut lo = 0.0;
    let mut hi = p_max;
    let mut cert_low = at_zero;
    let mut cert_high = at_cap;
    let mut iterations = 0;
    while hi - lo > tol_p {
        let mid = 0.5 * (lo + hi);
        let cert = has_negative_type(space, mid, tol)?;
        if cert.holds {
            lo = mid;
            cert_low = cert;
        } else {
            hi = mid;
            cert_high = cert;
        }
        iterations += 1;
    }
    Ok(RoundnessReport {
        roundness: 0.5 * (lo + hi),
        at_cap: false,
        iterations,
        p_max,
        tol_p,
        certificate_low: cert_low,
        certificate_high: Some(cert_high),
    })
}

/// Scales to max-entry 1 and makes the first non-zero entry positive, so
/// witnesses compare deterministically across runs.
pub fn normalize_alpha(alpha: &mut [f64]) {
    let max = alpha.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if max == 0.0 {
        return;
    }
    for v in alpha.iter_mut() {
        *v /= max;
    }
    let flip = alpha
        .iter()
        .find(|v| v.abs() > 1e-12)
        .is_some_and(|v| *v < 0.0);
    if flip {
        for v in alpha.iter_mut() {
            *v = -*v;
        }
    }
}

/// Extracts every non-trivial p-polygonal equality the eigenstructure
/// supports: eigenvectors of the projected form whose eigenvalues sit inside
/// the near-zero cluster, mapped back to the full space and normalized. The
/// list is empty exactly when the space has strict p-negative type; calling
/// this where negative type itself fails is an error.
pub fn equality_witnesses(
    space: &FiniteMetricSpace,
    p: f64,
    tol: &Tolerances,
) -> Result<Vec<EqualityWitness>, NegTypeError> {
    let form = NegTypeForm::new(space, p);
    let (values, vectors) = form.eigen()?;
    let lambda_max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lambda_abs = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let eps_eig = tol.eps_eig_scale * lambda_abs.max(1.0);
    if !values.is_empty() && lambda_max > eps_eig {
        return Err(NegTypeError::TypeFails { p, lambda_max });
    }
    let mut near_zero: Vec<(f64, usize)> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() <= eps_eig)
        .map(|(k, v)| (*v, k))
        .collect();
    near_zero.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut witnesses = Vec::with_capacity(near_zero.len());
    for (_, k) in near_zero {
        let v = vectors.column(k);
        let full = &form.basis * v;
        let mut alpha: Vec<f64> = full.iter().cloned().collect();
        normalize_alpha(&mut alpha);
        let residual = form.quadratic_form(&alpha);
        witnesses.push(EqualityWitness { p, alpha, residual });
    }
    Ok(witnesses)
}

/// The non-embedding verdict: `source` has strict q-negative type (checked),
/// hence strict p-negative type for the witness exponent p <= q, while the
/// witness's host admits a non-trivial p-polygonal equality and therefore
/// fails strictness at p. No isometry can reconcile the two.
pub fn embedding_obstruction(
    source: &FiniteMetricSpace,
    witness: &EqualityWitness,
    q: f64,
    tol: &Tolerances,
) -> Result<ObstructionReport, NegTypeError> {
    if q < witness.p {
        return Err(NegTypeError::ExponentOrder { p: witness.p, q });
    }
    let at_q = has_strict_negative_type(source, q, tol)?;
    if !at_q.holds {
        return Err(NegTypeError::SourceNotStrict { q, lambda_max: at_q.lambda_max });
    }
    let at_p = has_strict_negative_type(source, witness.p, tol)?;
    Ok(ObstructionReport {
        obstructed: true,
        p: witness.p,
        q,
        source_strict_at_q: at_q,
        source_strict_at_p: at_p,
        witness_residual: witness.residual,
    })
}
