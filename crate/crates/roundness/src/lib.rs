//! Certificates of p-negative type for finite metric spaces and finite
//! l_p point sets.
//!
//! The library is organised around the signed-simplex calculus: a signed
//! (s,t)-simplex carries weighted vertex lists over a point universe, and the
//! p-simplex gap measures how far the universe is from violating a p-negative
//! type inequality. On top of that sit
//!
//! * [`metric`] — validated finite metric spaces, metric transforms and the
//!   small test-family generators (cycles, ultrametrics),
//! * [`simplex`] — simplices, refinement procedures, complete refinement and
//!   the transition to and from zero-sum weight vectors,
//! * [`negtype`] — eigenvalue certificates for (strict) p-negative type,
//!   generalized roundness by bisection and polygonal-equality witnesses,
//! * [`lp`] — coordinatewise analysis of l_p point sets: virtual degeneracy,
//!   balancedness, kernel extraction and the subspace constructions,
//! * [`hilbert`] — the exact p = 2 theory: the squared-defect identity,
//!   affine dependence and balanced-simplex extraction,
//! * [`io`] — the JSON file formats consumed and produced by the CLI.

pub mod hilbert;
pub mod io;
pub mod lp;
pub mod metric;
pub mod negtype;
pub mod simplex;

use serde::{Deserialize, Serialize};

/// Numeric knobs shared across the toolkit. Every certificate reported by the
/// library is relative to one of these values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute tolerance on weight sums (simplex balance, degeneracy).
    pub eps_w: f64,
    /// Absolute tolerance used when clustering coordinate values. Zero means
    /// exact comparison.
    pub eps_c: f64,
    /// Absolute tolerance on triangle-inequality slack.
    pub eps_tri: f64,
    /// Scale factor for eigenvalue thresholds: the effective threshold is
    /// `eps_eig_scale * max(1, |lambda|_max)`.
    pub eps_eig_scale: f64,
    /// Width at which the roundness bisection stops.
    pub tol_p: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_w: 1e-9,
            eps_c: 1e-9,
            eps_tri: 1e-9,
            eps_eig_scale: 1e-8,
            tol_p: 1e-6,
        }
    }
}

/// Default cap for the roundness bisection. Ultrametric spaces have
/// unbounded supremal type, so the search is capped and reported as such.
pub const DEFAULT_P_MAX: f64 = 16.0;
