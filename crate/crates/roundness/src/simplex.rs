//! Signed (s,t)-simplices over a point universe: repeating numbers, the
//! three gap-preserving refinement procedures, complete refinement, the
//! p-simplex gap and the transition to and from zero-sum weight vectors.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::metric::FiniteMetricSpace;

/// Default absolute tolerance on the weight-sum balance.
pub const DEFAULT_EPS_W: f64 = 1e-9;

/// One weighted vertex. `id` indexes into whatever universe the simplex was
/// built over; weights may be negative or zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub weight: f64,
}

impl Vertex {
    pub fn new(id: usize, weight: f64) -> Self {
        Vertex { id, weight }
    }
}

/// A signed (s,t)-simplex: two weighted vertex lists whose side totals agree.
/// Vertices may repeat points; refinement returns new values and never
/// mutates in place.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignedSimplex {
    xs: Vec<Vertex>,
    ys: Vec<Vertex>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SimplexError {
    #[error("each side needs at least one vertex (got s = {s}, t = {t})")]
    EmptySide { s: usize, t: usize },
    #[error("vertex id {id} out of range for a universe of {universe} points")]
    IdOutOfRange { id: usize, universe: usize },
    #[error("non-finite weight at {side} vertex {index}")]
    NonFiniteWeight { side: &'static str, index: usize },
    #[error("side totals differ: sum m = {sum_m}, sum n = {sum_n} (tolerance {eps})")]
    Unbalanced { sum_m: f64, sum_n: f64, eps: f64 },
    #[error("vertex index {index} out of range on the {side} side")]
    VertexOutOfRange { side: &'static str, index: usize },
    #[error("refinement requires both vertices at the same point, got ids {left} and {right}")]
    DistinctPoints { left: usize, right: usize },
    #[error("simplex is not completely refined: {reason}")]
    NotCompletelyRefined { reason: &'static str },
    #[error("weight vector must contain a positive and a negative entry")]
    OneSigned,
    #[error("weight vector is identically zero")]
    AllZero,
    #[error("weight vector does not sum to zero: {sum} (tolerance {eps})")]
    NotZeroSum { sum: f64, eps: f64 },
    #[error("ids and weights have different lengths: {ids} vs {weights}")]
    LengthMismatch { ids: usize, weights: usize },
}

/// Per-point sums of x-side and y-side weights, keyed by point id. Sums over
/// an empty index set are 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeatingNumbers(pub BTreeMap<usize, (f64, f64)>);

impl RepeatingNumbers {
    pub fn m(&self, id: usize) -> f64 {
        self.0.get(&id).map_or(0.0, |&(m, _)| m)
    }

    pub fn n(&self, id: usize) -> f64 {
        self.0.get(&id).map_or(0.0, |&(_, n)| n)
    }
}

/// A computed p-simplex gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapValue {
    pub p: f64,
    pub value: f64,
}

/// Outcome of complete refinement: the dichotomy is exhaustive and
/// exclusive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Refined {
    Degenerate,
    CompletelyRefined(SignedSimplex),
}

impl SignedSimplex {
    /// Builds a simplex after checking the definitional invariants: both
    /// sides non-empty, ids inside the universe, finite weights and side
    /// totals agreeing within `eps_w`.
    pub fn new(
        xs: Vec<Vertex>,
        ys: Vec<Vertex>,
        universe_len: usize,
        eps_w: f64,
    ) -> Result<Self, SimplexError> {
        if xs.is_empty() || ys.is_empty() {
            return Err(SimplexError::EmptySide { s: xs.len(), t: ys.len() });
        }
        for (side, list) in [("x", &xs), ("y", &ys)] {
            for (index, v) in list.iter().enumerate() {
                if v.id >= universe_len {
                    return Err(SimplexError::IdOutOfRange { id: v.id, universe: universe_len });
                }
                if !v.weight.is_finite() {
                    return Err(SimplexError::NonFiniteWeight { side, index });
                }
            }
        }
        let sum_m: f64 = xs.iter().map(|v| v.weight).sum();
        let sum_n: f64 = ys.iter().map(|v| v.weight).sum();
        if (sum_m - sum_n).abs() > eps_w {
            return Err(SimplexError::Unbalanced { sum_m, sum_n, eps: eps_w });
        }
        Ok(SignedSimplex { xs, ys })
    }

    /// Internal constructor for outputs whose balance holds by construction
    /// (refinement procedures, complete refinement, dependency extraction).
    pub(crate) fn from_parts(xs: Vec<Vertex>, ys: Vec<Vertex>) -> Self {
        SignedSimplex { xs, ys }
    }

    pub fn xs(&self) -> &[Vertex] {
        &self.xs
    }

    pub fn ys(&self) -> &[Vertex] {
        &self.ys
    }

    /// s, the number of x-vertices.
    pub fn s(&self) -> usize {
        self.xs.len()
    }

    /// t, the number of y-vertices.
    pub fn t(&self) -> usize {
        self.ys.len()
    }

    /// Largest point id referenced, for universe-size checks.
    pub fn max_id(&self) -> usize {
        self.xs.iter().chain(&self.ys).map(|v| v.id).max().unwrap_or(0)
    }

    /// m(z) and n(z) for every distinct point z occurring in the simplex.
    pub fn repeating_numbers(&self) -> RepeatingNumbers {
        let mut map: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
        for v in &self.xs {
            map.entry(v.id).or_insert((0.0, 0.0)).0 += v.weight;
        }
        for v in &self.ys {
            map.entry(v.id).or_insert((0.0, 0.0)).1 += v.weight;
        }
        RepeatingNumbers(map)
    }

    /// True iff m(z) = n(z) within `eps` for every point of the simplex.
    /// Degenerate simplices have gap 0 at every exponent.
    pub fn is_degenerate(&self, eps: f64) -> bool {
        self.repeating_numbers()
            .0
            .values()
            .all(|&(m, n)| (m - n).abs() <= eps)
    }

    /// Procedure 1: merges two x-vertices at the same point into one carrying
    /// the summed weight. Repeating numbers and every gap are unchanged.
    pub fn refine_merge(&self, j1: usize, j2: usize) -> Result<Self, SimplexError> {
        let s = self.xs.len();
        for j in [j1, j2] {
            if j >= s {
                return Err(SimplexError::VertexOutOfRange { side: "x", index: j });
            }
        }
        let (a, b) = (self.xs[j1], self.xs[j2]);
        if j1 == j2 || a.id != b.id {
            return Err(SimplexError::DistinctPoints { left: a.id, right: b.id });
        }
        let (keep, drop) = (j1.min(j2), j1.max(j2));
        let mut xs = self.xs.clone();
        xs[keep].weight = a.weight + b.weight;
        xs.remove(drop);
        Ok(SignedSimplex { xs, ys: self.ys.clone() })
    }

    /// Procedure 2: cancels an x-vertex against a y-vertex at the same
    /// point. The x-weight becomes 0 and the y-weight drops by it; both
    /// repeating numbers at that point decrease by m_j and every gap is
    /// unchanged. Zero-weight vertices are kept so refinement sequences can
    /// keep referring to them.
    pub fn refine_cancel(&self, j: usize, i: usize) -> Result<Self, SimplexError> {
        if j >= self.xs.len() {
            return Err(SimplexError::VertexOutOfRange { side: "x", index: j });
        }
        if i >= self.ys.len() {
            return Err(SimplexError::VertexOutOfRange { side: "y", index: i });
        }
        if self.xs[j].id != self.ys[i].id {
            return Err(SimplexError::DistinctPoints {
                left: self.xs[j].id,
                right: self.ys[i].id,
            });
        }
        let mut xs = self.xs.clone();
        let mut ys = self.ys.clone();
        let moved = xs[j].weight;
        xs[j].weight = 0.0;
        ys[i].weight -= moved;
        Ok(SignedSimplex { xs, ys })
    }

    /// Procedure 3: moves an x-vertex across, zeroing it and appending a new
    /// y-vertex at the same point with the negated weight. Every gap is
    /// unchanged.
    pub fn refine_move(&self, j: usize) -> Result<Self, SimplexError> {
        if j >= self.xs.len() {
            return Err(SimplexError::VertexOutOfRange { side: "x", index: j });
        }
        let mut xs = self.xs.clone();
        let mut ys = self.ys.clone();
        let moved = xs[j].weight;
        xs[j].weight = 0.0;
        ys.push(Vertex::new(xs[j].id, -moved));
        Ok(SignedSimplex { xs, ys })
    }

    /// The complete-refinement dichotomy. Either every difference
    /// m(z) - n(z) vanishes within `eps` (the simplex is degenerate), or the
    /// unique reduced simplex is returned: the x-side carries the points with
    /// m(z) > n(z) at weight m(z) - n(z), the y-side the mirror image. The
    /// output is full, pure, has all weights above `eps`, preserves every
    /// gap, and is sorted by point id for deterministic comparisons.
    ///
    /// In exact arithmetic a surviving surplus on one side forces a deficit
    /// on the other. With a positive `eps` the deficit can be smeared across
    /// several below-threshold points, leaving one side empty; every
    /// surviving weight is then at tolerance scale and the simplex is
    /// classified degenerate.
    ///
    /// This is the closed form; iterating the refinement procedures reaches
    /// the same simplex and is kept around in the tests as an oracle.
    pub fn complete_refine(&self, eps: f64) -> Refined {
        let numbers = self.repeating_numbers();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (&id, &(m, n)) in &numbers.0 {
            let diff = m - n;
            if diff > eps {
                xs.push(Vertex::new(id, diff));
            } else if diff < -eps {
                ys.push(Vertex::new(id, -diff));
            }
        }
        if xs.is_empty() || ys.is_empty() {
            Refined::Degenerate
        } else {
            // BTreeMap iteration already sorted by id; both sides inherit it
            Refined::CompletelyRefined(SignedSimplex { xs, ys })
        }
    }

    /// True if full (no repeated point per side), pure (sides disjoint) and
    /// all weights strictly positive.
    pub fn is_completely_refined(&self) -> bool {
        self.completely_refined_reason().is_none()
    }

    fn completely_refined_reason(&self) -> Option<&'static str> {
        let mut seen_x = std::collections::BTreeSet::new();
        for v in &self.xs {
            if !seen_x.insert(v.id) {
                return Some("repeated point on the x side");
            }
        }
        let mut seen_y = std::collections::BTreeSet::new();
        for v in &self.ys {
            if !seen_y.insert(v.id) {
                return Some("repeated point on the y side");
            }
        }
        if seen_x.intersection(&seen_y).next().is_some() {
            return Some("sides share a point");
        }
        if self.xs.iter().chain(&self.ys).any(|v| v.weight <= 0.0) {
            return Some("non-positive weight");
        }
        None
    }
}

/// Evaluates the gap with an arbitrary powered-distance functional:
/// cross-pair sum minus both within-side sums. `dist_pow(i, j)` must return
/// d(z_i, z_j)^p (or its l_p analogue) for point ids i, j.
pub fn gamma_with(simplex: &SignedSimplex, dist_pow: impl Fn(usize, usize) -> f64) -> f64 {
    let xs = simplex.xs();
    let ys = simplex.ys();
    let mut cross = 0.0;
    for xv in xs {
        for yv in ys {
            cross += xv.weight * yv.weight * dist_pow(xv.id, yv.id);
        }
    }
    let mut within = 0.0;
    for (a, xv) in xs.iter().enumerate() {
        for xw in &xs[a + 1..] {
            within += xv.weight * xw.weight * dist_pow(xv.id, xw.id);
        }
    }
    for (a, yv) in ys.iter().enumerate() {
        for yw in &ys[a + 1..] {
            within += yv.weight * yw.weight * dist_pow(yv.id, yw.id);
        }
    }
    cross - within
}

/// The p-simplex gap of `simplex` in a finite metric space, for p >= 0.
/// At p = 0, d^0 is taken to be 1 for distinct point ids and 0 for equal
/// ids, which keeps gap statements consistent down to zero.
pub fn gamma_p(simplex: &SignedSimplex, space: &FiniteMetricSpace, p: f64) -> GapValue {
    let value = gamma_with(simplex, |i, j| {
        if i == j {
            0.0
        } else if p == 0.0 {
            1.0
        } else {
            space.distance(i, j).powf(p)
        }
    });
    GapValue { p, value }
}

/// Transition to weight-vector form. For a completely refined simplex the
/// x-vertices become positive entries and the y-vertices negative ones, so
/// the returned vector sums to zero and satisfies
/// sum_{j,i} d(z_j, z_i)^p alpha_j alpha_i = -2 gamma_p for every p.
pub fn to_alpha(simplex: &SignedSimplex) -> Result<(Vec<usize>, Vec<f64>), SimplexError> {
    if let Some(reason) = simplex.completely_refined_reason() {
        return Err(SimplexError::NotCompletelyRefined { reason });
    }
    let mut ids = Vec::with_capacity(simplex.s() + simplex.t());
    let mut alpha = Vec::with_capacity(simplex.s() + simplex.t());
    for v in simplex.xs() {
        ids.push(v.id);
        alpha.push(v.weight);
    }
    for v in simplex.ys() {
        ids.push(v.id);
        alpha.push(-v.weight);
    }
    Ok((ids, alpha))
}

/// Transition from weight-vector form: positive entries become x-vertices,
/// negative ones y-vertices (with the sign flipped), zeros are dropped. The
/// vector must sum to zero within `eps_w` and carry both signs.
pub fn from_alpha(
    ids: &[usize],
    alpha: &[f64],
    eps_w: f64,
) -> Result<SignedSimplex, SimplexError> {
    if ids.len() != alpha.len() {
        return Err(SimplexError::LengthMismatch { ids: ids.len(), weights: alpha.len() });
    }
    let sum: f64 = alpha.iter().sum();
    if sum.abs() > eps_w {
        return Err(SimplexError::NotZeroSum { sum, eps: eps_w });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&id, &a) in ids.iter().zip(alpha) {
        if a > 0.0 {
            xs.push(Vertex::new(id, a));
        } else if a < 0.0 {
            ys.push(Vertex::new(id, -a));
        }
    }
    if xs.is_empty() && ys.is_empty() {
        return Err(SimplexError::AllZero);
    }
    if xs.is_empty() || ys.is_empty() {
        return Err(SimplexError::OneSigned);
    }
    Ok(SignedSimplex { xs, ys })
}
