//! Shared generators and independent oracles for the integration suites.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roundness::lp::LpPointSet;
use roundness::metric::{validate_metric, FiniteMetricSpace};
use roundness::simplex::{Refined, SignedSimplex, Vertex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random metric space: off-diagonal distances drawn from [1, 2], which
/// satisfies the triangle inequality for free.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = rng.gen_range(1.0..2.0);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    validate_metric(dist, 1e-9).expect("distances in [1,2] form a metric")
}

/// Draws side weights in [-3, 3] whose totals agree: the last y-weight is
/// the balancing value, re-drawn until it lands inside the range.
fn balanced_weights(rng: &mut ChaCha8Rng, s: usize, t: usize) -> (Vec<f64>, Vec<f64>) {
    loop {
        let ms: Vec<f64> = (0..s).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let mut ns: Vec<f64> = (0..t - 1).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let last = ms.iter().sum::<f64>() - ns.iter().sum::<f64>();
        if last.abs() <= 3.0 {
            ns.push(last);
            return (ms, ns);
        }
    }
}

/// Random signed simplex over a universe of `universe_len` points, sides of
/// 2..=4 vertices, ids drawn with replacement so repetitions and shared
/// points occur naturally.
pub fn random_simplex(rng: &mut ChaCha8Rng, universe_len: usize) -> SignedSimplex {
    let s = rng.gen_range(2..=4);
    let t = rng.gen_range(2..=4);
    let (ms, ns) = balanced_weights(rng, s, t);
    let xs: Vec<Vertex> = ms
        .into_iter()
        .map(|w| Vertex::new(rng.gen_range(0..universe_len), w))
        .collect();
    let ys: Vec<Vertex> = ns
        .into_iter()
        .map(|w| Vertex::new(rng.gen_range(0..universe_len), w))
        .collect();
    SignedSimplex::new(xs, ys, universe_len, 1e-6).expect("weights balanced by construction")
}

/// Random simplex guaranteed to contain a mergeable x-pair and a shared
/// x/y point, so every refinement procedure has a valid target.
pub fn random_simplex_with_collisions(
    rng: &mut ChaCha8Rng,
    universe_len: usize,
) -> SignedSimplex {
    let s = rng.gen_range(2..=4);
    let t = rng.gen_range(2..=4);
    let (ms, ns) = balanced_weights(rng, s, t);
    let mut x_ids: Vec<usize> = (0..s).map(|_| rng.gen_range(0..universe_len)).collect();
    let mut y_ids: Vec<usize> = (0..t).map(|_| rng.gen_range(0..universe_len)).collect();
    x_ids[1] = x_ids[0];
    y_ids[0] = x_ids[0];
    let xs = x_ids
        .into_iter()
        .zip(ms)
        .map(|(id, w)| Vertex::new(id, w))
        .collect();
    let ys = y_ids
        .into_iter()
        .zip(ns)
        .map(|(id, w)| Vertex::new(id, w))
        .collect();
    SignedSimplex::new(xs, ys, universe_len, 1e-6).expect("weights balanced by construction")
}

/// Degenerate by construction: the y side re-splits the x side's per-point
/// totals into one or two vertices each.
pub fn random_degenerate_simplex(rng: &mut ChaCha8Rng, universe_len: usize) -> SignedSimplex {
    let s = rng.gen_range(2..=4);
    let xs: Vec<Vertex> = (0..s)
        .map(|_| Vertex::new(rng.gen_range(0..universe_len), rng.gen_range(-3.0..3.0)))
        .collect();
    let mut totals = std::collections::BTreeMap::new();
    for v in &xs {
        *totals.entry(v.id).or_insert(0.0) += v.weight;
    }
    let mut ys = Vec::new();
    for (&id, &w) in &totals {
        if rng.gen_bool(0.5) {
            let split = rng.gen_range(-1.0..1.0);
            ys.push(Vertex::new(id, split));
            ys.push(Vertex::new(id, w - split));
        } else {
            ys.push(Vertex::new(id, w));
        }
    }
    ys.shuffle(rng);
    SignedSimplex::new(xs, ys, universe_len, 1e-6).expect("sides carry equal totals")
}

fn swap_sides(simplex: &SignedSimplex) -> SignedSimplex {
    SignedSimplex::new(
        simplex.ys().to_vec(),
        simplex.xs().to_vec(),
        simplex.max_id() + 1,
        1e-6,
    )
    .expect("side totals agree after swapping")
}

fn find_duplicate(side: &[Vertex]) -> Option<(usize, usize)> {
    for a in 0..side.len() {
        for b in (a + 1)..side.len() {
            if side[a].id == side[b].id {
                return Some((a, b));
            }
        }
    }
    None
}

fn find_shared_nonzero(simplex: &SignedSimplex) -> Option<(usize, usize)> {
    for (j, xv) in simplex.xs().iter().enumerate() {
        if xv.weight == 0.0 {
            continue;
        }
        for (i, yv) in simplex.ys().iter().enumerate() {
            if yv.weight != 0.0 && xv.id == yv.id {
                return Some((j, i));
            }
        }
    }
    None
}

fn find_negative(side: &[Vertex]) -> Option<usize> {
    side.iter().position(|v| v.weight < 0.0)
}

/// Independent oracle for complete refinement: iterates the three
/// procedures (merge duplicates, cancel shared points, move negative
/// weights across, using the mirrored variants through a side swap) until
/// no rule applies, then drops zero-weight vertices. This is the
/// procedure-chain route; the library's closed form must land on the same
/// simplex.
pub fn iterative_complete_refine(simplex: &SignedSimplex, eps: f64) -> Refined {
    let mut cur = simplex.clone();
    loop {
        if let Some((a, b)) = find_duplicate(cur.xs()) {
            cur = cur.refine_merge(a, b).unwrap();
            continue;
        }
        if let Some((a, b)) = find_duplicate(cur.ys()) {
            cur = swap_sides(&swap_sides(&cur).refine_merge(a, b).unwrap());
            continue;
        }
        if let Some((j, i)) = find_shared_nonzero(&cur) {
            cur = cur.refine_cancel(j, i).unwrap();
            continue;
        }
        if let Some(j) = find_negative(cur.xs()) {
            cur = cur.refine_move(j).unwrap();
            continue;
        }
        if let Some(i) = find_negative(cur.ys()) {
            cur = swap_sides(&swap_sides(&cur).refine_move(i).unwrap());
            continue;
        }
        break;
    }
    let mut xs: Vec<Vertex> = cur
        .xs()
        .iter()
        .filter(|v| v.weight.abs() > eps)
        .cloned()
        .collect();
    let mut ys: Vec<Vertex> = cur
        .ys()
        .iter()
        .filter(|v| v.weight.abs() > eps)
        .cloned()
        .collect();
    if xs.is_empty() && ys.is_empty() {
        return Refined::Degenerate;
    }
    xs.sort_by_key(|v| v.id);
    ys.sort_by_key(|v| v.id);
    Refined::CompletelyRefined(SignedSimplex::new(xs, ys, cur.max_id() + 1, 1e-6).unwrap())
}

/// Compares two refinement outcomes up to the stated weight tolerance.
pub fn refined_eq(a: &Refined, b: &Refined, eps: f64) -> bool {
    match (a, b) {
        (Refined::Degenerate, Refined::Degenerate) => true,
        (Refined::CompletelyRefined(da), Refined::CompletelyRefined(db)) => {
            let sides_eq = |va: &[Vertex], vb: &[Vertex]| {
                va.len() == vb.len()
                    && va
                        .iter()
                        .zip(vb)
                        .all(|(x, y)| x.id == y.id && (x.weight - y.weight).abs() <= eps)
            };
            sides_eq(da.xs(), db.xs()) && sides_eq(da.ys(), db.ys())
        }
        _ => false,
    }
}

/// The quadratic form sum_{a,b} d(z_a, z_b)^p alpha_a alpha_b, evaluated
/// directly from the distance matrix. Kept separate from the library's gap
/// arithmetic on purpose.
pub fn quadratic_form(
    space: &FiniteMetricSpace,
    ids: &[usize],
    alpha: &[f64],
    p: f64,
) -> f64 {
    let mut total = 0.0;
    for (a, &ia) in ids.iter().enumerate() {
        for (b, &ib) in ids.iter().enumerate() {
            if a == b || ia == ib {
                continue;
            }
            let d = if p == 0.0 { 1.0 } else { space.distance(ia, ib).powf(p) };
            total += d * alpha[a] * alpha[b];
        }
    }
    total
}

/// Random integer-coordinate point set in l_p^(dim), coordinates in
/// {0, 1, 2}, pairwise distinct.
pub fn random_integer_points(
    rng: &mut ChaCha8Rng,
    p: f64,
    n: usize,
    dim: usize,
) -> LpPointSet {
    loop {
        let mut coords: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..n {
            for _ in 0..100 {
                let point: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=2)).collect();
                if seen.insert(point.clone()) {
                    coords.push(point.into_iter().map(|v| v as f64).collect());
                    break;
                }
            }
        }
        if coords.len() == n {
            return LpPointSet::new(p, coords, 0.0).expect("distinct integer points");
        }
    }
}

/// Exhaustive search for a non-zero integer weighting that is degenerate in
/// every coordinate's value clusters: the brute-force route to "does this
/// point set admit a virtually degenerate simplex". Entries range over
/// [-bound, bound]; clusters are exact value groups (integer coordinates).
/// Assigned prefixes are pruned as soon as a fully assigned cluster carries
/// non-zero weight.
pub fn brute_force_vd_weighting(ps: &LpPointSet, bound: i64) -> Option<Vec<i64>> {
    let n = ps.len();
    // clusters as member lists, with the largest member index for pruning
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for omega in 0..ps.dim() {
        let mut by_value: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
        for k in 0..n {
            by_value
                .entry(ps.point(k)[omega].round() as i64)
                .or_default()
                .push(k);
        }
        clusters.extend(by_value.into_values());
    }
    let mut alpha = vec![0i64; n];
    fn recurse(
        alpha: &mut Vec<i64>,
        k: usize,
        n: usize,
        bound: i64,
        clusters: &[Vec<usize>],
    ) -> bool {
        if k == n {
            return alpha.iter().any(|&a| a != 0);
        }
        for value in -bound..=bound {
            alpha[k] = value;
            let ok = clusters.iter().all(|members| {
                let last = *members.last().unwrap();
                if last != k {
                    return true; // not fully assigned yet
                }
                members.iter().map(|&m| alpha[m]).sum::<i64>() == 0
            });
            if ok && recurse(alpha, k + 1, n, bound, clusters) {
                return true;
            }
        }
        alpha[k] = 0;
        false
    }
    // sort each cluster so `last` is the largest index involved
    let clusters: Vec<Vec<usize>> = clusters
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    if recurse(&mut alpha, 0, n, bound, &clusters) {
        Some(alpha)
    } else {
        None
    }
}
