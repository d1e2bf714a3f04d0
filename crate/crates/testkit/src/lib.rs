//! Random representations and brute-force oracles for tests.

use gkm_cycle::cells::{poincare_polynomial, FixedPoint};
use gkm_cycle::rep::{CoefficientQuiver, NilpotentRep, Segment};
use rand::{Rng, SeedableRng};

pub mod suite;
use rand_chacha::ChaCha8Rng;

/// Bounds for [`random_case`].
///
/// `max_dim` and `max_points` cap the variety itself: cases whose top cell or
/// fixed point count exceeds them are redrawn.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_n: usize,
    pub max_segments: usize,
    pub max_vertices: usize,
    pub max_dim: usize,
    pub max_points: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_n: 4, max_segments: 8, max_vertices: 14, max_dim: 8, max_points: 60 }
    }
}

fn random_rep(rng: &mut impl Rng, b: Bounds) -> NilpotentRep {
    let n = rng.random_range(1..=b.max_n);
    let count = rng.random_range(1..=b.max_segments);
    let mut budget = b.max_vertices;
    let mut segs = Vec::new();
    for _ in 0..count {
        if budget == 0 {
            break;
        }
        let ell = rng.random_range(1..=budget.min(2 * n + 2));
        budget -= ell;
        segs.push(Segment { i: rng.random_range(1..=n), ell });
    }
    NilpotentRep::new(n, segs).expect("valid segments")
}

/// Half the time `e` is uniform below the dimensions (often giving an empty
/// variety), otherwise it is the dimension vector of a random tail choice.
fn random_e(rng: &mut impl Rng, rep: &NilpotentRep) -> Vec<usize> {
    if rng.random_bool(0.5) {
        return rep.dims().iter().map(|&d| rng.random_range(0..=d)).collect();
    }
    let tails = (1..=rep.d0()).map(|s| rng.random_range(0..=rep.len_of(s))).collect();
    FixedPoint::new(tails).dimension_vector(rep)
}

/// A representation within `b` and a dimension vector whose variety is within
/// the dimension and size caps.
pub fn random_case(rng: &mut impl Rng, b: Bounds) -> (NilpotentRep, Vec<usize>) {
    loop {
        let rep = random_rep(rng, b);
        let e = random_e(rng, &rep);
        let p = poincare_polynomial(&CoefficientQuiver::build(&rep), &e).expect("e matches n");
        if p.len() <= b.max_dim + 1 && p.iter().sum::<usize>() <= b.max_points {
            return (rep, e);
        }
    }
}

/// `count` cases from a fixed seed.
pub fn cases(seed: u64, count: usize, b: Bounds) -> Vec<(NilpotentRep, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_case(&mut rng, b)).collect()
}

/// Number of subsets of the segment positions closed under `p -> p + 1`
/// with `e_i` positions over each vertex `i`, by exhaustive search.
pub fn brute_force_count(rep: &NilpotentRep, e: &[usize]) -> usize {
    let cells: Vec<(usize, usize)> =
        (1..=rep.d0()).flat_map(|s| (0..rep.len_of(s)).map(move |p| (s, p))).collect();
    assert!(cells.len() <= 20, "exhaustive search is exponential");
    let index = |s: usize, p: usize| cells.iter().position(|&c| c == (s, p)).expect("cell exists");
    let succ: Vec<Option<usize>> =
        cells.iter().map(|&(s, p)| (p + 1 < rep.len_of(s)).then(|| index(s, p + 1))).collect();
    let mut count = 0;
    for mask in 0u32..(1 << cells.len()) {
        let closed = (0..cells.len()).all(|k| mask >> k & 1 == 0 || succ[k].is_none_or(|t| mask >> t & 1 == 1));
        if !closed {
            continue;
        }
        let mut dims = vec![0; rep.n()];
        for (k, &(s, p)) in cells.iter().enumerate() {
            if mask >> k & 1 == 1 {
                dims[rep.vertex_of(s, p) - 1] += 1;
            }
        }
        if dims == e {
            count += 1;
        }
    }
    count
}

/// Permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { return out };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// Number of inversions.
pub fn length(w: &[usize]) -> usize {
    (0..w.len()).flat_map(|i| (i + 1..w.len()).map(move |j| (i, j))).filter(|&(i, j)| w[i] > w[j]).count()
}
