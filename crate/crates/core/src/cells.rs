//! Torus fixed points, terminal triples and cell dimensions.
//!
//! A fixed point keeps a suffix of every segment; it is stored as the tuple of
//! suffix lengths ("tails").

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::moment;
use crate::rep::{CoefficientQuiver, NilpotentRep};
use crate::symbolic::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixedPoint {
    pub tails: Vec<usize>,
}

impl FixedPoint {
    pub fn new(tails: Vec<usize>) -> Self {
        FixedPoint { tails }
    }

    /// Tail of segment `s` (1-based).
    pub fn tail(&self, s: usize) -> usize {
        self.tails[s - 1]
    }

    /// Whether position `p` of segment `s` is kept.
    pub fn keeps(&self, rep: &NilpotentRep, s: usize, p: usize) -> bool {
        p + self.tail(s) >= rep.len_of(s)
    }

    /// Position of the topmost kept vertex on `s`; equals `ell` when nothing is kept.
    pub fn top(&self, rep: &NilpotentRep, s: usize) -> usize {
        rep.len_of(s) - self.tail(s)
    }

    /// Membership in `K_i`, indexed by `k - 1`.
    pub fn kept_indices(&self, q: &CoefficientQuiver, i: usize) -> Vec<bool> {
        q.basis(i).iter().map(|r| self.keeps(q.rep(), r.segment, r.position)).collect()
    }

    /// Dimension vector of the kept subquiver.
    pub fn dimension_vector(&self, rep: &NilpotentRep) -> Vec<usize> {
        let mut e = vec![0; rep.n()];
        for s in 1..=rep.d0() {
            let ell = rep.len_of(s);
            for p in ell - self.tail(s)..ell {
                e[rep.vertex_of(s, p) - 1] += 1;
            }
        }
        e
    }

    pub fn validate(&self, rep: &NilpotentRep, e: &[usize]) -> Result<()> {
        if self.tails.len() != rep.d0() {
            return Err(Error::LengthMismatch { expected: rep.d0(), found: self.tails.len() });
        }
        if let Some(s) = (1..=rep.d0()).find(|&s| self.tail(s) > rep.len_of(s)) {
            return Err(Error::InvalidArgument(format!("tail of segment {s} exceeds its length")));
        }
        if self.dimension_vector(rep) != e {
            return Err(Error::InvalidArgument(format!("{self} does not have dimension vector {e:?}")));
        }
        Ok(())
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tails.iter().map(|t| t.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All fixed points with dimension vector `e`, in lexicographic order of tails.
pub fn enumerate_fixed_points(rep: &NilpotentRep, e: &[usize]) -> Result<Vec<FixedPoint>> {
    if e.len() != rep.n() {
        return Err(Error::LengthMismatch { expected: rep.n(), found: e.len() });
    }
    let d0 = rep.d0();
    // remaining[s][i]: positions over vertex i on segments s+1.. (0-based s)
    let mut remaining = vec![vec![0usize; rep.n()]; d0 + 1];
    for s in (0..d0).rev() {
        remaining[s] = remaining[s + 1].clone();
        for p in 0..rep.len_of(s + 1) {
            remaining[s][rep.vertex_of(s + 1, p) - 1] += 1;
        }
    }
    if remaining[0].iter().zip(e).any(|(m, x)| x > m) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut tails = vec![0; d0];
    let mut counts = vec![0; rep.n()];
    search(rep, e, &remaining, 0, &mut tails, &mut counts, &mut out);
    Ok(out)
}

fn search(
    rep: &NilpotentRep,
    e: &[usize],
    remaining: &[Vec<usize>],
    s: usize,
    tails: &mut Vec<usize>,
    counts: &mut Vec<usize>,
    out: &mut Vec<FixedPoint>,
) {
    if s == tails.len() {
        if counts.as_slice() == e {
            out.push(FixedPoint::new(tails.clone()));
        }
        return;
    }
    let ell = rep.len_of(s + 1);
    let mut added = Vec::new();
    for t in 0..=ell {
        if t > 0 {
            let v = rep.vertex_of(s + 1, ell - t) - 1;
            counts[v] += 1;
            added.push(v);
            if counts[v] > e[v] {
                break;
            }
        }
        let feasible = (0..e.len()).all(|i| counts[i] + remaining[s + 1][i] >= e[i]);
        if feasible {
            tails[s] = t;
            search(rep, e, remaining, s + 1, tails, counts, out);
        }
    }
    for v in added {
        counts[v] -= 1;
    }
    tails[s] = 0;
}

/// `(i, j, k)`: cycle vertex `i`, a non-kept index `j` and a kept index `k < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TerminalTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl fmt::Display for TerminalTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// Length of the chain above `k`: the number of kept vertices strictly above
/// it on its segment.
fn chain_len(q: &CoefficientQuiver, l: &FixedPoint, i: usize, k: usize) -> usize {
    let r = q.record(i, k);
    r.position - l.top(q.rep(), r.segment)
}

fn is_terminal(q: &CoefficientQuiver, l: &FixedPoint, t: TerminalTriple) -> bool {
    let rep = q.rep();
    let (rj, rk) = (q.record(t.i, t.j), q.record(t.i, t.k));
    if !l.keeps(rep, rk.segment, rk.position) || l.keeps(rep, rj.segment, rj.position) || t.j <= t.k {
        return false;
    }
    if let Some((i2, j2)) = q.successor(t.i, t.j) {
        let r = q.record(i2, j2);
        if !l.keeps(rep, r.segment, r.position) {
            return false;
        }
    }
    let len = chain_len(q, l, t.i, t.k);
    if rj.position < len {
        return false;
    }
    (0..=len).all(|step| {
        let pj = rj.position - step;
        let pk = rk.position - step;
        q.index(rj.segment, pj) > q.index(rk.segment, pk) && !l.keeps(rep, rj.segment, pj)
    })
}

/// Terminal triples of `l`, sorted.
pub fn terminal_triples(q: &CoefficientQuiver, l: &FixedPoint) -> Vec<TerminalTriple> {
    let mut out = Vec::new();
    for i in 1..=q.n() {
        let kept = l.kept_indices(q, i);
        for k in (1..=q.m(i)).filter(|&k| kept[k - 1]) {
            for j in (k + 1..=q.m(i)).filter(|&j| !kept[j - 1]) {
                let t = TerminalTriple { i, j, k };
                if is_terminal(q, l, t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

pub fn cell_dimension(q: &CoefficientQuiver, l: &FixedPoint) -> usize {
    terminal_triples(q, l).len()
}

/// `b[d]` = number of cells of dimension `d`.
pub fn poincare_polynomial(q: &CoefficientQuiver, e: &[usize]) -> Result<Vec<usize>> {
    let points = enumerate_fixed_points(q.rep(), e)?;
    let dims: Vec<usize> = points.par_iter().map(|l| cell_dimension(q, l)).collect();
    let mut b = vec![0; dims.iter().max().map_or(0, |d| d + 1)];
    for d in dims {
        b[d] += 1;
    }
    Ok(b)
}

/// Fixed points in filtration order: every mutation target precedes its
/// source, ties broken by cell dimension and then tails.
pub fn filtration_order(q: &CoefficientQuiver, e: &[usize]) -> Result<Vec<FixedPoint>> {
    Ok(moment::build_moment_graph(q, e)?.vertices.into_iter().map(|v| v.point).collect())
}

/// Coordinate vectors spanning a subspace at each cycle vertex.
pub type Subspace = Vec<Vec<Vec<Rational>>>;

fn unit(m: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![rat(0); m];
    v[k - 1] = rat(1);
    v
}

/// The coordinate subspace of a fixed point.
pub fn fixed_point_subspace(q: &CoefficientQuiver, l: &FixedPoint) -> Subspace {
    (1..=q.n())
        .map(|i| {
            let kept = l.kept_indices(q, i);
            (1..=q.m(i)).filter(|&k| kept[k - 1]).map(|k| unit(q.m(i), k)).collect()
        })
        .collect()
}

/// Whether `u` spans a subrepresentation with dimension vector `e`.
pub fn check_subrepresentation(q: &CoefficientQuiver, e: &[usize], u: &Subspace) -> Result<bool> {
    let n = q.n();
    if u.len() != n || e.len() != n {
        return Err(Error::DimensionMismatch(format!("expected {n} cycle vertices")));
    }
    for i in 1..=n {
        if let Some(v) = u[i - 1].iter().find(|v| v.len() != q.m(i)) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} at vertex {i}, expected {}",
                v.len(),
                q.m(i)
            )));
        }
    }
    for i in 1..=n {
        if linalg::rank(&u[i - 1]) != e[i - 1] {
            return Ok(false);
        }
        let next = q.rep().wrap(i as i64 + 1);
        for v in &u[i - 1] {
            let mut image = vec![rat(0); q.m(next)];
            for (k, x) in v.iter().enumerate() {
                if let Some((_, k2)) = q.successor(i, k + 1) {
                    image[k2 - 1] += x;
                }
            }
            if !linalg::in_span(&u[next - 1], &image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The point of the one-dimensional orbit attached to `t`: every chain vertex
/// `v_k` is replaced by `v_k + v_j`.
pub fn orbit_representative(q: &CoefficientQuiver, l: &FixedPoint, t: TerminalTriple) -> Result<Subspace> {
    let valid = (1..=q.n()).contains(&t.i)
        && (1..=q.m(t.i)).contains(&t.j)
        && (1..=q.m(t.i)).contains(&t.k)
        && is_terminal(q, l, t);
    if !valid {
        return Err(Error::InvalidTriple(t.to_string()));
    }
    let mut u = fixed_point_subspace(q, l);
    let (rj, rk) = (q.record(t.i, t.j), q.record(t.i, t.k));
    for step in 0..=chain_len(q, l, t.i, t.k) {
        let (i, kk) = q.locate(rk.segment, rk.position - step);
        let (_, jj) = q.locate(rj.segment, rj.position - step);
        let row = u[i - 1].iter_mut().find(|v| v[kk - 1] == rat(1)).expect("chain vertex is kept");
        row[jj - 1] = rat(1);
    }
    Ok(u)
}
