//! Nilpotent representations of the cyclic quiver in decomposed form, and their
//! coefficient quivers.
//!
//! Cycle vertices, segment ids and basis indices are all 1-based. Positions on
//! a segment are 0-based, with position 0 the start and `ell - 1` the end.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The indecomposable `U(i; ell)`: length `ell`, ending over cycle vertex `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub i: usize,
    pub ell: usize,
}

/// A nilpotent representation of the cycle with `n` vertices, as an ordered
/// list of segments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NilpotentRep {
    n: usize,
    segments: Vec<Segment>,
}

impl NilpotentRep {
    pub fn new(n: usize, segments: Vec<Segment>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cycle length must be at least 1".into()));
        }
        if segments.is_empty() {
            return Err(Error::InvalidArgument("at least one segment is required".into()));
        }
        for (s, seg) in segments.iter().enumerate() {
            if seg.i == 0 || seg.i > n {
                return Err(Error::InvalidArgument(format!(
                    "segment {} ends at vertex {} outside 1..={n}",
                    s + 1,
                    seg.i
                )));
            }
            if seg.ell == 0 {
                return Err(Error::InvalidArgument(format!("segment {} has length 0", s + 1)));
            }
        }
        Ok(NilpotentRep { n, segments })
    }

    /// From `(i, ell)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(i, ell)| Segment { i, ell }).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of segments, `d0`.
    pub fn d0(&self) -> usize {
        self.segments.len()
    }

    /// Variable count of the coefficient ring: `d` plus one `e` per segment.
    pub fn nvars(&self) -> usize {
        self.d0() + 1
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Segment `s` (1-based).
    pub fn segment(&self, s: usize) -> Segment {
        self.segments[s - 1]
    }

    pub fn len_of(&self, s: usize) -> usize {
        self.segments[s - 1].ell
    }

    /// Cycle vertex carrying position `p` of segment `s`.
    pub fn vertex_of(&self, s: usize, p: usize) -> usize {
        let seg = self.segment(s);
        debug_assert!(p < seg.ell);
        self.wrap(seg.i as i64 - (seg.ell - 1 - p) as i64)
    }

    /// Reduces an integer to a cycle vertex in `1..=n`.
    pub fn wrap(&self, i: i64) -> usize {
        ((i - 1).rem_euclid(self.n as i64) + 1) as usize
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut m = vec![0; self.n];
        for s in 1..=self.d0() {
            for p in 0..self.len_of(s) {
                m[self.vertex_of(s, p) - 1] += 1;
            }
        }
        m
    }

    pub fn total_vertices(&self) -> usize {
        self.segments.iter().map(|s| s.ell).sum()
    }

    pub fn max_len(&self) -> usize {
        self.segments.iter().map(|s| s.ell).max().unwrap_or(0)
    }
}

/// Embeds type-A intervals `[a, b]` over `A_n` as segments `U(b; b - a + 1)`.
pub fn embed_type_a(n: usize, intervals: &[(usize, usize)]) -> Result<NilpotentRep> {
    let mut segs = Vec::with_capacity(intervals.len());
    for &(a, b) in intervals {
        if a == 0 || a > b || b > n {
            return Err(Error::MalformedInterval { a, b, n });
        }
        segs.push(Segment { i: b, ell: b - a + 1 });
    }
    NilpotentRep::new(n, segs)
}

/// The one-vertex approximation with `n - k` segments of length `2N` and `2k`
/// of length `N`, together with `e = (nN)`.
pub fn approx_grassmannian(n: usize, k: usize, big_n: usize) -> Result<(NilpotentRep, Vec<usize>)> {
    if k > n || big_n == 0 || n == 0 {
        return Err(Error::OutOfRange(format!("approx({n},{k},{big_n}) needs 0 <= k <= n, n >= 1, N >= 1")));
    }
    let mut segs = vec![Segment { i: 1, ell: 2 * big_n }; n - k];
    segs.extend(std::iter::repeat_n(Segment { i: 1, ell: big_n }, 2 * k));
    Ok((NilpotentRep::new(1, segs)?, vec![n * big_n]))
}

/// One basis vector of the coefficient quiver, with both addressings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexRecord {
    pub segment: usize,
    pub position: usize,
    pub vertex: usize,
    pub index: usize,
}

/// An arrow `(i, k) -> (i + 1, k')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub from: (usize, usize),
    pub to: (usize, usize),
}

/// How vectors inside each `B^(i)` are indexed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisOrder {
    /// Distance to the segment end (descending), then segment length
    /// (descending), then segment id. Endpoints come last, longer segments first.
    #[default]
    Canonical,
    /// Segment id only. Available for representations whose segments do not
    /// wrap around the cycle (type A inputs).
    Summand,
}

/// Ordered bases `B^(i)` and the arrows between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientQuiver {
    rep: NilpotentRep,
    order: BasisOrder,
    bases: Vec<Vec<VertexRecord>>,
    // per segment, per position: index in its basis
    index_of: Vec<Vec<usize>>,
    arrows: Vec<Arrow>,
}

impl CoefficientQuiver {
    /// Orders each `B^(i)` by distance to the segment end (descending), then
    /// segment length (descending), then segment id.
    pub fn build(rep: &NilpotentRep) -> Self {
        Self::build_unchecked(rep, BasisOrder::Canonical)
    }

    /// Builds with the given basis order; `Summand` requires every segment to
    /// fit inside `1..=n` without wrapping.
    pub fn build_with(rep: &NilpotentRep, order: BasisOrder) -> Result<Self> {
        if order == BasisOrder::Summand {
            if let Some(s) = (1..=rep.d0()).find(|&s| rep.segment(s).ell > rep.segment(s).i) {
                return Err(Error::InvalidArgument(format!(
                    "summand order needs non-wrapping segments; segment {s} wraps"
                )));
            }
        }
        Ok(Self::build_unchecked(rep, order))
    }

    fn build_unchecked(rep: &NilpotentRep, order: BasisOrder) -> Self {
        let mut bases: Vec<Vec<VertexRecord>> = vec![Vec::new(); rep.n()];
        for s in 1..=rep.d0() {
            for p in 0..rep.len_of(s) {
                let vertex = rep.vertex_of(s, p);
                bases[vertex - 1].push(VertexRecord { segment: s, position: p, vertex, index: 0 });
            }
        }
        let mut index_of: Vec<Vec<usize>> = rep.segments().iter().map(|s| vec![0; s.ell]).collect();
        for basis in &mut bases {
            match order {
                BasisOrder::Canonical => basis.sort_by_key(|r| {
                    let ell = rep.len_of(r.segment);
                    (std::cmp::Reverse(ell - 1 - r.position), std::cmp::Reverse(ell), r.segment)
                }),
                BasisOrder::Summand => basis.sort_by_key(|r| r.segment),
            }
            for (k, r) in basis.iter_mut().enumerate() {
                r.index = k + 1;
                index_of[r.segment - 1][r.position] = k + 1;
            }
        }
        let mut arrows = Vec::new();
        for basis in &bases {
            for r in basis {
                if r.position + 1 < rep.len_of(r.segment) {
                    let to_vertex = rep.vertex_of(r.segment, r.position + 1);
                    arrows.push(Arrow {
                        from: (r.vertex, r.index),
                        to: (to_vertex, index_of[r.segment - 1][r.position + 1]),
                    });
                }
            }
        }
        CoefficientQuiver { rep: rep.clone(), order, bases, index_of, arrows }
    }

    pub fn rep(&self) -> &NilpotentRep {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    pub fn order(&self) -> BasisOrder {
        self.order
    }

    /// `B^(i)` in index order.
    pub fn basis(&self, i: usize) -> &[VertexRecord] {
        &self.bases[i - 1]
    }

    /// `m_i`.
    pub fn m(&self, i: usize) -> usize {
        self.bases[i - 1].len()
    }

    pub fn record(&self, i: usize, k: usize) -> VertexRecord {
        self.bases[i - 1][k - 1]
    }

    /// Basis index of position `p` on segment `s`.
    pub fn index(&self, s: usize, p: usize) -> usize {
        self.index_of[s - 1][p]
    }

    /// `(vertex, index)` of position `p` on segment `s`.
    pub fn locate(&self, s: usize, p: usize) -> (usize, usize) {
        (self.rep.vertex_of(s, p), self.index(s, p))
    }

    /// Successor index in `B^(i+1)` of `(i, k)`, if the arrow exists.
    pub fn successor(&self, i: usize, k: usize) -> Option<(usize, usize)> {
        let r = self.record(i, k);
        (r.position + 1 < self.rep.len_of(r.segment)).then(|| self.locate(r.segment, r.position + 1))
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Number of segments ending at `i`.
    pub fn d(&self, i: usize) -> usize {
        self.rep.segments().iter().filter(|s| s.i == i).count()
    }

    /// Number of segments of length `ell` ending at `i`.
    pub fn d_len(&self, i: usize, ell: usize) -> usize {
        self.rep.segments().iter().filter(|s| s.i == i && s.ell == ell).count()
    }

    /// `q_i = m_i - d_i`.
    pub fn q(&self, i: usize) -> usize {
        self.m(i) - self.d(i)
    }

    /// Checks that arrows never cross and, for the canonical order, the
    /// endpoint placement rules.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InternalConsistency(msg));
        for i in 1..=self.n() {
            let q = if self.order == BasisOrder::Canonical { self.q(i) } else { 0 };
            let mut prev_len = usize::MAX;
            for (k, r) in self.basis(i).iter().enumerate() {
                let ell = self.rep.len_of(r.segment);
                let is_end = r.position + 1 == ell;
                if self.order == BasisOrder::Summand {
                    continue;
                }
                if is_end != (k >= q) {
                    return fail(format!("endpoint placement at B^({i}) index {}", k + 1));
                }
                if is_end {
                    if ell > prev_len {
                        return fail(format!("endpoint lengths not decreasing in B^({i})"));
                    }
                    prev_len = ell;
                }
            }
            let succ: Vec<usize> =
                (1..=self.m(i)).filter_map(|k| self.successor(i, k)).map(|(_, k2)| k2).collect();
            if succ.windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!("crossing arrows out of B^({i})"));
            }
        }
        Ok(())
    }
}

/// Wire form of a representation together with a dimension vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub n: usize,
    pub segments: Vec<Segment>,
    pub e: Vec<usize>,
    /// Omitted for the canonical order.
    #[serde(default, skip_serializing_if = "is_canonical")]
    pub order: BasisOrder,
}

fn is_canonical(o: &BasisOrder) -> bool {
    *o == BasisOrder::Canonical
}

impl RepJson {
    pub fn new(rep: &NilpotentRep, e: &[usize]) -> Self {
        RepJson { n: rep.n(), segments: rep.segments().to_vec(), e: e.to_vec(), order: BasisOrder::Canonical }
    }

    pub fn with_order(mut self, order: BasisOrder) -> Self {
        self.order = order;
        self
    }

    pub fn into_parts(self) -> Result<(NilpotentRep, Vec<usize>)> {
        let rep = NilpotentRep::new(self.n, self.segments)?;
        if self.e.len() != rep.n() {
            return Err(Error::LengthMismatch { expected: rep.n(), found: self.e.len() });
        }
        Ok((rep, self.e))
    }
}
