//! Fundamental mutations and the labelled moment graph.

use std::collections::{BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cells::{terminal_triples, FixedPoint};
use crate::error::{Error, Result};
use crate::rep::{CoefficientQuiver, NilpotentRep};
use crate::symbolic::{rat, LinearForm, Polynomial};

/// `e{b} - e{a} + delta * d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharacterLabel {
    pub a: usize,
    pub b: usize,
    pub delta: i64,
}

impl CharacterLabel {
    pub fn to_poly(&self, nvars: usize) -> Polynomial {
        let mut p = Polynomial::eps(nvars, self.b) - Polynomial::eps(nvars, self.a);
        p += &Polynomial::delta(nvars).scale(&rat(self.delta));
        p
    }

    pub fn to_linear_form(&self, nvars: usize) -> LinearForm {
        assert_ne!(self.a, self.b, "label with equal segments");
        LinearForm::new(self.to_poly(nvars)).expect("e_b - e_a + c d is a nonzero linear form")
    }
}

impl fmt::Display for CharacterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}-e{}", self.b, self.a)?;
        match self.delta {
            0 => Ok(()),
            1 => f.write_str("+d"),
            -1 => f.write_str("-d"),
            c if c > 0 => write!(f, "+{c}d"),
            c => write!(f, "{c}d"),
        }
    }
}

/// Moves the first `m` kept vertices of segment `a` onto segment `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mutation {
    pub a: usize,
    pub m: usize,
    pub b: usize,
}

impl Mutation {
    /// `(p, q)`: position on `a` of the last moved vertex and the position on
    /// `b` where it lands, for a mutation applied at `s`.
    pub fn endpoints(&self, rep: &NilpotentRep, s: &FixedPoint) -> (usize, usize) {
        let p = rep.len_of(self.a) - s.tail(self.a) + self.m - 1;
        let q = rep.len_of(self.b) - s.tail(self.b) - 1;
        (p, q)
    }
}

/// All fundamental mutations out of `s`, with target point and label.
pub fn mutations_from(q: &CoefficientQuiver, s: &FixedPoint) -> Vec<(Mutation, FixedPoint, CharacterLabel)> {
    let rep = q.rep();
    let d0 = rep.d0();
    let mut out = Vec::new();
    for a in 1..=d0 {
        let (la, ta) = (rep.len_of(a), s.tail(a));
        for m in 1..=ta {
            let p = la - ta + m - 1;
            let (va, ia) = q.locate(a, p);
            for b in (1..=d0).filter(|&b| b != a) {
                let (lb, tb) = (rep.len_of(b), s.tail(b));
                if tb + m > lb {
                    continue;
                }
                let qpos = lb - tb - 1;
                let (vb, ib) = q.locate(b, qpos);
                if va != vb || ib <= ia {
                    continue;
                }
                let mut tails = s.tails.clone();
                tails[a - 1] -= m;
                tails[b - 1] += m;
                let label = CharacterLabel { a, b, delta: qpos as i64 - p as i64 };
                out.push((Mutation { a, m, b }, FixedPoint::new(tails), label));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphVertex {
    pub point: FixedPoint,
    pub dim: usize,
    /// 1-based filtration position.
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub src: usize,
    pub dst: usize,
    pub label: CharacterLabel,
    pub mutation: Mutation,
}

/// Fixed points in filtration order and the downward edges between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentGraph {
    pub nvars: usize,
    pub vertices: Vec<GraphVertex>,
    /// Sorted by `(src, dst)`.
    pub edges: Vec<GraphEdge>,
}

impl MomentGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, pos: usize) -> &GraphVertex {
        &self.vertices[pos - 1]
    }

    pub fn position_of(&self, l: &FixedPoint) -> Option<usize> {
        self.vertices.iter().find(|v| &v.point == l).map(|v| v.pos)
    }

    /// Edges leaving `pos` (toward smaller positions).
    pub fn down_edges(&self, pos: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.src == pos)
    }

    /// Edges arriving at `pos` from larger positions.
    pub fn up_edges(&self, pos: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.dst == pos)
    }

    pub fn out_degree(&self, pos: usize) -> usize {
        self.down_edges(pos).count()
    }
}

/// Linear extension placing mutation targets first; ties by `(dim, tails)`.
fn filtration(points: &[FixedPoint], dims: &[usize], succ: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = points.len();
    let mut pending: Vec<usize> = succ.iter().map(Vec::len).collect();
    let mut preds = vec![Vec::new(); n];
    for (u, out) in succ.iter().enumerate() {
        for &v in out {
            preds[v].push(u);
        }
    }
    let mut ready: BinaryHeap<Reverse<(usize, &[usize], usize)>> = (0..n)
        .filter(|&v| pending[v] == 0)
        .map(|v| Reverse((dims[v], points[v].tails.as_slice(), v)))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, _, v))) = ready.pop() {
        order.push(v);
        for &u in &preds[v] {
            pending[u] -= 1;
            if pending[u] == 0 {
                ready.push(Reverse((dims[u], points[u].tails.as_slice(), u)));
            }
        }
    }
    if order.len() != n {
        return Err(Error::CycleDetected);
    }
    Ok(order)
}

/// The moment graph of the quiver Grassmannian with dimension vector `e`.
pub fn build_moment_graph(q: &CoefficientQuiver, e: &[usize]) -> Result<MomentGraph> {
    let points = crate::cells::enumerate_fixed_points(q.rep(), e)?;
    let index: HashMap<&FixedPoint, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let local: Vec<(Vec<_>, usize)> = points
        .par_iter()
        .map(|l| (mutations_from(q, l), terminal_triples(q, l).len()))
        .collect();
    let mut succ = Vec::with_capacity(points.len());
    for (l, (muts, triples)) in points.iter().zip(&local) {
        if muts.len() != *triples {
            return Err(Error::InternalConsistency(format!(
                "{l} has {} mutations but {triples} terminal triples",
                muts.len()
            )));
        }
        let mut targets = Vec::with_capacity(muts.len());
        for (_, target, _) in muts {
            let t = *index.get(target).ok_or_else(|| {
                Error::InternalConsistency(format!("mutation target {target} is not a fixed point"))
            })?;
            if targets.contains(&t) {
                return Err(Error::InternalConsistency(format!("two edges from {l} to {target}")));
            }
            targets.push(t);
        }
        succ.push(targets);
    }
    let dims: Vec<usize> = local.iter().map(|(_, t)| *t).collect();
    let order = filtration(&points, &dims, &succ)?;
    let mut pos = vec![0; points.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k + 1;
    }
    let vertices = order
        .iter()
        .map(|&v| GraphVertex { point: points[v].clone(), dim: dims[v], pos: pos[v] })
        .collect();
    let mut edges = Vec::new();
    for (v, (muts, _)) in local.into_iter().enumerate() {
        for ((mutation, _, label), &t) in muts.into_iter().zip(&succ[v]) {
            edges.push(GraphEdge { src: pos[v], dst: pos[t], label, mutation });
        }
    }
    edges.sort_by_key(|e| (e.src, e.dst));
    Ok(MomentGraph { nvars: q.rep().nvars(), vertices, edges })
}

/// Sets every label's `d` coefficient to zero.
pub fn project_delta(g: &MomentGraph) -> MomentGraph {
    let mut out = g.clone();
    for e in &mut out.edges {
        assert_ne!(e.label.a, e.label.b, "projected label vanishes");
        e.label.delta = 0;
    }
    out
}

/// Same vertices by tails and position, same edges and labels.
pub fn graph_equal(g1: &MomentGraph, g2: &MomentGraph) -> bool {
    let key = |g: &MomentGraph| {
        let v: Vec<_> = g.vertices.iter().map(|v| (v.point.clone(), v.pos)).collect();
        let mut e: Vec<_> = g
            .edges
            .iter()
            .map(|e| (g.vertex(e.src).point.clone(), g.vertex(e.dst).point.clone(), e.label))
            .collect();
        e.sort();
        (v, e)
    };
    key(g1) == key(g2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

impl FromStr for GraphFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(GraphFormat::Dot),
            "json" => Ok(GraphFormat::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub tails: Vec<usize>,
    pub dim: usize,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub src: usize,
    pub dst: usize,
    pub label: CharacterLabel,
    pub mutation: Mutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

impl From<&MomentGraph> for GraphJson {
    fn from(g: &MomentGraph) -> Self {
        GraphJson {
            vertices: g
                .vertices
                .iter()
                .map(|v| VertexJson { tails: v.point.tails.clone(), dim: v.dim, pos: v.pos })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeJson {
                    src: e.src,
                    dst: e.dst,
                    label: e.label,
                    mutation: e.mutation,
                })
                .collect(),
        }
    }
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<MomentGraph> {
        let mut vertices: Vec<GraphVertex> = self
            .vertices
            .iter()
            .map(|v| GraphVertex { point: FixedPoint::new(v.tails.clone()), dim: v.dim, pos: v.pos })
            .collect();
        vertices.sort_by_key(|v| v.pos);
        if vertices.iter().enumerate().any(|(k, v)| v.pos != k + 1) {
            return Err(Error::Malformed("vertex positions must be 1..=N".into()));
        }
        let nvars = vertices.first().map_or(1, |v| v.point.tails.len() + 1);
        let n = vertices.len();
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            if e.src == 0 || e.src > n || e.dst == 0 || e.dst > n {
                return Err(Error::Malformed(format!("edge {} -> {} out of range", e.src, e.dst)));
            }
            let l = e.label;
            if l.a == 0 || l.b == 0 || l.a >= nvars || l.b >= nvars || l.a == l.b {
                return Err(Error::Malformed(format!("bad label {l}")));
            }
            edges.push(GraphEdge { src: e.src, dst: e.dst, label: l, mutation: e.mutation });
        }
        edges.sort_by_key(|e| (e.src, e.dst));
        Ok(MomentGraph { nvars, vertices, edges })
    }
}

/// Renders the graph as DOT or JSON, in position order.
pub fn export_graph(g: &MomentGraph, format: GraphFormat) -> Result<String> {
    match format {
        GraphFormat::Json => Ok(serde_json::to_string_pretty(&GraphJson::from(g))?),
        GraphFormat::Dot => {
            let mut s = String::from("digraph moment_graph {\n");
            for v in &g.vertices {
                s.push_str(&format!("  \"{}\";\n", v.point));
            }
            for e in &g.edges {
                s.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    g.vertex(e.src).point,
                    g.vertex(e.dst).point,
                    e.label
                ));
            }
            s.push_str("}\n");
            Ok(s)
        }
    }
}

pub fn import_graph(text: &str) -> Result<MomentGraph> {
    serde_json::from_str::<GraphJson>(text)?.to_graph()
}
