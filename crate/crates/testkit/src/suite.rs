//! The randomized invariant checks, one function per property.

use std::collections::BTreeMap;

use gkm_cycle::cells::{
    check_subrepresentation, enumerate_fixed_points, orbit_representative, terminal_triples, FixedPoint,
};
use gkm_cycle::cohomology::{
    apex, expected_rank, flow_up_basis, freeness_check, gkm_check, graded_rank_by_reduction,
};
use gkm_cycle::moment::{build_moment_graph, mutations_from, MomentGraph};
use gkm_cycle::rep::{CoefficientQuiver, NilpotentRep};
use rayon::prelude::*;

use crate::brute_force_count;

pub type Case = (NilpotentRep, Vec<usize>);
pub type Check = fn(&[Case]) -> Result<(), String>;

/// Degree bound for the freeness check.
pub const FREENESS_DEGREE: u32 = 4;
/// Freeness is only checked when the graph has at most this many vertices.
pub const FREENESS_MAX_POINTS: usize = 8;

pub const CHECKS: [(&str, Check); 6] = [
    ("terminal triples = out-degree", triples_match_out_degree),
    ("fixed points = brute-force count", fixed_point_count),
    ("orbit representatives are subrepresentations", orbit_representatives),
    ("mutation digraph is acyclic", acyclic),
    ("flow-up classes are GKM and triangular", flow_up),
    ("freeness up to degree 4", freeness),
];

fn graph(rep: &NilpotentRep, e: &[usize]) -> Result<(CoefficientQuiver, MomentGraph), String> {
    let q = CoefficientQuiver::build(rep);
    let g = build_moment_graph(&q, e).map_err(|err| format!("{}: {err}", describe(rep, e)))?;
    Ok((q, g))
}

pub fn describe(rep: &NilpotentRep, e: &[usize]) -> String {
    let segs: Vec<String> = rep.segments().iter().map(|s| format!("U({};{})", s.i, s.ell)).collect();
    format!("n={} [{}] e={e:?}", rep.n(), segs.join(","))
}

fn each(cases: &[Case], f: impl Fn(&NilpotentRep, &[usize]) -> Result<(), String> + Sync) -> Result<(), String> {
    cases.par_iter().map(|(rep, e)| f(rep, e)).collect::<Result<Vec<()>, String>>().map(|_| ())
}

pub fn triples_match_out_degree(cases: &[Case]) -> Result<(), String> {
    each(cases, |rep, e| {
        let (q, g) = graph(rep, e)?;
        for v in &g.vertices {
            let t = terminal_triples(&q, &v.point).len();
            let muts = mutations_from(&q, &v.point).len();
            if t != g.out_degree(v.pos) || t != muts || t != v.dim {
                return Err(format!("{} at {:?}: {t} triples, {muts} mutations, out-degree {}", describe(rep, e), v.point.tails, g.out_degree(v.pos)));
            }
        }
        Ok(())
    })
}

pub fn fixed_point_count(cases: &[Case]) -> Result<(), String> {
    each(cases, |rep, e| {
        let found = enumerate_fixed_points(rep, e).map_err(|err| err.to_string())?.len();
        let want = brute_force_count(rep, e);
        if found != want {
            return Err(format!("{}: {found} fixed points, brute force {want}", describe(rep, e)));
        }
        Ok(())
    })
}

pub fn orbit_representatives(cases: &[Case]) -> Result<(), String> {
    each(cases, |rep, e| {
        let q = CoefficientQuiver::build(rep);
        for l in enumerate_fixed_points(rep, e).map_err(|err| err.to_string())? {
            for t in terminal_triples(&q, &l) {
                let u = orbit_representative(&q, &l, t).map_err(|err| err.to_string())?;
                if !check_subrepresentation(&q, e, &u).map_err(|err| err.to_string())? {
                    return Err(format!("{} at {:?}, triple {t}", describe(rep, e), l.tails));
                }
            }
        }
        Ok(())
    })
}

/// Sum of the basis indices of the kept vertices.
fn potential(q: &CoefficientQuiver, l: &FixedPoint) -> usize {
    (1..=q.n()).map(|i| l.kept_indices(q, i).iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k + 1).sum::<usize>()).sum()
}

/// Depth-first search over the mutation digraph itself, independent of the
/// filtration used by the graph builder.
pub fn acyclic(cases: &[Case]) -> Result<(), String> {
    each(cases, |rep, e| {
        let q = CoefficientQuiver::build(rep);
        let points = enumerate_fixed_points(rep, e).map_err(|err| err.to_string())?;
        let index: BTreeMap<&FixedPoint, usize> = points.iter().enumerate().map(|(k, l)| (l, k)).collect();
        let mut succ = vec![Vec::new(); points.len()];
        for (k, l) in points.iter().enumerate() {
            for (_, target, _) in mutations_from(&q, l) {
                let t = *index.get(&target).ok_or_else(|| format!("{}: mutation leaves the variety", describe(rep, e)))?;
                if potential(&q, &target) <= potential(&q, l) {
                    return Err(format!("{}: potential does not increase from {:?}", describe(rep, e), l.tails));
                }
                succ[k].push(t);
            }
        }
        // 0 unvisited, 1 on stack, 2 done
        let mut state = vec![0u8; points.len()];
        for root in 0..points.len() {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some((v, next)) = stack.pop() {
                if let Some(&w) = succ[v].get(next) {
                    stack.push((v, next + 1));
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => return Err(format!("{}: cycle through {:?}", describe(rep, e), points[w].tails)),
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                }
            }
        }
        let (_, g) = graph(rep, e)?;
        if g.edges.iter().any(|edge| edge.dst >= edge.src) {
            return Err(format!("{}: edge not descending in the filtration", describe(rep, e)));
        }
        Ok(())
    })
}

pub fn flow_up(cases: &[Case]) -> Result<(), String> {
    each(cases, |rep, e| {
        let (_, g) = graph(rep, e)?;
        let flow = flow_up_basis(&g).map_err(|err| format!("{}: {err}", describe(rep, e)))?;
        for (k, f) in flow.iter().enumerate() {
            let i = k + 1;
            let v = g.vertex(i);
            if !gkm_check(&g, f).is_empty() {
                return Err(format!("{}: class {i} violates the congruences", describe(rep, e)));
            }
            let below = (1..i).all(|j| f.at(j).is_zero());
            if !below || *f.at(i) != apex(&g, i) || f.homogeneous_degree() != Some(v.dim as u32) {
                return Err(format!("{}: class {i} is not triangular of degree {}", describe(rep, e), v.dim));
            }
        }
        Ok(())
    })
}

pub fn freeness(cases: &[Case]) -> Result<(), String> {
    each(cases, |rep, e| {
        let (_, g) = graph(rep, e)?;
        if g.len() > FREENESS_MAX_POINTS {
            return Ok(());
        }
        if !freeness_check(&g, FREENESS_DEGREE) {
            return Err(format!("{}: graded rank differs from the free count", describe(rep, e)));
        }
        // The check above may stop at a bound; redo it by elimination.
        for d in 0..=FREENESS_DEGREE {
            if graded_rank_by_reduction(&g, d) != expected_rank(&g, d) {
                return Err(format!("{}: degree {d} rank differs under reduction", describe(rep, e)));
            }
        }
        Ok(())
    })
}
