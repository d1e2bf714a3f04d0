//! Seeded random cases within n <= 4, <= 8 segments, <= 14 vertices.

use std::sync::OnceLock;

use gkm_cycle::cells::enumerate_fixed_points;
use gkm_cycle::grading::{attractive_grading, generic_cocharacter, verify_attractive};
use gkm_cycle::moment::{build_moment_graph, export_graph, GraphFormat};
use gkm_cycle::rep::{CoefficientQuiver, NilpotentRep, Segment};
use gkm_cycle_testkit::suite::{self, Case};
use gkm_cycle_testkit::{cases, Bounds};
use proptest::prelude::*;

const SEED: u64 = 0x5eed;
const COUNT: usize = 200;

fn corpus() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| cases(SEED, COUNT, Bounds::default()))
}

#[test]
fn corpus_is_not_degenerate() {
    let nonempty = corpus().iter().filter(|(rep, e)| !enumerate_fixed_points(rep, e).unwrap().is_empty()).count();
    assert!(nonempty >= COUNT / 2, "only {nonempty} nonempty varieties");
    let positive = corpus()
        .iter()
        .filter(|(rep, e)| build_moment_graph(&CoefficientQuiver::build(rep), e).unwrap().vertices.iter().any(|v| v.dim >= 3))
        .count();
    assert!(positive >= 20, "only {positive} cases of dimension >= 3");
}

#[test]
fn terminal_triples_match_out_degree() {
    suite::triples_match_out_degree(corpus()).unwrap();
}

#[test]
fn fixed_points_match_brute_force() {
    suite::fixed_point_count(corpus()).unwrap();
}

#[test]
fn orbit_representatives_are_subrepresentations() {
    suite::orbit_representatives(corpus()).unwrap();
}

#[test]
fn mutation_digraph_is_acyclic() {
    suite::acyclic(corpus()).unwrap();
}

#[test]
fn flow_up_classes_are_gkm_and_triangular() {
    suite::flow_up(corpus()).unwrap();
}

#[test]
fn freeness_up_to_degree_four() {
    suite::freeness(corpus()).unwrap();
}

#[test]
fn graph_edges_change_two_tails() {
    for (rep, e) in corpus() {
        let g = build_moment_graph(&CoefficientQuiver::build(rep), e).unwrap();
        for edge in &g.edges {
            let (a, b) = (&g.vertex(edge.src).point.tails, &g.vertex(edge.dst).point.tails);
            assert_eq!(a.iter().zip(b).filter(|(x, y)| x != y).count(), 2);
            assert!(!edge.label.to_poly(g.nvars).is_zero());
        }
    }
}

#[test]
fn graph_construction_is_deterministic() {
    for (rep, e) in corpus().iter().take(40) {
        let render = || export_graph(&build_moment_graph(&CoefficientQuiver::build(rep), e).unwrap(), GraphFormat::Json).unwrap();
        assert_eq!(render(), render());
    }
}

fn rep_strategy() -> impl Strategy<Value = NilpotentRep> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec((1..=n, 1usize..=8), 1..=8)
            .prop_map(move |segs| NilpotentRep::new(n, segs.into_iter().map(|(i, ell)| Segment { i, ell }).collect()).unwrap())
    })
}

proptest! {
    #[test]
    fn quiver_invariants(rep in rep_strategy()) {
        let q = CoefficientQuiver::build(&rep);
        prop_assert!(q.check().is_ok());
        for i in 1..=q.n() {
            prop_assert_eq!(q.m(i), rep.dims()[i - 1]);
            for k in 1..=q.m(i) {
                let r = q.record(i, k);
                prop_assert_eq!(q.locate(r.segment, r.position), (i, k));
                prop_assert_eq!(rep.vertex_of(r.segment, r.position), i);
            }
        }
        prop_assert_eq!(CoefficientQuiver::build(&rep), q);
    }

    #[test]
    fn gradings_are_attractive(rep in rep_strategy()) {
        let q = CoefficientQuiver::build(&rep);
        let g = attractive_grading(&q);
        prop_assert!(verify_attractive(&q, &g));
        for s in 1..=rep.d0() {
            let (i0, k0) = q.locate(s, 0);
            for p in 0..rep.len_of(s) {
                let (i, k) = q.locate(s, p);
                prop_assert_eq!(g.weight(i, k), g.weight(i0, k0) + g.edge_weight * p as i64);
            }
        }
        prop_assert!(generic_cocharacter(&q, &g).is_ok());
    }
}
