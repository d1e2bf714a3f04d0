use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::class::gkm_check;
use super::flow::flow_up_basis;
use crate::linalg::{rank_mod_p, EchelonBasis};
use crate::moment::{CharacterLabel, MomentGraph};
use crate::symbolic::{rat, Monomial, Polynomial, Rational};

const PRIME: u64 = 2_305_843_009_213_693_951;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `Σ_L C(d - dim L + d0, d0)`: the degree-`d` count of a free module with
/// one generator in each cell degree.
pub fn expected_rank(g: &MomentGraph, d: u32) -> usize {
    let d0 = g.nvars as u64 - 1;
    g.vertices
        .iter()
        .filter(|v| v.dim as u32 <= d)
        .map(|v| binomial(d as u64 - v.dim as u64 + d0, d0) as usize)
        .sum()
}

/// Rows of the congruence system in degree `d`. Column `(pos-1) * M + k`
/// is the coefficient of the `k`-th monomial at position `pos`.
fn congruence_rows(g: &MomentGraph, monos: &[Monomial]) -> Vec<BTreeMap<usize, BigInt>> {
    let nvars = g.nvars;
    let width = monos.len();
    let mut restricted: HashMap<CharacterLabel, Vec<Polynomial>> = HashMap::new();
    for e in &g.edges {
        restricted.entry(e.label).or_insert_with(|| {
            let form = e.label.to_linear_form(nvars);
            monos.iter().map(|m| form.restrict(&Polynomial::term(nvars, m.clone(), rat(1)))).collect()
        });
    }
    g.edges
        .par_iter()
        .flat_map_iter(|e| {
            let images = &restricted[&e.label];
            let mut by_mono: BTreeMap<&Monomial, BTreeMap<usize, Rational>> = BTreeMap::new();
            for (k, img) in images.iter().enumerate() {
                for (mu, c) in img.terms() {
                    let row = by_mono.entry(mu).or_default();
                    row.insert((e.src - 1) * width + k, c.clone());
                    row.insert((e.dst - 1) * width + k, -c.clone());
                }
            }
            by_mono.into_values().map(integral).collect::<Vec<_>>()
        })
        .collect()
}

fn integral(row: BTreeMap<usize, Rational>) -> BTreeMap<usize, BigInt> {
    let l = row.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.into_iter().map(|(k, c)| (k, (c * Rational::from_integer(l.clone())).to_integer())).collect()
}

fn exact_rank(rows: &[BTreeMap<usize, BigInt>]) -> usize {
    let mut basis = EchelonBasis::<usize>::default();
    for r in rows {
        basis.insert(r.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, Rational::from_integer(c.clone()))).collect());
    }
    basis.rank()
}

/// Dimension over ℚ of the degree-`d` part of the GKM module.
///
/// Valid flow-up classes give a free submodule of the expected size. A class
/// vanishing below `x_i` takes at `x_i` a value divisible by every down
/// label, hence by the product of the pairwise non-proportional ones; summing
/// those ideals bounds the module from above. When the two bounds meet the
/// answer needs no elimination. Otherwise the congruence system is reduced,
/// modulo a large prime first and over ℚ if that does not settle it.
pub fn graded_rank(g: &MomentGraph, d: u32) -> usize {
    graded_rank_with(g, d, flow_up_certificate(g))
}

/// [`graded_rank`] by row reduction of the full congruence system.
pub fn graded_rank_by_reduction(g: &MomentGraph, d: u32) -> usize {
    reduce(g, d, false)
}

fn flow_up_certificate(g: &MomentGraph) -> bool {
    flow_up_basis(g).is_ok_and(|b| b.iter().all(|c| gkm_check(g, c).is_empty()))
}

/// Number of pairwise non-proportional labels on the down edges at `pos`.
fn distinct_down_labels(g: &MomentGraph, pos: usize) -> usize {
    let forms: Vec<_> = g.down_edges(pos).map(|e| e.label.to_linear_form(g.nvars)).collect();
    (0..forms.len()).filter(|&a| (0..a).all(|b| forms[a].associate_factor(&forms[b]).is_none())).count()
}

fn divisibility_bound(g: &MomentGraph, d: u32) -> usize {
    let d0 = g.nvars as u64 - 1;
    (1..=g.len())
        .map(|pos| distinct_down_labels(g, pos) as u32)
        .filter(|&r| r <= d)
        .map(|r| binomial((d - r) as u64 + d0, d0) as usize)
        .sum()
}

fn graded_rank_with(g: &MomentGraph, d: u32, certified: bool) -> usize {
    let expected = expected_rank(g, d);
    if certified && divisibility_bound(g, d) == expected {
        return expected;
    }
    reduce(g, d, certified)
}

fn reduce(g: &MomentGraph, d: u32, certified: bool) -> usize {
    let monos = Monomial::all_of_degree(g.nvars, d);
    let unknowns = monos.len() * g.len();
    let rows = congruence_rows(g, &monos);
    let upper = unknowns - rank_mod_p(&rows, PRIME);
    if certified && upper == expected_rank(g, d) {
        return upper;
    }
    unknowns - exact_rank(&rows)
}

/// Whether `graded_rank(d)` matches the free count for `0 <= d <= d_max`.
pub fn freeness_check(g: &MomentGraph, d_max: u32) -> bool {
    let certified = flow_up_certificate(g);
    (0..=d_max).all(|d| graded_rank_with(g, d, certified) == expected_rank(g, d))
}
