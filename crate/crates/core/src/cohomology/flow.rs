use std::cmp::Reverse;
use std::collections::BTreeMap;

use rayon::prelude::*;

use super::class::EquivariantClass;
use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::moment::MomentGraph;
use crate::symbolic::{rat, LinearForm, Monomial, Polynomial, Rational};

/// `-label` for every downward edge at `pos`.
pub fn apex_factors(g: &MomentGraph, pos: usize) -> Vec<LinearForm> {
    g.down_edges(pos).map(|e| e.label.to_linear_form(g.nvars).neg()).collect()
}

/// Product of `-label` over the downward edges at `pos`.
pub fn apex(g: &MomentGraph, pos: usize) -> Polynomial {
    let f = apex_factors(g, pos);
    Polynomial::product(g.nvars, f.iter().map(LinearForm::as_poly))
}

/// The homogeneous `f` of degree `deg` with `f ≡ a mod α` for every pair,
/// normalised to vanish on the free coordinates of the solution set.
///
/// With respect to the canonical monomial order this is the solution obtained
/// by row reduction with free coordinates set to zero.
pub fn solve_congruences(nvars: usize, deg: u32, conditions: &[(LinearForm, Polynomial)]) -> Option<Polynomial> {
    let Some(((first_form, first), rest)) = conditions.split_first() else {
        return Some(Polynomial::zero(nvars));
    };
    if conditions.iter().all(|(_, a)| a.is_zero()) {
        return Some(Polynomial::zero(nvars));
    }
    let mut f = first.clone();
    let mut forms = vec![first_form.clone()];
    let mut prod = first_form.as_poly().clone();
    for (alpha, a) in rest {
        let r = alpha.restrict(&(a - &f));
        if forms.iter().any(|b| b.associate_factor(alpha).is_some()) {
            if !r.is_zero() {
                return None;
            }
            continue;
        }
        if !r.is_zero() {
            let h = r.div_exact(&alpha.restrict(&prod))?;
            f += &(&prod * &h);
        }
        prod = &prod * alpha.as_poly();
        forms.push(alpha.clone());
    }
    if f.homogeneous_degree().is_some_and(|d| d != deg) && !f.is_zero() {
        return None;
    }
    Some(canonical_representative(f, &prod, deg))
}

/// Reduces `f` modulo `prod * S` in degree `deg` so that it vanishes at the
/// pivots taken from the end of the canonical order.
fn canonical_representative(f: Polynomial, prod: &Polynomial, deg: u32) -> Polynomial {
    let pd = prod.degree().unwrap_or(0);
    if pd > deg || f.is_zero() {
        return f;
    }
    let nvars = f.nvars();
    let key = |p: &Polynomial| -> BTreeMap<Reverse<Monomial>, Rational> {
        p.terms().map(|(m, c)| (Reverse(m.clone()), c.clone())).collect()
    };
    let mut basis = EchelonBasis::<Reverse<Monomial>>::default();
    for m in Monomial::all_of_degree(nvars, deg - pd) {
        basis.insert(key(&(prod * &Polynomial::term(nvars, m, rat(1)))));
    }
    let mut out = Polynomial::zero(nvars);
    for (Reverse(m), c) in basis.reduce(key(&f)) {
        out.add_term(m, c);
    }
    out
}

/// The flow-up class supported on positions `>= i` with value `apex(i)` at `i`.
pub fn flow_up_class(g: &MomentGraph, i: usize) -> Result<EquivariantClass> {
    let m = g.len();
    let mut class = EquivariantClass::zero(g.nvars, m);
    let top = apex(g, i);
    let deg = g.vertex(i).dim as u32;
    class.set(i, top);
    for j in i + 1..=m {
        let conditions: Vec<(LinearForm, Polynomial)> = g
            .down_edges(j)
            .map(|e| (e.label.to_linear_form(g.nvars), class.at(e.dst).clone()))
            .collect();
        let v = solve_congruences(g.nvars, deg, &conditions).ok_or(Error::FormalityViolation { class: i, vertex: j })?;
        class.set(j, v);
    }
    Ok(class)
}

/// `φ^(1), ..., φ^(m)`, triangular with respect to the filtration.
pub fn flow_up_basis(g: &MomentGraph) -> Result<Vec<EquivariantClass>> {
    (1..=g.len()).into_par_iter().map(|i| flow_up_class(g, i)).collect()
}
