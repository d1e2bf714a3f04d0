use std::collections::BTreeMap;

use rayon::prelude::*;

use super::class::{gkm_check, EquivariantClass};
use super::euler::EulerClassTable;
use super::flow::flow_up_basis;
use crate::error::{Error, Result};
use crate::moment::MomentGraph;
use crate::symbolic::{FactoredRational, Polynomial};

/// `I_i(f) = Σ_{j <= i} f(x_j) / Eu(x_j, Z_i)`, which must be a polynomial.
pub fn local_index(f: &EquivariantClass, i: usize, t: &EulerClassTable) -> Result<Polynomial> {
    let mut sum = FactoredRational::zero(t.nvars());
    for j in 1..=i {
        let v = f.at(j);
        if !v.is_zero() {
            sum = sum.add(&t.inverse(j, i)?.mul_poly(v));
        }
    }
    sum.as_polynomial()
        .cloned()
        .ok_or_else(|| Error::InvalidEulerTable(format!("local index at {i} is not a polynomial: {sum}")))
}

/// All local indices `I_1(f), ..., I_m(f)`.
pub fn local_indices(f: &EquivariantClass, t: &EulerClassTable) -> Result<Vec<Polynomial>> {
    (1..=f.len()).map(|i| local_index(f, i, t)).collect()
}

/// The basis with `I_j(θ^(i)) = [i = j]`, `θ^(i)` vanishing below `i` and
/// equal to `Eu(x_i, Z_i)` at `i`.
pub fn unique_basis(g: &MomentGraph, t: &EulerClassTable) -> Result<Vec<EquivariantClass>> {
    let flow = flow_up_basis(g)?;
    unique_basis_from(g, t, flow)
}

/// As [`unique_basis`], starting from the given triangular classes.
pub fn unique_basis_from(g: &MomentGraph, t: &EulerClassTable, flow: Vec<EquivariantClass>) -> Result<Vec<EquivariantClass>> {
    let m = g.len();
    let mut theta: Vec<Option<EquivariantClass>> = vec![None; m];
    for (idx, phi) in flow.into_iter().enumerate().rev() {
        let i = idx + 1;
        let eu = t
            .eu(i, i)?
            .as_polynomial()
            .cloned()
            .ok_or_else(|| Error::InvalidEulerTable(format!("apex ({i},{i}) is not a polynomial")))?;
        let c = constant_ratio(&eu, phi.at(i))
            .ok_or_else(|| Error::InvalidEulerTable(format!("apex ({i},{i}) = {eu} is not a rational multiple of {}", phi.at(i))))?;
        let mut th = phi.scale(&Polynomial::constant(g.nvars, c));
        for k in i + 1..=m {
            let idx_k = local_index(&th, k, t)?;
            if !idx_k.is_zero() {
                th = th.sub_scaled(&idx_k, theta[k - 1].as_ref().expect("processed in decreasing order"));
            }
        }
        check_unique_properties(g, t, i, &th, &eu)?;
        theta[idx] = Some(th);
    }
    Ok(theta.into_iter().map(|c| c.expect("every position filled")).collect())
}

fn constant_ratio(a: &Polynomial, b: &Polynomial) -> Option<crate::symbolic::Rational> {
    let (mb, cb) = b.leading_term()?;
    let c = a.coefficient(mb) / cb;
    (b.scale(&c) == *a).then_some(c)
}

fn check_unique_properties(g: &MomentGraph, t: &EulerClassTable, i: usize, th: &EquivariantClass, eu: &Polynomial) -> Result<()> {
    let fail = |what: String| Err(Error::BasisInconsistency(format!("θ^({i}): {what}")));
    if (1..i).any(|j| !th.at(j).is_zero()) {
        return fail("nonzero below its apex".into());
    }
    if th.at(i) != eu {
        return fail("apex differs from the Euler class".into());
    }
    for (j, idx) in local_indices(th, t)?.iter().enumerate() {
        let want = if j + 1 == i { Polynomial::one(g.nvars) } else { Polynomial::zero(g.nvars) };
        if *idx != want {
            return fail(format!("local index at {} is {idx}", j + 1));
        }
    }
    if !gkm_check(g, th).is_empty() {
        return fail("violates the GKM congruences".into());
    }
    Ok(())
}

/// Coefficients `c` with `f = Σ c_k θ^(k)`, by back-substitution along the
/// filtration.
pub fn expand(basis: &[EquivariantClass], f: &EquivariantClass) -> Result<Vec<Polynomial>> {
    let m = basis.len();
    let mut coeffs: Vec<Polynomial> = Vec::with_capacity(m);
    for k in 1..=m {
        let mut r = f.at(k).clone();
        for (l, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                r -= &(c * basis[l].at(k));
            }
        }
        let c = if r.is_zero() {
            Polynomial::zero(r.nvars())
        } else {
            r.div_exact(basis[k - 1].at(k))
                .ok_or_else(|| Error::BasisInconsistency(format!("remainder at {k} not divisible by the apex")))?
        };
        coeffs.push(c);
    }
    Ok(coeffs)
}

fn check_triangular(basis: &[EquivariantClass]) -> Result<()> {
    for (l, b) in basis.iter().enumerate() {
        if b.len() != basis.len() || b.at(l + 1).is_zero() || (1..=l).any(|k| !b.at(k).is_zero()) {
            return Err(Error::BasisInconsistency(format!("class {} is not triangular", l + 1)));
        }
    }
    Ok(())
}

/// `θ^(i) θ^(j) = Σ_k c_k θ^(k)` for all `i <= j`.
pub fn structure_constants(basis: &[EquivariantClass]) -> Result<BTreeMap<(usize, usize), Vec<Polynomial>>> {
    check_triangular(basis)?;
    let m = basis.len();
    let pairs: Vec<(usize, usize)> = (1..=m).flat_map(|i| (i..=m).map(move |j| (i, j))).collect();
    pairs
        .into_par_iter()
        .map(|(i, j)| Ok(((i, j), expand(basis, &basis[i - 1].mul(&basis[j - 1]))?)))
        .collect()
}
