use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::class::EquivariantClass;
use super::flow::apex_factors;
use crate::error::{Error, Result};
use crate::moment::MomentGraph;
use crate::symbolic::{FactoredJson, FactoredRational, LinearForm, Polynomial};

/// Where an entry of an Euler-class table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    SmoothRule,
    Resolution,
    External,
    Derived,
}

/// Product of the labels of edges `u -> j` with `u <= i` and of `-label` over
/// the edges leaving `j`. Only meaningful where `x_j` is a smooth point of `Z_i`.
pub fn euler_smooth_rule(g: &MomentGraph, j: usize, i: usize) -> Polynomial {
    assert!(j <= i && i <= g.len(), "need j <= i <= m");
    let incoming = g.up_edges(j).filter(|e| e.src <= i).map(|e| e.label.to_poly(g.nvars));
    let outgoing = apex_factors(g, j).into_iter().map(LinearForm::into_poly);
    let all: Vec<Polynomial> = incoming.chain(outgoing).collect();
    Polynomial::product(g.nvars, all.iter())
}

/// `Eu(x)` from the Euler classes of the fixed points in its fiber under a
/// resolution: inverses add.
pub fn euler_via_resolution(fiber: &[FactoredRational]) -> Result<FactoredRational> {
    let (first, rest) = fiber.split_first().ok_or_else(|| Error::InvalidArgument("empty fiber".into()))?;
    let mut sum = first.recip()?;
    for y in rest {
        sum = sum.add(&y.recip()?);
    }
    if sum.is_zero() {
        return Err(Error::DegenerateFiber);
    }
    sum.recip()
}

/// One table entry. The inverse is always a polynomial over linear forms;
/// `eu` is absent when the inverse's numerator does not split, which happens
/// at points lying on components of `Z_i` of different dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerEntry {
    pub eu: Option<FactoredRational>,
    pub inv: FactoredRational,
    pub prov: Provenance,
}

/// `Eu(x_j, Z_i)` for `j <= i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerClassTable {
    nvars: usize,
    m: usize,
    entries: BTreeMap<(usize, usize), EulerEntry>,
}

impl EulerClassTable {
    pub fn new(nvars: usize, m: usize) -> Self {
        EulerClassTable { nvars, m, entries: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_key(&self, j: usize, i: usize, nvars: usize) -> Result<()> {
        if !(1 <= j && j <= i && i <= self.m) {
            return Err(Error::InvalidEulerTable(format!("entry ({j},{i}) outside 1 <= j <= i <= {}", self.m)));
        }
        if nvars != self.nvars {
            return Err(Error::LengthMismatch { expected: self.nvars, found: nvars });
        }
        Ok(())
    }

    /// Adds `Eu(x_j, Z_i) = eu`, which must be nonzero and homogeneous.
    pub fn insert(&mut self, j: usize, i: usize, eu: FactoredRational, prov: Provenance) -> Result<()> {
        self.check_key(j, i, eu.nvars())?;
        if eu.is_zero() || !eu.is_homogeneous() {
            return Err(Error::InvalidEulerTable(format!("entry ({j},{i}) is zero or inhomogeneous: {eu}")));
        }
        let inv = eu.recip()?;
        self.entries.insert((j, i), EulerEntry { eu: Some(eu), inv, prov });
        Ok(())
    }

    /// Adds the entry through its inverse.
    pub fn insert_inverse(&mut self, j: usize, i: usize, inv: FactoredRational, prov: Provenance) -> Result<()> {
        self.check_key(j, i, inv.nvars())?;
        if inv.is_zero() {
            return Err(Error::InvalidEulerTable(format!("entry ({j},{i}) has vanishing inverse")));
        }
        let eu = inv.recip().ok();
        self.entries.insert((j, i), EulerEntry { eu, inv, prov });
        Ok(())
    }

    pub fn get(&self, j: usize, i: usize) -> Option<&EulerEntry> {
        self.entries.get(&(j, i))
    }

    pub fn eu(&self, j: usize, i: usize) -> Result<&FactoredRational> {
        self.entry(j, i)?
            .eu
            .as_ref()
            .ok_or_else(|| Error::NonLinearDenominator(format!("Eu({j},{i}) is not a polynomial over linear forms")))
    }

    pub fn inverse(&self, j: usize, i: usize) -> Result<&FactoredRational> {
        self.entry(j, i).map(|e| &e.inv)
    }

    fn entry(&self, j: usize, i: usize) -> Result<&EulerEntry> {
        self.get(j, i).ok_or_else(|| Error::InvalidEulerTable(format!("missing entry ({j},{i})")))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &EulerEntry)> {
        self.entries.iter()
    }

    /// Pairs `(j, i)` with `j <= i` that have no entry.
    pub fn missing(&self) -> Vec<(usize, usize)> {
        (1..=self.m).flat_map(|i| (1..=i).map(move |j| (j, i))).filter(|k| !self.entries.contains_key(k)).collect()
    }

    /// Every pair filled in by the smooth rule, whether or not it applies.
    pub fn smooth_rule(g: &MomentGraph) -> Result<Self> {
        let mut t = Self::new(g.nvars, g.len());
        for i in 1..=g.len() {
            for j in 1..=i {
                t.insert(j, i, FactoredRational::from_poly(euler_smooth_rule(g, j, i)), Provenance::SmoothRule)?;
            }
        }
        Ok(t)
    }

    /// Completes `known` to a full table.
    ///
    /// `Z_i` is treated as the union of the closures `Y_u` of the cells of
    /// positions `u <= i` that no other such point flows down to; the fixed
    /// points of `Y_u` are those reachable from `x_u` along downward edges.
    /// Inverse Euler classes add over the components through a point.
    ///
    /// On a component, the apex is the product of `-label` over downward
    /// edges, and for `dim x_k < dim Y_u` the entry at `x_k` is forced by
    /// the vanishing of the integral of `φ^(k)` over `Y_u`, a class of too
    /// small degree. Entries in `known` take precedence; one at a point
    /// lying on a single component also feeds the derivation on it.
    /// Anything else is a [`Error::MissingEulerData`] error.
    ///
    /// Computed entries equal to the smooth-rule value are tagged as such.
    pub fn derive(g: &MomentGraph, flow: &[EquivariantClass], known: &EulerClassTable) -> Result<Self> {
        let m = g.len();
        if known.m != m || known.nvars != g.nvars || flow.len() != m {
            return Err(Error::DimensionMismatch("table, graph and flow-up basis disagree".into()));
        }
        let below = descendants(g);
        let mut t = Self::new(g.nvars, m);
        for i in 1..=m {
            let maximal: Vec<usize> = (1..=i).filter(|&u| !(1..=i).any(|v| v != u && below[v - 1][u - 1])).collect();
            let below = &below;
            let components_through = |k: usize| maximal.iter().filter(|&&u| u == k || below[u - 1][k - 1]).count();
            let mut total: BTreeMap<usize, FactoredRational> = BTreeMap::new();
            for &u in &maximal {
                let mut inv: BTreeMap<usize, FactoredRational> = BTreeMap::new();
                for k in (1..=u).rev().filter(|&k| k == u || below[u - 1][k - 1]) {
                    let value = match known.get(k, i) {
                        Some(e) if components_through(k) == 1 => e.inv.clone(),
                        _ if k == u => FactoredRational::inverse_of_product(g.nvars, apex_factors(g, k)),
                        _ if g.vertex(k).dim < g.vertex(u).dim => {
                            let phi = &flow[k - 1];
                            let mut s = FactoredRational::zero(g.nvars);
                            for (j, y) in inv.iter() {
                                if !phi.at(*j).is_zero() {
                                    s = s.add(&y.mul_poly(phi.at(*j)));
                                }
                            }
                            s.neg().mul(&FactoredRational::inverse_of_product(g.nvars, apex_factors(g, k)))
                        }
                        _ if known.get(k, i).is_some() => continue,
                        _ => {
                            return Err(Error::MissingEulerData(format!(
                                "no rule determines ({k},{i}): x_{k} is not of smaller dimension than the component through x_{u}"
                            )))
                        }
                    };
                    inv.insert(k, value);
                }
                for (k, y) in inv {
                    total.entry(k).and_modify(|s| *s = s.add(&y)).or_insert(y);
                }
            }
            for k in 1..=i {
                if let Some(e) = known.get(k, i) {
                    t.entries.insert((k, i), e.clone());
                    continue;
                }
                let y = total.remove(&k).expect("every point of Z_i lies on a component");
                let smooth = FactoredRational::from_poly(euler_smooth_rule(g, k, i));
                let prov = if y.recip().is_ok_and(|eu| eu == smooth) { Provenance::SmoothRule } else { Provenance::Derived };
                t.insert_inverse(k, i, y, prov)?;
            }
        }
        Ok(t)
    }

    /// Checks coverage, the apex entries against the cell dimensions, and
    /// that all local indices of the given flow-up classes are polynomials.
    pub fn validate(&self, g: &MomentGraph, flow: &[EquivariantClass]) -> Result<()> {
        if let Some((j, i)) = self.missing().first() {
            return Err(Error::InvalidEulerTable(format!("missing entry ({j},{i})")));
        }
        for i in 1..=self.m {
            let apex = self.eu(i, i)?;
            let ok = apex.as_polynomial().is_some_and(|p| p.homogeneous_degree() == Some(g.vertex(i).dim as u32));
            if !ok {
                return Err(Error::InvalidEulerTable(format!("apex ({i},{i}) = {apex} is not a polynomial of degree {}", g.vertex(i).dim)));
            }
            for phi in flow {
                super::basis::local_index(phi, i, self)?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> EulerTableJson {
        let entries = self
            .entries
            .iter()
            .map(|(&(j, i), e)| EntryJson {
                j,
                i,
                eu: e.eu.as_ref().map(FactoredJson::from),
                inv: if e.eu.is_none() { Some(FactoredJson::from(&e.inv)) } else { None },
                prov: e.prov,
            })
            .collect();
        EulerTableJson { entries }
    }

    pub fn from_json(json: &EulerTableJson, nvars: usize, m: usize) -> Result<Self> {
        let mut t = Self::new(nvars, m);
        for e in &json.entries {
            if t.entries.contains_key(&(e.j, e.i)) {
                return Err(Error::InvalidEulerTable(format!("duplicate entry ({},{})", e.j, e.i)));
            }
            match (&e.eu, &e.inv) {
                (Some(eu), _) => t.insert(e.j, e.i, eu.to_factored(nvars)?, e.prov)?,
                (None, Some(inv)) => t.insert_inverse(e.j, e.i, inv.to_factored(nvars)?, e.prov)?,
                (None, None) => return Err(Error::Malformed(format!("entry ({},{}) has neither eu nor inv", e.j, e.i))),
            }
        }
        Ok(t)
    }
}

/// `below[u-1][k-1]`: `x_k` is reachable from `x_u` along downward edges, `k != u`.
fn descendants(g: &MomentGraph) -> Vec<Vec<bool>> {
    let m = g.len();
    let mut below = vec![vec![false; m]; m];
    for u in 1..=m {
        let mut stack: Vec<usize> = g.down_edges(u).map(|e| e.dst).collect();
        while let Some(k) = stack.pop() {
            if !below[u - 1][k - 1] {
                below[u - 1][k - 1] = true;
                stack.extend(g.down_edges(k).map(|e| e.dst));
            }
        }
    }
    below
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub j: usize,
    pub i: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eu: Option<FactoredJson>,
    /// Present only when `eu` is not a polynomial over linear forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv: Option<FactoredJson>,
    pub prov: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerTableJson {
    pub entries: Vec<EntryJson>,
}

pub fn save_euler_table(t: &EulerClassTable, path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&t.to_json())?)?;
    Ok(())
}

pub fn load_euler_table(path: &Path, nvars: usize, m: usize) -> Result<EulerClassTable> {
    let json: EulerTableJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    EulerClassTable::from_json(&json, nvars, m)
}
