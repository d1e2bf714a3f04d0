use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moment::{GraphEdge, MomentGraph};
use crate::symbolic::{PolyJson, Polynomial};

/// One polynomial per fixed point, indexed by filtration position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivariantClass {
    values: Vec<Polynomial>,
}

impl EquivariantClass {
    pub fn new(values: Vec<Polynomial>) -> Self {
        EquivariantClass { values }
    }

    pub fn zero(nvars: usize, m: usize) -> Self {
        Self::new(vec![Polynomial::zero(nvars); m])
    }

    pub fn constant(nvars: usize, m: usize, c: i64) -> Self {
        Self::new(vec![Polynomial::from_int(nvars, c); m])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Polynomial] {
        &self.values
    }

    /// Value at the 1-based position `pos`.
    pub fn at(&self, pos: usize) -> &Polynomial {
        &self.values[pos - 1]
    }

    pub fn set(&mut self, pos: usize, p: Polynomial) {
        self.values[pos - 1] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Polynomial::is_zero)
    }

    /// Common degree of the nonzero values, `None` if mixed or inhomogeneous.
    /// The zero class has degree 0.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for v in self.values.iter().filter(|v| !v.is_zero()) {
            let d = v.homogeneous_degree()?;
            if *deg.get_or_insert(d) != d {
                return None;
            }
        }
        Some(deg.unwrap_or(0))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &EquivariantClass) -> EquivariantClass {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect())
    }

    /// `self - c * other`.
    pub fn sub_scaled(&self, c: &Polynomial, other: &EquivariantClass) -> EquivariantClass {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a - &(c * b)).collect())
    }

    pub fn scale(&self, c: &Polynomial) -> EquivariantClass {
        Self::new(self.values.iter().map(|a| a * c).collect())
    }

    pub fn to_json(&self) -> ClassJson {
        let values = self.values.iter().enumerate().map(|(k, v)| ((k + 1).to_string(), PolyJson::from(v))).collect();
        ClassJson { values }
    }
}

/// `{"values": {"pos": Polynomial}}`; positions are 1-based decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub values: BTreeMap<String, PolyJson>,
}

impl ClassJson {
    /// Missing positions read as zero.
    pub fn to_class(&self, nvars: usize, m: usize) -> Result<EquivariantClass> {
        let mut c = EquivariantClass::zero(nvars, m);
        for (k, v) in &self.values {
            let pos: usize = k.parse().map_err(|_| Error::Malformed(format!("position `{k}`")))?;
            if pos == 0 || pos > m {
                return Err(Error::OutOfRange(format!("position {pos} of {m}")));
            }
            c.set(pos, v.to_poly(nvars)?);
        }
        Ok(c)
    }
}

pub fn basis_to_json(basis: &[EquivariantClass]) -> Result<String> {
    let list: Vec<ClassJson> = basis.iter().map(EquivariantClass::to_json).collect();
    Ok(serde_json::to_string_pretty(&list)?)
}

pub fn basis_from_json(text: &str, nvars: usize, m: usize) -> Result<Vec<EquivariantClass>> {
    let list: Vec<ClassJson> = serde_json::from_str(text)?;
    list.iter().map(|c| c.to_class(nvars, m)).collect()
}

/// Edges whose label does not divide the difference of the endpoint values.
pub fn gkm_check<'g>(g: &'g MomentGraph, f: &EquivariantClass) -> Vec<&'g GraphEdge> {
    assert_eq!(f.len(), g.len(), "class indexed by the graph's fixed points");
    g.edges
        .iter()
        .filter(|e| {
            let diff = f.at(e.src) - f.at(e.dst);
            e.label.to_linear_form(g.nvars).divides(&diff).is_none()
        })
        .collect()
}
