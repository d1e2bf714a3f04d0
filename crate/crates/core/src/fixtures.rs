//! Bundled example varieties and their golden data.

use crate::cells::FixedPoint;
use crate::cohomology::{basis_from_json, euler_via_resolution, EquivariantClass, EulerClassTable, EulerTableJson, Provenance};
use crate::error::{Error, Result};
use crate::moment::{build_moment_graph, import_graph, MomentGraph};
use crate::rep::{approx_grassmannian, BasisOrder, CoefficientQuiver, NilpotentRep, RepJson};
use crate::symbolic::{FactoredRational, Polynomial};

pub const FIXTURE_NAMES: [&str; 4] = ["loop-gr", "fl3", "fl3a", "ex47"];

/// A representation, a dimension vector and whatever reference data ships
/// with it. Golden documents are kept as text so they can be tampered with.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub summary: &'static str,
    pub rep: NilpotentRep,
    pub e: Vec<usize>,
    pub order: BasisOrder,
    pub golden_graph: Option<String>,
    pub golden_basis: Option<String>,
    pub euler_table: Option<String>,
    /// Fixed points of each smooth piece of an equivariant resolution.
    pub resolution: Vec<Vec<FixedPoint>>,
}

fn pts(v: &[&[usize]]) -> Vec<FixedPoint> {
    v.iter().map(|t| FixedPoint::new(t.to_vec())).collect()
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let base = |summary, n, pairs: &[(usize, usize)], e: &[usize], order| -> Result<Fixture> {
        Ok(Fixture {
            name: name.to_string(),
            summary,
            rep: NilpotentRep::from_pairs(n, pairs)?,
            e: e.to_vec(),
            order,
            golden_graph: None,
            golden_basis: None,
            euler_table: None,
            resolution: Vec::new(),
        })
    };
    let mut f = match name {
        "loop-gr" => {
            let mut f = base("Gr_2 of A2+A1+A1 over the loop", 1, &[(1, 2), (1, 1), (1, 1)], &[2], BasisOrder::Canonical)?;
            f.golden_graph = Some(include_str!("../fixtures/loop-gr.graph.json").into());
            f.golden_basis = Some(include_str!("../fixtures/loop-gr.basis.json").into());
            f.euler_table = Some(include_str!("../fixtures/loop-gr.euler.json").into());
            f.resolution = vec![pts(&[&[1, 0, 1], &[1, 1, 0], &[2, 0, 0]]), pts(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])];
            f
        }
        "fl3" => {
            let mut f = base("complete flags in C^3", 2, &[(2, 2), (2, 2), (2, 2)], &[1, 2], BasisOrder::Canonical)?;
            f.golden_graph = Some(include_str!("../fixtures/fl3.graph.json").into());
            f.golden_basis = Some(include_str!("../fixtures/fl3.basis.json").into());
            f.euler_table = Some(include_str!("../fixtures/fl3.euler.json").into());
            f
        }
        "fl3a" => {
            let mut f = base("degenerate flags in C^3", 2, &[(2, 1), (2, 2), (2, 2), (1, 1)], &[1, 2], BasisOrder::Summand)?;
            f.golden_graph = Some(include_str!("../fixtures/fl3a.graph.json").into());
            f.golden_basis = Some(include_str!("../fixtures/fl3a.basis.json").into());
            f.euler_table = Some(include_str!("../fixtures/fl3a.euler.json").into());
            f
        }
        "ex47" => {
            let pairs = [(1, 4), (1, 2), (2, 3), (2, 2), (2, 1), (4, 6)];
            let mut f = base("six segments over the 4-cycle", 4, &pairs, &[2, 3, 2, 3], BasisOrder::Canonical)?;
            f.golden_graph = Some(include_str!("../fixtures/ex47.graph.json").into());
            f
        }
        other => {
            let Some(args) = other.strip_prefix("approx:") else {
                return Err(Error::UnknownFixture(other.to_string()));
            };
            let nums: Vec<usize> = args
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::UnknownFixture(other.to_string()))?;
            let [n, k, big_n] = nums[..] else {
                return Err(Error::UnknownFixture(other.to_string()));
            };
            let (rep, e) = approx_grassmannian(n, k, big_n)?;
            Fixture {
                name: other.to_string(),
                summary: "finite approximation of an affine Grassmannian",
                rep,
                e,
                order: BasisOrder::Canonical,
                golden_graph: None,
                golden_basis: None,
                euler_table: None,
                resolution: Vec::new(),
            }
        }
    };
    f.name = name.to_string();
    Ok(f)
}

impl Fixture {
    pub fn from_json(name: &str, json: RepJson) -> Result<Self> {
        let order = json.order;
        let (rep, e) = json.into_parts()?;
        Ok(Fixture {
            name: name.to_string(),
            summary: "user input",
            rep,
            e,
            order,
            golden_graph: None,
            golden_basis: None,
            euler_table: None,
            resolution: Vec::new(),
        })
    }

    pub fn quiver(&self) -> Result<CoefficientQuiver> {
        CoefficientQuiver::build_with(&self.rep, self.order)
    }

    pub fn graph(&self) -> Result<MomentGraph> {
        build_moment_graph(&self.quiver()?, &self.e)
    }

    pub fn golden_graph(&self) -> Option<Result<MomentGraph>> {
        self.golden_graph.as_deref().map(import_graph)
    }

    pub fn golden_basis(&self, g: &MomentGraph) -> Option<Result<Vec<EquivariantClass>>> {
        self.golden_basis.as_deref().map(|t| basis_from_json(t, g.nvars, g.len()))
    }

    pub fn euler_table(&self, g: &MomentGraph) -> Option<Result<EulerClassTable>> {
        self.euler_table.as_deref().map(|t| {
            let json: EulerTableJson = serde_json::from_str(t)?;
            EulerClassTable::from_json(&json, g.nvars, g.len())
        })
    }

    /// Euler classes at the points of the resolution lying over `pos`: the
    /// smooth rule evaluated on each piece's moment graph, the full subgraph
    /// on its fixed points.
    pub fn resolution_fiber(&self, g: &MomentGraph, pos: usize) -> Result<Vec<FactoredRational>> {
        let mut fiber = Vec::new();
        for piece in &self.resolution {
            let members: Vec<usize> = piece
                .iter()
                .map(|p| g.position_of(p).ok_or_else(|| Error::InvalidArgument(format!("{p} is not a fixed point"))))
                .collect::<Result<_>>()?;
            if !members.contains(&pos) {
                continue;
            }
            let factors: Vec<Polynomial> = g
                .edges
                .iter()
                .filter(|e| members.contains(&e.src) && members.contains(&e.dst))
                .filter_map(|e| {
                    let l = e.label.to_poly(g.nvars);
                    (e.dst == pos).then(|| l.clone()).or_else(|| (e.src == pos).then(|| -l))
                })
                .collect();
            fiber.push(FactoredRational::from_poly(Polynomial::product(g.nvars, factors.iter())));
        }
        Ok(fiber)
    }

    /// A full table: resolution entries for `Z_m = X` at points with more
    /// than one preimage, everything else derived.
    pub fn compute_euler_table(&self, g: &MomentGraph, flow: &[EquivariantClass]) -> Result<EulerClassTable> {
        let m = g.len();
        let mut known = EulerClassTable::new(g.nvars, m);
        if !self.resolution.is_empty() {
            for pos in 1..m {
                if self.resolution_fiber(g, pos)?.len() > 1 {
                    known.insert(pos, m, self.euler_from_resolution(g, pos)?, Provenance::Resolution)?;
                }
            }
        }
        EulerClassTable::derive(g, flow, &known)
    }

    /// `Eu(x_pos, X)` through the bundled resolution.
    pub fn euler_from_resolution(&self, g: &MomentGraph, pos: usize) -> Result<FactoredRational> {
        euler_via_resolution(&self.resolution_fiber(g, pos)?)
    }
}
