//! Attractive gradings of coefficient quivers and the induced cocharacter.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rep::{BasisOrder, CoefficientQuiver};

/// Integer weights on the basis vectors and a constant arrow weight `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub edge_weight: i64,
    /// `wt[i-1][k-1]` is the weight of `v^(i)_k`.
    pub wt: Vec<Vec<i64>>,
}

impl Grading {
    pub fn weight(&self, i: usize, k: usize) -> i64 {
        self.wt[i - 1][k - 1]
    }

    pub fn to_json(&self) -> GradingJson {
        let mut wt = BTreeMap::new();
        for (i, row) in self.wt.iter().enumerate() {
            for (k, w) in row.iter().enumerate() {
                wt.insert(format!("({},{})", i + 1, k + 1), *w);
            }
        }
        GradingJson { d: self.edge_weight, wt }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingJson {
    #[serde(rename = "D")]
    pub d: i64,
    pub wt: BTreeMap<String, i64>,
}

/// The grading with `D = max(d_i - d_{i,1})`, normalised so that the start of a
/// longest segment has weight 1.
///
/// Under the summand order the weight of position `p` on segment `s` is
/// `s + vertex`, with `D = 1`.
pub fn attractive_grading(q: &CoefficientQuiver) -> Grading {
    if q.order() == BasisOrder::Summand {
        let wt = (1..=q.n())
            .map(|i| q.basis(i).iter().map(|r| (r.segment + r.vertex) as i64).collect())
            .collect();
        return Grading { edge_weight: 1, wt };
    }
    let rep = q.rep();
    let n = q.n();
    let big_n = rep.max_len();
    let d = (1..=n).map(|i| q.d(i) as i64 - q.d_len(i, 1) as i64).max().unwrap_or(0);
    let i0 = (1..=n).max_by_key(|&i| (q.d_len(i, big_n), std::cmp::Reverse(i))).expect("n >= 1");
    let w = 1 + d * (big_n as i64 - 1);
    let k = w + q.d(i0) as i64 - q.d_len(i0, 1) as i64;

    let mut end_weight = vec![0i64; rep.d0()];
    for i in 1..=n {
        let qi = q.q(i);
        for r in &q.basis(i)[qi..] {
            let p = (r.index - qi) as i64;
            end_weight[r.segment - 1] = k + p - 1 + q.d_len(i, 1) as i64 - q.d(i) as i64;
        }
    }
    let wt = (1..=n)
        .map(|i| {
            q.basis(i)
                .iter()
                .map(|r| {
                    let ell = rep.len_of(r.segment);
                    end_weight[r.segment - 1] - d * (ell - 1 - r.position) as i64
                })
                .collect()
        })
        .collect();
    Grading { edge_weight: d, wt }
}

/// Weights strictly increase with the index inside each basis, and every arrow
/// adds exactly `D`.
pub fn verify_attractive(q: &CoefficientQuiver, g: &Grading) -> bool {
    if g.wt.len() != q.n() || (1..=q.n()).any(|i| g.wt[i - 1].len() != q.m(i)) {
        return false;
    }
    let increasing = g.wt.iter().all(|row| row.windows(2).all(|w| w[0] < w[1]));
    let additive = q.arrows().iter().all(|a| g.weight(a.to.0, a.to.1) == g.weight(a.from.0, a.from.1) + g.edge_weight);
    increasing && additive
}

/// `(D; wt of each segment start)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocharacter {
    pub edge_weight: i64,
    pub starts: Vec<i64>,
}

impl std::fmt::Display for Cocharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.starts.iter().map(|w| w.to_string()).collect();
        write!(f, "({};{})", self.edge_weight, s.join(","))
    }
}

pub fn generic_cocharacter(q: &CoefficientQuiver, g: &Grading) -> Result<Cocharacter> {
    if !verify_attractive(q, g) {
        return Err(Error::NotAttractive);
    }
    let starts = (1..=q.rep().d0())
        .map(|s| {
            let (i, k) = q.locate(s, 0);
            g.weight(i, k)
        })
        .collect();
    Ok(Cocharacter { edge_weight: g.edge_weight, starts })
}
