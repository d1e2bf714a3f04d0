//! Exact row reduction over ℚ and rank computations modulo a prime.

use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::symbolic::Rational;

/// Rank of a dense list of rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut basis = EchelonBasis::<usize>::default();
    rows.iter().filter(|r| basis.insert(sparse(r))).count()
}

/// Whether `v` lies in the span of `rows`.
pub fn in_span(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut basis = EchelonBasis::<usize>::default();
    for r in rows {
        basis.insert(sparse(r));
    }
    basis.reduce(sparse(v)).is_empty()
}

fn sparse(v: &[Rational]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Sparse row keyed by column.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Incrementally maintained echelon form with pivots at the smallest column.
#[derive(Clone, Debug)]
pub struct EchelonBasis<K: Ord + Clone = usize> {
    rows: BTreeMap<K, BTreeMap<K, Rational>>,
}

impl<K: Ord + Clone> Default for EchelonBasis<K> {
    fn default() -> Self {
        EchelonBasis { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> EchelonBasis<K> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows. The result vanishes at every pivot.
    pub fn reduce(&self, mut v: BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next(),
                Some(c) => v.range((Excluded(c), Unbounded)).next().map(|(k, _)| k),
            };
            let Some(col) = next.cloned() else { return v };
            if let Some(row) = self.rows.get(&col) {
                let factor = v[&col].clone();
                for (c, x) in row {
                    let entry = v.entry(c.clone()).or_insert_with(Rational::zero);
                    *entry -= &factor * x;
                    if entry.is_zero() {
                        v.remove(c);
                    }
                }
            }
            cursor = Some(col);
        }
    }

    /// Adds `v`; returns `true` when it was independent of the stored rows.
    pub fn insert(&mut self, v: BTreeMap<K, Rational>) -> bool {
        let v = self.reduce(v);
        let Some((col, lead)) = v.iter().next() else { return false };
        let (col, inv) = (col.clone(), lead.recip());
        let v = v.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        self.rows.insert(col, v);
        true
    }
}

/// Rank modulo the prime `p` of an integer matrix given by sparse rows.
///
/// Never exceeds the rank over ℚ.
pub fn rank_mod_p(rows: &[BTreeMap<usize, BigInt>], p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut pivots: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    let mut rank = 0;
    for r in rows {
        let mut v: BTreeMap<usize, u64> = r
            .iter()
            .map(|(c, x)| (*c, x.mod_floor(&pb).to_u64().expect("reduced below p")))
            .filter(|(_, x)| *x != 0)
            .collect();
        let mut cursor = 0;
        while let Some((&col, &lead)) = v.range(cursor..).next() {
            match pivots.get(&col) {
                Some(row) => {
                    for (c, x) in row {
                        let e = v.entry(*c).or_insert(0);
                        *e = (*e + p - mulmod(lead, *x, p)) % p;
                        if *e == 0 {
                            v.remove(c);
                        }
                    }
                    cursor = col + 1;
                }
                None => {
                    let inv = powmod(lead, p - 2, p);
                    let row = v.iter().map(|(c, x)| (*c, mulmod(*x, inv, p))).collect();
                    pivots.insert(col, row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;

    fn rows(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn dense_rank() {
        assert_eq!(rank(&rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
        assert_eq!(rank(&rows(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&rows(&[&[1, 0], &[0, 1], &[1, 1]])), 2);
        assert!(in_span(&rows(&[&[1, 1, 0], &[0, 1, 1]]), &[rat(1), rat(0), rat(-1)]));
        assert!(!in_span(&rows(&[&[1, 1, 0]]), &[rat(1), rat(0), rat(0)]));
    }

    #[test]
    fn modular_rank() {
        let m: Vec<BTreeMap<usize, BigInt>> = [[3i64, 6], [1, 2], [1, 5]]
            .iter()
            .map(|r| r.iter().enumerate().map(|(c, &x)| (c, BigInt::from(x))).collect())
            .collect();
        assert_eq!(rank_mod_p(&m, 1_000_000_007), 2);
        assert_eq!(rank_mod_p(&m, 3), 1);
    }
}
