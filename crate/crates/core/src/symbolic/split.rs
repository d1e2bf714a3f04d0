//! Splitting homogeneous polynomials into linear factors over ℚ.
//!
//! Factors are found one at a time: the rational roots in the pivot variable at
//! a few integer points fix each candidate factor, and exact division confirms it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linear::LinearForm;
use super::poly::{priority, rat, Monomial, Polynomial, Rational};

const ATTEMPTS: u64 = 24;
const MAX_TRIAL: u64 = 1 << 40;
const MAX_COMBOS: usize = 256;

/// Writes a homogeneous `p` as `c * l_1 * ... * l_k` with normalized linear
/// forms in canonical order. `None` if `p` is zero, inhomogeneous, or does not
/// split over ℚ.
pub fn split_linear(p: &Polynomial) -> Option<(Rational, Vec<LinearForm>)> {
    let k = p.homogeneous_degree()?;
    if k == 0 {
        return Some((p.constant_value()?, Vec::new()));
    }
    let v = priority(p.nvars()).find(|&v| p.involves(v))?;
    let r = p.degree_in(v);
    let mut lead = Polynomial::zero(p.nvars());
    for (m, c) in p.terms() {
        if m.exps()[v] == r {
            let mut e = m.exps().to_vec();
            e[v] = 0;
            lead.add_term(Monomial::new(e), c.clone());
        }
    }
    let (_, mut factors) = split_linear(&lead)?;
    let mut rest = p.clone();
    for f in &factors {
        rest = f.divides(&rest)?;
    }
    for _ in 0..r {
        let f = find_factor(&rest, v)?;
        rest = f.divides(&rest)?;
        factors.push(f);
    }
    let c = rest.constant_value()?;
    factors.sort();
    Some((c, factors))
}

fn find_factor(q: &Polynomial, v: usize) -> Option<LinearForm> {
    let n = q.nvars();
    let others: Vec<usize> = (0..n).filter(|&w| w != v && q.involves(w)).collect();
    let mut state = 0x9e37_79b9_u64;
    for _ in 0..ATTEMPTS {
        let mut g = vec![0i64; n];
        for &w in &others {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            g[w] = ((state >> 33) % 13) as i64 - 6;
        }
        if let Some(f) = try_point(q, v, &others, &g) {
            return Some(f);
        }
    }
    None
}

fn try_point(q: &Polynomial, v: usize, others: &[usize], g: &[i64]) -> Option<LinearForm> {
    let n = q.nvars();
    let roots0 = rational_roots(&univariate(q, v, g))?;
    for rho in &roots0 {
        let mut slopes: Vec<Vec<Rational>> = Vec::with_capacity(others.len());
        for &w in others {
            let mut g1 = g.to_vec();
            g1[w] += 1;
            let mut g2 = g.to_vec();
            g2[w] += 2;
            let r1 = rational_roots(&univariate(q, v, &g1))?;
            let r2 = rational_roots(&univariate(q, v, &g2))?;
            let cands: Vec<Rational> = r1
                .iter()
                .map(|x| x - rho)
                .filter(|s| r2.contains(&(rho + s * rat(2))))
                .collect();
            slopes.push(cands);
        }
        let total: usize = slopes.iter().map(|s| s.len().max(1)).product();
        if slopes.iter().any(|s| s.is_empty()) || total > MAX_COMBOS {
            continue;
        }
        for combo in 0..total {
            let mut idx = combo;
            let mut coeffs = vec![Rational::zero(); n];
            coeffs[v] = Rational::one();
            let mut at_g = Rational::zero();
            for (slot, &w) in others.iter().enumerate() {
                let s = &slopes[slot][idx % slopes[slot].len()];
                idx /= slopes[slot].len();
                at_g += s * rat(g[w]);
                coeffs[w] = -s.clone();
            }
            if &at_g != rho {
                continue;
            }
            let f = LinearForm::from_coeffs(&coeffs).ok()?;
            if f.divides(q).is_some() {
                return Some(f.normalize().1);
            }
        }
    }
    None
}

/// Coefficients in `v` (constant term first) after substituting `g` for the other variables.
fn univariate(q: &Polynomial, v: usize, g: &[i64]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); q.degree_in(v) as usize + 1];
    for (m, c) in q.terms() {
        let mut t = c.clone();
        for (w, &e) in m.exps().iter().enumerate() {
            if w != v && e > 0 {
                t *= num_traits::pow(rat(g[w]), e as usize);
            }
        }
        out[m.exps()[v] as usize] += t;
    }
    out
}

/// Distinct rational roots; `None` when the search would be too large.
fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut lcm = BigInt::one();
    for c in coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let mut a: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    if a.is_empty() {
        return None;
    }
    let mut roots = Vec::new();
    if a[0].is_zero() {
        roots.push(Rational::zero());
        let lead_zeros = a.iter().take_while(|x| x.is_zero()).count();
        a.drain(..lead_zeros);
    }
    if a.len() == 1 {
        return Some(roots);
    }
    let ps = divisors(&a[0])?;
    let qs = divisors(a.last().expect("nonempty"))?;
    let mut seen = std::collections::BTreeSet::new();
    for q in &qs {
        for p in &ps {
            for sign in [1, -1] {
                let x = Rational::new(BigInt::from(sign) * p, q.clone());
                if seen.insert(x.clone()) && horner_zero(&a, &x) {
                    roots.push(x);
                }
            }
        }
    }
    Some(roots)
}

fn horner_zero(a: &[BigInt], x: &Rational) -> bool {
    let mut acc = Rational::zero();
    for c in a.iter().rev() {
        acc = acc * x + Rational::from_integer(c.clone());
    }
    acc.is_zero()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > MAX_TRIAL {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}
