use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Variable indices in decreasing priority: `e1, e2, ..., d`.
pub(crate) fn priority(nvars: usize) -> impl Iterator<Item = usize> {
    (1..nvars).chain(std::iter::once(0))
}

/// Printed name of variable `v`: `d` for index 0, `e{v}` otherwise.
pub fn var_name(v: usize) -> String {
    if v == 0 {
        "d".to_string()
    } else {
        format!("e{v}")
    }
}

/// Exponent vector. Index 0 is the exponent of `d`, index `j` that of `e{j}`.
///
/// `Ord` is the canonical term order, so a smaller monomial is printed first:
/// higher total degree comes first, then lexicographic with `e1 > e2 > ... > d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials of total degree `d`, in canonical order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn fill(v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if v + 1 == cur.len() {
                cur[v] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[v] = e;
                fill(v + 1, left - e, cur, out);
            }
            cur[v] = 0;
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial(Vec::new())] } else { Vec::new() };
        }
        let mut out = Vec::new();
        fill(0, d, &mut vec![0; nvars], &mut out);
        out.sort();
        out
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| {
            for v in priority(self.0.len()) {
                match other.0[v].cmp(&self.0[v]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial over ℚ in `d, e1, ..., e{d0}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(nvars, Monomial::one(nvars), c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rat(c))
    }

    pub fn term(nvars: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), nvars, "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// The variable with index `v` (0 is `d`).
    pub fn var(nvars: usize, v: usize) -> Self {
        Self::term(nvars, Monomial::var(nvars, v), Rational::one())
    }

    pub fn delta(nvars: usize) -> Self {
        Self::var(nvars, 0)
    }

    /// `e{j}`, with `j` 1-based.
    pub fn eps(nvars: usize, j: usize) -> Self {
        assert!(j >= 1 && j < nvars, "e{j} out of range");
        Self::var(nvars, j)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::LengthMismatch { expected: nvars, found: e.len() });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// Degree in variable `v`.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some() || self.is_zero()
    }

    /// `Some(d)` when nonzero and every term has degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.leading_term()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Whether variable `v` occurs.
    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * m * p`.
    pub fn add_scaled(&mut self, c: &Rational, m: &Monomial, p: &Polynomial) {
        for (pm, pc) in &p.terms {
            self.add_term(pm.mul(m), c * pc);
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Product of an iterator of polynomials; `one` when empty.
    pub fn product<'a, I>(nvars: usize, it: I) -> Polynomial
    where
        I: IntoIterator<Item = &'a Polynomial>,
    {
        it.into_iter().fold(Polynomial::one(nvars), |acc, p| &acc * p)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::LengthMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replaces variable `v` by `q`.
    pub fn substitute(&self, v: usize, q: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, q.nvars);
        let mut powers = vec![Polynomial::one(self.nvars)];
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            while powers.len() <= k {
                let next = powers.last().map(|p| p * q).unwrap_or_else(|| Polynomial::one(self.nvars));
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[v] = 0;
            out.add_scaled(c, &rest, &powers[k]);
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = d.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut r = self.clone();
        let mut q = Polynomial::zero(self.nvars);
        while let Some((m, c)) = r.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            r.add_scaled(&-qc.clone(), &qm, d);
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Least common denominator of the coefficients times `self`, with the
    /// integer content removed and the leading coefficient positive.
    /// Returns `(s, prim)` with `self = s * prim`.
    pub fn primitive_part(&self) -> (Rational, Polynomial) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        use num_integer::Integer;
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&lcm / c.denom())));
        }
        let mut s = Rational::new(g, lcm);
        if self.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            s = -s;
        }
        let inv = s.recip();
        (s, self.scale(&inv))
    }

    /// Parses expressions such as `2*e1 - e2 + d`, `(e3-e1)*(e2-e1-d)`, `e1^2/3`.
    pub fn parse(nvars: usize, s: &str) -> Result<Polynomial> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, nvars };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Malformed(format!(
            "{msg} at byte {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    match d.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        _ => return Err(self.err("division by a non-constant or zero")),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.integer()?.to_u32().ok_or_else(|| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Polynomial::constant(self.nvars, Rational::from_integer(n)))
            }
            Some(b'd') => {
                self.pos += 1;
                Ok(Polynomial::var(self.nvars, 0))
            }
            Some(b'e') => {
                self.pos += 1;
                let j = self.integer()?.to_usize().unwrap_or(usize::MAX);
                if j == 0 || j >= self.nvars {
                    return Err(self.err("variable index out of range"));
                }
                Ok(Polynomial::var(self.nvars, j))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for v in priority(m.nvars()) {
        match m.0[v] {
            0 => {}
            1 => parts.push(var_name(v)),
            e => parts.push(format!("{}^{e}", var_name(v))),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&fmt_monomial(m))?;
            } else {
                write!(f, "{a}*{}", fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_scaled(c, m, rhs);
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial { (&self).$f(&rhs) }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial { (&self).$f(rhs) }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial { self.$f(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);
