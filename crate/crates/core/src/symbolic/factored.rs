use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::linear::LinearForm;
use super::poly::{Polynomial, Rational};
use super::split::split_linear;
use crate::error::{Error, Result};

/// A polynomial over a product of linear forms.
///
/// Denominator factors are kept integral, primitive, with positive pivot, and
/// sorted; none of them divides the numerator. That makes the representation
/// canonical, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FactoredRational {
    num: Polynomial,
    den: Vec<LinearForm>,
}

impl FactoredRational {
    pub fn new(num: Polynomial, den: Vec<LinearForm>) -> Self {
        let mut num = num;
        let mut norm = Vec::with_capacity(den.len());
        for f in den {
            assert_eq!(f.nvars(), num.nvars(), "variable count");
            let (s, l) = f.normalize();
            num = num.scale(&s.recip());
            norm.push(l);
        }
        norm.sort();
        let mut out = FactoredRational { num, den: norm };
        out.reduce();
        out
    }

    pub fn from_poly(p: Polynomial) -> Self {
        FactoredRational { num: p, den: Vec::new() }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(Polynomial::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Polynomial::one(nvars))
    }

    /// `1 / (l_1 ... l_k)`.
    pub fn inverse_of_product(nvars: usize, factors: Vec<LinearForm>) -> Self {
        Self::new(Polynomial::one(nvars), factors)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &[LinearForm] {
        &self.den
    }

    pub fn denominator_poly(&self) -> Polynomial {
        Polynomial::product(self.nvars(), self.den.iter().map(LinearForm::as_poly))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a polynomial, when the denominator is trivial.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_empty().then_some(&self.num)
    }

    /// Numerator degree minus denominator length; `None` if the numerator is
    /// zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        self.num.homogeneous_degree().map(|d| d as i64 - self.den.len() as i64)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut i = 0;
        while i < self.den.len() {
            if let Some(q) = self.den[i].divides(&self.num) {
                self.num = q;
                self.den.remove(i);
            } else {
                i += 1;
            }
        }
    }

    fn multiplicities(&self) -> BTreeMap<&LinearForm, usize> {
        let mut m = BTreeMap::new();
        for f in &self.den {
            *m.entry(f).or_insert(0) += 1;
        }
        m
    }

    pub fn add(&self, other: &FactoredRational) -> FactoredRational {
        let (a, b) = (self.multiplicities(), other.multiplicities());
        let mut lcm: BTreeMap<&LinearForm, usize> = a.clone();
        for (f, &k) in &b {
            let e = lcm.entry(f).or_insert(0);
            *e = (*e).max(k);
        }
        let cofactor = |mine: &BTreeMap<&LinearForm, usize>| {
            let mut p = Polynomial::one(self.nvars());
            for (f, &k) in &lcm {
                for _ in mine.get(f).copied().unwrap_or(0)..k {
                    p = &p * f.as_poly();
                }
            }
            p
        };
        let num = &self.num * &cofactor(&a) + &other.num * &cofactor(&b);
        let den = lcm.into_iter().flat_map(|(f, k)| std::iter::repeat_n(f.clone(), k)).collect();
        let mut out = FactoredRational { num, den };
        out.reduce();
        out
    }

    pub fn neg(&self) -> FactoredRational {
        FactoredRational { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &FactoredRational) -> FactoredRational {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FactoredRational) -> FactoredRational {
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        den.sort();
        let mut out = FactoredRational { num: &self.num * &other.num, den };
        out.reduce();
        out
    }

    pub fn mul_poly(&self, p: &Polynomial) -> FactoredRational {
        self.mul(&FactoredRational::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &Rational) -> FactoredRational {
        let mut out = FactoredRational { num: self.num.scale(c), den: self.den.clone() };
        out.reduce();
        out
    }

    /// `1 / self`. The numerator must split into linear factors.
    pub fn recip(&self) -> Result<FactoredRational> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("reciprocal of zero".into()));
        }
        let (c, factors) = split_linear(&self.num)
            .ok_or_else(|| Error::NonLinearDenominator(self.num.to_string()))?;
        let num = self.denominator_poly().scale(&c.recip());
        Ok(FactoredRational::new(num, factors))
    }

    pub fn div(&self, other: &FactoredRational) -> Result<FactoredRational> {
        Ok(self.mul(&other.recip()?))
    }

    /// Exact value at `point`; `None` when the denominator vanishes there.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Option<Rational>> {
        let mut den = Rational::one();
        for f in &self.den {
            den *= f.evaluate(point)?;
        }
        let num = self.num.evaluate(point)?;
        if den.is_zero() {
            return Ok(None);
        }
        Ok(Some(num / den))
    }
}

/// Exact sum of two factored rationals.
pub fn rational_add(x: &FactoredRational, y: &FactoredRational) -> FactoredRational {
    x.add(y)
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return self.num.fmt(f);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        f.write_str("/(")?;
        for (i, l) in self.den.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "({l})")?;
        }
        f.write_str(")")
    }
}
