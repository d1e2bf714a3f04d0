use std::fmt;

use num_traits::Zero;

use super::poly::{priority, Monomial, Polynomial, Rational};
use crate::error::{Error, Result};

/// A nonzero homogeneous polynomial of degree one.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LinearForm(Polynomial);

impl LinearForm {
    pub fn new(p: Polynomial) -> Result<Self> {
        if p.homogeneous_degree() != Some(1) {
            return Err(Error::InvalidArgument(format!("`{p}` is not a nonzero linear form")));
        }
        Ok(LinearForm(p))
    }

    /// From coefficients indexed like the variables (0 is `d`).
    pub fn from_coeffs(coeffs: &[Rational]) -> Result<Self> {
        let n = coeffs.len();
        let p = Polynomial::from_terms(
            n,
            coeffs.iter().enumerate().map(|(v, c)| (Monomial::var(n, v).exps().to_vec(), c.clone())),
        )?;
        Self::new(p)
    }

    pub fn parse(nvars: usize, s: &str) -> Result<Self> {
        Self::new(Polynomial::parse(nvars, s)?)
    }

    pub fn as_poly(&self) -> &Polynomial {
        &self.0
    }

    pub fn into_poly(self) -> Polynomial {
        self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars()
    }

    pub fn coefficient(&self, v: usize) -> Rational {
        self.0.coefficient(&Monomial::var(self.nvars(), v))
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        (0..self.nvars()).map(|v| self.coefficient(v)).collect()
    }

    /// Highest-priority variable with a nonzero coefficient, and that coefficient.
    pub fn pivot(&self) -> (usize, Rational) {
        priority(self.nvars())
            .map(|v| (v, self.coefficient(v)))
            .find(|(_, c)| !c.is_zero())
            .expect("linear form is nonzero")
    }

    /// `(s, l)` with `self = s * l`, `l` integral, primitive, positive pivot.
    pub fn normalize(&self) -> (Rational, LinearForm) {
        let (s, p) = self.0.primitive_part();
        (s, LinearForm(p))
    }

    /// `Some(c)` when `other = c * self`.
    pub fn associate_factor(&self, other: &LinearForm) -> Option<Rational> {
        let (v, c) = self.pivot();
        let k = other.coefficient(v) / c;
        (self.0.scale(&k) == other.0).then_some(k)
    }

    /// `p` restricted to the hyperplane `self = 0`, obtained by eliminating the pivot.
    pub fn restrict(&self, p: &Polynomial) -> Polynomial {
        let (v, c) = self.pivot();
        let mut rest = self.0.clone();
        rest.add_term(Monomial::var(self.nvars(), v), -c.clone());
        p.substitute(v, &rest.scale(&(-c.recip())))
    }

    /// Exact quotient `p / self` when it exists.
    pub fn divides(&self, p: &Polynomial) -> Option<Polynomial> {
        if !self.restrict(p).is_zero() {
            return None;
        }
        let q = p.div_exact(&self.0);
        debug_assert!(q.is_some(), "vanishing restriction implies divisibility");
        q
    }

    pub fn scale(&self, c: &Rational) -> Result<LinearForm> {
        LinearForm::new(self.0.scale(c))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        self.0.evaluate(point)
    }

    pub fn neg(&self) -> LinearForm {
        LinearForm(-&self.0)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact quotient `p / a` if the linear form `a` divides `p`.
pub fn linear_divides(p: &Polynomial, a: &Polynomial) -> Result<Option<Polynomial>> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("division by the zero form".into()));
    }
    Ok(LinearForm::new(a.clone())?.divides(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::poly::rat;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(4, s).unwrap()
    }

    #[test]
    fn divides_examples() {
        let got = linear_divides(&p("(e1-e2)*(e3+d)"), &p("e1-e2")).unwrap();
        assert_eq!(got, Some(p("e3+d")));
        let diff = p("2*e1-e2-e3+d") - p("e1-e3+d");
        assert_eq!(linear_divides(&diff, &p("e2-e1")).unwrap(), Some(p("-1")));
        assert_eq!(linear_divides(&p("e1^2"), &p("e1-e2")).unwrap(), None);
        assert!(matches!(linear_divides(&p("e1"), &Polynomial::zero(4)), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn restriction_eliminates_pivot() {
        let a = LinearForm::parse(4, "e1 - e2").unwrap();
        assert_eq!(a.restrict(&p("e1^2")), p("e2^2"));
        let b = LinearForm::parse(4, "2*d").unwrap();
        assert_eq!(b.restrict(&p("e1 + d")), p("e1"));
    }

    #[test]
    fn normalization() {
        let a = LinearForm::parse(4, "-2*e2 + 4*d").unwrap();
        let (s, l) = a.normalize();
        assert_eq!(s, rat(-2));
        assert_eq!(l.to_string(), "e2 - 2*d");
        assert_eq!(l.associate_factor(&a), Some(rat(-2)));
        assert!(l.associate_factor(&LinearForm::parse(4, "e2").unwrap()).is_none());
    }

    #[test]
    fn rejects_non_linear() {
        assert!(LinearForm::parse(4, "e1 + 1").is_err());
        assert!(LinearForm::parse(4, "e1*e2").is_err());
        assert!(LinearForm::parse(4, "0").is_err());
    }
}
