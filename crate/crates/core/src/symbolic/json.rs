//! JSON forms of polynomials and factored rationals.
//!
//! The zero polynomial has no terms, so decoding needs the variable count from context.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::factored::FactoredRational;
use super::linear::LinearForm;
use super::poly::{Polynomial, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredJson {
    pub terms: Vec<TermJson>,
    #[serde(default)]
    pub den_factors: Vec<PolyJson>,
}

impl From<&Polynomial> for PolyJson {
    fn from(p: &Polynomial) -> Self {
        PolyJson {
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.exps().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl From<&FactoredRational> for FactoredJson {
    fn from(x: &FactoredRational) -> Self {
        FactoredJson {
            terms: PolyJson::from(x.numerator()).terms,
            den_factors: x.denominator().iter().map(|l| PolyJson::from(l.as_poly())).collect(),
        }
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Malformed(format!("`{s}` is not an integer")))
}

fn terms_to_poly(terms: &[TermJson], nvars: usize) -> Result<Polynomial> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let den = parse_int(&t.den)?;
        if den.is_zero() {
            return Err(Error::Malformed("zero denominator".into()));
        }
        out.push((t.exp.clone(), Rational::new(parse_int(&t.num)?, den)));
    }
    Polynomial::from_terms(nvars, out)
}

impl PolyJson {
    pub fn to_poly(&self, nvars: usize) -> Result<Polynomial> {
        terms_to_poly(&self.terms, nvars)
    }
}

impl FactoredJson {
    pub fn to_factored(&self, nvars: usize) -> Result<FactoredRational> {
        let num = terms_to_poly(&self.terms, nvars)?;
        let den = self
            .den_factors
            .iter()
            .map(|f| LinearForm::new(f.to_poly(nvars)?))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::NonLinearDenominator(e.to_string()))?;
        Ok(FactoredRational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let p = Polynomial::parse(4, "2/3*e1*e2 - d^2 + 5").unwrap();
        let text = serde_json::to_string(&PolyJson::from(&p)).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_poly(4).unwrap(), p);

        let x = FactoredRational::new(p.clone(), vec![LinearForm::parse(4, "e2-e3-d").unwrap()]);
        let text = serde_json::to_string(&FactoredJson::from(&x)).unwrap();
        let back: FactoredJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_factored(4).unwrap(), x);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = r#"{"terms":[{"exp":[1,0],"num":"1","den":"0"}]}"#;
        let j: PolyJson = serde_json::from_str(bad).unwrap();
        assert!(j.to_poly(2).is_err());
        let j: PolyJson = serde_json::from_str(r#"{"terms":[{"exp":[1],"num":"1","den":"1"}]}"#).unwrap();
        assert!(j.to_poly(2).is_err());
        let quad = r#"{"terms":[],"den_factors":[{"terms":[{"exp":[2,0],"num":"1","den":"1"}]}]}"#;
        let j: FactoredJson = serde_json::from_str(quad).unwrap();
        assert!(matches!(j.to_factored(2), Err(Error::NonLinearDenominator(_))));
    }
}
