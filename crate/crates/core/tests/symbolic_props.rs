use gkm_cycle::symbolic::{linear_divides, rat, rational_add, FactoredRational, LinearForm, Polynomial, Rational};
use proptest::prelude::*;

const NVARS: usize = 3;

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..=2, NVARS), -5i64..=5), 0..5)
        .prop_map(|terms| Polynomial::from_terms(NVARS, terms.into_iter().map(|(e, c)| (e, rat(c)))).unwrap())
}

fn linear() -> impl Strategy<Value = LinearForm> {
    prop::collection::vec(-3i64..=3, NVARS)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| LinearForm::from_coeffs(&c.into_iter().map(rat).collect::<Vec<_>>()).unwrap())
}

fn factored() -> impl Strategy<Value = FactoredRational> {
    (poly(), prop::collection::vec(linear(), 0..3)).prop_map(|(num, den)| FactoredRational::new(num, den))
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-20i64..=20, NVARS).prop_map(|v| v.into_iter().map(rat).collect())
}

/// `x + y` evaluated two ways, `None` where some denominator vanishes.
fn eval(f: &FactoredRational, x: &[Rational]) -> Option<Rational> {
    f.evaluate(x).unwrap()
}

proptest! {
    #[test]
    fn linear_divides_is_exact(p in poly(), a in linear()) {
        let prod = &p * a.as_poly();
        let q = linear_divides(&prod, a.as_poly()).unwrap().expect("a divides a*p");
        prop_assert_eq!(&(&q * a.as_poly()), &prod);
        if let Some(q) = linear_divides(&p, a.as_poly()).unwrap() {
            prop_assert_eq!(&q * a.as_poly(), p);
        }
    }

    #[test]
    fn product_agrees_with_evaluation(p in poly(), q in poly(), x in point()) {
        let lhs = (&p * &q).evaluate(&x).unwrap();
        prop_assert_eq!(lhs, p.evaluate(&x).unwrap() * q.evaluate(&x).unwrap());
        prop_assert_eq!((&p + &q).evaluate(&x).unwrap(), p.evaluate(&x).unwrap() + q.evaluate(&x).unwrap());
    }

    #[test]
    fn rational_add_commutes(a in factored(), b in factored(), x in point()) {
        let (ab, ba) = (rational_add(&a, &b), rational_add(&b, &a));
        prop_assert_eq!(&ab, &ba);
        if let (Some(va), Some(vb), Some(vab)) = (eval(&a, &x), eval(&b, &x), eval(&ab, &x)) {
            prop_assert_eq!(vab, va + vb);
        }
    }

    #[test]
    fn rational_add_associates(a in factored(), b in factored(), c in factored(), x in point()) {
        let left = rational_add(&rational_add(&a, &b), &c);
        let right = rational_add(&a, &rational_add(&b, &c));
        let (l, r) = (eval(&left, &x), eval(&right, &x));
        if let (Some(l), Some(r)) = (l, r) {
            prop_assert_eq!(l, r);
        }
        prop_assert!(left.sub(&right).is_zero());
    }

    #[test]
    fn canonical_strings_round_trip(p in poly()) {
        prop_assert_eq!(Polynomial::parse(NVARS, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn restriction_vanishes_on_the_hyperplane(p in poly(), a in linear()) {
        let r = a.restrict(&p);
        let diff = &p - &r;
        prop_assert!(a.divides(&diff).is_some());
        prop_assert_eq!(r.degree_in(a.pivot().0), 0);
    }

    #[test]
    fn division_inverts_multiplication(a in factored(), b in factored()) {
        prop_assume!(!b.is_zero());
        if let Ok(q) = a.div(&b) {
            prop_assert!(q.mul(&b).sub(&a).is_zero());
        }
    }
}
