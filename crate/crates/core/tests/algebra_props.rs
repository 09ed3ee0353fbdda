use jkpencil::exactalg::factor::factor_uni;
use jkpencil::exactalg::{rat, Field, Matrix, Monomial, MultiPoly, RatFunc, Rational, UniPoly};
use proptest::prelude::*;

const NVARS: usize = 3;

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, NVARS), -4i64..=4), 0..5).prop_map(|ts| {
        MultiPoly::from_terms(ts.into_iter().map(|(e, c)| (Monomial::new(e), rat(c))).collect::<Vec<_>>())
    })
}

fn nonzero_poly() -> impl Strategy<Value = MultiPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-5i64..=5, 1i64..=3), NVARS)
        .prop_map(|v| v.into_iter().map(|(n, d)| rat(n) / rat(d)).collect())
}

fn unipoly() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-4i64..=4, 0..6).prop_map(|c| UniPoly::from_ints(&c))
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| Matrix::from_fn(n, n, |i, j| rat(v[i * n + j])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_ring_map(p in poly(), q in poly(), x in point()) {
        prop_assert_eq!(p.mul(&q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(p.add(&q).eval(&x), p.eval(&x) + q.eval(&x));
        prop_assert_eq!(p.sub(&p), MultiPoly::zero());
    }

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
    }

    #[test]
    fn exact_division_and_gcd(p in nonzero_poly(), q in nonzero_poly(), g in nonzero_poly()) {
        let (a, b) = (p.mul(&g), q.mul(&g));
        prop_assert_eq!(a.div_exact(&g), Some(p.clone()));
        let d = a.gcd(&b);
        prop_assert!(a.div_exact(&d).is_some());
        prop_assert!(b.div_exact(&d).is_some());
        prop_assert!(d.div_exact(&g).is_some(), "gcd {:?} misses common factor {:?}", d, g);
    }

    #[test]
    fn rational_functions_form_a_field(p in poly(), q in nonzero_poly(), r in nonzero_poly(), s in nonzero_poly()) {
        let f = RatFunc::new(p.clone(), q.clone());
        let g = RatFunc::new(r.clone(), s.clone());
        prop_assert_eq!(g.mul(&g.inv()), RatFunc::one());
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        // Cross multiplication as the oracle for the sum.
        let sum = RatFunc::new(p.mul(&s).add(&r.mul(&q)), q.mul(&s));
        prop_assert_eq!(f.add(&g), sum);
    }

    #[test]
    fn derivative_rules(p in poly(), q in nonzero_poly(), r in poly(), i in 0..NVARS) {
        let f = RatFunc::new(p, q);
        let g: RatFunc = r.into();
        let lhs = f.mul(&g).derivative(i);
        let rhs = f.derivative(i).mul(&g).add(&f.mul(&g.derivative(i)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn format_parse_roundtrip(p in poly(), q in nonzero_poly()) {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let f = RatFunc::new(p, q);
        prop_assert_eq!(RatFunc::parse(&f.format(&names), &names).unwrap(), f);
    }

    #[test]
    fn division_with_remainder(a in unipoly(), d in unipoly()) {
        prop_assume!(!d.is_zero());
        let (q, r) = a.divrem(&d);
        prop_assert_eq!(q.mul(&d).add(&r), a);
        prop_assert!(r.is_zero() || r.deg() < d.deg());
    }

    #[test]
    fn factorization_multiplies_back(p in unipoly()) {
        prop_assume!(!p.is_zero() && p.deg() > 0);
        let fs = factor_uni(&p).unwrap();
        let prod = fs.iter().fold(UniPoly::one(), |acc, (f, m)| acc.mul(&f.pow(*m)));
        prop_assert_eq!(prod, p.monic());
    }

    #[test]
    fn determinant_and_inverse(a in matrix(4), b in matrix(4)) {
        prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
        match a.inverse() {
            Some(inv) => prop_assert_eq!(a.mul(&inv), Matrix::identity(4)),
            None => prop_assert_eq!(a.det(), rat(0)),
        }
        prop_assert_eq!(a.rank() + a.kernel().len(), 4);
        for v in a.kernel() {
            prop_assert!(a.mul_vec(&v).iter().all(|x| *x == rat(0)));
        }
    }
}
