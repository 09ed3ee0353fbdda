use jkpencil::exactalg::{rat, Field, Matrix, Monomial, MultiPoly, RatFunc};
use jkpencil::geometry::{
    exterior_derivative, involutivity_check, lie_bracket, nijenhuis, wedge, Chart, DiffForm, OperatorField, VectorField,
};
use proptest::prelude::*;

const N: usize = 3;

fn chart() -> Chart {
    Chart::new(["x", "y", "z"]).unwrap()
}

fn func() -> impl Strategy<Value = RatFunc> {
    prop::collection::vec((prop::collection::vec(0u32..3, N), -3i64..=3), 0..4).prop_map(|ts| {
        MultiPoly::from_terms(ts.into_iter().map(|(e, c)| (Monomial::new(e), rat(c))).collect::<Vec<_>>()).into()
    })
}

fn field() -> impl Strategy<Value = VectorField> {
    prop::collection::vec(func(), N).prop_map(|c| VectorField::new(&chart(), c).unwrap())
}

fn one_form() -> impl Strategy<Value = DiffForm> {
    prop::collection::vec(func(), N).prop_map(|c| {
        let mut w = DiffForm::zero(&chart(), 1);
        for (i, f) in c.iter().enumerate() {
            w.add_term(&[i], f).unwrap();
        }
        w
    })
}

fn operator() -> impl Strategy<Value = OperatorField> {
    prop::collection::vec(func(), N * N)
        .prop_map(|v| OperatorField::new(&chart(), Matrix::from_fn(N, N, |i, j| v[i * N + j].clone())).unwrap())
}

/// `X(f)` written out by hand.
fn directional(x: &VectorField, f: &RatFunc) -> RatFunc {
    (0..N).fold(RatFunc::zero(), |acc, i| acc.add(&x.component(i).mul(&f.derivative(i))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(f in func(), w in one_form()) {
        let f = DiffForm::from_function(&chart(), f);
        prop_assert!(exterior_derivative(&exterior_derivative(&f).unwrap()).unwrap().is_zero());
        prop_assert!(exterior_derivative(&exterior_derivative(&w).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn leibniz_for_d(f in func(), g in func()) {
        let c = chart();
        let d = |h: &RatFunc| exterior_derivative(&DiffForm::from_function(&c, h.clone())).unwrap();
        prop_assert_eq!(d(&f.mul(&g)), d(&g).scale(&f).add(&d(&f).scale(&g)));
    }

    #[test]
    fn wedge_of_one_forms_anticommutes(a in one_form(), b in one_form()) {
        prop_assert_eq!(wedge(&a, &b).unwrap(), wedge(&b, &a).unwrap().scale(&RatFunc::one().neg()));
        prop_assert!(wedge(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn bracket_is_a_lie_algebra(x in field(), y in field(), z in field()) {
        let br = |u: &VectorField, v: &VectorField| lie_bracket(u, v).unwrap();
        prop_assert_eq!(br(&x, &y), br(&y, &x).scale(&RatFunc::one().neg()));
        let jacobi = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).add(&br(&z, &br(&x, &y)));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn bracket_with_function_multiple(x in field(), y in field(), f in func()) {
        let lhs = lie_bracket(&x, &y.scale(&f)).unwrap();
        let rhs = lie_bracket(&x, &y).unwrap().scale(&f).add(&y.scale(&directional(&x, &f)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nijenhuis_is_a_skew_tensor(p in operator(), x in field(), y in field(), f in func()) {
        let nxy = nijenhuis(&p, &x, &y).unwrap();
        prop_assert_eq!(nijenhuis(&p, &y, &x).unwrap(), nxy.scale(&RatFunc::one().neg()));
        prop_assert_eq!(nijenhuis(&p, &x.scale(&f), &y).unwrap(), nxy.scale(&f));
    }

    #[test]
    fn coordinate_frames_rescaled_stay_involutive(f in func(), g in func()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let c = chart();
        let a = VectorField::coord(&c, 0).scale(&f);
        let b = VectorField::coord(&c, 1).scale(&g);
        prop_assert!(involutivity_check(&[a, b]).unwrap().is_involutive());
    }
}
