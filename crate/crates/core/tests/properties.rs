use liftcalc::lifting::{v_x, v_y, v_z};
use liftcalc::quaternion::{is_in_order, Membership, OrderSpec, QuatElem, Zeta};
use liftcalc::sampling as sm;
use liftcalc::{FieldParams, Series, ValueExt, Valuation};
use proptest::prelude::*;

fn p(q: u32) -> FieldParams {
    FieldParams::new(q, 10).unwrap()
}

fn vmin(a: Valuation, b: Valuation) -> i32 {
    a.floor().min(b.floor())
}

#[test]
fn ultrametric_over_a_thousand_pairs() {
    for q in [3, 5, 7] {
        let p = p(q);
        let mut rng = sm::rng(q as u64);
        for _ in 0..1000 {
            let x = sm::element(&mut rng, p, -2, 4);
            let y = sm::element(&mut rng, p, -2, 4);
            let s = &x + &y;
            assert!(s.v_d().floor() >= vmin(x.v_d(), y.v_d()), "{x} + {y}");
            if x.v_d() != y.v_d() {
                assert_eq!(s.v_d().floor(), vmin(x.v_d(), y.v_d()));
            }
            let (a, b) = (sm::series(&mut rng, p, 0, false), sm::series(&mut rng, p, 1, false));
            assert!((&a + &b).valuation().floor() >= vmin(a.valuation(), b.valuation()));
        }
    }
}

#[test]
fn frobenius_is_an_involutive_automorphism_fixing_the_prime_field() {
    for q in [3, 5, 7] {
        let p = p(q);
        let all = p.quad_field();
        for &x in &all {
            assert_eq!(p.frobenius(p.frobenius(x)), x);
            assert_eq!(p.frobenius(x) == x, x.is_rational());
            for &y in &all {
                assert_eq!(p.frobenius(p.add(x, y)), p.add(p.frobenius(x), p.frobenius(y)));
                assert_eq!(p.frobenius(p.mul(x, y)), p.mul(p.frobenius(x), p.frobenius(y)));
            }
        }
    }
}

#[test]
fn norms_are_central() {
    let p = p(3);
    let mut rng = sm::rng(11);
    for _ in 0..200 {
        let x = sm::element(&mut rng, p, -2, 3);
        let y = sm::element(&mut rng, p, -2, 3);
        let n = QuatElem::from_series(x.reduced_norm());
        assert!((&n * &y).eq_to_precision(&(&y * &n)));
        assert!((&x * &x.main_involution()).eq_to_precision(&n));
    }
}

proptest! {
    #[test]
    fn valuation_is_multiplicative(seed in any::<u64>(), q in prop::sample::select(vec![3u32, 5, 7])) {
        let p = p(q);
        let mut rng = sm::rng(seed);
        let x = sm::element(&mut rng, p, -3, 3);
        let y = sm::element(&mut rng, p, -3, 3);
        let xy = &x * &y;
        prop_assert_eq!(xy.v_d().exact(), Some(x.v_d().exact().unwrap() + y.v_d().exact().unwrap()));
        prop_assert!(xy.reduced_norm().eq_to_precision(&(&x.reduced_norm() * &y.reduced_norm())));
    }

    #[test]
    fn involution_preserves_the_absolute_value(seed in any::<u64>()) {
        let p = p(5);
        let mut rng = sm::rng(seed);
        let x = sm::element(&mut rng, p, -3, 5);
        prop_assert_eq!(x.main_involution().abs_d(), x.abs_d());
        prop_assert!(x.main_involution().main_involution().eq_to_precision(&x));
    }

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>()) {
        let p = p(3);
        let mut rng = sm::rng(seed);
        let x = sm::element(&mut rng, p, -2, 3);
        let xi = x.inv().unwrap();
        let one = QuatElem::one(p);
        prop_assert!((&x * &xi).eq_to_precision(&one));
        prop_assert!((&xi * &x).eq_to_precision(&one));
    }

    #[test]
    fn literals_round_trip(seed in any::<u64>(), q in prop::sample::select(vec![3u32, 5, 7])) {
        let p = p(q);
        let mut rng = sm::rng(seed);
        // full working precision: exact; otherwise agreement to x's own precision
        let u = sm::unit(&mut rng, p);
        prop_assert_eq!(QuatElem::parse(p, &u.to_literal()).unwrap(), u);
        let x = sm::element(&mut rng, p, -2, 4);
        prop_assert!(QuatElem::parse(p, &x.to_literal()).unwrap().eq_to_precision(&x));
        let s = sm::series(&mut rng, p, -1, false);
        prop_assert_eq!(Series::parse(p, &s.to_literal()).unwrap(), s);
    }

    #[test]
    fn order_units_are_closed_under_products(seed in any::<u64>(), s in 0u32..3, ram in any::<bool>()) {
        let p = p(3);
        let ord = if ram { OrderSpec::ramified(s) } else { OrderSpec::unramified(s) };
        let mut rng = sm::rng(seed);
        let a = sm::order_unit(&mut rng, p, &ord);
        let b = sm::order_unit(&mut rng, p, &ord);
        prop_assert_eq!(is_in_order(&(&a * &b), &ord), Membership::InUnitGroup);
        prop_assert_eq!(is_in_order(&a.inv().unwrap(), &ord), Membership::InUnitGroup);
    }
}

#[test]
fn choice_of_zeta_does_not_change_the_depths() {
    let p = p(3);
    let mut rng = sm::rng(5);
    for s in 0..3 {
        let a = OrderSpec::unramified(s);
        let b = a.with_zeta(Zeta::OnePlusDelta);
        for _ in 0..10 {
            let g = sm::unit(&mut rng, p);
            assert_eq!(v_x(&g, &a).unwrap(), v_x(&g, &b).unwrap(), "v_x s={s} {g}");
            assert_eq!(v_y(&g, &a).unwrap(), v_y(&g, &b).unwrap(), "v_y s={s} {g}");
            assert_eq!(a.index(3), b.index(3));
        }
    }
}

/// Unramified maximal order: the main integral gives (q+2)/(q+1) + val(b)
/// while v_y = val(b) + 1. Recorded as exact values, not smoothed over.
#[test]
fn unramified_maximal_order_discrepancy_is_pinned() {
    for q in [3u32, 5] {
        let p = p(q);
        let mut rng = sm::rng(q as u64 + 100);
        let ord = OrderSpec::unramified(0);
        for k in 0..4 {
            let a = sm::unit_series(&mut rng, p, false);
            let b = sm::unit_series(&mut rng, p, false).shifted(k).truncate(p.precision());
            let g = QuatElem::new(a, b);
            let expected = ValueExt::ratio(q as i64 + 2, q as i64 + 1) + ValueExt::from_int(k as i64);
            assert_eq!(v_x(&g, &ord).unwrap(), expected, "v_x at {g}");
            assert_eq!(v_z(&g, &ord).unwrap(), expected, "v_z at {g}");
            assert_eq!(v_y(&g, &ord).unwrap(), ValueExt::from_int(k as i64 + 1), "v_y at {g}");
        }
    }
}
