//! Seeded random elements for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldParams, QuadExtElem, Series};
use crate::quaternion::{is_in_order, is_normalizer_element, ExtCase, Membership, OrderSpec, QuatElem};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn digit(rng: &mut SampleRng, p: FieldParams, rational: bool) -> QuadExtElem {
    let q = p.q();
    QuadExtElem {
        c: rng.random_range(0..q),
        d: if rational { 0 } else { rng.random_range(0..q) },
    }
}

pub fn nonzero_digit(rng: &mut SampleRng, p: FieldParams, rational: bool) -> QuadExtElem {
    loop {
        let x = digit(rng, p, rational);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A residue of F_{q²} outside F_q.
pub fn irrational_digit(rng: &mut SampleRng, p: FieldParams) -> QuadExtElem {
    QuadExtElem {
        c: rng.random_range(0..p.q()),
        d: rng.random_range(1..p.q()),
    }
}

/// Random digits at exponents shift..precision with a nonzero leading digit.
pub fn series(rng: &mut SampleRng, p: FieldParams, shift: i32, rational: bool) -> Series {
    let n = (p.precision() - shift).max(1) as usize;
    let mut ds = Vec::with_capacity(n);
    ds.push(nonzero_digit(rng, p, rational));
    for _ in 1..n {
        ds.push(digit(rng, p, rational));
    }
    Series::from_digits(p, shift, &ds, p.precision().max(shift + 1))
}

/// Random element of O_F^× or O_K^× (unramified) as a series.
pub fn unit_series(rng: &mut SampleRng, p: FieldParams, rational: bool) -> Series {
    series(rng, p, 0, rational)
}

/// Random integral series, possibly zero in its first digits.
pub fn integral_series(rng: &mut SampleRng, p: FieldParams, rational: bool) -> Series {
    let ds: Vec<_> = (0..p.precision()).map(|_| digit(rng, p, rational)).collect();
    Series::from_digits(p, 0, &ds, p.precision())
}

/// Random element of O_D^×.
pub fn unit(rng: &mut SampleRng, p: FieldParams) -> QuatElem {
    QuatElem::new(unit_series(rng, p, false), integral_series(rng, p, false))
}

/// Random element of O_D with v_D in 1..=max_v.
pub fn nonunit(rng: &mut SampleRng, p: FieldParams, max_v: i32) -> QuatElem {
    let e = rng.random_range(1..=max_v.max(1));
    &QuatElem::pi_d_power(p, e) * &unit(rng, p)
}

/// Random nonzero element of D with v_D in min_v..=max_v.
pub fn element(rng: &mut SampleRng, p: FieldParams, min_v: i32, max_v: i32) -> QuatElem {
    let e = rng.random_range(min_v..=max_v);
    &QuatElem::pi_d_power(p, e) * &unit(rng, p)
}

/// A unit at distance 1 from O_F^× (its residue is not F_q-rational).
pub fn distance_one_unit(rng: &mut SampleRng, p: FieldParams) -> QuatElem {
    let mut ds = vec![irrational_digit(rng, p)];
    ds.extend((1..p.precision()).map(|_| digit(rng, p, false)));
    let a = Series::from_digits(p, 0, &ds, p.precision());
    QuatElem::new(a, integral_series(rng, p, false))
}

/// x + Π^e·r with x ∈ O_F^× and r ∈ O_D^×.
pub fn near_rational(rng: &mut SampleRng, p: FieldParams, e: i32) -> QuatElem {
    let x = QuatElem::from_series(unit_series(rng, p, true));
    &x + &(&QuatElem::pi_d_power(p, e) * &unit(rng, p))
}

/// Largest exponent of the distance to O_F^× that is still shallow.
pub fn shallow_limit(ord: &OrderSpec) -> i32 {
    ord.v_mu() - 2
}

/// Random element of O^×.
pub fn order_unit(rng: &mut SampleRng, p: FieldParams, ord: &OrderSpec) -> QuatElem {
    let s = ord.level as i32;
    match ord.case {
        ExtCase::Unramified => {
            let x = unit_series(rng, p, ord.level > 0);
            if s == 0 {
                return QuatElem::from_series(x);
            }
            let k = integral_series(rng, p, false).shifted(s).truncate(p.precision());
            QuatElem::from_series(&x + &k)
        }
        ExtCase::Ramified => {
            let a = unit_series(rng, p, true);
            let b = integral_series(rng, p, true).shifted(s).truncate(p.precision());
            QuatElem::new(a, b)
        }
    }
}

/// Random unit of O_K = F(δ) or F(Π).
pub fn maximal_order_unit(rng: &mut SampleRng, p: FieldParams, case: ExtCase) -> QuatElem {
    order_unit(rng, p, &OrderSpec::new(case, 0))
}

/// Random unit in D⁺ ∪ D⁻ (the normalizer of O_K^× in O_D^×).
pub fn normalizer_unit(rng: &mut SampleRng, p: FieldParams, case: ExtCase) -> QuatElem {
    let k = maximal_order_unit(rng, p, case);
    match case {
        // D⁻ = K·Π has no units; D⁺ = K.
        ExtCase::Unramified => k,
        ExtCase::Ramified => {
            if rng.random_bool(0.5) {
                k
            } else {
                &QuatElem::delta(p) * &k
            }
        }
    }
}

/// Random γ ∈ O_K^× + ΠO_D outside D⁺ ∪ D⁻ (ramified hypothesis).
pub fn ramified_hypothesis(rng: &mut SampleRng, p: FieldParams, ord: &OrderSpec) -> QuatElem {
    loop {
        let lead = QuatElem::constant(p, nonzero_digit(rng, p, true));
        let g = &lead + &nonunit(rng, p, 4);
        if !is_normalizer_element(&g, ord).unwrap_or(true) {
            return g;
        }
    }
}

/// Random unit of O_D that is not in O_K^× (so that v_z is finite).
pub fn unit_outside_maximal(rng: &mut SampleRng, p: FieldParams, ord: &OrderSpec) -> QuatElem {
    loop {
        let g = unit(rng, p);
        if is_in_order(&g, &ord.maximal()) == Membership::Outside {
            return g;
        }
    }
}

/// Random unit of O_D outside O^×.
pub fn unit_outside_order(rng: &mut SampleRng, p: FieldParams, ord: &OrderSpec) -> QuatElem {
    loop {
        let g = if rng.random_bool(0.5) {
            unit(rng, p)
        } else {
            // close to O^× but not in it
            let e = rng.random_range(1..=6);
            let base = order_unit(rng, p, ord);
            &base + &(&QuatElem::pi_d_power(p, e) * &unit(rng, p))
        };
        if is_in_order(&g, ord) == Membership::Outside {
            return g;
        }
    }
}

pub fn range(rng: &mut SampleRng, lo: i32, hi_inclusive: i32) -> i32 {
    rng.random_range(lo..=hi_inclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Valuation;

    #[test]
    fn samplers_respect_their_contracts() {
        let p = FieldParams::new(3, 10).unwrap();
        let mut r = rng(1);
        for _ in 0..50 {
            assert_eq!(unit(&mut r, p).v_d(), Valuation::Exact(0));
            assert!(nonunit(&mut r, p, 4).v_d().floor() >= 1);
            let e = distance_one_unit(&mut r, p);
            assert!(!e.a.coeff(0).unwrap().is_rational());
            for ord in [OrderSpec::unramified(2), OrderSpec::ramified(1)] {
                assert_eq!(is_in_order(&order_unit(&mut r, p, &ord), &ord), Membership::InUnitGroup);
                assert_eq!(is_in_order(&unit_outside_order(&mut r, p, &ord), &ord), Membership::Outside);
                assert!(is_normalizer_element(&normalizer_unit(&mut r, p, ord.case), &ord).unwrap());
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let p = FieldParams::new(5, 8).unwrap();
        let a: Vec<_> = (0..5).map({
            let mut r = rng(42);
            move |_| unit(&mut r, p)
        }).collect();
        let b: Vec<_> = (0..5).map({
            let mut r = rng(42);
            move |_| unit(&mut r, p)
        }).collect();
        assert_eq!(a, b);
    }
}
