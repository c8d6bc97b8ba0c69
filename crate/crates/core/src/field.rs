//! Residue fields F_q, F_{q²} and truncated π-adic Laurent series over F_{q²}.
//!
//! The base field is modelled in equal characteristic, F = F_q((π)), so series
//! arithmetic is carry-free digit arithmetic. The unramified quadratic extension
//! is K = F_{q²}((π)) with F_{q²} = F_q[δ], δ² = ν for a fixed non-residue ν.
//!
//! Every series carries its own absolute precision: a value with precision `p`
//! is known modulo π^p. Binary operations keep the coarsest information that is
//! actually determined by their inputs.

use std::cmp::{max, min};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Residue cardinality, chosen non-residue and default working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParams {
    q: u32,
    nu: u32,
    precision: i32,
}

fn is_odd_prime(q: u32) -> bool {
    if q < 3 || q.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result
}

impl FieldParams {
    /// Uses the smallest quadratic non-residue modulo `q`.
    pub fn new(q: u32, precision: i32) -> Result<Self> {
        if !is_odd_prime(q) {
            return Err(Error::InvalidModulus(q));
        }
        let nu = (2..q)
            .find(|&n| pow_mod(n as u64, ((q - 1) / 2) as u64, q as u64) == (q - 1) as u64)
            .expect("odd primes have non-residues");
        Self::with_nonresidue(q, nu, precision)
    }

    pub fn with_nonresidue(q: u32, nu: u32, precision: i32) -> Result<Self> {
        if !is_odd_prime(q) {
            return Err(Error::InvalidModulus(q));
        }
        let nu = nu % q;
        if pow_mod(nu as u64, ((q - 1) / 2) as u64, q as u64) != (q - 1) as u64 {
            return Err(Error::NotNonResidue { q, nu });
        }
        if precision < 2 {
            return Err(Error::PrecisionTooSmall(precision));
        }
        Ok(FieldParams { q, nu, precision })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn nonresidue(&self) -> u32 {
        self.nu
    }

    pub fn precision(&self) -> i32 {
        self.precision
    }

    pub fn with_precision(&self, precision: i32) -> Result<Self> {
        Self::with_nonresidue(self.q, self.nu, precision)
    }

    // --- F_q ---

    fn fq_add(&self, x: u32, y: u32) -> u32 {
        (x + y) % self.q
    }

    fn fq_neg(&self, x: u32) -> u32 {
        (self.q - x % self.q) % self.q
    }

    fn fq_mul(&self, x: u32, y: u32) -> u32 {
        ((x as u64 * y as u64) % self.q as u64) as u32
    }

    fn fq_inv(&self, x: u32) -> u32 {
        pow_mod(x as u64, (self.q - 2) as u64, self.q as u64) as u32
    }

    // --- F_{q²} ---

    pub fn elem(&self, c: i64, d: i64) -> QuadExtElem {
        let q = self.q as i64;
        QuadExtElem {
            c: c.rem_euclid(q) as u32,
            d: d.rem_euclid(q) as u32,
        }
    }

    pub fn add(&self, x: QuadExtElem, y: QuadExtElem) -> QuadExtElem {
        QuadExtElem {
            c: self.fq_add(x.c, y.c),
            d: self.fq_add(x.d, y.d),
        }
    }

    pub fn neg(&self, x: QuadExtElem) -> QuadExtElem {
        QuadExtElem {
            c: self.fq_neg(x.c),
            d: self.fq_neg(x.d),
        }
    }

    pub fn sub(&self, x: QuadExtElem, y: QuadExtElem) -> QuadExtElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: QuadExtElem, y: QuadExtElem) -> QuadExtElem {
        // (a + bδ)(c + dδ) = (ac + ν bd) + (ad + bc)δ
        let q = self.q as u64;
        let (a, b, c, d) = (x.c as u64, x.d as u64, y.c as u64, y.d as u64);
        QuadExtElem {
            c: ((a * c + (self.nu as u64) * (b * d % q)) % q) as u32,
            d: ((a * d + b * c) % q) as u32,
        }
    }

    pub fn norm(&self, x: QuadExtElem) -> u32 {
        // (c + dδ)(c - dδ) = c² - ν d²
        let c2 = self.fq_mul(x.c, x.c);
        let d2 = self.fq_mul(self.nu, self.fq_mul(x.d, x.d));
        self.fq_add(c2, self.fq_neg(d2))
    }

    pub fn inv(&self, x: QuadExtElem) -> Result<QuadExtElem> {
        if x.is_zero() {
            return Err(Error::InversionOfZero);
        }
        let n_inv = self.fq_inv(self.norm(x));
        let conj = self.frobenius(x);
        Ok(QuadExtElem {
            c: self.fq_mul(conj.c, n_inv),
            d: self.fq_mul(conj.d, n_inv),
        })
    }

    /// x ↦ x^q, which sends δ to −δ because ν is a non-residue.
    pub fn frobenius(&self, x: QuadExtElem) -> QuadExtElem {
        QuadExtElem {
            c: x.c,
            d: self.fq_neg(x.d),
        }
    }

    /// All of F_q, as elements of F_{q²}.
    pub fn prime_field(&self) -> Vec<QuadExtElem> {
        (0..self.q).map(|c| QuadExtElem { c, d: 0 }).collect()
    }

    /// All of F_{q²}, ordered by (d, c).
    pub fn quad_field(&self) -> Vec<QuadExtElem> {
        (0..self.q)
            .flat_map(|d| (0..self.q).map(move |c| QuadExtElem { c, d }))
            .collect()
    }
}

/// c + dδ ∈ F_{q²}; both coordinates reduced modulo q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct QuadExtElem {
    pub c: u32,
    pub d: u32,
}

/// F_q viewed inside F_{q²}.
pub type ResidueElem = u32;

impl QuadExtElem {
    pub const ZERO: QuadExtElem = QuadExtElem { c: 0, d: 0 };
    pub const ONE: QuadExtElem = QuadExtElem { c: 1, d: 0 };
    pub const DELTA: QuadExtElem = QuadExtElem { c: 0, d: 1 };

    pub fn rational(c: ResidueElem) -> Self {
        QuadExtElem { c, d: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.c == 0 && self.d == 0
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }
}

/// Valuation of a value known only to finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Exact(i32),
    /// Every known digit vanishes; the true valuation is at least this bound.
    AtLeast(i32),
}

impl Valuation {
    pub fn exact(self) -> Option<i32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Lower bound that is always valid.
    pub fn floor(self) -> i32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Valuation::Exact(_))
    }

    /// Valuation of a sum of two parts with distinct valuations (such as the
    /// even and odd parts of a quaternion).
    pub(crate) fn min_of_separated(x: Valuation, y: Valuation) -> Valuation {
        match (x, y) {
            (Valuation::Exact(a), Valuation::Exact(b)) => Valuation::Exact(min(a, b)),
            (Valuation::Exact(a), Valuation::AtLeast(b))
            | (Valuation::AtLeast(b), Valuation::Exact(a)) => {
                if a < b {
                    Valuation::Exact(a)
                } else {
                    Valuation::AtLeast(b)
                }
            }
            (Valuation::AtLeast(a), Valuation::AtLeast(b)) => Valuation::AtLeast(min(a, b)),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Σ c_i π^(val+i) + O(π^prec) with c_i ∈ F_{q²}.
///
/// Normalized so that `coeffs[0] != 0`; a value with no nonzero known digit is
/// stored with `val == prec` and no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Series {
    params: FieldParams,
    val: i32,
    coeffs: Vec<QuadExtElem>,
    prec: i32,
}

pub type SeriesElem = Series;

impl Series {
    /// Digits `digits[i]` at exponent `shift + i`, known modulo π^prec.
    pub fn from_digits(params: FieldParams, shift: i32, digits: &[QuadExtElem], prec: i32) -> Self {
        let mut coeffs = Vec::with_capacity(max(prec - shift, 0) as usize);
        for e in shift..prec {
            let i = (e - shift) as usize;
            coeffs.push(digits.get(i).copied().unwrap_or_default());
        }
        let mut s = Series {
            params,
            val: shift,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    pub fn zero(params: FieldParams) -> Self {
        Self::zero_to(params, params.precision)
    }

    pub fn zero_to(params: FieldParams, prec: i32) -> Self {
        Series {
            params,
            val: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn constant(params: FieldParams, c: QuadExtElem) -> Self {
        Self::from_digits(params, 0, &[c], params.precision)
    }

    pub fn one(params: FieldParams) -> Self {
        Self::constant(params, QuadExtElem::ONE)
    }

    pub fn delta(params: FieldParams) -> Self {
        Self::constant(params, QuadExtElem::DELTA)
    }

    /// π^k at the default precision shifted by k, so π^k keeps its full
    /// relative precision.
    pub fn pi_power(params: FieldParams, k: i32) -> Self {
        Self::from_digits(params, k, &[QuadExtElem::ONE], params.precision + max(k, 0))
    }

    pub fn from_int(params: FieldParams, n: i64) -> Self {
        Self::constant(params, params.elem(n, 0))
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn precision(&self) -> i32 {
        self.prec
    }

    pub fn valuation(&self) -> Valuation {
        if self.coeffs.is_empty() {
            Valuation::AtLeast(self.prec)
        } else {
            Valuation::Exact(self.val)
        }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of π^e; `None` when e is at or beyond the precision.
    pub fn coeff(&self, e: i32) -> Option<QuadExtElem> {
        if e >= self.prec {
            None
        } else if e < self.val {
            Some(QuadExtElem::ZERO)
        } else {
            Some(self.coeffs[(e - self.val) as usize])
        }
    }

    /// Lowest stored exponent (the valuation when nonzero).
    pub fn shift(&self) -> i32 {
        self.val
    }

    pub fn coeffs(&self) -> &[QuadExtElem] {
        &self.coeffs
    }

    /// True when every known digit lies in F_q.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(QuadExtElem::is_rational)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i32;
            }
            None => {
                self.coeffs.clear();
                self.val = self.prec;
            }
        }
    }

    /// Forget digits at exponent `prec` and above.
    pub fn truncate(&self, prec: i32) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let keep = max(prec - self.val, 0) as usize;
        let mut s = Series {
            params: self.params,
            val: min(self.val, prec),
            coeffs: self.coeffs.iter().take(keep).copied().collect(),
            prec,
        };
        s.normalize();
        s
    }

    /// Multiplication by π^k.
    pub fn shifted(&self, k: i32) -> Self {
        Series {
            params: self.params,
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    pub fn scale(&self, c: QuadExtElem) -> Self {
        let p = self.params;
        let mut s = Series {
            params: p,
            val: self.val,
            coeffs: self.coeffs.iter().map(|&x| p.mul(x, c)).collect(),
            prec: self.prec,
        };
        s.normalize();
        s
    }

    /// Coefficient-wise Frobenius; a ring automorphism of K fixing F.
    pub fn frobenius(&self) -> Self {
        let p = self.params;
        Series {
            params: p,
            val: self.val,
            coeffs: self.coeffs.iter().map(|&x| p.frobenius(x)).collect(),
            prec: self.prec,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::InversionOfZero);
        }
        let p = self.params;
        let n = self.coeffs.len();
        let u0_inv = p.inv(self.coeffs[0])?;
        let mut w = Vec::with_capacity(n);
        w.push(u0_inv);
        for k in 1..n {
            let mut acc = QuadExtElem::ZERO;
            for i in 1..=k {
                acc = p.add(acc, p.mul(self.coeffs[i], w[k - i]));
            }
            w.push(p.neg(p.mul(u0_inv, acc)));
        }
        Ok(Series {
            params: p,
            val: -self.val,
            coeffs: w,
            prec: -self.val + n as i32,
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Series::one(self.params);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Equality of the two values modulo the coarser precision.
    pub fn eq_to_precision(&self, other: &Series) -> bool {
        (self - other).is_zero_to_precision()
    }

    fn combine(&self, other: &Series, negate_other: bool) -> Series {
        let p = self.params;
        debug_assert_eq!(p.q, other.params.q);
        let prec = min(self.prec, other.prec);
        let lo = min(min(self.val, other.val), prec);
        let mut coeffs = Vec::with_capacity((prec - lo) as usize);
        for e in lo..prec {
            let x = self.coeff(e).unwrap_or_default();
            let mut y = other.coeff(e).unwrap_or_default();
            if negate_other {
                y = p.neg(y);
            }
            coeffs.push(p.add(x, y));
        }
        let mut s = Series {
            params: p,
            val: lo,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    fn product(&self, other: &Series) -> Series {
        let p = self.params;
        debug_assert_eq!(p.q, other.params.q);
        let val = self.val + other.val;
        let prec = min(self.prec + other.val, other.prec + self.val);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Series::zero_to(p, prec);
        }
        let len = max(prec - val, 0) as usize;
        let mut coeffs = vec![QuadExtElem::ZERO; len];
        for (i, &x) in self.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = p.add(coeffs[i + j], p.mul(x, y));
            }
        }
        let mut s = Series {
            params: p,
            val,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    /// Parse `shift:c0+d0*j,c1+d1*j,...` (see [`Series::to_literal`]).
    pub fn parse(params: FieldParams, literal: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            literal: literal.to_string(),
            reason: reason.to_string(),
        };
        let (shift, body) = literal.trim().split_once(':').ok_or_else(|| err("missing `shift:`"))?;
        let shift: i32 = shift.trim().parse().map_err(|_| err("shift is not an integer"))?;
        let mut digits = Vec::new();
        for term in body.split(',') {
            digits.push(parse_coeff(params, term.trim()).ok_or_else(|| err("bad coefficient"))?);
        }
        let prec = max(params.precision, shift + digits.len() as i32);
        Ok(Series::from_digits(params, shift, &digits, prec))
    }

    /// Literal with digits up to the last nonzero one; `0:0` for zero.
    pub fn to_literal(&self) -> String {
        if self.coeffs.is_empty() {
            return "0:0".to_string();
        }
        let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        let body: Vec<String> = self.coeffs[..=last].iter().map(coeff_literal).collect();
        format!("{}:{}", self.val, body.join(","))
    }
}

fn coeff_literal(c: &QuadExtElem) -> String {
    if c.d == 0 {
        c.c.to_string()
    } else {
        format!("{}+{}*j", c.c, c.d)
    }
}

fn parse_coeff(params: FieldParams, term: &str) -> Option<QuadExtElem> {
    let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
    if term.is_empty() {
        return None;
    }
    let mut c: i64 = 0;
    let mut d: i64 = 0;
    for part in term.split('+') {
        if part.is_empty() {
            return None;
        }
        if let Some(coef) = part.strip_suffix('j') {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            d += if coef.is_empty() { 1 } else { coef.parse::<i64>().ok()? };
        } else {
            c += part.parse::<i64>().ok()?;
        }
    }
    Some(params.elem(c, d))
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &'a Series) -> Series {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &'a Series) -> Series {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &'a Series) -> Series {
        self.product(rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        let p = self.params;
        Series {
            params: p,
            val: self.val,
            coeffs: self.coeffs.iter().map(|&x| p.neg(x)).collect(),
            prec: self.prec,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add, Series);
forward_owned!(Sub, sub, Series);
forward_owned!(Mul, mul, Series);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldParams {
        FieldParams::new(3, 8).unwrap()
    }

    #[test]
    fn params_guard_modulus_and_nonresidue() {
        assert_eq!(FieldParams::new(9, 8), Err(Error::InvalidModulus(9)));
        assert_eq!(FieldParams::new(2, 8), Err(Error::InvalidModulus(2)));
        assert_eq!(
            FieldParams::with_nonresidue(5, 4, 8),
            Err(Error::NotNonResidue { q: 5, nu: 4 })
        );
        assert_eq!(FieldParams::new(3, 1), Err(Error::PrecisionTooSmall(1)));
        assert_eq!(FieldParams::new(3, 8).unwrap().nonresidue(), 2);
        assert_eq!(FieldParams::new(7, 8).unwrap().nonresidue(), 3);
    }

    #[test]
    fn residue_field_axioms() {
        let p = FieldParams::new(5, 4).unwrap();
        for x in p.quad_field() {
            assert_eq!(p.frobenius(p.frobenius(x)), x);
            if !x.is_zero() {
                assert_eq!(p.mul(x, p.inv(x).unwrap()), QuadExtElem::ONE);
            }
            for y in p.quad_field() {
                assert_eq!(
                    p.frobenius(p.mul(x, y)),
                    p.mul(p.frobenius(x), p.frobenius(y))
                );
            }
        }
        // δ² = ν
        assert_eq!(p.mul(QuadExtElem::DELTA, QuadExtElem::DELTA), p.elem(p.nonresidue() as i64, 0));
        let fixed: Vec<_> = p.quad_field().into_iter().filter(|&x| p.frobenius(x) == x).collect();
        assert_eq!(fixed, p.prime_field());
    }

    #[test]
    fn one_plus_one_in_f3() {
        let p = f3();
        let two = Series::one(p) + Series::one(p);
        assert_eq!(two.coeff(0), Some(p.elem(2, 0)));
        assert_eq!(two.valuation(), Valuation::Exact(0));
    }

    #[test]
    fn inverse_of_uniformizer() {
        let p = f3();
        let inv = Series::pi_power(p, 1).inv().unwrap();
        assert_eq!(inv.valuation(), Valuation::Exact(-1));
        assert_eq!(inv.coeff(-1), Some(QuadExtElem::ONE));
        assert!((inv * Series::pi_power(p, 1)).eq_to_precision(&Series::one(p)));
    }

    #[test]
    fn difference_of_squares() {
        let p = f3();
        let pi = Series::pi_power(p, 1);
        let one = Series::one(p);
        let prod = (&one + &pi) * (&one - &pi);
        let expected = &one - &pi.pow(2);
        assert!(prod.eq_to_precision(&expected));
        assert_eq!(prod.precision(), 8);
    }

    #[test]
    fn valuation_sentinel_and_positional_digits() {
        let p = f3();
        assert_eq!(Series::pi_power(p, 2).valuation(), Valuation::Exact(2));
        assert_eq!(Series::zero(p).valuation(), Valuation::AtLeast(8));
        // 3 ≡ 0 in F_3: the constant 3 vanishes, while the series π keeps valuation 1.
        assert_eq!(Series::from_int(p, 3).valuation(), Valuation::AtLeast(8));
        assert_eq!(Series::parse(p, "1:1").unwrap().valuation(), Valuation::Exact(1));
    }

    #[test]
    fn inverting_zero_fails() {
        assert_eq!(Series::zero(f3()).inv(), Err(Error::InversionOfZero));
    }

    #[test]
    fn frobenius_examples() {
        let p = f3();
        let d = Series::delta(p);
        assert!(d.frobenius().eq_to_precision(&-&d));
        let x = Series::parse(p, "0:1,0+1*j").unwrap();
        let y = Series::parse(p, "0:1,0+2*j").unwrap();
        assert!(x.frobenius().eq_to_precision(&y));
    }

    #[test]
    fn precision_bookkeeping() {
        let p = f3();
        let x = Series::parse(p, "1:1,2").unwrap();
        let inv = x.inv().unwrap();
        // relative precision 7 from val 1 prec 8; inverse has val -1
        assert_eq!(inv.precision(), 6);
        let y = Series::one(p).truncate(3);
        assert_eq!((&y + &x).precision(), 3);
        // product precision: min(pa + vb, pb + va)
        assert_eq!((&y * &x).precision(), 4);
    }

    #[test]
    fn literal_grammar() {
        let p = f3();
        let s = Series::parse(p, "0:1+0*j,0+1*j").unwrap();
        assert_eq!(s.coeff(0), Some(QuadExtElem::ONE));
        assert_eq!(s.coeff(1), Some(QuadExtElem::DELTA));
        assert_eq!(s.to_literal(), "0:1,0+1*j");
        assert_eq!(Series::parse(p, "-2: 2, j, 1+2j").unwrap().to_literal(), "-2:2,0+1*j,1+2*j");
        assert!(Series::parse(p, "nope").is_err());
        assert!(Series::parse(p, "0:1,,2").is_err());
        assert!(Series::parse(p, "x:1").is_err());
    }
}
