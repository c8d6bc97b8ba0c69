//! The quaternion division algebra D = K_unr ⊕ K_unr·Π over F, with Π² = π and
//! Π u = ū Π, together with the quadratic orders O = O_F + π^s O_K.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigRational;

use crate::error::{Error, Result};
use crate::field::{FieldParams, QuadExtElem, Series, Valuation};
use crate::value::{q_pow, rat_int};

/// a + bΠ with a, b ∈ F_{q²}((π)).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuatElem {
    pub a: Series,
    pub b: Series,
}

impl QuatElem {
    pub fn new(a: Series, b: Series) -> Self {
        QuatElem { a, b }
    }

    pub fn from_series(a: Series) -> Self {
        let b = Series::zero_to(a.params(), a.precision());
        QuatElem { a, b }
    }

    pub fn zero(p: FieldParams) -> Self {
        QuatElem::new(Series::zero(p), Series::zero(p))
    }

    pub fn one(p: FieldParams) -> Self {
        QuatElem::from_series(Series::one(p))
    }

    pub fn from_int(p: FieldParams, n: i64) -> Self {
        QuatElem::from_series(Series::from_int(p, n))
    }

    pub fn delta(p: FieldParams) -> Self {
        QuatElem::from_series(Series::delta(p))
    }

    pub fn constant(p: FieldParams, c: QuadExtElem) -> Self {
        QuatElem::from_series(Series::constant(p, c))
    }

    /// The uniformizer Π of O_D.
    pub fn pi_d(p: FieldParams) -> Self {
        QuatElem::new(Series::zero(p), Series::one(p))
    }

    /// Π^e for any integer e, kept at full relative precision.
    pub fn pi_d_power(p: FieldParams, e: i32) -> Self {
        let half = e.div_euclid(2);
        if e.rem_euclid(2) == 0 {
            QuatElem::from_series(Series::pi_power(p, half))
        } else {
            let b = Series::pi_power(p, half);
            QuatElem::new(Series::zero_to(p, b.precision() + 1), b)
        }
    }

    pub fn params(&self) -> FieldParams {
        self.a.params()
    }

    /// v_D(a + bΠ) = min(2 val a, 2 val b + 1).
    pub fn v_d(&self) -> Valuation {
        let va = match self.a.valuation() {
            Valuation::Exact(v) => Valuation::Exact(2 * v),
            Valuation::AtLeast(v) => Valuation::AtLeast(2 * v),
        };
        let vb = match self.b.valuation() {
            Valuation::Exact(v) => Valuation::Exact(2 * v + 1),
            Valuation::AtLeast(v) => Valuation::AtLeast(2 * v + 1),
        };
        Valuation::min_of_separated(va, vb)
    }

    /// |x|_D = q^(−v_D); zero when x vanishes to precision.
    pub fn abs_d(&self) -> BigRational {
        match self.v_d() {
            Valuation::Exact(v) => q_pow(self.params().q(), -(v as i64)),
            Valuation::AtLeast(_) => rat_int(0),
        }
    }

    /// The v_D-precision: x is known modulo Π^(this).
    pub fn precision_d(&self) -> i32 {
        (2 * self.a.precision()).min(2 * self.b.precision() + 1)
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.a.is_zero_to_precision() && self.b.is_zero_to_precision()
    }

    pub fn eq_to_precision(&self, other: &QuatElem) -> bool {
        (self - other).is_zero_to_precision()
    }

    /// x̄ = ā − bΠ.
    pub fn main_involution(&self) -> QuatElem {
        QuatElem::new(self.a.frobenius(), -&self.b)
    }

    /// x·x̄ = aā − π b b̄, an element of F.
    pub fn reduced_norm(&self) -> Series {
        let aa = &self.a * &self.a.frobenius();
        let bb = (&self.b * &self.b.frobenius()).shifted(1);
        aa - bb
    }

    pub fn inv(&self) -> Result<QuatElem> {
        let n = self.reduced_norm();
        let n_inv = n.inv()?;
        let bar = self.main_involution();
        Ok(QuatElem::new(&bar.a * &n_inv, &bar.b * &n_inv))
    }

    /// Left multiplication by a central element of F (or any element of K_unr).
    pub fn scale_left(&self, c: &Series) -> QuatElem {
        // c(a + bΠ) = ca + cbΠ
        QuatElem::new(c * &self.a, c * &self.b)
    }

    pub fn truncate_d(&self, prec_d: i32) -> QuatElem {
        // Π-adic precision prec_d: a to ceil(prec_d/2), b to floor(prec_d/2).
        let pa = (prec_d + 1).div_euclid(2);
        let pb = prec_d.div_euclid(2);
        QuatElem::new(self.a.truncate(pa), self.b.truncate(pb))
    }

    pub fn pow(&self, k: u32) -> QuatElem {
        let mut acc = QuatElem::one(self.params());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Parse `a=<series>;b=<series>`; a missing component is zero.
    pub fn parse(params: FieldParams, literal: &str) -> Result<QuatElem> {
        let err = |reason: &str| Error::Parse {
            literal: literal.to_string(),
            reason: reason.to_string(),
        };
        let mut a = None;
        let mut b = None;
        for part in literal.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| err("expected `a=` or `b=`"))?;
            let s = Series::parse(params, val)?;
            match key.trim() {
                "a" if a.is_none() => a = Some(s),
                "b" if b.is_none() => b = Some(s),
                "a" | "b" => return Err(err("component given twice")),
                _ => return Err(err("unknown component")),
            }
        }
        if a.is_none() && b.is_none() {
            return Err(err("empty literal"));
        }
        Ok(QuatElem::new(
            a.unwrap_or_else(|| Series::zero(params)),
            b.unwrap_or_else(|| Series::zero(params)),
        ))
    }

    pub fn to_literal(&self) -> String {
        format!("a={};b={}", self.a.to_literal(), self.b.to_literal())
    }
}

impl fmt::Display for QuatElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl<'a> Add<&'a QuatElem> for &'a QuatElem {
    type Output = QuatElem;
    fn add(self, rhs: &'a QuatElem) -> QuatElem {
        QuatElem::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a QuatElem> for &'a QuatElem {
    type Output = QuatElem;
    fn sub(self, rhs: &'a QuatElem) -> QuatElem {
        QuatElem::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a QuatElem> for &'a QuatElem {
    type Output = QuatElem;
    fn mul(self, rhs: &'a QuatElem) -> QuatElem {
        // (a + bΠ)(c + dΠ) = (ac + π b d̄) + (ad + b c̄)Π
        let ac = &self.a * &rhs.a;
        let bd = (&self.b * &rhs.b.frobenius()).shifted(1);
        let ad = &self.a * &rhs.b;
        let bc = &self.b * &rhs.a.frobenius();
        QuatElem::new(ac + bd, ad + bc)
    }
}

impl Neg for &QuatElem {
    type Output = QuatElem;
    fn neg(self) -> QuatElem {
        QuatElem::new(-&self.a, -&self.b)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QuatElem> for QuatElem {
            type Output = QuatElem;
            fn $m(self, rhs: QuatElem) -> QuatElem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuatElem> for QuatElem {
            type Output = QuatElem;
            fn $m(self, rhs: &'a QuatElem) -> QuatElem {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuatElem {
    type Output = QuatElem;
    fn neg(self) -> QuatElem {
        -&self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtCase {
    Unramified,
    Ramified,
}

impl ExtCase {
    pub fn name(self) -> &'static str {
        match self {
            ExtCase::Unramified => "unramified",
            ExtCase::Ramified => "ramified",
        }
    }

    /// Residue cardinality q_K of K.
    pub fn residue_cardinality(self, q: u32) -> u64 {
        match self {
            ExtCase::Unramified => q as u64 * q as u64,
            ExtCase::Ramified => q as u64,
        }
    }

    /// |Δ_{K/F}|_F.
    pub fn discriminant_abs(self, q: u32) -> BigRational {
        match self {
            ExtCase::Unramified => rat_int(1),
            ExtCase::Ramified => q_pow(q, -1),
        }
    }
}

impl std::str::FromStr for ExtCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unramified" | "unram" | "u" => Ok(ExtCase::Unramified),
            "ramified" | "ram" | "r" => Ok(ExtCase::Ramified),
            _ => Err(Error::Parse {
                literal: s.to_string(),
                reason: "expected `unramified` or `ramified`".to_string(),
            }),
        }
    }
}

/// Unit ζ with ζ̄ ≠ ζ used for the unramified generator μ = π^s ζ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Zeta {
    #[default]
    Delta,
    OnePlusDelta,
}

impl Zeta {
    pub fn residue(self) -> QuadExtElem {
        match self {
            Zeta::Delta => QuadExtElem::DELTA,
            Zeta::OnePlusDelta => QuadExtElem { c: 1, d: 1 },
        }
    }
}

/// The order O = O_F + π^s O_K for K = F(δ) (unramified) or F(Π) (ramified).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderSpec {
    pub case: ExtCase,
    pub level: u32,
    pub zeta: Zeta,
}

/// Extra precision carried by μ so that it never limits a computation.
const MU_GUARD: i32 = 8;

impl OrderSpec {
    pub fn new(case: ExtCase, level: u32) -> Self {
        OrderSpec {
            case,
            level,
            zeta: Zeta::Delta,
        }
    }

    pub fn unramified(level: u32) -> Self {
        Self::new(ExtCase::Unramified, level)
    }

    pub fn ramified(level: u32) -> Self {
        Self::new(ExtCase::Ramified, level)
    }

    pub fn with_zeta(mut self, zeta: Zeta) -> Self {
        self.zeta = zeta;
        self
    }

    /// The maximal order O_K of the same extension.
    pub fn maximal(&self) -> OrderSpec {
        OrderSpec { level: 0, ..*self }
    }

    fn mu_params(&self, p: FieldParams) -> FieldParams {
        p.with_precision(p.precision() + 2 * self.level as i32 + MU_GUARD)
            .expect("raising precision keeps parameters valid")
    }

    pub fn mu(&self, p: FieldParams) -> QuatElem {
        let hp = self.mu_params(p);
        let s = self.level as i32;
        match self.case {
            ExtCase::Unramified => {
                QuatElem::from_series(Series::pi_power(hp, s).scale(self.zeta.residue()))
            }
            ExtCase::Ramified => QuatElem::pi_d_power(hp, 2 * s + 1),
        }
    }

    /// Image of μ under the main involution; μ̄ = −μ in the ramified case.
    pub fn mu_bar(&self, p: FieldParams) -> QuatElem {
        self.mu(p).main_involution()
    }

    /// v_D(μ): 2s unramified, 2s + 1 ramified.
    pub fn v_mu(&self) -> i32 {
        match self.case {
            ExtCase::Unramified => 2 * self.level as i32,
            ExtCase::Ramified => 2 * self.level as i32 + 1,
        }
    }

    /// [O_K^× : O^×] in closed form.
    pub fn index(&self, q: u32) -> u64 {
        let q = q as u64;
        let s = self.level;
        match (self.case, s) {
            (ExtCase::Unramified, 0) => 1,
            (ExtCase::Unramified, _) => (q + 1) * q.pow(s - 1),
            (ExtCase::Ramified, _) => q.pow(s),
        }
    }

    /// [O_K : O^×] = Vol(O_K)/Vol(O^×) with dk^× normalized by O_K^×.
    pub fn additive_index(&self, q: u32) -> BigRational {
        let qk = self.case.residue_cardinality(q) as i64;
        rat_int(self.index(q) as i64) * BigRational::new(qk.into(), (qk - 1).into())
    }

    /// π-adic level (π-digits unramified, Π-digits ramified) at which O_K
    /// residues separate the cosets of O^×.
    pub fn separating_level(&self) -> u32 {
        match self.case {
            ExtCase::Unramified => self.level + 1,
            ExtCase::Ramified => 2 * self.level + 1,
        }
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} s={}", self.case.name(), self.level)
    }
}

/// Membership of γ in O = O_F + π^s O_K, decided from known digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    InUnitGroup,
    InOrder,
    Outside,
    Unresolved,
}

/// How many digits of `x` at exponents `[lo, hi)` are known; `None` when some
/// of them lie at or beyond the precision.
fn digits(x: &Series, lo: i32, hi: i32) -> Option<Vec<QuadExtElem>> {
    (lo..hi).map(|e| x.coeff(e)).collect()
}

fn has_negative_part(x: &Series) -> bool {
    matches!(x.valuation(), Valuation::Exact(v) if v < 0)
}

pub fn is_in_order(gamma: &QuatElem, ord: &OrderSpec) -> Membership {
    let s = ord.level as i32;
    let (a, b) = (&gamma.a, &gamma.b);
    if has_negative_part(a) || has_negative_part(b) {
        return Membership::Outside;
    }
    let unit = |a: &Series| match a.coeff(0) {
        Some(c) if !c.is_zero() => Membership::InUnitGroup,
        Some(_) => Membership::InOrder,
        None => Membership::Unresolved,
    };
    match ord.case {
        ExtCase::Unramified => {
            // b must vanish, and the first s digits of a must be F-rational.
            if !b.is_zero_to_precision() {
                return Membership::Outside;
            }
            match digits(a, 0, s) {
                Some(ds) if ds.iter().all(QuadExtElem::is_rational) => unit(a),
                Some(_) => Membership::Outside,
                None => {
                    if a.coeffs().iter().any(|c| !c.is_rational()) {
                        Membership::Outside
                    } else {
                        Membership::Unresolved
                    }
                }
            }
        }
        ExtCase::Ramified => {
            // a, b ∈ O_F with b ∈ π^s O_F.
            if !a.is_rational() || !b.is_rational() {
                return Membership::Outside;
            }
            match digits(b, 0, s) {
                Some(ds) if ds.iter().all(QuadExtElem::is_zero) => unit(a),
                Some(_) => Membership::Outside,
                None => {
                    if b.coeffs().iter().any(|c| !c.is_zero()) {
                        Membership::Outside
                    } else {
                        Membership::Unresolved
                    }
                }
            }
        }
    }
}

/// γ = γ₊ + γ₋ with γ₊μ = μγ₊ and γ₋μ = μ̄γ₋, via γ₋ = (μ̄ − μ)⁻¹(γμ − μγ).
pub fn pm_decompose(gamma: &QuatElem, ord: &OrderSpec) -> Result<(QuatElem, QuatElem)> {
    let p = gamma.params();
    let mu = ord.mu(p);
    let diff = &ord.mu_bar(p) - &mu;
    let comm = &(gamma * &mu) - &(&mu * gamma);
    let minus = &diff.inv()? * &comm;
    let plus = gamma - &minus;
    Ok((plus, minus))
}

/// γ ∈ O_D^× ∩ (D⁺ ∪ D⁻), i.e. γ normalizes O_K^×.
pub fn is_normalizer_element(gamma: &QuatElem, ord: &OrderSpec) -> Result<bool> {
    if gamma.v_d() != Valuation::Exact(0) {
        return Err(Error::NotUnit);
    }
    let (plus, minus) = pm_decompose(gamma, ord)?;
    Ok(plus.is_zero_to_precision() || minus.is_zero_to_precision())
}

/// σ ∈ O_D^× ∩ D⁻ for the ramified embedding: σ = δ.
pub fn sigma_element(p: FieldParams, ord: &OrderSpec) -> Result<QuatElem> {
    match ord.case {
        ExtCase::Ramified => Ok(QuatElem::delta(p)),
        ExtCase::Unramified => Err(Error::WrongCase { expected: "ramified" }),
    }
}

/// 2×2 matrices over D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub m: [[QuatElem; 2]; 2],
}

pub type Mat2D = Mat2;

impl Mat2 {
    pub fn new(m11: QuatElem, m12: QuatElem, m21: QuatElem, m22: QuatElem) -> Self {
        Mat2 {
            m: [[m11, m12], [m21, m22]],
        }
    }

    pub fn identity(p: FieldParams) -> Self {
        Mat2::new(QuatElem::one(p), QuatElem::zero(p), QuatElem::zero(p), QuatElem::one(p))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &(&self.m[i][0] * &o.m[0][j]) + &(&self.m[i][1] * &o.m[1][j]);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn eq_to_precision(&self, o: &Mat2) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.m[i][j].eq_to_precision(&o.m[i][j])))
    }

    /// [[1, 1], [x, y]].
    pub fn eigen_frame(x: &QuatElem, y: &QuatElem) -> Mat2 {
        let p = x.params();
        Mat2::new(QuatElem::one(p), QuatElem::one(p), x.clone(), y.clone())
    }

    /// Inverse of [[1, 1], [μ, μ̄]]: (μ̄ − μ)⁻¹ [[μ̄, −1], [−μ, 1]].
    pub fn eigen_frame_inverse(mu: &QuatElem, mu_bar: &QuatElem) -> Result<Mat2> {
        let c = (mu_bar - mu).inv()?;
        Ok(Mat2::new(&c * mu_bar, -&c, -(&c * mu), c.clone()))
    }
}

/// [O_K^× : O^×] by explicit coset enumeration in O_K^× / (1 + π_K^m O_K).
pub fn index_of_order(p: FieldParams, ord: &OrderSpec) -> Result<u64> {
    index_of_order_at(p, ord, ord.separating_level())
}

/// Coset enumeration at an explicit level m (must be at least the separating
/// level; any such level gives the same count).
pub fn index_of_order_at(p: FieldParams, ord: &OrderSpec, m: u32) -> Result<u64> {
    Ok(coset_representatives_at(p, ord, m)?.len() as u64)
}

/// Representatives of O_K^× / O^×: the residues of O^× modulo π_K^m are found
/// with the membership test, then each new class k·O^× is marked off whole.
pub fn coset_representatives(p: FieldParams, ord: &OrderSpec) -> Result<Vec<QuatElem>> {
    coset_representatives_at(p, ord, ord.separating_level())
}

pub fn coset_representatives_at(p: FieldParams, ord: &OrderSpec, m: u32) -> Result<Vec<QuatElem>> {
    const BUDGET: u128 = 20_000_000;
    let wp = p.with_precision(p.precision().max(m as i32 + 3))?;
    let prec_d = level_to_prec_d(ord.case, m);
    let units = unit_residues(wp, ord.case, m);
    if units.len() as u128 > BUDGET {
        return Err(Error::BudgetExceeded {
            size: units.len() as u128,
            budget: BUDGET,
        });
    }
    let key = |x: &QuatElem| x.truncate_d(prec_d).to_literal();
    let subgroup: Vec<&QuatElem> = units
        .iter()
        .filter(|k| matches!(is_in_order(&k.truncate_d(prec_d), ord), Membership::InUnitGroup))
        .collect();
    let mut seen = std::collections::HashSet::with_capacity(units.len());
    let mut reps: Vec<QuatElem> = Vec::new();
    for k in &units {
        if seen.contains(&key(k)) {
            continue;
        }
        for h in &subgroup {
            seen.insert(key(&(k * *h)));
        }
        reps.push(k.clone());
    }
    Ok(reps)
}

fn level_to_prec_d(case: ExtCase, m: u32) -> i32 {
    match case {
        ExtCase::Unramified => 2 * m as i32,
        ExtCase::Ramified => m as i32,
    }
}

/// All residues of O_K^× modulo π_K^m as exact elements.
fn unit_residues(p: FieldParams, case: ExtCase, m: u32) -> Vec<QuatElem> {
    let digit_sets: Vec<Vec<QuadExtElem>> = (0..m)
        .map(|j| {
            let all = match case {
                ExtCase::Unramified => p.quad_field(),
                ExtCase::Ramified => p.prime_field(),
            };
            if j == 0 {
                all.into_iter().filter(|c| !c.is_zero()).collect()
            } else {
                all
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; m as usize];
    loop {
        let ds: Vec<QuadExtElem> = idx.iter().enumerate().map(|(j, &i)| digit_sets[j][i]).collect();
        out.push(element_from_digits(p, case, &ds));
        // odometer
        let mut j = 0;
        loop {
            if j == idx.len() {
                return out;
            }
            idx[j] += 1;
            if idx[j] < digit_sets[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Σ c_j π^j (unramified, c_j ∈ F_{q²}) or Σ c_j Π^j (ramified, c_j ∈ F_q).
pub fn element_from_digits(p: FieldParams, case: ExtCase, ds: &[QuadExtElem]) -> QuatElem {
    let prec = p.precision();
    match case {
        ExtCase::Unramified => QuatElem::from_series(Series::from_digits(p, 0, ds, prec)),
        ExtCase::Ramified => {
            let even: Vec<_> = ds.iter().step_by(2).copied().collect();
            let odd: Vec<_> = ds.iter().skip(1).step_by(2).copied().collect();
            QuatElem::new(
                Series::from_digits(p, 0, &even, prec),
                Series::from_digits(p, 0, &odd, prec),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> FieldParams {
        FieldParams::new(3, 10).unwrap()
    }

    fn q(lit: &str) -> QuatElem {
        QuatElem::parse(p3(), lit).unwrap()
    }

    #[test]
    fn twist_rule() {
        let p = p3();
        let pi_d = QuatElem::pi_d(p);
        let delta = QuatElem::delta(p);
        let lhs = &pi_d * &delta;
        let rhs = -(&delta * &pi_d);
        assert!(lhs.eq_to_precision(&rhs));
        assert!((&pi_d * &pi_d).eq_to_precision(&QuatElem::from_series(Series::pi_power(p, 1))));
    }

    #[test]
    fn inverse_of_uniformizer() {
        let p = p3();
        let inv = QuatElem::pi_d(p).inv().unwrap();
        let expected = QuatElem::new(Series::zero(p), Series::pi_power(p, -1));
        assert!(inv.eq_to_precision(&expected));
        assert!((&inv * &QuatElem::pi_d(p)).eq_to_precision(&QuatElem::one(p)));
    }

    #[test]
    fn valuations() {
        let p = p3();
        assert_eq!(QuatElem::from_series(Series::pi_power(p, 1)).v_d(), Valuation::Exact(2));
        assert_eq!(QuatElem::pi_d(p).v_d(), Valuation::Exact(1));
        assert_eq!(q("a=0:0+1*j;b=0:1").v_d(), Valuation::Exact(0));
        assert_eq!(QuatElem::zero(p).v_d(), Valuation::AtLeast(20));
    }

    #[test]
    fn involution_and_norm() {
        let p = p3();
        let x = q("a=0:1;b=0:1");
        let n = &x * &x.main_involution();
        assert!(n.b.is_zero_to_precision());
        let one_minus_pi = Series::one(p) - Series::pi_power(p, 1);
        assert!(n.a.eq_to_precision(&one_minus_pi));
        assert!(QuatElem::delta(p).main_involution().eq_to_precision(&-QuatElem::delta(p)));
        assert!(QuatElem::pi_d(p).main_involution().eq_to_precision(&-QuatElem::pi_d(p)));
    }

    #[test]
    fn decomposition_examples() {
        let p = p3();
        for s in 0..3 {
            let ord = OrderSpec::unramified(s);
            let (plus, minus) = pm_decompose(&q("a=0:0+1*j;b=0:1"), &ord).unwrap();
            assert!(plus.eq_to_precision(&QuatElem::delta(p)));
            assert!(minus.eq_to_precision(&QuatElem::pi_d(p)));

            let mu = ord.mu(p);
            let (plus, minus) = pm_decompose(&mu, &ord).unwrap();
            assert!(plus.eq_to_precision(&mu));
            assert!(minus.is_zero_to_precision());
        }
        let ord = OrderSpec::ramified(1);
        let f = q("a=0:2,1,1;b=0:0");
        let (plus, minus) = pm_decompose(&f, &ord).unwrap();
        assert!(plus.eq_to_precision(&f));
        assert!(minus.is_zero_to_precision());
    }

    #[test]
    fn membership_examples() {
        let p = p3();
        for ord in [OrderSpec::unramified(0), OrderSpec::unramified(2), OrderSpec::ramified(1)] {
            assert_eq!(is_in_order(&QuatElem::one(p), &ord), Membership::InUnitGroup);
        }
        assert_eq!(is_in_order(&QuatElem::delta(p), &OrderSpec::unramified(1)), Membership::Outside);
        assert_eq!(is_in_order(&q("a=0:1,0+1*j"), &OrderSpec::unramified(1)), Membership::InUnitGroup);
        assert_eq!(is_in_order(&q("a=0:1,0+1*j"), &OrderSpec::unramified(2)), Membership::Outside);
        assert_eq!(is_in_order(&q("a=0:0,1"), &OrderSpec::unramified(1)), Membership::InOrder);
        assert_eq!(is_in_order(&q("a=0:1;b=0:0,1"), &OrderSpec::ramified(1)), Membership::InUnitGroup);
        assert_eq!(is_in_order(&q("a=0:1;b=0:1"), &OrderSpec::ramified(1)), Membership::Outside);
        assert_eq!(is_in_order(&QuatElem::pi_d(p), &OrderSpec::ramified(0)), Membership::InOrder);
        // level beyond the known digits
        let short = FieldParams::new(3, 2).unwrap();
        assert_eq!(
            is_in_order(&QuatElem::one(short), &OrderSpec::unramified(5)),
            Membership::Unresolved
        );
    }

    #[test]
    fn normalizer_examples() {
        let p = p3();
        assert!(is_normalizer_element(&QuatElem::delta(p), &OrderSpec::unramified(1)).unwrap());
        assert!(is_normalizer_element(&QuatElem::delta(p), &OrderSpec::ramified(0)).unwrap());
        assert!(!is_normalizer_element(&q("a=0:1+1*j;b=0:1"), &OrderSpec::unramified(0)).unwrap());
        assert!(!is_normalizer_element(&q("a=0:1+1*j;b=0:1"), &OrderSpec::ramified(1)).unwrap());
        assert_eq!(
            is_normalizer_element(&QuatElem::pi_d(p), &OrderSpec::ramified(0)),
            Err(Error::NotUnit)
        );
    }

    #[test]
    fn sigma_anticommutes_with_mu() {
        let p = p3();
        for s in 0..3 {
            let ord = OrderSpec::ramified(s);
            let sigma = sigma_element(p, &ord).unwrap();
            assert!(sigma.eq_to_precision(&QuatElem::delta(p)));
            let mu = ord.mu(p);
            assert!((&sigma * &mu).eq_to_precision(&(&ord.mu_bar(p) * &sigma)));
        }
        assert_eq!(
            sigma_element(p, &OrderSpec::unramified(1)),
            Err(Error::WrongCase { expected: "ramified" })
        );
    }

    #[test]
    fn mu_data() {
        let p = p3();
        let ord = OrderSpec::ramified(2);
        assert_eq!(ord.mu(p).v_d(), Valuation::Exact(5));
        assert!(ord.mu_bar(p).eq_to_precision(&-ord.mu(p)));
        let ord = OrderSpec::unramified(2);
        assert_eq!(ord.mu(p).v_d(), Valuation::Exact(4));
        assert!(!ord.mu_bar(p).eq_to_precision(&ord.mu(p)));
    }

    #[test]
    fn index_by_enumeration() {
        let p = p3();
        assert_eq!(index_of_order(p, &OrderSpec::unramified(0)).unwrap(), 1);
        assert_eq!(index_of_order(p, &OrderSpec::unramified(1)).unwrap(), 4);
        assert_eq!(index_of_order(p, &OrderSpec::ramified(2)).unwrap(), 9);
        for s in 0..3 {
            for ord in [OrderSpec::unramified(s), OrderSpec::ramified(s)] {
                let m = ord.separating_level();
                let direct = index_of_order(p, &ord).unwrap();
                assert_eq!(direct, ord.index(3), "{ord}");
                assert_eq!(index_of_order_at(p, &ord, m + 1).unwrap(), direct, "{ord}");
            }
        }
        let p5 = FieldParams::new(5, 8).unwrap();
        for ord in [OrderSpec::unramified(1), OrderSpec::unramified(2), OrderSpec::ramified(1)] {
            assert_eq!(index_of_order(p5, &ord).unwrap(), ord.index(5), "{ord}");
        }
    }

    #[test]
    fn zeta_choice_does_not_change_index_or_eigenspaces() {
        let p = p3();
        for s in 0..3 {
            let a = OrderSpec::unramified(s);
            let b = a.with_zeta(Zeta::OnePlusDelta);
            assert_eq!(index_of_order(p, &b).unwrap(), index_of_order(p, &a).unwrap());
            let g = q("a=0:1+1*j,2;b=0:1,1+2*j");
            let (pa, ma) = pm_decompose(&g, &a).unwrap();
            let (pb, mb) = pm_decompose(&g, &b).unwrap();
            assert!(pa.eq_to_precision(&pb));
            assert!(ma.eq_to_precision(&mb));
        }
    }

    #[test]
    fn eigen_frame_inverse() {
        let p = p3();
        for ord in [OrderSpec::unramified(0), OrderSpec::unramified(2), OrderSpec::ramified(1)] {
            let (mu, mb) = (ord.mu(p), ord.mu_bar(p));
            let m = Mat2::eigen_frame(&mu, &mb);
            let inv = Mat2::eigen_frame_inverse(&mu, &mb).unwrap();
            assert!(m.mul(&inv).eq_to_precision(&Mat2::identity(p)));
            assert!(inv.mul(&m).eq_to_precision(&Mat2::identity(p)));
        }
    }

    #[test]
    fn literal_round_trip() {
        let x = q("a=0:1,0+1*j;b=-1:2");
        assert_eq!(x.to_literal(), "a=0:1,0+1*j;b=-1:2");
        assert_eq!(q("b=0:1"), QuatElem::pi_d(p3()));
        assert!(QuatElem::parse(p3(), "c=0:1").is_err());
        assert!(QuatElem::parse(p3(), "").is_err());
        assert!(QuatElem::parse(p3(), "a=0:1;a=0:1").is_err());
    }
}
