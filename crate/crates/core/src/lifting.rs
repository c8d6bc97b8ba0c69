//! Lifting depths v_x, v_y, v_z, v_ā, the pairing ⟨y₁, y₂⟩, and the raw GL₂
//! integrals they are derived from.

use std::collections::BTreeMap;

use num::{BigRational, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldParams, QuadExtElem, Series, Valuation};
use crate::haar::{check_gl2_budget, gl2_order, integrate_auto, vol_gamma, vol_omega, DigitDomain, Integrand,
    IntegralResult, MeasureSpace};
use crate::quaternion::{is_in_order, is_normalizer_element, pm_decompose, sigma_element, ExtCase, Membership,
    OrderSpec, QuatElem};
use crate::value::{q_pow, rat, rat_int, ValueExt};

/// ε_F = ζ_F(1)⁻¹ζ_F(2)⁻¹ = (1 − q⁻¹)(1 − q⁻²).
pub fn epsilon_f(q: u32) -> BigRational {
    let one = rat_int(1);
    (&one - q_pow(q, -1)) * (&one - q_pow(q, -2))
}

// ---------------------------------------------------------------------------
// distance and projection

pub enum DistanceTarget<'a> {
    /// O_F^×, handled in closed form.
    UnitsOF,
    /// Any digit domain, handled by class refinement.
    Domain(&'a DigitDomain),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    /// v_D of the minimal distance; `AtLeast` when γ lies in the set to
    /// working precision.
    pub exponent: Valuation,
    /// q^(−exponent), or 0 when unresolved.
    pub distance: BigRational,
    /// One representative per minimizing class.
    pub projections: Vec<QuatElem>,
    /// Digit level of the minimizing classes.
    pub resolution_level: u32,
}

impl DistanceReport {
    fn new(q: u32, exponent: Valuation, projections: Vec<QuatElem>, resolution_level: u32) -> Self {
        let distance = match exponent {
            Valuation::Exact(e) => q_pow(q, -(e as i64)),
            Valuation::AtLeast(_) => BigRational::zero(),
        };
        DistanceReport {
            exponent,
            distance,
            projections,
            resolution_level,
        }
    }
}

pub fn distance_to(gamma: &QuatElem, target: DistanceTarget<'_>) -> Result<DistanceReport> {
    match target {
        DistanceTarget::UnitsOF => Ok(distance_to_units_of(gamma)),
        DistanceTarget::Domain(d) => distance_to_domain(gamma, d),
    }
}

/// ||γ||_{O_F^×}: for γ = a + bΠ and x ∈ O_F^×, |γ − x| = max(|a − x|, |bΠ|),
/// and a − x can be pushed down to the first digit of a outside F_q.
fn distance_to_units_of(gamma: &QuatElem) -> DistanceReport {
    let p = gamma.params();
    let q = p.q();
    let (a, b) = (&gamma.a, &gamma.b);
    let vb = match b.valuation() {
        Valuation::Exact(v) => Valuation::Exact(2 * v + 1),
        Valuation::AtLeast(v) => Valuation::AtLeast(2 * v + 1),
    };
    let va = match a.valuation() {
        Valuation::Exact(v) if v < 0 => Valuation::Exact(2 * v),
        _ => first_irrational(a),
    };
    let e = match (va, vb) {
        (Valuation::Exact(x), Valuation::Exact(y)) => Valuation::Exact(x.min(y)),
        (Valuation::Exact(x), Valuation::AtLeast(y)) | (Valuation::AtLeast(y), Valuation::Exact(x)) => {
            if x <= y {
                Valuation::Exact(x)
            } else {
                Valuation::AtLeast(y)
            }
        }
        (Valuation::AtLeast(x), Valuation::AtLeast(y)) => Valuation::AtLeast(x.min(y)),
    };
    let level = (e.floor().max(0) + 1) / 2;
    let proj = if level == 0 {
        QuatElem::one(p)
    } else {
        let ds: Vec<QuadExtElem> = (0..level)
            .map(|j| QuadExtElem::rational(a.coeff(j).unwrap_or_default().c))
            .collect();
        QuatElem::from_series(Series::from_digits(p, 0, &ds, p.precision()))
    };
    DistanceReport::new(q, e, vec![proj], level as u32)
}

/// 2·(index of the first digit of `a` that no unit of O_F can match).
fn first_irrational(a: &Series) -> Valuation {
    match a.coeff(0) {
        None => return Valuation::AtLeast(2 * a.precision()),
        Some(c) if c.c == 0 || c.d != 0 => return Valuation::Exact(0),
        Some(_) => {}
    }
    let mut e = 1;
    loop {
        match a.coeff(e) {
            None => return Valuation::AtLeast(2 * e),
            Some(c) if c.d != 0 => return Valuation::Exact(2 * e),
            Some(_) => e += 1,
        }
    }
}

/// Generic refinement: at most one class per level can still contain points
/// strictly closer than its own radius, so this is linear in the depth.
fn distance_to_domain(gamma: &QuatElem, domain: &DigitDomain) -> Result<DistanceReport> {
    let q = domain.params.q();
    let step = domain.layout.step();
    let cap = Integrand::distance_to(gamma).default_depth_cap(domain.layout) as usize;
    let mut best: Option<Valuation> = None;
    let mut hits: Vec<(QuatElem, u32)> = Vec::new();
    let mut stack: Vec<Vec<QuadExtElem>> = vec![Vec::new()];
    let mut record = |v: Valuation, k: QuatElem, m: u32, best: &mut Option<Valuation>| {
        let better = match (*best, v) {
            (None, _) => true,
            (Some(b), v) => v.floor() > b.floor(),
        };
        if better {
            *best = Some(v);
            hits.clear();
        }
        if best.is_some_and(|b| b.floor() == v.floor()) {
            hits.push((k, m));
        }
    };
    while let Some(ds) = stack.pop() {
        let m = ds.len();
        if domain.allowed(m).is_empty() && m < domain.prefix.len() {
            continue;
        }
        let k = domain.element(&ds);
        let v = (gamma - &k).v_d();
        match v {
            Valuation::Exact(e) if e < m as i32 * step => {
                record(v, k, m as u32, &mut best);
                continue;
            }
            Valuation::AtLeast(_) => {
                record(Valuation::AtLeast(v.floor()), k, m as u32, &mut best);
                continue;
            }
            Valuation::Exact(_) => {}
        }
        if m >= cap {
            record(Valuation::AtLeast(v.floor()), k, m as u32, &mut best);
            continue;
        }
        for c in domain.allowed(m) {
            let mut child = ds.clone();
            child.push(c);
            stack.push(child);
        }
    }
    let best = best.ok_or_else(|| Error::Unsupported(format!("empty domain {}", domain.label)))?;
    let level = hits.iter().map(|h| h.1).max().unwrap_or(0);
    Ok(DistanceReport::new(q, best, hits.into_iter().map(|h| h.0).collect(), level))
}

// ---------------------------------------------------------------------------
// shallow / deep

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthClass {
    Shallow,
    Deep,
}

#[derive(Debug, Clone)]
pub struct Depth {
    pub class: DepthClass,
    pub gamma_prime: QuatElem,
    pub gamma_dprime: QuatElem,
    /// |π⁻¹μ|_D.
    pub threshold: BigRational,
    pub distance: DistanceReport,
}

fn require_unit(gamma: &QuatElem) -> Result<()> {
    match gamma.v_d() {
        Valuation::Exact(0) => Ok(()),
        Valuation::Exact(_) => Err(Error::NotUnit),
        Valuation::AtLeast(_) => Err(Error::InsufficientPrecision("v_D(gamma) is unresolved".into())),
    }
}

/// Shallow iff ||γ||_{O_F^×} ≥ |π⁻¹μ|_D.
pub fn classify(gamma: &QuatElem, ord: &OrderSpec) -> Result<Depth> {
    require_unit(gamma)?;
    let q = gamma.params().q();
    let t = ord.v_mu() - 2;
    let distance = distance_to_units_of(gamma);
    let class = match distance.exponent {
        Valuation::Exact(e) if e <= t => DepthClass::Shallow,
        Valuation::Exact(_) => DepthClass::Deep,
        Valuation::AtLeast(b) if b > t => DepthClass::Deep,
        Valuation::AtLeast(_) => {
            return Err(Error::InsufficientPrecision(
                "distance to O_F^x ties with the precision floor".into(),
            ))
        }
    };
    let gamma_prime = distance.projections[0].clone();
    let gamma_dprime = gamma - &gamma_prime;
    Ok(Depth {
        class,
        gamma_prime,
        gamma_dprime,
        threshold: q_pow(q, -(t as i64)),
        distance,
    })
}

// ---------------------------------------------------------------------------
// φ and the depth functions

/// Turn an engine result into a depth, using an independent membership test
/// to tell divergence from exhausted precision.
fn settle(r: &IntegralResult, inside: Option<bool>, what: &str) -> Result<ValueExt> {
    match (r.certified, inside) {
        (true, Some(true)) => Err(Error::RouteDisagreement(format!(
            "{what}: certified finite integral for a point of the domain"
        ))),
        (true, _) => Ok(r.value.clone()),
        (false, Some(true)) => Ok(ValueExt::Infinite),
        (false, _) => Ok(ValueExt::InsufficientPrecision),
    }
}

fn membership_flag(m: Membership) -> Option<bool> {
    match m {
        Membership::InUnitGroup => Some(true),
        Membership::InOrder | Membership::Outside => Some(false),
        Membership::Unresolved => None,
    }
}

/// γ ∈ πO_F, decided from known digits.
fn in_pi_of(gamma: &QuatElem) -> Option<bool> {
    if !gamma.a.is_rational() || !gamma.b.is_zero_to_precision() {
        return Some(false);
    }
    match gamma.a.valuation() {
        Valuation::Exact(v) => Some(v >= 1),
        Valuation::AtLeast(v) if v >= 1 => Some(true),
        Valuation::AtLeast(_) => None,
    }
}

/// φ(γ) = 1 + ∫_{πO_F} |x − γ|_D⁻¹ dx.
pub fn phi(gamma: &QuatElem) -> Result<ValueExt> {
    let dom = MeasureSpace::PiOF.domain(gamma.params())?;
    let r = integrate_auto(&dom, &Integrand::distance_to(gamma));
    Ok(settle(&r, in_pi_of(gamma), "phi")? + ValueExt::from_int(1))
}

/// index · ∫_{O^×} |γ − k|_D⁻¹ dk^×, without the shallow cross-check.
pub fn v_x_integral(gamma: &QuatElem, ord: &OrderSpec) -> Result<ValueExt> {
    require_unit(gamma)?;
    let p = gamma.params();
    let dom = MeasureSpace::UnitsOrder(*ord).domain(p)?;
    let r = integrate_auto(&dom, &Integrand::distance_to(gamma));
    let inside = membership_flag(is_in_order(gamma, ord));
    Ok(settle(&r, inside, "v_x")?.scale(&rat_int(ord.index(p.q()) as i64)))
}

/// v_x(γ) by the main integral; when γ is shallow the closed form is computed
/// as well and must agree.
pub fn v_x(gamma: &QuatElem, ord: &OrderSpec) -> Result<ValueExt> {
    let v = v_x_integral(gamma, ord)?;
    if let Ok(d) = classify(gamma, ord) {
        if d.class == DepthClass::Shallow && v.is_finite() {
            let w = shallow_closed_form(gamma, ord)?;
            if w != v {
                return Err(Error::RouteDisagreement(format!(
                    "v_x integral {v} but shallow closed form {w}"
                )));
            }
        }
    }
    Ok(v)
}

/// q/(q−1)·φ(γ″) − 2/(q−1) for shallow γ.
pub fn shallow_closed_form(gamma: &QuatElem, ord: &OrderSpec) -> Result<ValueExt> {
    let d = classify(gamma, ord)?;
    if d.class != DepthClass::Shallow {
        return Err(Error::NotShallow);
    }
    shallow_value(&d.gamma_dprime, ord)
}

/// The shallow formula for a given γ″ (any choice of projection).
pub fn shallow_value(gamma_dprime: &QuatElem, ord: &OrderSpec) -> Result<ValueExt> {
    let p = gamma_dprime.params();
    let q = p.q() as i64;
    let f = phi(gamma_dprime)?;
    let v = f.scale(&rat(q, q - 1)) + ValueExt::Finite(rat(-2, q - 1));
    if let (Some(x), ValueExt::Finite(bound)) = (v.finite(), phi(&ord.mu(p))?) {
        if *x >= bound {
            return Err(Error::RouteDisagreement(format!(
                "shallow value {} is not below phi(mu) = {}",
                v, bound
            )));
        }
    }
    Ok(v)
}

/// ∫_{O_K^×} |k − γ|_D⁻¹ dk with dk of total mass 1.
fn units_ok_integral(gamma: &QuatElem, case: ExtCase) -> Result<ValueExt> {
    let p = gamma.params();
    let dom = MeasureSpace::UnitsOK(case).domain(p)?;
    let r = integrate_auto(&dom, &Integrand::distance_to(gamma));
    let inside = membership_flag(is_in_order(gamma, &OrderSpec::new(case, 0)));
    settle(&r, inside, "O_K^x integral")
}

/// v_y(γ) in closed form (four cases).
pub fn v_y(gamma: &QuatElem, ord: &OrderSpec) -> Result<ValueExt> {
    require_unit(gamma)?;
    if is_normalizer_element(gamma, ord)? {
        return Ok(ValueExt::Infinite);
    }
    let q = gamma.params().q();
    let index = rat_int(ord.index(q) as i64);
    match (ord.case, ord.level) {
        (ExtCase::Ramified, _) => {
            if !in_ramified_hypothesis(gamma) {
                return Err(Error::Unsupported(
                    "ramified v_y needs gamma in O_K^x + Pi O_D".into(),
                ));
            }
            Ok((ValueExt::from_int(1) + units_ok_integral(gamma, ExtCase::Ramified)?).scale(&index))
        }
        (ExtCase::Unramified, 0) => {
            let (_, minus) = pm_decompose(gamma, ord)?;
            match minus.v_d() {
                Valuation::Exact(r) => Ok(ValueExt::ratio(r as i64 + 1, 2)),
                Valuation::AtLeast(_) => Ok(ValueExt::InsufficientPrecision),
            }
        }
        (ExtCase::Unramified, _) => Ok(units_ok_integral(gamma, ExtCase::Unramified)?.scale(&index)),
    }
}

/// γ ∈ O_K^× + ΠO_D for K = F(Π): the residue of γ lies in F_q^×.
pub fn in_ramified_hypothesis(gamma: &QuatElem) -> bool {
    matches!(gamma.a.coeff(0), Some(c) if c.c != 0 && c.d == 0)
}

/// v_z(γ) = index · ∫_{O_K^×} |γ − k|_D⁻¹ dk^×.
pub fn v_z(gamma: &QuatElem, ord: &OrderSpec) -> Result<ValueExt> {
    require_unit(gamma)?;
    let index = rat_int(ord.index(gamma.params().q()) as i64);
    Ok(units_ok_integral(gamma, ord.case)?.scale(&index))
}

/// v_ā(γ) = v_z(γσ) (ramified only).
pub fn v_abar(gamma: &QuatElem, ord: &OrderSpec) -> Result<ValueExt> {
    require_unit(gamma)?;
    let p = gamma.params();
    let sigma = sigma_element(p, ord)?;
    let v = v_z(&(gamma * &sigma), ord)?;
    if is_in_order(gamma, &ord.maximal()) == Membership::InUnitGroup {
        let index = ValueExt::from_int(ord.index(p.q()) as i64);
        if v != index {
            return Err(Error::RouteDisagreement(format!(
                "v_abar of a unit of O_K is {v}, expected the index {index}"
            )));
        }
    }
    Ok(v)
}

/// ⟨y₁, y₂⟩ for |μ₁|_D > |μ₂|_D.
pub fn intersection_pairing(p: FieldParams, ord1: &OrderSpec, ord2: &OrderSpec) -> Result<ValueExt> {
    if ord1.v_mu() >= ord2.v_mu() {
        return Err(Error::Unsupported("pairing needs |mu1|_D > |mu2|_D".into()));
    }
    if ord1.v_mu() == 0 {
        return Ok(ValueExt::from_int(1));
    }
    phi(&ord1.mu(p))
}

// ---------------------------------------------------------------------------
// P_s / P_d

/// The largest u with |π^(u−1)|_D > |μ|_D, checked against s (unramified) and
/// s + 1 (ramified).
pub fn u_of(ord: &OrderSpec) -> Result<u32> {
    let mut u = 0u32;
    while 2 * (u as i32) < ord.v_mu() {
        // u + 1 still satisfies 2((u + 1) − 1) < v_mu
        u += 1;
    }
    let summary = match ord.case {
        ExtCase::Unramified => ord.level,
        ExtCase::Ramified => ord.level + 1,
    };
    if u != summary {
        return Err(Error::RouteDisagreement(format!("u = {u} from its definition, {summary} by cases")));
    }
    Ok(u)
}

/// |μ − μ̄|_D.
fn mu_gap(p: FieldParams, ord: &OrderSpec) -> BigRational {
    (&ord.mu(p) - &ord.mu_bar(p)).abs_d()
}

/// P_s = Σ_{n<u} |μ̄ − μ|_D |πⁿ|_D⁻¹ Vol Ω(πⁿ), summed term by term.
pub fn ps_sum(p: FieldParams, ord: &OrderSpec) -> Result<BigRational> {
    let q = p.q();
    let gap = mu_gap(p, ord);
    let mut acc = BigRational::zero();
    for n in 0..u_of(ord)? {
        acc += &gap * q_pow(q, 2 * n as i64) * vol_omega(n, q);
    }
    Ok(acc)
}

/// P_s = |μ − μ̄|_D (1 + q⁻¹)⁻¹ q^(u−1), and 0 when u = 0.
pub fn ps_closed(p: FieldParams, ord: &OrderSpec) -> Result<BigRational> {
    let q = p.q();
    let u = u_of(ord)?;
    if u == 0 {
        return Ok(BigRational::zero());
    }
    Ok(mu_gap(p, ord) * rat(q as i64, q as i64 + 1) * q_pow(q, u as i64 - 1))
}

/// P_d = |μ̄ − μ|_D · Vol Γ(π^u)/Vol(ι(Γ₀)) · ∫_{ι(Γ₀)} |μγ − γμk|_D⁻¹ dk^×.
pub fn pd_integral(gamma: &QuatElem, ord: &OrderSpec) -> Result<ValueExt> {
    require_unit(gamma)?;
    let p = gamma.params();
    let q = p.q();
    let mu = ord.mu(p);
    let dom = MeasureSpace::FrameImage(*ord).domain(p)?;
    let f = Integrand {
        center: &mu * gamma,
        scale: gamma * &mu,
    };
    let r = integrate_auto(&dom, &f);
    let inside = Some(is_normalizer_element(gamma, ord)?);
    let c = mu_gap(p, ord) * vol_gamma(u_of(ord)?, q) / dom.total_mass();
    Ok(settle(&r, inside, "P_d")?.scale(&c))
}

#[derive(Debug, Clone)]
pub struct PsPd {
    pub u: u32,
    pub p_s: BigRational,
    pub p_d: ValueExt,
    /// ε_F [O_K:O^×]² |Δ|⁻¹ (P_s + P_d).
    pub v_y_from_parts: ValueExt,
    /// The closed form, when γ is within its hypotheses.
    pub v_y: Option<ValueExt>,
}

/// The v_y constant ε_F [O_K : O^×]² |Δ_{K/F}|⁻¹.
pub fn vy_constant(q: u32, ord: &OrderSpec) -> BigRational {
    let i = ord.additive_index(q);
    epsilon_f(q) * &i * &i / ord.case.discriminant_abs(q)
}

/// Splits v_y into its shallow and deep parts and checks the recombination.
pub fn ps_pd_decomposition(gamma: &QuatElem, ord: &OrderSpec) -> Result<PsPd> {
    let p = gamma.params();
    let q = p.q();
    let p_s = ps_closed(p, ord)?;
    let direct = ps_sum(p, ord)?;
    if p_s != direct {
        return Err(Error::RouteDisagreement(format!(
            "P_s closed form {} but term-by-term sum {}",
            ValueExt::Finite(p_s),
            ValueExt::Finite(direct)
        )));
    }
    let p_d = pd_integral(gamma, ord)?;
    let v_y_from_parts = (ValueExt::Finite(p_s.clone()) + p_d.clone()).scale(&vy_constant(q, ord));
    let v_y = match v_y(gamma, ord) {
        Ok(v) => Some(v),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(v) = &v_y {
        if *v != v_y_from_parts && v.is_finite() && v_y_from_parts.is_finite() {
            return Err(Error::RouteDisagreement(format!(
                "v_y = {v} but eps*I^2*|Delta|^-1*(P_s+P_d) = {v_y_from_parts}"
            )));
        }
    }
    Ok(PsPd {
        u: u_of(ord)?,
        p_s,
        p_d,
        v_y_from_parts,
        v_y,
    })
}

// ---------------------------------------------------------------------------
// GL₂ oracles

/// Refinement budget (classes visited beyond the flat level).
pub const GL2_REFINE_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone)]
pub struct Gl2Report {
    /// constant × integral.
    pub value: ValueExt,
    /// ∫_{GL₂(O_F)} |E(g)|_D⁻¹ dg.
    pub integral: ValueExt,
    pub constant: BigRational,
    pub certified: bool,
    pub flat_level: u32,
    /// Classes of GL₂(O_F/π^N) visited.
    pub flat_classes: u64,
    /// Classes visited by local refinement beyond level N.
    pub refined_classes: u64,
    /// Deepest digit level reached in any entry.
    pub max_level: u32,
    /// ∫ over Ω(πⁿ) for n < the requested bucket count.
    pub buckets: Vec<BigRational>,
    /// ∫ over the rest (Γ(π^u) when u buckets were requested).
    pub remainder: ValueExt,
}

/// What is known about val(g₂₁) on a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum G21 {
    Exactly(u32),
    /// The first `m` digits vanish.
    AtLeast(u32),
}

/// Integrand g ↦ |Σ g_ij c_ij|_D⁻¹ over GL₂(O_F).
///
/// All of GL₂(O_F/π^N) is enumerated; a class whose certificate fails is then
/// split one entry at a time, always on the entry whose free part bounds the
/// variation most weakly: with entry levels m_ij the integrand is constant on
/// the class once v_D(E) < min_ij (2 m_ij + v_D(c_ij)).
struct Gl2Engine {
    q: u32,
    /// joint[t][x]: π^t Σ d_ij c_ij for the digit quadruple x (flat phase).
    joint: Vec<Vec<QuatElem>>,
    /// single[k][t][d]: π^t d c_k for entry k = 2i + j.
    single: [Vec<Vec<QuatElem>>; 4],
    vc: [i32; 4],
    cap: usize,
    flat: usize,
    /// (extra digits beyond the flat level, v_D(E), g₂₁) → number of classes
    tally: BTreeMap<(u32, i32, G21), u64>,
    flat_classes: u64,
    refined: u64,
    max_level: usize,
    failed: bool,
}

fn digit_quad(q: u32, x: usize) -> [u32; 4] {
    let q = q as usize;
    [(x % q) as u32, (x / q % q) as u32, (x / (q * q) % q) as u32, (x / (q * q * q)) as u32]
}

fn shift_d(x: &QuatElem, t: usize) -> QuatElem {
    QuatElem::new(x.a.shifted(t as i32), x.b.shifted(t as i32))
}

fn scale_d(x: &QuatElem, d: u32) -> QuatElem {
    let s = QuadExtElem::rational(d);
    QuatElem::new(x.a.scale(s), x.b.scale(s))
}

impl Gl2Engine {
    fn new(c: &[[QuatElem; 2]; 2], flat: u32) -> Result<Self> {
        let p = c[0][0].params();
        let q = p.q();
        let cs: [&QuatElem; 4] = [&c[0][0], &c[0][1], &c[1][0], &c[1][1]];
        if cs.iter().all(|x| !x.v_d().is_exact()) {
            return Err(Error::InsufficientPrecision("all matrix coefficients vanish".into()));
        }
        let vc = cs.map(|x| x.v_d().floor());
        let m0 = *vc.iter().min().unwrap();
        let prec_d = cs.iter().map(|x| x.precision_d()).min().unwrap();
        let cap = ((((prec_d - m0).max(0) + 1) / 2 + 1) as usize).max(flat as usize);
        let wide = p.with_precision(prec_d + 4)?;
        let q4 = (q as usize).pow(4);
        let base: Vec<QuatElem> = (0..q4)
            .map(|x| {
                let d = digit_quad(q, x);
                (0..4).fold(QuatElem::zero(wide), |acc, k| {
                    if d[k] == 0 {
                        acc
                    } else {
                        &acc + &scale_d(cs[k], d[k])
                    }
                })
            })
            .collect();
        let joint = (0..flat as usize)
            .map(|t| base.iter().map(|e| shift_d(e, t)).collect())
            .collect();
        let single = cs.map(|ck| {
            (0..cap)
                .map(|t| (0..q).map(|d| shift_d(&scale_d(ck, d), t)).collect())
                .collect()
        });
        Ok(Gl2Engine {
            q,
            joint,
            single,
            vc,
            cap,
            flat: flat as usize,
            tally: BTreeMap::new(),
            flat_classes: 0,
            refined: 0,
            max_level: 0,
            failed: false,
        })
    }

    fn run(&mut self) {
        let q = self.q as u64;
        let zero = QuatElem::zero(self.joint[0][0].params());
        for x in 0..(q as usize).pow(4) {
            let d = digit_quad(self.q, x);
            let det = (d[0] as u64 * d[3] as u64 + q * q - (d[1] as u64 * d[2] as u64)) % q;
            if det == 0 {
                continue;
            }
            let e = &zero + &self.joint[0][x];
            let g21 = if d[2] != 0 { G21::Exactly(0) } else { G21::AtLeast(1) };
            self.flat_visit(1, e, g21);
            if self.failed {
                return;
            }
        }
    }

    fn flat_visit(&mut self, m: usize, e: QuatElem, g21: G21) {
        if m == self.flat {
            self.flat_classes += 1;
            let n = self.flat as u32;
            self.refine([n; 4], e, g21);
            return;
        }
        for x in 0..(self.q as usize).pow(4) {
            let child = &e + &self.joint[m][x];
            let g = match g21 {
                G21::AtLeast(_) if digit_quad(self.q, x)[2] != 0 => G21::Exactly(m as u32),
                G21::AtLeast(_) => G21::AtLeast(m as u32 + 1),
                known => known,
            };
            self.flat_visit(m + 1, child, g);
            if self.failed {
                return;
            }
        }
    }

    fn refine(&mut self, levels: [u32; 4], e: QuatElem, g21: G21) {
        let (k, bound) = (0..4)
            .map(|k| (k, 2 * levels[k] as i32 + self.vc[k]))
            .min_by_key(|&(k, b)| (b, k))
            .unwrap();
        self.max_level = self.max_level.max(*levels.iter().max().unwrap() as usize);
        if let Valuation::Exact(v) = e.v_d() {
            if v < bound {
                let extra = levels.iter().sum::<u32>() - 4 * self.flat as u32;
                *self.tally.entry((extra, v, g21)).or_default() += 1;
                return;
            }
        }
        let t = levels[k] as usize;
        if t >= self.cap {
            self.failed = true;
            return;
        }
        let mut next = levels;
        next[k] += 1;
        for d in 0..self.q {
            self.refined += 1;
            if self.refined > GL2_REFINE_BUDGET {
                self.failed = true;
                return;
            }
            let child = &e + &self.single[k][t][d as usize];
            let g = match g21 {
                G21::AtLeast(_) if k == 2 && d != 0 => G21::Exactly(t as u32),
                G21::AtLeast(_) if k == 2 => G21::AtLeast(t as u32 + 1),
                other => other,
            };
            self.refine(next, child, g);
            if self.failed {
                return;
            }
        }
    }

    /// (total, buckets n < nb, remainder).
    fn totals(&self, nb: usize) -> (BigRational, Vec<BigRational>, BigRational) {
        let q = self.q;
        let mut buckets = vec![BigRational::zero(); nb];
        let mut rest = BigRational::zero();
        let keep = rat(q as i64 - 1, q as i64);
        let flat_mass = BigRational::from_integer(gl2_order(q, self.flat as u32));
        for (&(extra, v, g21), &n) in &self.tally {
            let w = q_pow(q, v as i64 - extra as i64) * rat_int(n as i64) / &flat_mass;
            match g21 {
                G21::Exactly(j) if (j as usize) < nb => buckets[j as usize] += &w,
                G21::Exactly(_) => rest += &w,
                G21::AtLeast(m) => {
                    // val(g21) ≥ m, distributed over the finer levels by volume
                    let m = m as usize;
                    for (j, b) in buckets.iter_mut().enumerate().skip(m) {
                        *b += &w * &keep * q_pow(q, -((j - m) as i64));
                    }
                    rest += &w * q_pow(q, -(nb.saturating_sub(m) as i64));
                }
            }
        }
        let total = buckets.iter().fold(rest.clone(), |a, b| a + b);
        (total, buckets, rest)
    }
}

fn gl2_report(c: &[[QuatElem; 2]; 2], n: u32, nb: u32, constant: BigRational) -> Result<Gl2Report> {
    let q = c[0][0].params().q();
    check_gl2_budget(q, n)?;
    let mut eng = Gl2Engine::new(c, n)?;
    eng.run();
    let (integral, buckets, remainder) = if eng.failed {
        (ValueExt::Infinite, Vec::new(), ValueExt::Infinite)
    } else {
        let (t, b, r) = eng.totals(nb as usize);
        (ValueExt::Finite(t), b, ValueExt::Finite(r))
    };
    Ok(Gl2Report {
        value: integral.clone().scale(&constant),
        integral,
        constant,
        certified: !eng.failed,
        flat_level: n,
        flat_classes: eng.flat_classes,
        refined_classes: eng.refined,
        max_level: eng.max_level as u32,
        buckets,
        remainder,
    })
}

/// v_y from the unsimplified GL₂ integral: E(g) = (1, 0)·[[1,1],[μ,μ̄]]⁻¹·γg·
/// [[1,1],[μ,μ̄]]·(0, 1)ᵀ, i.e. c_ij = w_i γ v_j with w = (μ̄ − μ)⁻¹(μ̄, −1) and
/// v = (1, μ̄). Buckets are reported for val(g₂₁) = n < u.
pub fn gl2_oracle_vy(gamma: &QuatElem, ord: &OrderSpec, n: u32) -> Result<Gl2Report> {
    let p = gamma.params();
    let q = p.q();
    check_gl2_budget(q, n)?;
    let mu = ord.mu(p);
    let mu_bar = ord.mu_bar(p);
    let c = (&mu_bar - &mu).inv()?;
    let w = [&c * &mu_bar, -&c];
    let v = [QuatElem::one(mu.params()), mu_bar.clone()];
    let coeff = |i: usize, j: usize| &(&w[i] * gamma) * &v[j];
    let cs = [[coeff(0, 0), coeff(0, 1)], [coeff(1, 0), coeff(1, 1)]];
    gl2_report(&cs, n, u_of(ord)?, vy_constant(q, ord))
}

/// ⟨y₁, y₂⟩ from the GL₂ integral with c_ij = (μ̄₁ − μ₁)⁻¹ w_i γ₀ v_j,
/// w = (−μ₁, 1), v = (1, μ₂). The default γ₀ is Π^(s₁ − s₂).
pub fn gl2_oracle_pairing(
    p: FieldParams,
    ord1: &OrderSpec,
    ord2: &OrderSpec,
    gamma0: Option<&QuatElem>,
    n: u32,
) -> Result<Gl2Report> {
    let q = p.q();
    check_gl2_budget(q, n)?;
    let g0 = match gamma0 {
        Some(g) => g.clone(),
        None => QuatElem::pi_d_power(p, ord1.level as i32 - ord2.level as i32),
    };
    let mu1 = ord1.mu(p);
    let mu2 = ord2.mu(p);
    let c1 = (&ord1.mu_bar(p) - &mu1).inv()?;
    let w = [-&(&c1 * &mu1), c1.clone()];
    let v = [QuatElem::one(mu2.params()), mu2.clone()];
    let coeff = |i: usize, j: usize| &(&w[i] * &g0) * &v[j];
    let cs = [[coeff(0, 0), coeff(0, 1)], [coeff(1, 0), coeff(1, 1)]];
    let constant = epsilon_f(q) * ord1.additive_index(q) * ord2.additive_index(q) / ord1.case.discriminant_abs(q);
    gl2_report(&cs, n, 0, constant)
}

/// Sum of a GL₂ report's buckets.
pub fn bucket_sum(r: &Gl2Report) -> BigRational {
    r.buckets.iter().fold(BigRational::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> FieldParams {
        FieldParams::new(3, 12).unwrap()
    }

    fn one_plus_pi_d(p: FieldParams) -> QuatElem {
        &QuatElem::one(p) + &QuatElem::pi_d(p)
    }

    #[test]
    fn distance_examples() {
        let p = p3();
        let d = distance_to(&one_plus_pi_d(p), DistanceTarget::UnitsOF).unwrap();
        assert_eq!(d.exponent, Valuation::Exact(1));
        assert_eq!(d.distance, rat(1, 3));
        assert!(d.projections[0].eq_to_precision(&QuatElem::one(p)));
        let d = distance_to(&QuatElem::delta(p), DistanceTarget::UnitsOF).unwrap();
        assert_eq!(d.distance, rat_int(1));
        let d = distance_to(&QuatElem::from_int(p, 2), DistanceTarget::UnitsOF).unwrap();
        assert_eq!(d.distance, rat_int(0));
        assert!(d.projections[0].eq_to_precision(&QuatElem::from_int(p, 2)));
    }

    #[test]
    fn classify_examples() {
        let p = p3();
        let g = one_plus_pi_d(p);
        assert_eq!(classify(&g, &OrderSpec::unramified(2)).unwrap().class, DepthClass::Shallow);
        assert_eq!(classify(&g, &OrderSpec::unramified(1)).unwrap().class, DepthClass::Deep);
        let d = QuatElem::delta(p);
        assert_eq!(classify(&d, &OrderSpec::ramified(1)).unwrap().class, DepthClass::Shallow);
        assert_eq!(classify(&d, &OrderSpec::ramified(0)).unwrap().class, DepthClass::Deep);
    }

    #[test]
    fn phi_examples() {
        let p = p3();
        assert_eq!(phi(&QuatElem::delta(p)).unwrap(), ValueExt::ratio(4, 3));
        assert_eq!(phi(&QuatElem::pi_d(p)).unwrap(), ValueExt::from_int(2));
        let pd = QuatElem::from_series(Series::pi_power(p, 1).scale(QuadExtElem::DELTA));
        assert_eq!(phi(&pd).unwrap(), ValueExt::from_int(4));
        let pi = QuatElem::from_series(Series::pi_power(p, 1));
        assert_eq!(phi(&pi).unwrap(), ValueExt::Infinite);
    }

    #[test]
    fn depth_examples() {
        let p = p3();
        let one = QuatElem::one(p);
        let delta = QuatElem::delta(p);
        assert_eq!(v_x(&one, &OrderSpec::unramified(1)).unwrap(), ValueExt::Infinite);
        assert_eq!(v_x(&delta, &OrderSpec::ramified(1)).unwrap(), ValueExt::from_int(1));
        assert_eq!(v_x(&delta, &OrderSpec::unramified(1)).unwrap(), ValueExt::from_int(1));
        assert_eq!(shallow_closed_form(&one_plus_pi_d(p), &OrderSpec::unramified(2)).unwrap(), ValueExt::from_int(2));
        assert_eq!(v_x(&one_plus_pi_d(p), &OrderSpec::unramified(2)).unwrap(), ValueExt::from_int(2));
        let dp = &delta + &QuatElem::pi_d(p);
        assert_eq!(v_y(&dp, &OrderSpec::unramified(0)).unwrap(), ValueExt::from_int(1));
        assert_eq!(v_y(&delta, &OrderSpec::unramified(1)).unwrap(), ValueExt::Infinite);
        assert_eq!(v_y(&delta, &OrderSpec::ramified(0)).unwrap(), ValueExt::Infinite);
        assert_eq!(v_z(&delta, &OrderSpec::ramified(0)).unwrap(), ValueExt::from_int(1));
        assert_eq!(v_z(&one, &OrderSpec::ramified(0)).unwrap(), ValueExt::Infinite);
        assert_eq!(v_abar(&one_plus_pi_d(p), &OrderSpec::ramified(1)).unwrap(), ValueExt::from_int(3));
        assert_eq!(v_abar(&one, &OrderSpec::ramified(0)).unwrap(), ValueExt::from_int(1));
        assert!(matches!(v_abar(&one, &OrderSpec::unramified(1)), Err(Error::WrongCase { .. })));
    }

    #[test]
    fn pairing_examples() {
        let p = p3();
        let u = OrderSpec::unramified;
        let r = OrderSpec::ramified;
        assert_eq!(intersection_pairing(p, &u(0), &u(1)).unwrap(), ValueExt::from_int(1));
        assert_eq!(intersection_pairing(p, &u(1), &u(2)).unwrap(), ValueExt::from_int(4));
        assert_eq!(intersection_pairing(p, &r(0), &r(1)).unwrap(), ValueExt::from_int(2));
        assert!(intersection_pairing(p, &u(1), &u(1)).is_err());
    }

    #[test]
    fn ps_examples() {
        let p = p3();
        assert_eq!(ps_closed(p, &OrderSpec::unramified(1)).unwrap(), rat(1, 12));
        assert_eq!(ps_closed(p, &OrderSpec::ramified(0)).unwrap(), rat(1, 4));
        assert_eq!(ps_closed(p, &OrderSpec::unramified(0)).unwrap(), rat_int(0));
        for s in 0..4 {
            for ord in [OrderSpec::unramified(s), OrderSpec::ramified(s)] {
                assert_eq!(ps_closed(p, &ord).unwrap(), ps_sum(p, &ord).unwrap());
            }
        }
        let pd = pd_integral(&QuatElem::delta(p), &OrderSpec::unramified(1)).unwrap();
        assert_eq!(pd, ValueExt::Infinite);
    }

    #[test]
    fn gl2_small_cases() {
        let p = FieldParams::new(3, 10).unwrap();
        let dp = &QuatElem::delta(p) + &QuatElem::pi_d(p);
        let r = gl2_oracle_vy(&dp, &OrderSpec::unramified(0), 2).unwrap();
        assert_eq!(r.flat_classes, 3888);
        assert_eq!(r.value, ValueExt::from_int(1));
        let r = gl2_oracle_pairing(p, &OrderSpec::unramified(0), &OrderSpec::unramified(1), None, 2).unwrap();
        assert_eq!(r.value, ValueExt::from_int(1));
    }
}
