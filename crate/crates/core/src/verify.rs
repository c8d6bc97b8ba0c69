//! Seeded consistency suites: each identity compares two independently
//! computed sides exactly and counts failures.

use num::{BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldParams, Series, Valuation};
use crate::lifting::{
    bucket_sum, classify, distance_to, gl2_oracle_pairing, gl2_oracle_vy, intersection_pairing, phi,
    ps_closed, ps_pd_decomposition, shallow_closed_form, shallow_value, v_abar, v_x, v_x_integral, v_y, v_z,
    DepthClass, DistanceTarget,
};
use crate::quaternion::{
    coset_representatives, is_in_order, is_normalizer_element, pm_decompose, ExtCase, Membership, OrderSpec,
    QuatElem, Zeta,
};
use crate::sampling::{self as sm, SampleRng};
use crate::value::{rat_int, ValueExt};

/// (canonical name, alias).
pub const IDENTITIES: &[(&str, &str)] = &[
    ("phi-constants", "phi-mu"),
    ("phi-scaling", "fendou"),
    ("max-decomposition", "jinzhang"),
    ("projection-max", "xiaozuo"),
    ("shallow-bound", "anna"),
    ("distance-product", "canojiu"),
    ("shallow-times-deep", "jiandu"),
    ("shallow-routes", "syr"),
    ("unit-distance-one", "zhaonvyou"),
    ("coset-sum", "xingxing"),
    ("ramified-chain", "jieren"),
    ("gl2-vy", "gl2-vy"),
    ("gl2-pairing", "gl2-pairing"),
    ("ps", "slres"),
    ("infinite-detection", "divergence"),
    ("integrality", "integrality"),
];

pub fn canonical_name(name: &str) -> Option<&'static str> {
    IDENTITIES
        .iter()
        .find(|(n, a)| *n == name || *a == name)
        .map(|(n, _)| *n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: String,
    pub samples: u64,
    pub failures: u64,
    pub skipped: u64,
    /// Largest |lhs − rhs| over finite mismatches; zero when all agree.
    pub max_discrepancy: BigRational,
    /// The first few failures, for diagnosis.
    pub notes: Vec<String>,
}

impl IdentityReport {
    fn new(name: &str) -> Self {
        IdentityReport {
            name: name.to_string(),
            samples: 0,
            failures: 0,
            skipped: 0,
            max_discrepancy: BigRational::zero(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.samples > self.skipped
    }

    fn pass(&mut self) {
        self.samples += 1;
    }

    fn skip(&mut self) {
        self.samples += 1;
        self.skipped += 1;
    }

    fn fail(&mut self, note: String) {
        self.samples += 1;
        self.failures += 1;
        if self.notes.len() < 5 {
            self.notes.push(note);
        }
    }

    /// Compare two values; a side that ran out of precision makes the sample
    /// a skip, not a pass.
    fn compare(&mut self, lhs: &ValueExt, rhs: &ValueExt, ctx: impl FnOnce() -> String) {
        if lhs == rhs && *lhs != ValueExt::InsufficientPrecision {
            self.pass();
            return;
        }
        if *lhs == ValueExt::InsufficientPrecision || *rhs == ValueExt::InsufficientPrecision {
            self.skip();
            return;
        }
        if let (Some(a), Some(b)) = (lhs.finite(), rhs.finite()) {
            let d = (a - b).abs();
            if d > self.max_discrepancy {
                self.max_discrepancy = d;
            }
        }
        self.fail(format!("{}: {} vs {}", ctx(), lhs, rhs));
    }

    fn check(&mut self, ok: bool, ctx: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(ctx())
        }
    }

    /// Route an error from a computation into the tally.
    fn error(&mut self, e: Error, ctx: impl FnOnce() -> String) {
        match e {
            Error::InsufficientPrecision(_) => self.skip(),
            e => self.fail(format!("{}: {e}", ctx())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub q: u32,
    pub precision: i32,
    /// Samples per configuration.
    pub samples: usize,
    pub seed: u64,
    /// Orders to sweep; identities restricted to one case filter this list.
    pub orders: Vec<OrderSpec>,
    /// GL₂ enumeration levels for the oracle identities.
    pub gl2_levels: Vec<u32>,
}

impl VerifyConfig {
    pub fn new(q: u32) -> Self {
        VerifyConfig {
            q,
            precision: 12,
            samples: 20,
            seed: 7,
            orders: default_orders(3),
            gl2_levels: vec![2],
        }
    }

    fn params(&self) -> Result<FieldParams> {
        FieldParams::new(self.q, self.precision)
    }

    fn rng(&self, salt: u64) -> SampleRng {
        sm::rng(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
    }
}

/// Both cases, levels 0..=max_level.
pub fn default_orders(max_level: u32) -> Vec<OrderSpec> {
    let mut v = Vec::new();
    for case in [ExtCase::Unramified, ExtCase::Ramified] {
        for s in 0..=max_level {
            v.push(OrderSpec::new(case, s));
        }
    }
    v
}

pub fn run_identity(name: &str, cfg: &VerifyConfig) -> Result<IdentityReport> {
    let canon = canonical_name(name).ok_or_else(|| Error::Unsupported(format!("unknown identity {name}")))?;
    let p = cfg.params()?;
    let mut r = IdentityReport::new(canon);
    match canon {
        "phi-constants" => phi_constants(p, cfg, &mut r),
        "phi-scaling" => phi_scaling(p, cfg, &mut r),
        "max-decomposition" => max_decomposition(p, cfg, &mut r),
        "projection-max" => projection_max(p, cfg, &mut r),
        "shallow-bound" => shallow_bound(p, cfg, &mut r),
        "distance-product" => distance_product(p, cfg, &mut r),
        "shallow-times-deep" => shallow_times_deep(p, cfg, &mut r),
        "shallow-routes" => shallow_routes(p, cfg, &mut r),
        "unit-distance-one" => unit_distance_one(p, cfg, &mut r),
        "coset-sum" => coset_sum(p, cfg, &mut r),
        "ramified-chain" => ramified_chain(p, cfg, &mut r),
        "gl2-vy" => gl2_vy(p, cfg, &mut r)?,
        "gl2-pairing" => gl2_pairing(p, cfg, &mut r)?,
        "ps" => ps(p, cfg, &mut r)?,
        "infinite-detection" => infinite_detection(p, cfg, &mut r),
        "integrality" => integrality(p, cfg, &mut r),
        _ => unreachable!(),
    }
    Ok(r)
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<IdentityReport>> {
    IDENTITIES.iter().map(|(n, _)| run_identity(n, cfg)).collect()
}

/// Draw until `pred` accepts, giving up after a fixed number of tries.
fn draw<T>(rng: &mut SampleRng, mut gen: impl FnMut(&mut SampleRng) -> T, pred: impl Fn(&T) -> bool) -> Option<T> {
    for _ in 0..500 {
        let x = gen(rng);
        if pred(&x) {
            return Some(x);
        }
    }
    None
}

fn is_unit(g: &QuatElem) -> bool {
    g.v_d() == Valuation::Exact(0)
}

fn lit(g: &QuatElem) -> String {
    g.to_literal()
}

// ---------------------------------------------------------------------------

fn phi_constants(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let q = p.q() as i64;
    let target = ValueExt::ratio(q + 1, q);
    let mut rng = cfg.rng(1);
    // generators of unramified maximal orders for both choices of ζ, then
    // random units with non-rational residue (μ̄ ≠ μ)
    let mut units = vec![
        OrderSpec::unramified(0).mu(p),
        OrderSpec::unramified(0).with_zeta(Zeta::OnePlusDelta).mu(p),
    ];
    for _ in 0..cfg.samples {
        units.push(sm::distance_one_unit(&mut rng, p));
    }
    for mu in &units {
        match phi(mu) {
            Ok(v) => r.compare(&v, &target, || format!("phi({})", lit(mu))),
            Err(e) => r.error(e, || lit(mu)),
        }
    }
    let pi_d = QuatElem::pi_d(p);
    match phi(&pi_d) {
        Ok(v) => r.compare(&v, &ValueExt::from_int(2), || "phi(Pi)".into()),
        Err(e) => r.error(e, || "phi(Pi)".into()),
    }
}

fn phi_scaling(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(2);
    let pi = Series::pi_power(p, 1);
    for _ in 0..cfg.samples {
        let g = sm::nonunit(&mut rng, p, 5);
        let lhs = phi(&g.scale_left(&pi));
        let rhs = phi(&g);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => r.compare(&a, &b.scale(&rat_int(p.q() as i64)), || lit(&g)),
            (Err(e), _) | (_, Err(e)) => r.error(e, || lit(&g)),
        }
    }
}

fn max_decomposition(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(3);
    for ord in &cfg.orders {
        let mu = ord.mu(p);
        let mu_bar = ord.mu_bar(p);
        for _ in 0..cfg.samples {
            let g = sm::element(&mut rng, p, -3, 4);
            let (plus, minus) = match pm_decompose(&g, ord) {
                Ok(x) => x,
                Err(e) => {
                    r.error(e, || lit(&g));
                    continue;
                }
            };
            let sum_ok = (&plus + &minus).eq_to_precision(&g);
            let plus_ok = (&plus * &mu).eq_to_precision(&(&mu * &plus));
            let minus_ok = (&minus * &mu).eq_to_precision(&(&mu_bar * &minus));
            let vmax = match (plus.v_d(), minus.v_d()) {
                (Valuation::Exact(a), Valuation::Exact(b)) => Valuation::Exact(a.min(b)),
                (Valuation::Exact(a), Valuation::AtLeast(_)) | (Valuation::AtLeast(_), Valuation::Exact(a)) => {
                    Valuation::Exact(a)
                }
                (Valuation::AtLeast(a), Valuation::AtLeast(b)) => Valuation::AtLeast(a.min(b)),
            };
            r.check(sum_ok && plus_ok && minus_ok && vmax == g.v_d(), || {
                format!("{ord}: {} (sum {sum_ok}, +{plus_ok}, -{minus_ok}, {} vs {vmax})", lit(&g), g.v_d())
            });
        }
    }
}

fn projection_max(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(4);
    for _ in 0..cfg.samples {
        let e = sm::range(&mut rng, 0, 6);
        let g = if e == 0 { sm::distance_one_unit(&mut rng, p) } else { sm::near_rational(&mut rng, p, e) };
        let d = distance_to(&g, DistanceTarget::UnitsOF).expect("closed form");
        let gp = &d.projections[0];
        let gone = (&g - gp).abs_d();
        for _ in 0..5 {
            let a = QuatElem::from_series(sm::unit_series(&mut rng, p, true));
            let lhs = (&g + &a).abs_d();
            let rhs = (gp + &a).abs_d().max(gone.clone());
            r.compare(&ValueExt::Finite(lhs), &ValueExt::Finite(rhs), || format!("{} + {}", lit(&g), lit(&a)));
        }
    }
}

fn shallow_sample(rng: &mut SampleRng, p: FieldParams, ord: &OrderSpec) -> Option<QuatElem> {
    let t = sm::shallow_limit(ord);
    if t < 0 {
        return None;
    }
    draw(
        rng,
        |rng| {
            let e = sm::range(rng, 0, t);
            if e == 0 {
                sm::distance_one_unit(rng, p)
            } else {
                sm::near_rational(rng, p, e)
            }
        },
        |g| is_unit(g) && classify(g, ord).is_ok_and(|d| d.class == DepthClass::Shallow),
    )
}

fn deep_sample(rng: &mut SampleRng, p: FieldParams, ord: &OrderSpec) -> Option<QuatElem> {
    let lo = (ord.v_mu() - 1).max(1);
    draw(
        rng,
        |rng| {
            let e = sm::range(rng, lo, lo + 4);
            sm::near_rational(rng, p, e)
        },
        |g| is_unit(g) && classify(g, ord).is_ok_and(|d| d.class == DepthClass::Deep),
    )
}

fn shallow_bound(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(5);
    let pi_inv = Series::pi_power(p, -1);
    for ord in &cfg.orders {
        let bound = phi(&ord.mu(p).scale_left(&pi_inv));
        for _ in 0..cfg.samples {
            let Some(g) = shallow_sample(&mut rng, p, ord) else { break };
            let d = classify(&g, ord).expect("sampled shallow");
            match (phi(&d.gamma_dprime), &bound) {
                (Ok(ValueExt::Finite(a)), Ok(ValueExt::Finite(b))) => {
                    r.check(a <= *b, || format!("{ord}: phi(g'') = {} > {}", ValueExt::Finite(a.clone()), ValueExt::Finite(b.clone())))
                }
                (Ok(_), Ok(_)) => r.skip(),
                (Err(e), _) => r.error(e, || lit(&g)),
                (_, Err(e)) => r.error(e.clone(), || format!("phi(mu/pi) for {ord}")),
            }
        }
    }
}

fn norm_of(g: &QuatElem) -> Valuation {
    distance_to(g, DistanceTarget::UnitsOF).expect("closed form").exponent
}

fn distance_product(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(6);
    for _ in 0..cfg.samples {
        // ||γ₁|| > ||γ₂|| in absolute value means a smaller exponent
        let e1 = sm::range(&mut rng, 0, 4);
        let e2 = sm::range(&mut rng, e1 + 1, e1 + 5);
        let g1 = if e1 == 0 { sm::distance_one_unit(&mut rng, p) } else { sm::near_rational(&mut rng, p, e1) };
        let g2 = sm::near_rational(&mut rng, p, e2);
        let (n1, n2) = (norm_of(&g1), norm_of(&g2));
        let (Valuation::Exact(a), b) = (n1, n2) else {
            r.skip();
            continue;
        };
        if b.floor() <= a || !is_unit(&g1) || !is_unit(&g2) {
            r.skip();
            continue;
        }
        let n12 = norm_of(&(&g1 * &g2));
        r.check(n12.is_exact() && n12.floor() <= a, || {
            format!("{} * {}: {n12} vs {a}", lit(&g1), lit(&g2))
        });
    }
}

fn shallow_times_deep(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(7);
    for ord in &cfg.orders {
        for _ in 0..cfg.samples {
            let (Some(g1), Some(g2)) = (shallow_sample(&mut rng, p, ord), deep_sample(&mut rng, p, ord)) else {
                break;
            };
            let prod = &g1 * &g2;
            match classify(&prod, ord) {
                Ok(d) => r.check(d.class == DepthClass::Shallow, || format!("{ord}: {} * {}", lit(&g1), lit(&g2))),
                Err(e) => r.error(e, || lit(&prod)),
            }
        }
    }
}

fn shallow_routes(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(8);
    for ord in &cfg.orders {
        for _ in 0..cfg.samples {
            let Some(g) = shallow_sample(&mut rng, p, ord) else { break };
            let lhs = v_x_integral(&g, ord);
            let rhs = shallow_closed_form(&g, ord);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => r.compare(&a, &b, || format!("{ord}: {}", lit(&g))),
                (Err(e), _) | (_, Err(e)) => {
                    r.error(e, || format!("{ord}: {}", lit(&g)));
                    continue;
                }
            }
            // another point of the projection class gives the same value
            let d = classify(&g, ord).expect("sampled shallow");
            let lvl = d.distance.resolution_level as i32;
            let shift = sm::integral_series(&mut rng, p, true).shifted(lvl.max(1)).truncate(p.precision());
            let other = &d.gamma_prime + &QuatElem::from_series(shift);
            if is_unit(&other) {
                let alt = shallow_value(&(&g - &other), ord);
                match (alt, shallow_value(&d.gamma_dprime, ord)) {
                    (Ok(a), Ok(b)) => r.compare(&a, &b, || format!("{ord}: projection choice for {}", lit(&g))),
                    (Err(e), _) | (_, Err(e)) => r.error(e, || lit(&g)),
                }
            }
        }
    }
}

fn unit_distance_one(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(9);
    for ord in cfg.orders.iter().filter(|o| o.case == ExtCase::Ramified) {
        for _ in 0..cfg.samples {
            let e = sm::distance_one_unit(&mut rng, p);
            match v_x(&e, ord) {
                Ok(v) => r.compare(&v, &ValueExt::from_int(1), || format!("{ord}: {}", lit(&e))),
                Err(err) => r.error(err, || lit(&e)),
            }
        }
    }
}

fn coset_sum(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(10);
    for ord in &cfg.orders {
        let reps = match coset_representatives(p, ord) {
            Ok(x) => x,
            Err(e) => {
                r.error(e, || format!("coset representatives for {ord}"));
                continue;
            }
        };
        for _ in 0..cfg.samples {
            let Some(g) = deep_sample(&mut rng, p, ord) else { break };
            if is_in_order(&g, &ord.maximal()) == Membership::InUnitGroup {
                r.skip();
                continue;
            }
            let lhs = v_z(&g, ord);
            let mut rhs = Ok(ValueExt::from_int(0));
            for k in &reps {
                let kg = k * &g;
                rhs = rhs.and_then(|acc| Ok(acc + v_x_integral(&kg, ord)?));
            }
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => r.compare(&a, &b, || format!("{ord}: {}", lit(&g))),
                (Err(e), _) | (_, Err(e)) => r.error(e, || lit(&g)),
            }
        }
    }
}

fn ramified_chain(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(11);
    for ord in cfg.orders.iter().filter(|o| o.case == ExtCase::Ramified) {
        let index = ValueExt::from_int(ord.index(p.q()) as i64);
        for _ in 0..cfg.samples {
            let g = sm::ramified_hypothesis(&mut rng, p, ord);
            let parts = (v_y(&g, ord), v_z(&g, ord), v_abar(&g, ord));
            match parts {
                (Ok(y), Ok(z), Ok(a)) => {
                    r.compare(&y, &(z + a.clone()), || format!("{ord}: v_y vs v_z + v_abar at {}", lit(&g)));
                    r.compare(&a, &index, || format!("{ord}: v_abar vs index at {}", lit(&g)));
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => r.error(e, || lit(&g)),
            }
        }
    }
}

/// Level ≤ 2 orders of the sweep, where the GL₂ enumeration is affordable.
fn oracle_orders(cfg: &VerifyConfig) -> Vec<OrderSpec> {
    cfg.orders.iter().copied().filter(|o| o.level <= 2).collect()
}

/// γ within the hypotheses of the closed form for v_y and outside D⁺ ∪ D⁻.
fn vy_sample(rng: &mut SampleRng, p: FieldParams, ord: &OrderSpec) -> QuatElem {
    match ord.case {
        ExtCase::Ramified => sm::ramified_hypothesis(rng, p, ord),
        ExtCase::Unramified => draw(rng, |rng| sm::unit(rng, p), |g| {
            !is_normalizer_element(g, ord).unwrap_or(true)
        })
        .expect("random units are almost never normalizers"),
    }
}

fn gl2_samples(cfg: &VerifyConfig) -> usize {
    cfg.samples.clamp(1, 3)
}

fn gl2_vy(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) -> Result<()> {
    let mut rng = cfg.rng(12);
    for ord in oracle_orders(cfg) {
        let mut gammas: Vec<QuatElem> = (0..gl2_samples(cfg)).map(|_| vy_sample(&mut rng, p, &ord)).collect();
        if ord == OrderSpec::unramified(0) {
            gammas.push(&QuatElem::delta(p) + &QuatElem::pi_d(p));
        }
        for g in &gammas {
            let closed = match v_y(g, &ord) {
                Ok(v) => v,
                Err(e) => {
                    r.error(e, || lit(g));
                    continue;
                }
            };
            for &n in &cfg.gl2_levels {
                let o = gl2_oracle_vy(g, &ord, n)?;
                r.compare(&o.value, &closed, || format!("{ord} N={n}: {}", lit(g)));
            }
        }
    }
    Ok(())
}

/// Pairs with |μ₁|_D > |μ₂|_D among the level ≤ 2 orders.
pub fn pairing_pairs(orders: &[OrderSpec]) -> Vec<(OrderSpec, OrderSpec)> {
    let mut out = Vec::new();
    for a in orders {
        for b in orders {
            if a.v_mu() < b.v_mu() {
                out.push((*a, *b));
            }
        }
    }
    out
}

fn gl2_pairing(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) -> Result<()> {
    let mut rng = cfg.rng(13);
    for (o1, o2) in pairing_pairs(&oracle_orders(cfg)) {
        let closed = match intersection_pairing(p, &o1, &o2) {
            Ok(v) => v,
            Err(e) => {
                r.error(e, || format!("{o1} | {o2}"));
                continue;
            }
        };
        for &n in &cfg.gl2_levels {
            let o = gl2_oracle_pairing(p, &o1, &o2, None, n)?;
            r.compare(&o.value, &closed, || format!("{o1} | {o2} N={n}"));
        }
        // γ₀ only matters through |γ₀|_D
        let n = cfg.gl2_levels[0];
        let g0 = &QuatElem::pi_d_power(p, o1.level as i32 - o2.level as i32) * &sm::unit(&mut rng, p);
        let o = gl2_oracle_pairing(p, &o1, &o2, Some(&g0), n)?;
        r.compare(&o.value, &closed, || format!("{o1} | {o2} N={n} gamma0 = {}", lit(&g0)));
    }
    Ok(())
}

fn ps(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) -> Result<()> {
    let mut rng = cfg.rng(14);
    for ord in oracle_orders(cfg) {
        let closed = ValueExt::Finite(ps_closed(p, &ord)?);
        for _ in 0..gl2_samples(cfg) {
            let g = vy_sample(&mut rng, p, &ord);
            for &n in &cfg.gl2_levels {
                let o = gl2_oracle_vy(&g, &ord, n)?;
                if !o.certified {
                    r.skip();
                    continue;
                }
                r.compare(&ValueExt::Finite(bucket_sum(&o)), &closed, || {
                    format!("{ord} N={n}: sum of Omega(pi^n) buckets at {}", lit(&g))
                });
            }
            // v_y = ε [O_K:O^×]² |Δ|⁻¹ (P_s + P_d) with P_d from its own integral
            match ps_pd_decomposition(&g, &ord) {
                Ok(d) => match d.v_y {
                    Some(v) => r.compare(&d.v_y_from_parts, &v, || format!("{ord}: P_s + P_d at {}", lit(&g))),
                    None => r.skip(),
                },
                Err(e) => r.error(e, || lit(&g)),
            }
        }
    }
    Ok(())
}

fn infinite_detection(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(15);
    for ord in &cfg.orders {
        for _ in 0..cfg.samples {
            // O_D^× ∩ (D⁺ ∪ D⁻) → v_y = ∞
            let n = sm::normalizer_unit(&mut rng, p, ord.case);
            match v_y(&n, ord) {
                Ok(v) => r.compare(&v, &ValueExt::Infinite, || format!("{ord}: v_y at normalizer {}", lit(&n))),
                Err(e) => r.error(e, || lit(&n)),
            }
            // O^× → v_x = ∞
            let u = sm::order_unit(&mut rng, p, ord);
            match v_x(&u, ord) {
                Ok(v) => r.compare(&v, &ValueExt::Infinite, || format!("{ord}: v_x at order unit {}", lit(&u))),
                Err(e) => r.error(e, || lit(&u)),
            }
            // certified outside → finite
            let g = sm::unit_outside_order(&mut rng, p, ord);
            if is_in_order(&g, ord) == Membership::Outside {
                match v_x(&g, ord) {
                    Ok(v) => r.check(v.is_finite(), || format!("{ord}: v_x = {v} at outside point {}", lit(&g))),
                    Err(e) => r.error(e, || lit(&g)),
                }
            }
            let h = vy_sample(&mut rng, p, ord);
            match v_y(&h, ord) {
                Ok(v) => r.check(v.is_finite(), || format!("{ord}: v_y = {v} at non-normalizer {}", lit(&h))),
                Err(e) => r.error(e, || lit(&h)),
            }
        }
    }
}

fn integrality(p: FieldParams, cfg: &VerifyConfig, r: &mut IdentityReport) {
    let mut rng = cfg.rng(16);
    for ord in &cfg.orders {
        // the unramified maximal order is the known exception for v_x and v_z
        let exempt = ord.case == ExtCase::Unramified && ord.level == 0;
        for _ in 0..cfg.samples {
            let g = sm::unit_outside_order(&mut rng, p, ord);
            let mut vals = vec![("v_x", v_x(&g, ord)), ("v_z", v_z(&g, ord))];
            if ord.case == ExtCase::Ramified {
                vals.push(("v_abar", v_abar(&g, ord)));
            }
            for (what, v) in vals {
                match v {
                    Ok(v) if !v.is_finite() => r.skip(),
                    Ok(_) if exempt && what != "v_abar" => r.skip(),
                    Ok(v) => r.check(v.is_nonnegative_integer(), || format!("{ord}: {what} = {v} at {}", lit(&g))),
                    Err(e) => r.error(e, || lit(&g)),
                }
            }
            if exempt {
                let h = vy_sample(&mut rng, p, ord);
                let (_, minus) = pm_decompose(&h, ord).expect("mu is invertible");
                match (v_y(&h, ord), minus.v_d()) {
                    (Ok(v), Valuation::Exact(rr)) => {
                        r.compare(&v, &ValueExt::ratio(rr as i64 + 1, 2), || format!("(r+1)/2 at {}", lit(&h)))
                    }
                    (Ok(_), _) => r.skip(),
                    (Err(e), _) => r.error(e, || lit(&h)),
                }
            }
        }
    }
}
