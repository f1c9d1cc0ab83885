//! Orders of vanishing of `q^∘n - c` at an algebraic point, uniform bounds on
//! them, and the divisor `h` that every gcd of iterates divides.
//!
//! Notation: `λ` is the generator of the given field, `c0 = c(λ)`, `r` the
//! exact period of `c0` under `q`, `ℓ >= 1` the first time `λ` reaches `c0`.
//! `a` is the jet of `q^∘r` at `c0` and `b` the jet of `q^∘ℓ` at `λ`; `u` and
//! `e` are their first nonconstant orders.

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::config;
use crate::dynamics::{
    classify_cycle, compositional_power_check, orbit_default, CycleStatus, EscapeReason,
    OrbitRecord,
};
use crate::error::{Error, Result};
use crate::heights::weil_height_alg;
use crate::numfield::{
    jet_at, jet_compose, nf_eval, nf_invert, root_of_unity_order, Jet, NumberField,
    NumberFieldElem, RootOfUnity,
};
use crate::poly::{factor_irreducible, gcd, iterate, Poly};

/// Largest `e` with `p^e | f`.
pub fn mult_of_factor(f: &Poly, p: &Poly) -> usize {
    assert!(!f.is_zero(), "multiplicity in the zero polynomial");
    if p.is_constant() {
        return 0;
    }
    let mut e = 0;
    let mut rest = f.clone();
    while let Some(q) = rest.exact_div(p) {
        rest = q;
        e += 1;
    }
    e
}

/// Which branch of the case analysis produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CaseTag {
    NotPeriodic,
    ConstantC,
    U1Nontorsion,
    U1Torsion { s: u64, d: usize },
    Superattracting { u: usize },
}

/// The `n` at which `v_λ(q^∘n - c)` can be positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Congruence {
    /// `n = ell + r k`, `k >= 0`.
    Class { ell: usize, r: usize },
    Single { n: u64 },
    None,
}

impl Congruence {
    pub fn contains(&self, n: u64) -> bool {
        match *self {
            Congruence::Class { ell, r } => n >= ell as u64 && (n - ell as u64).is_multiple_of(r as u64),
            Congruence::Single { n: m } => n == m,
            Congruence::None => false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityCertificate {
    #[serde(serialize_with = "ser_field")]
    pub lambda_field: NumberField,
    #[serde(serialize_with = "ser_elem")]
    pub c0: NumberFieldElem,
    pub case: CaseTag,
    pub ell: Option<usize>,
    pub r: Option<usize>,
    pub e: Option<usize>,
    pub u: Option<usize>,
    pub bound_m: usize,
    pub congruence: Congruence,
    /// `(n, v)` pairs computed exactly where the generic bound does not apply.
    pub exceptional_ns: Vec<(u64, usize)>,
    pub notes: Vec<String>,
}

fn ser_field<S: Serializer>(k: &NumberField, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&k.modulus().render("t"))
}

fn ser_elem<S: Serializer>(a: &NumberFieldElem, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&a.render())
}

/// The orbit point `q^∘i(start)`, extending past the record when needed.
fn orbit_point(q: &Poly, orb: &OrbitRecord, i: u64) -> Result<NumberFieldElem> {
    let len = orb.points.len() as u64;
    if i < len {
        return Ok(orb.points[i as usize].clone());
    }
    if let (Some(pre), Some(per)) = (orb.preperiod, orb.period) {
        let j = pre as u64 + (i - pre as u64) % per as u64;
        return Ok(orb.points[j as usize].clone());
    }
    let cap = config::get().max_coeff_bits;
    let mut y = orb.points.last().unwrap().clone();
    for _ in len - 1..i {
        y = nf_eval(q, &y);
        if y.bits() > cap {
            return Err(Error::limit("orbit point bits", cap, y.bits()));
        }
    }
    Ok(y)
}

fn compose_chain(q: &Poly, orb: &OrbitRecord, from: u64, to: u64, k: usize, init: Jet) -> Result<Jet> {
    let mut acc = init;
    for i in from..to {
        let step = jet_at(q, &orbit_point(q, orb, i)?, k);
        acc = jet_compose(&step, &acc)?;
    }
    Ok(acc)
}

fn jet_power(j: &Jet, mut m: u64) -> Result<Jet> {
    let mut result = Jet::identity(j.center(), j.order());
    let mut base = j.clone();
    while m > 0 {
        if m & 1 == 1 {
            result = jet_compose(&base, &result)?;
        }
        m >>= 1;
        if m > 0 {
            base = jet_compose(&base, &base)?;
        }
    }
    Ok(result)
}

/// Jet of `q^∘n` at `orb.start`, order `k`. A periodic tail is handled by
/// powering the jet of the return map.
fn iterate_jet(q: &Poly, orb: &OrbitRecord, n: u64, k: usize) -> Result<Jet> {
    let start = Jet::identity(&orb.start, k);
    match (orb.preperiod, orb.period) {
        (Some(pre), Some(per)) if n > (pre + per) as u64 => {
            let (pre, per) = (pre as u64, per as u64);
            let head = compose_chain(q, orb, 0, pre, k, start)?;
            let center = orbit_point(q, orb, pre)?;
            let cycle = compose_chain(q, orb, pre, pre + per, k, Jet::identity(&center, k))?;
            let m = (n - pre) / per;
            let rem = (n - pre) % per;
            let body = jet_compose(&jet_power(&cycle, m)?, &head)?;
            compose_chain(q, orb, pre, pre + rem, k, body)
        }
        _ => compose_chain(q, orb, 0, n, k, start),
    }
}

/// Jet of `q^∘n` at the orbit start, with order doubled until a coefficient
/// of index `>= 1` is nonzero. Returns the jet and that index.
fn first_nonconstant(q: &Poly, orb: &OrbitRecord, n: u64) -> Result<(Jet, usize)> {
    let cap = config::get().max_degree;
    let mut k = 8;
    loop {
        let j = iterate_jet(q, orb, n, k)?;
        if let Some(i) = j.valuation_from(1) {
            return Ok((j, i));
        }
        k *= 2;
        if k > cap + 1 {
            return Err(Error::limit("jet order", cap as u64 + 1, k as u64));
        }
    }
}

/// `deg q^n`, saturating.
fn iterate_degree(q: &Poly, n: u64) -> u64 {
    let d = q.deg() as u64;
    u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .unwrap_or(u64::MAX)
}

fn direct_v_with(q: &Poly, c: &Poly, orb: &OrbitRecord, n: u64) -> Result<usize> {
    let lam = &orb.start;
    let c0 = nf_eval(c, lam);
    if orbit_point(q, orb, n)? != c0 {
        return Ok(0);
    }
    // v <= max(deg q^n, deg c) unless q^n = c.
    let bound = iterate_degree(q, n).max(c.deg() as u64);
    let cap = config::get().max_degree;
    let mut k = (c.deg() + 2).max(8);
    loop {
        let diff = iterate_jet(q, orb, n, k)?.sub(&jet_at(c, lam, k))?;
        if let Some(v) = diff.valuation() {
            return Ok(v);
        }
        if k as u64 > bound {
            return Err(Error::Degenerate(format!("q^{n} equals c")));
        }
        k *= 2;
        if k > cap + 1 {
            return Err(Error::limit("jet order", cap as u64 + 1, k as u64));
        }
    }
}

/// `v_λ(q^∘n - c)` for `λ` the generator of `field`, from jets.
pub fn direct_v(q: &Poly, c: &Poly, field: &NumberField, n: u64) -> Result<usize> {
    if q.deg() < 2 {
        return Err(Error::InvalidInput("direct_v needs deg q >= 2".into()));
    }
    let orb = orbit_default(q, &field.generator());
    direct_v_with(q, c, &orb, n)
}

/// Intermediate data of the case analysis.
#[derive(Clone, Debug)]
pub struct LemmaParams {
    pub c0: NumberFieldElem,
    pub lambda_orbit: OrbitRecord,
    pub c0_orbit: OrbitRecord,
    /// Exact period of `c0`, when it is periodic.
    pub r: Option<usize>,
    pub ell: Option<usize>,
    /// Jet of `q^∘r` at `c0` and its first nonconstant order.
    pub a: Option<(Jet, usize)>,
    /// Jet of `q^∘ℓ` at `λ` and its first nonconstant order.
    pub b: Option<(Jet, usize)>,
}

impl LemmaParams {
    pub fn u(&self) -> Option<usize> {
        self.a.as_ref().map(|(_, u)| *u)
    }

    pub fn e(&self) -> Option<usize> {
        self.b.as_ref().map(|(_, e)| *e)
    }
}

fn undecided_orbit(what: &str) -> Error {
    Error::Undecided(format!(
        "orbit of {what} neither closed nor escaped within {} steps",
        config::get().orbit_step_cap
    ))
}

pub fn lemma_close_params(q: &Poly, c: &Poly, field: &NumberField) -> Result<LemmaParams> {
    if q.deg() < 2 {
        return Err(Error::InvalidInput("the multiplicity bound needs deg q >= 2".into()));
    }
    let lam = field.generator();
    let c0 = nf_eval(c, &lam);
    let c0_orbit = orbit_default(q, &c0);
    if c0_orbit.escape == Some(EscapeReason::StepCap) {
        return Err(undecided_orbit("c(λ)"));
    }
    let r = if c0_orbit.is_periodic() {
        c0_orbit.period
    } else {
        None
    };
    let lambda_orbit = orbit_default(q, &lam);
    let ell = lambda_orbit.first_hit(&c0);
    if ell.is_none() && lambda_orbit.escape == Some(EscapeReason::StepCap) {
        return Err(undecided_orbit("λ"));
    }
    let a = match r {
        Some(r) => Some(first_nonconstant(q, &c0_orbit, r as u64)?),
        None => None,
    };
    let b = match ell {
        Some(l) => Some(first_nonconstant(q, &lambda_orbit, l as u64)?),
        None => None,
    };
    Ok(LemmaParams {
        c0,
        lambda_orbit,
        c0_orbit,
        r,
        ell,
        a,
        b,
    })
}

/// A uniform bound on `v_λ(q^∘n - c)` over all `n` with `q^∘n != c`.
pub fn multiplicity_bound(q: &Poly, c: &Poly, field: &NumberField) -> Result<MultiplicityCertificate> {
    if q.deg() < 2 {
        return Err(Error::InvalidInput("the multiplicity bound needs deg q >= 2".into()));
    }
    if let Some(k) = compositional_power_check(c, q) {
        return Err(Error::HypothesisViolation(format!("c = q^{k}")));
    }
    let lam = field.generator();
    if c.is_constant() {
        let c0 = nf_eval(c, &lam);
        match classify_cycle(q, &orbit_default(q, &c0)) {
            CycleStatus::InRamifiedCycle => {
                return Err(Error::HypothesisViolation(format!(
                    "constant {} lies in a ramified cycle of {q}",
                    c0.render()
                )))
            }
            CycleStatus::Undecided => return Err(undecided_orbit("c")),
            _ => {}
        }
    }
    let p = lemma_close_params(q, c, field)?;
    let mut cert = MultiplicityCertificate {
        lambda_field: field.clone(),
        c0: p.c0.clone(),
        case: CaseTag::NotPeriodic,
        ell: p.ell,
        r: p.r,
        e: p.e(),
        u: p.u(),
        bound_m: 0,
        congruence: Congruence::None,
        exceptional_ns: Vec::new(),
        notes: Vec::new(),
    };
    let Some(r) = p.r else {
        // At most one n reaches c0, since two hits would make c0 periodic.
        if let Some(l) = p.ell {
            let v = direct_v_with(q, c, &p.lambda_orbit, l as u64)?;
            cert.bound_m = v;
            cert.congruence = Congruence::Single { n: l as u64 };
            cert.exceptional_ns.push((l as u64, v));
        }
        return Ok(cert);
    };
    let (a, u) = p.a.clone().expect("jet exists for periodic c0");
    let a1 = a.coeff(1).clone();
    cert.case = classify_periodic(q, c, &p, &a1, u, r)?;
    let Some(ell) = p.ell else {
        cert.notes.push("λ never reaches c(λ): v = 0 for every n".into());
        return Ok(cert);
    };
    if p.lambda_orbit.start == p.c0 {
        cert.notes.push(format!("λ = c(λ); ℓ is taken as the period {ell}"));
    }
    cert.congruence = Congruence::Class { ell, r };
    let (b, e) = p.b.clone().expect("jet exists when ℓ exists");
    let orb = &p.lambda_orbit;
    let n_of = |k: u64| ell as u64 + r as u64 * k;
    match cert.case {
        CaseTag::ConstantC => {
            cert.bound_m = e;
        }
        CaseTag::Superattracting { u } => {
            let dc = c.deg();
            let mut m = dc;
            let mut k = 0u32;
            while (e as u64).saturating_mul((u as u64).saturating_pow(k)) <= dc as u64 {
                let n = n_of(k as u64);
                let v = direct_v_with(q, c, orb, n)?;
                cert.exceptional_ns.push((n, v));
                m = m.max(v);
                k += 1;
            }
            cert.bound_m = m;
        }
        CaseTag::U1Nontorsion => {
            let cj = jet_at(c, &orb.start, e + 1);
            let rho = &cj.coeff(e).clone() * &nf_invert(b.coeff(e))?;
            let mut m = e;
            for k in exponent_solutions(&a1, &rho)? {
                let n = n_of(k);
                let v = direct_v_with(q, c, orb, n)?;
                cert.exceptional_ns.push((n, v));
                m = m.max(v);
            }
            cert.bound_m = m;
        }
        CaseTag::U1Torsion { s, d } => {
            let alpha = torsion_alpha(q, &p, r, s, d)?;
            let mut m = 0;
            for j in 0..s {
                let y = n_of(j);
                let (_, t) = first_nonconstant(q, orb, y)?;
                let order = (t * d).max(c.deg()) + 1;
                let g = iterate_jet(q, orb, y, order)?;
                let cj = jet_at(c, &orb.start, order);
                let beta_t = g.coeff(t);
                let denom = &alpha * &beta_t.pow(d as u64);
                let num = cj.coeff(t * d) - g.coeff(t * d);
                let kstar = &num * &nf_invert(&denom)?;
                m = m.max(t * d);
                if let Some(k) = nonneg_integer(&kstar) {
                    let n = y + r as u64 * s * k;
                    let v = direct_v_with(q, c, orb, n)?;
                    cert.exceptional_ns.push((n, v));
                    m = m.max(v);
                }
            }
            cert.bound_m = m;
        }
        CaseTag::NotPeriodic => unreachable!("periodic branch"),
    }
    cert.exceptional_ns.sort_unstable();
    Ok(cert)
}

fn nonneg_integer(a: &NumberFieldElem) -> Option<u64> {
    let r = a.as_rational()?;
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    r.to_integer().to_u64()
}

fn classify_periodic(
    q: &Poly,
    c: &Poly,
    p: &LemmaParams,
    a1: &NumberFieldElem,
    u: usize,
    r: usize,
) -> Result<CaseTag> {
    if c.is_constant() {
        return Ok(CaseTag::ConstantC);
    }
    if u > 1 {
        return Ok(CaseTag::Superattracting { u });
    }
    match root_of_unity_order(a1, config::get().root_of_unity_cap)? {
        RootOfUnity::Not => Ok(CaseTag::U1Nontorsion),
        RootOfUnity::Order(s) => {
            let (_, d) = return_map_nonlinearity(q, p, r, s)?;
            Ok(CaseTag::U1Torsion { s, d })
        }
        RootOfUnity::Undecided { cap } => Err(Error::Undecided(format!(
            "multiplier {} may be a root of unity of order above {cap}",
            a1.render()
        ))),
    }
}

/// Jet of `q^∘(rs)` at `c0` and the first order `d >= 2` where it differs
/// from the identity.
fn return_map_nonlinearity(q: &Poly, p: &LemmaParams, r: usize, s: u64) -> Result<(Jet, usize)> {
    let cap = config::get().max_degree;
    let n = r as u64 * s;
    let mut k = 8;
    loop {
        let j = iterate_jet(q, &p.c0_orbit, n, k)?;
        if let Some(d) = j.valuation_from(2) {
            return Ok((j, d));
        }
        k *= 2;
        if k > cap + 1 {
            return Err(Error::limit("jet order", cap as u64 + 1, k as u64));
        }
    }
}

fn torsion_alpha(q: &Poly, p: &LemmaParams, r: usize, s: u64, d: usize) -> Result<NumberFieldElem> {
    let (j, _) = return_map_nonlinearity(q, p, r, s)?;
    Ok(j.coeff(d).clone())
}

/// All `k >= 0` with `a^k = rho`, for `a` nonzero and not a root of unity.
///
/// Then `h(a) > 0` and `h(a^k) = k h(a)`, so `k` is pinned to the interval
/// `h(rho) / h(a)` widened by the height error bounds; every integer there is
/// tested by exact powering.
fn exponent_solutions(a: &NumberFieldElem, rho: &NumberFieldElem) -> Result<Vec<u64>> {
    if rho.is_zero() {
        return Ok(Vec::new());
    }
    let cap = config::get().exceptional_k_cap;
    let ha = weil_height_alg(a)?;
    let hr = weil_height_alg(rho)?;
    let lo_a = ha.value - ha.error_bound;
    if lo_a <= 0.0 {
        return Err(Error::Undecided(format!(
            "height of multiplier {} is not separated from zero",
            a.render()
        )));
    }
    let kmax = ((hr.value + hr.error_bound) / lo_a).floor();
    let kmin = ((hr.value - hr.error_bound) / (ha.value + ha.error_bound)).ceil().max(0.0);
    if kmax > cap as f64 {
        return Err(Error::Undecided(format!(
            "exponent search range reaches {kmax}, cap is {cap}"
        )));
    }
    let (kmin, kmax) = (kmin as u64, kmax as u64);
    let mut out = Vec::new();
    let mut power = a.pow(kmin);
    for k in kmin..=kmax {
        if &power == rho {
            out.push(k);
        }
        power = &power * a;
    }
    Ok(out)
}

/// Which map a factor's certificate was computed against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Against {
    F,
    G,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorCertificate {
    pub factor: Poly,
    pub against: Against,
    pub certificate: MultiplicityCertificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorReport {
    pub h: Poly,
    pub factors: Vec<FactorCertificate>,
}

fn field_of(p: &Poly) -> NumberField {
    if p.deg() == 1 {
        NumberField::rational_point(&(-p.coeff(0) / p.coeff(1)))
    } else {
        NumberField::trusted(p)
    }
}

/// `h = ∏ p^{M_p}` over the irreducible factors `p` seen in
/// `gcd(f^∘m - c, g^∘n - c)`, `1 <= m, n <= grid_n`, checked to be divisible
/// by every one of those gcds.
pub fn divisor_h(f: &Poly, g: &Poly, c: &Poly, grid_n: usize) -> Result<DivisorReport> {
    if f.deg() < 2 || g.deg() < 2 {
        return Err(Error::InvalidInput("divisor_h needs deg f, deg g >= 2".into()));
    }
    for (name, q) in [("f", f), ("g", g)] {
        if let Some(k) = compositional_power_check(c, q) {
            return Err(Error::HypothesisViolation(format!("c = {name}^{k}")));
        }
    }
    let fi: Vec<Poly> = (1..=grid_n).map(|m| Ok(&iterate(f, m)? - c)).collect::<Result<_>>()?;
    let gi: Vec<Poly> = (1..=grid_n).map(|n| Ok(&iterate(g, n)? - c)).collect::<Result<_>>()?;
    let cells: Vec<Poly> = (0..grid_n * grid_n)
        .into_par_iter()
        .map(|i| gcd(&fi[i / grid_n], &gi[i % grid_n]))
        .collect();
    let mut factors: Vec<Poly> = Vec::new();
    for cell in &cells {
        if cell.deg() == 0 {
            continue;
        }
        for (p, _) in factor_irreducible(cell)?.factors {
            if !factors.contains(&p) {
                factors.push(p);
            }
        }
    }
    factors.sort();
    let certs: Vec<FactorCertificate> = factors
        .par_iter()
        .map(|p| {
            let field = field_of(p);
            match multiplicity_bound(f, c, &field) {
                Ok(certificate) => Ok(FactorCertificate {
                    factor: p.clone(),
                    against: Against::F,
                    certificate,
                }),
                Err(err) if matches!(err, Error::HypothesisViolation(_)) || err.is_resource_or_undecided() => {
                    multiplicity_bound(g, c, &field).map(|certificate| FactorCertificate {
                        factor: p.clone(),
                        against: Against::G,
                        certificate,
                    })
                }
                Err(err) => Err(err),
            }
        })
        .collect::<Result<_>>()?;
    let mut h = Poly::one();
    for fc in &certs {
        h = &h * &fc.factor.pow(fc.certificate.bound_m);
    }
    for (i, cell) in cells.iter().enumerate() {
        if !cell.divides(&h) {
            return Err(Error::Verification(format!(
                "gcd at (m, n) = ({}, {}) is {cell}, which does not divide h = {h}",
                i / grid_n + 1,
                i % grid_n + 1
            )));
        }
    }
    Ok(DivisorReport { h, factors: certs })
}
