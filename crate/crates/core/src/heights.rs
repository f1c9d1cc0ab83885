//! Weil heights and canonical heights.
//!
//! Algebraic heights use the Mahler-measure identity
//! `h(α) = (1/k) log a₀ + (1/D) Σ_σ log⁺|σ(α)|`, where `a₀` is the leading
//! coefficient of the primitive integer minimal polynomial (degree `k`) and
//! `σ` runs over the `D` complex embeddings of the ambient field.
//!
//! Canonical heights are the limit `h(f^N(x)) / d^N`. With `C₀` bounding
//! `|h(f(y)) - d h(y)|` for all algebraic `y`, the telescoping estimate gives
//! `|ĥ(x) - h(f^N(x))/d^N| <= C₀ / ((d - 1) d^N)`. The upper half of `C₀` is
//! the triangle inequality; the lower half comes from the cofactor identity
//! `a F + b D Y^d = R X^(2d-1)` with the resultant `R` cancelling by the
//! product formula, and Hadamard's bound on the cofactor coefficients.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::config;
use crate::dynamics::orbit_default;
use crate::error::{Error, Result};
use crate::numfield::{min_poly, NumberField, NumberFieldElem};
use crate::poly::{factor_irreducible, iterate, Poly, Rational};

/// A height with an absolute error bound, natural-log scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeightValue {
    pub value: f64,
    pub error_bound: f64,
}

/// How a canonical height was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeightMethod {
    /// The orbit closed up; the height is exactly zero.
    PreperiodicOrbit,
    /// `f = x^d`, where `ĥ = h` exactly.
    PoweringMap,
    /// `h(f^N(x)) / d^N` with the comparison-constant error bound.
    Limit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalHeight {
    pub value: f64,
    pub error_bound: f64,
    pub method: HeightMethod,
    /// Iterations used (orbit length for the preperiodic case).
    pub steps_used: usize,
    /// `C₀ / (d - 1)`, present for the limit method.
    pub comparison_constant: Option<f64>,
}

impl CanonicalHeight {
    pub fn height(&self) -> HeightValue {
        HeightValue {
            value: self.value,
            error_bound: self.error_bound,
        }
    }
}

/// Natural log of a nonzero integer's absolute value, valid far beyond f64 range.
pub fn ln_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `h(a/b) = log max(|a|, b)`.
pub fn weil_height(x: &Rational) -> HeightValue {
    if x.is_zero() {
        return HeightValue {
            value: 0.0,
            error_bound: 0.0,
        };
    }
    let big = if x.numer().abs() > *x.denom() {
        x.numer().abs()
    } else {
        x.denom().clone()
    };
    let value = ln_abs(&big);
    HeightValue {
        value,
        error_bound: value * 4.0 * f64::EPSILON,
    }
}

/// Representations above this many bits are not evaluated in double precision.
const FLOAT_SAFE_BITS: u64 = 960;

/// Absolute error assumed for each embedding of the field modulus.
const ROOT_REL_ERROR: f64 = 1e-10;

/// Weil height of an algebraic number.
pub fn weil_height_alg(a: &NumberFieldElem) -> Result<HeightValue> {
    if let Some(r) = a.as_rational() {
        return Ok(weil_height(&r));
    }
    if a.bits() > FLOAT_SAFE_BITS {
        return Err(Error::limit("height evaluation bits", FLOAT_SAFE_BITS, a.bits()));
    }
    let field = a.field();
    let m = min_poly(a)?;
    let (_, prim) = m.to_primitive();
    let k = m.deg() as f64;
    let lead = ln_abs(prim.last().unwrap());
    let roots = field.embeddings()?;
    let cs: Vec<f64> = a
        .repr()
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap())
        .collect();
    let d = roots.len() as f64;
    let mut sum = 0.0;
    let mut err = 0.0;
    for z in &roots {
        let r = z.norm();
        let mut v = num_complex::Complex64::zero();
        let mut mag = 0.0;
        let mut dmag = 0.0;
        for (i, c) in cs.iter().enumerate().rev() {
            v = v * z + c;
            mag = mag * r + c.abs();
            if i > 0 {
                dmag = dmag * r + i as f64 * c.abs();
            }
        }
        let e = ROOT_REL_ERROR * r.max(1.0) * dmag + 8.0 * d * f64::EPSILON * mag;
        let n = v.norm();
        if n > 1.0 {
            sum += n.ln();
        }
        err += e / (n - e).max(1.0);
    }
    let value = lead / k + sum / d;
    Ok(HeightValue {
        value,
        error_bound: err / d + 4.0 * f64::EPSILON * value.abs(),
    })
}

/// `C₀` with `|h(f(y)) - d h(y)| <= C₀` for every algebraic `y`.
pub fn comparison_constant(f: &Poly) -> f64 {
    let d = f.deg();
    let (den, mut ints) = f.to_integer_parts();
    let g = ints.iter().fold(den.clone(), |acc, c| num_integer::Integer::gcd(&acc, c));
    let den = &den / &g;
    for c in ints.iter_mut() {
        *c = &*c / &g;
    }
    let max_a = ints.iter().map(|c| c.abs()).max().unwrap_or_default();
    let h = if max_a > den { max_a } else { den.clone() };
    let upper = ((d + 1) as f64).ln() + ln_abs(&h);
    let norm2_sq: BigInt = ints.iter().map(|c| c * c).sum();
    let ln_norm = (ln_abs(&norm2_sq) / 2.0).max(0.0);
    let lower = ((2 * d) as f64).ln() + d as f64 * ln_norm + d as f64 * ln_abs(&den).max(0.0);
    upper.max(lower)
}

fn is_monic_power(f: &Poly) -> bool {
    let d = f.deg();
    f.is_monic() && f.coeffs()[..d].iter().all(|c| c.is_zero())
}

/// Canonical height `ĥ_f(x)`, using at most `steps` iterations.
pub fn canonical_height(f: &Poly, x: &NumberFieldElem, steps: usize) -> Result<CanonicalHeight> {
    let d = f.deg();
    if d < 2 {
        return Err(Error::InvalidInput("canonical height needs degree >= 2".into()));
    }
    let orb = orbit_default(f, x);
    if let (Some(pre), Some(per)) = (orb.preperiod, orb.period) {
        return Ok(CanonicalHeight {
            value: 0.0,
            error_bound: 0.0,
            method: HeightMethod::PreperiodicOrbit,
            steps_used: pre + per,
            comparison_constant: None,
        });
    }
    if is_monic_power(f) {
        let h = weil_height_alg(x)?;
        return Ok(CanonicalHeight {
            value: h.value,
            error_bound: h.error_bound,
            method: HeightMethod::PoweringMap,
            steps_used: 0,
            comparison_constant: None,
        });
    }
    let c = comparison_constant(f) / (d as f64 - 1.0);
    let mut y = x.clone();
    let mut n = 0;
    // Algebraic phase: iterate in the field until the value turns rational
    // or gets too large to embed in double precision.
    while n < steps && y.as_rational().is_none() {
        let next = crate::numfield::nf_eval(f, &y);
        let budget = if next.as_rational().is_some() {
            RATIONAL_BITS
        } else {
            FLOAT_SAFE_BITS
        };
        if next.bits() > budget {
            break;
        }
        y = next;
        n += 1;
    }
    let h = match y.as_rational() {
        Some(r) => {
            let (h, extra) = rational_limit(f, &r, steps - n);
            n += extra;
            h
        }
        None => weil_height_alg(&y)?,
    };
    let scale = (d as f64).powi(n as i32);
    Ok(CanonicalHeight {
        value: h.value / scale,
        error_bound: (c + h.error_bound) / scale,
        method: HeightMethod::Limit,
        steps_used: n,
        comparison_constant: Some(c),
    })
}

/// Size budget for rational orbit values handled with gcd normalization.
const RATIONAL_BITS: u64 = 1 << 16;

/// Iterate a rational point up to `steps` times within the size budget;
/// returns the height of the last value and the number of steps taken.
///
/// When `f` has integer coefficients and leading coefficient ±1, the image of
/// a reduced fraction `a/b` is `F(a, b) / b^d`, again reduced, so values can
/// grow to the coefficient cap without any gcd work.
fn rational_limit(f: &Poly, y: &Rational, steps: usize) -> (HeightValue, usize) {
    let (den, ints) = f.to_integer_parts();
    let d = f.deg();
    let unit_lead = ints[d].abs() == BigInt::from(1);
    if den == BigInt::from(1) && unit_lead {
        let cap = config::get().max_coeff_bits;
        let mut a = y.numer().clone();
        let mut b = y.denom().clone();
        let mut n = 0;
        while n < steps {
            let mut num = ints[d].clone();
            let mut bpow = BigInt::from(1);
            for i in (0..d).rev() {
                bpow *= &b;
                num = num * &a + &ints[i] * &bpow;
            }
            if num.bits() + bpow.bits() > cap {
                break;
            }
            a = num;
            b = bpow;
            n += 1;
        }
        let big = if a.abs() > b { a.abs() } else { b };
        let value = if big.is_zero() { 0.0 } else { ln_abs(&big) };
        return (
            HeightValue {
                value,
                error_bound: value * 4.0 * f64::EPSILON,
            },
            n,
        );
    }
    let mut y = y.clone();
    let mut n = 0;
    while n < steps {
        let next = f.eval(&y);
        if crate::poly::rational_bits(&next) > RATIONAL_BITS {
            break;
        }
        y = next;
        n += 1;
    }
    (weil_height(&y), n)
}

/// One row of the special-point probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    pub factor: Poly,
    pub factor_degree: usize,
    pub height: f64,
    pub error: f64,
    pub method: HeightMethod,
    /// `B / (d^n - deg c)` with `B` fitted at the first row.
    pub predicted_bound: Option<f64>,
}

/// For each `n`, take a root λₙ of `f^∘n - c` (rational roots first, then
/// the lowest-degree irreducible factor, ties broken by the smallest
/// coefficient sequence) and report `ĥ_f(λₙ)` next to the predicted decay
/// `B / (d^n - deg c)`.
pub fn special_probe(
    f: &Poly,
    c: &Poly,
    ns: std::ops::RangeInclusive<usize>,
    steps: usize,
) -> Result<Vec<ProbeRow>> {
    let d = f.deg();
    if d < 2 {
        return Err(Error::InvalidInput("special probe needs degree >= 2".into()));
    }
    let mut rows = Vec::new();
    let mut b: Option<f64> = None;
    for n in ns {
        let fnc = &iterate(f, n)? - c;
        if fnc.is_zero() {
            return Err(Error::Degenerate(format!("f^{n} equals c")));
        }
        let fl = factor_irreducible(&fnc)?;
        let Some((p, _)) = fl.factors.iter().min_by(|a, b| a.0.cmp(&b.0)) else {
            return Err(Error::Degenerate(format!("f^{n} - c is constant")));
        };
        let field = NumberField::trusted(p);
        let h = canonical_height(f, &field.generator(), steps)?;
        let denom = (d as f64).powi(n as i32) - c.deg() as f64;
        let b = *b.get_or_insert(h.value * denom);
        rows.push(ProbeRow {
            n,
            factor: p.clone(),
            factor_degree: p.deg(),
            height: h.value,
            error: h.error_bound,
            method: h.method,
            predicted_bound: (denom > 0.0).then(|| b / denom),
        });
    }
    Ok(rows)
}
