//! Exact rational arithmetic and dense univariate polynomials over the rationals.

mod factor;
mod gcd;
pub(crate) mod modp;
pub(crate) mod zpoly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::config;
use crate::error::{Error, Result};

pub use factor::{factor_irreducible, is_irreducible, rational_roots, squarefree_factor, FactorList};
pub use gcd::{gcd, gcd_subresultant, resultant};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Build a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Bits needed for numerator and denominator together.
pub fn rational_bits(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Dense polynomial; `coeffs[i]` is the coefficient of `x^i`. The highest
/// stored coefficient is never zero; the zero polynomial stores nothing.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| int(c)).collect())
    }

    pub fn from_bigints(cs: &[BigInt]) -> Self {
        Poly::new(cs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    /// `x - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Poly::new(vec![-a, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| c.is_one())
    }

    pub fn lc(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// The constant value, if this polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Largest coefficient size in bits (numerator plus denominator).
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(rational_bits).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.lc() {
            None => Poly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Split as `content * primitive` where `primitive` has coprime integer
    /// coefficients and positive leading coefficient.
    pub fn to_primitive(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::zero(), Vec::new());
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut g = zpoly::content(&ints);
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (Rational::new(g, den), prim)
    }

    /// Common-denominator form: `self = ints / den` with `den > 0`.
    pub fn to_integer_parts(&self) -> (BigInt, Vec<BigInt>) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (den, ints)
    }

    fn from_integer_parts(den: &BigInt, ints: &[BigInt]) -> Poly {
        Poly::new(
            ints.iter()
                .map(|c| Rational::new(c.clone(), den.clone()))
                .collect(),
        )
    }

    /// Value at `x = a/b`, computed as `F(a, b) / (D b^d)` with `F = D f`
    /// integral.
    ///
    /// A prime dividing both parts divides `b` (hence the leading coefficient
    /// of `F`) or `D`, so cancellation only needs gcds against the small
    /// integer `D · lc(F)` rather than a gcd of the two big parts.
    pub fn eval(&self, x: &Rational) -> Rational {
        if self.coeffs.len() <= 1 {
            return self.coeffs.first().cloned().unwrap_or_else(Rational::zero);
        }
        let (den, ints) = self.to_integer_parts();
        let (a, b) = (x.numer(), x.denom());
        let lead = ints.last().unwrap();
        let mut num = lead.clone();
        let mut bpow = BigInt::one();
        for c in ints.iter().rev().skip(1) {
            bpow *= b;
            num = num * a + c * &bpow;
        }
        if num.is_zero() {
            return Rational::zero();
        }
        let k = (lead * &den).abs();
        let mut den = den * bpow;
        loop {
            let t = (&num % &k).gcd(&(&den % &k)).gcd(&k);
            if t.is_one() {
                break;
            }
            num /= &t;
            den /= &t;
        }
        Rational::new_raw(num, den)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division over the rationals. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let Some(da) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if da < dd {
            return (Poly::zero(), self.clone());
        }
        let inv = d.coeffs[dd].recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); da - dd + 1];
        for i in (0..=da - dd).rev() {
            let c = &r[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for j in 0..=dd {
                if !d.coeffs[j].is_zero() {
                    let t = &c * &d.coeffs[j];
                    r[i + j] -= t;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// `self / d` when the division is exact. Uses integer trial division, so
    /// a non-divisor is rejected early.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (ca, a) = self.to_primitive();
        let (cd, b) = d.to_primitive();
        let q = zpoly::exact_div(&a, &b)?;
        Some(Poly::from_bigints(&q).scale(&(ca / cd)))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.exact_div(self).is_some()
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicity of `x` as a factor (`None` for the zero polynomial).
    pub fn valuation_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        compose(self, g)
    }

    /// `self^∘n`, checked against the configured caps.
    pub fn iterate(&self, n: usize) -> Result<Poly> {
        iterate(self, n)
    }

    /// Render with a chosen variable name.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.render("x"))
    }
}

// Ratio's own Hash walks the continued fraction, which recurses once per
// partial quotient; coefficients are kept reduced, so hash the parts.
impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_usize(self.coeffs.len());
        for c in &self.coeffs {
            c.numer().hash(state);
            c.denom().hash(state);
        }
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree, then lexicographically by coefficients from the constant
/// term upward.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.is_constant() {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.is_constant() {
            return self.scale(&rhs.coeffs[0]);
        }
        let (da, a) = self.to_integer_parts();
        let (db, b) = rhs.to_integer_parts();
        Poly::from_integer_parts(&(da * db), &zpoly::mul(&a, &b))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render("x"))
    }
}

/// Serde helpers writing rationals as `"a/b"` strings (`"a"` for integers).
pub mod serde_rational {
    use super::Rational;

    pub fn serialize<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn option<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.collect_str(r),
            None => s.serialize_none(),
        }
    }
}

/// `f(g(x))`, computed by Horner's rule on common-denominator integer forms so
/// that rational normalization happens once at the end.
pub fn compose(f: &Poly, g: &Poly) -> Poly {
    let Some(df) = f.degree() else {
        return Poly::zero();
    };
    if df == 0 || g.is_constant() {
        return Poly::constant(f.eval(&g.coeff(0)));
    }
    let (den_f, fi) = f.to_integer_parts();
    let (den_g, gi) = g.to_integer_parts();
    // acc_i = acc_{i+1} * G + F_i * Dg^(df - i); result = acc_0 / (Df * Dg^df)
    let mut dg_pows = Vec::with_capacity(df + 1);
    dg_pows.push(BigInt::one());
    for i in 1..=df {
        let next = &dg_pows[i - 1] * &den_g;
        dg_pows.push(next);
    }
    let mut acc = vec![fi[df].clone()];
    for i in (0..df).rev() {
        acc = zpoly::mul(&acc, &gi);
        if !fi[i].is_zero() {
            let t = &fi[i] * &dg_pows[df - i];
            if acc.is_empty() {
                acc.push(t);
            } else {
                acc[0] += t;
            }
        }
    }
    zpoly::trim(&mut acc);
    Poly::from_integer_parts(&(den_f * &dg_pows[df]), &acc)
}

/// `f^∘n`, with `f^∘0 = x`. Fails with a resource-limit error when the degree
/// or coefficient size would exceed the configured caps.
pub fn iterate(f: &Poly, n: usize) -> Result<Poly> {
    let cfg = config::get();
    let d = f.deg() as u64;
    if n > 0 && d >= 2 {
        let mut deg: u64 = 1;
        for _ in 0..n {
            deg = deg.saturating_mul(d);
            if deg > cfg.max_degree as u64 {
                return Err(Error::limit("iterate degree", cfg.max_degree as u64, deg));
            }
        }
    }
    let mut acc = Poly::x();
    for _ in 0..n {
        acc = compose(f, &acc);
        let bits = acc.max_coeff_bits();
        if bits > cfg.max_coeff_bits {
            return Err(Error::limit("coefficient bits", cfg.max_coeff_bits, bits));
        }
    }
    Ok(acc)
}

/// Formal derivative.
pub fn derivative(f: &Poly) -> Poly {
    f.derivative()
}
