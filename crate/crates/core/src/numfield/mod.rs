//! Number fields `Q[t]/(p(t))`, their elements, and jets over them.
//!
//! An algebraic point λ is carried as the class of `t` in the field cut out by
//! its minimal polynomial, so every zero test is exact. The rationals are the
//! degree-one field with modulus `x`.

mod embed;
mod jet;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::config;
use crate::error::{Error, Result};
use crate::poly::{gcd, is_irreducible, resultant, Poly, Rational};

pub use embed::poly_roots;
pub use jet::{jet_at, jet_compose, Jet};

struct Inner {
    modulus: Poly,
    embeddings: OnceLock<Result<Vec<Complex64>>>,
}

/// `Q[t]/(p)` for a monic irreducible `p`. Cheap to clone.
#[derive(Clone)]
pub struct NumberField(Arc<Inner>);

impl NumberField {
    /// Field defined by `modulus`, made monic and checked irreducible.
    pub fn new(modulus: &Poly) -> Result<Self> {
        if modulus.deg() == 0 {
            return Err(Error::InvalidInput("field modulus must be nonconstant".into()));
        }
        if !is_irreducible(modulus)? {
            return Err(Error::InvalidInput(format!(
                "field modulus {modulus} is not irreducible"
            )));
        }
        Ok(Self::trusted(modulus))
    }

    /// Skip the irreducibility check (the caller got `modulus` from a factorization).
    pub(crate) fn trusted(modulus: &Poly) -> Self {
        NumberField(Arc::new(Inner {
            modulus: modulus.monic(),
            embeddings: OnceLock::new(),
        }))
    }

    /// The rationals, as `Q[t]/(t)`.
    pub fn rationals() -> Self {
        Self::trusted(&Poly::x())
    }

    /// `Q[t]/(t - a)`, whose generator is the rational `a`.
    pub fn rational_point(a: &Rational) -> Self {
        Self::trusted(&Poly::linear_root(a))
    }

    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.deg()
    }

    /// Complex roots of the modulus: reals ascending, then conjugate pairs
    /// with the upper half-plane member first. Computed once per field.
    pub fn embeddings(&self) -> Result<Vec<Complex64>> {
        self.0
            .embeddings
            .get_or_init(|| poly_roots(&self.0.modulus, config::get().seed))
            .clone()
    }

    /// The class of `t`.
    pub fn generator(&self) -> NumberFieldElem {
        self.elem(Poly::x())
    }

    pub fn elem(&self, repr: Poly) -> NumberFieldElem {
        let repr = if repr.deg() >= self.degree() && !repr.is_zero() {
            repr.rem(&self.0.modulus)
        } else {
            repr
        };
        NumberFieldElem {
            field: self.clone(),
            repr,
        }
    }

    pub fn from_rational(&self, a: Rational) -> NumberFieldElem {
        self.elem(Poly::constant(a))
    }

    pub fn zero(&self) -> NumberFieldElem {
        self.elem(Poly::zero())
    }

    pub fn one(&self) -> NumberFieldElem {
        self.elem(Poly::one())
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus == other.0.modulus
    }
}

impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.0.modulus.render("t"))
    }
}

/// Residue class `repr mod p`, with `deg repr < deg p`.
#[derive(Clone)]
pub struct NumberFieldElem {
    field: NumberField,
    repr: Poly,
}

impl NumberFieldElem {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn repr(&self) -> &Poly {
        &self.repr
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.repr.is_one()
    }

    /// The value when it is rational (for a degree-one field this is always so).
    pub fn as_rational(&self) -> Option<Rational> {
        if self.field.degree() == 1 {
            // repr is constant; the generator t equals the root of the modulus
            return Some(self.repr.coeff(0));
        }
        self.repr.as_constant()
    }

    /// Size of the representation: largest coefficient bit count.
    pub fn bits(&self) -> u64 {
        self.repr.max_coeff_bits()
    }

    fn check_same(&self, other: &Self) {
        assert!(self.field == other.field, "elements of different number fields");
    }

    pub fn inv(&self) -> Result<NumberFieldElem> {
        nf_invert(self)
    }

    pub fn pow(&self, mut e: u64) -> NumberFieldElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image under each complex embedding, in the order of [`NumberField::embeddings`].
    pub fn conjugates(&self) -> Result<Vec<Complex64>> {
        let roots = self.field.embeddings()?;
        let cs: Vec<f64> = self
            .repr
            .coeffs()
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        Ok(roots
            .iter()
            .map(|z| cs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c))
            .collect())
    }

    pub fn render(&self) -> String {
        self.repr.render("t")
    }
}

impl PartialEq for NumberFieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.repr == other.repr
    }
}

impl Eq for NumberFieldElem {}

impl Hash for NumberFieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl fmt::Debug for NumberFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.render(), self.field.modulus().render("t"))
    }
}

impl fmt::Display for NumberFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &NumberFieldElem {
    type Output = NumberFieldElem;
    fn add(self, rhs: &NumberFieldElem) -> NumberFieldElem {
        self.check_same(rhs);
        NumberFieldElem {
            field: self.field.clone(),
            repr: &self.repr + &rhs.repr,
        }
    }
}

impl Sub for &NumberFieldElem {
    type Output = NumberFieldElem;
    fn sub(self, rhs: &NumberFieldElem) -> NumberFieldElem {
        self.check_same(rhs);
        NumberFieldElem {
            field: self.field.clone(),
            repr: &self.repr - &rhs.repr,
        }
    }
}

impl Mul for &NumberFieldElem {
    type Output = NumberFieldElem;
    fn mul(self, rhs: &NumberFieldElem) -> NumberFieldElem {
        self.check_same(rhs);
        self.field.elem(&self.repr * &rhs.repr)
    }
}

impl Neg for &NumberFieldElem {
    type Output = NumberFieldElem;
    fn neg(self) -> NumberFieldElem {
        NumberFieldElem {
            field: self.field.clone(),
            repr: -&self.repr,
        }
    }
}

/// Inverse by the extended Euclidean algorithm against the modulus.
pub fn nf_invert(a: &NumberFieldElem) -> Result<NumberFieldElem> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if let Some(c) = a.repr.as_constant() {
        return Ok(a.field.from_rational(c.recip()));
    }
    // Invariant: s_i * a ≡ r_i (mod p).
    let (mut r0, mut r1) = (a.field.modulus().clone(), a.repr.clone());
    let (mut s0, mut s1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = &s0 - &(&q * &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant because the modulus is irreducible.
    let c = r0
        .as_constant()
        .ok_or_else(|| Error::Verification("modulus is not irreducible".into()))?;
    Ok(a.field.elem(s0.scale(&c.recip())))
}

/// `f(a)` by Horner's rule in the field of `a`.
pub fn nf_eval(f: &Poly, a: &NumberFieldElem) -> NumberFieldElem {
    let field = &a.field;
    if let Some(r) = a.as_rational() {
        return field.from_rational(f.eval(&r));
    }
    let mut acc = field.zero();
    for c in f.coeffs().iter().rev() {
        acc = &acc * a;
        acc.repr = &acc.repr + &Poly::constant(c.clone());
    }
    acc
}

/// Monic minimal polynomial over the rationals.
///
/// The characteristic polynomial `Res_t(p(t), x - a(t))` is obtained by
/// evaluating the resultant at `deg p + 1` integer points and interpolating;
/// its squarefree part is the minimal polynomial.
pub fn min_poly(a: &NumberFieldElem) -> Result<Poly> {
    if let Some(r) = a.as_rational() {
        return Ok(Poly::linear_root(&r));
    }
    let p = a.field.modulus();
    if a.repr == Poly::x() {
        return Ok(p.clone());
    }
    let n = p.deg();
    let xs: Vec<Rational> = (0..=n as i64).map(|j| Rational::from_integer(j.into())).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|xj| resultant(p, &(&Poly::constant(xj.clone()) - &a.repr)))
        .collect();
    let chi = interpolate(&xs, &ys);
    let g = gcd(&chi, &chi.derivative());
    let m = chi.exact_div(&g).expect("gcd divides").monic();
    if !nf_eval(&m, a).is_zero() || !n.is_multiple_of(m.deg()) {
        return Err(Error::Verification(format!(
            "minimal polynomial candidate {m} does not vanish at the element"
        )));
    }
    if m.deg() <= config::get().max_factor_degree && !is_irreducible(&m)? {
        return Err(Error::Verification(format!(
            "minimal polynomial candidate {m} is reducible"
        )));
    }
    Ok(m)
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub(crate) fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = Poly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = &(&acc * &Poly::linear_root(&xs[i])) + &Poly::constant(dd[i].clone());
    }
    acc
}

/// Outcome of the root-of-unity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootOfUnity {
    Order(u64),
    Not,
    /// A root of unity of order above the cap is still possible.
    Undecided { cap: u64 },
}

/// Smallest `s <= cap` with `a^s = 1`.
///
/// Cheap filters first: every conjugate must lie on the unit circle and the
/// minimal polynomial must be monic integral with constant term ±1. The
/// surviving candidates are the `s` with `φ(s) = deg minpoly`, tested by exact
/// powering.
pub fn root_of_unity_order(a: &NumberFieldElem, cap: u64) -> Result<RootOfUnity> {
    if a.is_zero() {
        return Ok(RootOfUnity::Not);
    }
    if let Some(r) = a.as_rational() {
        return Ok(if r.is_one() {
            RootOfUnity::Order(1)
        } else if r == -Rational::one() {
            RootOfUnity::Order(2)
        } else {
            RootOfUnity::Not
        });
    }
    for z in a.conjugates()? {
        if (z.norm() - 1.0).abs() > 1e-9 {
            return Ok(RootOfUnity::Not);
        }
    }
    let m = min_poly(a)?;
    let (_, prim) = m.to_primitive();
    let lead_one = prim.last().is_some_and(|c| c.is_one());
    let const_unit = prim[0].is_one() || prim[0] == -num_bigint::BigInt::one();
    if !lead_one || !const_unit || !m.coeffs().iter().all(|c| c.is_integer()) {
        return Ok(RootOfUnity::Not);
    }
    let deg = m.deg() as u64;
    // φ(s) >= sqrt(s/2), so every s with φ(s) = deg is at most 2 deg^2.
    let bound = 2 * deg * deg;
    let mut beyond_cap = false;
    for s in 1..=bound {
        if totient(s) != deg {
            continue;
        }
        if s > cap {
            beyond_cap = true;
            break;
        }
        if a.pow(s).is_one() {
            return Ok(RootOfUnity::Order(s));
        }
    }
    Ok(if beyond_cap {
        RootOfUnity::Undecided { cap }
    } else {
        RootOfUnity::Not
    })
}

fn totient(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    fn sqrt2() -> NumberField {
        NumberField::new(&p(&[-2, 0, 1])).unwrap()
    }

    #[test]
    fn invert_examples() {
        let k = sqrt2();
        let t = k.generator();
        assert_eq!(nf_invert(&t).unwrap(), k.elem(Poly::new(vec![int(0), rat(1, 2)])));
        assert_eq!(nf_invert(&k.from_rational(int(3))).unwrap(), k.from_rational(rat(1, 3)));
        assert_eq!(nf_invert(&k.zero()), Err(Error::DivisionByZero));
        let a = k.elem(p(&[3, -5]));
        assert!((&a * &nf_invert(&a).unwrap()).is_one());
    }

    #[test]
    fn eval_examples() {
        let k = sqrt2();
        assert!(nf_eval(&p(&[-2, 0, 1]), &k.generator()).is_zero());
        let q = NumberField::rationals();
        assert_eq!(nf_eval(&p(&[0, 0, 1]), &q.from_rational(int(3))).as_rational(), Some(int(9)));
        assert_eq!(nf_eval(&p(&[-2, 0, 1]), &q.from_rational(int(-2))).as_rational(), Some(int(2)));
    }

    #[test]
    fn min_poly_examples() {
        let k = sqrt2();
        assert_eq!(min_poly(&k.elem(p(&[1, 1]))).unwrap(), p(&[-1, -2, 1]));
        assert_eq!(min_poly(&k.from_rational(int(3))).unwrap(), p(&[-3, 1]));
        assert_eq!(min_poly(&k.generator()).unwrap(), p(&[-2, 0, 1]));
        // t^2 in Q[t]/(t^4 - 2) has minimal polynomial x^2 - 2.
        let k4 = NumberField::new(&p(&[-2, 0, 0, 0, 1])).unwrap();
        assert_eq!(min_poly(&k4.elem(p(&[0, 0, 1]))).unwrap(), p(&[-2, 0, 1]));
    }

    #[test]
    fn generator_of_linear_field_is_rational() {
        let k = NumberField::rational_point(&rat(-2, 3));
        assert_eq!(k.generator().as_rational(), Some(rat(-2, 3)));
        assert_eq!(min_poly(&k.generator()).unwrap(), Poly::new(vec![rat(2, 3), int(1)]));
    }

    #[test]
    fn roots_of_unity() {
        let q = NumberField::rationals();
        assert_eq!(root_of_unity_order(&q.from_rational(int(-1)), 360).unwrap(), RootOfUnity::Order(2));
        assert_eq!(root_of_unity_order(&q.from_rational(int(2)), 360).unwrap(), RootOfUnity::Not);
        let gi = NumberField::new(&p(&[1, 0, 1])).unwrap();
        assert_eq!(root_of_unity_order(&gi.generator(), 360).unwrap(), RootOfUnity::Order(4));
        // (3 + 4i)/5 has modulus one but is not a root of unity.
        let z = gi.elem(Poly::new(vec![rat(3, 5), rat(4, 5)]));
        assert_eq!(root_of_unity_order(&z, 360).unwrap(), RootOfUnity::Not);
        // Primitive 7th root, cap below and above the order.
        let k7 = NumberField::new(&p(&[1, 1, 1, 1, 1, 1, 1])).unwrap();
        assert_eq!(root_of_unity_order(&k7.generator(), 360).unwrap(), RootOfUnity::Order(7));
        assert_eq!(root_of_unity_order(&k7.generator(), 8).unwrap(), RootOfUnity::Order(7));
        assert_eq!(
            root_of_unity_order(&k7.generator(), 6).unwrap(),
            RootOfUnity::Undecided { cap: 6 }
        );
        // -t is a primitive 14th root.
        assert_eq!(root_of_unity_order(&-&k7.generator(), 360).unwrap(), RootOfUnity::Order(14));
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(NumberField::new(&p(&[-1, 0, 1])).is_err());
    }

    #[test]
    fn totients() {
        let v: Vec<u64> = (1..=12).map(totient).collect();
        assert_eq!(v, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }
}
