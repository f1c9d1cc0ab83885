//! Polynomial GCD and resultant over the rationals.
//!
//! The primary GCD is modular: inputs are cleared to primitive integer
//! polynomials, reduced modulo a run of 62-bit primes that avoid the leading
//! coefficients, and the monic images are combined by CRT. Rational
//! reconstruction of every coefficient gives a candidate, accepted once two
//! consecutive reconstructions agree and it divides both inputs exactly.
//! Images whose degree exceeds the smallest degree seen so far come from
//! unlucky primes and are dropped. The subresultant PRS is kept as an
//! independent route for cross-checking and as the fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{modp, zpoly, Poly, Rational};
use crate::config;

/// Bits of the CRT modulus after which the modular route gives up.
const MODULAR_GIVE_UP_BITS: u64 = 1 << 20;

/// Monic greatest common divisor. `gcd(f, 0)` is `f` made monic; `gcd(0, 0)` is 0.
pub fn gcd(f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return Poly::one();
    }
    let (_, a) = f.to_primitive();
    let (_, b) = g.to_primitive();
    match modular_gcd(&a, &b) {
        Some(h) => h,
        None => gcd_subresultant(f, g),
    }
}

fn modular_gcd(a: &[BigInt], b: &[BigInt]) -> Option<Poly> {
    let da = zpoly::degree(a)?;
    let db = zpoly::degree(b)?;
    let lc_prod = &a[da] * &b[db];
    let seed = config::get().seed;
    let start = (1u64 << 62) - ((seed % 4096) << 20);

    let mut cur_deg = usize::MAX;
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = Vec::new();
    let mut previous: Option<Poly> = None;

    for p in modp::primes_below(start) {
        if !modp::nonzero_mod(&lc_prod, p) {
            continue;
        }
        let ap = modp::reduce(a, p);
        let bp = modp::reduce(b, p);
        let gp = modp::gcd(&ap, &bp, p);
        let dg = modp::degree(&gp).unwrap_or(0);
        if dg == 0 {
            // The degree over a good prime bounds the true degree from above.
            return Some(Poly::one());
        }
        if dg > cur_deg {
            continue;
        }
        if dg < cur_deg {
            cur_deg = dg;
            modulus = BigInt::from(p);
            residues = gp.iter().map(|&c| BigInt::from(c)).collect();
            previous = None;
        } else {
            crt_combine(&mut residues, &mut modulus, &gp, p);
        }
        if let Some(candidate) = reconstruct(&residues, &modulus) {
            if previous.as_ref() == Some(&candidate) {
                let (_, c) = candidate.to_primitive();
                if zpoly::exact_div(a, &c).is_some() && zpoly::exact_div(b, &c).is_some() {
                    return Some(candidate);
                }
            }
            previous = Some(candidate);
        }
        if modulus.bits() > MODULAR_GIVE_UP_BITS {
            return None;
        }
    }
    None
}

/// Fold a new image modulo `p` into residues modulo `modulus`.
fn crt_combine(residues: &mut [BigInt], modulus: &mut BigInt, image: &[u64], p: u64) {
    let m_mod_p = modp::reduce_int(modulus, p);
    let inv = modp::invmod(m_mod_p, p);
    for (i, r) in residues.iter_mut().enumerate() {
        let target = image.get(i).copied().unwrap_or(0);
        let r_mod_p = modp::reduce_int(r, p);
        let k = modp::mulmod(modp::submod(target, r_mod_p, p), inv, p);
        if k != 0 {
            *r += &*modulus * BigInt::from(k);
        }
    }
    *modulus *= BigInt::from(p);
}

/// Wang's rational reconstruction with balanced bounds.
pub(crate) fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn reconstruct(residues: &[BigInt], modulus: &BigInt) -> Option<Poly> {
    let coeffs = residues
        .iter()
        .map(|r| rational_reconstruct(r, modulus))
        .collect::<Option<Vec<_>>>()?;
    Some(Poly::new(coeffs))
}

/// Monic gcd by the subresultant polynomial remainder sequence over the
/// integers. Independent of the modular route; used as its oracle.
pub fn gcd_subresultant(f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    let (_, mut a) = f.to_primitive();
    let (_, mut b) = g.to_primitive();
    if zpoly::degree(&b) > zpoly::degree(&a) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g_ = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = zpoly::degree(&a).unwrap_or(0);
        let Some(db) = zpoly::degree(&b) else {
            return Poly::from_bigints(&a).monic();
        };
        let delta = da - db;
        let r = zpoly::prem(&a, &b);
        if r.is_empty() {
            return Poly::from_bigints(&zpoly::primitive(&b)).monic();
        }
        if zpoly::degree(&r) == Some(0) {
            return Poly::one();
        }
        a = b;
        let div = &g_ * num_traits::pow(h.clone(), delta);
        b = r.iter().map(|c| c / &div).collect();
        g_ = a[zpoly::degree(&a).unwrap()].clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g_.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
    }
}

/// Resultant with the convention `Res(f, g) = lc(f)^deg g * prod g(roots of f)`.
/// A nonzero constant against a polynomial of degree `n` gives `c^n`.
pub fn resultant(f: &Poly, g: &Poly) -> Rational {
    if f.is_zero() || g.is_zero() {
        return Rational::zero();
    }
    let m = f.deg();
    let n = g.deg();
    let (cf, a) = f.to_primitive();
    let (cg, b) = g.to_primitive();
    let scale = num_traits::pow(cf, n) * num_traits::pow(cg, m);
    scale * Rational::from_integer(resultant_z(&a, &b))
}

/// Subresultant resultant over the integers (Cohen, Algorithm 3.3.7).
fn resultant_z(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (Some(mut da), Some(mut db)) = (zpoly::degree(a), zpoly::degree(b)) else {
        return BigInt::zero();
    };
    if da == 0 {
        return num_traits::pow(a[0].clone(), db);
    }
    if db == 0 {
        return num_traits::pow(b[0].clone(), da);
    }
    let ca = zpoly::content(a);
    let cb = zpoly::content(b);
    let mut a: Vec<BigInt> = a.iter().map(|c| c / &ca).collect();
    let mut b: Vec<BigInt> = b.iter().map(|c| c / &cb).collect();
    let t = num_traits::pow(ca, db) * num_traits::pow(cb, da);
    let mut s = BigInt::one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = zpoly::prem(&a, &b);
        a = b;
        da = db;
        let div = &g * num_traits::pow(h.clone(), delta);
        b = r.iter().map(|c| c / &div).collect();
        zpoly::trim(&mut b);
        g = a[da].clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        match zpoly::degree(&b) {
            None => return BigInt::zero(),
            Some(0) => {
                let lb = b[0].clone();
                let hh = if da == 0 {
                    h
                } else {
                    num_traits::pow(lb, da) / num_traits::pow(h, da - 1)
                };
                return s * t * hh;
            }
            Some(d) => db = d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&p(&[0, 0, 1, 1]), &p(&[0, 0, 5, 1])), p(&[0, 0, 1]));
        assert_eq!(gcd(&p(&[0, 2, -1]), &p(&[2, 1, -1])), p(&[-2, 1]));
        assert_eq!(gcd(&p(&[4, 0, 2]), &Poly::zero()), p(&[2, 0, 1]));
        assert_eq!(gcd(&p(&[1, 1]), &p(&[2, 1])), Poly::one());
    }

    #[test]
    fn gcd_rational_inputs() {
        // (x + 2/3)(x - 1) and (x + 2/3)(3x + 5)
        let common = Poly::new(vec![rat(2, 3), int(1)]);
        let f = &common * &p(&[-1, 1]);
        let g = &common * &p(&[5, 3]);
        assert_eq!(gcd(&f, &g), common);
        assert_eq!(gcd_subresultant(&f, &g), common);
    }

    #[test]
    fn big_common_factor() {
        let common = p(&[123456789, -987654321, 55555, 1]).pow(3);
        let f = &common * &p(&[17, 0, 0, 1]).pow(4);
        let g = &common * &p(&[-31, 2, 1]).pow(5);
        assert_eq!(gcd(&f, &g), common.monic());
        assert_eq!(gcd_subresultant(&f, &g), common.monic());
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), int(1));
        assert_eq!(resultant(&p(&[-1, 1]).pow(2), &p(&[-1, 1])), int(0));
        // Res(x - a, g) = g(a)
        let g = p(&[5, -3, 0, 2]);
        let a = rat(3, 2);
        assert_eq!(resultant(&Poly::linear_root(&a), &g), g.eval(&a));
        // Res(2x^2 + 1, 3x - 1) = 2^1 * (3*(i/sqrt2) - 1)(3*(-i/sqrt2) - 1) = 2*(9/2 + 1) = 11
        assert_eq!(resultant(&p(&[1, 0, 2]), &p(&[-1, 3])), int(11));
    }

    #[test]
    fn reconstruct_small() {
        let m = BigInt::from(1_000_003i64);
        // 2/3 mod m
        let inv3 = BigInt::from(3).modpow(&(m.clone() - 2), &m);
        let u = (BigInt::from(2) * inv3) % &m;
        assert_eq!(rational_reconstruct(&u, &m), Some(rat(2, 3)));
    }
}
