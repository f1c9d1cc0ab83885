//! Dense polynomials over the integers, stored low degree first.
//!
//! These are the hot loops behind rational polynomial multiplication,
//! composition and exact trial division. Large products go through Kronecker
//! substitution so that num-bigint's Karatsuba/Toom multiplication does the
//! heavy lifting.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Products with both operands at least this long use Kronecker substitution.
const KRONECKER_MIN_LEN: usize = 12;

pub(crate) fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[BigInt]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divide out the content and make the leading coefficient positive.
pub(crate) fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = content(v);
    if g.is_zero() {
        return Vec::new();
    }
    if v.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    let mut out: Vec<BigInt> = v.iter().map(|c| c / &g).collect();
    trim(&mut out);
    out
}

pub(crate) fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|c| c.bits()).max().unwrap_or(0)
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x - y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y,
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[BigInt], s: &BigInt) -> Vec<BigInt> {
    if s.is_zero() {
        return Vec::new();
    }
    a.iter().map(|c| c * s).collect()
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = if a.len().min(b.len()) >= KRONECKER_MIN_LEN {
        mul_kronecker(a, b)
    } else {
        mul_schoolbook(a, b)
    };
    trim(&mut out);
    out
}

pub(crate) fn mul_schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Write `value` (which must fit in the slot) into `buf` at bit offset `off`.
fn write_bits(buf: &mut [u64], off: u64, value: &BigUint) {
    let word = (off / 64) as usize;
    let shift = off % 64;
    for (i, d) in value.iter_u64_digits().enumerate() {
        buf[word + i] |= d << shift;
        if shift != 0 {
            let hi = d >> (64 - shift);
            if hi != 0 {
                buf[word + i + 1] |= hi;
            }
        }
    }
}

/// Read `len` bits of `words` starting at bit offset `off`.
fn read_bits(words: &[u64], off: u64, len: u64) -> BigUint {
    let first = (off / 64) as usize;
    let shift = off % 64;
    let nwords = len.div_ceil(64) as usize;
    let mut out = Vec::with_capacity(nwords);
    for i in 0..nwords {
        let lo = words.get(first + i).copied().unwrap_or(0);
        let hi = words.get(first + i + 1).copied().unwrap_or(0);
        let w = if shift == 0 {
            lo
        } else {
            (lo >> shift) | (hi << (64 - shift))
        };
        out.push(w);
    }
    let rem = len % 64;
    if rem != 0 {
        if let Some(last) = out.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
    let mut digits32 = Vec::with_capacity(out.len() * 2);
    for w in out {
        digits32.push(w as u32);
        digits32.push((w >> 32) as u32);
    }
    BigUint::new(digits32)
}

/// Pack a signed coefficient vector as `sum a_i 2^(k i)`.
fn pack(a: &[BigInt], k: u64) -> BigInt {
    let words = ((a.len() as u64 * k) / 64 + 2) as usize;
    let mut pos = vec![0u64; words];
    let mut neg = vec![0u64; words];
    let mut any_neg = false;
    for (i, c) in a.iter().enumerate() {
        let off = i as u64 * k;
        match c.sign() {
            Sign::Plus => write_bits(&mut pos, off, c.magnitude()),
            Sign::Minus => {
                any_neg = true;
                write_bits(&mut neg, off, c.magnitude());
            }
            Sign::NoSign => {}
        }
    }
    let p = BigInt::from_biguint(Sign::Plus, words_to_biguint(pos));
    if any_neg {
        p - BigInt::from_biguint(Sign::Plus, words_to_biguint(neg))
    } else {
        p
    }
}

fn words_to_biguint(words: Vec<u64>) -> BigUint {
    let mut digits32 = Vec::with_capacity(words.len() * 2);
    for w in words {
        digits32.push(w as u32);
        digits32.push((w >> 32) as u32);
    }
    BigUint::new(digits32)
}

pub(crate) fn mul_kronecker(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n_out = a.len() + b.len() - 1;
    let len_bits = 64 - (a.len().min(b.len()) as u64).leading_zeros() as u64;
    // |c_i| < min(len) * max|a| * max|b| <= 2^(k-2); one more bit for the bias.
    let k = max_bits(a) + max_bits(b) + len_bits + 2;
    let prod = pack(a, k) * pack(b, k);
    // Bias every slot by 2^(k-1) so all digits become nonnegative.
    let words = ((n_out as u64 * k) / 64 + 2) as usize;
    let mut bias = vec![0u64; words];
    let half = BigUint::one() << (k - 1);
    for i in 0..n_out {
        write_bits(&mut bias, i as u64 * k, &half);
    }
    let biased = prod + BigInt::from_biguint(Sign::Plus, words_to_biguint(bias));
    debug_assert!(!biased.is_negative());
    let digits = biased.magnitude().to_u64_digits();
    let half = BigInt::from_biguint(Sign::Plus, half);
    (0..n_out)
        .map(|i| BigInt::from_biguint(Sign::Plus, read_bits(&digits, i as u64 * k, k)) - &half)
        .collect()
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
pub(crate) fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b).expect("prem by zero");
    let mut r: Vec<BigInt> = a.to_vec();
    trim(&mut r);
    let Some(da) = degree(&r) else {
        return r;
    };
    if da < db {
        return r;
    }
    let lb = &b[db];
    let mut steps = da - db + 1;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            if !bj.is_zero() {
                r[shift + j] -= &lr * bj;
            }
        }
        trim(&mut r);
        steps -= 1;
    }
    if steps > 0 {
        let f = num_traits::pow(lb.clone(), steps);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Exact quotient `a / b` over the integers, or `None` if `b` does not divide `a`.
pub(crate) fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = degree(b)?;
    let mut r: Vec<BigInt> = a.to_vec();
    trim(&mut r);
    let Some(da) = degree(&r) else {
        return Some(Vec::new());
    };
    if da < db {
        return None;
    }
    // The constant terms must divide when b(0) != 0: cheap early rejection.
    if !b[0].is_zero() && !r[0].is_zero() && !(&r[0] % &b[0]).is_zero() {
        return None;
    }
    let lb = &b[db];
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let top = &r[i + db];
        if top.is_zero() {
            continue;
        }
        let (qi, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            if !bj.is_zero() {
                r[i + j] -= &qi * bj;
            }
        }
        q[i] = qi;
    }
    if r.iter().take(db).any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let a: Vec<BigInt> = (0..40)
            .map(|i| BigInt::from((i * 7919 % 201) - 100) << (i % 9 * 13))
            .collect();
        let b: Vec<BigInt> = (0..33).map(|i| BigInt::from((i * 104729 % 97) - 48)).collect();
        assert_eq!(mul_kronecker(&a, &b), mul_schoolbook(&a, &b));
        let neg: Vec<BigInt> = a.iter().map(|c| -c).collect();
        assert_eq!(mul_kronecker(&neg, &b), mul_schoolbook(&neg, &b));
    }

    #[test]
    fn prem_and_exact_div() {
        // (x - 2)(x + 1) = x^2 - x - 2
        let f = v(&[-2, -1, 1]);
        let g = v(&[-2, 1]);
        assert_eq!(exact_div(&f, &g), Some(v(&[1, 1])));
        assert_eq!(exact_div(&f, &v(&[-3, 1])), None);
        assert!(prem(&f, &g).is_empty());
        // 2x^2 + 1 mod 3x + 1: prem = 9*(2x^2+1) mod (3x+1) = 11
        assert_eq!(prem(&v(&[1, 0, 2]), &v(&[1, 3])), v(&[11]));
    }

    #[test]
    fn primitive_normalizes_sign() {
        assert_eq!(primitive(&v(&[4, -6, -2])), v(&[-2, 3, 1]));
    }
}
