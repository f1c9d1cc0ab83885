//! Polynomials over word-size prime fields, stored low degree first with
//! entries in `[0, p)`. Used by the modular GCD and by factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[cfg(test)]
pub(crate) fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // Deterministic for all 64-bit inputs.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `start`, in decreasing order.
pub(crate) fn primes_below(start: u64) -> impl Iterator<Item = u64> {
    let mut n = start;
    std::iter::from_fn(move || {
        while n > 2 {
            n -= 1;
            if is_prime(n) {
                return Some(n);
            }
        }
        None
    })
}

/// Primes from 3 upward.
pub(crate) fn small_odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| is_prime(n))
}

pub(crate) fn reduce_int(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

pub(crate) fn reduce(v: &[BigInt], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = v.iter().map(|c| reduce_int(c, p)).collect();
    trim(&mut out);
    out
}


pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

pub(crate) fn make_monic(v: &mut [u64], p: u64) {
    if let Some(d) = degree(v) {
        let inv = invmod(v[d], p);
        for c in v.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
}

#[cfg(test)]
pub(crate) fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| addmod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| submod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u128 * y as u128) % pp;
        }
    }
    let mut out: Vec<u64> = acc.into_iter().map(|c| c as u64).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
pub(crate) fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    let Some(da) = degree(&r) else {
        return (Vec::new(), r);
    };
    if da < db {
        return (Vec::new(), r);
    }
    let inv = invmod(b[db], p);
    let mut q = vec![0u64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = mulmod(r[i + db], inv, p);
        if c == 0 {
            continue;
        }
        q[i] = c;
        for j in 0..=db {
            r[i + j] = submod(r[i + j], mulmod(c, b[j], p), p);
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    div_rem(a, b, p).1
}

/// Monic gcd (empty when both inputs are zero).
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

/// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub(crate) fn xgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if let Some(d) = degree(&r0) {
        let inv = invmod(r0[d], p);
        for v in [&mut r0, &mut s0, &mut t0] {
            for c in v.iter_mut() {
                *c = mulmod(*c, inv, p);
            }
        }
    }
    (r0, s0, t0)
}

pub(crate) fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, i as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

/// `base^e mod m` for a polynomial modulus.
pub(crate) fn powmod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        e >>= 1;
        if e > 0 {
            b = rem(&mul(&b, &b, p), m, p);
        }
    }
    result
}

/// Distinct-degree factorization of a monic squarefree polynomial.
/// Returns `(product of all irreducible factors of degree d, d)` pairs.
pub(crate) fn distinct_degree(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0usize;
    while let Some(df) = degree(&f) {
        if df < 2 * (d + 1) {
            if df > 0 {
                out.push((f.clone(), df));
            }
            break;
        }
        d += 1;
        h = powmod_poly(&h, p, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if degree(&g).unwrap_or(0) > 0 {
            f = div_rem(&f, &g, p).0;
            h = rem(&h, &f, p);
            out.push((g, d));
        }
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting (odd `p`). `f` is monic and a
/// product of distinct irreducibles of degree `d`.
pub(crate) fn equal_degree<R: Rng>(f: &[u64], d: usize, p: u64, rng: &mut R) -> Vec<Vec<u64>> {
    let n = degree(f).unwrap_or(0);
    if n == d {
        return vec![f.to_vec()];
    }
    debug_assert!(p % 2 == 1);
    loop {
        let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        trim(&mut a);
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
        let mut c = a.clone();
        let mut acc = a.clone();
        for _ in 1..d {
            c = powmod_poly(&c, p, f, p);
            acc = rem(&mul(&acc, &c, p), f, p);
        }
        let b = powmod_poly(&acc, (p - 1) / 2, f, p);
        let g = gcd(&sub(&b, &[1], p), f, p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = div_rem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

/// All monic irreducible factors of a monic squarefree polynomial.
pub(crate) fn factor_squarefree<R: Rng>(f: &[u64], p: u64, rng: &mut R) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, rng));
    }
    out.sort();
    out
}

/// True when the gcd of `v` and its derivative is 1 and the degree is kept mod p.
pub(crate) fn is_squarefree(v: &[u64], p: u64) -> bool {
    let g = gcd(v, &derivative(v, p), p);
    degree(&g) == Some(0)
}

/// Residue of `c` modulo `m`, in `[0, m)`.
pub(crate) fn mod_big(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

pub(crate) fn nonzero_mod(c: &BigInt, p: u64) -> bool {
    !(c % BigInt::from(p)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn primality() {
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(is_prime((1u64 << 61) - 1));
        let ps: Vec<u64> = small_odd_primes().take(5).collect();
        assert_eq!(ps, vec![3, 5, 7, 11, 13]);
    }

    #[test]
    fn factor_x4_minus_1_mod_5() {
        // x^4 - 1 splits completely mod 5
        let p = 5;
        let f = vec![4u64, 0, 0, 0, 1];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let fs = factor_squarefree(&f, p, &mut rng);
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|g| degree(g) == Some(1)));
    }

    #[test]
    fn xgcd_identity() {
        let p = 101;
        let a = vec![1u64, 2, 3];
        let b = vec![5u64, 1];
        let (g, s, t) = xgcd(&a, &b, p);
        assert_eq!(g, vec![1]);
        let lhs = add(&mul(&s, &a, p), &mul(&t, &b, p), p);
        assert_eq!(lhs, vec![1]);
    }
}
