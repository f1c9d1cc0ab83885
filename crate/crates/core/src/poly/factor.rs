//! Factorization over the rationals.
//!
//! Squarefree parts come from Yun's algorithm. Each squarefree primitive
//! integer part is then factored by the classical route: pick a prime that
//! keeps it squarefree, factor modulo that prime (distinct-degree plus
//! Cantor–Zassenhaus), Hensel-lift to a power of the prime past the
//! coefficient bound, and recombine lifted factors by subset search. Degree
//! patterns from several primes prune the search and often prove
//! irreducibility outright; Eisenstein's criterion is tried first.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{gcd, modp, zpoly, Poly, Rational};
use crate::config;
use crate::error::{Error, Result};

/// `content * prod factor_i^mult_i`, factors monic and pairwise coprime.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FactorList {
    #[serde(serialize_with = "super::serde_rational::serialize")]
    pub content: Rational,
    pub factors: Vec<(Poly, usize)>,
}

impl FactorList {
    /// Multiply everything back together.
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.content.clone());
        for (p, e) in &self.factors {
            acc = &acc * &p.pow(*e);
        }
        acc
    }

    /// Multiplicity of a monic factor (0 when absent).
    pub fn multiplicity(&self, p: &Poly) -> usize {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

/// Yun's squarefree decomposition.
pub fn squarefree_factor(f: &Poly) -> FactorList {
    assert!(!f.is_zero(), "squarefree_factor of zero");
    let content = f.lc().cloned().unwrap();
    let f = f.monic();
    let mut factors = Vec::new();
    if f.deg() == 0 {
        return FactorList { content, factors };
    }
    let df = f.derivative();
    let a0 = gcd(&f, &df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.deg() > 0 {
        let a = gcd(&b, &d);
        let nb = b.exact_div(&a).expect("gcd divides");
        let nc = d.exact_div(&a).expect("gcd divides");
        if a.deg() > 0 {
            factors.push((a, i));
        }
        d = &nc - &nb.derivative();
        b = nb;
        i += 1;
    }
    factors.sort();
    FactorList { content, factors }
}

/// Complete factorization into monic irreducibles over the rationals.
pub fn factor_irreducible(f: &Poly) -> Result<FactorList> {
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let cap = config::get().max_factor_degree;
    if f.deg() > cap {
        return Err(Error::limit("factor degree", cap as u64, f.deg() as u64));
    }
    let sqf = squarefree_factor(f);
    let mut factors = Vec::new();
    for (part, mult) in &sqf.factors {
        let (_, z) = part.to_primitive();
        for g in factor_squarefree_z(&z) {
            factors.push((Poly::from_bigints(&g).monic(), *mult));
        }
    }
    factors.sort();
    Ok(FactorList {
        content: sqf.content,
        factors,
    })
}

/// True when `f` is irreducible over the rationals (nonconstant, squarefree,
/// one factor).
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if f.deg() == 0 {
        return Ok(false);
    }
    if f.deg() == 1 {
        return Ok(true);
    }
    let fl = factor_irreducible(f)?;
    Ok(fl.factors.len() == 1 && fl.factors[0].1 == 1)
}

/// Rational roots with multiplicities, ascending.
pub fn rational_roots(f: &Poly) -> Result<Vec<(Rational, usize)>> {
    let fl = factor_irreducible(f)?;
    let mut roots: Vec<(Rational, usize)> = fl
        .factors
        .iter()
        .filter(|(p, _)| p.deg() == 1)
        .map(|(p, e)| (-p.coeff(0), *e))
        .collect();
    roots.sort();
    Ok(roots)
}

/// Factor a squarefree primitive integer polynomial with positive leading
/// coefficient into primitive irreducibles.
fn factor_squarefree_z(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut f = f.to_vec();
    zpoly::trim(&mut f);
    let mut out = Vec::new();
    let Some(n) = zpoly::degree(&f) else {
        return out;
    };
    if n == 0 {
        return out;
    }
    if f[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        f.remove(0);
        if zpoly::degree(&f) == Some(0) {
            return out;
        }
    }
    let n = zpoly::degree(&f).unwrap();
    if n == 1 || eisenstein(&f) {
        out.push(f);
        return out;
    }
    out.extend(zassenhaus(&f));
    out
}

/// Eisenstein's criterion at any small prime dividing all non-leading
/// coefficients, for the polynomial or its reversal.
fn eisenstein(f: &[BigInt]) -> bool {
    let check = |f: &[BigInt]| -> bool {
        let n = f.len() - 1;
        let g = zpoly::content(&f[..n]);
        if g.is_zero() {
            return false;
        }
        for p in small_prime_factors(&g) {
            let pb = BigInt::from(p);
            if !(&f[n] % &pb).is_zero() && !(&f[0] % (&pb * &pb)).is_zero() {
                return true;
            }
        }
        false
    };
    if check(f) {
        return true;
    }
    let rev: Vec<BigInt> = f.iter().rev().cloned().collect();
    !rev[rev.len() - 1].is_zero() && check(&rev)
}

/// Prime factors of `n` below 10^5 (found by trial division).
fn small_prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < 100_000 && !n.is_one() {
        let pb = BigInt::from(p);
        if (&n % &pb).is_zero() {
            out.push(p);
            while (&n % &pb).is_zero() {
                n /= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out
}

/// Number of primes whose degree patterns are intersected.
const PATTERN_PRIMES: usize = 8;

fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = zpoly::degree(f).unwrap();
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config::get().seed);

    // Try a handful of good primes; keep the one with fewest modular factors.
    let mut allowed: Option<BTreeSet<usize>> = None;
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for p in modp::small_odd_primes() {
        if !modp::nonzero_mod(&lc, p) {
            continue;
        }
        let mut fp = modp::reduce(f, p);
        if modp::degree(&fp) != Some(n) || !modp::is_squarefree(&fp, p) {
            continue;
        }
        modp::make_monic(&mut fp, p);
        let facs = modp::factor_squarefree(&fp, p, &mut rng);
        let sums = subset_degree_sums(facs.iter().map(|g| modp::degree(g).unwrap()));
        let merged: BTreeSet<usize> = match &allowed {
            None => sums,
            Some(prev) => prev.intersection(&sums).copied().collect(),
        };
        if merged.len() <= 2 {
            // Only 0 and n remain possible.
            return vec![f.to_vec()];
        }
        allowed = Some(merged);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= PATTERN_PRIMES {
            break;
        }
    }
    let (p, facs) = best.expect("some prime keeps a squarefree polynomial squarefree");
    let allowed = allowed.unwrap();
    if facs.len() == 1 {
        return vec![f.to_vec()];
    }

    // Lift until p^k exceeds twice the factor coefficient bound times lc.
    let norm2 = f.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b).sqrt() + 1;
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(f, &facs, p, k);
    recombine(f, lifted, &pk, &allowed)
}

fn subset_degree_sums(degs: impl Iterator<Item = usize>) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for d in degs {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums
}

// ---- arithmetic modulo a big modulus, coefficients in [0, m) ----

fn zm_reduce(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = v.iter().map(|c| modp::mod_big(c, m)).collect();
    zpoly::trim(&mut out);
    out
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    zm_reduce(&zpoly::mul(a, b), m)
}

/// Division by a monic polynomial modulo `m`.
fn zm_div_rem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = zpoly::degree(b).unwrap();
    let mut r = zm_reduce(a, m);
    let Some(da) = zpoly::degree(&r) else {
        return (Vec::new(), r);
    };
    if da < db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = modp::mod_big(&r[i + db], m);
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            r[i + j] = modp::mod_big(&(&r[i + j] - &c * &b[j]), m);
        }
        q[i] = c;
    }
    zpoly::trim(&mut r);
    zpoly::trim(&mut q);
    (q, r)
}

fn modinv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    modp::mod_big(&e.x, m)
}

fn to_big(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift `f ≡ lc * prod facs (mod p)` to monic factors modulo `p^k`.
fn hensel_lift(f: &[BigInt], facs: &[Vec<u64>], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let pk = num_traits::pow(BigInt::from(p), k as usize);
    let n = zpoly::degree(f).unwrap();
    let lc_inv = modinv_big(&f[n], &pk);
    let target = zm_reduce(&zpoly::scale(f, &lc_inv), &pk);
    lift_tree(&target, facs, p, k)
}

/// `target` is monic modulo `p^k` and congruent to the product of `facs`
/// modulo `p`.
fn lift_tree(target: &[BigInt], facs: &[Vec<u64>], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    if facs.len() == 1 {
        return vec![target.to_vec()];
    }
    let mid = facs.len() / 2;
    let prod = |fs: &[Vec<u64>]| {
        fs.iter()
            .fold(vec![1u64], |acc, g| modp::mul(&acc, g, p))
    };
    let g0 = prod(&facs[..mid]);
    let h0 = prod(&facs[mid..]);
    let (g, h) = lift_pair(target, &g0, &h0, p, k);
    let mut out = lift_tree(&g, &facs[..mid], p, k);
    out.extend(lift_tree(&h, &facs[mid..], p, k));
    out
}

/// Quadratic Hensel lifting of a monic two-factor split.
fn lift_pair(f: &[BigInt], g0: &[u64], h0: &[u64], p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (one, s0, t0) = modp::xgcd(g0, h0, p);
    debug_assert_eq!(one, vec![1]);
    let mut g = to_big(g0);
    let mut h = to_big(h0);
    let mut s = to_big(&s0);
    let mut t = to_big(&t0);
    let pb = BigInt::from(p);
    let final_m = num_traits::pow(pb.clone(), k as usize);
    let mut m = pb;
    while m < final_m {
        let m2 = {
            let sq = &m * &m;
            if sq > final_m {
                final_m.clone()
            } else {
                sq
            }
        };
        let fm = zm_reduce(f, &m2);
        let e = zm_reduce(&zpoly::sub(&fm, &zpoly::mul(&g, &h)), &m2);
        let (q, r) = zm_div_rem_monic(&zm_mul(&s, &e, &m2), &h, &m2);
        let g_new = zm_reduce(&zpoly::add(&zpoly::add(&g, &zpoly::mul(&t, &e)), &zpoly::mul(&q, &g)), &m2);
        let h_new = zm_reduce(&zpoly::add(&h, &r), &m2);
        let b = zm_reduce(
            &zpoly::sub(&zpoly::add(&zpoly::mul(&s, &g_new), &zpoly::mul(&t, &h_new)), &[BigInt::one()]),
            &m2,
        );
        let (c, d) = zm_div_rem_monic(&zm_mul(&s, &b, &m2), &h_new, &m2);
        s = zm_reduce(&zpoly::sub(&s, &d), &m2);
        t = zm_reduce(&zpoly::sub(&zpoly::sub(&t, &zpoly::mul(&t, &b)), &zpoly::mul(&c, &g_new)), &m2);
        g = g_new;
        h = h_new;
        m = m2;
    }
    (g, h)
}

fn symmetric(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|c| {
            let r = modp::mod_big(c, m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    zpoly::trim(&mut out);
    out
}

/// Zassenhaus subset recombination of lifted monic factors.
fn recombine(
    f: &[BigInt],
    mut lifted: Vec<Vec<BigInt>>,
    pk: &BigInt,
    allowed: &BTreeSet<usize>,
) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        let r = lifted.len();
        for subset in combinations(r, size) {
            let deg: usize = subset.iter().map(|&i| zpoly::degree(&lifted[i]).unwrap()).sum();
            if !allowed.contains(&deg) {
                continue;
            }
            let lc = f[zpoly::degree(&f).unwrap()].clone();
            let mut cand = vec![lc.clone()];
            for &i in &subset {
                cand = zm_mul(&cand, &lifted[i], pk);
            }
            let cand = zpoly::primitive(&symmetric(&cand, pk));
            if let Some(q) = zpoly::exact_div(&f, &cand) {
                out.push(cand);
                f = zpoly::primitive(&q);
                let keep: Vec<Vec<BigInt>> = lifted
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g.clone())
                    .collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if zpoly::degree(&f).unwrap_or(0) > 0 {
        out.push(f);
    }
    out
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = idx.clone();
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}
