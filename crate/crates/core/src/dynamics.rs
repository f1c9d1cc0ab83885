//! Orbits, periodicity, ramified cycles, compositional words and standard
//! polynomial families.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::config;
use crate::error::{Error, Result};
use crate::numfield::{nf_eval, NumberFieldElem};
use crate::poly::{compose, iterate, rational_bits, Poly, Rational};

/// Why an orbit computation stopped without finding a repeat.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EscapeReason {
    SizeCap,
    StepCap,
}

#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub start: NumberFieldElem,
    /// Distinct orbit points in order, starting with `start`.
    pub points: Vec<NumberFieldElem>,
    /// `None` when the orbit escaped.
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    pub escape: Option<EscapeReason>,
}

impl OrbitRecord {
    pub fn is_periodic(&self) -> bool {
        self.preperiod == Some(0)
    }

    pub fn is_preperiodic(&self) -> bool {
        self.preperiod.is_some()
    }

    /// Smallest `j >= 1` with `q^j(start) = target`, if the recorded orbit
    /// decides it. Escaped orbits count as never reaching `target`.
    pub fn first_hit(&self, target: &NumberFieldElem) -> Option<usize> {
        let idx = self.points.iter().position(|p| p == target)?;
        if idx >= 1 {
            return Some(idx);
        }
        // start == target: the next return is a full period, if any.
        if self.is_periodic() {
            self.period
        } else {
            None
        }
    }
}

/// Iterate `q` from `x0` until a value repeats, the step cap is reached, or a
/// value's representation exceeds `size_cap` bits.
pub fn orbit(q: &Poly, x0: &NumberFieldElem, step_cap: usize, size_cap: u64) -> OrbitRecord {
    // The cached embeddings inside the field do not take part in Hash or Eq.
    #[allow(clippy::mutable_key_type)]
    let mut seen: HashMap<NumberFieldElem, usize> = HashMap::new();
    let mut points = vec![x0.clone()];
    seen.insert(x0.clone(), 0);
    let record = |preperiod, period, escape, points| OrbitRecord {
        start: x0.clone(),
        points,
        preperiod,
        period,
        escape,
    };
    for step in 1..=step_cap {
        let next = nf_eval(q, &points[step - 1]);
        if let Some(&j) = seen.get(&next) {
            return record(Some(j), Some(step - j), None, points);
        }
        if next.bits() > size_cap {
            return record(None, None, Some(EscapeReason::SizeCap), points);
        }
        seen.insert(next.clone(), step);
        points.push(next);
    }
    record(None, None, Some(EscapeReason::StepCap), points)
}

/// [`orbit`] with the configured caps.
pub fn orbit_default(q: &Poly, x0: &NumberFieldElem) -> OrbitRecord {
    let cfg = config::get();
    orbit(q, x0, cfg.orbit_step_cap, cfg.orbit_size_cap_bits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleStatus {
    InRamifiedCycle,
    InUnramifiedCycle,
    NotPeriodic,
    /// The step cap was reached before the orbit closed or escaped.
    Undecided,
}

/// Is `c` in a cycle of `q` whose return map has vanishing derivative at `c`?
/// The derivative is the chain-rule product of `q'` over the cycle.
pub fn ramified_cycle_check(q: &Poly, c: &NumberFieldElem) -> Result<CycleStatus> {
    if q.deg() < 2 {
        return Err(Error::InvalidInput("ramified-cycle check needs degree >= 2".into()));
    }
    let orb = orbit_default(q, c);
    Ok(classify_cycle(q, &orb))
}

pub(crate) fn classify_cycle(q: &Poly, orb: &OrbitRecord) -> CycleStatus {
    match (orb.preperiod, orb.escape) {
        (Some(0), _) => {
            let dq = q.derivative();
            let ramified = orb.points.iter().any(|p| nf_eval(&dq, p).is_zero());
            if ramified {
                CycleStatus::InRamifiedCycle
            } else {
                CycleStatus::InUnramifiedCycle
            }
        }
        (Some(_), _) => CycleStatus::NotPeriodic,
        (None, Some(EscapeReason::SizeCap)) => CycleStatus::NotPeriodic,
        (None, _) => CycleStatus::Undecided,
    }
}

/// The `k >= 1` with `c = f^∘k`, if there is one.
pub fn compositional_power_check(c: &Poly, f: &Poly) -> Option<usize> {
    let df = f.deg();
    let dc = c.deg();
    if df == 0 || c.is_zero() {
        return None;
    }
    if df >= 2 {
        let mut k = 0;
        let mut d = 1usize;
        while d < dc {
            d = d.checked_mul(df)?;
            k += 1;
        }
        if d != dc || k == 0 {
            return None;
        }
        return match iterate(f, k) {
            Ok(fk) if &fk == c => Some(k),
            _ => None,
        };
    }
    if dc != 1 {
        return None;
    }
    linear_power(c, f)
}

/// `k` with `c = f^∘k` for linear `f = a x + b` and linear `c`.
fn linear_power(c: &Poly, f: &Poly) -> Option<usize> {
    let a = f.coeff(1);
    let b = f.coeff(0);
    let u = c.coeff(1);
    let t = c.coeff(0);
    if a.is_one() {
        // f^k = x + k b
        if !u.is_one() {
            return None;
        }
        if b.is_zero() {
            return t.is_zero().then_some(1);
        }
        let k = &t / &b;
        return (k.is_integer() && k.is_positive()).then(|| k.to_integer().to_usize()).flatten();
    }
    let check = |k: usize| -> bool {
        // f^k = a^k x + b (a^k - 1)/(a - 1)
        let ak = num_traits::pow(a.clone(), k);
        ak == u && &b * (&ak - Rational::one()) / (&a - Rational::one()) == t
    };
    if a == -Rational::one() {
        return [1, 2].into_iter().find(|&k| check(k));
    }
    // |a| != 1: heights of a^k strictly increase, so stop once a^k is bigger than u.
    let limit = rational_bits(&u) + 2;
    let mut ak = a.clone();
    for k in 1.. {
        if ak == u {
            return check(k).then_some(k);
        }
        if rational_bits(&ak) > limit {
            return None;
        }
        ak *= &a;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Gen {
    F,
    G,
}

/// Canonical word `f^i1 ∘ g^j1 ∘ ...`: alternating generators, exponents >= 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<(Gen, u32)>);

impl Word {
    /// Canonicalize: drop zero exponents and merge equal neighbours.
    pub fn new(entries: &[(Gen, u32)]) -> Word {
        let mut out: Vec<(Gen, u32)> = Vec::new();
        for &(g, e) in entries {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, k)) if *h == g => *k += e,
                _ => out.push((g, e)),
            }
        }
        Word(out)
    }

    pub fn from_letters(letters: &[Gen]) -> Word {
        let entries: Vec<(Gen, u32)> = letters.iter().map(|&g| (g, 1)).collect();
        Word::new(&entries)
    }

    pub fn entries(&self) -> &[(Gen, u32)] {
        &self.0
    }

    /// Outermost letter first.
    pub fn letters(&self) -> Vec<Gen> {
        self.0
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize))
            .collect()
    }

    pub fn total_exponent(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Parse strings such as `FG`, `F^2G`, `GGF`.
    pub fn parse(s: &str) -> Result<Word> {
        let bytes = s.as_bytes();
        let mut entries = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let g = match bytes[i] {
                b'F' | b'f' => Gen::F,
                b'G' | b'g' => Gen::G,
                b' ' => {
                    i += 1;
                    continue;
                }
                _ => return Err(Error::InvalidInput(format!("bad word letter at offset {i} in {s:?}"))),
            };
            i += 1;
            let mut e = 1u32;
            if i < bytes.len() && bytes[i] == b'^' {
                let start = i + 1;
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                e = s[start..end]
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad exponent at offset {start} in {s:?}")))?;
                i = end;
            }
            entries.push((g, e));
        }
        Ok(Word::new(&entries))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("id");
        }
        for &(g, e) in &self.0 {
            let letter = match g {
                Gen::F => "F",
                Gen::G => "G",
            };
            if e == 1 {
                f.write_str(letter)?;
            } else {
                write!(f, "{letter}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Evaluate a word in the composition semigroup generated by `f` and `g`.
pub fn word_compose(w: &Word, f: &Poly, g: &Poly) -> Result<Poly> {
    let cfg = config::get();
    let mut deg: u128 = 1;
    for (gen, e) in w.entries() {
        let d = match gen {
            Gen::F => f.deg(),
            Gen::G => g.deg(),
        } as u128;
        for _ in 0..*e {
            deg = deg.saturating_mul(d);
        }
    }
    if deg > cfg.max_degree as u128 {
        return Err(Error::limit("word degree", cfg.max_degree as u64, deg.min(u64::MAX as u128) as u64));
    }
    let mut acc = Poly::x();
    for gen in w.letters().into_iter().rev() {
        acc = match gen {
            Gen::F => compose(f, &acc),
            Gen::G => compose(g, &acc),
        };
        let bits = acc.max_coeff_bits();
        if bits > cfg.max_coeff_bits {
            return Err(Error::limit("coefficient bits", cfg.max_coeff_bits, bits));
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Independence {
    /// Two distinct canonical words giving the same polynomial.
    Dependent { first: Word, second: Word },
    /// No collision among words of total exponent up to `max_len`.
    NoCollisionUpTo { max_len: u32 },
}

/// Longest words the probe enumerates (there are `2^len` of each length).
pub const MAX_PROBE_LEN: u32 = 20;

const KEY_PRIME: u64 = (1 << 61) - 1;

fn rational_mod(r: &Rational) -> u64 {
    let p = BigInt::from(KEY_PRIME);
    let num = r.numer().mod_floor(&p).to_u64().unwrap();
    let den = r.denom().mod_floor(&p).to_u64().unwrap();
    if den == 0 {
        return u64::MAX;
    }
    crate::poly::modp::mulmod(num, crate::poly::modp::invmod(den, KEY_PRIME), KEY_PRIME)
}

/// Search for a relation between words in `f` and `g`. Words are enumerated
/// by total exponent, then lexicographically with `F` before `G`; candidates
/// are grouped by degree and leading coefficient (tracked without composing)
/// and only same-key words are composed and compared.
pub fn independence_probe(f: &Poly, g: &Poly, max_len: u32) -> Result<Independence> {
    if f.deg() < 1 || g.deg() < 1 {
        return Err(Error::InvalidInput("independence probe needs nonconstant f and g".into()));
    }
    if max_len > MAX_PROBE_LEN {
        return Err(Error::limit("probe word length", MAX_PROBE_LEN as u64, max_len as u64));
    }
    let gens = [
        (f.deg() as u128, rational_mod(f.lc().unwrap())),
        (g.deg() as u128, rational_mod(g.lc().unwrap())),
    ];
    let mut groups: HashMap<(u128, u64), Vec<Word>> = HashMap::new();
    let mut cache: HashMap<Word, Poly> = HashMap::new();
    let mut eval = |w: &Word| -> Result<Poly> {
        if let Some(p) = cache.get(w) {
            return Ok(p.clone());
        }
        let p = word_compose(w, f, g)?;
        cache.insert(w.clone(), p.clone());
        Ok(p)
    };
    for len in 1..=max_len {
        for code in 0u64..(1u64 << len) {
            let letters: Vec<Gen> = (0..len)
                .map(|j| if code >> (len - 1 - j) & 1 == 1 { Gen::G } else { Gen::F })
                .collect();
            // (deg, lc) from the innermost letter outwards: lc(s∘h) = lc(s) lc(h)^deg s.
            let mut deg: u128 = 1;
            let mut lc: u64 = 1;
            for &l in letters.iter().rev() {
                let (ds, ls) = gens[l as usize];
                lc = crate::poly::modp::mulmod(
                    ls,
                    crate::poly::modp::powmod(lc, ds as u64, KEY_PRIME),
                    KEY_PRIME,
                );
                deg = deg.saturating_mul(ds);
            }
            let w = Word::from_letters(&letters);
            let bucket = groups.entry((deg, lc)).or_default();
            if !bucket.is_empty() {
                let pw = eval(&w)?;
                for earlier in bucket.iter() {
                    if eval(earlier)? == pw {
                        return Ok(Independence::Dependent {
                            first: earlier.clone(),
                            second: w,
                        });
                    }
                }
            }
            bucket.push(w);
        }
    }
    Ok(Independence::NoCollisionUpTo { max_len })
}

/// Standard families used to build test inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Monic Chebyshev `T_d` with `T_d(z + 1/z) = z^d + z^-d`.
    Chebyshev(usize),
    /// `γ x^d`.
    Power(usize, Rational),
    /// `α x + β`.
    Affine(Rational, Rational),
}

pub fn family(kind: &Family) -> Poly {
    match kind {
        Family::Chebyshev(d) => chebyshev(*d),
        Family::Power(d, gamma) => Poly::monomial(gamma.clone(), *d),
        Family::Affine(a, b) => Poly::new(vec![b.clone(), a.clone()]),
    }
}

/// Monic Chebyshev polynomial: `T_0 = 2`, `T_1 = x`, `T_{n+1} = x T_n - T_{n-1}`.
pub fn chebyshev(d: usize) -> Poly {
    let mut prev = Poly::from_ints(&[2]);
    let mut cur = Poly::x();
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let next = &(&Poly::x() * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;
    use crate::poly::int;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    fn q_elem(n: i64) -> NumberFieldElem {
        NumberField::rationals().from_rational(int(n))
    }

    #[test]
    fn orbit_examples() {
        let o = orbit_default(&p(&[-2, 0, 1]), &q_elem(2));
        assert_eq!((o.preperiod, o.period), (Some(0), Some(1)));
        let o = orbit_default(&p(&[-1, 0, 1]), &q_elem(0));
        assert_eq!((o.preperiod, o.period), (Some(0), Some(2)));
        let o = orbit_default(&p(&[0, 0, 1]), &q_elem(2));
        assert_eq!(o.escape, Some(EscapeReason::SizeCap));
        let o = orbit_default(&p(&[-2, 0, 1]), &q_elem(0));
        assert_eq!((o.preperiod, o.period), (Some(2), Some(1)));
        assert_eq!(o.first_hit(&q_elem(2)), Some(2));
    }

    #[test]
    fn ramified_examples() {
        assert_eq!(ramified_cycle_check(&p(&[0, 0, 1]), &q_elem(0)).unwrap(), CycleStatus::InRamifiedCycle);
        assert_eq!(ramified_cycle_check(&p(&[-1, 0, 1]), &q_elem(0)).unwrap(), CycleStatus::InRamifiedCycle);
        assert_eq!(ramified_cycle_check(&p(&[-2, 0, 1]), &q_elem(2)).unwrap(), CycleStatus::InUnramifiedCycle);
        assert_eq!(ramified_cycle_check(&p(&[-2, 0, 1]), &q_elem(0)).unwrap(), CycleStatus::NotPeriodic);
    }

    #[test]
    fn power_examples() {
        assert_eq!(compositional_power_check(&p(&[0, 0, 0, 0, 1]), &p(&[0, 0, 1])), Some(2));
        assert_eq!(compositional_power_check(&p(&[1, 0, 1]), &p(&[0, 0, 1])), None);
        assert_eq!(compositional_power_check(&p(&[5, 1]), &p(&[1, 1])), Some(5));
        assert_eq!(compositional_power_check(&p(&[0, 8]), &p(&[0, 2])), Some(3));
        assert_eq!(compositional_power_check(&p(&[3, 8]), &p(&[1, 2])), None);
        assert_eq!(compositional_power_check(&p(&[7, 8]), &p(&[1, 2])), Some(3));
        assert_eq!(compositional_power_check(&p(&[0, 1]), &p(&[3, -1])), Some(2));
        assert_eq!(compositional_power_check(&p(&[-5, 1]), &p(&[1, 1])), None);
    }

    #[test]
    fn word_examples() {
        let f = p(&[0, 0, 1]);
        let g = p(&[0, 0, 0, 1]);
        let x6 = p(&[0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(word_compose(&Word::parse("FG").unwrap(), &f, &g).unwrap(), x6);
        assert_eq!(word_compose(&Word::parse("GF").unwrap(), &f, &g).unwrap(), x6);
        assert_eq!(word_compose(&Word::parse("F^2").unwrap(), &p(&[0, 2]), &g).unwrap(), p(&[0, 4]));
        assert_eq!(Word::parse("FFG").unwrap().to_string(), "F^2G");
        assert_eq!(Word::new(&[(Gen::F, 1), (Gen::F, 2), (Gen::G, 0)]).to_string(), "F^3");
    }

    #[test]
    fn probe_examples() {
        let fg = Independence::Dependent {
            first: Word::parse("FG").unwrap(),
            second: Word::parse("GF").unwrap(),
        };
        assert_eq!(independence_probe(&p(&[0, 0, 1]), &p(&[0, 0, 0, 1]), 4).unwrap(), fg);
        assert_eq!(independence_probe(&chebyshev(2), &chebyshev(3), 4).unwrap(), fg);
        // 2x and x+1 satisfy f∘g = 2x + 2 = g∘g∘f.
        assert_eq!(
            independence_probe(&p(&[0, 2]), &p(&[1, 1]), 4).unwrap(),
            Independence::Dependent {
                first: Word::parse("FG").unwrap(),
                second: Word::parse("G^2F").unwrap(),
            }
        );
        assert_eq!(
            independence_probe(&p(&[0, 0, 1]), &p(&[1, 0, 1]), 4).unwrap(),
            Independence::NoCollisionUpTo { max_len: 4 }
        );
        // x+1 and x+2 commute.
        assert!(matches!(
            independence_probe(&p(&[1, 1]), &p(&[2, 1]), 3).unwrap(),
            Independence::Dependent { .. }
        ));
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev(2), p(&[-2, 0, 1]));
        assert_eq!(chebyshev(3), p(&[0, -3, 0, 1]));
        for m in 1..=5 {
            for n in 1..=5 {
                assert_eq!(compose(&chebyshev(m), &chebyshev(n)), chebyshev(m * n));
            }
        }
        assert_eq!(family(&Family::Power(2, int(5))), p(&[0, 0, 5]));
        assert_eq!(family(&Family::Affine(int(2), int(1))), p(&[1, 2]));
    }
}
