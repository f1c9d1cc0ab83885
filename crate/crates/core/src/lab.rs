//! Experiments: gcd grids over `(m, n)`, factor-set stabilization, the
//! closed-form common root for linear pairs, and reproducers for the explicit
//! example families.

use std::fmt::Write as _;
use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiplicity::mult_of_factor;
use crate::poly::{factor_irreducible, gcd, int, iterate, rat, serde_rational, FactorList, Poly, Rational};

fn nondegenerate(fm: &Poly, c: &Poly, name: &str, m: usize) -> Result<Poly> {
    let diff = fm - c;
    if diff.is_zero() {
        return Err(Error::Degenerate(format!("{name}^{m} equals c")));
    }
    Ok(diff)
}

/// Monic `gcd(f^∘m - c, g^∘n - c)`.
pub fn gcd_iterates(f: &Poly, g: &Poly, c: &Poly, m: usize, n: usize) -> Result<Poly> {
    let a = nondegenerate(&iterate(f, m)?, c, "f", m)?;
    let b = nondegenerate(&iterate(g, n)?, c, "g", n)?;
    Ok(gcd(&a, &b))
}

/// Outcome of one grid cell.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CellOutcome {
    Ok { gcd: Poly, factors: FactorList },
    /// An iterate equals `c`; the theorems exclude these cells.
    Degenerate { reason: String },
    Error { message: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct GridCell {
    pub m: usize,
    pub n: usize,
    pub outcome: CellOutcome,
    pub millis: f64,
}

impl GridCell {
    pub fn factors(&self) -> &[(Poly, usize)] {
        match &self.outcome {
            CellOutcome::Ok { factors, .. } => &factors.factors,
            _ => &[],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GcdGridReport {
    pub f: Poly,
    pub g: Poly,
    pub c: Poly,
    pub grid_n: usize,
    pub diagonal_only: bool,
    /// Row-major in `(m, n)`.
    pub cells: Vec<GridCell>,
    /// Every irreducible factor seen, with the largest multiplicity seen.
    pub factor_universe: Vec<(Poly, usize)>,
    /// No cell with `m = grid_n` or `n = grid_n` has a factor missing from the
    /// inner cells.
    pub stabilized: bool,
}

/// `q^∘k - c` for `k = 1..=count`; entries fail from the first `k` that
/// exceeds the caps.
fn iterate_table(q: &Poly, c: &Poly, count: usize, name: &str) -> Vec<Result<Poly>> {
    let cfg = crate::config::get();
    let mut out = Vec::with_capacity(count);
    let mut acc: Result<Poly> = Ok(Poly::x());
    for k in 1..=count {
        acc = acc.and_then(|a| {
            let deg = a.deg() * q.deg();
            if deg > cfg.max_degree {
                return Err(Error::limit("iterate degree", cfg.max_degree as u64, deg as u64));
            }
            let next = q.compose(&a);
            let bits = next.max_coeff_bits();
            if bits > cfg.max_coeff_bits {
                return Err(Error::limit("coefficient bits", cfg.max_coeff_bits, bits));
            }
            Ok(next)
        });
        out.push(acc.clone().and_then(|a| nondegenerate(&a, c, name, k)));
    }
    out
}

/// Factor every `gcd(f^∘m - c, g^∘n - c)` with `1 <= m, n <= grid_n` (or the
/// diagonal only). Cell failures are recorded, never fatal.
pub fn gcd_grid(f: &Poly, g: &Poly, c: &Poly, grid_n: usize, diagonal_only: bool) -> GcdGridReport {
    let fs = iterate_table(f, c, grid_n, "f");
    let gs = iterate_table(g, c, grid_n, "g");
    let coords: Vec<(usize, usize)> = if diagonal_only {
        (1..=grid_n).map(|k| (k, k)).collect()
    } else {
        (1..=grid_n).flat_map(|m| (1..=grid_n).map(move |n| (m, n))).collect()
    };
    let cells: Vec<GridCell> = coords
        .par_iter()
        .map(|&(m, n)| {
            let start = Instant::now();
            let outcome = match (&fs[m - 1], &gs[n - 1]) {
                (Ok(a), Ok(b)) => {
                    let d = gcd(a, b);
                    match factor_irreducible(&d) {
                        Ok(factors) => CellOutcome::Ok { gcd: d, factors },
                        Err(e) => CellOutcome::Error {
                            message: e.to_string(),
                        },
                    }
                }
                (Err(Error::Degenerate(r)), _) | (_, Err(Error::Degenerate(r))) => {
                    CellOutcome::Degenerate { reason: r.clone() }
                }
                (Err(e), _) | (_, Err(e)) => CellOutcome::Error {
                    message: e.to_string(),
                },
            };
            GridCell {
                m,
                n,
                outcome,
                millis: start.elapsed().as_secs_f64() * 1000.0,
            }
        })
        .collect();

    let mut universe: Vec<(Poly, usize)> = Vec::new();
    for cell in &cells {
        for (p, e) in cell.factors() {
            match universe.iter_mut().find(|(q, _)| q == p) {
                Some(entry) => entry.1 = entry.1.max(*e),
                None => universe.push((p.clone(), *e)),
            }
        }
    }
    universe.sort();
    let inner: Vec<&Poly> = cells
        .iter()
        .filter(|c| c.m < grid_n && c.n < grid_n)
        .flat_map(|c| c.factors().iter().map(|(p, _)| p))
        .collect();
    let stabilized = cells
        .iter()
        .filter(|c| c.m == grid_n || c.n == grid_n)
        .flat_map(|c| c.factors().iter().map(|(p, _)| p))
        .all(|p| inner.contains(&p));
    GcdGridReport {
        f: f.clone(),
        g: g.clone(),
        c: c.clone(),
        grid_n,
        diagonal_only,
        cells,
        factor_universe: universe,
        stabilized,
    }
}

/// The unique `λ` with `f^∘n(λ) = g^∘n(λ)` for `f = αx`, `g = βx + γ`:
/// `λ = γ S / (α^n - β^n)` with `S = 1 + β + ... + β^(n-1)`. When `c` is
/// given, `None` unless also `c(λ) = f^∘n(λ)`.
pub fn linear_common_root(
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    c: Option<&Poly>,
    n: usize,
) -> Result<Option<Rational>> {
    if alpha.is_zero() {
        return Err(Error::InvalidInput("alpha must be nonzero".into()));
    }
    let an = num_traits::pow(alpha.clone(), n);
    let bn = num_traits::pow(beta.clone(), n);
    if an == bn {
        return Err(Error::Degenerate(format!(
            "alpha^{n} = beta^{n}: the iterates differ by a constant or coincide"
        )));
    }
    let s = if beta.is_one() {
        int(n as i64)
    } else {
        (&bn - Rational::one()) / (beta - Rational::one())
    };
    let lam = gamma * s / (&an - &bn);
    Ok(match c {
        Some(c) if c.eval(&lam) != &an * &lam => None,
        _ => Some(lam),
    })
}

/// `f = αx`, `g = βx + γ` after conjugating both maps by `x -> x + shift`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearNormalForm {
    #[serde(serialize_with = "serde_rational::serialize")]
    pub alpha: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub beta: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub gamma: Rational,
    /// Fixed point of the map placed first, moved to 0.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub shift: Rational,
    /// The roles of `f` and `g` were exchanged (f was a translation).
    pub swapped: bool,
}

fn linear_parts(p: &Poly) -> Result<(Rational, Rational)> {
    if p.deg() != 1 {
        return Err(Error::InvalidInput(format!("{p} is not linear")));
    }
    Ok((p.coeff(1), p.coeff(0)))
}

/// Conjugate a linear pair to `f = αx`, `g = βx + γ`, moving the fixed point
/// of `f` (or of `g`, when `f` is a translation) to the origin.
pub fn linear_normal_form(f: &Poly, g: &Poly) -> Result<LinearNormalForm> {
    let (a, b) = linear_parts(f)?;
    let (a2, b2) = linear_parts(g)?;
    let translation = |a: &Rational, b: &Rational| a.is_one() && !b.is_zero();
    let (swapped, (a, b), (a2, b2)) = match (translation(&a, &b), translation(&a2, &b2)) {
        (true, true) => {
            return Err(Error::InvalidInput(
                "both maps are translations, which commute".into(),
            ))
        }
        (true, false) => (true, (a2, b2), (a, b)),
        _ => (false, (a, b), (a2, b2)),
    };
    let shift = if a.is_one() {
        Rational::zero()
    } else {
        &b / (Rational::one() - &a)
    };
    // g(x + z) - z = a2 x + (a2 z + b2 - z)
    let gamma = &a2 * &shift + &b2 - &shift;
    Ok(LinearNormalForm {
        alpha: a,
        beta: a2,
        gamma,
        shift,
        swapped,
    })
}

/// Common root of `f^∘n - c` and `g^∘n - c` for arbitrary linear `f`, `g`,
/// via the normal form, in the original coordinate.
pub fn linear_pair_common_root(f: &Poly, g: &Poly, c: Option<&Poly>, n: usize) -> Result<Option<Rational>> {
    let nf = linear_normal_form(f, g)?;
    let shifted_c = c.map(|c| &c.compose(&Poly::new(vec![nf.shift.clone(), Rational::one()])) - &Poly::constant(nf.shift.clone()));
    let lam = linear_common_root(&nf.alpha, &nf.beta, &nf.gamma, shifted_c.as_ref(), n)?;
    Ok(lam.map(|l| l + &nf.shift))
}

/// One checked statement of the example suite.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub family: u8,
    pub n: usize,
    pub statement: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub claims: Vec<Claim>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| family | n | claim | result | detail |\n|---|---|---|---|---|\n");
        for c in &self.claims {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                c.family,
                c.n,
                c.statement,
                if c.passed { "pass" } else { "FAIL" },
                c.detail
            );
        }
        out
    }
}

fn claim(family: u8, n: usize, statement: String, outcome: Result<(bool, String)>) -> Claim {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
    Claim {
        family,
        n,
        statement,
        passed,
        detail,
    }
}

/// `f = 2x`, `g = x + 1`, `c = x^2`: `x - 2^n` divides `f^∘n - c` and
/// `g^∘m - c` for `m = 2^n (2^n - 1)`.
fn family_doubling(n: usize) -> Result<(bool, String)> {
    let f = Poly::from_ints(&[0, 2]);
    let g = Poly::from_ints(&[1, 1]);
    let c = Poly::from_ints(&[0, 0, 1]);
    let p = 1usize << n;
    let m = p * (p - 1);
    let root = Poly::linear_root(&int(p as i64));
    let a = &iterate(&f, n)? - &c;
    let b = &iterate(&g, m)? - &c;
    let ok = root.divides(&a) && root.divides(&b);
    Ok((ok, format!("m = {m}, gcd = {}", gcd(&a, &b))))
}

/// `f = x/2`, `g = 2x + 1`, `c = -(x + 1)` meet at `λ_n = -2^n / (2^n + 1)`.
fn family_halving(n: usize) -> Result<(bool, String)> {
    let f = Poly::new(vec![Rational::zero(), rat(1, 2)]);
    let g = Poly::from_ints(&[1, 2]);
    let c = Poly::from_ints(&[-1, -1]);
    let p = num_traits::pow(int(2), n);
    let lam = -&p / (&p + Rational::one());
    let mut fx = lam.clone();
    let mut gx = lam.clone();
    for _ in 0..n {
        fx = f.eval(&fx);
        gx = g.eval(&gx);
    }
    let closed = linear_common_root(&rat(1, 2), &int(2), &int(1), Some(&c), n)?;
    let ok = fx == gx && gx == c.eval(&lam) && closed.as_ref() == Some(&lam);
    Ok((ok, format!("λ = {lam}")))
}

/// `f = x^3 + x^2`, `g = x^3 + 5x^2`: `x` divides `gcd(f^∘n, g^∘n)` exactly `2^n` times.
fn family_cubic(n: usize) -> Result<(bool, String)> {
    let f = Poly::from_ints(&[0, 0, 1, 1]);
    let g = Poly::from_ints(&[0, 0, 5, 1]);
    let d = gcd_iterates(&f, &g, &Poly::zero(), n, n)?;
    let v = mult_of_factor(&d, &Poly::x());
    Ok((v == 1 << n, format!("v = {v}")))
}

/// Run the three example families over their stated ranges.
pub fn paper_suite() -> SuiteReport {
    let mut claims = Vec::new();
    for n in 1..=6 {
        claims.push(claim(
            1,
            n,
            format!("x - 2^{n} divides 2^{n}x - x^2 and (x+1)^m - x^2 at m = 2^{n}(2^{n}-1)"),
            family_doubling(n),
        ));
    }
    for n in 1..=20 {
        claims.push(claim(
            2,
            n,
            format!("x/2, 2x+1 and -(x+1) agree at -2^{n}/(2^{n}+1) after {n} steps"),
            family_halving(n),
        ));
    }
    for n in 1..=4 {
        claims.push(claim(
            3,
            n,
            format!("v_0 gcd of step {n} iterates of x^3+x^2, x^3+5x^2 is 2^{n}"),
            family_cubic(n),
        ));
    }
    SuiteReport { claims }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn gcd_iterates_examples() {
        let sq = p(&[0, 0, 1]);
        assert_eq!(gcd_iterates(&p(&[0, 2]), &p(&[1, 1]), &sq, 1, 2).unwrap(), p(&[-2, 1]));
        let half = Poly::new(vec![Rational::zero(), rat(1, 2)]);
        let got = gcd_iterates(&half, &p(&[1, 2]), &p(&[-1, -1]), 1, 1).unwrap();
        assert_eq!(got, Poly::new(vec![rat(2, 3), int(1)]));
        let got = gcd_iterates(&p(&[0, 0, 1, 1]), &p(&[0, 0, 5, 1]), &Poly::zero(), 2, 2).unwrap();
        assert_eq!(got, Poly::x().pow(4));
        let q = p(&[-2, 0, 1]);
        let c = iterate(&q, 2).unwrap();
        assert!(matches!(gcd_iterates(&q, &sq, &c, 2, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn grid_examples() {
        let rep = gcd_grid(&p(&[0, 0, 1]), &p(&[-2, 0, 1]), &Poly::zero(), 3, false);
        assert_eq!(rep.cells.len(), 9);
        assert!(rep.cells.iter().all(|c| matches!(&c.outcome, CellOutcome::Ok { gcd, .. } if gcd.is_one())));
        assert!(rep.factor_universe.is_empty());
        assert!(rep.stabilized);

        let rep = gcd_grid(&p(&[0, 0, 1, 1]), &p(&[0, 0, 5, 1]), &Poly::zero(), 3, true);
        let gcds: Vec<Poly> = rep
            .cells
            .iter()
            .map(|c| match &c.outcome {
                CellOutcome::Ok { gcd, .. } => gcd.clone(),
                other => panic!("{other:?}"),
            })
            .collect();
        assert_eq!(gcds, vec![Poly::x().pow(2), Poly::x().pow(4), Poly::x().pow(8)]);
        assert_eq!(rep.factor_universe, vec![(Poly::x(), 8)]);

        let rep = gcd_grid(&p(&[0, 2]), &p(&[1, 1]), &p(&[0, 0, 1]), 2, false);
        assert_eq!(rep.factor_universe, vec![(p(&[-2, 1]), 1)]);
        assert!(!rep.stabilized);
    }

    #[test]
    fn degenerate_cells_flagged() {
        let q = p(&[-2, 0, 1]);
        let c = iterate(&q, 2).unwrap();
        let rep = gcd_grid(&q, &p(&[0, 0, 1]), &c, 2, false);
        let flagged: Vec<(usize, usize)> = rep
            .cells
            .iter()
            .filter(|c| matches!(c.outcome, CellOutcome::Degenerate { .. }))
            .map(|c| (c.m, c.n))
            .collect();
        assert_eq!(flagged, vec![(2, 1), (2, 2)]);
    }

    #[test]
    fn linear_examples() {
        assert_eq!(linear_common_root(&int(2), &int(1), &int(1), None, 2).unwrap(), Some(rat(2, 3)));
        assert_eq!(linear_common_root(&int(2), &int(3), &int(1), None, 1).unwrap(), Some(int(-1)));
        assert_eq!(
            linear_common_root(&rat(1, 2), &int(2), &int(1), None, 3).unwrap(),
            Some(rat(-8, 9))
        );
        assert!(matches!(
            linear_common_root(&int(1), &int(1), &int(1), None, 3),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            linear_common_root(&int(-2), &int(2), &int(1), None, 2),
            Err(Error::Degenerate(_))
        ));
        // c = x^2 fails the consistency check at λ = 2/3.
        assert_eq!(
            linear_common_root(&int(2), &int(1), &int(1), Some(&p(&[0, 0, 1])), 2).unwrap(),
            None
        );
    }

    #[test]
    fn normal_form_round_trip() {
        // f = 2x + 3 has fixed point -3; g = 5x - 1.
        let f = p(&[3, 2]);
        let g = p(&[-1, 5]);
        for n in 1..=5 {
            let lam = linear_pair_common_root(&f, &g, None, n).unwrap().unwrap();
            let (mut a, mut b) = (lam.clone(), lam.clone());
            for _ in 0..n {
                a = f.eval(&a);
                b = g.eval(&b);
            }
            assert_eq!(a, b);
        }
        let nf = linear_normal_form(&p(&[1, 1]), &p(&[0, 3])).unwrap();
        assert!(nf.swapped);
        assert!(linear_normal_form(&p(&[1, 1]), &p(&[2, 1])).is_err());
    }

    #[test]
    fn linear_diagonal_trivial() {
        let rep = gcd_grid(&p(&[0, 2]), &p(&[1, 3]), &p(&[0, 0, 1]), 12, true);
        for cell in rep.cells.iter().filter(|c| c.n >= 2) {
            assert!(matches!(&cell.outcome, CellOutcome::Ok { gcd, .. } if gcd.is_one()), "{cell:?}");
        }
    }

    #[test]
    fn suite_passes() {
        let rep = paper_suite();
        assert_eq!(rep.claims.len(), 30);
        assert!(rep.all_passed(), "{}", rep.to_markdown());
    }
}
