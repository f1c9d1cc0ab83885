//! Complex roots of rational polynomials by Aberth–Ehrlich iteration.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;

const MAX_ITERS: usize = 2000;
const RESIDUAL_TOL: f64 = 1e-12;

/// All complex roots of `p` (with multiplicity), reals ascending, then each
/// conjugate pair with the positive-imaginary member first, pairs ordered by
/// real then imaginary part. `seed` rotates the starting circle.
pub fn poly_roots(p: &Poly, seed: u64) -> Result<Vec<Complex64>> {
    let n = p.deg();
    if n == 0 {
        return Ok(Vec::new());
    }
    let lc = p.lc().unwrap();
    let cs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| (c / lc).to_f64().unwrap_or(f64::NAN))
        .collect();
    if cs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonConvergence(format!(
            "coefficients of {p} do not fit in double precision"
        )));
    }
    if n == 1 {
        return Ok(vec![Complex64::new(-cs[0], 0.0)]);
    }
    // Zero roots are split off exactly.
    let zeros = cs.iter().take_while(|c| **c == 0.0).count();
    let cs = &cs[zeros..];
    let mut roots = vec![Complex64::zero(); zeros];
    if cs.len() > 1 {
        roots.extend(aberth(cs, seed)?);
    }
    Ok(order_roots(roots))
}

fn eval_with_derivative(cs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in cs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `sum |c_i| |z|^i`, the scale against which residuals are measured.
fn magnitude(cs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    cs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
}

fn aberth(cs: &[f64], seed: u64) -> Result<Vec<Complex64>> {
    let n = cs.len() - 1;
    // Fujiwara bound on the root moduli for a monic polynomial.
    let bound = (1..=n)
        .map(|k| {
            let c = cs[n - k].abs();
            if k == n {
                (c / 2.0).powf(1.0 / k as f64)
            } else {
                c.powf(1.0 / k as f64)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    // Start on the circle of radius (|c_0|)^(1/n), the geometric mean modulus.
    let radius = cs[0].abs().powf(1.0 / n as f64).clamp(1e-3, bound.max(1e-3));
    let offset = 0.4 + (seed % 1000) as f64 / 1000.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / n as f64 + offset))
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERS {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(cs, z[k]);
            if p.norm() <= f64::EPSILON * magnitude(cs, z[k]) {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    // Newton polish.
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(cs, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zk -= step;
        }
    }
    let worst = z
        .iter()
        .map(|&zk| eval_with_derivative(cs, zk).0.norm() / magnitude(cs, zk))
        .fold(0.0f64, f64::max);
    if worst > RESIDUAL_TOL || (!converged && worst.is_nan()) {
        return Err(Error::NonConvergence(format!(
            "relative residual {worst:e} after {MAX_ITERS} iterations"
        )));
    }
    Ok(z)
}

fn order_roots(roots: Vec<Complex64>) -> Vec<Complex64> {
    let n = roots.len();
    let is_real = |z: &Complex64| z.im.abs() <= 1e-10 * z.norm().max(1.0);
    let mut reals: Vec<f64> = roots.iter().filter(|z| is_real(z)).map(|z| z.re).collect();
    let mut upper: Vec<Complex64> = roots
        .iter()
        .filter(|z| !is_real(z) && z.im > 0.0)
        .copied()
        .collect();
    let lower = roots.iter().filter(|z| !is_real(z) && z.im < 0.0).count();
    if reals.len() + 2 * upper.len() != n || lower != upper.len() {
        // Not conjugate-symmetric within tolerance; keep a plain sort.
        let mut all = roots;
        all.sort_by(|a, b| a.re.total_cmp(&b.re).then(b.im.total_cmp(&a.im)));
        return all;
    }
    reals.sort_by(f64::total_cmp);
    upper.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<Complex64> = reals.into_iter().map(|r| Complex64::new(r, 0.0)).collect();
    for z in upper {
        out.push(z);
        out.push(z.conj());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn small_examples() {
        let r = poly_roots(&p(&[-2, 0, 1]), 0).unwrap();
        assert!(close(r[0], Complex64::new(-2f64.sqrt(), 0.0)));
        assert!(close(r[1], Complex64::new(2f64.sqrt(), 0.0)));
        let r = poly_roots(&p(&[1, 0, 1]), 0).unwrap();
        assert!(close(r[0], Complex64::new(0.0, 1.0)));
        assert!(close(r[1], Complex64::new(0.0, -1.0)));
        let r = poly_roots(&p(&[-5, 1]), 0).unwrap();
        assert_eq!(r, vec![Complex64::new(5.0, 0.0)]);
    }

    #[test]
    fn high_degree_binomial() {
        let mut cs = vec![0i64; 257];
        cs[0] = -2;
        cs[256] = 1;
        let r = poly_roots(&p(&cs), 7).unwrap();
        assert_eq!(r.len(), 256);
        let m = 2f64.powf(1.0 / 256.0);
        assert!(r.iter().all(|z| (z.norm() - m).abs() < 1e-12));
    }

    #[test]
    fn product_reconstructs() {
        let f = p(&[3, -7, 0, 2, 5, -1, 1]);
        let r = poly_roots(&f, 1).unwrap();
        let mut prod = vec![Complex64::new(1.0, 0.0)];
        for z in &r {
            let mut next = vec![Complex64::zero(); prod.len() + 1];
            for (i, c) in prod.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * z;
            }
            prod = next;
        }
        for (i, c) in f.coeffs().iter().enumerate() {
            let want = c.to_f64().unwrap();
            assert!((prod[i].re - want).abs() < 1e-8 * want.abs().max(1.0));
            assert!(prod[i].im.abs() < 1e-8);
        }
    }

    #[test]
    fn zero_root_split_off() {
        let r = poly_roots(&p(&[0, -1, 0, 1]), 0).unwrap();
        assert_eq!(r.len(), 3);
        assert!(close(r[1], Complex64::zero()));
    }
}
