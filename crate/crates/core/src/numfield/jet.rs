//! Truncated Taylor expansions about a point of a number field.

use std::fmt;

use super::NumberFieldElem;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// `sum coeffs[i] (x - center)^i` modulo `(x - center)^order`.
#[derive(Clone, PartialEq, Eq)]
pub struct Jet {
    center: NumberFieldElem,
    coeffs: Vec<NumberFieldElem>,
}

impl Jet {
    /// Build from explicit coefficients; `coeffs` must be nonempty.
    pub fn new(center: NumberFieldElem, coeffs: Vec<NumberFieldElem>) -> Self {
        assert!(!coeffs.is_empty(), "jet of order zero");
        Jet { center, coeffs }
    }

    /// The jet of the identity map at `center`.
    pub fn identity(center: &NumberFieldElem, order: usize) -> Self {
        let field = center.field();
        let mut coeffs = vec![field.zero(); order.max(1)];
        coeffs[0] = center.clone();
        if order > 1 {
            coeffs[1] = field.one();
        }
        Jet {
            center: center.clone(),
            coeffs,
        }
    }

    pub fn center(&self) -> &NumberFieldElem {
        &self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[NumberFieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &NumberFieldElem {
        &self.coeffs[i]
    }

    /// Value at the center.
    pub fn value(&self) -> &NumberFieldElem {
        &self.coeffs[0]
    }

    /// Index of the first nonzero coefficient, if any below the order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// First nonzero coefficient index at or above `from`.
    pub fn valuation_from(&self, from: usize) -> Option<usize> {
        self.coeffs
            .iter()
            .skip(from)
            .position(|c| !c.is_zero())
            .map(|i| i + from)
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order.max(1));
        Jet {
            center: self.center.clone(),
            coeffs,
        }
    }

    fn check_center(&self, other: &Jet) -> Result<()> {
        if self.center != other.center {
            return Err(Error::CenterMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_center(other)?;
        let k = self.order().min(other.order());
        Ok(Jet {
            center: self.center.clone(),
            coeffs: (0..k).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        })
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.check_center(other)?;
        let k = self.order().min(other.order());
        Ok(Jet {
            center: self.center.clone(),
            coeffs: (0..k).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        })
    }

    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_center(other)?;
        let k = self.order().min(other.order());
        Ok(Jet {
            center: self.center.clone(),
            coeffs: truncated_product(&self.coeffs, &other.coeffs, k),
        })
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.render()).collect();
        write!(f, "Jet@{}[{}]", self.center.render(), parts.join(", "))
    }
}

fn truncated_product(
    a: &[NumberFieldElem],
    b: &[NumberFieldElem],
    k: usize,
) -> Vec<NumberFieldElem> {
    let field = a[0].field();
    let mut out = vec![field.zero(); k];
    for (i, x) in a.iter().enumerate().take(k) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(k - i) {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// Taylor coefficients of `f` about `center`, orders `0..order`, by repeated
/// synthetic division by `x - center`.
pub fn jet_at(f: &Poly, center: &NumberFieldElem, order: usize) -> Jet {
    assert!(order >= 1, "jet order must be positive");
    let field = center.field();
    let mut work: Vec<NumberFieldElem> = f
        .coeffs()
        .iter()
        .map(|c| field.from_rational(c.clone()))
        .collect();
    let mut coeffs = Vec::with_capacity(order);
    for _ in 0..order {
        if work.is_empty() {
            coeffs.push(field.zero());
            continue;
        }
        // Divide work by (x - center): quotient replaces work, remainder is the coefficient.
        let n = work.len();
        let mut acc = field.zero();
        let mut quotient = vec![field.zero(); n - 1];
        for i in (0..n).rev() {
            acc = &(&acc * center) + &work[i];
            if i > 0 {
                quotient[i - 1] = acc.clone();
            }
        }
        coeffs.push(acc);
        work = quotient;
    }
    Jet {
        center: center.clone(),
        coeffs,
    }
}

/// Truncated composition `outer ∘ inner`. The inner jet's value must equal the
/// outer jet's center; the result is centered where `inner` is, with order the
/// smaller of the two.
pub fn jet_compose(outer: &Jet, inner: &Jet) -> Result<Jet> {
    if inner.value() != &outer.center {
        return Err(Error::CenterMismatch);
    }
    let k = outer.order().min(inner.order());
    let field = inner.center.field();
    // delta = inner - inner(center), a series with zero constant term.
    let mut delta = inner.coeffs[..k].to_vec();
    delta[0] = field.zero();
    let mut acc = vec![field.zero(); k];
    acc[0] = outer.coeffs[k - 1].clone();
    for i in (0..k - 1).rev() {
        acc = truncated_product(&acc, &delta, k);
        acc[0] = &acc[0] + &outer.coeffs[i];
    }
    Ok(Jet {
        center: inner.center.clone(),
        coeffs: acc,
    })
}
