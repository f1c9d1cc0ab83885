//! Shared fixtures for the benchmarks.

use itergcd::poly::iterate;
use itergcd::Poly;

/// `x^3 + x^2` and `x^3 + 5x^2`, whose iterates share a large power of `x`.
pub fn cubic_pair() -> (Poly, Poly) {
    (Poly::from_ints(&[0, 0, 1, 1]), Poly::from_ints(&[0, 0, 5, 1]))
}

/// The `n`-th iterates of [`cubic_pair`].
pub fn cubic_iterates(n: usize) -> (Poly, Poly) {
    let (f, g) = cubic_pair();
    (iterate(&f, n).unwrap(), iterate(&g, n).unwrap())
}

/// A product of small irreducibles with repeated factors, degree 3k + 6.
pub fn factor_input(k: usize) -> Poly {
    let a = Poly::from_ints(&[-2, 0, 1]);
    let b = Poly::from_ints(&[1, 1, 0, 1]);
    let c = Poly::from_ints(&[3, -1, 1]);
    &(&a.pow(2) * &b.pow(k)) * &c.pow(1)
}
