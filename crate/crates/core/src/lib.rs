//! Exact arithmetic for gcds of polynomial iterates.
//!
//! Polynomials have rational coefficients ([`Poly`]); algebraic points live in
//! number fields ([`NumberField`]) so every zero test is exact. Floating point
//! is used only for heights.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod heights;
pub mod lab;
pub mod multiplicity;
pub mod numfield;
pub mod poly;

pub use config::Config;
pub use error::{Error, Result};
pub use lab::GcdGridReport;
pub use multiplicity::MultiplicityCertificate;
pub use numfield::{Jet, NumberField, NumberFieldElem};
pub use poly::{FactorList, Poly, Rational};
