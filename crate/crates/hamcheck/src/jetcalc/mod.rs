//! Exact symbolic algebra of differential polynomials on jet space.
//!
//! Everything here is immutable and pure: values may be shared freely across
//! threads.

mod calculus;
mod expr;
mod functional;

pub use expr::{rat, Coeff, JetExpr, JetVar, Monomial, MultiIndex, MAX_DIM};
pub use functional::{equal_mod_div, is_total_divergence, Domain, LocalFunctional};
