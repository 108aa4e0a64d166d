//! Symbolic verification of Hamiltonian structures on jet space.
//!
//! The crate decides, by exact rational computation, whether a candidate
//! Poisson bracket `{F,G} = ∫ δF · P δG dx` on local functionals over a
//! periodic domain is a valid Hamiltonian structure: skew-symmetry of the
//! operator, closure, and the Jacobi identity via the cyclic trivector
//! criterion. From a verified bracket it derives the evolution equation
//! `state_t = P δH` and cross-validates the result with a pseudo-spectral
//! integrator (KdV, inviscid Burgers, Camassa-Holm) and a finite-dimensional
//! rigid-body reference system.
//!
//! Start with the runnable examples in `examples/`, one per capability, or
//! with the `hamcheck` command-line tool and the `.ham` documents under
//! `examples/ham/`.

pub mod bracket;
pub mod cli;
pub mod diffop;
pub mod dsl;
pub mod error;
pub mod findim;
pub mod jetcalc;
pub mod spectral;

pub use bracket::{BracketStructure, CasimirReport, JacobiReport};
pub use diffop::LinDiffOp;
pub use error::{BracketError, FindimError, JetError, SpectralError};
pub use jetcalc::{
    equal_mod_div, is_total_divergence, rat, Coeff, Domain, JetExpr, JetVar, LocalFunctional,
    Monomial, MultiIndex,
};
