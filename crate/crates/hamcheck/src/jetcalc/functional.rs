//! Local functionals `F = ∫ f dx` over periodic domains and the decision
//! procedure for equality modulo total divergence.

use std::fmt;

use num_traits::Zero;

use super::expr::JetExpr;

/// Periodic integration domain: the circle for one independent variable, the
/// torus for two.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Domain {
    Circle,
    Torus,
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Circle => 1,
            Domain::Torus => 2,
        }
    }

    pub fn from_dim(dim: usize) -> Self {
        match dim {
            1 => Domain::Circle,
            2 => Domain::Torus,
            _ => panic!("dimension must be 1 or 2"),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Circle => write!(f, "S1"),
            Domain::Torus => write!(f, "T2"),
        }
    }
}

/// A density together with its periodic integration domain.
///
/// Two functionals are equal *as functionals* when their densities agree
/// modulo a total divergence; see [`LocalFunctional::equivalent`].
#[derive(Clone, Debug)]
pub struct LocalFunctional {
    density: JetExpr,
    domain: Domain,
}

impl LocalFunctional {
    pub fn new(density: JetExpr, domain: Domain) -> Self {
        assert_eq!(
            density.dim(),
            domain.dim(),
            "density dimension does not match domain"
        );
        LocalFunctional { density, domain }
    }

    /// Functional over the circle (one independent variable).
    pub fn on_circle(density: JetExpr) -> Self {
        LocalFunctional::new(density, Domain::Circle)
    }

    /// Functional over the torus (two independent variables).
    pub fn on_torus(density: JetExpr) -> Self {
        LocalFunctional::new(density, Domain::Torus)
    }

    pub fn density(&self) -> &JetExpr {
        &self.density
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Variational derivative of the functional with respect to `v`.
    pub fn variational_derivative(&self, v: &str) -> JetExpr {
        self.density.euler_operator(v)
    }

    /// Equality as functionals: densities agree modulo total divergence.
    pub fn equivalent(&self, other: &LocalFunctional) -> bool {
        self.domain == other.domain && equal_mod_div(&self.density, &other.density)
    }
}

impl fmt::Display for LocalFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "int({})", self.density)
    }
}

/// Whether `e` is a total divergence on the periodic domain.
///
/// An x-free density integrates to zero on S1/T2 exactly when its Euler
/// operator image vanishes for every occurring dependent variable
/// (auxiliaries included) and its constant term is zero. Constants are
/// checked separately: they are annihilated by the Euler operator but have
/// nonzero integral.
pub fn is_total_divergence(e: &JetExpr) -> bool {
    if !e.constant_term().is_zero() {
        return false;
    }
    e.dependent_vars()
        .iter()
        .all(|v| e.euler_operator(v).is_zero())
}

/// Decides `∫ e1 = ∫ e2` on the periodic domain.
pub fn equal_mod_div(e1: &JetExpr, e2: &JetExpr) -> bool {
    assert_eq!(e1.dim(), e2.dim(), "independent-variable count mismatch");
    is_total_divergence(&(e1 - e2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcalc::expr::{rat, JetVar, MultiIndex};

    fn u_j(j: u32) -> JetExpr {
        JetExpr::jet(JetVar::new("u", MultiIndex::d1(j)))
    }

    #[test]
    fn exact_derivative_is_divergence() {
        let e = &u_j(0) * &u_j(1); // D_x(u^2/2)
        assert!(equal_mod_div(&e, &JetExpr::zero(1)));
    }

    #[test]
    fn pairing_with_auxiliary() {
        // m*theta_x ~ -m_x*theta, both sides of D_x(m*theta)
        let m = JetExpr::var("m", 1);
        let m_x = JetExpr::jet(JetVar::new("m", MultiIndex::d1(1)));
        let th = JetExpr::var("theta", 1);
        let th_x = JetExpr::jet(JetVar::new("theta", MultiIndex::d1(1)));
        assert!(equal_mod_div(&(&m * &th_x), &-(&m_x * &th)));
    }

    #[test]
    fn integration_by_parts_once() {
        // u*u_xx ~ -u_x^2 but not ~ u^2
        assert!(equal_mod_div(&(&u_j(0) * &u_j(2)), &-u_j(1).pow(2)));
        assert!(!equal_mod_div(&(&u_j(0) * &u_j(2)), &u_j(0).pow(2)));
    }

    #[test]
    fn constants_are_not_divergences() {
        let c = JetExpr::constant(1, rat(3, 7));
        assert!(!is_total_divergence(&c));
        assert!(is_total_divergence(&JetExpr::zero(1)));
    }

    #[test]
    fn torus_divergence() {
        // D_x(w*w_y) on the torus
        let w = JetExpr::var("w", 2);
        let w_y = JetExpr::jet(JetVar::new("w", MultiIndex::d2(0, 1)));
        let e = (&w * &w_y).total_derivative(0);
        assert!(is_total_divergence(&e));
    }

    #[test]
    fn functional_equivalence() {
        let f = LocalFunctional::on_circle(&u_j(0) * &u_j(2));
        let g = LocalFunctional::on_circle(-u_j(1).pow(2));
        assert!(f.equivalent(&g));
        assert_eq!(f.to_string(), "int(u*u_xx)");
    }
}
