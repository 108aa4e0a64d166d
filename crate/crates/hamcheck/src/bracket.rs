//! Poisson brackets of local functionals: the Jacobi-identity verifier via
//! the cyclic trivector criterion, Casimir checking, and derivation of the
//! Hamiltonian evolution equation.

use crate::diffop::LinDiffOp;
use crate::error::{BracketError, JetError};
use crate::jetcalc::{equal_mod_div, Domain, JetExpr, JetVar, LocalFunctional, MultiIndex};

/// A candidate Hamiltonian structure `{F,G} = ∫ δF · P δG dx`.
///
/// Construction certifies skew-symmetry of the operator; every further check
/// may assume it.
#[derive(Clone, Debug)]
pub struct BracketStructure {
    op: LinDiffOp,
    state: String,
    domain: Domain,
}

/// Outcome of the Jacobi verification.
#[derive(Clone, Debug)]
pub struct JacobiReport {
    /// True when the cyclic sum is a total divergence.
    pub passes: bool,
    /// Zero expression on pass; the canonical form of the cyclic sum on fail.
    pub residual: JetExpr,
    /// The operator `D_{P theta} P` used in the trivector computation, kept
    /// for inspection.
    pub frechet_along_p_theta: LinDiffOp,
    /// Names of the auxiliary variables used for the cyclic arguments.
    pub aux_vars: [String; 3],
}

/// Outcome of a Casimir check: `P δC` and whether it vanishes identically.
#[derive(Clone, Debug)]
pub struct CasimirReport {
    pub is_casimir: bool,
    /// `P δC`, zero exactly when the functional is a Casimir.
    pub residual: JetExpr,
}

impl BracketStructure {
    /// Certifies that `op` is skew-symmetric and matches the domain
    /// dimension; rejects the structure otherwise.
    pub fn new(
        op: LinDiffOp,
        state: impl Into<String>,
        domain: Domain,
    ) -> Result<Self, BracketError> {
        if op.dim() != domain.dim() {
            return Err(BracketError::DimensionMismatch {
                op_dim: op.dim(),
                domain_dim: domain.dim(),
            });
        }
        let defect = op.skew_defect();
        if !defect.is_zero() {
            return Err(BracketError::NotSkew {
                defect: defect.to_string(),
            });
        }
        Ok(BracketStructure {
            op,
            state: state.into(),
            domain,
        })
    }

    pub fn operator(&self) -> &LinDiffOp {
        &self.op
    }

    pub fn state_var(&self) -> &str {
        &self.state
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Auxiliary variable names that clash neither with the state variable
    /// nor with any coefficient variable of the operator.
    fn fresh_aux<const N: usize>(&self, bases: [&str; N]) -> [String; N] {
        let mut used = self.op.dependent_vars();
        used.insert(self.state.clone());
        let mut out: [String; N] = std::array::from_fn(|_| String::new());
        for (slot, base) in out.iter_mut().zip(bases) {
            let mut candidate = base.to_string();
            let mut i = 0u32;
            while used.contains(&candidate) {
                i += 1;
                candidate = format!("{}{}", base, i);
            }
            used.insert(candidate.clone());
            *slot = candidate;
        }
        out
    }

    /// Density of `{F,G}`: `δF * P(δG)`. The result is again a local
    /// functional on the same domain.
    pub fn bracket_density(
        &self,
        f: &LocalFunctional,
        g: &LocalFunctional,
    ) -> LocalFunctional {
        assert_eq!(f.domain(), self.domain, "functional domain mismatch");
        assert_eq!(g.domain(), self.domain, "functional domain mismatch");
        let df = f.variational_derivative(&self.state);
        let dg = g.variational_derivative(&self.state);
        LocalFunctional::new(&df * &self.op.apply(&dg), self.domain)
    }

    /// The trivector cyclic sum `S = Σ_cyc xi * (D_{P zeta} P)(eta)` over
    /// fresh auxiliary variables standing in for arbitrary gradients, along
    /// with the auxiliary names used. The bracket satisfies the Jacobi
    /// identity exactly when `S` is a total divergence.
    pub fn jacobi_cyclic_sum(&self) -> (JetExpr, [String; 3]) {
        let [xi, eta, zeta] = self.fresh_aux(["xi", "eta", "zeta"]);
        let n = self.dim();
        let mut cyclic_sum = JetExpr::zero(n);
        for (a, b, c) in [(&xi, &eta, &zeta), (&eta, &zeta, &xi), (&zeta, &xi, &eta)] {
            let dir = self.op.apply(&JetExpr::var(c.clone(), n));
            let perturbed = self.op.op_frechet(&self.state, &dir);
            let term = &JetExpr::var(a.clone(), n) * &perturbed.apply(&JetExpr::var(b.clone(), n));
            cyclic_sum = &cyclic_sum + &term;
        }
        (cyclic_sum, [xi, eta, zeta])
    }

    /// Jacobi identity via the trivector criterion: passes exactly when the
    /// cyclic sum of [`BracketStructure::jacobi_cyclic_sum`] is a total
    /// divergence.
    pub fn jacobi_check(&self) -> JacobiReport {
        let n = self.dim();
        let (cyclic_sum, aux) = self.jacobi_cyclic_sum();
        let [theta] = self.fresh_aux(["theta"]);

        let passes = equal_mod_div(&cyclic_sum, &JetExpr::zero(n));
        let residual = if passes {
            JetExpr::zero(n)
        } else {
            cyclic_sum
        };
        let theta_dir = self.op.apply(&JetExpr::var(theta, n));
        let frechet_along_p_theta = self.op.op_frechet(&self.state, &theta_dir);
        JacobiReport {
            passes,
            residual,
            frechet_along_p_theta,
            aux_vars: aux,
        }
    }

    /// Whether `C` is a Casimir: given skewness, `{C,F} = 0` for every `F`
    /// exactly when `P δC` vanishes identically.
    pub fn casimir_check(&self, c: &LocalFunctional) -> CasimirReport {
        assert_eq!(c.domain(), self.domain, "functional domain mismatch");
        let residual = self.op.apply(&c.variational_derivative(&self.state));
        CasimirReport {
            is_casimir: residual.is_zero(),
            residual,
        }
    }

    /// Right-hand side of the evolution equation `state_t = P(grad H)`, with
    /// optional substitutions applied afterwards to express the result in
    /// preferred variables.
    ///
    /// `grad_h` is either the variational derivative of a local density or a
    /// directly supplied gradient (for Hamiltonians that are not local in the
    /// state variable).
    pub fn derive_evolution(
        &self,
        grad_h: &JetExpr,
        substitutions: &[(String, JetExpr)],
    ) -> Result<JetExpr, JetError> {
        let mut rhs = self.op.apply(grad_h);
        for (var, replacement) in substitutions {
            rhs = rhs.substitute(var, replacement)?;
        }
        Ok(rhs)
    }
}

/// The Lie-Poisson operator `-(2 m D + m_x)` on the circle, in the variable
/// `state`.
pub fn lie_poisson_operator(state: &str) -> LinDiffOp {
    let m = JetExpr::var(state, 1);
    let m_x = JetExpr::jet(JetVar::new(state, MultiIndex::d1(1)));
    &LinDiffOp::monomial(MultiIndex::d1(1), m.scale(&crate::jetcalc::rat(-2, 1)))
        + &LinDiffOp::mult(-m_x)
}

/// The vorticity operator `w_x D_y - w_y D_x` on the torus, in the variable
/// `state`.
pub fn vorticity_operator(state: &str) -> LinDiffOp {
    let wx = JetExpr::jet(JetVar::new(state, MultiIndex::d2(1, 0)));
    let wy = JetExpr::jet(JetVar::new(state, MultiIndex::d2(0, 1)));
    &LinDiffOp::monomial(MultiIndex::d2(0, 1), wx)
        - &LinDiffOp::monomial(MultiIndex::d2(1, 0), wy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcalc::rat;

    fn u_j(j: u32) -> JetExpr {
        JetExpr::jet(JetVar::new("u", MultiIndex::d1(j)))
    }

    fn m_j(j: u32) -> JetExpr {
        JetExpr::jet(JetVar::new("m", MultiIndex::d1(j)))
    }

    fn gardner() -> BracketStructure {
        BracketStructure::new(LinDiffOp::derivative(1, 0), "u", Domain::Circle).unwrap()
    }

    fn lie_poisson() -> BracketStructure {
        BracketStructure::new(lie_poisson_operator("m"), "m", Domain::Circle).unwrap()
    }

    #[test]
    fn construction_rejects_non_skew() {
        let md = LinDiffOp::monomial(MultiIndex::d1(1), m_j(0));
        assert!(matches!(
            BracketStructure::new(md, "m", Domain::Circle),
            Err(BracketError::NotSkew { .. })
        ));
    }

    #[test]
    fn bracket_density_examples() {
        // P = D_x, F = int(u^2/2), G = int(u_x^2/2): density -u*u_xxx ~ u_x*u_xx
        let f = LocalFunctional::on_circle(u_j(0).pow(2).scale(&rat(1, 2)));
        let g = LocalFunctional::on_circle(u_j(1).pow(2).scale(&rat(1, 2)));
        let fg = gardner().bracket_density(&f, &g);
        assert_eq!(fg.density(), &-(&u_j(0) * &u_j(3)));
        assert!(equal_mod_div(fg.density(), &(&u_j(1) * &u_j(2))));

        // diagonal vanishes modulo divergence
        let ff = gardner().bracket_density(&f, &f);
        assert!(equal_mod_div(ff.density(), &JetExpr::zero(1)));

        // Lie-Poisson: {int m, int m^2/2} has density -3 m m_x ~ 0
        let c = LocalFunctional::on_circle(m_j(0));
        let h = LocalFunctional::on_circle(m_j(0).pow(2).scale(&rat(1, 2)));
        let ch = lie_poisson().bracket_density(&c, &h);
        assert_eq!(ch.density(), &(&m_j(0) * &m_j(1)).scale(&rat(-3, 1)));
        assert!(equal_mod_div(ch.density(), &JetExpr::zero(1)));
    }

    #[test]
    fn jacobi_constant_coefficients_pass() {
        let report = gardner().jacobi_check();
        assert!(report.passes);
        assert!(report.residual.is_zero());
        assert!(report.frechet_along_p_theta.is_zero());
    }

    #[test]
    fn jacobi_lie_poisson_passes_with_printed_intermediate() {
        let report = lie_poisson().jacobi_check();
        assert!(report.passes);
        assert!(report.residual.is_zero());

        let th_j = |j: u32| JetExpr::jet(JetVar::new("theta", MultiIndex::d1(j)));
        let coeff_d =
            &(&m_j(0) * &th_j(1)).scale(&rat(4, 1)) + &(&m_j(1) * &th_j(0)).scale(&rat(2, 1));
        let coeff_i = &(&(&m_j(0) * &th_j(2)).scale(&rat(2, 1))
            + &(&m_j(1) * &th_j(1)).scale(&rat(3, 1)))
            + &(&m_j(2) * &th_j(0));
        let expected =
            &LinDiffOp::monomial(MultiIndex::d1(1), coeff_d) + &LinDiffOp::mult(coeff_i);
        assert_eq!(report.frechet_along_p_theta, expected);
    }

    #[test]
    fn jacobi_vorticity_operator_passes() {
        let b = BracketStructure::new(vorticity_operator("w"), "w", Domain::Torus).unwrap();
        let report = b.jacobi_check();
        assert!(report.passes);
        assert!(report.residual.is_zero());
    }

    #[test]
    fn jacobi_negative_control_fails() {
        // 2 m_x D + m_xx: skew by construction, fails the cyclic-sum test
        let p = &LinDiffOp::monomial(MultiIndex::d1(1), m_j(1).scale(&rat(2, 1)))
            + &LinDiffOp::mult(m_j(2));
        let b = BracketStructure::new(p, "m", Domain::Circle).unwrap();
        let report = b.jacobi_check();
        assert!(!report.passes);
        assert!(!report.residual.is_zero());
    }

    #[test]
    fn jacobi_auxiliaries_avoid_state_name() {
        let b = BracketStructure::new(LinDiffOp::derivative(1, 0), "xi", Domain::Circle).unwrap();
        let report = b.jacobi_check();
        assert!(report.passes);
        assert_eq!(report.aux_vars[0], "xi1");
    }

    #[test]
    fn casimir_examples() {
        // int u is a Casimir of D_x
        let report = gardner().casimir_check(&LocalFunctional::on_circle(u_j(0)));
        assert!(report.is_casimir);

        // int m is not a Casimir of the Lie-Poisson operator; residual -m_x
        let report = lie_poisson().casimir_check(&LocalFunctional::on_circle(m_j(0)));
        assert!(!report.is_casimir);
        assert_eq!(report.residual, -m_j(1));
    }

    #[test]
    fn casimir_enstrophy_family() {
        let b = BracketStructure::new(vorticity_operator("w"), "w", Domain::Torus).unwrap();
        let w = JetExpr::var("w", 2);
        for k in 1..=5u32 {
            let c = LocalFunctional::on_torus(w.pow(k));
            let report = b.casimir_check(&c);
            assert!(report.is_casimir, "int(w^{}) should be a Casimir", k);
        }
    }

    #[test]
    fn derive_kdv() {
        let h = &u_j(0).pow(3).scale(&rat(1, 6)) - &u_j(1).pow(2).scale(&rat(1, 2));
        let grad = h.euler_operator("u");
        let rhs = gardner().derive_evolution(&grad, &[]).unwrap();
        assert_eq!(rhs, &u_j(3) + &(&u_j(0) * &u_j(1)));
        assert_eq!(rhs.to_string(), "u_xxx + u*u_x");
    }

    #[test]
    fn derive_burgers() {
        let grad = m_j(0).pow(2).scale(&rat(1, 2)).euler_operator("m");
        let rhs = lie_poisson().derive_evolution(&grad, &[]).unwrap();
        assert_eq!(rhs, (&m_j(0) * &m_j(1)).scale(&rat(-3, 1)));
        assert_eq!(rhs.to_string(), "-3*m*m_x");
    }

    #[test]
    fn derive_camassa_holm() {
        // gradient supplied directly (H = 1/2 int m u is nonlocal in m),
        // then m -> u - u_xx
        let grad = JetExpr::var("u", 1);
        let subst = vec![("m".to_string(), &u_j(0) - &u_j(2))];
        let rhs = lie_poisson().derive_evolution(&grad, &subst).unwrap();
        let expected = -(&(&(&u_j(0) * &u_j(1)).scale(&rat(3, 1))
            - &(&u_j(1) * &u_j(2)).scale(&rat(2, 1)))
            - &(&u_j(0) * &u_j(3)));
        assert_eq!(rhs, expected);
        assert_eq!(rhs.to_string(), "-3*u*u_x + u*u_xxx + 2*u_x*u_xx");
    }

    #[test]
    fn bracket_antisymmetry_small() {
        let f = LocalFunctional::on_circle(&m_j(0).pow(2) + &m_j(1).pow(2));
        let g = LocalFunctional::on_circle(&m_j(0).pow(3) + &(&m_j(0) * &m_j(1)));
        let b = lie_poisson();
        let fg = b.bracket_density(&f, &g);
        let gf = b.bracket_density(&g, &f);
        assert!(equal_mod_div(
            &(fg.density() + gf.density()),
            &JetExpr::zero(1)
        ));
    }
}
