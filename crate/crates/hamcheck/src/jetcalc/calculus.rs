//! Total derivatives, Fréchet derivatives, Euler and higher Eulerian
//! operators, boundary-flux extraction and substitution on [`JetExpr`].

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::expr::{Coeff, JetExpr, JetVar, Monomial, MultiIndex};
use crate::error::JetError;

impl JetExpr {
    /// Total derivative `D_i` along the given independent-variable axis.
    ///
    /// Acts by the product and chain rule over all jet variables, raising each
    /// variable's multi-index on `axis`. Panics if `axis` is out of range.
    pub fn total_derivative(&self, axis: usize) -> JetExpr {
        assert!(
            axis < self.dim(),
            "axis {} out of range for {} independent variable(s)",
            axis,
            self.dim()
        );
        let mut out = JetExpr::zero(self.dim());
        for (m, c) in self.terms() {
            for (v, e) in m.factors() {
                // d/dx (v^e * rest) contributes e * v^(e-1) * v' * rest
                let lowered = m.without_one(v).expect("factor is present");
                let raised = JetVar::new(v.name.clone(), v.index.raised(axis));
                let term = lowered.mul(&Monomial::var(raised));
                out.add_term(term, c * Coeff::from_integer((*e).into()));
            }
        }
        out
    }

    /// Iterated total derivative `D_J`.
    pub fn total_derivative_multi(&self, j: &MultiIndex) -> JetExpr {
        assert_eq!(j.dim(), self.dim(), "multi-index dimension mismatch");
        let mut out = self.clone();
        for axis in 0..j.dim() {
            for _ in 0..j.get(axis) {
                out = out.total_derivative(axis);
            }
        }
        out
    }

    /// Integrand of the Fréchet derivative of the density in direction `dir`:
    /// `sum_J (d f / d v^(J)) * D_J(dir)`, before any integration by parts.
    pub fn frechet_apply(&self, v: &str, dir: &JetExpr) -> JetExpr {
        assert_eq!(dir.dim(), self.dim(), "independent-variable count mismatch");
        let mut out = JetExpr::zero(self.dim());
        for j in self.jet_indices_of(v) {
            let coeff = self.partial(&JetVar::new(v, j));
            out = &out + &(&coeff * &dir.total_derivative_multi(&j));
        }
        out
    }

    /// Variational derivative `delta f / delta v` via the Euler operator
    /// `sum_J (-D)_J d/dv^(J)`. Annihilates total divergences.
    pub fn euler_operator(&self, v: &str) -> JetExpr {
        let mut out = JetExpr::zero(self.dim());
        for j in self.jet_indices_of(v) {
            let term = self.partial(&JetVar::new(v, j)).total_derivative_multi(&j);
            if j.order() % 2 == 0 {
                out = &out + &term;
            } else {
                out = &out - &term;
            }
        }
        out
    }

    /// Higher Eulerian operator `E^J`:
    /// `sum_{K >= J} C(K, J) (-D)_{K \ J} d/dv^(K)`, with the multi-index
    /// binomial computed componentwise. `E^0` coincides with
    /// [`JetExpr::euler_operator`].
    pub fn higher_euler_operator(&self, v: &str, j: &MultiIndex) -> JetExpr {
        assert_eq!(j.dim(), self.dim(), "multi-index dimension mismatch");
        let mut out = JetExpr::zero(self.dim());
        for k in self.jet_indices_of(v) {
            if !k.contains(j) {
                continue;
            }
            let rest = k.minus(j);
            let binom = Coeff::from_integer(k.binomial(j));
            let term = self
                .partial(&JetVar::new(v, k))
                .total_derivative_multi(&rest)
                .scale(&binom);
            if rest.order() % 2 == 0 {
                out = &out + &term;
            } else {
                out = &out - &term;
            }
        }
        out
    }

    /// One-dimensional boundary flux: the expression `P` (linear in a fresh
    /// direction variable and its derivatives) such that
    ///
    /// `frechet_apply(f, v, w) = euler_operator(f, v) * w + D_x(P)`.
    ///
    /// The direction variable is named `w`, or `w1`, `w2`, ... if `w` already
    /// occurs. Requires one independent variable.
    pub fn boundary_flux_1d(&self, v: &str) -> JetExpr {
        let name = self.fresh_var_name("w", &[v]);
        self.boundary_flux_1d_in(v, &name)
    }

    /// [`JetExpr::boundary_flux_1d`] with an explicitly named direction
    /// variable; `dir` must not occur in the density.
    pub fn boundary_flux_1d_in(&self, v: &str, dir: &str) -> JetExpr {
        assert_eq!(self.dim(), 1, "boundary flux is defined for one independent variable");
        assert!(
            !self.dependent_vars().contains(dir) && dir != v,
            "direction variable {} must be fresh",
            dir
        );
        let w = JetExpr::var(dir, 1);
        // P(w) = sum_{j >= 1} D_x^{j-1} (E^j(f) * w)
        let max_j = self
            .jet_indices_of(v)
            .into_iter()
            .map(|j| j.order())
            .max()
            .unwrap_or(0);
        let mut out = JetExpr::zero(1);
        for j in 1..=max_j {
            let ej = self.higher_euler_operator(v, &MultiIndex::d1(j));
            let mut term = &ej * &w;
            for _ in 0..(j - 1) {
                term = term.total_derivative(0);
            }
            out = &out + &term;
        }
        out
    }

    /// Replace every occurrence of `v^(J)` by `D_J(replacement)`.
    ///
    /// Ring homomorphism; errors if the replacement itself involves `v`.
    pub fn substitute(&self, v: &str, replacement: &JetExpr) -> Result<JetExpr, JetError> {
        assert_eq!(
            replacement.dim(),
            self.dim(),
            "independent-variable count mismatch"
        );
        if replacement.dependent_vars().contains(v) {
            return Err(JetError::CyclicSubstitution { var: v.to_string() });
        }
        let mut derived: BTreeMap<MultiIndex, JetExpr> = BTreeMap::new();
        let mut out = JetExpr::zero(self.dim());
        for (m, c) in self.terms() {
            let mut acc = JetExpr::constant(self.dim(), c.clone());
            for (jv, e) in m.factors() {
                let factor = if jv.name == v {
                    let d = derived
                        .entry(jv.index)
                        .or_insert_with(|| replacement.total_derivative_multi(&jv.index));
                    d.pow(*e)
                } else {
                    JetExpr::jet(jv.clone()).pow(*e)
                };
                acc = &acc * &factor;
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// A variable name not occurring in the expression nor in `avoid`,
    /// derived from `base` by appending a counter when needed.
    pub fn fresh_var_name(&self, base: &str, avoid: &[&str]) -> String {
        let used = self.dependent_vars();
        let clashes = |n: &str| used.contains(n) || avoid.contains(&n);
        if !clashes(base) {
            return base.to_string();
        }
        for i in 1.. {
            let candidate = format!("{}{}", base, i);
            if !clashes(&candidate) {
                return candidate;
            }
        }
        unreachable!()
    }

    /// Numeric value of a constant expression, if it is one.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.num_terms() == 1 {
            let (m, c) = self.terms().next().expect("one term");
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcalc::expr::rat;

    fn u_j(j: u32) -> JetExpr {
        JetExpr::jet(JetVar::new("u", MultiIndex::d1(j)))
    }

    fn u() -> JetExpr {
        u_j(0)
    }

    fn w_j(j: u32) -> JetExpr {
        JetExpr::jet(JetVar::new("w", MultiIndex::d1(j)))
    }

    #[test]
    fn total_derivative_of_variable() {
        assert_eq!(u().total_derivative(0), u_j(1));
    }

    #[test]
    fn total_derivative_product_rule() {
        // D_x(u * u_x) = u_x^2 + u * u_xx
        let e = (&u() * &u_j(1)).total_derivative(0);
        let expected = &u_j(1).pow(2) + &(&u() * &u_j(2));
        assert_eq!(e, expected);
    }

    #[test]
    fn total_derivative_two_dims_commute() {
        // D_y(w * w_x) = w_y * w_x + w * w_xy
        let w = JetExpr::var("w", 2);
        let wx = JetExpr::jet(JetVar::new("w", MultiIndex::d2(1, 0)));
        let wy = JetExpr::jet(JetVar::new("w", MultiIndex::d2(0, 1)));
        let wxy = JetExpr::jet(JetVar::new("w", MultiIndex::d2(1, 1)));
        let e = (&w * &wx).total_derivative(1);
        assert_eq!(e, &(&wy * &wx) + &(&w * &wxy));
        // commutation on a less trivial expression
        let f = &(&w * &w) * &wx;
        assert_eq!(
            f.total_derivative(0).total_derivative(1),
            f.total_derivative(1).total_derivative(0)
        );
    }

    #[test]
    #[should_panic(expected = "axis 1 out of range")]
    fn total_derivative_axis_out_of_range() {
        let _ = u().total_derivative(1);
    }

    #[test]
    fn frechet_apply_examples() {
        // f = 1/6 u^3 - 1/2 u_x^2, dir w: 1/2 u^2 w - u_x w_x
        let f = &u().pow(3).scale(&rat(1, 6)) - &u_j(1).pow(2).scale(&rat(1, 2));
        let got = f.frechet_apply("u", &w_j(0));
        let expected = &(&u().pow(2).scale(&rat(1, 2)) * &w_j(0)) - &(&u_j(1) * &w_j(1));
        assert_eq!(got, expected);

        // f = 1/2 m^2 -> m*w
        let m = JetExpr::var("m", 1);
        let f2 = m.pow(2).scale(&rat(1, 2));
        assert_eq!(f2.frechet_apply("m", &w_j(0)), &m * &w_j(0));

        // f = u*u_x -> u_x w + u w_x
        let f3 = &u() * &u_j(1);
        let expected3 = &(&u_j(1) * &w_j(0)) + &(&u() * &w_j(1));
        assert_eq!(f3.frechet_apply("u", &w_j(0)), expected3);
    }

    #[test]
    fn euler_operator_examples() {
        // f = 1/2 u^2 -> u
        assert_eq!(u().pow(2).scale(&rat(1, 2)).euler_operator("u"), u());
        // f = -1/2 u_x^2 + 1/6 u^3 -> u_xx + 1/2 u^2
        let f = &u().pow(3).scale(&rat(1, 6)) - &u_j(1).pow(2).scale(&rat(1, 2));
        let expected = &u_j(2) + &u().pow(2).scale(&rat(1, 2));
        assert_eq!(f.euler_operator("u"), expected);
        // exact derivative killed
        assert_eq!((&u() * &u_j(1)).euler_operator("u"), JetExpr::zero(1));
    }

    #[test]
    fn higher_euler_examples() {
        // f = u*u_x: E^(1) = u, E^(0) = 0
        let f = &u() * &u_j(1);
        assert_eq!(f.higher_euler_operator("u", &MultiIndex::d1(1)), u());
        assert_eq!(
            f.higher_euler_operator("u", &MultiIndex::d1(0)),
            JetExpr::zero(1)
        );
        // f = 1/2 u_x^2: E^(1) = u_x, E^(2) = 0
        let g = u_j(1).pow(2).scale(&rat(1, 2));
        assert_eq!(g.higher_euler_operator("u", &MultiIndex::d1(1)), u_j(1));
        assert_eq!(
            g.higher_euler_operator("u", &MultiIndex::d1(2)),
            JetExpr::zero(1)
        );
        // |J| beyond the maximal derivative order gives the empty sum
        assert_eq!(
            f.higher_euler_operator("u", &MultiIndex::d1(5)),
            JetExpr::zero(1)
        );
    }

    #[test]
    fn higher_euler_zero_index_matches_euler() {
        let f = &(&u().pow(2) * &u_j(2)) + &u_j(1).pow(3);
        assert_eq!(
            f.higher_euler_operator("u", &MultiIndex::d1(0)),
            f.euler_operator("u")
        );
    }

    #[test]
    fn boundary_flux_examples() {
        // f = -1/2 u_x^2 + 1/6 u^3 -> P = -u_x * w
        let f = &u().pow(3).scale(&rat(1, 6)) - &u_j(1).pow(2).scale(&rat(1, 2));
        assert_eq!(f.boundary_flux_1d("u"), -(&u_j(1) * &w_j(0)));
        // f = u*u_x -> P = u*w, Euler part vanishes
        let g = &u() * &u_j(1);
        assert_eq!(g.boundary_flux_1d("u"), &u() * &w_j(0));
        assert!(g.euler_operator("u").is_zero());
        // f = 1/2 u_xx^2 -> P = u_xx w_x - u_xxx w
        let h = u_j(2).pow(2).scale(&rat(1, 2));
        let expected = &(&u_j(2) * &w_j(1)) - &(&u_j(3) * &w_j(0));
        assert_eq!(h.boundary_flux_1d("u"), expected);
    }

    #[test]
    fn boundary_flux_witness_identity() {
        for f in [
            u_j(2).pow(2).scale(&rat(1, 2)),
            &(&u().pow(2) * &u_j(1)) + &u_j(1).pow(2),
            &u().pow(3) + &(&u_j(1) * &u_j(2)),
        ] {
            let flux = f.boundary_flux_1d_in("u", "w");
            let lhs = f.frechet_apply("u", &w_j(0));
            let rhs = &(&f.euler_operator("u") * &w_j(0)) + &flux.total_derivative(0);
            assert_eq!(lhs, rhs, "failed for f = {}", f);
        }
    }

    #[test]
    fn substitute_examples() {
        // m_x with m -> u - u_xx gives u_x - u_xxx
        let m_x = JetExpr::jet(JetVar::new("m", MultiIndex::d1(1)));
        let repl = &u() - &u_j(2);
        assert_eq!(
            m_x.substitute("m", &repl).unwrap(),
            &u_j(1) - &u_j(3)
        );
        // identity-style substitution
        let m = JetExpr::var("m", 1);
        assert_eq!(m.pow(2).substitute("m", &u()).unwrap(), u().pow(2));
    }

    #[test]
    fn substitute_camassa_holm_momentum() {
        // 2 m u_x + m_x u with m -> u - u_xx equals 3 u u_x - 2 u_x u_xx - u u_xxx
        let m = JetExpr::var("m", 1);
        let m_x = JetExpr::jet(JetVar::new("m", MultiIndex::d1(1)));
        let e = &(&m * &u_j(1)).scale(&rat(2, 1)) + &(&m_x * &u());
        let repl = &u() - &u_j(2);
        let got = e.substitute("m", &repl).unwrap();
        let expected = &(&(&u() * &u_j(1)).scale(&rat(3, 1))
            - &(&u_j(1) * &u_j(2)).scale(&rat(2, 1)))
            - &(&u() * &u_j(3));
        assert_eq!(got, expected);
    }

    #[test]
    fn substitute_cyclic_is_rejected() {
        let m = JetExpr::var("m", 1);
        let bad = &m + &JetExpr::one(1);
        assert!(m.substitute("m", &bad).is_err());
    }

    #[test]
    fn fresh_name_avoids_clashes() {
        let e = &JetExpr::var("w", 1) * &JetExpr::var("w1", 1);
        assert_eq!(e.fresh_var_name("w", &[]), "w2");
        assert_eq!(e.fresh_var_name("theta", &[]), "theta");
    }
}
