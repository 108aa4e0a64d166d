//! Randomized exact-identity suites over the symbolic layer. Every check is
//! an equality of canonical forms in rational arithmetic; a single
//! counterexample is a hard failure.

mod common;

use common::{random_expr, random_op, rng};
use hamcheck::{equal_mod_div, JetExpr, JetVar, LinDiffOp, MultiIndex};

const CASES: usize = 200;

#[test]
fn ring_laws_hold_exactly() {
    let mut r = rng(101);
    for _ in 0..CASES {
        let a = random_expr(&mut r, 1, &["u", "v"], 3, 3);
        let b = random_expr(&mut r, 1, &["u", "v"], 3, 3);
        let c = random_expr(&mut r, 1, &["u", "v"], 3, 3);
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a * &b, &b * &a);
        assert_eq!(&a - &a, JetExpr::zero(1));
    }
}

#[test]
fn total_derivative_is_a_derivation() {
    let mut r = rng(102);
    for _ in 0..CASES {
        let a = random_expr(&mut r, 1, &["u", "v"], 3, 3);
        let b = random_expr(&mut r, 1, &["u", "v"], 3, 3);
        let lhs = (&a * &b).total_derivative(0);
        let rhs = &(&a.total_derivative(0) * &b) + &(&a * &b.total_derivative(0));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn total_derivatives_commute_in_two_dims() {
    let mut r = rng(103);
    for _ in 0..CASES {
        let a = random_expr(&mut r, 2, &["w", "p"], 2, 3);
        assert_eq!(
            a.total_derivative(0).total_derivative(1),
            a.total_derivative(1).total_derivative(0)
        );
    }
}

#[test]
fn euler_annihilates_total_derivatives() {
    let mut r = rng(104);
    for case in 0..CASES {
        let dim = if case % 3 == 0 { 2 } else { 1 };
        let vars: &[&str] = if dim == 1 { &["u", "v"] } else { &["w", "p"] };
        let e = random_expr(&mut r, dim, vars, 3, 3);
        for axis in 0..dim {
            let d = e.total_derivative(axis);
            for v in d.dependent_vars() {
                assert!(
                    d.euler_operator(&v).is_zero(),
                    "E_{} (D_{} {}) != 0",
                    v,
                    axis,
                    e
                );
            }
        }
    }
}

#[test]
fn integration_by_parts_identity() {
    let mut r = rng(105);
    for _ in 0..CASES {
        let f = random_expr(&mut r, 1, &["u"], 3, 3);
        let w = JetExpr::var("w", 1);
        let frechet = f.frechet_apply("u", &w);
        let euler_part = &f.euler_operator("u") * &w;
        assert!(
            equal_mod_div(&frechet, &euler_part),
            "IBP failed for f = {}",
            f
        );
    }
}

#[test]
fn higher_euler_reconstruction() {
    // sum_J D_J (E^J(f) * w) recovers the Frechet integrand exactly
    let mut r = rng(106);
    for _ in 0..CASES {
        let f = random_expr(&mut r, 1, &["u"], 3, 3);
        let w = JetExpr::var("w", 1);
        let max_j = 1 + f.max_derivative_order();
        let mut reconstruction = JetExpr::zero(1);
        for j in 0..=max_j {
            let idx = MultiIndex::d1(j);
            let term = &f.higher_euler_operator("u", &idx) * &w;
            reconstruction = &reconstruction + &term.total_derivative_multi(&idx);
        }
        assert_eq!(
            reconstruction,
            f.frechet_apply("u", &w),
            "reconstruction failed for f = {}",
            f
        );
    }
}

#[test]
fn boundary_flux_witness_identity_random() {
    let mut r = rng(107);
    for _ in 0..CASES {
        let f = random_expr(&mut r, 1, &["u"], 3, 3);
        let w = JetExpr::var("w", 1);
        let flux = f.boundary_flux_1d("u");
        let lhs = f.frechet_apply("u", &w);
        let rhs = &(&f.euler_operator("u") * &w) + &flux.total_derivative(0);
        assert_eq!(lhs, rhs, "flux identity failed for f = {}", f);
    }
}

#[test]
fn adjoint_involution_and_product_reversal() {
    let mut r = rng(108);
    for _ in 0..CASES {
        let p = random_op(&mut r, 1, &["m"], 3);
        let q = random_op(&mut r, 1, &["m"], 2);
        assert_eq!(p.adjoint().adjoint(), p, "involution failed for {}", p);
        assert_eq!(
            p.compose(&q).adjoint(),
            q.adjoint().compose(&p.adjoint()),
            "product reversal failed for {} and {}",
            p,
            q
        );
    }
}

#[test]
fn adjoint_satisfies_pairing_identity() {
    // int a P(b) = int P*(a) b modulo divergence, with fresh auxiliaries
    let mut r = rng(109);
    for _ in 0..CASES {
        let p = random_op(&mut r, 1, &["m"], 3);
        let a = JetExpr::var("a", 1);
        let b = JetExpr::var("b", 1);
        let lhs = &a * &p.apply(&b);
        let rhs = &p.adjoint().apply(&a) * &b;
        assert!(equal_mod_div(&lhs, &rhs), "pairing failed for {}", p);
    }
}

#[test]
fn skew_operators_have_isotropic_diagonal() {
    let mut r = rng(110);
    let mut tested = 0;
    while tested < CASES {
        let q = random_op(&mut r, 1, &["m"], 2);
        let p = &q - &q.adjoint(); // skew by construction
        if p.is_zero() {
            continue;
        }
        assert!(p.is_skew());
        let a = JetExpr::var("a", 1);
        assert!(
            equal_mod_div(&(&a * &p.apply(&a)), &JetExpr::zero(1)),
            "diagonal failed for {}",
            p
        );
        tested += 1;
    }
}

#[test]
fn op_frechet_is_linear_and_kills_constant_coefficients() {
    let mut r = rng(111);
    for _ in 0..CASES {
        let p = random_op(&mut r, 1, &["m"], 3);
        let d1 = random_expr(&mut r, 1, &["m", "th"], 2, 2);
        let d2 = random_expr(&mut r, 1, &["m", "th"], 2, 2);
        let lhs = p.op_frechet("m", &(&d1 + &d2));
        let rhs = &p.op_frechet("m", &d1) + &p.op_frechet("m", &d2);
        assert_eq!(lhs, rhs);

        let constant = &LinDiffOp::derivative(1, 0) + &LinDiffOp::identity(1).scale(&hamcheck::rat(3, 2));
        assert!(constant.op_frechet("m", &d1).is_zero());
    }
}

#[test]
fn bracket_antisymmetry_mod_div() {
    use hamcheck::bracket::lie_poisson_operator;
    use hamcheck::{BracketStructure, Domain, LocalFunctional};
    let mut r = rng(112);
    let bracket =
        BracketStructure::new(lie_poisson_operator("m"), "m", Domain::Circle).unwrap();
    for _ in 0..CASES {
        let f = LocalFunctional::on_circle(random_expr(&mut r, 1, &["m"], 2, 3));
        let g = LocalFunctional::on_circle(random_expr(&mut r, 1, &["m"], 2, 3));
        let fg = bracket.bracket_density(&f, &g);
        let gf = bracket.bracket_density(&g, &f);
        assert!(
            equal_mod_div(&(fg.density() + gf.density()), &JetExpr::zero(1)),
            "antisymmetry failed for f = {}, g = {}",
            f,
            g
        );
    }
}

#[test]
fn equal_mod_div_is_an_equivalence() {
    let mut r = rng(113);
    for _ in 0..60 {
        let a = random_expr(&mut r, 1, &["u"], 2, 2);
        // b and c differ from a by exact derivatives
        let b = &a + &random_expr(&mut r, 1, &["u"], 2, 2).total_derivative(0);
        let c = &b + &random_expr(&mut r, 1, &["u"], 2, 2).total_derivative(0);
        assert!(equal_mod_div(&a, &a));
        assert!(equal_mod_div(&a, &b) && equal_mod_div(&b, &a));
        assert!(
            equal_mod_div(&a, &b) && equal_mod_div(&b, &c) && equal_mod_div(&a, &c),
            "transitivity failed"
        );
    }
}

#[test]
fn substitution_is_a_ring_homomorphism() {
    let mut r = rng(114);
    let u = JetExpr::var("u", 1);
    let u_xx = JetExpr::jet(JetVar::new("u", MultiIndex::d1(2)));
    let repl = &u - &u_xx;
    for _ in 0..CASES {
        let a = random_expr(&mut r, 1, &["m", "u"], 2, 2);
        let b = random_expr(&mut r, 1, &["m", "u"], 2, 2);
        let sum = (&a + &b).substitute("m", &repl).unwrap();
        let prod = (&a * &b).substitute("m", &repl).unwrap();
        let sa = a.substitute("m", &repl).unwrap();
        let sb = b.substitute("m", &repl).unwrap();
        assert_eq!(sum, &sa + &sb);
        assert_eq!(prod, &sa * &sb);
        // substitution intertwines the total derivative
        assert_eq!(
            a.total_derivative(0).substitute("m", &repl).unwrap(),
            sa.total_derivative(0)
        );
    }
}
