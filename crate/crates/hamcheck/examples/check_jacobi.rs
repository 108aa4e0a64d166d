//! Verifies the Jacobi identity for four candidate Hamiltonian operators via
//! the cyclic trivector criterion: three valid structures and one
//! deliberately broken control.
//!
//! ```bash
//! cargo run --example check_jacobi
//! ```

use hamcheck::bracket::{lie_poisson_operator, vorticity_operator};
use hamcheck::{rat, BracketStructure, Domain, JetExpr, JetVar, LinDiffOp, MultiIndex};

fn verdict(name: &str, bracket: &BracketStructure) {
    let report = bracket.jacobi_check();
    println!(
        "{:46} {}",
        format!("{} (P = {})", name, bracket.operator()),
        if report.passes { "PASS" } else { "FAIL" }
    );
    if !report.passes {
        println!("    residual: {}", report.residual);
    }
}

fn main() {
    // constant coefficients: the operator has zero Fréchet derivative
    let gardner = BracketStructure::new(LinDiffOp::derivative(1, 0), "u", Domain::Circle).unwrap();
    verdict("Gardner bracket", &gardner);

    // the Lie-Poisson operator on the circle
    let lp = BracketStructure::new(lie_poisson_operator("m"), "m", Domain::Circle).unwrap();
    verdict("Lie-Poisson bracket", &lp);
    println!(
        "    D_(P theta)P = {}",
        lp.jacobi_check().frechet_along_p_theta
    );

    // the formal vorticity bracket of 2D ideal flow
    let arnold =
        BracketStructure::new(vorticity_operator("omega"), "omega", Domain::Torus).unwrap();
    verdict("vorticity bracket on the torus", &arnold);

    // mutated control: skew-symmetric, but the coefficients depend on m_x
    let m_x = JetExpr::jet(JetVar::new("m", MultiIndex::d1(1)));
    let m_xx = JetExpr::jet(JetVar::new("m", MultiIndex::d1(2)));
    let broken = &LinDiffOp::monomial(MultiIndex::d1(1), m_x.scale(&rat(2, 1)))
        + &LinDiffOp::mult(m_xx);
    let broken = BracketStructure::new(broken, "m", Domain::Circle).unwrap();
    verdict("mutated control", &broken);
}
