//! Casimir functionals: conserved by every Hamiltonian flow of the bracket.
//! Checks the translation charge of the Gardner bracket, a non-example for
//! the Lie-Poisson operator, and the enstrophy family of the 2D vorticity
//! bracket.
//!
//! ```bash
//! cargo run --example casimirs
//! ```

use hamcheck::bracket::{lie_poisson_operator, vorticity_operator};
use hamcheck::{BracketStructure, Domain, JetExpr, LinDiffOp, LocalFunctional};

fn report(bracket: &BracketStructure, c: &LocalFunctional) {
    let r = bracket.casimir_check(c);
    println!(
        "{:18} {:24} {}",
        format!("P = {}", bracket.operator()),
        format!("C = {}", c),
        if r.is_casimir {
            "Casimir".to_string()
        } else {
            format!("not a Casimir, P dC = {}", r.residual)
        }
    );
}

fn main() {
    let gardner = BracketStructure::new(LinDiffOp::derivative(1, 0), "u", Domain::Circle).unwrap();
    report(&gardner, &LocalFunctional::on_circle(JetExpr::var("u", 1)));

    let lp = BracketStructure::new(lie_poisson_operator("m"), "m", Domain::Circle).unwrap();
    report(&lp, &LocalFunctional::on_circle(JetExpr::var("m", 1)));

    let arnold =
        BracketStructure::new(vorticity_operator("omega"), "omega", Domain::Torus).unwrap();
    let omega = JetExpr::var("omega", 2);
    for k in 1..=5 {
        report(&arnold, &LocalFunctional::on_torus(omega.pow(k)));
    }
}
