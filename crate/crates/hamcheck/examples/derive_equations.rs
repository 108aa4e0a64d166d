//! Derives the three evolution equations from their bracket presentations:
//! KdV from the Gardner bracket, inviscid Burgers and Camassa-Holm from the
//! Lie-Poisson bracket on the circle.
//!
//! ```bash
//! cargo run --example derive_equations
//! ```

use hamcheck::bracket::lie_poisson_operator;
use hamcheck::{rat, BracketStructure, Domain, JetExpr, JetVar, LinDiffOp, MultiIndex};

fn u_j(j: u32) -> JetExpr {
    JetExpr::jet(JetVar::new("u", MultiIndex::d1(j)))
}

fn main() {
    // KdV: P = D_x, H = int(-1/2 u_x^2 + 1/6 u^3)
    let gardner = BracketStructure::new(LinDiffOp::derivative(1, 0), "u", Domain::Circle).unwrap();
    let h = &u_j(0).pow(3).scale(&rat(1, 6)) - &u_j(1).pow(2).scale(&rat(1, 2));
    let rhs = gardner.derive_evolution(&h.euler_operator("u"), &[]).unwrap();
    println!("KdV:          u_t = {}", rhs);

    // Burgers: P = -(2mD + m_x), H = 1/2 int m^2, trivial inertia m = u
    let lp = BracketStructure::new(lie_poisson_operator("m"), "m", Domain::Circle).unwrap();
    let m = JetExpr::var("m", 1);
    let grad = m.pow(2).scale(&rat(1, 2)).euler_operator("m");
    let rhs = lp
        .derive_evolution(&grad, &[("m".to_string(), u_j(0))])
        .unwrap();
    println!("Burgers:      u_t = {}", rhs);

    // Camassa-Holm: H = 1/2 int m*u is nonlocal in m, so its gradient u is
    // supplied directly; afterwards the momentum is eliminated by m = u - u_xx
    let rhs_m = lp.derive_evolution(&u_j(0), &[]).unwrap();
    println!("Camassa-Holm: m_t = {}   (m = u - u_xx)", rhs_m);
    let rhs_u = lp
        .derive_evolution(&u_j(0), &[("m".to_string(), &u_j(0) - &u_j(2))])
        .unwrap();
    println!("              u_t - u_txx = {}", rhs_u);
}
