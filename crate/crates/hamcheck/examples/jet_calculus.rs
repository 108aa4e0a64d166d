//! Tour of the symbolic layer: total derivatives, Fréchet and variational
//! derivatives, higher Eulerian operators, boundary fluxes and substitution.
//!
//! ```bash
//! cargo run --example jet_calculus
//! ```

use hamcheck::{equal_mod_div, rat, JetExpr, JetVar, MultiIndex};

fn main() {
    let u = JetExpr::var("u", 1);
    let u_x = JetExpr::jet(JetVar::new("u", MultiIndex::d1(1)));
    let u_xx = JetExpr::jet(JetVar::new("u", MultiIndex::d1(2)));

    // total derivative: product and chain rule on jet variables
    let f = &u * &u_x;
    println!("f        = {}", f);
    println!("D_x f    = {}", f.total_derivative(0));

    // the KdV Hamiltonian density and its variational derivative
    let h = &u.pow(3).scale(&rat(1, 6)) - &u_x.pow(2).scale(&rat(1, 2));
    println!("\nh        = {}", h);
    println!("dh/du    = {} (Euler operator)", h.euler_operator("u"));

    // the Fréchet derivative keeps the boundary information that the Euler
    // operator integrates away; the flux witnesses the difference
    let w = JetExpr::var("w", 1);
    let frechet = h.frechet_apply("u", &w);
    let flux = h.boundary_flux_1d("u");
    println!("Frechet  = {}", frechet);
    println!("flux P   = {} with Frechet = Euler*w + D_x P", flux);
    let recombined = &(&h.euler_operator("u") * &w) + &flux.total_derivative(0);
    assert_eq!(frechet, recombined);

    // higher Eulerian operators interpolate between the two
    for j in 0..=2 {
        let e = h.higher_euler_operator("u", &MultiIndex::d1(j));
        println!("E^({})    = {}", j, e);
    }

    // total divergences are decided exactly
    let div = &(&u * &u_xx) + &u_x.pow(2);
    println!("\n{} is a divergence: {}", div, equal_mod_div(&div, &JetExpr::zero(1)));

    // eliminating the momentum variable of Camassa-Holm
    let m = JetExpr::var("m", 1);
    let m_x = JetExpr::jet(JetVar::new("m", MultiIndex::d1(1)));
    let e = &(&m * &u_x).scale(&rat(2, 1)) + &(&m_x * &u);
    let substituted = e.substitute("m", &(&u - &u_xx)).unwrap();
    println!("\n2*m*u_x + m_x*u with m -> u - u_xx:");
    println!("         = {}", substituted);
}
