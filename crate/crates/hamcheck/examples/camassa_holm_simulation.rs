//! Integrates Camassa-Holm in the momentum variable m with the velocity
//! recovered by Helmholtz inversion each evaluation, and monitors the
//! Hamiltonian together with the Casimir int(sqrt m).
//!
//! ```bash
//! cargo run --release --example camassa_holm_simulation
//! ```

use hamcheck::spectral::{
    default_initial, simulate, Equation, MonitorSeries, SimulationConfig,
};

fn main() {
    let n = 256;
    let cfg = SimulationConfig::new(Equation::CamassaHolm, 1e-4, 1.0);
    let m0 = default_initial(Equation::CamassaHolm, n).unwrap();
    println!(
        "Camassa-Holm, N = {}, dt = {}, T = {}, m0 = 1 + 0.3 cos x",
        n, cfg.dt, cfg.t_final
    );

    let out = simulate(&cfg, m0).unwrap();
    let mon = &out.monitors;
    println!(
        "H = 1/2 int(m u)  drift: {:.3e}",
        MonitorSeries::relative_drift(&mon.hamiltonian)
    );
    println!(
        "int(u)            drift: {:.3e}",
        MonitorSeries::relative_drift(&mon.i1)
    );
    match &mon.sqrt_casimir {
        Some(series) => println!(
            "int(sqrt m)       drift: {:.3e}   (kernel of the Lie-Poisson operator)",
            MonitorSeries::relative_drift(series)
        ),
        None => println!("int(sqrt m) suppressed: momentum is not positive"),
    }

    let final_state = &out.snapshots.last().unwrap().values;
    let max = final_state.iter().cloned().fold(f64::MIN, f64::max);
    let min = final_state.iter().cloned().fold(f64::MAX, f64::min);
    println!("final momentum range: [{:.6}, {:.6}]", min, max);
}
