//! Numeric validation layer: 1D periodic pseudo-spectral integration of the
//! derived equations, conservation monitors, and grid evaluation of symbolic
//! densities for cross-checking.

mod eval;
mod grid;
mod pde;

pub use eval::{eval_density, quadrature, quadrature_abs, trig_polynomial};
pub use grid::GridState;
pub use pde::{
    default_initial, hamiltonian, pde_rhs, simulate, step_rk4, velocity, Equation, MonitorSeries,
    SimulationConfig, SimulationOutput, Snapshot,
};
