//! Finite-dimensional reference system: the Lie-Poisson bracket on
//! `so(3)* ≅ R^3`, rigid-body Euler equations, and a Casimir/energy
//! conserving implicit-midpoint integrator.
//!
//! This module is deliberately independent of the jet-space machinery so it
//! can serve as a second route for the bracket axioms.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::FindimError;
use crate::jetcalc::Coeff;

/// Polynomial in the angular-momentum coordinates `m1, m2, m3` with exact
/// rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly3 {
    terms: BTreeMap<[u32; 3], Coeff>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Poly3 {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Coeff) -> Self {
        let mut p = Poly3::zero();
        p.add_term([0, 0, 0], c);
        p
    }

    /// Coordinate polynomial `m1`, `m2` or `m3` (`axis` in `0..3`).
    pub fn coordinate(axis: usize) -> Self {
        assert!(axis < 3);
        let mut exps = [0u32; 3];
        exps[axis] = 1;
        let mut p = Poly3::zero();
        p.add_term(exps, Coeff::from_integer(1.into()));
        p
    }

    pub fn monomial(exps: [u32; 3], c: Coeff) -> Self {
        let mut p = Poly3::zero();
        p.add_term(exps, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, exps: [u32; 3], c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Poly3 {
        let mut out = Poly3::zero();
        for (e, k) in &self.terms {
            out.add_term(*e, k * c);
        }
        out
    }

    /// Partial derivative with respect to `m_{axis+1}`.
    pub fn partial(&self, axis: usize) -> Poly3 {
        assert!(axis < 3);
        let mut out = Poly3::zero();
        for (e, c) in &self.terms {
            if e[axis] > 0 {
                let mut le = *e;
                le[axis] -= 1;
                out.add_term(le, c * Coeff::from_integer(e[axis].into()));
            }
        }
        out
    }

    pub fn eval_exact(&self, m: &[Coeff; 3]) -> Coeff {
        let mut acc = Coeff::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (axis, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term *= &m[axis];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval(&self, m: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut term = c.to_f64().expect("rational fits in f64");
            for (axis, &exp) in e.iter().enumerate() {
                term *= m[axis].powi(exp as i32);
            }
            acc += term;
        }
        acc
    }
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            if is_const || mag != Coeff::from_integer(1.into()) {
                write!(f, "{}", mag)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (axis, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "m{}", axis + 1)?;
                if exp > 1 {
                    write!(f, "^{}", exp)?;
                }
            }
        }
        Ok(())
    }
}

/// Lie-Poisson bracket on `so(3)*`: `{f,g}(m) = m · (grad f × grad g)`.
pub fn so3_bracket(f: &Poly3, g: &Poly3) -> Poly3 {
    let df = [f.partial(0), f.partial(1), f.partial(2)];
    let dg = [g.partial(0), g.partial(1), g.partial(2)];
    let mut out = Poly3::zero();
    for k in 0..3 {
        let i = (k + 1) % 3;
        let j = (k + 2) % 3;
        let cross_k = df[i].mul(&dg[j]).sub(&df[j].mul(&dg[i]));
        out = out.add(&Poly3::coordinate(k).mul(&cross_k));
    }
    out
}

/// Angular momentum in the body frame together with the principal moments of
/// inertia.
#[derive(Clone, Copy, Debug)]
pub struct RigidBodyState {
    pub m: [f64; 3],
    pub inertia: [f64; 3],
}

impl RigidBodyState {
    pub fn new(m: [f64; 3], inertia: [f64; 3]) -> Result<Self, FindimError> {
        if inertia.iter().any(|&i| i <= 0.0) {
            return Err(FindimError::NonPositiveInertia);
        }
        Ok(RigidBodyState { m, inertia })
    }

    /// `H = 1/2 sum m_k^2 / I_k`.
    pub fn energy(&self) -> f64 {
        0.5 * (0..3)
            .map(|k| self.m[k] * self.m[k] / self.inertia[k])
            .sum::<f64>()
    }

    /// Casimir `C = |m|^2`.
    pub fn casimir(&self) -> f64 {
        self.m.iter().map(|x| x * x).sum()
    }
}

/// Euler rigid-body equations `m_dot = m × ω`, `ω_k = m_k / I_k`; equivalently
/// `ω_dot_1 = (I2 - I3)/I1 ω2 ω3` and cyclic.
pub fn rigid_body_rhs(s: &RigidBodyState) -> [f64; 3] {
    let w = [
        s.m[0] / s.inertia[0],
        s.m[1] / s.inertia[1],
        s.m[2] / s.inertia[2],
    ];
    cross(s.m, w)
}

/// Exact-rational form of [`rigid_body_rhs`].
pub fn rigid_body_rhs_exact(m: &[Coeff; 3], inertia: &[Coeff; 3]) -> [Coeff; 3] {
    let w: [Coeff; 3] = std::array::from_fn(|k| &m[k] / &inertia[k]);
    [
        &m[1] * &w[2] - &m[2] * &w[1],
        &m[2] * &w[0] - &m[0] * &w[2],
        &m[0] * &w[1] - &m[1] * &w[0],
    ]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Trajectory of a rigid-body run with per-step invariant monitors.
#[derive(Clone, Debug)]
pub struct RigidBodyRun {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 3]>,
    pub energy: Vec<f64>,
    pub casimir: Vec<f64>,
}

impl RigidBodyRun {
    /// CSV monitor output with columns `t, m1, m2, m3, H, C`.
    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "t,m1,m2,m3,H,C")?;
        for i in 0..self.times.len() {
            let m = self.states[i];
            writeln!(
                out,
                "{:.10e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[i], m[0], m[1], m[2], self.energy[i], self.casimir[i]
            )?;
        }
        Ok(())
    }

    pub fn final_state(&self) -> [f64; 3] {
        *self
            .states
            .last()
            .expect("run has at least the initial state")
    }

    /// Largest relative deviation of a monitor column from its initial value.
    pub fn max_relative_drift(series: &[f64]) -> f64 {
        let base = series[0];
        let scale = if base.abs() > 0.0 { base.abs() } else { 1.0 };
        series
            .iter()
            .map(|v| (v - base).abs() / scale)
            .fold(0.0, f64::max)
    }
}

const MIDPOINT_TOL: f64 = 1e-13;

fn midpoint_step(s: &RigidBodyState, dt: f64, step: usize) -> Result<[f64; 3], FindimError> {
    // fixed-point iteration on m_{n+1} = m_n + dt * f((m_n + m_{n+1})/2)
    let f = |m: [f64; 3]| {
        rigid_body_rhs(&RigidBodyState {
            m,
            inertia: s.inertia,
        })
    };
    let m0 = s.m;
    let k0 = f(m0);
    let mut z: [f64; 3] = std::array::from_fn(|i| m0[i] + dt * k0[i]);
    let scale = m0.iter().map(|x| x.abs()).fold(1.0, f64::max);
    for _ in 0..100 {
        let mid: [f64; 3] = std::array::from_fn(|i| 0.5 * (m0[i] + z[i]));
        let k = f(mid);
        let next: [f64; 3] = std::array::from_fn(|i| m0[i] + dt * k[i]);
        let inc = (0..3).map(|i| (next[i] - z[i]).abs()).fold(0.0, f64::max);
        z = next;
        if inc < 1e-15 * scale {
            break;
        }
    }
    let mid: [f64; 3] = std::array::from_fn(|i| 0.5 * (m0[i] + z[i]));
    let k = f(mid);
    let residual = (0..3)
        .map(|i| (z[i] - m0[i] - dt * k[i]).abs())
        .fold(0.0, f64::max);
    if residual > MIDPOINT_TOL * scale {
        return Err(FindimError::NoConvergence { step, residual });
    }
    Ok(z)
}

/// Integrates the rigid body with the implicit midpoint rule, which conserves
/// both quadratic invariants (`H` and `|m|^2`) up to the inner-solve
/// tolerance. Monitors are recorded every step.
pub fn simulate_rigid_body(
    s: &RigidBodyState,
    dt: f64,
    t_final: f64,
) -> Result<RigidBodyRun, FindimError> {
    assert!(dt > 0.0 && t_final > 0.0, "dt and T must be positive");
    let steps = (t_final / dt).round() as usize;
    let mut run = RigidBodyRun {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
        casimir: Vec::with_capacity(steps + 1),
    };
    let mut state = *s;
    let record = |run: &mut RigidBodyRun, t: f64, st: &RigidBodyState| {
        run.times.push(t);
        run.states.push(st.m);
        run.energy.push(st.energy());
        run.casimir.push(st.casimir());
    };
    record(&mut run, 0.0, &state);
    for n in 0..steps {
        state.m = midpoint_step(&state, dt, n)?;
        record(&mut run, (n + 1) as f64 * dt, &state);
    }
    Ok(run)
}
