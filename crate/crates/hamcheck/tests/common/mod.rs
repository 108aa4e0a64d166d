//! Shared generators for the randomized suites: seeded expressions,
//! operators and band-limited grid functions.

#![allow(dead_code)]

use hamcheck::spectral::{trig_polynomial, GridState};
use hamcheck::{rat, Coeff, JetExpr, JetVar, LinDiffOp, MultiIndex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coeff(rng: &mut ChaCha8Rng) -> Coeff {
    let mut n = 0i64;
    while n == 0 {
        n = rng.gen_range(-9..=9);
    }
    rat(n, rng.gen_range(1..=4))
}

pub fn random_index(rng: &mut ChaCha8Rng, dim: usize, max_order: u32) -> MultiIndex {
    let total = rng.gen_range(0..=max_order);
    if dim == 1 {
        MultiIndex::d1(total)
    } else {
        let jx = rng.gen_range(0..=total);
        MultiIndex::d2(jx, total - jx)
    }
}

/// A random differential polynomial over the given variable names.
pub fn random_expr(
    rng: &mut ChaCha8Rng,
    dim: usize,
    vars: &[&str],
    max_order: u32,
    max_terms: usize,
) -> JetExpr {
    let mut acc = JetExpr::zero(dim);
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let mut term = JetExpr::constant(dim, random_coeff(rng));
        let factors = rng.gen_range(1..=3);
        for _ in 0..factors {
            let var = vars[rng.gen_range(0..vars.len())];
            let v = JetVar::new(var, random_index(rng, dim, max_order));
            let exp = rng.gen_range(1..=2);
            term = &term * &JetExpr::jet(v).pow(exp);
        }
        acc = &acc + &term;
    }
    acc
}

/// A random operator of order at most `max_order` with polynomial
/// coefficients in `vars`.
pub fn random_op(
    rng: &mut ChaCha8Rng,
    dim: usize,
    vars: &[&str],
    max_order: u32,
) -> LinDiffOp {
    let mut acc = LinDiffOp::zero(dim);
    for _ in 0..rng.gen_range(1..=3) {
        let j = random_index(rng, dim, max_order);
        let coeff = random_expr(rng, dim, vars, 2, 2);
        acc = &acc + &LinDiffOp::monomial(j, coeff);
    }
    acc
}

/// A smooth band-limited periodic grid function with modes up to `modes` and
/// O(1) amplitudes.
pub fn random_grid(rng: &mut ChaCha8Rng, n: usize, modes: usize, offset: f64) -> GridState {
    let cos_amps: Vec<f64> = (0..modes)
        .map(|k| rng.gen_range(-1.0..1.0) / (1.0 + k as f64))
        .collect();
    let sin_amps: Vec<f64> = (0..modes)
        .map(|k| rng.gen_range(-1.0..1.0) / (1.0 + k as f64))
        .collect();
    trig_polynomial(n, offset, &cos_amps, &sin_amps).expect("valid grid")
}
