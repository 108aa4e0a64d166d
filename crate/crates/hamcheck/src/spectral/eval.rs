//! Grid evaluation of differential polynomials: the bridge between the
//! symbolic layer and the collocation grid, used to cross-check derived
//! right-hand sides and divergence claims by quadrature.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::grid::GridState;
use crate::error::SpectralError;
use crate::jetcalc::JetExpr;

/// Evaluates a one-dimensional density pointwise on the grid, with every jet
/// variable `v^(j)` realized as the j-th spectral derivative of the bound
/// grid function for `v`.
pub fn eval_density(
    expr: &JetExpr,
    bindings: &[(&str, &GridState)],
) -> Result<Vec<f64>, SpectralError> {
    if expr.dim() != 1 {
        return Err(SpectralError::UnsupportedDimension { dim: expr.dim() });
    }
    let n = match bindings.first() {
        Some((_, g)) => g.n(),
        None => 16,
    };
    // cache of spectral derivatives per (variable, order)
    let mut jets: BTreeMap<(String, u32), Vec<f64>> = BTreeMap::new();
    let mut jet_values =
        |name: &str, order: u32| -> Result<Vec<f64>, SpectralError> {
            if let Some(v) = jets.get(&(name.to_string(), order)) {
                return Ok(v.clone());
            }
            let grid = bindings
                .iter()
                .find(|(b, _)| *b == name)
                .map(|(_, g)| *g)
                .ok_or_else(|| SpectralError::MissingBinding {
                    name: name.to_string(),
                })?;
            let values = if order == 0 {
                grid.values().to_vec()
            } else {
                grid.spectral_derivative(order).values().to_vec()
            };
            jets.insert((name.to_string(), order), values.clone());
            Ok(values)
        };

    let mut out = vec![0.0; n];
    for (monomial, coeff) in expr.terms() {
        let c = coeff.to_f64().expect("coefficient fits in f64");
        let mut term = vec![c; n];
        for (var, exp) in monomial.factors() {
            let vals = jet_values(&var.name, var.index.order())?;
            for (t, v) in term.iter_mut().zip(vals.iter()) {
                *t *= v.powi(*exp as i32);
            }
        }
        for (o, t) in out.iter_mut().zip(term.iter()) {
            *o += t;
        }
    }
    Ok(out)
}

/// Trapezoid quadrature of a density over the periodic grid.
pub fn quadrature(expr: &JetExpr, bindings: &[(&str, &GridState)]) -> Result<f64, SpectralError> {
    let values = eval_density(expr, bindings)?;
    let n = values.len();
    Ok(values.iter().sum::<f64>() * 2.0 * std::f64::consts::PI / n as f64)
}

/// Quadrature of the absolute value of the density, used as the scale for
/// relative divergence tests.
pub fn quadrature_abs(
    expr: &JetExpr,
    bindings: &[(&str, &GridState)],
) -> Result<f64, SpectralError> {
    let values = eval_density(expr, bindings)?;
    let n = values.len();
    Ok(values.iter().map(|v| v.abs()).sum::<f64>() * 2.0 * std::f64::consts::PI / n as f64)
}

/// A smooth band-limited periodic grid function with the given low-mode
/// amplitudes: `offset + Σ_k (a_k cos kx + b_k sin kx)`.
pub fn trig_polynomial(
    n: usize,
    offset: f64,
    cos_amps: &[f64],
    sin_amps: &[f64],
) -> Result<GridState, SpectralError> {
    GridState::from_fn(n, |x| {
        let mut acc = offset;
        for (k, a) in cos_amps.iter().enumerate() {
            acc += a * ((k + 1) as f64 * x).cos();
        }
        for (k, b) in sin_amps.iter().enumerate() {
            acc += b * ((k + 1) as f64 * x).sin();
        }
        acc
    })
}
