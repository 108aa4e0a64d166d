//! Uniform periodic grids on `[0, 2π)` with Fourier-collocation derivatives.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::SpectralError;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Signed wavenumber for bin `i` of an `n`-point transform.
pub(crate) fn wavenumber(i: usize, n: usize) -> f64 {
    if i <= n / 2 {
        i as f64
    } else {
        i as f64 - n as f64
    }
}

pub(crate) fn fft_forward(values: &[f64]) -> Vec<Complex<f64>> {
    let n = values.len();
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    plan(n, false).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

pub(crate) fn fft_inverse_real(mut spectrum: Vec<Complex<f64>>) -> Vec<f64> {
    let n = spectrum.len();
    plan(n, true).process(&mut spectrum);
    spectrum.into_iter().map(|c| c.re).collect()
}

/// `N` real samples of a `2π`-periodic function on the uniform grid
/// `x_j = 2π j / N`, plus a dealiasing preference for products.
///
/// `N` must be a power of two, at least 16; the spectral derivative of a pure
/// mode below the Nyquist frequency is then exact to roundoff.
#[derive(Clone, Debug)]
pub struct GridState {
    values: Vec<f64>,
    dealias: bool,
}

impl GridState {
    pub fn new(values: Vec<f64>) -> Result<Self, SpectralError> {
        let n = values.len();
        if n < 16 || !n.is_power_of_two() {
            return Err(SpectralError::BadGridSize { n });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        Ok(GridState {
            values,
            dealias: false,
        })
    }

    /// Samples `f` at the grid points of an `n`-point grid.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self, SpectralError> {
        let values = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        GridState::new(values)
    }

    pub fn zeros(n: usize) -> Result<Self, SpectralError> {
        GridState::new(vec![0.0; n])
    }

    pub fn with_dealiasing(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn dealias(&self) -> bool {
        self.dealias
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn same_flags(&self, values: Vec<f64>) -> GridState {
        GridState {
            values,
            dealias: self.dealias,
        }
    }

    /// Spectral derivative of the given order: transform, multiply by
    /// `(ik)^order`, transform back. The Nyquist mode is zeroed for odd
    /// orders to keep the result real-symmetric.
    pub fn spectral_derivative(&self, order: u32) -> GridState {
        assert!(order > 0, "derivative order must be positive");
        let n = self.n();
        let mut spec = fft_forward(&self.values);
        for (i, c) in spec.iter_mut().enumerate() {
            let k = wavenumber(i, n);
            if i == n / 2 && order % 2 == 1 {
                *c = Complex::new(0.0, 0.0);
            } else {
                *c *= Complex::new(0.0, k).powi(order as i32);
            }
        }
        self.same_flags(fft_inverse_real(spec))
    }

    /// Inverts the Helmholtz operator `A = 1 - d²/dx²` via the Fourier
    /// multiplier `1/(1+k²)`.
    pub fn helmholtz_solve(&self) -> GridState {
        let n = self.n();
        let mut spec = fft_forward(&self.values);
        for (i, c) in spec.iter_mut().enumerate() {
            let k = wavenumber(i, n);
            *c /= 1.0 + k * k;
        }
        self.same_flags(fft_inverse_real(spec))
    }

    /// Applies `A = 1 - d²/dx²`.
    pub fn helmholtz_apply(&self) -> GridState {
        let second = self.spectral_derivative(2);
        self.same_flags(
            self.values
                .iter()
                .zip(second.values.iter())
                .map(|(u, uxx)| u - uxx)
                .collect(),
        )
    }

    /// Trapezoid quadrature over the periodic grid, `(2π/N) Σ v_j`,
    /// spectrally accurate for smooth periodic data.
    pub fn integrate(&self) -> f64 {
        self.values.iter().sum::<f64>() * 2.0 * PI / self.n() as f64
    }

    /// Pointwise product; applies the 2/3-rule truncation when either factor
    /// requests dealiasing.
    pub fn mul(&self, other: &GridState) -> GridState {
        assert_eq!(self.n(), other.n(), "grid size mismatch");
        let dealias = self.dealias || other.dealias;
        let (a, b) = if dealias {
            (self.truncated_23(), other.truncated_23())
        } else {
            (self.clone(), other.clone())
        };
        let product: Vec<f64> = a
            .values
            .iter()
            .zip(b.values.iter())
            .map(|(x, y)| x * y)
            .collect();
        let mut out = GridState {
            values: product,
            dealias: self.dealias,
        };
        if dealias {
            out = out.truncated_23();
            out.dealias = self.dealias;
        }
        out
    }

    pub fn add(&self, other: &GridState) -> GridState {
        assert_eq!(self.n(), other.n(), "grid size mismatch");
        self.same_flags(
            self.values
                .iter()
                .zip(other.values.iter())
                .map(|(x, y)| x + y)
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> GridState {
        self.same_flags(self.values.iter().map(|v| v * c).collect())
    }

    pub fn axpy(&self, c: f64, other: &GridState) -> GridState {
        assert_eq!(self.n(), other.n(), "grid size mismatch");
        self.same_flags(
            self.values
                .iter()
                .zip(other.values.iter())
                .map(|(x, y)| x + c * y)
                .collect(),
        )
    }

    /// Zeroes all modes with `|k| > N/3`.
    pub fn truncated_23(&self) -> GridState {
        let n = self.n();
        let cutoff = n as f64 / 3.0;
        let mut spec = fft_forward(&self.values);
        for (i, c) in spec.iter_mut().enumerate() {
            if wavenumber(i, n).abs() > cutoff {
                *c = Complex::new(0.0, 0.0);
            }
        }
        self.same_flags(fft_inverse_real(spec))
    }

    pub fn max_abs_diff(&self, other: &GridState) -> f64 {
        assert_eq!(self.n(), other.n(), "grid size mismatch");
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridState::new(vec![0.0; 8]).is_err());
        assert!(GridState::new(vec![0.0; 48]).is_err());
        assert!(GridState::new(vec![0.0; 64]).is_ok());
        assert!(GridState::new(vec![f64::NAN; 16]).is_err());
    }

    #[test]
    fn derivative_of_sine() {
        let g = GridState::from_fn(64, f64::sin).unwrap();
        let d = g.spectral_derivative(1);
        let expected = GridState::from_fn(64, f64::cos).unwrap();
        assert!(d.max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn second_derivative_of_cos3x() {
        let g = GridState::from_fn(64, |x| (3.0 * x).cos()).unwrap();
        let d = g.spectral_derivative(2);
        let expected = GridState::from_fn(64, |x| -9.0 * (3.0 * x).cos()).unwrap();
        assert!(d.max_abs_diff(&expected) <= 1e-11);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let g = GridState::from_fn(32, |_| 4.25).unwrap();
        for order in 1..=3 {
            assert!(g.spectral_derivative(order).max_abs() <= 1e-13);
        }
    }

    #[test]
    fn helmholtz_single_mode() {
        let g = GridState::from_fn(64, |x| (2.0 * x).cos()).unwrap();
        let s = g.helmholtz_solve();
        let expected = GridState::from_fn(64, |x| (2.0 * x).cos() / 5.0).unwrap();
        assert!(s.max_abs_diff(&expected) <= 1e-13);
        // constants are fixed points
        let c = GridState::from_fn(64, |_| 3.0).unwrap();
        assert!(c.helmholtz_solve().max_abs_diff(&c) <= 1e-13);
    }

    #[test]
    fn helmholtz_round_trip() {
        let g = GridState::from_fn(256, |x| {
            1.0 + 0.4 * (3.0 * x).cos() + 0.2 * (7.0 * x).sin() + 0.05 * (10.0 * x).cos()
        })
        .unwrap();
        let back = g.helmholtz_apply().helmholtz_solve();
        let rel = back.max_abs_diff(&g) / g.max_abs();
        assert!(rel <= 1e-12, "relative error {}", rel);
    }

    #[test]
    fn quadrature_of_mean() {
        let g = GridState::from_fn(128, |x| 2.0 + x.cos()).unwrap();
        assert!((g.integrate() - 4.0 * PI).abs() <= 1e-12);
    }

    #[test]
    fn dealiased_product_of_low_modes_is_exact() {
        let a = GridState::from_fn(256, |x| (3.0 * x).cos())
            .unwrap()
            .with_dealiasing(true);
        let b = GridState::from_fn(256, |x| (5.0 * x).sin()).unwrap();
        let p = a.mul(&b);
        let expected = GridState::from_fn(256, |x| (3.0 * x).cos() * (5.0 * x).sin()).unwrap();
        assert!(p.max_abs_diff(&expected) <= 1e-13);
        assert!(p.dealias());
    }
}
