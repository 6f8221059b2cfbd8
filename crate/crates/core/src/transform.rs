//! Forward/inverse Fourier transforms in the unnormalized-forward convention
//! `f_hat(xi) = integral f(x) e^{-i x xi} dx`, discretized as `dx`-scaled DFT.
//!
//! With samples on `x_m = -L + m dx` and `xi_k = pi k / L`, the continuous
//! coefficient relates to the raw DFT by `f_hat(xi_k) = dx (-1)^k FFT[f]_k`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::ModelError;
use crate::field::{InterfaceState, SpectrumField};
use crate::grid::SpectralGrid;

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(len: usize) -> PlanPair {
    static CACHE: OnceLock<Mutex<HashMap<usize, PlanPair>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(len)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (
                planner.plan_fft_forward(len),
                planner.plan_fft_inverse(len),
            )
        })
        .clone()
}

fn fft(buf: &mut [Complex64]) {
    plans(buf.len()).0.process(buf);
}

fn ifft(buf: &mut [Complex64]) {
    plans(buf.len()).1.process(buf);
}

/// Forward transform of one row of real samples.
pub fn forward_row(grid: &SpectralGrid, samples: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut buf);
    let dx = grid.dx();
    for (k, c) in buf.iter_mut().enumerate() {
        let sign = if k % 2 == 0 { dx } else { -dx };
        *c *= sign;
    }
    buf
}

/// Inverse of [`forward_row`]; returns the real part (imaginary residue is
/// roundoff for Hermitian input).
pub fn inverse_row(grid: &SpectralGrid, coeffs: &[Complex64]) -> Vec<f64> {
    let n = grid.num_points() as f64;
    let mut buf: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c } else { -c })
        .collect();
    ifft(&mut buf);
    let scale = 1.0 / (n * grid.dx());
    buf.into_iter().map(|c| c.re * scale).collect()
}

/// Forward transform of a full state. Errors on non-finite samples.
pub fn forward(state: &InterfaceState) -> Result<SpectrumField, ModelError> {
    state.check_finite()?;
    let grid = *state.grid();
    let rows = state
        .rows()
        .iter()
        .map(|r| forward_row(&grid, r))
        .collect();
    Ok(SpectrumField::from_rows(grid, rows))
}

/// Inverse transform of a full spectrum, stamped with time `t`.
pub fn inverse(field: &SpectrumField, t: f64) -> InterfaceState {
    let grid = *field.grid();
    let rows = field
        .rows()
        .iter()
        .map(|r| inverse_row(&grid, r))
        .collect();
    InterfaceState::from_rows_unchecked(grid, t, rows)
}

/// Spectrum of the x-derivative: multiply by `i xi`, zeroing the Nyquist mode.
pub fn derivative_hat(grid: &SpectralGrid, coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = grid.num_points();
    let mut out: Vec<Complex64> = (0..n)
        .map(|m| Complex64::new(0.0, grid.xi(m)) * coeffs[m])
        .collect();
    out[n / 2] = Complex64::new(0.0, 0.0);
    out
}

/// Band-limited upsampling of real samples to `factor * N` points via
/// zero-padded spectrum. Exact on the original nodes.
pub fn upsample_row(grid: &SpectralGrid, samples: &[f64], factor: usize) -> Vec<f64> {
    debug_assert!(factor >= 1);
    let n = grid.num_points();
    if factor == 1 {
        return samples.to_vec();
    }
    let nf = factor * n;
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut buf);
    let mut padded = vec![Complex64::new(0.0, 0.0); nf];
    let half = n / 2;
    padded[..half].copy_from_slice(&buf[..half]);
    padded[nf - half + 1..].copy_from_slice(&buf[half + 1..]);
    // split the Nyquist bin so the interpolant stays real
    padded[half] = 0.5 * buf[half];
    padded[nf - half] = 0.5 * buf[half];
    ifft(&mut padded);
    let scale = 1.0 / n as f64;
    padded.into_iter().map(|c| c.re * scale).collect()
}

/// Zero all modes with |m| above `2/3` of the Nyquist index (the classical
/// dealiasing rule), in place on math-normalized coefficients.
pub fn dealias_row(grid: &SpectralGrid, coeffs: &mut [Complex64]) {
    let n = grid.num_points();
    let cut = n / 3;
    for m in 0..n {
        let abs_m = grid.fold(m);
        if abs_m > cut {
            coeffs[m] = Complex64::new(0.0, 0.0);
        }
    }
}
