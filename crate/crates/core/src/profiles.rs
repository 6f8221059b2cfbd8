//! Initial interface profiles.
//!
//! Rows carry individual weights (default: alternating sign). A uniform state
//! `g_1 = ... = g_n` has no component along the slow eigendirections at low
//! wavenumber, so measuring the slow-branch decay needs row contrast.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::FluidConfig;
use crate::error::ModelError;
use crate::field::InterfaceState;
use crate::grid::SpectralGrid;
use crate::transform;

/// Shape of the initial perturbation.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// One cosine mode on one row, all other rows zero.
    SingleMode { row: usize, mode: usize, eps: f64 },
    /// Per-row Gaussian bumps `eps w_k exp(-(x - mu_k)^2 / sigma^2)` with
    /// centers staggered by `sigma / 2`.
    GaussianBumps { eps: f64, sigma: f64 },
    /// Band-limited power law `g_hat_k(xi) = eps w_k |xi|^{-beta}` on
    /// `band.0 <= |xi| <= band.1`, zero phase.
    SpectralPowerlaw { eps: f64, beta: f64, band: (f64, f64) },
    /// Seeded random band-limited field with Gaussian spectral envelope.
    RandomSmall { eps: f64, seed: u64, band: (f64, f64) },
}

/// Row weight assignment for multi-row profiles.
#[derive(Debug, Clone, PartialEq)]
pub enum RowWeights {
    /// `w_k = (-1)^k`.
    Alternating,
    /// Identical rows (orthogonal to the slow subspace at xi = 0).
    Uniform,
    /// Explicit per-row weights.
    Explicit(Vec<f64>),
}

impl RowWeights {
    fn resolve(&self, n: usize) -> Result<Vec<f64>, ModelError> {
        match self {
            RowWeights::Alternating => {
                Ok((0..n).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect())
            }
            RowWeights::Uniform => Ok(vec![1.0; n]),
            RowWeights::Explicit(w) => {
                if w.len() != n {
                    Err(ModelError::BadRowWeights {
                        got: w.len(),
                        expected: n,
                    })
                } else {
                    Ok(w.clone())
                }
            }
        }
    }
}

/// Build an initial state at `t = 0`.
pub fn initial_profile(
    kind: &ProfileKind,
    weights: &RowWeights,
    grid: SpectralGrid,
    cfg: &FluidConfig,
) -> Result<InterfaceState, ModelError> {
    let n = cfg.n();
    let w = weights.resolve(n)?;
    match *kind {
        ProfileKind::SingleMode { row, mode, eps } => {
            if row >= n {
                return Err(ModelError::RowOutOfRange { row, n });
            }
            let xi = grid.dxi() * mode as f64;
            if mode == 0 || xi > grid.nyquist() {
                return Err(ModelError::BandOutOfGrid {
                    lo: xi,
                    hi: xi,
                    nyquist: grid.nyquist(),
                });
            }
            let mut rows = vec![vec![0.0; grid.num_points()]; n];
            for m in 0..grid.num_points() {
                rows[row][m] = eps * (xi * grid.x(m)).cos();
            }
            InterfaceState::new(grid, 0.0, rows)
        }
        ProfileKind::GaussianBumps { eps, sigma } => {
            let rows = (0..n)
                .map(|k| {
                    let mu = sigma * 0.5 * k as f64;
                    (0..grid.num_points())
                        .map(|m| {
                            let u = (grid.x(m) - mu) / sigma;
                            eps * w[k] * (-u * u).exp()
                        })
                        .collect()
                })
                .collect();
            InterfaceState::new(grid, 0.0, rows)
        }
        ProfileKind::SpectralPowerlaw { eps, beta, band } => {
            if !(beta > 0.0 && beta < 0.5) {
                return Err(ModelError::BetaOutOfRange(beta));
            }
            let modes = band_modes(&grid, band)?;
            let amps: Vec<(usize, f64)> = modes
                .into_iter()
                .map(|m| (m, eps * (grid.dxi() * m as f64).powf(-beta)))
                .collect();
            Ok(from_mode_amplitudes(grid, &w, &amps))
        }
        ProfileKind::RandomSmall { eps, seed, band } => {
            let modes = band_modes(&grid, band)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let center = 0.5 * (band.0 + band.1);
            let width = (band.1 - band.0).max(grid.dxi());
            let amps: Vec<(usize, f64)> = modes
                .into_iter()
                .map(|m| {
                    let xi = grid.dxi() * m as f64;
                    let u = (xi - center) / width;
                    let envelope = (-2.0 * u * u).exp();
                    (m, eps * envelope * rng.gen_range(0.25..1.0))
                })
                .collect();
            Ok(from_mode_amplitudes(grid, &w, &amps))
        }
    }
}

fn band_modes(grid: &SpectralGrid, band: (f64, f64)) -> Result<Vec<usize>, ModelError> {
    if band.0 <= 0.0 || band.1 < band.0 || band.1 > grid.nyquist() {
        return Err(ModelError::BandOutOfGrid {
            lo: band.0,
            hi: band.1,
            nyquist: grid.nyquist(),
        });
    }
    let modes: Vec<usize> = (1..grid.num_points() / 2)
        .filter(|&m| {
            let xi = grid.dxi() * m as f64;
            xi >= band.0 && xi <= band.1
        })
        .collect();
    if modes.is_empty() {
        return Err(ModelError::BandOutOfGrid {
            lo: band.0,
            hi: band.1,
            nyquist: grid.nyquist(),
        });
    }
    Ok(modes)
}

/// Real even field with the given positive-mode amplitudes, weighted per row.
fn from_mode_amplitudes(
    grid: SpectralGrid,
    weights: &[f64],
    amps: &[(usize, f64)],
) -> InterfaceState {
    let n_pts = grid.num_points();
    let mut base = vec![Complex64::new(0.0, 0.0); n_pts];
    for &(m, amp) in amps {
        base[m] = Complex64::new(amp, 0.0);
        base[n_pts - m] = Complex64::new(amp, 0.0);
    }
    let rows = weights
        .iter()
        .map(|&wk| {
            let row_hat: Vec<Complex64> = base.iter().map(|c| c * wk).collect();
            transform::inverse_row(&grid, &row_hat)
        })
        .collect();
    InterfaceState::from_rows_unchecked(grid, 0.0, rows)
}
