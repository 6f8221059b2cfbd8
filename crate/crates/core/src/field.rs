//! Interface state (physical samples) and its spectrum.

use num_complex::Complex64;

use crate::config::FluidConfig;
use crate::error::ModelError;
use crate::grid::SpectralGrid;

/// The `n` interface perturbations `g_k(x, t)` sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceState {
    grid: SpectralGrid,
    t: f64,
    rows: Vec<Vec<f64>>,
}

/// Detected loss of the interface ordering `d_k + g_k < d_{k+1} + g_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingViolation {
    /// Lower interface index (0-based).
    pub k: usize,
    /// Grid location of the worst violation.
    pub x: f64,
    /// Signed margin `f_{k+1}(x) - f_k(x)` there (non-positive).
    pub margin: f64,
}

impl InterfaceState {
    pub fn new(grid: SpectralGrid, t: f64, rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let state = Self::from_rows_unchecked(grid, t, rows);
        state.check_finite()?;
        Ok(state)
    }

    pub(crate) fn from_rows_unchecked(grid: SpectralGrid, t: f64, rows: Vec<Vec<f64>>) -> Self {
        for row in &rows {
            assert_eq!(row.len(), grid.num_points(), "row length mismatch");
        }
        Self { grid, t, rows }
    }

    /// All-zero state (the flat stationary solution).
    pub fn zero(grid: SpectralGrid, n: usize) -> Self {
        Self {
            grid,
            t: 0.0,
            rows: vec![vec![0.0; grid.num_points()]; n],
        }
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn set_t(&mut self, t: f64) {
        self.t = t;
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn rows_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.rows
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    pub fn check_finite(&self) -> Result<(), ModelError> {
        for (k, row) in self.rows.iter().enumerate() {
            if let Some(idx) = row.iter().position(|v| !v.is_finite()) {
                return Err(ModelError::NonFiniteInput { row: k, index: idx });
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.check_finite().is_ok()
    }

    /// Smallest vertical margin `min_x (f_{k+1} - f_k)(x)` over adjacent
    /// interface pairs; `f64::INFINITY` for n = 1.
    pub fn min_gap_margin(&self, cfg: &FluidConfig) -> f64 {
        let mut min = f64::INFINITY;
        for k in 0..self.n().saturating_sub(1) {
            let dk = cfg.depths()[k];
            let dk1 = cfg.depths()[k + 1];
            for m in 0..self.grid.num_points() {
                let margin = (dk1 + self.rows[k + 1][m]) - (dk + self.rows[k][m]);
                if margin < min {
                    min = margin;
                }
            }
        }
        min
    }

    /// Reports the worst ordering violation if the reconstructed interfaces
    /// touch or cross anywhere; checked, never enforced.
    pub fn ordering_violation(&self, cfg: &FluidConfig) -> Option<OrderingViolation> {
        let mut worst: Option<OrderingViolation> = None;
        for k in 0..self.n().saturating_sub(1) {
            let dk = cfg.depths()[k];
            let dk1 = cfg.depths()[k + 1];
            for m in 0..self.grid.num_points() {
                let margin = (dk1 + self.rows[k + 1][m]) - (dk + self.rows[k][m]);
                if margin <= 0.0 && worst.map_or(true, |w| margin < w.margin) {
                    worst = Some(OrderingViolation {
                        k,
                        x: self.grid.x(m),
                        margin,
                    });
                }
            }
        }
        worst
    }

    /// Scale every sample by `c` (norm-homogeneity helper).
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            t: self.t,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| c * v).collect())
                .collect(),
        }
    }
}

/// Fourier coefficients of a state, in FFT index order, under the
/// `dx`-scaled DFT convention (see [`crate::transform`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumField {
    grid: SpectralGrid,
    rows: Vec<Vec<Complex64>>,
}

impl SpectrumField {
    pub fn from_rows(grid: SpectralGrid, rows: Vec<Vec<Complex64>>) -> Self {
        for row in &rows {
            assert_eq!(row.len(), grid.num_points(), "row length mismatch");
        }
        Self { grid, rows }
    }

    pub fn zero(grid: SpectralGrid, n: usize) -> Self {
        Self {
            grid,
            rows: vec![vec![Complex64::new(0.0, 0.0); grid.num_points()]; n],
        }
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    pub fn rows_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.rows
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.rows[k]
    }

    /// Worst deviation from Hermitian symmetry `g_hat(-xi) = conj(g_hat(xi))`,
    /// which holds exactly when the physical field is real.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.num_points();
        let mut worst: f64 = 0.0;
        for row in &self.rows {
            for k in 1..n {
                worst = worst.max((row[k] - row[n - k].conj()).norm());
            }
            worst = worst.max(row[0].im.abs());
        }
        worst
    }
}
