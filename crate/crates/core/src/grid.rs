//! Uniform periodic grid on the torus [-L, L) with matched discrete wavenumbers.

use crate::error::ModelError;

/// Discretization of the line: `num_points` equispaced samples on `[-L, L)`
/// and wavenumbers `xi_m = pi m / L` for `m = -N/2 .. N/2 - 1`.
///
/// Spectra are stored in FFT index order: index `m <= N/2` carries wavenumber
/// `pi m / L`, index `m > N/2` carries `pi (m - N) / L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    half_width: f64,
    num_points: usize,
}

impl SpectralGrid {
    pub fn new(half_width: f64, num_points: usize) -> Result<Self, ModelError> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(ModelError::BadHalfWidth(half_width));
        }
        if num_points < 8 || num_points % 2 != 0 {
            return Err(ModelError::BadGridSize(num_points));
        }
        Ok(Self {
            half_width,
            num_points,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.num_points as f64
    }

    /// Spacing of the wavenumber grid, `pi / L`.
    pub fn dxi(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    /// Physical sample point `x_m = -L + m dx`.
    pub fn x(&self, m: usize) -> f64 {
        -self.half_width + self.dx() * m as f64
    }

    /// Signed wavenumber carried by FFT index `m`.
    pub fn xi(&self, m: usize) -> f64 {
        let n = self.num_points;
        let signed = if m <= n / 2 {
            m as i64
        } else {
            m as i64 - n as i64
        };
        self.dxi() * signed as f64
    }

    /// Largest resolvable wavenumber magnitude, `pi N / (2 L)`.
    pub fn nyquist(&self) -> f64 {
        self.dxi() * (self.num_points / 2) as f64
    }

    /// FFT index of the mode with the same |xi|, i.e. `min(m, N - m)`.
    pub fn fold(&self, m: usize) -> usize {
        m.min(self.num_points - m)
    }

    /// All physical sample points.
    pub fn xs(&self) -> Vec<f64> {
        (0..self.num_points).map(|m| self.x(m)).collect()
    }
}
