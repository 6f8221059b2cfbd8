//! Norms and functionals the decay estimates are phrased in, the diagonal
//! coordinate transform, the energy monitor, and the decay-exponent fitter.

use num_complex::Complex64;

use crate::config::FluidConfig;
use crate::error::DiagnosticsError;
use crate::field::{InterfaceState, SpectrumField};
use crate::grid::SpectralGrid;
use crate::spectrum::{ModeCache, TildeLambda};

/// Discrete Wiener norm `sum_m |xi_m|^s |g_hat(xi_m)| dxi` of one row.
/// The `xi = 0` mode contributes `|g_hat(0)| dxi` for `s = 0` and nothing
/// for `s > 0`.
pub fn wiener_norm_row(grid: &SpectralGrid, row: &[Complex64], s: f64) -> f64 {
    let dxi = grid.dxi();
    let mut acc = 0.0;
    for (m, c) in row.iter().enumerate() {
        let xi = grid.xi(m).abs();
        let w = if m == 0 {
            if s == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            xi.powf(s)
        };
        acc += w * c.norm();
    }
    acc * dxi
}

/// Weighted norm `sum_m w(m) |g_hat(xi_m)| dxi` with a caller-supplied
/// per-mode weight.
pub fn weighted_norm_row<W: Fn(usize) -> f64>(
    grid: &SpectralGrid,
    row: &[Complex64],
    weight: W,
) -> f64 {
    let dxi = grid.dxi();
    row.iter()
        .enumerate()
        .map(|(m, c)| weight(m) * c.norm())
        .sum::<f64>()
        * dxi
}

pub fn wiener_norm(field: &SpectrumField, k: usize, s: f64) -> f64 {
    wiener_norm_row(field.grid(), field.row(k), s)
}

/// Sum over interfaces of the Wiener norm.
pub fn wiener_norm_sum(field: &SpectrumField, s: f64) -> f64 {
    (0..field.n()).map(|k| wiener_norm(field, k, s)).sum()
}

/// Discrete `L^2` norm of one interface row (rectangle rule, exact by
/// periodicity).
pub fn l2_norm(state: &InterfaceState, k: usize) -> f64 {
    let dx = state.grid().dx();
    (dx * state.row(k).iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Mass `integral g_k dx`.
pub fn mass(state: &InterfaceState, k: usize) -> f64 {
    state.grid().dx() * state.row(k).iter().sum::<f64>()
}

/// Finite per-period surrogate of the layered potential energy:
/// `sum_j (rho_{j-1} - rho_j) (||g_j||_{L2}^2 + 2 d_j integral g_j dx)`.
/// Its time derivative matches the formal functional's (the constant
/// `d_j^2` column is dropped).
pub fn energy(state: &InterfaceState, cfg: &FluidConfig) -> f64 {
    (0..state.n())
        .map(|j| {
            let l2 = l2_norm(state, j);
            cfg.jump(j) * (l2 * l2 + 2.0 * cfg.depths()[j] * mass(state, j))
        })
        .sum()
}

/// Per-mode change to diagonal coordinates `h_hat = P^{-1} g_hat`.
pub fn h_transform(field: &SpectrumField, cache: &ModeCache) -> SpectrumField {
    apply_mode_matrix(field, cache, false)
}

/// Inverse of [`h_transform`].
pub fn h_transform_inverse(field: &SpectrumField, cache: &ModeCache) -> SpectrumField {
    apply_mode_matrix(field, cache, true)
}

fn apply_mode_matrix(field: &SpectrumField, cache: &ModeCache, inverse: bool) -> SpectrumField {
    let grid = *field.grid();
    let n = field.n();
    let n_pts = grid.num_points();
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); n_pts]; n];
    for m in 0..n_pts {
        let dec = cache.at_index(&grid, m);
        let mat = if inverse { &dec.p } else { &dec.p_inv };
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += mat[(i, j)] * field.row(j)[m];
            }
            rows[i][m] = acc;
        }
    }
    SpectrumField::from_rows(grid, rows)
}

/// Aggregate functionals of the diagonal coordinates:
/// `E_{0,s} = sum_i ||h_i||_s` and
/// `E_{1,s} = sum_i ||h_i||_{tilde_lambda(xi) |xi|^s}`.
pub fn e0(h: &SpectrumField, s: f64) -> f64 {
    wiener_norm_sum(h, s)
}

pub fn e1(h: &SpectrumField, s: f64, tilde: &TildeLambda) -> f64 {
    let grid = *h.grid();
    (0..h.n())
        .map(|i| {
            weighted_norm_row(&grid, h.row(i), |m| {
                let xi = grid.xi(m).abs();
                let w = if m == 0 && s == 0.0 { 1.0 } else { xi.powf(s) };
                tilde.at_mode(&grid, m) * w
            })
        })
        .sum()
}

/// One sampled row of every requested diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsSnapshot {
    pub t: f64,
    /// `sum_k ||g_k||_s` for each requested s, in request order.
    pub wiener_sums: Vec<f64>,
    /// Per-interface Wiener norms, outer index = requested s.
    pub wiener_per_k: Vec<Vec<f64>>,
    pub l2_per_k: Vec<f64>,
    pub mass_per_k: Vec<f64>,
    /// `E_{0,s}` for each requested s.
    pub e0: Vec<f64>,
    /// `E_{1,s}` for each requested s.
    pub e1: Vec<f64>,
    pub energy: f64,
    /// `sum ||h||_0 / sum ||g||_0` (1 when both vanish).
    pub norm_equivalence_ratio: f64,
    /// Smallest vertical separation of adjacent interfaces.
    pub min_gap_margin: f64,
}

/// Snapshot engine owning the per-mode eigendata and minorant tables.
pub struct DiagnosticsEngine {
    pub cache: ModeCache,
    pub tilde: TildeLambda,
    pub s_list: Vec<f64>,
}

impl DiagnosticsEngine {
    pub fn new(cache: ModeCache, tilde: TildeLambda, s_list: Vec<f64>) -> Self {
        Self {
            cache,
            tilde,
            s_list,
        }
    }

    pub fn snapshot(
        &self,
        state: &InterfaceState,
        cfg: &FluidConfig,
    ) -> Result<DiagnosticsSnapshot, crate::error::ModelError> {
        let hat = crate::transform::forward(state)?;
        let h = h_transform(&hat, &self.cache);
        let wiener_per_k: Vec<Vec<f64>> = self
            .s_list
            .iter()
            .map(|&s| (0..hat.n()).map(|k| wiener_norm(&hat, k, s)).collect())
            .collect();
        let wiener_sums: Vec<f64> = wiener_per_k.iter().map(|v| v.iter().sum()).collect();
        let g0 = wiener_norm_sum(&hat, 0.0);
        let h0 = wiener_norm_sum(&h, 0.0);
        let ratio = if g0 == 0.0 && h0 == 0.0 { 1.0 } else { h0 / g0 };
        Ok(DiagnosticsSnapshot {
            t: state.t(),
            wiener_sums,
            wiener_per_k,
            l2_per_k: (0..state.n()).map(|k| l2_norm(state, k)).collect(),
            mass_per_k: (0..state.n()).map(|k| mass(state, k)).collect(),
            e0: self.s_list.iter().map(|&s| e0(&h, s)).collect(),
            e1: self
                .s_list
                .iter()
                .map(|&s| e1(&h, s, &self.tilde))
                .collect(),
            energy: energy(state, cfg),
            norm_equivalence_ratio: ratio,
            min_gap_margin: state.min_gap_margin(cfg),
        })
    }
}

/// Fitted large-time decay exponent over a window, model
/// `norm ~ (1 + t)^{-beta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub s: f64,
    pub t0: f64,
    pub t1: f64,
    /// Positive means decay.
    pub beta_hat: f64,
    /// RMS residual of the log-log regression.
    pub residual: f64,
    /// Two standard errors of the slope.
    pub half_width: f64,
    pub samples: usize,
}

/// Least-squares fit of `log(norm)` against `log(1 + t)` over
/// `t in [t0, t1]`; needs at least 10 samples with positive norms.
pub fn decay_fit(
    times: &[f64],
    norms: &[f64],
    s: f64,
    t0: f64,
    t1: f64,
) -> Result<DecayFit, DiagnosticsError> {
    assert_eq!(times.len(), norms.len());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in times.iter().zip(norms) {
        if t >= t0 && t <= t1 {
            if !(v > 0.0) {
                return Err(DiagnosticsError::NonPositiveNorm { t, value: v });
            }
            xs.push((1.0 + t).ln());
            ys.push(v.ln());
        }
    }
    let n = xs.len();
    if n < 10 {
        return Err(DiagnosticsError::InsufficientSamples {
            t0,
            t1,
            got: n,
            need: 10,
        });
    }
    let nf = n as f64;
    let xbar = xs.iter().sum::<f64>() / nf;
    let ybar = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let residual = (ss_res / nf).sqrt();
    let slope_var = if n > 2 {
        ss_res / (nf - 2.0) / sxx
    } else {
        0.0
    };
    Ok(DecayFit {
        s,
        t0,
        t1,
        beta_hat: -slope,
        residual,
        half_width: 2.0 * slope_var.sqrt(),
        samples: n,
    })
}
