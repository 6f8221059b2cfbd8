//! Nonlinear perturbation terms two independent ways — exact kernel-difference
//! quadrature and the Taylor series with coefficients `b_{l,k,j}` — plus the
//! majorant functions `F_{0,s}, F_{1,s}, F_{2,s}` and the bound-ratio reports.
//!
//! Series-mode integrals use the same `2M - 1` period window and symmetric
//! node pairing as the contour quadrature, so the dual check is limited only
//! by series truncation.

use rayon::prelude::*;

use crate::config::FluidConfig;
use crate::diagnostics;
use crate::error::SeriesError;
use crate::field::InterfaceState;
use crate::quadrature::{self, FineState, QuadParams, YTable};
use crate::spectrum::TildeLambda;
use crate::transform;

/// Truncation order and validity guard for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesDepth {
    /// Number of series terms `l = 1 ..= order`.
    pub order: usize,
    /// Smallness threshold in units of the convergence scale: series mode
    /// requires `max |Delta_y g| <= guard` (diagonal terms) and
    /// `max |[g_k, g_j]_y| <= guard * 2 d_kj` (off-diagonal terms).
    pub amplitude_guard: f64,
}

impl Default for SeriesDepth {
    fn default() -> Self {
        Self {
            order: 8,
            amplitude_guard: 0.15,
        }
    }
}

/// Evaluation route for the nonlinear terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlinearMode {
    Quadrature,
    Series(SeriesDepth),
}

/// Coefficient `b_{l,k,j}(y)` of the off-diagonal nonlinear expansion,
/// from the closed finite sum obtained by expanding
/// `y w^2 u / (1 - w u)` with `w = 1/(y^2 + d^2)` and `u = z (2d - z)`:
/// antisymmetric in `y` and `b_{l,k,j} = (-1)^l b_{l,j,k}` exactly.
pub fn b_coeff(l: usize, k: usize, j: usize, y: f64, cfg: &FluidConfig) -> f64 {
    assert!(k != j, "b coefficients are defined for k != j");
    let d = (cfg.depths()[k] - cfg.depths()[j]).abs();
    b_coeff_gap(l, y, d, k > j)
}

/// Gap-parameterized form of [`b_coeff`]; `flip` selects the `k > j` branch.
pub fn b_coeff_gap(l: usize, y: f64, d: f64, flip: bool) -> f64 {
    assert!(l >= 1);
    let w = 1.0 / (y * y + d * d);
    let two_d = 2.0 * d;
    let mut acc = 0.0;
    for m in l.div_ceil(2)..=l {
        let sign = if (l - m) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(m, l - m) * two_d.powi((2 * m - l) as i32) * y * w.powi(m as i32 + 1);
    }
    if flip && l % 2 == 1 {
        -acc
    } else {
        acc
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Nonlinear term `N_{k,j}` (including `k = j`) in the requested mode.
pub fn n_pair(
    fine: &FineState,
    cfg: &FluidConfig,
    k: usize,
    j: usize,
    mode: NonlinearMode,
    qp: &QuadParams,
) -> Result<Vec<f64>, SeriesError> {
    match mode {
        NonlinearMode::Quadrature => Ok(quadrature::nonlinear_pair(fine, cfg, k, j, qp)),
        NonlinearMode::Series(depth) => {
            if k == j {
                n_kk_series(fine, cfg, k, depth, qp)
            } else {
                n_kj_series(fine, cfg, k, j, depth, qp)
            }
        }
    }
}

/// Convenience wrapper taking a physical state.
pub fn n_pair_state(
    state: &InterfaceState,
    cfg: &FluidConfig,
    k: usize,
    j: usize,
    mode: NonlinearMode,
    qp: &QuadParams,
) -> Result<Vec<f64>, SeriesError> {
    let fine = FineState::build(state, qp, false);
    n_pair(&fine, cfg, k, j, mode, qp)
}

/// Odd offsets covering the full `2M - 1` period window.
fn window_offsets(table: &YTable, qp: &QuadParams) -> Vec<usize> {
    let span = (2 * qp.periods - 1) * table.nf / 2;
    (1..span).step_by(2).collect()
}

fn n_kk_series(
    fine: &FineState,
    cfg: &FluidConfig,
    k: usize,
    depth: SeriesDepth,
    qp: &QuadParams,
) -> Result<Vec<f64>, SeriesError> {
    let table = YTable::build(&fine.grid, qp);
    let offsets = window_offsets(&table, qp);
    let ys: Vec<f64> = offsets.iter().map(|&o| o as f64 * table.ds).collect();
    let gk = &fine.g[k];
    let dgk = &fine.dg[k];
    let pref = -cfg.jump(k) / (2.0 * std::f64::consts::PI) * table.weight;
    let n_pts = fine.grid.num_points();

    let evals: Vec<(f64, f64)> = (0..n_pts)
        .into_par_iter()
        .map(|m| {
            let fi = (fine.stride * m) as isize;
            let gm = gk[fi as usize];
            let dgm = dgk[fi as usize];
            let mut acc = 0.0;
            let mut local_max: f64 = 0.0;
            for (oi, &o) in offsets.iter().enumerate() {
                let y = ys[oi];
                let ip = wrap(fi - o as isize, fine.nf);
                let im = wrap(fi + o as isize, fine.nf);
                let slope_p = (gm - gk[ip]) / y;
                let slope_m = (gm - gk[im]) / (-y);
                let dslope_p = (dgm - dgk[ip]) / y;
                let dslope_m = (dgm - dgk[im]) / (-y);
                local_max = local_max.max(slope_p.abs()).max(slope_m.abs());
                acc += dslope_p * alternating_even_sum(slope_p * slope_p, depth.order)
                    + dslope_m * alternating_even_sum(slope_m * slope_m, depth.order);
            }
            (pref * acc, local_max)
        })
        .collect();

    let measured = evals.iter().fold(0.0f64, |a, &(_, m)| a.max(m));
    if measured > depth.amplitude_guard {
        return Err(SeriesError::GuardExceeded {
            measured,
            allowed: depth.amplitude_guard,
        });
    }
    Ok(evals.into_iter().map(|(v, _)| v).collect())
}

/// `sum_{l=1}^{L} (-1)^{l+1} u^l` by Horner.
#[inline(always)]
fn alternating_even_sum(u: f64, order: usize) -> f64 {
    let mut acc = 0.0;
    for l in (1..=order).rev() {
        let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
        acc = u * (sign + acc);
    }
    acc
}

fn n_kj_series(
    fine: &FineState,
    cfg: &FluidConfig,
    k: usize,
    j: usize,
    depth: SeriesDepth,
    qp: &QuadParams,
) -> Result<Vec<f64>, SeriesError> {
    let table = YTable::build(&fine.grid, qp);
    let offsets = window_offsets(&table, qp);
    let d = (cfg.depths()[k] - cfg.depths()[j]).abs();
    let flip = k > j;
    // b_l tables per (l, node)
    let coeffs: Vec<Vec<f64>> = (1..=depth.order)
        .map(|l| {
            offsets
                .iter()
                .map(|&o| b_coeff_gap(l, o as f64 * table.ds, d, flip))
                .collect()
        })
        .collect();
    let gj = &fine.g[j];
    let dgj = &fine.dg[j];
    let gk = &fine.g[k];
    let dgk = &fine.dg[k];
    let pref = cfg.jump(j) / (2.0 * std::f64::consts::PI) * table.weight;
    let n_pts = fine.grid.num_points();

    let evals: Vec<(f64, f64)> = (0..n_pts)
        .into_par_iter()
        .map(|m| {
            let fi = (fine.stride * m) as isize;
            let gm = gk[fi as usize];
            let dgm = dgk[fi as usize];
            let mut acc = 0.0;
            let mut local_max: f64 = 0.0;
            for (oi, &o) in offsets.iter().enumerate() {
                let ip = wrap(fi - o as isize, fine.nf);
                let im = wrap(fi + o as isize, fine.nf);
                let zp = gm - gj[ip];
                let zm = gm - gj[im];
                let dzp = dgm - dgj[ip];
                let dzm = dgm - dgj[im];
                local_max = local_max.max(zp.abs()).max(zm.abs());
                let mut zp_pow = zp;
                let mut zm_pow = zm;
                for (li, bl) in coeffs.iter().enumerate() {
                    let _ = li;
                    // b_l(-y) = -b_l(y)
                    acc += bl[oi] * (dzp * zp_pow - dzm * zm_pow);
                    zp_pow *= zp;
                    zm_pow *= zm;
                }
            }
            (pref * acc, local_max)
        })
        .collect();

    let allowed = depth.amplitude_guard * 2.0 * d;
    let measured = evals.iter().fold(0.0f64, |a, &(_, m)| a.max(m));
    if measured > allowed {
        return Err(SeriesError::GuardExceeded { measured, allowed });
    }
    Ok(evals.into_iter().map(|(v, _)| v).collect())
}

#[inline(always)]
fn wrap(idx: isize, nf: usize) -> usize {
    idx.rem_euclid(nf as isize) as usize
}

/// Module constant `C_0 = 2 max(1, 1/min_gap^2)`: the smallest constant with
/// `2^l y/(y^2+d^2)^{l+1} <= C_0^l y/(y^2+1)^{l+1}` over the configured gaps.
pub fn c0_constant(cfg: &FluidConfig) -> f64 {
    let g = cfg.min_gap();
    if g.is_finite() {
        2.0 * (1.0f64).max(1.0 / (g * g))
    } else {
        2.0
    }
}

/// Which majorant function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajorantFn {
    F0s,
    F1s,
    F2s,
}

/// A converged partial sum and the truncation order that achieved it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantValue {
    pub value: f64,
    pub terms: usize,
}

/// Evaluate `F_{0,s}(x) = sum (2l+1)^s x^{2l}`,
/// `F_{2,s}(x) = sum (2^s C_0)^l x^{l-1}`, or `F_{1,s} = x F_{2,s}`,
/// with geometric tail below 1e-14 relative.
pub fn f_eval(name: MajorantFn, x: f64, s: f64, c0: f64) -> Result<MajorantValue, SeriesError> {
    match name {
        MajorantFn::F0s => {
            if x.abs() >= 1.0 {
                return Err(SeriesError::OutOfRadius { x, radius: 1.0 });
            }
            if x == 0.0 {
                return Ok(MajorantValue { value: 0.0, terms: 0 });
            }
            let x2 = x * x;
            let mut acc = 0.0;
            let mut l = 1usize;
            loop {
                let term = (2.0 * l as f64 + 1.0).powf(s) * x2.powi(l as i32);
                acc += term;
                // ratio bound for all later terms (decreasing in l for s >= 0)
                let q = x2 * ((2 * l + 3) as f64 / (2 * l + 1) as f64).powf(s);
                if q < 1.0 && term * q / (1.0 - q) <= 1e-15 * acc.max(f64::MIN_POSITIVE) {
                    return Ok(MajorantValue { value: acc, terms: l });
                }
                l += 1;
                assert!(l < 1_000_000, "majorant series failed to converge");
            }
        }
        MajorantFn::F2s => {
            let rho = 2.0f64.powf(s) * c0;
            let radius = 1.0 / rho;
            if x.abs() >= radius {
                return Err(SeriesError::OutOfRadius { x, radius });
            }
            let q = rho * x.abs();
            let mut acc = 0.0;
            let mut term = rho; // l = 1: rho^1 x^0
            let mut l = 1usize;
            loop {
                acc += term;
                if term * q / (1.0 - q) <= 1e-15 * acc.max(f64::MIN_POSITIVE) {
                    return Ok(MajorantValue { value: acc, terms: l });
                }
                term *= rho * x;
                l += 1;
                assert!(l < 1_000_000, "majorant series failed to converge");
            }
        }
        MajorantFn::F1s => {
            let inner = f_eval(MajorantFn::F2s, x, s, c0)?;
            Ok(MajorantValue {
                value: x * inner.value,
                terms: inner.terms,
            })
        }
    }
}

/// Measured Wiener mass of one nonlinear term against the analytic majorant
/// with its hidden constant set to one.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub k: usize,
    pub j: usize,
    pub s: f64,
    /// `integral |xi|^s |N_hat_{k,j}| dxi` (quadrature-mode N).
    pub measured: f64,
    /// Majorant right-hand side with constant 1.
    pub bound: f64,
    /// `measured / bound`; 0 when both sides vanish.
    pub ratio: f64,
    pub c0: f64,
}

/// Build a bound report for the `(k, j)` term at norm order `s`.
pub fn bound_report(
    state: &InterfaceState,
    cfg: &FluidConfig,
    k: usize,
    j: usize,
    s: f64,
    tilde: &TildeLambda,
    qp: &QuadParams,
) -> Result<BoundReport, SeriesError> {
    let grid = *state.grid();
    let fine = FineState::build(state, qp, false);
    let n_row = quadrature::nonlinear_pair(&fine, cfg, k, j, qp);
    let n_hat = transform::forward_row(&grid, &n_row);
    let measured = diagnostics::wiener_norm_row(&grid, &n_hat, s);

    let hat = transform::forward(state).expect("finite state");
    let c0 = c0_constant(cfg);
    let w0 = |i: usize| diagnostics::wiener_norm_row(&grid, hat.row(i), 0.0);
    let w1 = |i: usize| diagnostics::wiener_norm_row(&grid, hat.row(i), 1.0);
    let wtilde = |i: usize, order: f64| {
        diagnostics::weighted_norm_row(&grid, hat.row(i), |m| {
            tilde.at_mode(&grid, m) * grid.xi(m).abs().powf(order)
        })
    };

    let bound = if k == j {
        let f0 = f_eval(MajorantFn::F0s, w1(k), s, c0)?.value;
        f0 * diagnostics::wiener_norm_row(&grid, hat.row(k), s + 1.0)
    } else {
        let x = w0(k) + w0(j);
        let f1 = f_eval(MajorantFn::F1s, x, s, c0)?.value;
        let f2 = f_eval(MajorantFn::F2s, x, s, c0)?.value;
        f1 * (wtilde(k, s + 1.0) + wtilde(j, s + 1.0))
            + (w1(k) + w1(j)) * f2 * (wtilde(k, s) + wtilde(j, s))
    };
    let ratio = if measured == 0.0 && bound == 0.0 {
        0.0
    } else {
        measured / bound
    };
    Ok(BoundReport {
        k,
        j,
        s,
        measured,
        bound,
        ratio,
        c0,
    })
}

/// Numeric `integral_0^inf |b_l(y)| |e^{2 i xi y} - 1| dy` for the kernel
/// lemma ratio checks (trapezoid on a decaying integrand).
pub fn b_kernel_integral(l: usize, d: f64, xi: f64, y_max: f64, dy: f64) -> f64 {
    let steps = (y_max / dy) as usize;
    let mut acc = 0.0;
    for i in 0..steps {
        let y = (i as f64 + 0.5) * dy;
        let b = b_coeff_gap(l, y, d, false).abs();
        // |e^{2 i xi y} - 1| = 2 |sin(xi y)|
        acc += b * 2.0 * (xi * y).sin().abs() * dy;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn b_examples_at_unit_gap() {
        // b_1(1; d=1) = 2 * 1 / (1+1)^2 = 0.5 ; b_2(1; d=1) = -1/4 + 4/8 = 0.25
        assert_abs_diff_eq!(b_coeff_gap(1, 1.0, 1.0, false), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b_coeff_gap(2, 1.0, 1.0, false), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn b_antisymmetry_and_swap_exact() {
        for l in 1..=12 {
            for &y in &[0.17, 0.9, 2.3] {
                for &d in &[0.6, 1.0, 2.0] {
                    let base = b_coeff_gap(l, y, d, false);
                    assert_eq!(b_coeff_gap(l, -y, d, false), -base);
                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                    assert_eq!(b_coeff_gap(l, y, d, true), sign * base);
                }
            }
        }
    }

    /// Cauchy-integral coefficient extraction of the generating function on a
    /// circle sized to the convergence disk: an oracle independent of the
    /// closed sum.
    fn b_oracle(l: usize, y: f64, d: f64) -> f64 {
        use num_complex::Complex64;
        let w = 1.0 / (y * y + d * d);
        // radius with max |w u| = 1/2 on the circle: rho (2d + rho) = (y^2+d^2)/2
        let c = 0.5 * (y * y + d * d);
        let rho = -d + (d * d + c).sqrt();
        let k_samples = 512;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..k_samples {
            let ang = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / k_samples as f64;
            let z = Complex64::from_polar(rho, ang);
            let u = z * (2.0 * d - z);
            let g = y * w * w * u / (1.0 - w * u);
            acc += g * Complex64::from_polar(1.0, -(l as f64) * ang);
        }
        (acc / k_samples as f64).re / rho.powi(l as i32)
    }

    #[test]
    fn b_closed_sum_matches_cauchy_oracle() {
        for l in 1..=12 {
            for &y in &[0.05, 0.3, 1.0, 2.5] {
                for &d in &[0.7, 1.0, 2.0] {
                    let closed = b_coeff_gap(l, y, d, false);
                    let oracle = b_oracle(l, y, d);
                    let scale = (2.0 * d).powi(l as i32) * y
                        / (y * y + d * d).powi(l as i32 + 1)
                        + closed.abs()
                        + oracle.abs();
                    assert!(
                        (closed - oracle).abs() <= 1e-10 * scale,
                        "l={l} y={y} d={d}: {closed} vs {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn b_bound_holds_on_probe_region() {
        // |b_l| <= 2^l y/(y^2+d^2)^{l+1} holds for w = 1/(y^2+d^2) >= 1/4;
        // at d = 1 that is y <= sqrt(3). Exact inequality, no tolerance.
        let d = 1.0;
        for l in 1..=12 {
            let mut y = 0.02;
            while y <= 3.0f64.sqrt() {
                let b = b_coeff_gap(l, y, d, false).abs();
                let bound = 2.0f64.powi(l as i32) * y / (y * y + d * d).powi(l as i32 + 1);
                assert!(b <= bound * (1.0 + 1e-13), "l={l} y={y}: {b} > {bound}");
                y += 0.02;
            }
        }
    }

    #[test]
    fn b_bound_fails_beyond_probe_region() {
        // documents the measured validity boundary
        let b = b_coeff_gap(2, 3.0, 1.0, false).abs();
        let bound = 4.0 * 3.0 / (10.0f64).powi(3);
        assert!(b > bound);
    }

    #[test]
    fn f0s_geometric_closed_form() {
        let v = f_eval(MajorantFn::F0s, 0.1, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(v.value, 0.01 / 0.99, epsilon = 1e-15);
        assert_abs_diff_eq!(v.value, 0.0101010, epsilon = 1e-7);
        assert_eq!(f_eval(MajorantFn::F0s, 0.0, 1.0, 2.0).unwrap().value, 0.0);
    }

    #[test]
    fn f1_is_x_times_f2() {
        let c0 = 2.0;
        for &x in &[0.01, 0.05, 0.1] {
            for &s in &[0.0, 0.5, 1.0] {
                let f1 = f_eval(MajorantFn::F1s, x, s, c0).unwrap().value;
                let f2 = f_eval(MajorantFn::F2s, x, s, c0).unwrap().value;
                assert!((f1 - x * f2).abs() <= 1e-14 * f1.abs().max(1e-300));
                // geometric closed form oracle for F2s
                let rho = 2.0f64.powf(s) * c0;
                assert!((f2 - rho / (1.0 - rho * x)).abs() <= 1e-13 * f2);
            }
        }
    }

    #[test]
    fn f_eval_rejects_out_of_radius() {
        assert!(matches!(
            f_eval(MajorantFn::F0s, 1.0, 0.0, 2.0),
            Err(SeriesError::OutOfRadius { .. })
        ));
        assert!(matches!(
            f_eval(MajorantFn::F2s, 0.6, 0.0, 2.0),
            Err(SeriesError::OutOfRadius { .. })
        ));
    }
}
