//! Physical-space principal-value quadrature: the full contour-dynamics
//! right-hand side, bulk and one-sided velocities, and the shared kernel
//! machinery used by the nonlinear series module.
//!
//! All integrands have the form `A(x, y) * K(y, D(x, y))` with the Poisson
//! kernel `K(y, D) = y / (y^2 + D^2)` and both `A` and `D` periodic in `y`.
//! The `y`-integral over the line is therefore a sum over torus images,
//! either truncated to a symmetric window of `2M - 1` periods (`Window`) or
//! completed in closed form via
//! `sum_b 1/(y + 2Lb - iD) = (pi/2L) cot(pi (y - iD) / 2L)`, which gives
//! `K_per(y, D) = (pi/2L) sin(a) cos(a) / (sin^2 a + sinh^2 b)` with
//! `a = pi y / 2L`, `b = pi D / 2L` (`Analytic`).
//!
//! Quadrature nodes sit at odd multiples of the fine half-step, so the
//! principal value is handled by exact symmetric pairing with no node at
//! `y = 0`, and `x - y` always lands on the upsampled grid.

use rayon::prelude::*;

use crate::config::FluidConfig;
use crate::error::QuadratureError;
use crate::field::InterfaceState;
use crate::grid::SpectralGrid;
use crate::transform;

/// How the image sum beyond the quadrature window is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailTreatment {
    /// Plain truncation to the `2M - 1` period window; the discarded tail is
    /// `O(1/(M L))` and is what the periodization convergence study measures.
    Window,
    /// Closed-form completion of the image sum (exact periodization).
    Analytic,
}

/// Quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadParams {
    /// Half-count of torus periods; the window is `[-(2M-1)L, (2M-1)L]`.
    pub periods: usize,
    /// Fine-grid refinement: node spacing in `y` is `dx / resolution`.
    pub resolution: usize,
    /// Pair `+y` and `-y` contributions before accumulating.
    pub pv_pairing: bool,
    pub tail: TailTreatment,
}

impl Default for QuadParams {
    fn default() -> Self {
        Self {
            periods: 8,
            resolution: 1,
            pv_pairing: true,
            tail: TailTreatment::Analytic,
        }
    }
}

impl QuadParams {
    pub fn window_halfwidth(&self, grid: &SpectralGrid) -> f64 {
        (2 * self.periods - 1) as f64 * grid.half_width()
    }

    /// Magnitude estimate of the discarded image tail per unit slope,
    /// `O(1/(M L))`; zero under analytic completion.
    pub fn tail_estimate(&self, grid: &SpectralGrid) -> f64 {
        match self.tail {
            TailTreatment::Analytic => 0.0,
            TailTreatment::Window => 1.0 / self.window_halfwidth(grid),
        }
    }
}

/// `sinh` with a cheap odd polynomial on the small-argument range the
/// periodized kernels live in (`pi D / 2L` is small for every configuration
/// with gaps well inside the torus).
#[inline(always)]
fn fast_sinh(x: f64) -> f64 {
    let s = x * x;
    if s <= 0.0625 {
        x * (1.0
            + s * (1.0 / 6.0
                + s * (1.0 / 120.0
                    + s * (1.0 / 5040.0 + s * (1.0 / 362_880.0 + s / 39_916_800.0)))))
    } else {
        x.sinh()
    }
}

/// `(sinh x, cosh x)` with the same small-argument strategy.
#[inline(always)]
fn fast_sinh_cosh(x: f64) -> (f64, f64) {
    let s = x * x;
    if s <= 0.0625 {
        let sh = x
            * (1.0
                + s * (1.0 / 6.0
                    + s * (1.0 / 120.0
                        + s * (1.0 / 5040.0 + s * (1.0 / 362_880.0 + s / 39_916_800.0)))));
        let ch = 1.0
            + s * (0.5
                + s * (1.0 / 24.0
                    + s * (1.0 / 720.0 + s * (1.0 / 40_320.0 + s / 3_628_800.0))));
        (sh, ch)
    } else {
        (x.sinh(), x.cosh())
    }
}

/// Step a wrapped fine-grid index down by two (toward `x - y`).
#[inline(always)]
fn down2(idx: usize, nf: usize) -> usize {
    if idx >= 2 {
        idx - 2
    } else {
        idx + nf - 2
    }
}

/// Step a wrapped fine-grid index up by two (toward `x + y`).
#[inline(always)]
fn up2(idx: usize, nf: usize) -> usize {
    let next = idx + 2;
    if next >= nf {
        next - nf
    } else {
        next
    }
}

/// Precomputed `y`-node tables shared by every kernel loop.
#[derive(Debug, Clone)]
pub struct YTable {
    /// Fine sample spacing `dx / (2 resolution)`.
    pub ds: f64,
    /// Fine samples per period, `2 * resolution * N`.
    pub nf: usize,
    /// Node weight `2 ds` (midpoint rule at odd offsets).
    pub weight: f64,
    /// Odd fine offsets `1, 3, .., nf/2 - 1`.
    pub offsets: Vec<usize>,
    /// `y_o = o ds`.
    pub ys: Vec<f64>,
    /// `sin(a) cos(a)` at `a = pi y / 2L`.
    pub(crate) sc: Vec<f64>,
    /// `sin^2(a)`.
    pub(crate) sin2: Vec<f64>,
    /// `pi / 2L`.
    pub(crate) scale: f64,
    pub(crate) two_l: f64,
}

impl YTable {
    pub fn build(grid: &SpectralGrid, qp: &QuadParams) -> Self {
        let r2 = 2 * qp.resolution;
        let nf = r2 * grid.num_points();
        let ds = grid.dx() / r2 as f64;
        let two_l = 2.0 * grid.half_width();
        let scale = std::f64::consts::PI / two_l;
        let offsets: Vec<usize> = (1..nf / 2).step_by(2).collect();
        let ys: Vec<f64> = offsets.iter().map(|&o| o as f64 * ds).collect();
        let sc: Vec<f64> = ys
            .iter()
            .map(|&y| {
                let a = scale * y;
                a.sin() * a.cos()
            })
            .collect();
        let sin2: Vec<f64> = ys
            .iter()
            .map(|&y| {
                let a = scale * y;
                a.sin() * a.sin()
            })
            .collect();
        Self {
            ds,
            nf,
            weight: 2.0 * ds,
            offsets,
            ys,
            sc,
            sin2,
            scale,
            two_l,
        }
    }

    /// Periodized Poisson kernel at node index `oi`, vertical offset `d`.
    #[inline(always)]
    pub(crate) fn k_analytic(&self, oi: usize, d: f64) -> f64 {
        let b = fast_sinh(self.scale * d);
        self.scale * self.sc[oi] / (self.sin2[oi] + b * b)
    }

    /// Truncated image sum of the Poisson kernel over `2M - 1` periods.
    #[inline(always)]
    pub(crate) fn k_window(&self, oi: usize, d: f64, periods: usize) -> f64 {
        let y = self.ys[oi];
        let d2 = d * d;
        let mut acc = y / (y * y + d2);
        for b in 1..periods {
            let yp = y + self.two_l * b as f64;
            let ym = y - self.two_l * b as f64;
            acc += yp / (yp * yp + d2) + ym / (ym * ym + d2);
        }
        acc
    }

    /// Windowed difference `K(y, c+z) - K(y, c)` with the factored numerator.
    #[inline(always)]
    fn k_window_diff(&self, oi: usize, c: f64, z: f64, periods: usize) -> f64 {
        let y = self.ys[oi];
        let num = -z * (2.0 * c + z);
        let d1 = (c + z) * (c + z);
        let d0 = c * c;
        let mut acc = y * num / ((y * y + d1) * (y * y + d0));
        for b in 1..periods {
            for yb in [y + self.two_l * b as f64, y - self.two_l * b as f64] {
                acc += yb * num / ((yb * yb + d1) * (yb * yb + d0));
            }
        }
        acc
    }
}

/// Per-pair constants for the analytic difference kernel
/// `K_per(y, c + z) - K_per(y, c)`, evaluated cancellation-free through
/// `sinh^2 b0 - sinh^2 b1 = -sinh(b0 + b1) sinh(b1 - b0)`.
struct AnalyticDiff {
    scale: f64,
    sinh_b0: f64,
    cosh_b0: f64,
    sinh_2b0: f64,
    cosh_2b0: f64,
    /// `sin^2 a + sinh^2 b0` per node.
    den0: Vec<f64>,
}

impl AnalyticDiff {
    fn new(table: &YTable, c: f64) -> Self {
        let b0 = table.scale * c;
        let (sb, cb) = fast_sinh_cosh(b0);
        let den0 = table.sin2.iter().map(|&s2| s2 + sb * sb).collect();
        Self {
            scale: table.scale,
            sinh_b0: sb,
            cosh_b0: cb,
            sinh_2b0: 2.0 * sb * cb,
            cosh_2b0: 1.0 + 2.0 * sb * sb,
            den0,
        }
    }

    #[inline(always)]
    fn eval(&self, table: &YTable, oi: usize, z: f64) -> f64 {
        let delta = self.scale * z;
        let (sd, cd) = fast_sinh_cosh(delta);
        // sinh(b0 + delta), sinh(2 b0 + delta)
        let s1 = self.sinh_b0 * cd + self.cosh_b0 * sd;
        let spd = self.sinh_2b0 * cd + self.cosh_2b0 * sd;
        -self.scale * table.sc[oi] * spd * sd
            / ((table.sin2[oi] + s1 * s1) * self.den0[oi])
    }
}

/// Interface state upsampled to the fine grid, with spectral derivatives.
#[derive(Debug, Clone)]
pub struct FineState {
    pub grid: SpectralGrid,
    /// Coarse-to-fine index stride (`2 * resolution`).
    pub stride: usize,
    pub nf: usize,
    /// Upsampled perturbations `g_k`.
    pub g: Vec<Vec<f64>>,
    /// Upsampled spectral derivatives `d/dx g_k`.
    pub dg: Vec<Vec<f64>>,
}

impl FineState {
    pub fn build(state: &InterfaceState, qp: &QuadParams, dealias: bool) -> Self {
        let grid = *state.grid();
        let stride = 2 * qp.resolution;
        let nf = stride * grid.num_points();
        let (g, dg): (Vec<_>, Vec<_>) = state
            .rows()
            .par_iter()
            .map(|row| {
                let mut hat = transform::forward_row(&grid, row);
                if dealias {
                    transform::dealias_row(&grid, &mut hat);
                }
                let dhat = transform::derivative_hat(&grid, &hat);
                let base = transform::inverse_row(&grid, &hat);
                let dbase = transform::inverse_row(&grid, &dhat);
                (
                    transform::upsample_row(&grid, &base, stride),
                    transform::upsample_row(&grid, &dbase, stride),
                )
            })
            .unzip();
        Self {
            grid,
            stride,
            nf,
            g,
            dg,
        }
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }
}

/// Combine paired node contributions `(pos, neg)` into the signed total.
#[inline(always)]
fn combine(pairing: bool, acc: &mut f64, accp: &mut f64, accm: &mut f64, p: f64, q: f64) {
    if pairing {
        *acc += p - q;
    } else {
        *accp += p;
        *accm += q;
    }
}

#[inline(always)]
fn settle(pairing: bool, acc: f64, accp: f64, accm: f64) -> f64 {
    if pairing {
        acc
    } else {
        accp - accm
    }
}

/// Full contour-dynamics right-hand side `d/dt f_k` on the coarse grid.
pub fn pv_rhs(
    state: &InterfaceState,
    cfg: &FluidConfig,
    qp: &QuadParams,
) -> Result<Vec<Vec<f64>>, QuadratureError> {
    if let Some(v) = state.ordering_violation(cfg) {
        return Err(QuadratureError::InterfaceOverlap {
            x: v.x,
            lower: v.k,
            upper: v.k + 1,
            a: cfg.depths()[v.k],
            b: cfg.depths()[v.k + 1],
        });
    }
    let fine = FineState::build(state, qp, false);
    Ok(pv_rhs_fine(&fine, cfg, qp))
}

/// RHS from a prepared fine state (ordering must already be verified).
pub fn pv_rhs_fine(fine: &FineState, cfg: &FluidConfig, qp: &QuadParams) -> Vec<Vec<f64>> {
    let table = YTable::build(&fine.grid, qp);
    let n = fine.n();
    let n_pts = fine.grid.num_points();
    let jumps = cfg.jumps();
    let depths = cfg.depths();
    let inv2pi = 1.0 / (2.0 * std::f64::consts::PI);
    let nf = fine.nf;
    let n_off = table.offsets.len();

    (0..n)
        .map(|k| {
            let gk_row = &fine.g[k];
            let dgk_row = &fine.dg[k];
            (0..n_pts)
                .into_par_iter()
                .map(|m| {
                    let fi = fine.stride * m;
                    let gk = gk_row[fi];
                    let dgk = dgk_row[fi];
                    let mut total = 0.0;
                    for j in 0..n {
                        let gap = depths[j] - depths[k];
                        let gj = fine.g[j].as_slice();
                        let dgj = fine.dg[j].as_slice();
                        let (mut acc, mut accp, mut accm) = (0.0, 0.0, 0.0);
                        let mut ip = down2(fi + 1, nf);
                        let mut im = (fi + 1) % nf;
                        match qp.tail {
                            TailTreatment::Analytic => {
                                for oi in 0..n_off {
                                    let kp = table.k_analytic(oi, gap + gj[ip] - gk);
                                    let km = table.k_analytic(oi, gap + gj[im] - gk);
                                    combine(
                                        qp.pv_pairing,
                                        &mut acc,
                                        &mut accp,
                                        &mut accm,
                                        (dgj[ip] - dgk) * kp,
                                        (dgj[im] - dgk) * km,
                                    );
                                    ip = down2(ip, nf);
                                    im = up2(im, nf);
                                }
                            }
                            TailTreatment::Window => {
                                for oi in 0..n_off {
                                    let kp = table.k_window(oi, gap + gj[ip] - gk, qp.periods);
                                    let km = table.k_window(oi, gap + gj[im] - gk, qp.periods);
                                    combine(
                                        qp.pv_pairing,
                                        &mut acc,
                                        &mut accp,
                                        &mut accm,
                                        (dgj[ip] - dgk) * kp,
                                        (dgj[im] - dgk) * km,
                                    );
                                    ip = down2(ip, nf);
                                    im = up2(im, nf);
                                }
                            }
                        }
                        total += jumps[j] * settle(qp.pv_pairing, acc, accp, accm);
                    }
                    -total * table.weight * inv2pi
                })
                .collect()
        })
        .collect()
}

/// Linear operator `T_{k,j}` applied to samples `v` by direct quadrature
/// (the physical-space counterpart of the Fourier multiplier).
pub fn t_apply(
    grid: &SpectralGrid,
    v: &[f64],
    k: usize,
    j: usize,
    cfg: &FluidConfig,
    qp: &QuadParams,
) -> Vec<f64> {
    let table = YTable::build(grid, qp);
    let stride = 2 * qp.resolution;
    let nf = stride * grid.num_points();
    let hat = transform::forward_row(grid, v);
    let dhat = transform::derivative_hat(grid, &hat);
    let dv = transform::upsample_row(grid, &transform::inverse_row(grid, &dhat), stride);
    let gap = cfg.depths()[k] - cfg.depths()[j];
    let jump = cfg.jump(j);
    let inv2pi = 1.0 / (2.0 * std::f64::consts::PI);
    // the kernel is x-independent: tabulate it once
    let ktab: Vec<f64> = (0..table.offsets.len())
        .map(|oi| match qp.tail {
            TailTreatment::Analytic => table.k_analytic(oi, gap),
            TailTreatment::Window => table.k_window(oi, gap, qp.periods),
        })
        .collect();
    (0..grid.num_points())
        .into_par_iter()
        .map(|m| {
            let fi = stride * m;
            let (mut acc, mut accp, mut accm) = (0.0, 0.0, 0.0);
            let mut ip = down2(fi + 1, nf);
            let mut im = (fi + 1) % nf;
            for &kv in &ktab {
                combine(
                    qp.pv_pairing,
                    &mut acc,
                    &mut accp,
                    &mut accm,
                    dv[ip] * kv,
                    dv[im] * kv,
                );
                ip = down2(ip, nf);
                im = up2(im, nf);
            }
            -jump * settle(qp.pv_pairing, acc, accp, accm) * table.weight * inv2pi
        })
        .collect()
}

/// Quadrature-mode nonlinear term `N_{k,j}` (including `k = j`) on the
/// coarse grid: the exact kernel-difference integrand
/// `(d/dx z) [K(y, c + z) - K(y, c)]` with `z = g_k(x) - g_j(x - y)`,
/// `c = d_k - d_j`, prefactor `(rho_{j-1} - rho_j)/2pi`.
pub fn nonlinear_pair(
    fine: &FineState,
    cfg: &FluidConfig,
    k: usize,
    j: usize,
    qp: &QuadParams,
) -> Vec<f64> {
    let table = YTable::build(&fine.grid, qp);
    let n_pts = fine.grid.num_points();
    let c = cfg.depths()[k] - cfg.depths()[j];
    let jump = cfg.jump(j);
    let inv2pi = 1.0 / (2.0 * std::f64::consts::PI);
    let diff = AnalyticDiff::new(&table, c);
    let gj = fine.g[j].as_slice();
    let dgj = fine.dg[j].as_slice();
    let gk = fine.g[k].as_slice();
    let dgk = fine.dg[k].as_slice();
    let nf = fine.nf;
    let n_off = table.offsets.len();

    (0..n_pts)
        .into_par_iter()
        .map(|m| {
            let fi = fine.stride * m;
            let gkm = gk[fi];
            let dgkm = dgk[fi];
            let (mut acc, mut accp, mut accm) = (0.0, 0.0, 0.0);
            let mut ip = down2(fi + 1, nf);
            let mut im = (fi + 1) % nf;
            match qp.tail {
                TailTreatment::Analytic => {
                    for oi in 0..n_off {
                        let kp = diff.eval(&table, oi, gkm - gj[ip]);
                        let km = diff.eval(&table, oi, gkm - gj[im]);
                        combine(
                            qp.pv_pairing,
                            &mut acc,
                            &mut accp,
                            &mut accm,
                            (dgkm - dgj[ip]) * kp,
                            (dgkm - dgj[im]) * km,
                        );
                        ip = down2(ip, nf);
                        im = up2(im, nf);
                    }
                }
                TailTreatment::Window => {
                    for oi in 0..n_off {
                        let kp = table.k_window_diff(oi, c, gkm - gj[ip], qp.periods);
                        let km = table.k_window_diff(oi, c, gkm - gj[im], qp.periods);
                        combine(
                            qp.pv_pairing,
                            &mut acc,
                            &mut accp,
                            &mut accm,
                            (dgkm - dgj[ip]) * kp,
                            (dgkm - dgj[im]) * km,
                        );
                        ip = down2(ip, nf);
                        im = up2(im, nf);
                    }
                }
            }
            jump * settle(qp.pv_pairing, acc, accp, accm) * table.weight * inv2pi
        })
        .collect()
}

/// Bulk velocity sample at a point off the interfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocitySample {
    pub x1: f64,
    pub x2: f64,
    pub u1: f64,
    pub u2: f64,
}

/// Which side of an interface a one-sided limit approaches from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// Velocity at `(x1, x2)` by principal-value quadrature; `x1` snaps to the
/// nearest fine node. Errors if `x2` is within `dx/2` of an interface at
/// that abscissa.
pub fn velocity_at(
    point: (f64, f64),
    fine: &FineState,
    cfg: &FluidConfig,
    qp: &QuadParams,
) -> Result<VelocitySample, QuadratureError> {
    let (x1, x2) = point;
    let table = YTable::build(&fine.grid, qp);
    let l = fine.grid.half_width();
    let p = (((x1 + l) / table.ds).round() as isize).rem_euclid(fine.nf as isize) as usize;
    for k in 0..fine.n() {
        let fk = cfg.depths()[k] + fine.g[k][p];
        if (x2 - fk).abs() <= 0.5 * fine.grid.dx() {
            return Err(QuadratureError::OnInterface { x1, x2, k });
        }
    }
    Ok(velocity_kernel(p, x2, fine, cfg, qp, &table, x1))
}

fn velocity_kernel(
    p: usize,
    x2: f64,
    fine: &FineState,
    cfg: &FluidConfig,
    qp: &QuadParams,
    table: &YTable,
    x1: f64,
) -> VelocitySample {
    let inv2pi = 1.0 / (2.0 * std::f64::consts::PI);
    let nf = fine.nf;
    let mut u1 = 0.0;
    let mut u2 = 0.0;
    for j in 0..fine.n() {
        let dj = cfg.depths()[j];
        let gj = fine.g[j].as_slice();
        let dgj = fine.dg[j].as_slice();
        let (mut a1, mut a1p, mut a1m) = (0.0, 0.0, 0.0);
        let (mut a2, mut a2p, mut a2m) = (0.0, 0.0, 0.0);
        let mut ip = down2(p + 1, nf);
        let mut im = (p + 1) % nf;
        for oi in 0..table.offsets.len() {
            let kp = match qp.tail {
                TailTreatment::Analytic => table.k_analytic(oi, x2 - dj - gj[ip]),
                TailTreatment::Window => table.k_window(oi, x2 - dj - gj[ip], qp.periods),
            };
            let km = match qp.tail {
                TailTreatment::Analytic => table.k_analytic(oi, x2 - dj - gj[im]),
                TailTreatment::Window => table.k_window(oi, x2 - dj - gj[im], qp.periods),
            };
            combine(qp.pv_pairing, &mut a1, &mut a1p, &mut a1m, kp, km);
            combine(
                qp.pv_pairing,
                &mut a2,
                &mut a2p,
                &mut a2m,
                dgj[ip] * kp,
                dgj[im] * km,
            );
            ip = down2(ip, nf);
            im = up2(im, nf);
        }
        u1 -= cfg.jump(j) * settle(qp.pv_pairing, a1, a1p, a1m) * table.weight * inv2pi;
        u2 -= cfg.jump(j) * settle(qp.pv_pairing, a2, a2p, a2m) * table.weight * inv2pi;
    }
    VelocitySample { x1, x2, u1, u2 }
}

/// One-sided velocity limit on interface `k` at coarse node `m`: the
/// principal-value term plus the tangential jump term with sign `+` above,
/// `-` below.
pub fn one_sided_velocity(
    m: usize,
    k: usize,
    side: Side,
    fine: &FineState,
    cfg: &FluidConfig,
    qp: &QuadParams,
) -> VelocitySample {
    let table = YTable::build(&fine.grid, qp);
    let p = fine.stride * m;
    let x2 = cfg.depths()[k] + fine.g[k][p];
    let x1 = fine.grid.x(m);
    let mut v = velocity_kernel(p, x2, fine, cfg, qp, &table, x1);
    let slope = fine.dg[k][p];
    let norm = (1.0 + slope * slope).sqrt();
    let tang = 0.5 * cfg.jump(k) * slope / norm;
    let s = match side {
        Side::Above => 1.0,
        Side::Below => -1.0,
    };
    v.u1 += s * tang;
    v.u2 += s * tang * slope;
    v
}

/// Residual of the kinematic condition
/// `u(x, f_k(x)) . (-f_k', 1) - d/dt f_k` on every interface node. Vanishes
/// identically when velocity and RHS share one quadrature.
pub fn normal_velocity_residual(
    state: &InterfaceState,
    cfg: &FluidConfig,
    qp: &QuadParams,
) -> Result<Vec<Vec<f64>>, QuadratureError> {
    if let Some(v) = state.ordering_violation(cfg) {
        return Err(QuadratureError::InterfaceOverlap {
            x: v.x,
            lower: v.k,
            upper: v.k + 1,
            a: cfg.depths()[v.k],
            b: cfg.depths()[v.k + 1],
        });
    }
    let fine = FineState::build(state, qp, false);
    let rhs = pv_rhs_fine(&fine, cfg, qp);
    let n_pts = state.grid().num_points();
    let out = (0..fine.n())
        .map(|k| {
            (0..n_pts)
                .map(|m| {
                    // tangential jump term is normal-free; use either side
                    let v = one_sided_velocity(m, k, Side::Above, &fine, cfg, qp);
                    let slope = fine.dg[k][fine.stride * m];
                    let tang = 0.5 * cfg.jump(k) * slope / (1.0 + slope * slope).sqrt();
                    let u1 = v.u1 - tang;
                    let u2 = v.u2 - tang * slope;
                    u2 - slope * u1 - rhs[k][m]
                })
                .collect()
        })
        .collect();
    Ok(out)
}
