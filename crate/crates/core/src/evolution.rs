//! Time advancement of `d/dt g_hat = -|xi| A(xi) g_hat + N_hat` by a
//! second-order two-stage exponential integrator: the linear flow is applied
//! exactly per mode through the cached eigendecompositions, the nonlinearity
//! is evaluated in physical space at the stage points.

use num_complex::Complex64;

use crate::config::FluidConfig;
use crate::diagnostics::{DiagnosticsEngine, DiagnosticsSnapshot};
use crate::error::EvolveError;
use crate::field::{InterfaceState, SpectrumField};
use crate::quadrature::{FineState, QuadParams};
use crate::series::{self, NonlinearMode};
use crate::spectrum::ModeCache;
use crate::transform;

/// Geometric sampling schedule: `t = 0`, then `t_first * ratio^i`, capped at
/// the final time (always included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSchedule {
    pub t_first: f64,
    /// Samples per decade of time.
    pub per_decade: usize,
}

impl Default for SampleSchedule {
    fn default() -> Self {
        Self {
            t_first: 1.0,
            per_decade: 8,
        }
    }
}

impl SampleSchedule {
    /// All sample times in `(t_start, t_final]`, plus `t_final`.
    pub fn times(&self, t_start: f64, t_final: f64) -> Vec<f64> {
        let ratio = 10f64.powf(1.0 / self.per_decade as f64);
        let mut out = Vec::new();
        let mut t = self.t_first;
        while t < t_final {
            if t > t_start {
                out.push(t);
            }
            t *= ratio;
        }
        if t_final > t_start {
            out.push(t_final);
        }
        out
    }
}

/// Stepper controls.
#[derive(Debug, Clone, PartialEq)]
pub struct StepperConfig {
    pub dt_max: f64,
    pub dt_min: f64,
    /// Local tolerance driving `dt = clamp(tol / ||N_hat||_inf, dt_min, dt_max)`.
    pub tol: f64,
    pub nonlinear: NonlinearMode,
    /// Zero the top third of the spectrum of the nonlinear inputs.
    pub dealias: bool,
    /// Skip the nonlinear term entirely (exact linear flow).
    pub linear_only: bool,
    pub schedule: SampleSchedule,
    pub quad: QuadParams,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            dt_max: 0.5,
            dt_min: 1e-10,
            tol: 1e-4,
            nonlinear: NonlinearMode::Quadrature,
            dealias: true,
            linear_only: false,
            schedule: SampleSchedule::default(),
            quad: QuadParams::default(),
        }
    }
}

/// Events recorded along a run.
#[derive(Debug, Clone, PartialEq)]
pub enum RunEvent {
    /// Interfaces touched or crossed (recorded, not fatal).
    OrderingLost { t: f64 },
    /// State became non-finite; the run stopped here.
    Aborted { t: f64 },
}

/// Time series of diagnostics plus run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub snapshots: Vec<DiagnosticsSnapshot>,
    pub events: Vec<RunEvent>,
    /// Sum over steps of the second-stage correction magnitude; a
    /// conservative local-error proxy.
    pub local_error_estimate: f64,
    pub steps: usize,
    /// Smallness of the initial data: `sum_j (||g_j||_{L2} + ||g_j||_0 + ||g_j||_1)`.
    pub initial_smallness: f64,
    pub final_state: InterfaceState,
}

/// One ETD2 step of size `dt` from `state`; `cache` must match the grid.
pub fn step(
    state: &InterfaceState,
    cfg: &FluidConfig,
    cache: &ModeCache,
    sc: &StepperConfig,
    dt: f64,
) -> Result<InterfaceState, EvolveError> {
    let hat = transform::forward(state).map_err(|_| EvolveError::NonFiniteState {
        t: state.t(),
        last_valid: state.t(),
    })?;
    let n_hat0 = nonlinear_hat(state, cfg, sc)?;
    let (out, _) = step_from_spectra(&hat, n_hat0.as_ref(), state.t(), cfg, cache, sc, dt)?;
    Ok(out)
}

/// Advance spectra by one step; returns the new state and the correction
/// magnitude (local-error proxy). `n_hat0` is `None` for linear-only flow.
fn step_from_spectra(
    hat: &SpectrumField,
    n_hat0: Option<&SpectrumField>,
    t: f64,
    cfg: &FluidConfig,
    cache: &ModeCache,
    sc: &StepperConfig,
    dt: f64,
) -> Result<(InterfaceState, f64), EvolveError> {
    let grid = *hat.grid();
    let n = hat.n();
    let n_pts = grid.num_points();

    // stage one: exact linear flow plus phi1 source
    let mut stage = SpectrumField::zero(grid, n);
    apply_etd_stage(hat, n_hat0, cache, dt, &mut stage, EtdStage::Predictor);

    let Some(n_hat0) = n_hat0 else {
        // linear-only: the predictor is the exact solution
        let mut out = transform::inverse(&stage, t + dt);
        out.set_t(t + dt);
        return finish_step(out, t, 0.0);
    };

    let mut predictor = transform::inverse(&stage, t + dt);
    predictor.set_t(t + dt);
    if !predictor.is_finite() {
        return Err(EvolveError::NonFiniteState {
            t: t + dt,
            last_valid: t,
        });
    }
    let n_hat1 = nonlinear_hat(&predictor, cfg, sc)?.expect("nonlinear stage");

    // corrector: dt * phi2(L dt) (N1 - N0)
    let mut correction_mag: f64 = 0.0;
    let mut corrected = stage;
    for m in 0..n_pts {
        let dec = cache.at_index(&grid, m);
        let mu: Vec<f64> = dec
            .lambdas
            .iter()
            .map(|l| -grid.xi(m).abs() * l * dt)
            .collect();
        let mut diff = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            diff[i] = n_hat1.row(i)[m] - n_hat0.row(i)[m];
        }
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for jj in 0..n {
                acc += dec.p_inv[(i, jj)] * diff[jj];
            }
            w[i] = acc * phi2(mu[i]);
        }
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for jj in 0..n {
                acc += dec.p[(i, jj)] * w[jj];
            }
            let delta = dt * acc;
            correction_mag = correction_mag.max(delta.norm());
            corrected.rows_mut()[i][m] += delta;
        }
    }
    let mut out = transform::inverse(&corrected, t + dt);
    out.set_t(t + dt);
    finish_step(out, t, correction_mag)
}

fn finish_step(
    out: InterfaceState,
    t_before: f64,
    correction: f64,
) -> Result<(InterfaceState, f64), EvolveError> {
    if !out.is_finite() {
        return Err(EvolveError::NonFiniteState {
            t: out.t(),
            last_valid: t_before,
        });
    }
    Ok((out, correction))
}

enum EtdStage {
    Predictor,
}

/// `stage = e^{L dt} g_hat + dt phi1(L dt) N_hat0` per mode.
fn apply_etd_stage(
    hat: &SpectrumField,
    n_hat0: Option<&SpectrumField>,
    cache: &ModeCache,
    dt: f64,
    stage: &mut SpectrumField,
    _which: EtdStage,
) {
    let grid = *hat.grid();
    let n = hat.n();
    for m in 0..grid.num_points() {
        let dec = cache.at_index(&grid, m);
        let axi = grid.xi(m).abs();
        // w = P_inv g ; v = P_inv N0
        for i in 0..n {
            let mut wg = Complex64::new(0.0, 0.0);
            let mut wn = Complex64::new(0.0, 0.0);
            for jj in 0..n {
                wg += dec.p_inv[(i, jj)] * hat.row(jj)[m];
                if let Some(nh) = n_hat0 {
                    wn += dec.p_inv[(i, jj)] * nh.row(jj)[m];
                }
            }
            let mu = -axi * dec.lambdas[i] * dt;
            let val = wg * mu.exp() + wn * (dt * phi1(mu));
            // stash in an intermediate row; unpack with P below
            stage.rows_mut()[i][m] = val;
        }
        // multiply by P in place (small n: gather then scatter)
        let mut tmp = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for jj in 0..n {
                acc += dec.p[(i, jj)] * stage.row(jj)[m];
            }
            tmp[i] = acc;
        }
        for i in 0..n {
            stage.rows_mut()[i][m] = tmp[i];
        }
    }
}

/// `phi1(z) = (e^z - 1)/z`, `phi1(0) = 1`.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-300 {
        1.0
    } else {
        z.exp_m1() / z
    }
}

/// `phi2(z) = (e^z - 1 - z)/z^2`, `phi2(0) = 1/2`.
pub fn phi2(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)))
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

/// Nonlinear term of every row in Fourier space; `None` when linear-only.
fn nonlinear_hat(
    state: &InterfaceState,
    cfg: &FluidConfig,
    sc: &StepperConfig,
) -> Result<Option<SpectrumField>, EvolveError> {
    if sc.linear_only {
        return Ok(None);
    }
    let grid = *state.grid();
    let n = state.n();
    let fine = FineState::build(state, &sc.quad, sc.dealias);
    let mut rows = vec![vec![0.0; grid.num_points()]; n];
    for k in 0..n {
        for j in 0..n {
            let term = series::n_pair(&fine, cfg, k, j, sc.nonlinear, &sc.quad)?;
            for (dst, v) in rows[k].iter_mut().zip(&term) {
                *dst += v;
            }
        }
    }
    let hats = rows
        .into_iter()
        .map(|r| transform::forward_row(&grid, &r))
        .collect();
    Ok(Some(SpectrumField::from_rows(grid, hats)))
}

/// Integrate from `initial` to `t_final`, sampling diagnostics on the
/// geometric schedule (and at the start). Adaptive step size
/// `dt = clamp(tol / ||N_hat||_inf, dt_min, dt_max)`, clipped to land
/// exactly on sample times.
pub fn run(
    initial: &InterfaceState,
    cfg: &FluidConfig,
    sc: &StepperConfig,
    t_final: f64,
    engine: &DiagnosticsEngine,
) -> Result<TrajectoryRecord, EvolveError> {
    let map_err = |e: crate::error::ModelError, t: f64| {
        let _ = e;
        EvolveError::NonFiniteState { t, last_valid: t }
    };
    let hat0 = transform::forward(initial).map_err(|e| map_err(e, initial.t()))?;
    let initial_smallness: f64 = (0..initial.n())
        .map(|k| {
            crate::diagnostics::l2_norm(initial, k)
                + crate::diagnostics::wiener_norm(&hat0, k, 0.0)
                + crate::diagnostics::wiener_norm(&hat0, k, 1.0)
        })
        .sum();

    let mut state = initial.clone();
    let mut snapshots = Vec::new();
    let mut events = Vec::new();
    let mut local_error = 0.0;
    let mut steps = 0usize;
    let mut ordering_lost = false;

    snapshots.push(
        engine
            .snapshot(&state, cfg)
            .map_err(|e| map_err(e, state.t()))?,
    );

    let sample_times = sc.schedule.times(state.t(), t_final);
    for &target in &sample_times {
        while state.t() < target {
            let hat = transform::forward(&state).map_err(|e| map_err(e, state.t()))?;
            let n_hat0 = nonlinear_hat(&state, cfg, sc)?;
            let est = n_hat0
                .as_ref()
                .map(|nh| {
                    nh.rows()
                        .iter()
                        .flat_map(|r| r.iter())
                        .fold(0.0f64, |a, c| a.max(c.norm()))
                })
                .unwrap_or(0.0);
            let mut dt = if est > 0.0 {
                (sc.tol / est).clamp(sc.dt_min, sc.dt_max)
            } else {
                sc.dt_max
            };
            if state.t() + dt > target {
                dt = target - state.t();
            }
            let (next, corr) =
                step_from_spectra(&hat, n_hat0.as_ref(), state.t(), cfg, cache_of(engine), sc, dt)?;
            local_error += corr;
            steps += 1;
            state = next;
            if !ordering_lost {
                if let Some(v) = state.ordering_violation(cfg) {
                    let _ = v;
                    ordering_lost = true;
                    events.push(RunEvent::OrderingLost { t: state.t() });
                }
            }
        }
        snapshots.push(
            engine
                .snapshot(&state, cfg)
                .map_err(|e| map_err(e, state.t()))?,
        );
    }

    Ok(TrajectoryRecord {
        snapshots,
        events,
        local_error_estimate: local_error,
        steps,
        initial_smallness,
        final_state: state,
    })
}

fn cache_of(engine: &DiagnosticsEngine) -> &ModeCache {
    &engine.cache
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpectralGrid;
    use crate::profiles::{initial_profile, ProfileKind, RowWeights};
    use crate::spectrum::build_tilde_lambda;

    fn engine(cfg: &FluidConfig, grid: &SpectralGrid, s_list: Vec<f64>) -> DiagnosticsEngine {
        DiagnosticsEngine::new(
            ModeCache::build(cfg, grid).unwrap(),
            build_tilde_lambda(cfg, grid).unwrap(),
            s_list,
        )
    }

    #[test]
    fn phi_functions_reference_values() {
        assert!((phi1(0.0) - 1.0).abs() < 1e-15);
        assert!((phi2(0.0) - 0.5).abs() < 1e-15);
        let z = -0.3;
        assert!((phi1(z) - (z.exp() - 1.0) / z).abs() < 1e-15);
        assert!((phi2(z) - (z.exp() - 1.0 - z) / (z * z)).abs() < 1e-14);
        // series branch continuity
        let a = phi2(1e-3 - 1e-12);
        let b = phi2(1e-3 + 1e-12);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn linear_step_halves_compose() {
        let grid = SpectralGrid::new(15.0, 128).unwrap();
        let cfg = FluidConfig::new(vec![2.0, 1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let cache = ModeCache::build(&cfg, &grid).unwrap();
        let sc = StepperConfig {
            linear_only: true,
            ..Default::default()
        };
        let st = initial_profile(
            &ProfileKind::GaussianBumps { eps: 1e-2, sigma: 1.0 },
            &RowWeights::Alternating,
            grid,
            &cfg,
        )
        .unwrap();
        let full = step(&st, &cfg, &cache, &sc, 0.5).unwrap();
        let half = step(&st, &cfg, &cache, &sc, 0.25).unwrap();
        let two = step(&half, &cfg, &cache, &sc, 0.25).unwrap();
        let scale = full
            .rows()
            .iter()
            .flatten()
            .fold(0.0f64, |a, &v| a.max(v.abs()));
        for k in 0..2 {
            for m in 0..128 {
                assert!((full.row(k)[m] - two.row(k)[m]).abs() <= 1e-12 * scale.max(1e-30));
            }
        }
    }

    #[test]
    fn single_mode_classical_decay() {
        // n = 1, one cosine mode: exact decay e^{-q |xi| dt}
        let grid = SpectralGrid::new(15.0, 128).unwrap();
        let cfg = FluidConfig::new(vec![3.0, 1.0], vec![0.0]).unwrap();
        let cache = ModeCache::build(&cfg, &grid).unwrap();
        let sc = StepperConfig::default();
        let eps = 1e-4;
        let st = initial_profile(
            &ProfileKind::SingleMode { row: 0, mode: 1, eps },
            &RowWeights::Uniform,
            grid,
            &cfg,
        )
        .unwrap();
        let dt = 1e-2;
        let out = step(&st, &cfg, &cache, &sc, dt).unwrap();
        let xi1 = grid.dxi();
        let q = 1.0; // (rho0 - rho1)/2
        let factor = (-q * xi1 * dt).exp();
        let mut worst = 0.0f64;
        for m in 0..128 {
            let expect = factor * st.row(0)[m];
            worst = worst.max((out.row(0)[m] - expect).abs());
        }
        assert!(worst <= 1e-6 * eps, "worst {worst}");
    }

    #[test]
    fn stepper_is_second_order() {
        // Richardson self-convergence on a smooth two-interface state
        let grid = SpectralGrid::new(12.0, 64).unwrap();
        let cfg = FluidConfig::new(vec![3.0, 1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let cache = ModeCache::build(&cfg, &grid).unwrap();
        let sc = StepperConfig {
            quad: QuadParams {
                periods: 2,
                ..Default::default()
            },
            ..Default::default()
        };
        let st = initial_profile(
            &ProfileKind::GaussianBumps { eps: 0.05, sigma: 1.5 },
            &RowWeights::Alternating,
            grid,
            &cfg,
        )
        .unwrap();
        // global error at fixed horizon: dt vs dt/2 self-difference ~ C dt^2
        let t_final = 1.6;
        let integrate = |dt: f64| {
            let mut s = st.clone();
            let steps = (t_final / dt).round() as usize;
            for _ in 0..steps {
                s = step(&s, &cfg, &cache, &sc, dt).unwrap();
            }
            s
        };
        let err_at = |dt: f64| {
            let coarse = integrate(dt);
            let fine = integrate(dt / 2.0);
            let mut worst = 0.0f64;
            for k in 0..2 {
                for m in 0..64 {
                    worst = worst.max((coarse.row(k)[m] - fine.row(k)[m]).abs());
                }
            }
            worst
        };
        let e1 = err_at(0.4);
        let e2 = err_at(0.2);
        let e3 = err_at(0.1);
        let p12 = (e1 / e2).log2();
        let p23 = (e2 / e3).log2();
        assert!(
            (p12 - 2.0).abs() <= 0.2 || (p23 - 2.0).abs() <= 0.2,
            "orders {p12:.2}, {p23:.2} (errors {e1:.2e}, {e2:.2e}, {e3:.2e})"
        );
    }

    #[test]
    fn zero_data_is_fixed_point() {
        let grid = SpectralGrid::new(12.0, 64).unwrap();
        let cfg = FluidConfig::new(vec![2.0, 1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let eng = engine(&cfg, &grid, vec![0.0]);
        let sc = StepperConfig {
            quad: QuadParams {
                periods: 2,
                ..Default::default()
            },
            ..Default::default()
        };
        let zero = InterfaceState::zero(grid, 2);
        let record = run(&zero, &cfg, &sc, 10.0, &eng).unwrap();
        for snap in &record.snapshots {
            assert!(snap.wiener_sums[0] <= 1e-14);
        }
    }

    #[test]
    fn rerun_is_bit_identical() {
        let grid = SpectralGrid::new(15.0, 64).unwrap();
        let cfg = FluidConfig::new(vec![2.0, 1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let eng = engine(&cfg, &grid, vec![0.0, 1.0]);
        let sc = StepperConfig {
            quad: QuadParams {
                periods: 2,
                ..Default::default()
            },
            dt_max: 0.25,
            ..Default::default()
        };
        let st = initial_profile(
            &ProfileKind::RandomSmall { eps: 1e-3, seed: 17, band: (0.2, 2.0) },
            &RowWeights::Alternating,
            grid,
            &cfg,
        )
        .unwrap();
        let a = run(&st, &cfg, &sc, 5.0, &eng).unwrap();
        let b = run(&st, &cfg, &sc, 5.0, &eng).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mass_is_conserved() {
        let grid = SpectralGrid::new(15.0, 128).unwrap();
        let cfg = FluidConfig::new(vec![2.0, 1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let eng = engine(&cfg, &grid, vec![0.0]);
        let sc = StepperConfig {
            quad: QuadParams {
                periods: 2,
                ..Default::default()
            },
            ..Default::default()
        };
        let st = initial_profile(
            &ProfileKind::GaussianBumps { eps: 1e-3, sigma: 1.0 },
            &RowWeights::Alternating,
            grid,
            &cfg,
        )
        .unwrap();
        let m0: Vec<f64> = (0..2).map(|k| crate::diagnostics::mass(&st, k)).collect();
        let record = run(&st, &cfg, &sc, 50.0, &eng).unwrap();
        for k in 0..2 {
            let mf = record.snapshots.last().unwrap().mass_per_k[k];
            let scale = m0[k].abs().max(1e-3);
            assert!(
                (mf - m0[k]).abs() <= 1e-6 * scale,
                "row {k}: {} -> {}",
                m0[k],
                mf
            );
        }
    }

    #[test]
    fn nonfinite_state_detected() {
        let grid = SpectralGrid::new(12.0, 64).unwrap();
        let cfg = FluidConfig::new(vec![2.0, 1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let cache = ModeCache::build(&cfg, &grid).unwrap();
        let sc = StepperConfig {
            quad: QuadParams {
                periods: 1,
                ..Default::default()
            },
            ..Default::default()
        };
        // monstrous amplitude overflows the cubic nonlinearity
        let rows: Vec<Vec<f64>> = (0..2)
            .map(|k| {
                (0..64)
                    .map(|m| 1e155 * ((1.0 + k as f64) * grid.x(m)).sin())
                    .collect()
            })
            .collect();
        let st = InterfaceState::new(grid, 0.0, rows).unwrap();
        let err = step(&st, &cfg, &cache, &sc, 1.0);
        assert!(matches!(err, Err(EvolveError::NonFiniteState { .. })));
    }

    #[test]
    fn ordering_loss_recorded_not_fatal() {
        let grid = SpectralGrid::new(12.0, 64).unwrap();
        let cfg = FluidConfig::new(vec![2.0, 1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let eng = engine(&cfg, &grid, vec![0.0]);
        let sc = StepperConfig {
            quad: QuadParams {
                periods: 1,
                ..Default::default()
            },
            dt_max: 0.1,
            linear_only: true,
            ..Default::default()
        };
        // amplitude larger than the gap: interfaces already cross at t = 0
        let st = initial_profile(
            &ProfileKind::GaussianBumps { eps: 0.8, sigma: 1.0 },
            &RowWeights::Explicit(vec![1.0, -1.0]),
            grid,
            &cfg,
        )
        .unwrap();
        let record = run(&st, &cfg, &sc, 1.0, &eng).unwrap();
        assert!(record
            .events
            .iter()
            .any(|e| matches!(e, RunEvent::OrderingLost { .. })));
    }
}
