//! Error types shared across the crate.

use thiserror::Error;

/// Configuration and input validation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// Density or depth ordering violated at the named index pair.
    #[error("ordering violation: {field} must be strictly {expected} but entry {first} = {a} vs entry {second} = {b}")]
    OrderingViolation {
        field: &'static str,
        expected: &'static str,
        first: usize,
        second: usize,
        a: f64,
        b: f64,
    },
    #[error("need at least one interface (n >= 1), got densities of length {densities}")]
    TooFewLayers { densities: usize },
    #[error("densities must have exactly one more entry than depths ({densities} vs {depths})")]
    LayerCountMismatch { densities: usize, depths: usize },
    #[error("grid size must be even and at least 8, got {0}")]
    BadGridSize(usize),
    #[error("grid half-width must be positive, got {0}")]
    BadHalfWidth(f64),
    #[error("non-finite input sample at row {row}, index {index}")]
    NonFiniteInput { row: usize, index: usize },
    #[error("spectral band [{lo}, {hi}] exceeds the grid's resolvable range (0, {nyquist}]")]
    BandOutOfGrid { lo: f64, hi: f64, nyquist: f64 },
    #[error("power-law exponent beta must lie in (0, 1/2), got {0}")]
    BetaOutOfRange(f64),
    #[error("profile row {row} out of range for n = {n}")]
    RowOutOfRange { row: usize, n: usize },
    #[error("row weight list has length {got}, expected {expected}")]
    BadRowWeights { got: usize, expected: usize },
}

/// Failures in the linear multiplier analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("symmetric eigensolver failed to converge at xi = {xi}")]
    EigFailure { xi: f64 },
    #[error("extrapolated low-frequency slope c_{k} = {value} +/- {error} is not positive")]
    NonPositiveSlope { k: usize, value: f64, error: f64 },
    #[error("min lambda_1 over the positive grid range is {0} <= 0")]
    NonPositiveFloor(f64),
}

/// Failures in quadrature-based evaluations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("interfaces overlap at x = {x}: interface {lower} reaches {a} >= interface {upper} at {b}")]
    InterfaceOverlap {
        x: f64,
        lower: usize,
        upper: usize,
        a: f64,
        b: f64,
    },
    #[error("probe point (x1 = {x1}, x2 = {x2}) is within dx/2 of interface {k}; use the one-sided evaluation")]
    OnInterface { x1: f64, x2: f64, k: usize },
}

/// Failures in the nonlinear series machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series amplitude guard exceeded: max perturbation {measured} > allowed {allowed}")]
    GuardExceeded { measured: f64, allowed: f64 },
    #[error("argument {x} outside the series' radius of convergence {radius}")]
    OutOfRadius { x: f64, radius: f64 },
}

/// Failures while advancing the coupled system in time.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolveError {
    #[error("state became non-finite at t = {t}; last valid time {last_valid}")]
    NonFiniteState { t: f64, last_valid: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Failures in diagnostics and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("decay window [{t0}, {t1}] holds only {got} samples, need at least {need}")]
    InsufficientSamples { t0: f64, t1: f64, got: usize, need: usize },
    #[error("norm sample at t = {t} is {value}, log fit needs positive norms")]
    NonPositiveNorm { t: f64, value: f64 },
}
