//! Numerical laboratory for gravity-driven interface dynamics between
//! stably stratified fluid layers in a porous medium.
//!
//! The library covers:
//! - the physical configuration, periodic discretization, and the
//!   `dx`-scaled transform convention ([`config`], [`grid`], [`field`],
//!   [`transform`], [`profiles`]);
//! - the linearized multiplier family `-|xi| A(xi)`, its spectrum, and the
//!   exact linear semigroup ([`spectrum`]);
//! - principal-value contour quadrature of the full right-hand side and
//!   velocity fields, with exact or windowed torus periodization
//!   ([`quadrature`]);
//! - the nonlinear terms by dual series/quadrature routes with majorant
//!   reports ([`series`]);
//! - an exponential two-stage integrator and trajectory records
//!   ([`evolution`]);
//! - Wiener/weighted norms, diagonal coordinates, the energy monitor, and
//!   decay-exponent fitting ([`diagnostics`]);
//! - the named verification checks behind `verify` and the acceptance suite
//!   ([`checks`]).

pub mod checks;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod field;
pub mod grid;
pub mod profiles;
pub mod quadrature;
pub mod series;
pub mod spectrum;
pub mod transform;

pub use config::FluidConfig;
pub use field::{InterfaceState, SpectrumField};
pub use grid::SpectralGrid;
