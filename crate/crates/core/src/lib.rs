//! Continuous nondemolition position measurement of a one-dimensional
//! quantum particle under a linear force `F = hbar kappa x + m g`.
//!
//! The library provides four engines over a shared model layer:
//!
//! - [`riccati`]: the deterministic complex-width flow of Gaussian posterior
//!   packets, its closed form, dispersions, and long-time asymptotics;
//! - [`filter`]: the finite-dimensional Gaussian posterior filter driven by
//!   measurement records;
//! - [`spde`]: direct grid integration of the nonlinear posterior wave
//!   equation with synthesized records;
//! - [`prior`]: the unconditional (record-averaged) moment ODEs.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`]
//! (implemented for `f32` and `f64`); the crate root exports `f64` aliases
//! for the common concrete case.

pub mod error;
pub mod fft;
pub mod filter;
pub mod model;
pub mod noise;
pub mod prior;
pub mod report;
pub mod riccati;
pub mod scalar;
pub mod series;
pub mod spde;

pub use error::{Error, Result};
pub use scalar::{cplx, Cplx, Real};

/// `f64` model parameters.
pub type Params = model::ModelParams<f64>;
/// `f64` spatial grid.
pub type Grid = model::GridSpec<f64>;
/// `f64` discretized wavefunction.
pub type State = model::GridState<f64>;
/// `f64` quadrature moments.
pub type GridMoments = model::Moments<f64>;
/// `f64` complex number.
pub type C64 = Cplx<f64>;
/// `f64` Gaussian filter state.
pub type FilterState = filter::GaussianState<f64>;
/// `f64` unconditional moments.
pub type Prior = prior::PriorMoments<f64>;
/// `f64` trajectory series.
pub type Series = series::TrajectorySeries<f64>;
/// `f64` measurement record.
pub type Record = series::MeasurementRecord<f64>;
/// `f64` grid-run configuration.
pub type GridRunConfig = spde::SpdeConfig<f64>;
