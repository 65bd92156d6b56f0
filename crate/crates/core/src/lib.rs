// SPDX-License-Identifier: Apache-2.0

//! Dynamical Gaussian quantum steering between the mechanical modes of two
//! optomechanical cavities fed by two-mode squeezed light.
//!
//! The crate is organised bottom-up:
//!
//! * [`gaussian`] evaluates steering, steering asymmetry and Rényi-2
//!   entanglement of a two-mode covariance matrix, and checks physicality.
//! * [`model`] maps laboratory parameters (cavity, mirror, laser, bath) to the
//!   six dimensionless inputs of the reduced mirror dynamics.
//! * [`dynamics`] evolves the mirror covariance matrix, both in closed form and
//!   with an independent Runge–Kutta integrator of the Lyapunov equation.
//! * [`scenario`] sweeps the measures over scaled time, finds sudden-birth
//!   times and steering windows, and reproduces nine preset figure panels.
//!
//! Conventions: quadratures are `q = (b + b†)/√2`, `p = i(b† − b)/√2`, so the
//! vacuum variance is 1/2. Time is the dimensionless scaled time `γt`.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod exec;
pub mod gaussian;
pub mod model;
pub mod scenario;

pub use dynamics::{
    build_drift_diffusion, covariance_closed_form, covariance_ode, integrate_lyapunov,
    stationary_covariance, CovarianceTrajectory, DriftDiffusion, OdeOptions,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use gaussian::{
    classify_steering, renyi2_entanglement, steering_a_to_b, steering_asymmetry, steering_b_to_a,
    validate_cm, CmValidity, SteeringClass, TwoModeCovariance, DEFAULT_EPSILON,
};
pub use model::{
    cooperativity, enhanced_coupling, mean_fields, reduce, regime_check, thermal_occupation,
    Cavity, MeanFields, Mirror, Mode, PhysicalParams, ReducedParams, RegimeReport,
};
pub use scenario::{
    detect_birth, figure_panel, steering_windows, sweep_time, Measure, MeasureSample, Panel,
    SteeringWindow, TimeGrid,
};
