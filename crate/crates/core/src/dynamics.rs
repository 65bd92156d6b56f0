// SPDX-License-Identifier: Apache-2.0

//! Time evolution of the mirror covariance matrix.
//!
//! The drift is `S = diag(−Γ₁/2, −Γ₁/2, −Γ₂/2, −Γ₂/2)` and the covariance
//! obeys `dV/dt = SV + VSᵀ + D`. [`covariance_closed_form`] evaluates the
//! analytic solution from `V(0) = I₄`; [`covariance_ode`] integrates the same
//! equation with classical RK4 on the full 4×4 matrix and serves as an
//! independent check of the closed form.
//!
//! Every time argument is the dimensionless `γt`.

use nalgebra::Matrix4;

use crate::error::{invalid, Error, Result};
use crate::gaussian::{validate_cm, TwoModeCovariance};
use crate::model::{Mode, ReducedParams};

/// Drift and diffusion of the linear mirror dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftDiffusion {
    pub drift: Matrix4<f64>,
    pub diffusion: Matrix4<f64>,
}

impl DriftDiffusion {
    /// Both matrices divided by `γ`, i.e. expressed per unit of `γt`.
    pub fn per_gamma(&self, gamma: f64) -> Self {
        Self {
            drift: self.drift / gamma,
            diffusion: self.diffusion / gamma,
        }
    }

    /// `SV + VSᵀ + D`.
    pub fn lyapunov_rhs(&self, v: &Matrix4<f64>) -> Matrix4<f64> {
        self.drift * v + v * self.drift.transpose() + self.diffusion
    }
}

/// Assembles `S` and `D` in rad/s.
///
/// `D₁₁ = D₂₂ = Γ_a₁(N + ½) + γ(n₁ + ½)`, `D₃₃ = D₄₄` likewise for mode B,
/// `D₁₃ = −D₂₄ = M√(Γ_a₁Γ_a₂)`.
pub fn build_drift_diffusion(rp: &ReducedParams) -> Result<DriftDiffusion> {
    rp.validate()?;
    let (n, m) = (rp.noise_n(), rp.noise_m());
    let (ga1, ga2) = (rp.optical_damping(Mode::A), rp.optical_damping(Mode::B));
    let d11 = ga1 * (n + 0.5) + rp.gamma * (rp.n_th1 + 0.5);
    let d33 = ga2 * (n + 0.5) + rp.gamma * (rp.n_th2 + 0.5);
    let d13 = m * (ga1 * ga2).sqrt();
    let s1 = -0.5 * rp.total_damping(Mode::A);
    let s2 = -0.5 * rp.total_damping(Mode::B);
    let drift = Matrix4::from_diagonal(&nalgebra::Vector4::new(s1, s1, s2, s2));
    #[rustfmt::skip]
    let diffusion = Matrix4::new(
        d11, 0.0, d13, 0.0,
        0.0, d11, 0.0, -d13,
        d13, 0.0, d33, 0.0,
        0.0, -d13, 0.0, d33,
    );
    Ok(DriftDiffusion { drift, diffusion })
}

fn check_time(gamma_t: f64) -> Result<()> {
    if gamma_t.is_finite() && gamma_t >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!(
            "scaled time must be finite and non-negative, got {gamma_t}"
        )))
    }
}

/// Diagonal relaxation `v(∞) + (1 − v(∞))·e^{−(C+1)γt}`. The stationary and
/// transient coefficients sum to one, so this is `1 + b·expm1(−(C+1)γt)`,
/// exact at `γt = 0`.
fn diagonal_element(c: f64, n: f64, n_th: f64, gamma_t: f64) -> f64 {
    let transient = ((-2.0 * n + 1.0) * c - 2.0 * n_th + 1.0) / (2.0 * (c + 1.0));
    1.0 + transient * (-(c + 1.0) * gamma_t).exp_m1()
}

fn cross_element(rp: &ReducedParams, gamma_t: f64) -> f64 {
    let sum = rp.c1 + rp.c2 + 2.0;
    let amplitude = 2.0 * rp.noise_m() * (rp.c1 * rp.c2).sqrt() / sum;
    amplitude * -(-0.5 * sum * gamma_t).exp_m1()
}

/// Closed-form covariance at scaled time `γt` starting from `V(0) = I₄`.
pub fn covariance_closed_form(rp: &ReducedParams, gamma_t: f64) -> Result<TwoModeCovariance> {
    rp.validate()?;
    check_time(gamma_t)?;
    let n = rp.noise_n();
    let v11 = diagonal_element(rp.c1, n, rp.n_th1, gamma_t);
    let v33 = diagonal_element(rp.c2, n, rp.n_th2, gamma_t);
    let v13 = cross_element(rp, gamma_t);
    TwoModeCovariance::squeezed_thermal(v11, v33, v13)
}

/// Exact `γt → ∞` limit of the closed form.
pub fn stationary_covariance(rp: &ReducedParams) -> Result<TwoModeCovariance> {
    rp.validate()?;
    let n = rp.noise_n();
    let stationary =
        |c: f64, n_th: f64| ((2.0 * n + 1.0) * c + 2.0 * n_th + 1.0) / (2.0 * (c + 1.0));
    let v13 = 2.0 * rp.noise_m() * (rp.c1 * rp.c2).sqrt() / (rp.c1 + rp.c2 + 2.0);
    TwoModeCovariance::squeezed_thermal(
        stationary(rp.c1, rp.n_th1),
        stationary(rp.c2, rp.n_th2),
        v13,
    )
}

/// Covariance matrices sampled on an increasing grid of scaled times.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceTrajectory {
    times: Vec<f64>,
    states: Vec<TwoModeCovariance>,
}

impl CovarianceTrajectory {
    pub fn new(times: Vec<f64>, states: Vec<TwoModeCovariance>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(invalid("trajectory times and states differ in length"));
        }
        check_grid(&times)?;
        Ok(Self { times, states })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[TwoModeCovariance] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &TwoModeCovariance)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    /// First grid time whose state is not bona fide, if any.
    pub fn first_unphysical(&self) -> Result<Option<f64>> {
        for (t, v) in self.iter() {
            if !validate_cm(v.matrix())?.bona_fide {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    /// Largest elementwise difference against another trajectory on the
    /// same grid.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.times != other.times {
            return Err(invalid("trajectories are sampled on different grids"));
        }
        Ok(self
            .states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| (a.matrix() - b.matrix()).amax())
            .fold(0.0, f64::max))
    }
}

pub(crate) fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(invalid("time grid is empty"));
    }
    if let Some(&t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(invalid(format!(
            "time grid entries must be finite and non-negative, got {t}"
        )));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("time grid must be strictly increasing"));
    }
    Ok(())
}

/// Step control for [`integrate_lyapunov`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Initial RK4 step in `γt`.
    pub step: f64,
    /// Largest elementwise change accepted when the step is halved.
    pub tolerance: f64,
    pub max_halvings: u32,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            step: 1e-4,
            tolerance: 1e-10,
            max_halvings: 6,
        }
    }
}

fn rk4_step(dd: &DriftDiffusion, v: &Matrix4<f64>, h: f64) -> Matrix4<f64> {
    let k1 = dd.lyapunov_rhs(v);
    let k2 = dd.lyapunov_rhs(&(v + k1 * (0.5 * h)));
    let k3 = dd.lyapunov_rhs(&(v + k2 * (0.5 * h)));
    let k4 = dd.lyapunov_rhs(&(v + k3 * h));
    v + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
}

/// Fixed-step RK4 from `V(0) = initial`, reporting at every grid time. Each
/// grid interval is split into equal sub-steps no longer than `step`.
fn rk4_on_grid(
    dd: &DriftDiffusion,
    initial: &Matrix4<f64>,
    grid: &[f64],
    step: f64,
) -> Vec<Matrix4<f64>> {
    let mut v = *initial;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(grid.len());
    for &target in grid {
        let span = target - t;
        if span > 0.0 {
            let n = (span / step).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for _ in 0..n {
                v = rk4_step(dd, &v, h);
            }
        }
        t = target;
        out.push(v);
    }
    out
}

/// Integrates `dV/d(γt) = SV + VSᵀ + D` with `S`, `D` given per unit `γt`.
///
/// The step is halved until the trajectory moves by less than
/// `opts.tolerance` elementwise; the finer run is returned.
pub fn integrate_lyapunov(
    dd: &DriftDiffusion,
    initial: &TwoModeCovariance,
    grid: &[f64],
    opts: &OdeOptions,
) -> Result<CovarianceTrajectory> {
    check_grid(grid)?;
    if !(opts.step > 0.0) || !(opts.tolerance > 0.0) {
        return Err(invalid("ODE step and tolerance must be positive"));
    }
    let mut step = opts.step;
    let mut coarse = rk4_on_grid(dd, initial.matrix(), grid, step);
    for _ in 0..=opts.max_halvings {
        step *= 0.5;
        let fine = rk4_on_grid(dd, initial.matrix(), grid, step);
        let change = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).amax())
            .fold(0.0, f64::max);
        if !change.is_finite() {
            return Err(Error::IntegrationError("trajectory diverged".into()));
        }
        if change <= opts.tolerance {
            let states = fine
                .into_iter()
                .map(TwoModeCovariance::symmetrized)
                .collect::<Result<Vec<_>>>()?;
            return CovarianceTrajectory::new(grid.to_vec(), states);
        }
        coarse = fine;
    }
    Err(Error::IntegrationError(format!(
        "no convergence to {} after {} step halvings",
        opts.tolerance, opts.max_halvings
    )))
}

/// Numerical trajectory from `V(0) = I₄`.
pub fn covariance_ode(rp: &ReducedParams, grid: &[f64]) -> Result<CovarianceTrajectory> {
    covariance_ode_with(rp, grid, &OdeOptions::default())
}

pub fn covariance_ode_with(
    rp: &ReducedParams,
    grid: &[f64],
    opts: &OdeOptions,
) -> Result<CovarianceTrajectory> {
    let dd = build_drift_diffusion(rp)?.per_gamma(rp.gamma);
    let initial = TwoModeCovariance::scaled_identity(1.0)?;
    integrate_lyapunov(&dd, &initial, grid, opts)
}

/// Closed-form trajectory on a grid.
pub fn closed_form_trajectory(rp: &ReducedParams, grid: &[f64]) -> Result<CovarianceTrajectory> {
    check_grid(grid)?;
    let states = grid
        .iter()
        .map(|&t| covariance_closed_form(rp, t))
        .collect::<Result<Vec<_>>>()?;
    CovarianceTrajectory::new(grid.to_vec(), states)
}
