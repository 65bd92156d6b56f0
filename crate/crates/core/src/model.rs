// SPDX-License-Identifier: Apache-2.0

//! Laboratory parameters of the double-cavity setup and their reduction to
//! the dimensionless inputs of the mirror dynamics.
//!
//! Both cavities are locked to the red sideband (effective detuning
//! `Δ′ = −ω_μ`); no other detuning is modelled.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;

/// Relative agreement required between a directly supplied thermal
/// occupation and the one implied by a bath temperature.
pub const OCCUPATION_AGREEMENT: f64 = 1e-6;

/// Default ratio threshold for the regime checks.
pub const DEFAULT_REGIME_THRESHOLD: f64 = 5.0;
/// Ratios in `[WARN_FLOOR, threshold)` warn instead of failing.
pub const WARN_FLOOR: f64 = 2.0;

/// Which of the two cavity/mirror arms (A is the first, B the second).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    fn index(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B => 1,
        }
    }
}

/// Optical side of one arm. Frequencies and rates are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cavity {
    pub cavity_frequency: f64,
    pub laser_frequency: f64,
    /// m
    pub length: f64,
    pub decay_rate: f64,
    /// W
    pub laser_power: f64,
}

/// Mechanical side of one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mirror {
    /// kg
    pub mass: f64,
    pub frequency: f64,
    pub damping: f64,
    /// Bath temperature in K.
    pub temperature: Option<f64>,
    /// Bath occupation given directly.
    pub thermal_occupation: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub cavities: [Cavity; 2],
    pub mirrors: [Mirror; 2],
    /// Two-mode squeezing parameter `r` of the injected light.
    pub squeezing: f64,
}

impl PhysicalParams {
    /// Setup of the strong-coupling membrane experiment used for the figure
    /// cooperativities: 947 kHz mirrors damped at 140 Hz, 25 mm cavities with
    /// κ = 2π·215 kHz, 1064 nm lasers, powers 5 mW and 11 mW.
    ///
    /// The effective mirror mass is 145 µg. With 145 ng the same numbers give
    /// C ≈ 1.4·10⁴ and κ/G < 1, far outside the adiabatic regime the
    /// reduced dynamics relies on; 145 µg gives C ≈ 14.5 at 5 mW.
    pub fn groblacher(n_th: [f64; 2], squeezing: f64) -> Self {
        let two_pi = 2.0 * PI;
        let cavity = |power| Cavity {
            cavity_frequency: two_pi * 5.26e14,
            laser_frequency: two_pi * 2.82e14,
            length: 25e-3,
            decay_rate: two_pi * 215e3,
            laser_power: power,
        };
        let mirror = |n| Mirror {
            mass: 145e-9,
            frequency: two_pi * 947e3,
            damping: two_pi * 140.0,
            temperature: None,
            thermal_occupation: Some(n),
        };
        Self {
            cavities: [cavity(5e-3), cavity(11e-3)],
            mirrors: [mirror(n_th[0]), mirror(n_th[1])],
            squeezing,
        }
    }

    pub fn cavity(&self, j: Mode) -> &Cavity {
        &self.cavities[j.index()]
    }

    pub fn mirror(&self, j: Mode) -> &Mirror {
        &self.mirrors[j.index()]
    }

    /// Shared mechanical frequency ω_μ.
    pub fn mechanical_frequency(&self) -> f64 {
        self.mirrors[0].frequency
    }

    /// Checks signs, finiteness and the equal-frequency assumption.
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &str, x: f64) -> Result<()> {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(invalid(format!(
                    "{name} must be positive and finite, got {x}"
                )))
            }
        }
        fn non_negative(name: &str, x: f64) -> Result<()> {
            if x.is_finite() && x >= 0.0 {
                Ok(())
            } else {
                Err(invalid(format!(
                    "{name} must be non-negative and finite, got {x}"
                )))
            }
        }
        for (j, c) in self.cavities.iter().enumerate() {
            let j = j + 1;
            positive(&format!("cavity_frequency_{j}"), c.cavity_frequency)?;
            positive(&format!("laser_frequency_{j}"), c.laser_frequency)?;
            positive(&format!("length_{j}"), c.length)?;
            positive(&format!("decay_rate_{j}"), c.decay_rate)?;
            non_negative(&format!("laser_power_{j}"), c.laser_power)?;
        }
        for (j, m) in self.mirrors.iter().enumerate() {
            let j = j + 1;
            positive(&format!("mass_{j}"), m.mass)?;
            positive(&format!("mechanical_frequency_{j}"), m.frequency)?;
            positive(&format!("damping_{j}"), m.damping)?;
            if let Some(t) = m.temperature {
                non_negative(&format!("temperature_{j}"), t)?;
            }
            if let Some(n) = m.thermal_occupation {
                non_negative(&format!("thermal_occupation_{j}"), n)?;
            }
            if m.temperature.is_none() && m.thermal_occupation.is_none() {
                return Err(invalid(format!(
                    "mirror {j} needs a temperature or a thermal occupation"
                )));
            }
        }
        non_negative("squeezing", self.squeezing)?;
        if self.mirrors[0].frequency != self.mirrors[1].frequency {
            return Err(Error::UnsupportedConfiguration(
                "both mirrors must share one mechanical frequency".into(),
            ));
        }
        Ok(())
    }
}

/// Bose–Einstein occupation `1/(exp(ħω/k_B T) − 1)`; zero at `T = 0`.
pub fn thermal_occupation(temperature: f64, frequency: f64) -> Result<f64> {
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(invalid(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    if !(frequency > 0.0) || !frequency.is_finite() {
        return Err(invalid(format!(
            "frequency must be positive, got {frequency}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (HBAR * frequency / (K_B * temperature)).exp_m1())
}

/// Steady-state intracavity and mirror amplitudes of one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFields {
    pub cavity: Complex64,
    pub mirror: Complex64,
}

/// Single-photon coupling `g = (ω_c/l)·√(ħ/(m ω_μ))`.
pub fn single_photon_coupling(p: &PhysicalParams, j: Mode) -> f64 {
    let c = p.cavity(j);
    let m = p.mirror(j);
    (c.cavity_frequency / c.length) * (HBAR / (m.mass * m.frequency)).sqrt()
}

/// Mean fields with the laser phase chosen so the cavity amplitude is
/// purely negative-imaginary.
pub fn mean_fields(p: &PhysicalParams, j: Mode) -> Result<MeanFields> {
    p.validate()?;
    let c = p.cavity(j);
    let m = p.mirror(j);
    let detuning = -p.mechanical_frequency();
    let drive = (2.0 * c.decay_rate * c.laser_power / (HBAR * c.laser_frequency)).sqrt();
    let phase = -(2.0 * detuning / c.decay_rate).atan();
    let i = Complex64::i();
    let cavity = -i * drive * Complex64::from_polar(1.0, phase)
        / Complex64::new(0.5 * c.decay_rate, -detuning);
    let g = single_photon_coupling(p, j);
    let mirror = -i * g * cavity.norm_sqr() / Complex64::new(0.5 * m.damping, m.frequency);
    Ok(MeanFields { cavity, mirror })
}

/// Light-enhanced coupling `G_j` on the red sideband (rad/s).
pub fn enhanced_coupling(p: &PhysicalParams, j: Mode) -> Result<f64> {
    p.validate()?;
    let c = p.cavity(j);
    let m = p.mirror(j);
    let wm = p.mechanical_frequency();
    let lorentz = (0.5 * c.decay_rate).powi(2) + wm * wm;
    Ok((c.cavity_frequency / c.length)
        * (2.0 * c.decay_rate * c.laser_power / (m.mass * wm * c.laser_frequency * lorentz)).sqrt())
}

/// Optomechanical cooperativity `C_j = 4G_j²/(γ κ_j)`.
pub fn cooperativity(p: &PhysicalParams, j: Mode) -> Result<f64> {
    let g = enhanced_coupling(p, j)?;
    Ok(4.0 * g * g / (p.mirror(j).damping * p.cavity(j).decay_rate))
}

/// The same cooperativity written out in the laboratory parameters.
pub fn cooperativity_expanded(p: &PhysicalParams, j: Mode) -> Result<f64> {
    p.validate()?;
    let c = p.cavity(j);
    let m = p.mirror(j);
    let wm = p.mechanical_frequency();
    let lorentz = (0.5 * c.decay_rate).powi(2) + wm * wm;
    Ok(8.0 * c.cavity_frequency.powi(2)
        / (m.damping * m.mass * wm * c.laser_frequency * c.length.powi(2))
        * c.laser_power
        / lorentz)
}

/// Dimensionless inputs of the reduced mirror dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    pub c1: f64,
    pub c2: f64,
    pub n_th1: f64,
    pub n_th2: f64,
    pub squeezing: f64,
    /// Mechanical damping γ in rad/s; only sets the time unit.
    pub gamma: f64,
}

impl ReducedParams {
    pub fn new(
        c1: f64,
        c2: f64,
        n_th1: f64,
        n_th2: f64,
        squeezing: f64,
        gamma: f64,
    ) -> Result<Self> {
        let rp = Self {
            c1,
            c2,
            n_th1,
            n_th2,
            squeezing,
            gamma,
        };
        rp.validate()?;
        Ok(rp)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("c1", self.c1),
            ("c2", self.c2),
            ("nth1", self.n_th1),
            ("nth2", self.n_th2),
            ("r", self.squeezing),
        ];
        for (name, x) in fields {
            if !x.is_finite() || x < 0.0 {
                return Err(invalid(format!(
                    "{name} must be non-negative and finite, got {x}"
                )));
            }
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(invalid(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// Same state, modes exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            c1: self.c2,
            c2: self.c1,
            n_th1: self.n_th2,
            n_th2: self.n_th1,
            ..*self
        }
    }

    /// Squeezed-noise occupation `N = sinh² r`.
    pub fn noise_n(&self) -> f64 {
        self.squeezing.sinh().powi(2)
    }

    /// Squeezed-noise correlation `M = sinh r cosh r`.
    pub fn noise_m(&self) -> f64 {
        self.squeezing.sinh() * self.squeezing.cosh()
    }

    pub fn cooperativity(&self, j: Mode) -> f64 {
        match j {
            Mode::A => self.c1,
            Mode::B => self.c2,
        }
    }

    pub fn thermal_occupation(&self, j: Mode) -> f64 {
        match j {
            Mode::A => self.n_th1,
            Mode::B => self.n_th2,
        }
    }

    /// Radiation-pressure relaxation rate `Γ_a = C γ` (rad/s).
    pub fn optical_damping(&self, j: Mode) -> f64 {
        self.cooperativity(j) * self.gamma
    }

    /// Total mirror relaxation rate `Γ = Γ_a + γ` (rad/s).
    pub fn total_damping(&self, j: Mode) -> f64 {
        self.optical_damping(j) + self.gamma
    }
}

fn resolve_occupation(m: &Mirror, j: usize) -> Result<f64> {
    let from_t = m
        .temperature
        .map(|t| thermal_occupation(t, m.frequency))
        .transpose()?;
    match (m.thermal_occupation, from_t) {
        (Some(n), Some(nt)) => {
            let scale = n.abs().max(nt.abs());
            if (n - nt).abs() > OCCUPATION_AGREEMENT * scale {
                return Err(invalid(format!(
                    "mirror {j}: thermal occupation {n} disagrees with {nt} implied by the temperature"
                )));
            }
            Ok(n)
        }
        (Some(n), None) => Ok(n),
        (None, Some(nt)) => Ok(nt),
        (None, None) => Err(invalid(format!(
            "mirror {j} needs a temperature or a thermal occupation"
        ))),
    }
}

/// Reduces laboratory parameters to cooperativities, occupations, squeezing
/// and the shared damping.
pub fn reduce(p: &PhysicalParams) -> Result<ReducedParams> {
    p.validate()?;
    if p.mirrors[0].damping != p.mirrors[1].damping {
        return Err(Error::UnsupportedConfiguration(
            "closed-form dynamics require equal mechanical damping rates".into(),
        ));
    }
    ReducedParams::new(
        cooperativity(p, Mode::A)?,
        cooperativity(p, Mode::B)?,
        resolve_occupation(&p.mirrors[0], 1)?,
        resolve_occupation(&p.mirrors[1], 2)?,
        p.squeezing,
        p.mirrors[0].damping,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeStatus {
    Pass,
    Warn,
    Fail,
}

impl RegimeStatus {
    pub fn grade(ratio: f64, threshold: f64) -> Self {
        if ratio >= threshold {
            RegimeStatus::Pass
        } else if ratio >= WARN_FLOOR.min(threshold) {
            RegimeStatus::Warn
        } else {
            RegimeStatus::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegimeStatus::Pass => "pass",
            RegimeStatus::Warn => "warn",
            RegimeStatus::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeCheck {
    pub name: String,
    pub ratio: f64,
    pub status: RegimeStatus,
}

/// Validity ratios of the red-sideband, weak-coupling, high-Q approximations.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub threshold: f64,
    pub checks: Vec<RegimeCheck>,
}

impl RegimeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == RegimeStatus::Pass)
    }

    pub fn worst(&self) -> RegimeStatus {
        self.checks
            .iter()
            .map(|c| c.status)
            .max_by_key(|s| *s as u8)
            .unwrap_or(RegimeStatus::Pass)
    }

    pub fn get(&self, name: &str) -> Option<&RegimeCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Ratios `ω_μ/κ_j` (resolved sideband), `κ_j/G_j` (weak coupling),
/// `κ_j/γ_j` and `Q = ω_μ/γ`.
pub fn regime_check(p: &PhysicalParams, threshold: f64) -> Result<RegimeReport> {
    if !(threshold > 0.0) {
        return Err(invalid(format!(
            "regime threshold must be positive, got {threshold}"
        )));
    }
    p.validate()?;
    let wm = p.mechanical_frequency();
    let mut checks = Vec::new();
    let mut push = |name: String, ratio: f64| {
        checks.push(RegimeCheck {
            name,
            ratio,
            status: RegimeStatus::grade(ratio, threshold),
        })
    };
    for (j, mode) in [(1, Mode::A), (2, Mode::B)] {
        let kappa = p.cavity(mode).decay_rate;
        let g = enhanced_coupling(p, mode)?;
        push(format!("omega_m/kappa{j}"), wm / kappa);
        push(format!("kappa{j}/g{j}"), kappa / g);
        push(format!("kappa{j}/gamma{j}"), kappa / p.mirror(mode).damping);
    }
    for (j, mode) in [(1, Mode::A), (2, Mode::B)] {
        push(format!("q{j}"), wm / p.mirror(mode).damping);
    }
    Ok(RegimeReport { threshold, checks })
}
