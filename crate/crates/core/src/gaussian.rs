// SPDX-License-Identifier: Apache-2.0

//! Gaussian steering, steering asymmetry and Rényi-2 entanglement of a
//! two-mode covariance matrix.
//!
//! All functions work in the vacuum-variance-1/2 convention and the ordered
//! quadrature basis `(q₁, p₁, q₂, p₂)`. Mode A is the first mirror, mode B the
//! second.

use nalgebra::{Matrix2, Matrix4};

use crate::error::{invalid, Error, Result};

/// Positivity tolerance used to decide whether a steering measure is nonzero.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Slack on the symplectic eigenvalue bound `ν ≥ 1/2`.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// Relative tolerance for accepting a matrix as a squeezed thermal state.
pub const STS_FORM_TOLERANCE: f64 = 1e-10;

/// Real symmetric 4×4 covariance matrix of two bosonic modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCovariance {
    elements: Matrix4<f64>,
}

impl TwoModeCovariance {
    /// Wraps a matrix after checking that it is finite and exactly symmetric.
    pub fn new(elements: Matrix4<f64>) -> Result<Self> {
        if elements.iter().any(|x| !x.is_finite()) {
            return Err(invalid("covariance matrix has non-finite entries"));
        }
        if elements != elements.transpose() {
            return Err(invalid("covariance matrix is not symmetric"));
        }
        Ok(Self { elements })
    }

    /// Builds the symmetric part `(M + Mᵀ)/2` of an arbitrary finite matrix.
    pub fn symmetrized(m: Matrix4<f64>) -> Result<Self> {
        Self::new((m + m.transpose()) * 0.5)
    }

    /// Standard form with diagonal blocks and a diagonal cross block:
    /// `V₁ = diag(v11, v22)`, `V₂ = diag(v33, v44)`, `V₃ = diag(v13, v24)`.
    pub fn standard_form(
        v11: f64,
        v22: f64,
        v33: f64,
        v44: f64,
        v13: f64,
        v24: f64,
    ) -> Result<Self> {
        #[rustfmt::skip]
        let m = Matrix4::new(
            v11, 0.0, v13, 0.0,
            0.0, v22, 0.0, v24,
            v13, 0.0, v33, 0.0,
            0.0, v24, 0.0, v44,
        );
        Self::new(m)
    }

    /// Squeezed-thermal-state form: `v22 = v11`, `v44 = v33`, `v24 = −v13`.
    pub fn squeezed_thermal(v11: f64, v33: f64, v13: f64) -> Result<Self> {
        Self::standard_form(v11, v11, v33, v33, v13, -v13)
    }

    /// Two-mode squeezed vacuum with squeezing `r`.
    pub fn two_mode_squeezed_vacuum(r: f64) -> Self {
        let c = 0.5 * (2.0 * r).cosh();
        let s = 0.5 * (2.0 * r).sinh();
        Self::squeezed_thermal(c, c, s).expect("finite squeezing")
    }

    /// `scale · I₄`; `scale = 1/2` is the two-mode vacuum.
    pub fn scaled_identity(scale: f64) -> Result<Self> {
        Self::new(Matrix4::identity() * scale)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.elements
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.elements[(row, col)]
    }

    /// Mode A block `V₁`.
    pub fn block_a(&self) -> Matrix2<f64> {
        self.elements.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Mode B block `V₂`.
    pub fn block_b(&self) -> Matrix2<f64> {
        self.elements.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Cross block `V₃` (rows A, columns B).
    pub fn cross(&self) -> Matrix2<f64> {
        self.elements.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Exchanges the roles of the two modes.
    pub fn swap_modes(&self) -> Self {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.block_b());
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.block_a());
        m.fixed_view_mut::<2, 2>(0, 2)
            .copy_from(&self.cross().transpose());
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&self.cross());
        Self { elements: m }
    }

    pub fn determinant(&self) -> f64 {
        self.elements.determinant()
    }

    /// Symplectic eigenvalues `(ν₋, ν₊)` from the invariants
    /// `Δ = det V₁ + det V₂ + 2 det V₃` and `det V`.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        let delta = self.block_a().determinant()
            + self.block_b().determinant()
            + 2.0 * self.cross().determinant();
        let det = self.determinant();
        let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
        let plus = (0.5 * (delta + disc)).max(0.0).sqrt();
        // ν₋ν₊ = √det avoids the cancellation in Δ − √(Δ² − 4 det).
        let minus = if plus > 0.0 {
            det.max(0.0).sqrt() / plus
        } else {
            0.0
        };
        (minus, plus)
    }

    /// Whether the matrix is in squeezed-thermal standard form within
    /// [`STS_FORM_TOLERANCE`] relative to the largest diagonal element.
    pub fn is_squeezed_thermal(&self) -> bool {
        let v = &self.elements;
        let scale = (0..4).map(|i| v[(i, i)].abs()).fold(0.0, f64::max);
        let tol = STS_FORM_TOLERANCE * scale;
        let zeros = [(0, 1), (2, 3), (0, 3), (1, 2)];
        (v[(0, 0)] - v[(1, 1)]).abs() <= tol
            && (v[(2, 2)] - v[(3, 3)]).abs() <= tol
            && (v[(0, 2)] + v[(1, 3)]).abs() <= tol
            && zeros.iter().all(|&ij| v[ij].abs() <= tol)
    }
}

/// Outcome of [`validate_cm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmValidity {
    pub symmetric: bool,
    pub positive_definite: bool,
    pub bona_fide: bool,
    /// `(ν₋, ν₊)`; only meaningful when the matrix is positive definite.
    pub symplectic_eigenvalues: (f64, f64),
}

impl CmValidity {
    pub fn is_valid(&self) -> bool {
        self.symmetric && self.positive_definite && self.bona_fide
    }
}

/// Physicality gate for a raw 4×4 matrix.
///
/// Bona fide means symmetric, positive definite and `min ν ≥ 1/2` up to
/// [`PHYSICALITY_TOLERANCE`], i.e. `V + (i/2)Ω ≥ 0`.
pub fn validate_cm(m: &Matrix4<f64>) -> Result<CmValidity> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(invalid("covariance matrix has non-finite entries"));
    }
    let symmetric = *m == m.transpose();
    let sym = TwoModeCovariance {
        elements: (m + m.transpose()) * 0.5,
    };
    let positive_definite = symmetric && sym.elements.cholesky().is_some();
    let nu = sym.symplectic_eigenvalues();
    let bona_fide = positive_definite && nu.0 >= 0.5 - PHYSICALITY_TOLERANCE;
    Ok(CmValidity {
        symmetric,
        positive_definite,
        bona_fide,
        symplectic_eigenvalues: nu,
    })
}

/// Gaussian steerability from the conditioning mode to the steered mode,
/// `max[0, −½ ln(4 det M)]` with `M` the Schur complement of the
/// conditioning block.
fn steerability(
    conditioning: Matrix2<f64>,
    steered: Matrix2<f64>,
    cross: Matrix2<f64>,
) -> Result<f64> {
    let det_cond = conditioning.determinant();
    if det_cond <= 0.0 {
        return Err(Error::NonPhysicalState(format!(
            "conditioning block has non-positive determinant {det_cond}"
        )));
    }
    let inv = Matrix2::new(
        conditioning[(1, 1)],
        -conditioning[(0, 1)],
        -conditioning[(1, 0)],
        conditioning[(0, 0)],
    ) / det_cond;
    let schur = steered - cross.transpose() * inv * cross;
    let det_schur = schur.determinant();
    if det_schur <= 0.0 {
        return Err(Error::NonPhysicalState(format!(
            "covariance matrix has non-positive determinant (Schur complement {det_schur})"
        )));
    }
    Ok((-0.5 * (4.0 * det_schur).ln()).max(0.0))
}

/// `G^{A→B} = max[0, ½ ln(det V₁ / 4 det V)]`.
pub fn steering_a_to_b(v: &TwoModeCovariance) -> Result<f64> {
    steerability(v.block_a(), v.block_b(), v.cross())
}

/// `G^{B→A} = max[0, ½ ln(det V₂ / 4 det V)]`.
pub fn steering_b_to_a(v: &TwoModeCovariance) -> Result<f64> {
    steerability(v.block_b(), v.block_a(), v.cross().transpose())
}

/// `|G^{A→B} − G^{B→A}|`.
pub fn steering_asymmetry(v: &TwoModeCovariance) -> Result<f64> {
    Ok((steering_a_to_b(v)? - steering_b_to_a(v)?).abs())
}

/// Gaussian Rényi-2 entanglement of a squeezed thermal state.
///
/// With `s = (v11 + v33)/2`, `d = (v11 − v33)/2` and `g = v11·v33 − v13²`
/// the state is separable when `4g ≥ 4s − 1`; otherwise
/// `E₂ = ln[((4g+1)s − √(((4g−1)² − 16d²)(s² − d² − g))) / (4(d² + g))]`,
/// valid for `4|d| + 1 ≤ 4g < 4s − 1`.
pub fn renyi2_entanglement(v: &TwoModeCovariance) -> Result<f64> {
    if !v.is_squeezed_thermal() {
        return Err(Error::UnsupportedForm(
            "Rényi-2 closed form needs v11 = v22, v33 = v44, v13 = −v24 and zero off-block terms"
                .into(),
        ));
    }
    let (v11, v33, v13) = (v.get(0, 0), v.get(2, 2), v.get(0, 2));
    let s = 0.5 * (v11 + v33);
    let d = 0.5 * (v11 - v33);
    let g = v11 * v33 - v13 * v13;

    if 4.0 * g >= 4.0 * s - 1.0 {
        return Ok(0.0);
    }
    // Pure states sit exactly on 4g = 4|d| + 1, so rounding must not push
    // them into the non-physical branch.
    if 4.0 * g < 4.0 * d.abs() + 1.0 - 4.0 * PHYSICALITY_TOLERANCE {
        return Err(Error::NonPhysicalState(format!(
            "4g = {} below 4|d| + 1 = {}",
            4.0 * g,
            4.0 * d.abs() + 1.0
        )));
    }
    let radicand = ((4.0 * g - 1.0).powi(2) - 16.0 * d * d) * (s * s - d * d - g);
    let root = (4.0 * g + 1.0) * s - radicand.max(0.0).sqrt();
    let h_sqrt = root / (4.0 * (d * d + g));
    Ok((0.5 * (h_sqrt * h_sqrt).ln()).max(0.0))
}

/// Direction(s) in which a state is steerable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SteeringClass {
    NoWay,
    OneWayAToB,
    OneWayBToA,
    TwoWay,
}

impl SteeringClass {
    pub fn from_measures(g_ab: f64, g_ba: f64, epsilon: f64) -> Self {
        match (g_ab > epsilon, g_ba > epsilon) {
            (false, false) => SteeringClass::NoWay,
            (true, false) => SteeringClass::OneWayAToB,
            (false, true) => SteeringClass::OneWayBToA,
            (true, true) => SteeringClass::TwoWay,
        }
    }

    pub fn is_one_way(self) -> bool {
        matches!(self, SteeringClass::OneWayAToB | SteeringClass::OneWayBToA)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SteeringClass::NoWay => "no-way",
            SteeringClass::OneWayAToB => "one-way-a-to-b",
            SteeringClass::OneWayBToA => "one-way-b-to-a",
            SteeringClass::TwoWay => "two-way",
        }
    }
}

impl std::fmt::Display for SteeringClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_steering(v: &TwoModeCovariance, epsilon: f64) -> Result<SteeringClass> {
    if !(epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(SteeringClass::from_measures(
        steering_a_to_b(v)?,
        steering_b_to_a(v)?,
        epsilon,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn vacuum() -> TwoModeCovariance {
        TwoModeCovariance::scaled_identity(0.5).unwrap()
    }

    #[test]
    fn vacuum_is_valid_with_unit_half_eigenvalues() {
        let rep = validate_cm(vacuum().matrix()).unwrap();
        assert!(rep.symmetric && rep.positive_definite && rep.bona_fide);
        assert_abs_diff_eq!(rep.symplectic_eigenvalues.0, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.symplectic_eigenvalues.1, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn identity_has_unit_symplectic_eigenvalues() {
        let rep = validate_cm(&Matrix4::identity()).unwrap();
        assert!(rep.is_valid());
        assert_abs_diff_eq!(rep.symplectic_eigenvalues.0, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.symplectic_eigenvalues.1, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn sub_vacuum_variances_are_not_bona_fide() {
        let rep = validate_cm(&(Matrix4::identity() * 0.1)).unwrap();
        assert!(rep.positive_definite);
        assert!(!rep.bona_fide);
        // Degenerate ν₋ = ν₊ is only √ε-conditioned in the Δ formula.
        assert_abs_diff_eq!(rep.symplectic_eigenvalues.0, 0.1, epsilon = 1e-8);
    }

    #[test]
    fn asymmetric_and_non_finite_inputs() {
        let mut m = Matrix4::identity();
        m[(0, 1)] = 0.1;
        let rep = validate_cm(&m).unwrap();
        assert!(!rep.symmetric && !rep.bona_fide);
        m[(0, 1)] = f64::NAN;
        assert!(matches!(validate_cm(&m), Err(Error::InvalidInput(_))));
        assert!(TwoModeCovariance::new(Matrix4::identity() * f64::INFINITY).is_err());
    }

    #[test]
    fn vacuum_measures_vanish() {
        let v = vacuum();
        assert_eq!(steering_a_to_b(&v).unwrap(), 0.0);
        assert_eq!(steering_b_to_a(&v).unwrap(), 0.0);
        assert_eq!(renyi2_entanglement(&v).unwrap(), 0.0);
        assert_eq!(
            classify_steering(&v, DEFAULT_EPSILON).unwrap(),
            SteeringClass::NoWay
        );
    }

    #[test]
    fn two_mode_squeezed_vacuum_at_unit_squeezing() {
        let v = TwoModeCovariance::two_mode_squeezed_vacuum(1.0);
        let expected = 2.0f64.cosh().ln();
        assert_abs_diff_eq!(expected, 1.3250027473578645, epsilon = 1e-15);
        assert_abs_diff_eq!(steering_a_to_b(&v).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(steering_b_to_a(&v).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(renyi2_entanglement(&v).unwrap(), expected, epsilon = 1e-12);
        assert!(steering_asymmetry(&v).unwrap() < 1e-12);
        assert_eq!(
            classify_steering(&v, DEFAULT_EPSILON).unwrap(),
            SteeringClass::TwoWay
        );
    }

    #[test]
    fn schur_route_matches_full_determinant_and_reduced_form() {
        let v = TwoModeCovariance::squeezed_thermal(1.7, 2.3, 1.4).unwrap();
        let full = 0.5 * (v.block_a().determinant() / (4.0 * v.matrix().determinant())).ln();
        let reduced = -(2.0_f64 * (2.3 - 1.4 * 1.4 / 1.7)).ln();
        let g = steering_a_to_b(&v).unwrap();
        assert_abs_diff_eq!(g, full.max(0.0), epsilon = 1e-12);
        assert_abs_diff_eq!(g, reduced.max(0.0), epsilon = 1e-12);
    }

    #[test]
    fn non_positive_blocks_are_rejected() {
        let v = TwoModeCovariance::squeezed_thermal(0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            steering_a_to_b(&v),
            Err(Error::NonPhysicalState(_))
        ));
        // det V = (v11 v33 − v13²)² = 0
        let v = TwoModeCovariance::squeezed_thermal(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            steering_b_to_a(&v),
            Err(Error::NonPhysicalState(_))
        ));
    }

    #[test]
    fn renyi_rejects_general_states() {
        let v = TwoModeCovariance::standard_form(1.0, 2.0, 1.0, 1.0, 0.3, -0.3).unwrap();
        assert!(matches!(
            renyi2_entanglement(&v),
            Err(Error::UnsupportedForm(_))
        ));
        let v = TwoModeCovariance::standard_form(1.0, 1.0, 1.0, 1.0, 0.3, 0.3).unwrap();
        assert!(matches!(
            renyi2_entanglement(&v),
            Err(Error::UnsupportedForm(_))
        ));
    }

    #[test]
    fn renyi_rejects_region_outside_both_branches() {
        // s = 1/2, d = 0, g = 0.21: 4g = 0.84 is below both 4s − 1 and 4|d| + 1
        let v = TwoModeCovariance::squeezed_thermal(0.5, 0.5, 0.2).unwrap();
        assert!(matches!(
            renyi2_entanglement(&v),
            Err(Error::NonPhysicalState(_))
        ));
    }

    #[test]
    fn epsilon_must_be_positive() {
        assert!(classify_steering(&vacuum(), 0.0).is_err());
    }

    #[test]
    fn product_states_are_null() {
        let v = TwoModeCovariance::squeezed_thermal(1.3, 0.7, 0.0).unwrap();
        assert_eq!(steering_a_to_b(&v).unwrap(), 0.0);
        assert_eq!(steering_b_to_a(&v).unwrap(), 0.0);
        assert_eq!(renyi2_entanglement(&v).unwrap(), 0.0);
    }

    /// Random bona fide squeezed thermal states: a thermal product state with
    /// occupations `n₁, n₂` passed through a two-mode squeezer of strength `r`.
    fn sts_state() -> impl Strategy<Value = TwoModeCovariance> {
        (0.0..4.0f64, 0.0..4.0f64, 0.0..2.0f64).prop_map(|(n1, n2, r)| {
            let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
            let (a, b) = (n1 + 0.5, n2 + 0.5);
            // S(r) diag(a, a, b, b) S(r)ᵀ for the two-mode squeezer
            let v11 = 0.5 * (a + b) * c + 0.5 * (a - b);
            let v33 = 0.5 * (a + b) * c - 0.5 * (a - b);
            let v13 = 0.5 * (a + b) * s;
            TwoModeCovariance::squeezed_thermal(v11, v33, v13).unwrap()
        })
    }

    proptest! {
        #[test]
        fn swap_exchanges_steering_directions(v in sts_state()) {
            let w = v.swap_modes();
            prop_assert_eq!(steering_a_to_b(&w).unwrap(), steering_b_to_a(&v).unwrap());
            prop_assert_eq!(steering_b_to_a(&w).unwrap(), steering_a_to_b(&v).unwrap());
            let (e, ew) = (renyi2_entanglement(&v).unwrap(), renyi2_entanglement(&w).unwrap());
            prop_assert!((e - ew).abs() <= 1e-14 * (1.0 + e));
        }

        #[test]
        fn hierarchy_and_bounds(v in sts_state()) {
            prop_assert!(validate_cm(v.matrix()).unwrap().bona_fide);
            let gab = steering_a_to_b(&v).unwrap();
            let gba = steering_b_to_a(&v).unwrap();
            let e2 = renyi2_entanglement(&v).unwrap();
            prop_assert!(gab >= 0.0 && gba >= 0.0 && e2 >= 0.0);
            prop_assert!(gab.max(gba) <= e2 + 1e-12);
            prop_assert!(steering_asymmetry(&v).unwrap() < std::f64::consts::LN_2);
            if gab > DEFAULT_EPSILON || gba > DEFAULT_EPSILON {
                prop_assert!(e2 > 0.0);
            }
            if e2 > 0.0 {
                prop_assert!(v.cross().determinant() < 0.0);
            }
        }
    }
}
