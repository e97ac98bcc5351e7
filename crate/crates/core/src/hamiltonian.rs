//! The linear SU(1,1) Hamiltonian `H = 2ω K_z + λ (K_+ + K_-)` and the
//! Heisenberg-picture transport of generator moments.
//!
//! The generators evolve linearly, `K(t) = M(t) K(0)`, with `M(t)` a 3×3 real
//! matrix in SO(2,1). Everything downstream (both state families, the scan and
//! the validation harness) consumes `M(t)` through [`AdjointMatrix`] and
//! [`propagate_moments`].

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for classifying `ω ≈ λ` as resonance.
pub const DEFAULT_REGIME_EPSILON: f64 = 1e-12;

/// Below this value of `|g| t` the time functions switch to their Taylor
/// series in `g² t²`.
pub const TAYLOR_SEAM: f64 = 1e-4;

/// Largest `γ t` accepted in the hyperbolic regime.
pub const HYPERBOLIC_LIMIT: f64 = 350.0;

/// Which of the three dynamical regimes a pair `(ω, λ)` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `ω > λ`: trigonometric coefficients, bounded motion.
    Oscillatory,
    /// `λ > ω`: hyperbolic coefficients, parametric amplification.
    Hyperbolic,
    /// `ω = λ`: coefficients are polynomials in time.
    Resonance,
}

/// The Hamiltonian parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    omega: f64,
    lambda: f64,
    regime_epsilon: f64,
}

impl CouplingParams {
    pub fn new(omega: f64, lambda: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::invalid("omega", omega, "must be finite and > 0"));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::invalid("lambda", lambda, "must be finite and >= 0"));
        }
        Ok(Self {
            omega,
            lambda,
            regime_epsilon: DEFAULT_REGIME_EPSILON,
        })
    }

    pub fn with_regime_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::invalid(
                "regime_epsilon",
                epsilon,
                "must be finite and >= 0",
            ));
        }
        self.regime_epsilon = epsilon;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn regime_epsilon(&self) -> f64 {
        self.regime_epsilon
    }

    /// Signed `g² = ω² − λ²`, factored to avoid cancellation near resonance.
    pub fn g_squared(&self) -> f64 {
        (self.omega - self.lambda) * (self.omega + self.lambda)
    }

    /// `|g| = sqrt(|ω² − λ²|)`: the oscillation frequency `g` in the
    /// oscillatory regime, the growth rate `γ` in the hyperbolic one.
    pub fn effective_frequency(&self) -> f64 {
        self.g_squared().abs().sqrt()
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self)
    }
}

pub fn classify_regime(params: &CouplingParams) -> Regime {
    let (w, l) = (params.omega, params.lambda);
    if (w - l).abs() <= params.regime_epsilon * w.max(l) {
        Regime::Resonance
    } else if w > l {
        Regime::Oscillatory
    } else {
        Regime::Hyperbolic
    }
}

/// The three elementary functions of time every coefficient is built from:
/// `cos(2gt)`, `sin²(gt)/g²` and `sin(2gt)/g`, analytically continued to
/// `g = iγ` in the hyperbolic regime and to their `g → 0` limits at resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeKernel {
    pub cos_2gt: f64,
    pub sin_sq_over_g2: f64,
    pub sin_2gt_over_g: f64,
}

/// Taylor series of the kernel in `x = g² t²` (signed), through `(gt)⁶`.
fn kernel_series(x: f64, t: f64) -> TimeKernel {
    let cos_2gt = 1.0 + x * (-2.0 + x * (2.0 / 3.0 - x * 4.0 / 45.0));
    let sinc = 1.0 + x * (-1.0 / 6.0 + x * (1.0 / 120.0 - x / 5040.0));
    let sinc2 = 1.0 + x * (-2.0 / 3.0 + x * (2.0 / 15.0 - x * 4.0 / 315.0));
    TimeKernel {
        cos_2gt,
        sin_sq_over_g2: t * t * sinc * sinc,
        sin_2gt_over_g: 2.0 * t * sinc2,
    }
}

pub fn time_kernel(params: &CouplingParams, t: f64) -> Result<TimeKernel> {
    if !t.is_finite() {
        return Err(Error::NonFiniteTime(t));
    }
    let g2 = params.g_squared();
    let g = g2.abs().sqrt();
    let regime = params.regime();
    if regime == Regime::Resonance {
        return Ok(kernel_series(0.0, t));
    }
    if (g * t).abs() < TAYLOR_SEAM {
        return Ok(kernel_series(g2 * t * t, t));
    }
    Ok(match regime {
        Regime::Oscillatory => {
            let s = (g * t).sin();
            TimeKernel {
                cos_2gt: (2.0 * g * t).cos(),
                sin_sq_over_g2: s * s / g2,
                sin_2gt_over_g: (2.0 * g * t).sin() / g,
            }
        }
        Regime::Hyperbolic => {
            let gamma_t = (g * t).abs();
            if gamma_t > HYPERBOLIC_LIMIT {
                return Err(Error::HyperbolicOverflow {
                    gamma_t,
                    limit: HYPERBOLIC_LIMIT,
                });
            }
            let s = (g * t).sinh();
            TimeKernel {
                cos_2gt: (2.0 * g * t).cosh(),
                sin_sq_over_g2: s * s / -g2,
                sin_2gt_over_g: (2.0 * g * t).sinh() / g,
            }
        }
        Regime::Resonance => unreachable!(),
    })
}

/// The six c-number functions of the Heisenberg solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorCoefficients {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub j: f64,
    pub s: f64,
    pub v: f64,
    pub t: f64,
}

impl PropagatorCoefficients {
    pub fn identity() -> Self {
        Self {
            r1: 1.0,
            r2: 1.0,
            r3: 1.0,
            j: 0.0,
            s: 0.0,
            v: 0.0,
            t: 0.0,
        }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.r1, self.r2, self.r3, self.j, self.s, self.v]
    }
}

pub fn coefficients(params: &CouplingParams, t: f64) -> Result<PropagatorCoefficients> {
    let kernel = time_kernel(params, t)?;
    Ok(coefficients_from_kernel(params, &kernel, t))
}

pub(crate) fn coefficients_from_kernel(
    params: &CouplingParams,
    kernel: &TimeKernel,
    t: f64,
) -> PropagatorCoefficients {
    let (w, l) = (params.omega, params.lambda);
    let sigma = kernel.sin_sq_over_g2;
    PropagatorCoefficients {
        r1: kernel.cos_2gt - 2.0 * l * l * sigma,
        r2: kernel.cos_2gt,
        r3: kernel.cos_2gt + 2.0 * w * w * sigma,
        j: w * kernel.sin_2gt_over_g,
        s: 2.0 * w * l * sigma,
        v: l * kernel.sin_2gt_over_g,
        t,
    }
}

/// The SO(2,1) matrix carrying `(K_x, K_y, K_z)` from time 0 to time t.
///
/// Row layout: `x = (R1, −J, −S)`, `y = (J, R2, V)`, `z = (S, V, R3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointMatrix(Matrix3<f64>);

/// The SO(2,1) metric `diag(1, 1, −1)`.
pub fn minkowski_metric() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0))
}

impl AdjointMatrix {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// Max-entry norm of `Mᵀ η M − η`.
    pub fn metric_defect(&self) -> f64 {
        let eta = minkowski_metric();
        (self.0.transpose() * eta * self.0 - eta).abs().max()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// `self ∘ other`, i.e. first `other` then `self`.
    pub fn compose(&self, other: &AdjointMatrix) -> AdjointMatrix {
        AdjointMatrix(self.0 * other.0)
    }
}

pub fn adjoint_matrix(c: &PropagatorCoefficients) -> AdjointMatrix {
    AdjointMatrix(Matrix3::new(
        c.r1, -c.j, -c.s, //
        c.j, c.r2, c.v, //
        c.s, c.v, c.r3,
    ))
}

/// Convenience for `adjoint_matrix(&coefficients(params, t)?)`.
pub fn transport_matrix(params: &CouplingParams, t: f64) -> Result<AdjointMatrix> {
    Ok(adjoint_matrix(&coefficients(params, t)?))
}

/// First and symmetrized second moments of `(K_x, K_y, K_z)`.
///
/// `cov[(i, j)] = ½⟨{ΔK_i, ΔK_j}⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentState {
    pub mean: Vector3<f64>,
    pub cov: Matrix3<f64>,
}

impl MomentState {
    pub fn new(mean: Vector3<f64>, cov: Matrix3<f64>) -> Self {
        Self { mean, cov }
    }

    pub fn var_x(&self) -> f64 {
        self.cov[(0, 0)]
    }

    pub fn var_y(&self) -> f64 {
        self.cov[(1, 1)]
    }

    pub fn mean_kz(&self) -> f64 {
        self.mean[2]
    }

    /// `⟨ΔK_x²⟩⟨ΔK_y²⟩ − ¼⟨K_z⟩²`, non-negative for any physical state.
    pub fn uncertainty_excess(&self) -> f64 {
        self.var_x() * self.var_y() - 0.25 * self.mean_kz() * self.mean_kz()
    }

    pub fn symmetry_defect(&self) -> f64 {
        (self.cov - self.cov.transpose()).abs().max()
    }
}

/// Transports a moment state: `mean' = M mean`, `cov' = M cov Mᵀ`.
pub fn propagate_moments(m: &AdjointMatrix, state: &MomentState) -> MomentState {
    let mean = m.0 * state.mean;
    let cov = m.0 * state.cov * m.0.transpose();
    MomentState {
        mean,
        cov: 0.5 * (cov + cov.transpose()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cp(w: f64, l: f64) -> CouplingParams {
        CouplingParams::new(w, l).unwrap()
    }

    fn assert_coeffs(c: &PropagatorCoefficients, expected: [f64; 6], tol: f64) {
        for (got, want) in c.as_array().iter().zip(expected) {
            assert!(
                (got - want).abs() <= tol * want.abs().max(1.0),
                "{:?} vs {:?}",
                c.as_array(),
                expected
            );
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CouplingParams::new(0.0, 1.0).is_err());
        assert!(CouplingParams::new(1.0, -0.1).is_err());
        assert!(CouplingParams::new(f64::NAN, 1.0).is_err());
        assert!(coefficients(&cp(1.0, 0.5), f64::INFINITY).is_err());
    }

    #[test]
    fn classifies_regimes() {
        let e = |w, l| cp(w, l).with_regime_epsilon(1e-9).unwrap().regime();
        assert_eq!(e(3.0, 1.0), Regime::Oscillatory);
        assert_eq!(e(1.0, 1.0), Regime::Resonance);
        assert_eq!(e(1.0, 2.0), Regime::Hyperbolic);
        assert_eq!(e(1.0, 1.0 + 1e-10), Regime::Resonance);
    }

    #[test]
    fn free_rotation_when_uncoupled() {
        for &t in &[0.0, 0.3, 1.7, 12.0] {
            let c = coefficients(&cp(1.0, 0.0), t).unwrap();
            let (c2, s2) = ((2.0 * t).cos(), (2.0 * t).sin());
            assert_coeffs(&c, [c2, c2, 1.0, s2, 0.0, 0.0], 1e-14);
        }
    }

    #[test]
    fn pure_coupling_limit_conserves_kx() {
        // ω → 0 with λ = 1: H ∝ K_x.
        for &t in &[0.2, 1.0, 2.5] {
            let c = coefficients(&cp(1e-12, 1.0), t).unwrap();
            let (ch, sh) = ((2.0 * t).cosh(), (2.0 * t).sinh());
            assert_coeffs(&c, [1.0, ch, ch, 0.0, 0.0, sh], 1e-10);
        }
    }

    #[test]
    fn resonance_polynomials() {
        let c = coefficients(&cp(1.0, 1.0), 0.5).unwrap();
        assert_coeffs(&c, [0.5, 1.0, 1.5, 1.0, 0.5, 1.0], 1e-15);
    }

    #[test]
    fn identity_at_time_zero() {
        for (w, l) in [(2.0, 1.0), (1.0, 1.0), (1.0, 3.0)] {
            let c = coefficients(&cp(w, l), 0.0).unwrap();
            assert_eq!(c.as_array(), PropagatorCoefficients::identity().as_array());
            assert_eq!(adjoint_matrix(&c), AdjointMatrix::identity());
        }
    }

    #[test]
    fn quarter_period_of_free_motion_rotates_xy_block() {
        let m = transport_matrix(&cp(1.0, 0.0), PI / 4.0).unwrap();
        let expected = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert!((m.matrix() - expected).abs().max() < 1e-15);
    }

    #[test]
    fn matches_high_precision_reference() {
        // 50-digit evaluations of the closed forms.
        let cases: [((f64, f64, f64), [f64; 6]); 6] = [
            (
                (1.0, 1.000001, 5.0),
                [
                    -49.000833339305581,
                    1.0001000017166794,
                    51.00093334102226,
                    10.000333336833353,
                    50.00088334013892,
                    10.000343337166689,
                ],
            ),
            (
                (1.0, 0.999999, 5.0),
                [
                    -48.999166672638863,
                    0.99990000171665389,
                    50.999066674355517,
                    9.9996666701666475,
                    49.999116673472191,
                    9.9996566704999773,
                ],
            ),
            (
                (1.0, 1.000001, 2.0),
                [
                    -7.0000213333667556,
                    1.0000160000506668,
                    9.0000373334174223,
                    4.0000213333781334,
                    8.000029333388089,
                    4.0000253333994668,
                ],
            ),
            (
                (2.0, 1.99999999, 0.7),
                [
                    -2.9199999743893335,
                    0.99999996080000035,
                    4.9199999351893338,
                    2.7999999634133336,
                    3.9199999547893336,
                    2.7999999494133338,
                ],
            ),
            (
                (1.0, 0.3, 0.9),
                [
                    -0.25909116731981702,
                    -0.14577296226103349,
                    1.1133182050587835,
                    1.0370871313939368,
                    0.37772735019594511,
                    0.31112613941818104,
                ],
            ),
            (
                (1.0, 2.0, 1.5),
                [
                    -28.763610131424754,
                    90.290830394274262,
                    120.05444052569902,
                    52.126237965435414,
                    59.527220262849508,
                    104.25247593087083,
                ],
            ),
        ];
        for ((w, l, t), expected) in cases {
            let c = coefficients(&cp(w, l), t).unwrap();
            assert_coeffs(&c, expected, 1e-12);
        }
    }

    #[test]
    fn taylor_seam_is_continuous() {
        // Straddle |g|t = TAYLOR_SEAM from both sides in both regimes.
        let t = 1.0;
        for sign in [1.0, -1.0] {
            let below = (TAYLOR_SEAM * 0.999_999).powi(2);
            let above = (TAYLOR_SEAM * 1.000_001).powi(2);
            let lam = |g2: f64| (1.0 - sign * g2).sqrt();
            let a = coefficients(&cp(1.0, lam(below)), t).unwrap();
            let b = coefficients(&cp(1.0, lam(above)), t).unwrap();
            for (x, y) in a.as_array().iter().zip(b.as_array()) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn hyperbolic_overflow_is_structured() {
        let p = cp(1.0, 2.0);
        let gamma = p.effective_frequency();
        assert!(coefficients(&p, 349.0 / gamma).is_ok());
        assert!(matches!(
            coefficients(&p, 351.0 / gamma),
            Err(Error::HyperbolicOverflow { .. })
        ));
    }

    #[test]
    fn oscillatory_period_is_pi_over_g() {
        let p = cp(2.0, 1.0);
        let period = PI / p.effective_frequency();
        for &t in &[0.0, 0.4, 1.3, 5.0] {
            let a = transport_matrix(&p, t).unwrap();
            let b = transport_matrix(&p, t + period).unwrap();
            assert!((a.matrix() - b.matrix()).abs().max() < 1e-10);
        }
    }

    #[test]
    fn free_evolution_conserves_kz_moments() {
        let state = MomentState::new(
            Vector3::new(0.3, -0.2, 1.4),
            Matrix3::new(0.8, 0.1, 0.2, 0.1, 0.6, -0.1, 0.2, -0.1, 0.3),
        );
        let m = transport_matrix(&cp(1.0, 0.0), 0.77).unwrap();
        let out = propagate_moments(&m, &state);
        assert!((out.mean[2] - 1.4).abs() < 1e-15);
        assert!((out.cov[(2, 2)] - 0.3).abs() < 1e-15);
        assert_eq!(propagate_moments(&AdjointMatrix::identity(), &state), state);
    }

    fn any_regime() -> impl Strategy<Value = (f64, f64, f64)> {
        prop_oneof![
            (0.2f64..3.0, 0.0f64..1.0, 0.0f64..20.0).prop_map(|(w, f, t)| (w, w * f * 0.99, t)),
            (0.2f64..3.0, 1.01f64..3.0, 0.0f64..1.0).prop_map(|(w, f, s)| {
                let l = w * f;
                let gamma = ((l - w) * (l + w)).sqrt();
                (w, l, 3.0 * s / gamma)
            }),
            (0.2f64..2.0, 0.0f64..5.0).prop_map(|(w, t)| (w, w, t)),
        ]
    }

    proptest! {
        #[test]
        fn transport_stays_in_so21((w, l, t) in any_regime()) {
            let m = transport_matrix(&cp(w, l), t).unwrap();
            prop_assert!(m.metric_defect() < 1e-10 * m.matrix().abs().max().powi(2).max(1.0));
            prop_assert!((m.determinant() - 1.0).abs() < 1e-10 * m.matrix().abs().max().powi(3).max(1.0));
        }

        #[test]
        fn transport_composes((w, l, t) in any_regime(), frac in 0.0f64..1.0) {
            let p = cp(w, l);
            let (t1, t2) = (t * frac, t * (1.0 - frac));
            let whole = transport_matrix(&p, t).unwrap();
            let split = transport_matrix(&p, t1).unwrap().compose(&transport_matrix(&p, t2).unwrap());
            let scale = whole.matrix().abs().max().max(1.0);
            prop_assert!((whole.matrix() - split.matrix()).abs().max() < 1e-12 * scale * scale);
        }

        #[test]
        fn transport_preserves_uncertainty(
            (w, l, t) in any_regime(),
            r in -2.0f64..2.0,
            phi in 0.0f64..6.3,
            k in 0.25f64..2.0,
        ) {
            // Group-transformed coherent-state moments always satisfy the bound.
            let n = Vector3::new(-r.sinh() * phi.cos(), -r.sinh() * phi.sin(), r.cosh());
            let state = MomentState::new(k * n, 0.5 * k * (minkowski_metric() + n * n.transpose()));
            prop_assert!(state.uncertainty_excess() >= -1e-12);
            let out = propagate_moments(&transport_matrix(&cp(w, l), t).unwrap(), &state);
            let scale = out.mean_kz().powi(2).max(1.0);
            prop_assert!(out.uncertainty_excess() >= -1e-10 * scale);
            prop_assert!(out.symmetry_defect() == 0.0);
        }
    }
}
