//! Barut-Girardello coherent states: eigenstates `K₋|Z, k⟩ = Z|Z, k⟩`.
//!
//! Every second moment depends on `Z` only through `|Z|`, `Φ` and the ratio
//! `ρ = I_{2k}(2|Z|) / I_{2k−1}(2|Z|)`, which is always taken from
//! [`bessel_i_ratio`] so that `|Z|` in the hundreds stays finite.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{
    adjoint_matrix, coefficients, propagate_moments, time_kernel, CouplingParams, MomentState,
    PropagatorCoefficients, Regime,
};
use crate::special::bessel_i_ratio;
use crate::squeeze::{EvalPath, SqueezingReport};

/// Smallest Bargmann index accepted: keeps the ratio order `2k ≥ ½`.
pub const BGCS_MIN_K: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BgcsParams {
    pub zmag: f64,
    pub phi: f64,
    pub k: f64,
}

impl BgcsParams {
    pub fn new(zmag: f64, phi: f64, k: f64) -> Result<Self> {
        if !(zmag >= 0.0) || !zmag.is_finite() {
            return Err(Error::invalid("zmag", zmag, "must be finite and >= 0"));
        }
        if !phi.is_finite() {
            return Err(Error::invalid("phi", phi, "must be finite"));
        }
        if !(k >= BGCS_MIN_K) || !k.is_finite() {
            return Err(Error::invalid("k", k, "Bargmann index must be >= 1/4"));
        }
        Ok(Self { zmag, phi, k })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.zmag, self.phi)
    }

    /// `I_{2k}(2|Z|) / I_{2k−1}(2|Z|)`.
    pub fn bessel_ratio(&self) -> Result<f64> {
        Ok(bessel_i_ratio(2.0 * self.k, 2.0 * self.zmag)?.ratio)
    }
}

/// `⟨K_z⟩ = k + |Z|ρ` and `⟨ΔK_z²⟩ = |Z|[|Z|(1 − ρ²) + (1 − 2k)ρ]`.
fn kz_moments(params: &BgcsParams) -> Result<(f64, f64)> {
    let rho = params.bessel_ratio()?;
    let z = params.zmag;
    Ok((
        params.k + z * rho,
        z * (z * (1.0 - rho) * (1.0 + rho) + (1.0 - 2.0 * params.k) * rho),
    ))
}

/// Exact initial moments. `⟨K_x⟩ = Re Z`, `⟨K_y⟩ = −Im Z` follow from the
/// eigenvalue relation.
pub fn bgcs_moments0(params: &BgcsParams) -> Result<MomentState> {
    let (kz, vz) = kz_moments(params)?;
    let z = params.z();
    let mean = Vector3::new(z.re, -z.im, kz);
    let cov = Matrix3::new(
        0.5 * kz,
        0.0,
        0.5 * z.re,
        0.0,
        0.5 * kz,
        -0.5 * z.im,
        0.5 * z.re,
        -0.5 * z.im,
        vz,
    );
    Ok(MomentState::new(mean, cov))
}

pub fn bgcs_transport(params: &BgcsParams, coeffs: &PropagatorCoefficients) -> Result<SqueezingReport> {
    let state = propagate_moments(&adjoint_matrix(coeffs), &bgcs_moments0(params)?);
    Ok(SqueezingReport::from_state(&state, EvalPath::Transport))
}

/// `(2|f|², 2|G|², 2Re(Z*f), 2Re(Z*G), 2Re(Z*h))` with `f, G, h` built from
/// the coefficients.
fn cross_terms(params: &BgcsParams, c: &PropagatorCoefficients) -> [f64; 5] {
    let z = params.z().conj();
    let f = Complex64::new(c.r1, -c.j) * 0.5;
    let g = Complex64::new(c.j, -c.r2) * 0.5;
    let h = Complex64::new(c.s, -c.v) * 0.5;
    [
        2.0 * f.norm_sqr(),
        2.0 * g.norm_sqr(),
        2.0 * (z * f).re,
        2.0 * (z * g).re,
        2.0 * (z * h).re,
    ]
}

/// The published variance formulas, evaluated verbatim.
///
/// Exact at `t = 0` and for `⟨K_z⟩`; the `S` and `V` cross terms in the
/// variances have the wrong phase for `t > 0`.
pub fn bgcs_variances(params: &BgcsParams, c: &PropagatorCoefficients) -> Result<SqueezingReport> {
    let (kz0, vz0) = kz_moments(params)?;
    let [ff, gg, zf, zg, zh] = cross_terms(params, c);
    let var_x = ff * kz0 - c.s * zf + c.s * c.s * vz0;
    let var_y = gg * kz0 - c.v * zg + c.v * c.v * vz0;
    let mean_kz = c.r3 * kz0 + zh;
    Ok(SqueezingReport::from_variances(
        var_x,
        var_y,
        mean_kz,
        EvalPath::PaperLiteral,
    ))
}

/// Published small-`|Z|` expansion (`ρ ≈ |Z|/(2k)`).
pub fn bgcs_variances_weak(params: &BgcsParams, c: &PropagatorCoefficients) -> SqueezingReport {
    let k = params.k;
    let z2k = params.zmag * params.zmag / (2.0 * k);
    let [ff, gg, zf, zg, zh] = cross_terms(params, c);
    let var_x = (ff + c.s * c.s) * z2k + k * ff - c.s * zf;
    let var_y = (gg + c.v * c.v) * z2k + k * gg - c.v * zg;
    let mean_kz = c.r3 * (k + z2k) + zh;
    SqueezingReport::from_variances(var_x, var_y, mean_kz, EvalPath::PaperLiteral)
}

/// Published large-`|Z|` expansion (`ρ ≈ 1`). Drops the `|Z|²(1 − ρ²)`
/// contribution to `⟨ΔK_z²⟩`, which stays of order `|Z|`.
pub fn bgcs_variances_strong(params: &BgcsParams, c: &PropagatorCoefficients) -> SqueezingReport {
    let k = params.k;
    let z = params.zmag;
    let [ff, gg, zf, zg, zh] = cross_terms(params, c);
    let var_x = ff * (k + z) - c.s * zf + z * (1.0 - 2.0 * k) * c.s * c.s;
    let var_y = gg * (k + z) - c.v * zg + z * (1.0 - 2.0 * k) * c.v * c.v;
    let mean_kz = c.r3 * (k + z) + zh;
    SqueezingReport::from_variances(var_x, var_y, mean_kz, EvalPath::PaperLiteral)
}

/// `|Z| → 0` factors, valid in every regime and continuous across resonance.
///
/// With `σ = sin²(gt)/g²` continued through the shared time kernel:
/// `F_x = 2λ²σ(2ω²σ − 1)/R₃`, `F_y = 2λ²σ cos(2gt)/R₃`.
pub fn bgcs_zero_intensity_factors(omega: f64, lambda: f64, t: f64) -> Result<(f64, f64)> {
    let coupling = CouplingParams::new(omega, lambda)?;
    let kern = time_kernel(&coupling, t)?;
    let sigma = kern.sin_sq_over_g2;
    let r3 = kern.cos_2gt + 2.0 * omega * omega * sigma;
    let pre = 2.0 * lambda * lambda * sigma / r3;
    Ok((
        pre * (2.0 * omega * omega * sigma - 1.0),
        pre * kern.cos_2gt,
    ))
}

/// The published zero-intensity forms in `τ = gt` (`τ = ωt` at resonance),
/// including `F_y = τ²/(2τ² + 1)` at resonance.
pub fn bgcs_zero_intensity_printed(coupling: &CouplingParams, tau: f64) -> (f64, f64) {
    let (w, l) = (coupling.omega(), coupling.lambda());
    match coupling.regime() {
        Regime::Resonance => {
            let t2 = tau * tau;
            (2.0 * t2 * (2.0 * t2 - 1.0) / (2.0 * t2 + 1.0), t2 / (2.0 * t2 + 1.0))
        }
        Regime::Oscillatory => {
            let g2 = coupling.g_squared();
            let s2 = tau.sin().powi(2);
            let r3 = (2.0 * tau).cos() + 2.0 * w * w / g2 * s2;
            let pre = 2.0 * l * l / (g2 * r3);
            (
                pre * (2.0 * w * w / g2 * s2 - 1.0) * s2,
                pre * (2.0 * tau).cos() * s2,
            )
        }
        Regime::Hyperbolic => {
            // g² → −γ² in the prefactors, sin → sinh.
            let gam2 = -coupling.g_squared();
            let s2 = tau.sinh().powi(2);
            let r3 = (2.0 * tau).cosh() + 2.0 * w * w / gam2 * s2;
            let pre = 2.0 * l * l / (gam2 * r3);
            (
                pre * (2.0 * w * w / gam2 * s2 - 1.0) * s2,
                pre * (2.0 * tau).cosh() * s2,
            )
        }
    }
}

/// Squeezing window at `|Z| → 0` for `λ > ω`: `F_x < 0` for
/// `γt < asinh(γ / (√2 ω))`.
pub fn bgcs_strong_coupling_window(omega: f64, lambda: f64) -> Result<f64> {
    let coupling = CouplingParams::new(omega, lambda)?;
    if coupling.regime() != Regime::Hyperbolic {
        return Err(Error::RegimeMismatch {
            expected: Regime::Hyperbolic,
            found: coupling.regime(),
        });
    }
    Ok((coupling.effective_frequency() / (std::f64::consts::SQRT_2 * omega)).asinh())
}

/// Convenience: exact report at `(ω, λ, t)`.
pub fn bgcs_transport_at(params: &BgcsParams, omega: f64, lambda: f64, t: f64) -> Result<SqueezingReport> {
    bgcs_transport(params, &coefficients(&CouplingParams::new(omega, lambda)?, t)?)
}
