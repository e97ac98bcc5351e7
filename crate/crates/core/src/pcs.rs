//! Perelomov coherent states `|ξ, k⟩` with `ξ = −tanh(r/2) e^{−iΦ}`.
//!
//! Two evaluation routes are provided. The `pcs_variances` family evaluates the
//! published closed forms as printed ([`EvalPath::PaperLiteral`]). The
//! `pcs_transport` family propagates the exact initial moments through the
//! SO(2,1) matrix ([`EvalPath::Transport`]). The two agree at `t = 0` and at
//! resonance; elsewhere the oracle decides which one is right.
//!
//! The state is the SU(1,1) orbit of the lowest weight along the unit
//! hyperboloid vector `n = (−sinh r cos Φ, −sinh r sin Φ, cosh r)`, so
//! `⟨K⟩ = k n` and `cov = (k/2)(η + n nᵀ)`.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{
    adjoint_matrix, coefficients, minkowski_metric, propagate_moments, CouplingParams,
    MomentState, PropagatorCoefficients, Regime,
};
use crate::squeeze::{EvalPath, Quadrature, SqueezingReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcsParams {
    pub r: f64,
    pub phi: f64,
    pub k: f64,
}

impl PcsParams {
    pub fn new(r: f64, phi: f64, k: f64) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::invalid("r", r, "must be finite"));
        }
        if !phi.is_finite() {
            return Err(Error::invalid("phi", phi, "must be finite"));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::invalid("k", k, "Bargmann index must be > 0"));
        }
        Ok(Self { r, phi, k })
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(-(0.5 * self.r).tanh(), -self.phi)
    }

    /// Unit hyperboloid vector `n` with `nᵀ η n = −1`.
    pub fn orbit_vector(&self) -> Vector3<f64> {
        let (s, c) = (self.r.sinh(), self.r.cosh());
        Vector3::new(-s * self.phi.cos(), -s * self.phi.sin(), c)
    }
}

/// Exact initial moments.
pub fn pcs_moments0(params: &PcsParams) -> MomentState {
    let n = params.orbit_vector();
    let k = params.k;
    MomentState::new(k * n, 0.5 * k * (minkowski_metric() + n * n.transpose()))
}

/// Exact moments after transport by the given coefficients.
pub fn pcs_transport(params: &PcsParams, coeffs: &PropagatorCoefficients) -> SqueezingReport {
    let state = propagate_moments(&adjoint_matrix(coeffs), &pcs_moments0(params));
    SqueezingReport::from_state(&state, EvalPath::Transport)
}

/// The published variance formulas, evaluated verbatim.
///
/// Correct at `t = 0` and for `⟨ΔK_y²⟩`, `⟨K_z⟩` at all times. The cross
/// term in `⟨ΔK_x²⟩` carries the wrong sign on `J` for `t > 0`.
pub fn pcs_variances(params: &PcsParams, c: &PropagatorCoefficients) -> SqueezingReport {
    let k = params.k;
    let xi = params.xi();
    let q = xi.norm_sqr();
    let one_minus_q = (0.5 * params.r).cosh().powi(-2);
    let f = Complex64::new(c.r1, -c.j) * 0.5;
    let g = Complex64::new(c.j, -c.r2) * 0.5;
    let h = Complex64::new(c.s, -c.v) * 0.5;
    let a = 2.0 * (xi.conj() * f).re;
    let b = 2.0 * (xi.conj() * g).re;
    let cz = 2.0 * (xi.conj() * h).re;
    let var_x = 2.0
        * k
        * (f.norm_sqr() + (c.s - a).powi(2) / one_minus_q.powi(2)
            + c.s * (a - c.s) / one_minus_q);
    let var_y = 2.0
        * k
        * (g.norm_sqr() + (c.v + b).powi(2) / one_minus_q.powi(2)
            - c.v * (b + c.v) / one_minus_q);
    let mean_kz = k / one_minus_q * ((1.0 + q) * c.r3 + 2.0 * cz);
    SqueezingReport::from_variances(var_x, var_y, mean_kz, EvalPath::PaperLiteral)
}

/// Initial factors in the published closed form, prefactor
/// `tanh²(r/2) / (1 − tanh⁴(r/2)) = sinh²r / (4 cosh r)`.
pub fn pcs_initial_factors(params: &PcsParams) -> (f64, f64) {
    let c = params.r.cosh();
    let pre = params.r.sinh().powi(2) / (4.0 * c);
    let (s2, c2) = (params.phi.sin().powi(2), params.phi.cos().powi(2));
    (pre * ((1.0 + c) * c2 - 1.0), pre * ((1.0 + c) * s2 - 1.0))
}

/// Exact initial factors: the same bracket with prefactor `(cosh r − 1)/cosh r`.
pub fn pcs_initial_factors_exact(params: &PcsParams) -> (f64, f64) {
    let c = params.r.cosh();
    // (cosh r − 1) computed without cancellation.
    let pre = 2.0 * (0.5 * params.r).sinh().powi(2) / c;
    let (s2, c2) = (params.phi.sin().powi(2), params.phi.cos().powi(2));
    (pre * ((1.0 + c) * c2 - 1.0), pre * ((1.0 + c) * s2 - 1.0))
}

/// The published squeezing inequality `1 + cos²Φ sinh²(2r) ≤ cosh(2r)`
/// (with `sin²Φ` for `y`). Equality counts as squeezed.
pub fn pcs_squeeze_condition(params: &PcsParams, quadrature: Quadrature) -> bool {
    let trig = match quadrature {
        Quadrature::X => params.phi.cos().powi(2),
        Quadrature::Y => params.phi.sin().powi(2),
    };
    let r2 = 2.0 * params.r;
    1.0 + trig * r2.sinh().powi(2) <= r2.cosh()
}

/// Resonance polynomials in `τ = ωt = λt`.
pub fn pcs_resonance_variances(params: &PcsParams, tau: f64) -> SqueezingReport {
    let k = params.k;
    let (s, c) = (params.r.sinh(), params.r.cosh());
    let (sp, cp) = params.phi.sin_cos();
    let chi = c - s * cp;
    let eps = |phi: f64| 0.25 * (1.0 + s * s * phi.cos().powi(2));
    let var_x = 2.0
        * k
        * (tau.powi(4) * chi * chi + tau * tau * (chi * s * cp + s * s * sp * sp)
            - 2.0 * tau.powi(3) * chi * s * sp
            - 0.5 * tau * s * s * (2.0 * params.phi).sin()
            + eps(params.phi));
    let var_y = 2.0
        * k
        * (tau * tau * chi * chi - tau * chi * s * sp
            + eps(params.phi + std::f64::consts::FRAC_PI_2));
    let mean_kz = 2.0 * k * (tau * tau * chi - tau * s * sp + 0.5 * c);
    SqueezingReport::from_variances(var_x, var_y, mean_kz, EvalPath::PaperLiteral)
}

/// Large-`τ` limit of `F_y` at resonance: `2(cosh r − sinh r cos Φ) − 1`.
pub fn pcs_resonance_fy_asymptote(params: &PcsParams) -> f64 {
    2.0 * (params.r.cosh() - params.r.sinh() * params.phi.cos()) - 1.0
}

/// Largest `λ/ω` accepted by [`pcs_weak_coupling_check`].
pub const WEAK_COUPLING_LIMIT: f64 = 0.2;

/// `max_j |F_j(r, Φ, t) − F_j(r, Φ + 2ωt, 0)|`: distance of the exact
/// evolution from a pure phase rotation.
pub fn pcs_weak_coupling_check(params: &PcsParams, omega: f64, lambda: f64, t: f64) -> Result<f64> {
    let coupling = CouplingParams::new(omega, lambda)?;
    let ratio = lambda / omega;
    if ratio > WEAK_COUPLING_LIMIT {
        return Err(Error::OutsideEnvelope {
            ratio,
            limit: WEAK_COUPLING_LIMIT,
        });
    }
    let now = pcs_transport(params, &coefficients(&coupling, t)?);
    let rotated = PcsParams {
        phi: params.phi + 2.0 * omega * t,
        ..*params
    };
    let (fx0, fy0) = pcs_initial_factors_exact(&rotated);
    Ok((now.f_x - fx0).abs().max((now.f_y - fy0).abs()))
}

/// Least-squares slopes of `ln ⟨ΔK_j²⟩` and `ln ⟨K_z⟩` against `τ = γt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthExponents {
    pub var_x: f64,
    pub var_y: f64,
    pub kz: f64,
}

/// Smallest `γt` accepted as the left edge of the fitting window.
pub const STRONG_COUPLING_MIN_TAU: f64 = 3.0;

const STRONG_COUPLING_SAMPLES: usize = 33;

pub fn pcs_strong_coupling_exponents(
    params: &PcsParams,
    omega: f64,
    lambda: f64,
    window: (f64, f64),
) -> Result<GrowthExponents> {
    let coupling = CouplingParams::new(omega, lambda)?;
    if coupling.regime() != Regime::Hyperbolic {
        return Err(Error::RegimeMismatch {
            expected: Regime::Hyperbolic,
            found: coupling.regime(),
        });
    }
    let (lo, hi) = window;
    if !(lo >= STRONG_COUPLING_MIN_TAU) {
        return Err(Error::invalid("tau_lo", lo, "window must start at gamma*t >= 3"));
    }
    if !(hi > lo) {
        return Err(Error::invalid("tau_hi", hi, "window must be non-empty"));
    }
    let gamma = coupling.effective_frequency();
    let mut taus = Vec::with_capacity(STRONG_COUPLING_SAMPLES);
    let mut logs = [const { Vec::new() }; 3];
    for i in 0..STRONG_COUPLING_SAMPLES {
        let tau = lo + (hi - lo) * i as f64 / (STRONG_COUPLING_SAMPLES - 1) as f64;
        let rep = pcs_transport(params, &coefficients(&coupling, tau / gamma)?);
        taus.push(tau);
        logs[0].push(rep.var_x.ln());
        logs[1].push(rep.var_y.ln());
        logs[2].push(rep.mean_kz.ln());
    }
    Ok(GrowthExponents {
        var_x: ls_slope(&taus, &logs[0]),
        var_y: ls_slope(&taus, &logs[1]),
        kz: ls_slope(&taus, &logs[2]),
    })
}

fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// `cov` of the lowest weight `|0, k⟩`, shared with the zero-intensity BGCS.
#[cfg(test)]
pub(crate) fn vacuum_moments(k: f64) -> MomentState {
    MomentState::new(
        Vector3::new(0.0, 0.0, k),
        nalgebra::Matrix3::from_diagonal(&Vector3::new(0.5 * k, 0.5 * k, 0.0)),
    )
}
