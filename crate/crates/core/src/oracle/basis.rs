use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bgcs::BgcsParams;
use crate::error::{Error, Result};
use crate::hamiltonian::MomentState;
use crate::pcs::PcsParams;
use crate::special::log_gamma_unchecked;

/// Truncated discrete-series basis `|m; k⟩`, `m = 0 … n_trunc − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockBasisSpec {
    pub k: f64,
    pub n_trunc: usize,
    pub tail_tol: f64,
}

pub const MIN_TRUNCATION: usize = 4;
pub const MAX_TAIL_TOL: f64 = 1e-6;

impl FockBasisSpec {
    pub fn new(k: f64, n_trunc: usize, tail_tol: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::invalid("k", k, "Bargmann index must be > 0"));
        }
        if n_trunc < MIN_TRUNCATION {
            return Err(Error::invalid("n_trunc", n_trunc as f64, "must be >= 4"));
        }
        if !(tail_tol > 0.0 && tail_tol <= MAX_TAIL_TOL) {
            return Err(Error::invalid("tail_tol", tail_tol, "must lie in (0, 1e-6]"));
        }
        Ok(Self {
            k,
            n_trunc,
            tail_tol,
        })
    }

    pub fn with_size(&self, n_trunc: usize) -> Self {
        Self { n_trunc, ..*self }
    }

    /// First level of the top-eighth window used for the tail test.
    pub fn tail_start(&self) -> usize {
        self.n_trunc - self.n_trunc / 8
    }

    /// `√((m+1)(m+2k))`, the `m → m+1` element of `K₊`, for `m = 0 … n−2`.
    pub fn raising_elements(&self) -> Vec<f64> {
        (0..self.n_trunc - 1)
            .map(|m| ((m as f64 + 1.0) * (m as f64 + 2.0 * self.k)).sqrt())
            .collect()
    }

    /// `m + k`, the diagonal of `K_z`.
    pub fn weights(&self) -> Vec<f64> {
        (0..self.n_trunc).map(|m| m as f64 + self.k).collect()
    }
}

/// Dense generator matrices, for algebra checks and small-basis inspection.
#[derive(Debug, Clone)]
pub struct Generators {
    pub kz: DMatrix<Complex64>,
    pub kplus: DMatrix<Complex64>,
    pub kminus: DMatrix<Complex64>,
    pub kx: DMatrix<Complex64>,
    pub ky: DMatrix<Complex64>,
}

pub fn build_generators(spec: &FockBasisSpec) -> Generators {
    let n = spec.n_trunc;
    let kz = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        spec.weights().into_iter().map(Complex64::from),
    ));
    let mut kplus = DMatrix::zeros(n, n);
    for (m, e) in spec.raising_elements().into_iter().enumerate() {
        kplus[(m + 1, m)] = Complex64::from(e);
    }
    let kminus = kplus.adjoint();
    let kx = (&kplus + &kminus) * Complex64::from(0.5);
    let ky = (&kplus - &kminus) * Complex64::new(0.0, -0.5);
    Generators {
        kz,
        kplus,
        kminus,
        kx,
        ky,
    }
}

/// Amplitudes below `e^{-80}` of the peak are stored as exact zeros, which
/// bounds the support seen by the propagator.
const LOG_AMPLITUDE_FLOOR: f64 = -80.0;

/// Amplitudes on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amps: Vec<Complex64>,
    pub spec: FockBasisSpec,
}

impl FockVector {
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ_{m ≥ n − n/8} |a_m|²`.
    pub fn tail_mass(&self) -> f64 {
        self.amps[self.spec.tail_start()..]
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    }

    pub fn check_tail(self) -> Result<Self> {
        let tail_mass = self.tail_mass();
        if tail_mass < self.spec.tail_tol {
            Ok(self)
        } else {
            Err(Error::TruncationInsufficient {
                n_trunc: self.spec.n_trunc,
                tail_mass,
            })
        }
    }

    /// One past the last non-zero amplitude.
    pub fn support(&self) -> usize {
        self.amps
            .iter()
            .rposition(|a| a.re != 0.0 || a.im != 0.0)
            .map_or(0, |i| i + 1)
    }

    /// Ground state of the irrep.
    pub fn lowest_weight(spec: &FockBasisSpec) -> Self {
        let mut amps = vec![Complex64::from(0.0); spec.n_trunc];
        amps[0] = Complex64::from(1.0);
        Self { amps, spec: *spec }
    }

    fn from_log_amplitudes(spec: &FockBasisSpec, log_mag: &[f64], phase_step: f64) -> Result<Self> {
        let top = log_mag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut amps: Vec<Complex64> = log_mag
            .iter()
            .enumerate()
            .map(|(m, l)| {
                if l - top < LOG_AMPLITUDE_FLOOR {
                    Complex64::from(0.0)
                } else {
                    Complex64::from_polar((l - top).exp(), m as f64 * phase_step)
                }
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Self { amps, spec: *spec }.check_tail()
    }

    pub fn apply_kminus(&self) -> Vec<Complex64> {
        let kp = self.spec.raising_elements();
        let n = self.amps.len();
        let mut out = vec![Complex64::from(0.0); n];
        for m in 0..n - 1 {
            out[m] = self.amps[m + 1] * kp[m];
        }
        out
    }
}

/// `|ξ, k⟩ ∝ Σ_m √(Γ(m+2k) / (m! Γ(2k))) ξ^m |m; k⟩`.
pub fn pcs_fock_vector(params: &PcsParams, spec: &FockBasisSpec) -> Result<FockVector> {
    check_k(params.k, spec)?;
    let xi = params.xi();
    if xi.norm() == 0.0 {
        return Ok(FockVector::lowest_weight(spec));
    }
    let ln_xi = xi.norm().ln();
    let two_k = 2.0 * spec.k;
    let log_mag: Vec<f64> = (0..spec.n_trunc)
        .map(|m| {
            let m = m as f64;
            0.5 * (log_gamma_unchecked(m + two_k) - log_gamma_unchecked(m + 1.0)) + m * ln_xi
        })
        .collect();
    FockVector::from_log_amplitudes(spec, &log_mag, xi.arg())
}

/// `|Z, k⟩ ∝ Σ_m Z^m / √(m! Γ(m+2k)) |m; k⟩`.
pub fn bgcs_fock_vector(params: &BgcsParams, spec: &FockBasisSpec) -> Result<FockVector> {
    check_k(params.k, spec)?;
    if params.zmag == 0.0 {
        return Ok(FockVector::lowest_weight(spec));
    }
    let ln_z = params.zmag.ln();
    let two_k = 2.0 * spec.k;
    let log_mag: Vec<f64> = (0..spec.n_trunc)
        .map(|m| {
            let m = m as f64;
            m * ln_z - 0.5 * (log_gamma_unchecked(m + 1.0) + log_gamma_unchecked(m + two_k))
        })
        .collect();
    FockVector::from_log_amplitudes(spec, &log_mag, params.phi)
}

fn check_k(k: f64, spec: &FockBasisSpec) -> Result<()> {
    if k != spec.k {
        return Err(Error::invalid("k", k, "state and basis disagree on the Bargmann index"));
    }
    Ok(())
}

/// Moments measured on a vector, with the consistency quantities the
/// oracle reports alongside them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub state: MomentState,
    /// `⟨K_z²⟩ − ⟨K_x²⟩ − ⟨K_y²⟩`.
    pub casimir: f64,
    pub norm: f64,
    pub tail_mass: f64,
    /// Largest imaginary part discarded from `⟨K_i⟩` and `⟨K_i K_j⟩`.
    pub imag_residue: f64,
}

/// `⟨K_i⟩ = ⟨v|K_i v⟩` and `½⟨{K_i, K_j}⟩ = Re⟨K_i v|K_j v⟩`.
pub fn expectations(v: &FockVector) -> Measurement {
    let n = v.amps.len();
    let kp = v.spec.raising_elements();
    let w = v.spec.weights();
    let zero = Complex64::from(0.0);
    let mut kx = vec![zero; n];
    let mut ky = vec![zero; n];
    let mut kz = vec![zero; n];
    let minus_half_i = Complex64::new(0.0, -0.5);
    for m in 0..n {
        let up = if m > 0 { v.amps[m - 1] * kp[m - 1] } else { zero };
        let down = if m + 1 < n { v.amps[m + 1] * kp[m] } else { zero };
        kx[m] = (up + down) * 0.5;
        ky[m] = (up - down) * minus_half_i;
        kz[m] = v.amps[m] * w[m];
    }
    let ops = [&kx, &ky, &kz];
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    };
    let mut imag_residue: f64 = 0.0;
    let mut mean = Vector3::zeros();
    for i in 0..3 {
        let e = dot(&v.amps, ops[i]);
        imag_residue = imag_residue.max(e.im.abs());
        mean[i] = e.re;
    }
    let mut second = nalgebra::Matrix3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let e = dot(ops[i], ops[j]);
            if i == j {
                imag_residue = imag_residue.max(e.im.abs());
            }
            second[(i, j)] = e.re;
            second[(j, i)] = e.re;
        }
    }
    let cov = second - mean * mean.transpose();
    Measurement {
        state: MomentState::new(mean, cov),
        casimir: second[(2, 2)] - second[(0, 0)] - second[(1, 1)],
        norm: v.norm(),
        tail_mass: v.tail_mass(),
        imag_residue,
    }
}
