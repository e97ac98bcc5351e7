use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::CouplingParams;

use super::basis::{FockBasisSpec, FockVector};

/// Spectral weights below this are dropped from the reconstruction.
const NEGLIGIBLE_WEIGHT: f64 = 1e-40;

/// Spectral decomposition `H = Q diag(E) Qᵀ` of the truncated Hamiltonian
/// `H = 2ω K_z + λ (K₊ + K₋)`, which is real symmetric tridiagonal here.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub spec: FockBasisSpec,
    pub coupling: CouplingParams,
    pub eigenvalues: Vec<f64>,
    /// Column-major `n × n`; eigenvector `j` occupies `[j n, (j+1) n)`.
    vectors: Vec<f64>,
}

impl Factorization {
    pub fn new(spec: &FockBasisSpec, coupling: &CouplingParams) -> Result<Self> {
        let n = spec.n_trunc;
        let (w, l) = (coupling.omega(), coupling.lambda());
        let mut d: Vec<f64> = spec.weights().into_iter().map(|x| 2.0 * w * x).collect();
        // dstemr uses e[n-1] as workspace.
        let mut e: Vec<f64> = spec.raising_elements().into_iter().map(|x| l * x).collect();
        e.push(0.0);
        let mut eigenvalues = vec![0.0; n];
        let mut z = vec![0.0; n * n];
        let mut isuppz = vec![0i32; 2 * n];
        let mut work = vec![0.0; 18 * n];
        let mut iwork = vec![0i32; 10 * n];
        let (lwork, liwork) = (work.len() as i32, iwork.len() as i32);
        let (mut found, mut tryrac, mut info) = (0, 1, 0);
        let n32 = n as i32;
        // SAFETY: buffer sizes follow the dstemr contract for JOBZ = 'V', RANGE = 'A'.
        unsafe {
            lapack::dstemr(
                b'V', b'A', n32, &mut d, &mut e, 0.0, 0.0, 0, 0, &mut found, &mut eigenvalues,
                &mut z, n32, &[n32], &mut isuppz, &mut tryrac, &mut work, lwork, &mut iwork,
                liwork, &mut info,
            );
        }
        if info != 0 || found != n32 {
            return Err(Error::Eigensolver { info });
        }
        Ok(Self {
            spec: *spec,
            coupling: *coupling,
            eigenvalues,
            vectors: z,
        })
    }

    /// `max |QᵀQ − I|` over the columns `0, stride, 2·stride, …` against all
    /// columns.
    pub fn orthogonality_defect(&self, stride: usize) -> f64 {
        let n = self.size();
        let mut worst: f64 = 0.0;
        for i in (0..n).step_by(stride.max(1)) {
            for j in 0..n {
                let dot: f64 = self.column(i).iter().zip(self.column(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    pub fn size(&self) -> usize {
        self.spec.n_trunc
    }

    fn column(&self, j: usize) -> &[f64] {
        let n = self.size();
        &self.vectors[j * n..(j + 1) * n]
    }

    /// Spectral coordinates `Qᵀ v`.
    pub fn project(&self, v: &FockVector) -> Vec<Complex64> {
        let s = v.support();
        (0..self.size())
            .map(|j| {
                let col = &self.column(j)[..s];
                col.iter().zip(&v.amps[..s]).map(|(q, a)| a * q).sum()
            })
            .collect()
    }

    /// `Q diag(e^{−iEt}) c`.
    pub fn reconstruct(&self, coords: &[Complex64], t: f64) -> FockVector {
        let n = self.size();
        let mut out = vec![Complex64::from(0.0); n];
        for (j, c) in coords.iter().enumerate() {
            if c.norm_sqr() < NEGLIGIBLE_WEIGHT {
                continue;
            }
            let amp = c * Complex64::from_polar(1.0, -self.eigenvalues[j] * t);
            for (o, q) in out.iter_mut().zip(self.column(j)) {
                *o += amp * q;
            }
        }
        FockVector {
            amps: out,
            spec: self.spec,
        }
    }

    /// `e^{−iHt} v` without the tail check.
    pub fn evolve_unchecked(&self, v: &FockVector, t: f64) -> FockVector {
        self.reconstruct(&self.project(v), t)
    }

    /// `e^{−iHt} v`, failing if the evolved state reaches the top of the basis.
    pub fn evolve(&self, v: &FockVector, t: f64) -> Result<FockVector> {
        if !t.is_finite() {
            return Err(Error::NonFiniteTime(t));
        }
        self.evolve_unchecked(v, t).check_tail()
    }

    /// Evolves one vector to several times from a single projection.
    pub fn evolve_many(&self, v: &FockVector, times: &[f64]) -> Result<Vec<FockVector>> {
        if let Some(&t) = times.iter().find(|t| !t.is_finite()) {
            return Err(Error::NonFiniteTime(t));
        }
        let coords = self.project(v);
        times
            .iter()
            .map(|&t| self.reconstruct(&coords, t).check_tail())
            .collect()
    }
}

/// Convenience wrapper matching `evolve(spec, coupling, v, t)`.
pub fn evolve(spec: &FockBasisSpec, coupling: &CouplingParams, v: &FockVector, t: f64) -> Result<FockVector> {
    Factorization::new(spec, coupling)?.evolve(v, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{propagate_moments, transport_matrix};
    use crate::oracle::basis::{expectations, pcs_fock_vector};
    use crate::pcs::PcsParams;

    fn setup(n: usize) -> (FockBasisSpec, FockVector) {
        let spec = FockBasisSpec::new(0.5, n, 1e-12).unwrap();
        let v = pcs_fock_vector(&PcsParams::new(1.0, 1.0, 0.5).unwrap(), &spec).unwrap();
        (spec, v)
    }

    #[test]
    fn identity_at_time_zero() {
        let (spec, v) = setup(128);
        let f = Factorization::new(&spec, &CouplingParams::new(1.0, 0.3).unwrap()).unwrap();
        let w = f.evolve(&v, 0.0).unwrap();
        let err = w.amps.iter().zip(&v.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-13);
    }

    #[test]
    fn free_evolution_is_diagonal() {
        let (spec, v) = setup(128);
        let t = 0.77;
        let w = evolve(&spec, &CouplingParams::new(1.3, 0.0).unwrap(), &v, t).unwrap();
        for (m, (a, b)) in w.amps.iter().zip(&v.amps).enumerate() {
            let phase = Complex64::from_polar(1.0, -2.0 * 1.3 * (m as f64 + 0.5) * t);
            assert!((a - b * phase).norm() < 1e-13);
        }
    }

    #[test]
    fn unitary_and_matches_transport() {
        let (spec, v) = setup(256);
        let coupling = CouplingParams::new(1.0, 0.3).unwrap();
        let w = evolve(&spec, &coupling, &v, 0.9).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-12);
        let before = expectations(&v).state;
        let after = expectations(&w).state;
        let moved = propagate_moments(&transport_matrix(&coupling, 0.9).unwrap(), &before);
        assert!((after.mean - moved.mean).abs().max() < 1e-10);
        assert!((after.cov - moved.cov).abs().max() < 1e-10);
    }

    #[test]
    fn evolve_many_matches_single() {
        let (spec, v) = setup(128);
        let f = Factorization::new(&spec, &CouplingParams::new(1.0, 1.0).unwrap()).unwrap();
        let many = f.evolve_many(&v, &[0.1, 0.5]).unwrap();
        assert_eq!(many[1], f.evolve(&v, 0.5).unwrap());
        assert!(f.evolve(&v, f64::NAN).is_err());
    }

    #[test]
    fn eigenvectors_stay_orthonormal() {
        for &(w, l) in &[(1.0, 10.0), (3.0, 1.0), (1.0, 1.0)] {
            let spec = FockBasisSpec::new(0.5, 512, 1e-12).unwrap();
            let f = Factorization::new(&spec, &CouplingParams::new(w, l).unwrap()).unwrap();
            assert!(f.orthogonality_defect(16) < 1e-11);
        }
    }

    #[test]
    fn amplification_overruns_small_basis() {
        let (spec, v) = setup(64);
        let coupling = CouplingParams::new(1.0, 2.0).unwrap();
        assert!(matches!(
            evolve(&spec, &coupling, &v, 2.0),
            Err(Error::TruncationInsufficient { .. })
        ));
    }
}
