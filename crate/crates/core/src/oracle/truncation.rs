use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::bgcs::BgcsParams;
use crate::error::{Error, Result};
use crate::hamiltonian::{CouplingParams, MomentState};
use crate::pcs::PcsParams;
use crate::squeeze::{EvalPath, SqueezingReport};

use super::basis::{
    bgcs_fock_vector, expectations, pcs_fock_vector, FockBasisSpec, FockVector, Measurement,
};
use super::evolve::Factorization;

pub const DEFAULT_N_START: usize = 64;
pub const DEFAULT_N_MAX: usize = 4096;
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
/// Largest allowed shift of any moment between consecutive sizes,
/// relative to `max(1, |value|)`.
pub const DEFAULT_DRIFT_TOL: f64 = 1e-9;

/// Cached eigenvector storage is capped at this many `f64` entries.
const CACHE_ELEMENTS: usize = 1 << 25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub n_start: usize,
    pub n_max: usize,
    pub tail_tol: f64,
    pub drift_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_start: DEFAULT_N_START,
            n_max: DEFAULT_N_MAX,
            tail_tol: DEFAULT_TAIL_TOL,
            drift_tol: DEFAULT_DRIFT_TOL,
        }
    }
}

/// Result of a converged size ladder: the measurements at the final size,
/// one per requested time, and the drift from the size before it.
#[derive(Debug, Clone)]
pub struct Converged {
    pub spec: FockBasisSpec,
    pub measurements: Vec<Measurement>,
    pub drift: f64,
}

impl Converged {
    pub fn states(&self) -> Vec<MomentState> {
        self.measurements.iter().map(|m| m.state).collect()
    }

    pub fn reports(&self) -> Vec<SqueezingReport> {
        self.measurements
            .iter()
            .map(|m| SqueezingReport::from_state(&m.state, EvalPath::Oracle))
            .collect()
    }
}

fn moment_drift(a: &[Measurement], b: &[Measurement]) -> f64 {
    let mut drift: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        let pairs = x.state.mean.iter().zip(y.state.mean.iter());
        let cov = x.state.cov.iter().zip(y.state.cov.iter());
        for (p, q) in pairs.chain(cov) {
            drift = drift.max((p - q).abs() / q.abs().max(1.0));
        }
    }
    drift
}

/// Doubles `n_trunc` from `initial` until the built and evolved vectors pass
/// the tail test and every moment moves by at most `drift_tol` from the
/// previous size. Sizes whose vectors fail the tail test do not count as
/// the previous size.
pub fn adaptive_truncation<B, E>(
    initial: FockBasisSpec,
    n_max: usize,
    drift_tol: f64,
    mut builder: B,
    mut evolver: E,
) -> Result<Converged>
where
    B: FnMut(&FockBasisSpec) -> Result<FockVector>,
    E: FnMut(&FockVector) -> Result<Vec<FockVector>>,
{
    let mut spec = initial;
    let mut previous: Option<Vec<Measurement>> = None;
    let mut drift = f64::INFINITY;
    let mut tail_mass;
    loop {
        match builder(&spec).and_then(|v| evolver(&v)) {
            Ok(vectors) => {
                let current: Vec<Measurement> = vectors.iter().map(expectations).collect();
                tail_mass = current.iter().map(|m| m.tail_mass).fold(0.0, f64::max);
                if let Some(prev) = &previous {
                    drift = moment_drift(&current, prev);
                    if drift <= drift_tol {
                        return Ok(Converged {
                            spec,
                            measurements: current,
                            drift,
                        });
                    }
                }
                previous = Some(current);
            }
            Err(Error::TruncationInsufficient { tail_mass: m, .. }) => {
                tail_mass = m;
                previous = None;
            }
            Err(e) => return Err(e),
        }
        if 2 * spec.n_trunc > n_max {
            return Err(Error::ConvergenceFailure {
                n_max: spec.n_trunc,
                drift,
                tail_mass,
            });
        }
        spec = spec.with_size(2 * spec.n_trunc);
    }
}

type CacheKey = (u64, usize, u64, u64);

#[derive(Default)]
struct FactorCache {
    entries: HashMap<CacheKey, Arc<Factorization>>,
    order: Vec<CacheKey>,
    elements: usize,
}

/// Adaptive oracle with a shared cache of factorizations, keyed by
/// `(k, n, ω, λ)`. Safe to share across threads.
pub struct Oracle {
    config: OracleConfig,
    cache: Mutex<FactorCache>,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new(OracleConfig::default())
    }
}

impl Oracle {
    pub fn new(config: OracleConfig) -> Self {
        Self {
            config,
            cache: Mutex::new(FactorCache::default()),
        }
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    /// Factorization of the truncated Hamiltonian, computed at most once
    /// while it stays in the cache.
    pub fn factorization(
        &self,
        spec: &FockBasisSpec,
        coupling: &CouplingParams,
    ) -> Result<Arc<Factorization>> {
        let key = (
            spec.k.to_bits(),
            spec.n_trunc,
            coupling.omega().to_bits(),
            coupling.lambda().to_bits(),
        );
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(f) = cache.entries.get(&key) {
            return Ok(Arc::clone(f));
        }
        let f = Arc::new(Factorization::new(spec, coupling)?);
        let size = spec.n_trunc * spec.n_trunc;
        while cache.elements + size > CACHE_ELEMENTS && !cache.order.is_empty() {
            let old = cache.order.remove(0);
            if let Some(e) = cache.entries.remove(&old) {
                cache.elements -= e.size() * e.size();
            }
        }
        cache.entries.insert(key, Arc::clone(&f));
        cache.order.push(key);
        cache.elements += size;
        Ok(f)
    }

    fn ladder<B>(
        &self,
        k: f64,
        coupling: Option<&CouplingParams>,
        builder: B,
        times: &[f64],
    ) -> Result<Converged>
    where
        B: FnMut(&FockBasisSpec) -> Result<FockVector>,
    {
        if let Some(&t) = times.iter().find(|t| !t.is_finite()) {
            return Err(Error::NonFiniteTime(t));
        }
        let initial = FockBasisSpec::new(k, self.config.n_start, self.config.tail_tol)?;
        let evolver = |v: &FockVector| -> Result<Vec<FockVector>> {
            match coupling {
                Some(c) if times.iter().any(|&t| t != 0.0) => {
                    self.factorization(&v.spec, c)?.evolve_many(v, times)
                }
                _ => Ok(vec![v.clone(); times.len()]),
            }
        };
        adaptive_truncation(
            initial,
            self.config.n_max,
            self.config.drift_tol,
            builder,
            evolver,
        )
    }

    /// Converged PCS measurements at each of `times`.
    pub fn pcs(&self, params: &PcsParams, coupling: &CouplingParams, times: &[f64]) -> Result<Converged> {
        self.ladder(params.k, Some(coupling), |s| pcs_fock_vector(params, s), times)
    }

    /// Converged BGCS measurements at each of `times`.
    pub fn bgcs(&self, params: &BgcsParams, coupling: &CouplingParams, times: &[f64]) -> Result<Converged> {
        self.ladder(params.k, Some(coupling), |s| bgcs_fock_vector(params, s), times)
    }

    pub fn pcs_initial(&self, params: &PcsParams) -> Result<Measurement> {
        let c = self.ladder(params.k, None, |s| pcs_fock_vector(params, s), &[0.0])?;
        Ok(c.measurements[0])
    }

    pub fn bgcs_initial(&self, params: &BgcsParams) -> Result<Measurement> {
        let c = self.ladder(params.k, None, |s| bgcs_fock_vector(params, s), &[0.0])?;
        Ok(c.measurements[0])
    }

    pub fn pcs_report(&self, params: &PcsParams, coupling: &CouplingParams, t: f64) -> Result<SqueezingReport> {
        Ok(self.pcs(params, coupling, &[t])?.reports()[0])
    }

    pub fn bgcs_report(&self, params: &BgcsParams, coupling: &CouplingParams, t: f64) -> Result<SqueezingReport> {
        Ok(self.bgcs(params, coupling, &[t])?.reports()[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bgcs::bgcs_moments0;
    use crate::hamiltonian::{propagate_moments, transport_matrix};
    use crate::pcs::pcs_moments0;

    #[test]
    fn pcs_converges_at_small_size() {
        let oracle = Oracle::default();
        let params = PcsParams::new(1.0, 0.0, 0.5).unwrap();
        let m = oracle.pcs_initial(&params).unwrap();
        assert!((m.state.mean_kz() - 0.5 * 1f64.cosh()).abs() < 1e-12);
        let c = oracle.pcs(&params, &CouplingParams::new(1.0, 0.3).unwrap(), &[0.5]).unwrap();
        assert!(c.spec.n_trunc <= 128);
        assert!(c.drift <= DEFAULT_DRIFT_TOL);
    }

    #[test]
    fn large_bgcs_needs_several_hundred_levels() {
        let oracle = Oracle::default();
        let params = BgcsParams::new(200.0, 0.3, 0.5).unwrap();
        let c = oracle.bgcs(&params, &CouplingParams::new(3.0, 1.0).unwrap(), &[0.0]).unwrap();
        assert!(c.spec.n_trunc >= 512);
        let exact = bgcs_moments0(&params).unwrap();
        let got = c.measurements[0].state;
        assert!((got.mean - exact.mean).abs().max() < 1e-9 * exact.mean.abs().max());
    }

    #[test]
    fn strong_amplification_fails_at_cap() {
        let oracle = Oracle::default();
        let coupling = CouplingParams::new(1.0, 2.0).unwrap();
        let gamma = (-coupling.g_squared()).sqrt();
        let params = PcsParams::new(1.0, 0.0, 0.5).unwrap();
        assert!(matches!(
            oracle.pcs(&params, &coupling, &[6.0 / gamma]),
            Err(Error::ConvergenceFailure { .. })
        ));
    }

    #[test]
    fn batched_times_match_transport() {
        let oracle = Oracle::default();
        let params = PcsParams::new(0.8, 2.0, 1.0).unwrap();
        let coupling = CouplingParams::new(1.0, 1.0).unwrap();
        let times = [0.0, 0.4, 1.1];
        let c = oracle.pcs(&params, &coupling, &times).unwrap();
        let start = pcs_moments0(&params);
        for (m, &t) in c.measurements.iter().zip(&times) {
            let moved = propagate_moments(&transport_matrix(&coupling, t).unwrap(), &start);
            assert!((m.state.cov - moved.cov).abs().max() < 1e-9);
        }
    }

    #[test]
    fn cache_reuses_factorizations() {
        let oracle = Oracle::default();
        let spec = FockBasisSpec::new(0.5, 64, 1e-12).unwrap();
        let c = CouplingParams::new(1.0, 0.5).unwrap();
        let a = oracle.factorization(&spec, &c).unwrap();
        let b = oracle.factorization(&spec, &c).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
