//! Formula checks: each published closed form against a reference over a
//! fixed sampling set.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use crate::bgcs::{
    bgcs_strong_coupling_window, bgcs_variances, bgcs_variances_strong, bgcs_variances_weak,
    bgcs_zero_intensity_printed, BgcsParams,
};
use crate::error::Result;
use crate::hamiltonian::{coefficients, CouplingParams};
use crate::oracle::Oracle;
use crate::pcs::{
    pcs_initial_factors, pcs_resonance_fy_asymptote, pcs_resonance_variances, pcs_transport,
    pcs_variances, PcsParams,
};
use crate::squeeze::{EvalPath, SqueezingReport};

use super::{Reference, Sample};

/// `|a − b| / max(1, |b|)`.
pub fn deviation(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

#[derive(Debug, Clone, Copy)]
pub enum Quantity {
    VarX,
    VarY,
    MeanKz,
    /// Both squeezing factors.
    Factors,
}

impl Quantity {
    fn deviation(&self, a: &SqueezingReport, b: &SqueezingReport) -> f64 {
        match self {
            Quantity::VarX => deviation(a.var_x, b.var_x),
            Quantity::VarY => deviation(a.var_y, b.var_y),
            Quantity::MeanKz => deviation(a.mean_kz, b.mean_kz),
            Quantity::Factors => deviation(a.f_x, b.f_x).max(deviation(a.f_y, b.f_y)),
        }
    }
}

/// One formula check.
pub struct CheckSpec {
    pub id: &'static str,
    pub description: &'static str,
    pub reference: Reference,
    pub tolerance: f64,
    /// Must agree regardless of what the ledger says.
    pub required: bool,
    pub run: fn(&Oracle) -> Result<Vec<Sample>>,
}

const PCS_STATES: [(f64, f64, f64); 4] = [(1.0, 1.0, 0.5), (0.5, 2.5, 1.0), (-0.8, 0.3, 0.25), (1.0, 0.0, 0.5)];
const BGCS_STATES: [(f64, f64, f64); 3] = [(2.0, 1.0, 0.5), (0.7, 2.0, 1.0), (1.5, 4.0, 0.25)];
/// `(ω, λ, t)` covering the three regimes.
const COUPLINGS: [(f64, f64, f64); 4] = [(1.0, 0.3, 0.9), (3.0, 1.0, 1.0), (1.0, 1.0, 0.7), (1.0, 2.0, 0.5)];

fn pcs(p: (f64, f64, f64)) -> Result<PcsParams> {
    PcsParams::new(p.0, p.1, p.2)
}

fn bgcs(p: (f64, f64, f64)) -> Result<BgcsParams> {
    BgcsParams::new(p.0, p.1, p.2)
}

fn sample(label: String, deviation: f64) -> Sample {
    Sample { label, deviation }
}

fn pcs_printed_vs_oracle(oracle: &Oracle, q: Quantity, times: bool) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for s in PCS_STATES {
        let p = pcs(s)?;
        let couplings: Vec<(f64, f64, f64)> = if times { COUPLINGS.to_vec() } else { vec![(1.0, 0.3, 0.0)] };
        for (w, l, t) in couplings {
            let c = CouplingParams::new(w, l)?;
            let printed = pcs_variances(&p, &coefficients(&c, t)?);
            let truth = oracle.pcs_report(&p, &c, t)?;
            out.push(sample(
                format!("r={} phi={} k={} omega={w} lambda={l} t={t}", s.0, s.1, s.2),
                q.deviation(&printed, &truth),
            ));
        }
    }
    Ok(out)
}

fn pcs_initial(oracle: &Oracle) -> Result<Vec<Sample>> {
    let mut states = PCS_STATES.to_vec();
    states.extend([(1.0, FRAC_PI_2, 0.5), (2.5, FRAC_PI_2, 0.5)]);
    let mut out = Vec::new();
    for s in states {
        let p = pcs(s)?;
        let (fx, fy) = pcs_initial_factors(&p);
        let truth = SqueezingReport::from_state(&oracle.pcs_initial(&p)?.state, EvalPath::Oracle);
        out.push(sample(
            format!("r={} phi={} k={}", s.0, s.1, s.2),
            deviation(fx, truth.f_x).max(deviation(fy, truth.f_y)),
        ));
    }
    Ok(out)
}

fn pcs_resonance(oracle: &Oracle, q: Quantity) -> Result<Vec<Sample>> {
    let c = CouplingParams::new(1.0, 1.0)?;
    let mut out = Vec::new();
    for s in PCS_STATES {
        let p = pcs(s)?;
        for tau in [0.0, 0.5, 1.0] {
            let poly = pcs_resonance_variances(&p, tau);
            let truth = oracle.pcs_report(&p, &c, tau)?;
            out.push(sample(
                format!("r={} phi={} k={} tau={tau}", s.0, s.1, s.2),
                q.deviation(&poly, &truth),
            ));
        }
    }
    Ok(out)
}

/// Large-`τ` limit against the transport path far out at resonance.
fn pcs_asymptote(_: &Oracle) -> Result<Vec<Sample>> {
    const FAR: f64 = 1e10;
    let c = CouplingParams::new(1.0, 1.0)?;
    let mut out = Vec::new();
    for s in PCS_STATES.iter().chain(&[(0.6931471805599453, 0.0, 0.5), (2.0, 0.0, 0.5)]) {
        let p = pcs(*s)?;
        let far = pcs_transport(&p, &coefficients(&c, FAR)?);
        out.push(sample(
            format!("r={} phi={} k={} tau={FAR:e}", s.0, s.1, s.2),
            deviation(pcs_resonance_fy_asymptote(&p), far.f_y),
        ));
    }
    Ok(out)
}

fn bgcs_printed_vs_oracle(oracle: &Oracle, q: Quantity, times: bool) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for s in BGCS_STATES {
        let p = bgcs(s)?;
        let couplings: Vec<(f64, f64, f64)> = if times { COUPLINGS.to_vec() } else { vec![(3.0, 1.0, 0.0)] };
        for (w, l, t) in couplings {
            let c = CouplingParams::new(w, l)?;
            let printed = bgcs_variances(&p, &coefficients(&c, t)?)?;
            let truth = oracle.bgcs_report(&p, &c, t)?;
            out.push(sample(
                format!("zmag={} phi={} k={} omega={w} lambda={l} t={t}", s.0, s.1, s.2),
                q.deviation(&printed, &truth),
            ));
        }
    }
    Ok(out)
}

fn bgcs_weak(oracle: &Oracle) -> Result<Vec<Sample>> {
    let c = CouplingParams::new(3.0, 1.0)?;
    let mut out = Vec::new();
    for (phi, k) in [(1.0, 0.5), (2.0, 1.0)] {
        let p = BgcsParams::new(1e-3, phi, k)?;
        let approx = bgcs_variances_weak(&p, &coefficients(&c, 1.0)?);
        let truth = oracle.bgcs_report(&p, &c, 1.0)?;
        let dev = [Quantity::VarX, Quantity::VarY, Quantity::MeanKz]
            .iter()
            .map(|q| q.deviation(&approx, &truth))
            .fold(0.0, f64::max);
        out.push(sample(format!("zmag=0.001 phi={phi} k={k} omega=3 lambda=1 t=1"), dev));
    }
    Ok(out)
}

fn bgcs_strong(oracle: &Oracle) -> Result<Vec<Sample>> {
    let c = CouplingParams::new(3.0, 1.0)?;
    let t = FRAC_PI_2;
    let mut out = Vec::new();
    for phi in [0.5, 2.0] {
        let p = BgcsParams::new(200.0, phi, 0.5)?;
        let approx = bgcs_variances_strong(&p, &coefficients(&c, t)?);
        let truth = oracle.bgcs_report(&p, &c, t)?;
        out.push(sample(
            format!("zmag=200 phi={phi} k=0.5 omega=3 lambda=1 t=pi/2"),
            Quantity::Factors.deviation(&approx, &truth),
        ));
    }
    Ok(out)
}

/// Printed zero-intensity factors against the evolved lowest weight.
fn zero_intensity(oracle: &Oracle, cases: &[(f64, f64, f64)], pick: fn(f64, f64) -> (f64, f64)) -> Result<Vec<Sample>> {
    let vacuum = BgcsParams::new(0.0, 0.0, 0.5)?;
    let mut out = Vec::new();
    for &(w, l, tau) in cases {
        let c = CouplingParams::new(w, l)?;
        let rate = if c.g_squared() == 0.0 { w } else { c.effective_frequency() };
        let (px, py) = bgcs_zero_intensity_printed(&c, tau);
        let truth = oracle.bgcs_report(&vacuum, &c, tau / rate)?;
        let (dx, dy) = (deviation(px, truth.f_x), deviation(py, truth.f_y));
        let (a, b) = pick(dx, dy);
        out.push(sample(format!("omega={w} lambda={l} tau={tau}"), a.max(b)));
    }
    Ok(out)
}

const OSCILLATORY_TAUS: [(f64, f64, f64); 6] =
    [(3.0, 1.0, 0.4), (3.0, 1.0, 1.0), (3.0, 1.0, FRAC_PI_2), (1.0, 0.3, 0.4), (1.0, 0.3, 1.0), (1.0, 0.3, 2.0)];
const HYPERBOLIC_TAUS: [(f64, f64, f64); 4] = [(1.0, 2.0, 0.3), (1.0, 2.0, 1.0), (1.0, 10.0, 0.3), (1.0, 10.0, 1.0)];
const RESONANCE_TAUS: [(f64, f64, f64); 3] = [(1.0, 1.0, 0.3), (1.0, 1.0, FRAC_1_SQRT_2), (1.0, 1.0, 1.5)];

fn fx_root(oracle: &Oracle) -> Result<Vec<Sample>> {
    let c = CouplingParams::new(1.0, 1.0)?;
    let (printed, _) = bgcs_zero_intensity_printed(&c, FRAC_1_SQRT_2);
    let truth = oracle.bgcs_report(&BgcsParams::new(0.0, 0.0, 0.5)?, &c, FRAC_1_SQRT_2)?;
    Ok(vec![
        sample("printed f_x at tau=1/sqrt(2)".into(), printed.abs()),
        sample("oracle f_x at tau=1/sqrt(2)".into(), truth.f_x.abs()),
    ])
}

fn window_boundary(oracle: &Oracle) -> Result<Vec<Sample>> {
    let vacuum = BgcsParams::new(0.0, 0.0, 0.5)?;
    let mut out = Vec::new();
    for (w, l) in [(1.0, 10.0), (1.0, 2.0)] {
        let c = CouplingParams::new(w, l)?;
        let tau = bgcs_strong_coupling_window(w, l)?;
        let (printed, _) = bgcs_zero_intensity_printed(&c, tau);
        let truth = oracle.bgcs_report(&vacuum, &c, tau / c.effective_frequency())?;
        out.push(sample(format!("printed f_x at tau_max, omega={w} lambda={l}"), printed.abs()));
        out.push(sample(format!("oracle f_x at tau_max, omega={w} lambda={l}"), truth.f_x.abs()));
    }
    Ok(out)
}

pub const TOLERANCE: f64 = 1e-8;

pub fn all_checks() -> Vec<CheckSpec> {
    use Reference::*;
    let check = |id, description, reference, tolerance, required, run| CheckSpec {
        id,
        description,
        reference,
        tolerance,
        required,
        run,
    };
    vec![
        check("pcs.variances.var_x", "PCS closed-form Var(K_x) for t > 0", Oracle, TOLERANCE, false,
            |o| pcs_printed_vs_oracle(o, Quantity::VarX, true)),
        check("pcs.variances.var_y", "PCS closed-form Var(K_y) for t > 0", Oracle, TOLERANCE, false,
            |o| pcs_printed_vs_oracle(o, Quantity::VarY, true)),
        check("pcs.variances.mean_kz", "PCS closed-form <K_z> for t > 0", Oracle, TOLERANCE, false,
            |o| pcs_printed_vs_oracle(o, Quantity::MeanKz, true)),
        check("pcs.variances.t0", "PCS closed-form factors at t = 0", Oracle, TOLERANCE, false,
            |o| pcs_printed_vs_oracle(o, Quantity::Factors, false)),
        check("pcs.initial_factors", "PCS initial factors in the printed closed form", Oracle, TOLERANCE, false,
            pcs_initial),
        check("pcs.resonance.var_x", "PCS resonance polynomial Var(K_x)", Oracle, TOLERANCE, false,
            |o| pcs_resonance(o, Quantity::VarX)),
        check("pcs.resonance.var_y", "PCS resonance polynomial Var(K_y)", Oracle, TOLERANCE, false,
            |o| pcs_resonance(o, Quantity::VarY)),
        check("pcs.resonance.mean_kz", "PCS resonance polynomial <K_z>", Oracle, TOLERANCE, true,
            |o| pcs_resonance(o, Quantity::MeanKz)),
        check("pcs.resonance.fy_asymptote", "PCS resonance large-tau F_y", Transport, TOLERANCE, false,
            pcs_asymptote),
        check("bgcs.variances.t0", "BGCS closed-form moments at t = 0", Oracle, TOLERANCE, true,
            |o| bgcs_printed_vs_oracle(o, Quantity::Factors, false)),
        check("bgcs.variances.var_x", "BGCS closed-form Var(K_x) for t > 0", Oracle, TOLERANCE, false,
            |o| bgcs_printed_vs_oracle(o, Quantity::VarX, true)),
        check("bgcs.variances.var_y", "BGCS closed-form Var(K_y) for t > 0", Oracle, TOLERANCE, false,
            |o| bgcs_printed_vs_oracle(o, Quantity::VarY, true)),
        check("bgcs.variances.mean_kz", "BGCS closed-form <K_z> for t > 0", Oracle, TOLERANCE, false,
            |o| bgcs_printed_vs_oracle(o, Quantity::MeanKz, true)),
        check("bgcs.weak", "BGCS small-|Z| expansion at |Z| = 1e-3", Oracle, 1e-6, false, bgcs_weak),
        check("bgcs.strong", "BGCS large-|Z| expansion at |Z| = 200 (factors)", Oracle, 1e-2, false, bgcs_strong),
        check("bgcs.zero_intensity.oscillatory", "BGCS |Z| -> 0 factors, omega > lambda", Oracle, TOLERANCE, false,
            |o| zero_intensity(o, &OSCILLATORY_TAUS, |x, y| (x, y))),
        check("bgcs.zero_intensity.hyperbolic", "BGCS |Z| -> 0 factors, lambda > omega", Oracle, TOLERANCE, false,
            |o| zero_intensity(o, &HYPERBOLIC_TAUS, |x, y| (x, y))),
        check("bgcs.zero_intensity.resonance.f_x", "BGCS |Z| -> 0 F_x at resonance", Oracle, TOLERANCE, false,
            |o| zero_intensity(o, &RESONANCE_TAUS, |x, _| (x, 0.0))),
        check("bgcs.zero_intensity.resonance.f_y", "BGCS |Z| -> 0 F_y at resonance", Oracle, TOLERANCE, false,
            |o| zero_intensity(o, &RESONANCE_TAUS, |_, y| (0.0, y))),
        check("bgcs.zero_intensity.resonance.fx_root", "BGCS |Z| -> 0 F_x vanishes at tau = 1/sqrt(2)", Oracle, TOLERANCE, true,
            fx_root),
        check("bgcs.strong_coupling_window", "BGCS squeezing window edge is a zero of F_x", Oracle, TOLERANCE, true,
            window_boundary),
    ]
}
