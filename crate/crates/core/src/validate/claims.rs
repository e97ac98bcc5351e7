//! Qualitative statements about the squeezed regions, measured on the
//! transport path (validated against the oracle elsewhere).

use std::f64::consts::{LN_2, PI};

use crate::bgcs::{bgcs_transport_at, bgcs_zero_intensity_factors, BgcsParams};
use crate::error::Result;
use crate::hamiltonian::{coefficients, CouplingParams};
use crate::pcs::{pcs_transport, PcsParams};
use crate::scan::{figure_preset, Axis, AxisName, FigureData, Mask, RegionMap, Scanner};
use crate::squeeze::EvalPath;

/// Samples per axis for the plane-based claims.
const STEPS: usize = 101;

pub struct ClaimSpec {
    pub id: &'static str,
    pub statement: &'static str,
    /// Returns the measured quantity and whether the statement holds.
    pub run: fn(&Scanner) -> Result<(f64, bool)>,
}

fn region(scanner: &Scanner, n: u8) -> Result<RegionMap> {
    match scanner.figure_with_steps(n, EvalPath::Transport, STEPS)? {
        FigureData::Region(m) => Ok(m),
        FigureData::Profile(_) => unreachable!("preset {n} is a plane"),
    }
}

fn areas(m: &RegionMap) -> (f64, f64) {
    (m.squeezed_fraction(&m.mask_x), m.squeezed_fraction(&m.mask_y))
}

fn no_simultaneous(scanner: &Scanner) -> Result<(f64, bool)> {
    let m = region(scanner, 1)?;
    let both = m
        .mask_x
        .iter()
        .zip(&m.mask_y)
        .filter(|(x, y)| **x == Mask::Squeezed && **y == Mask::Squeezed)
        .count();
    Ok((both as f64, both == 0))
}

/// Measured: the larger of the two area ratios against `t = 0`.
fn weak_areas_shrink(scanner: &Scanner) -> Result<(f64, bool)> {
    let (x0, y0) = areas(&region(scanner, 1)?);
    let (x, y) = areas(&region(scanner, 2)?);
    let worst = (x / x0).max(y / y0);
    Ok((worst, worst < 1.0))
}

/// Measured: y-area ratio minus x-area ratio (negative when y shrinks faster).
fn strong_areas_shrink(scanner: &Scanner) -> Result<(f64, bool)> {
    let (x0, y0) = areas(&region(scanner, 1)?);
    let (x, y) = areas(&region(scanner, 4)?);
    let (rx, ry) = (x / x0, y / y0);
    Ok((ry - rx, rx < 1.0 && ry < 1.0 && ry < rx))
}

/// Measured: fraction of the probed points that behave as stated.
fn resonance_threshold(scanner: &Scanner) -> Result<(f64, bool)> {
    let m = region(scanner, 5)?;
    let (a1, a2) = (&m.grid.axis1, &m.grid.axis2);
    let (mut good, mut total) = (0usize, 0usize);
    for i in 0..a1.steps {
        let r = a1.value(i);
        for j in 0..a2.steps {
            let (phi, p) = (a2.value(j), m.index(i, j));
            let probe = if r == 0.0 {
                Some(m.mask_y[p] == Mask::Unsqueezed)
            } else if phi == 0.0 && r > LN_2 + 0.05 {
                Some(m.mask_y[p] == Mask::Squeezed)
            } else {
                None
            };
            if let Some(ok) = probe {
                total += 1;
                good += usize::from(ok);
            }
        }
    }
    let frac = good as f64 / total as f64;
    Ok((frac, good == total))
}

/// Measured: minimum over the profile.
fn fifty_percent(scanner: &Scanner) -> Result<(f64, bool)> {
    let FigureData::Profile(p) = scanner.figure(7, EvalPath::Transport)? else {
        unreachable!("preset 7 is a profile")
    };
    let min = p.minimum();
    Ok((min, (min + 0.5).abs() <= 0.02))
}

/// Measured: `Φ` at which `F_x` is smallest on the largest-`|Z|` row.
fn single_peak(scanner: &Scanner) -> Result<(f64, bool)> {
    let m = region(scanner, 8)?;
    let (a1, a2) = (&m.grid.axis1, &m.grid.axis2);
    let row = a1.steps - 1;
    let (mut best, mut arg) = (f64::INFINITY, 0.0);
    for j in 0..a2.steps {
        let f = m.fx[m.index(row, j)];
        if f < best {
            best = f;
            arg = a2.value(j);
        }
    }
    let near_edge = arg.min(2.0 * PI - arg) < 0.1;
    Ok((arg, near_edge && components(&m.mask_x, a1.steps, a2.steps) == 1))
}

/// 4-connected squeezed components, with `Φ` treated as periodic.
fn components(mask: &[Mask], n1: usize, n2: usize) -> usize {
    let mut seen = vec![false; mask.len()];
    let mut count = 0;
    for start in 0..mask.len() {
        if seen[start] || mask[start] != Mask::Squeezed {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            let (i, j) = (p / n2, p % n2);
            let mut next = vec![i * n2 + (j + 1) % n2, i * n2 + (j + n2 - 1) % n2];
            if i > 0 {
                next.push(p - n2);
            }
            if i + 1 < n1 {
                next.push(p + n2);
            }
            for q in next {
                if !seen[q] && mask[q] == Mask::Squeezed {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    count
}

/// Measured: the smaller of the two squeezed fractions.
fn both_quadratures(scanner: &Scanner) -> Result<(f64, bool)> {
    let (x, y) = areas(&region(scanner, 9)?);
    Ok((x.min(y), x > 0.0 && y > 0.0))
}

/// Measured: `max |F_j|` over `|Z| ∈ [0, 2]`, all `Φ`, at `λ/ω = 0.05`, `tλ = 1`.
fn flatness(scanner: &Scanner) -> Result<(f64, bool)> {
    let preset = figure_preset(6)?;
    let mut grid = preset.grid(STEPS).expect("preset 6 is a plane");
    grid.fixed.omega = 20.0;
    grid.fixed.lambda = 1.0;
    let m = scanner.scan(&grid, EvalPath::Transport)?;
    let worst = m.fx.iter().chain(&m.fy).fold(0.0f64, |a, f| a.max(f.abs()));
    Ok((worst, worst < 0.01))
}

/// Measured: change of the x squeezed fraction over `Φ` from `|Z| = 1` to
/// `|Z| = 200` at `ω/λ = 3`, `tλ = π/2` (holds if x shrinks and y grows).
fn persistence(scanner: &Scanner) -> Result<(f64, bool)> {
    let preset = figure_preset(7)?;
    let axis = Axis::new(AxisName::Phi, 0.0, 2.0 * PI, 2 * STEPS)?;
    let mut fractions = Vec::new();
    for zmag in [1.0, 200.0] {
        let fixed = preset.fixed.with(AxisName::Zmag, zmag);
        let p = scanner.profile(preset.family, &axis, &fixed, EvalPath::Transport);
        let frac = |mask: &[Mask]| mask.iter().filter(|m| **m == Mask::Squeezed).count() as f64 / mask.len() as f64;
        fractions.push((frac(&p.mask_x), frac(&p.mask_y)));
    }
    let (dx, dy) = (fractions[1].0 - fractions[0].0, fractions[1].1 - fractions[0].1);
    Ok((dx, dx < 0.0 && dy > 0.0))
}

/// Measured: smallest `F_y` over `γt ∈ (0, 5]` for `λ/ω ∈ {2, 10}`.
fn hyperbolic_fy_positive(_: &Scanner) -> Result<(f64, bool)> {
    let mut min = f64::INFINITY;
    for lambda in [2.0, 10.0] {
        let gamma = (lambda * lambda - 1.0f64).sqrt();
        for i in 1..=200 {
            let tau = 5.0 * i as f64 / 200.0;
            let (_, fy) = bgcs_zero_intensity_factors(1.0, lambda, tau / gamma)?;
            min = min.min(fy);
        }
    }
    Ok((min, min > 0.0))
}

/// Measured: smallest factor over an `(r, Φ)` grid for `γt ∈ [5, 6]`, `λ = 2ω`.
fn squeezing_vanishes(_: &Scanner) -> Result<(f64, bool)> {
    let c = CouplingParams::new(1.0, 2.0)?;
    let gamma = c.effective_frequency();
    let mut min = f64::INFINITY;
    for gt in [5.0, 5.5, 6.0] {
        let coeffs = coefficients(&c, gt / gamma)?;
        for i in 0..41 {
            for j in 0..41 {
                let p = PcsParams::new(-3.0 + 6.0 * i as f64 / 40.0, 2.0 * PI * j as f64 / 40.0, 0.5)?;
                let rep = pcs_transport(&p, &coeffs);
                min = min.min(rep.f_x.min(rep.f_y));
            }
        }
    }
    Ok((min, min > 0.0))
}

/// Measured: `|F_x(k = ½) − F_x(k = 2)|` at `|Z| = 1`, `Φ = 0`, `ω/λ = 3`, `tλ = 1`.
fn k_sensitivity(_: &Scanner) -> Result<(f64, bool)> {
    let f = |k| -> Result<f64> { Ok(bgcs_transport_at(&BgcsParams::new(1.0, 0.0, k)?, 3.0, 1.0, 1.0)?.f_x) };
    let d = (f(0.5)? - f(2.0)?).abs();
    Ok((d, d > 1e-6))
}

pub fn all_claims() -> Vec<ClaimSpec> {
    let claim = |id, statement, run| ClaimSpec { id, statement, run };
    vec![
        claim("pcs.t0.no_simultaneous_squeezing", "At t = 0 no point is squeezed in both quadratures", no_simultaneous),
        claim("pcs.weak.areas_shrink", "Preset 2 squeezed areas are smaller than at t = 0", weak_areas_shrink),
        claim("pcs.strong.areas_shrink_y_faster", "Preset 4 squeezed areas are smaller than at t = 0, y shrinking faster", strong_areas_shrink),
        claim("pcs.resonance.threshold", "Preset 5: y squeezed at phi = 0 for r > ln 2, unsqueezed on r = 0", resonance_threshold),
        claim("pcs.strong.squeezing_vanishes", "For gamma*t >= 5 no point is squeezed", squeezing_vanishes),
        claim("bgcs.max_squeezing_half", "Preset 7 minimum factor is -0.5 within 0.02", fifty_percent),
        claim("bgcs.hyperbolic.single_peak", "Preset 8 x-region is one component with its minimum near phi = 0 or 2 pi", single_peak),
        claim("bgcs.resonance.both_quadratures", "Preset 9 shows squeezing in both quadratures", both_quadratures),
        claim("bgcs.weak_coupling.flat", "At lambda/omega = 0.05 every |F_j| < 0.01 on |Z| in [0, 2]", flatness),
        claim("bgcs.persistence", "Raising |Z| shrinks the x squeezed range and grows the y range", persistence),
        claim("bgcs.hyperbolic.fy_positive", "For lambda > omega and |Z| -> 0, F_y > 0 at all times", hyperbolic_fy_positive),
        claim("bgcs.k_sensitivity", "BGCS factors depend on k", k_sensitivity),
    ]
}
