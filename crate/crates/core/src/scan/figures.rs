use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::squeeze::EvalPath;

use super::grid::{Axis, AxisName, Family, FixedParams, GridSpec, TimeUnit};
use super::region::{evaluate_points, Mask, RegionMap, Scanner};

/// Samples per axis on the analytic paths.
pub const ANALYTIC_STEPS: usize = 201;
/// Samples per axis on the oracle path.
pub const ORACLE_STEPS: usize = 64;

/// Parameters behind one preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigurePreset {
    pub number: u8,
    pub title: &'static str,
    pub family: Family,
    pub fixed: FixedParams,
    /// `Some` for plane presets; `None` for the one-dimensional profile over `Φ`.
    pub axis1: Option<AxisName>,
    pub axis1_range: (f64, f64),
}

fn fixed(k: f64, omega: f64, lambda: f64, time: f64, time_unit: TimeUnit) -> FixedParams {
    FixedParams {
        k,
        omega,
        lambda,
        time,
        time_unit,
        ..FixedParams::default()
    }
}

pub fn figure_preset(n: u8) -> Result<FigurePreset> {
    let pcs = |number, title, fixed| FigurePreset {
        number,
        title,
        family: Family::Pcs,
        fixed,
        axis1: Some(AxisName::R),
        axis1_range: (-3.0, 3.0),
    };
    let bgcs = |number, title, fixed| FigurePreset {
        number,
        title,
        family: Family::Bgcs,
        fixed,
        axis1: Some(AxisName::Zmag),
        axis1_range: (0.0, 2.0),
    };
    Ok(match n {
        1 => pcs(1, "PCS at t = 0", fixed(0.5, 3.0, 1.0, 0.0, TimeUnit::T)),
        2 => pcs(2, "PCS, omega/lambda = 3, t*lambda = pi/2", fixed(0.5, 3.0, 1.0, FRAC_PI_2, TimeUnit::Tl)),
        3 => pcs(3, "PCS, omega/lambda = 10, t*lambda = pi/2", fixed(0.5, 10.0, 1.0, FRAC_PI_2, TimeUnit::Tl)),
        4 => pcs(4, "PCS, lambda/omega = 2, t*omega = pi/4", fixed(0.5, 1.0, 2.0, FRAC_PI_4, TimeUnit::Tw)),
        5 => pcs(5, "PCS at resonance, tau = 3 pi", fixed(0.5, 1.0, 1.0, 3.0 * PI, TimeUnit::Tw)),
        6 => bgcs(6, "BGCS, k = 0.5, omega/lambda = 3, t*lambda = 1", fixed(0.5, 3.0, 1.0, 1.0, TimeUnit::Tl)),
        7 => FigurePreset {
            number: 7,
            title: "BGCS profile over phi, |Z| = 200, k = 0.5, omega/lambda = 3, t*lambda = pi/2",
            family: Family::Bgcs,
            fixed: FixedParams {
                zmag: 200.0,
                ..fixed(0.5, 3.0, 1.0, FRAC_PI_2, TimeUnit::Tl)
            },
            axis1: None,
            axis1_range: (0.0, 0.0),
        },
        8 => bgcs(8, "BGCS, k = 0.5, lambda/omega = 10, t*omega = pi/20", fixed(0.5, 1.0, 10.0, PI / 20.0, TimeUnit::Tw)),
        9 => bgcs(9, "BGCS at resonance, k = 0.5, tau = pi/6", fixed(0.5, 1.0, 1.0, PI / 6.0, TimeUnit::Tw)),
        other => return Err(Error::UnknownFigure(other.to_string())),
    })
}

impl FigurePreset {
    pub fn phi_axis(&self, steps: usize) -> Axis {
        Axis {
            name: AxisName::Phi,
            min: 0.0,
            max: 2.0 * PI,
            steps,
        }
    }

    /// The plane behind a region preset.
    pub fn grid(&self, steps: usize) -> Option<GridSpec> {
        let name = self.axis1?;
        let (min, max) = self.axis1_range;
        Some(GridSpec {
            axis1: Axis {
                name,
                min,
                max,
                steps,
            },
            axis2: self.phi_axis(steps),
            family: self.family,
            fixed: self.fixed,
        })
    }
}

/// Factors along one axis with every other parameter fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub family: Family,
    pub path: EvalPath,
    pub axis: Axis,
    pub fixed: FixedParams,
    pub fx: Vec<f64>,
    pub fy: Vec<f64>,
    pub mask_x: Vec<Mask>,
    pub mask_y: Vec<Mask>,
    pub error_code: Vec<u8>,
}

impl Profile {
    /// Smallest finite factor over both quadratures.
    pub fn minimum(&self) -> f64 {
        self.fx
            .iter()
            .chain(&self.fy)
            .filter(|f| f.is_finite())
            .fold(f64::INFINITY, |a, &b| a.min(b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FigureData {
    Region(RegionMap),
    Profile(Profile),
}

impl Scanner {
    pub fn profile(&self, family: Family, axis: &Axis, fixed: &FixedParams, path: EvalPath) -> Profile {
        let points: Vec<FixedParams> = axis.values().into_iter().map(|v| fixed.with(axis.name, v)).collect();
        let values = evaluate_points(family, &points, path, &self.oracle);
        let fx: Vec<f64> = values.iter().map(|v| v.0).collect();
        let fy: Vec<f64> = values.iter().map(|v| v.1).collect();
        Profile {
            family,
            path,
            axis: *axis,
            fixed: *fixed,
            mask_x: fx.iter().map(|&f| Mask::classify(f)).collect(),
            mask_y: fy.iter().map(|&f| Mask::classify(f)).collect(),
            error_code: values.iter().map(|v| v.2).collect(),
            fx,
            fy,
        }
    }

    /// Dataset of preset `n` at the default resolution for `path`.
    pub fn figure(&self, n: u8, path: EvalPath) -> Result<FigureData> {
        let steps = if path == EvalPath::Oracle { ORACLE_STEPS } else { ANALYTIC_STEPS };
        self.figure_with_steps(n, path, steps)
    }

    pub fn figure_with_steps(&self, n: u8, path: EvalPath, steps: usize) -> Result<FigureData> {
        let preset = figure_preset(n)?;
        match preset.grid(steps) {
            Some(grid) => Ok(FigureData::Region(self.scan(&grid, path)?)),
            None => Ok(FigureData::Profile(self.profile(
                preset.family,
                &preset.phi_axis(steps),
                &preset.fixed,
                path,
            ))),
        }
    }
}

/// Preset `n` with a fresh [`Scanner`].
pub fn figure(n: u8, path: EvalPath) -> Result<FigureData> {
    Scanner::default().figure(n, path)
}
