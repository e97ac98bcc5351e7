use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bgcs::{bgcs_transport, bgcs_variances};
use crate::error::{Error, Result};
use crate::hamiltonian::coefficients;
use crate::oracle::Oracle;
use crate::pcs::{pcs_transport, pcs_variances};
use crate::squeeze::{EvalPath, SqueezingReport};

use super::contour::{zero_contours, Polyline};
use super::grid::{Family, FixedParams, GridSpec};

/// `|f| ≤ BOUNDARY_TOL` is classified as boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Default ceiling on oracle-path grid points (64 × 64).
pub const ORACLE_POINT_LIMIT: usize = 64 * 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mask {
    Squeezed,
    Unsqueezed,
    Boundary,
    /// The point failed to evaluate.
    Undefined,
}

impl Mask {
    pub fn classify(f: f64) -> Self {
        if !f.is_finite() {
            Mask::Undefined
        } else if f < -BOUNDARY_TOL {
            Mask::Squeezed
        } else if f <= BOUNDARY_TOL {
            Mask::Boundary
        } else {
            Mask::Unsqueezed
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Mask::Squeezed => "squeezed",
            Mask::Unsqueezed => "unsqueezed",
            Mask::Boundary => "boundary",
            Mask::Undefined => "undefined",
        }
    }
}

/// Squeezing factors over a grid. Arrays are row-major with `axis1` as the
/// slow index; failed points hold `NaN` and a non-zero `error_code`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub grid: GridSpec,
    pub path: EvalPath,
    pub fx: Vec<f64>,
    pub fy: Vec<f64>,
    pub mask_x: Vec<Mask>,
    pub mask_y: Vec<Mask>,
    pub error_code: Vec<u8>,
    pub contours_x: Vec<Polyline>,
    pub contours_y: Vec<Polyline>,
}

impl RegionMap {
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.grid.axis2.steps + i2
    }

    pub fn failures(&self) -> usize {
        self.error_code.iter().filter(|&&c| c != 0).count()
    }

    /// Fraction of evaluated points whose mask is squeezed.
    pub fn squeezed_fraction(&self, mask: &[Mask]) -> f64 {
        let defined = mask.iter().filter(|m| **m != Mask::Undefined).count();
        let squeezed = mask.iter().filter(|m| **m == Mask::Squeezed).count();
        squeezed as f64 / defined.max(1) as f64
    }
}

/// One grid point on the chosen path.
pub fn evaluate_point(
    family: Family,
    params: &FixedParams,
    path: EvalPath,
    oracle: &Oracle,
) -> Result<SqueezingReport> {
    let coupling = params.coupling()?;
    let t = params.physical_time()?;
    match (family, path) {
        (Family::Pcs, EvalPath::PaperLiteral) => {
            Ok(pcs_variances(&params.pcs()?, &coefficients(&coupling, t)?))
        }
        (Family::Pcs, EvalPath::Transport) => {
            Ok(pcs_transport(&params.pcs()?, &coefficients(&coupling, t)?))
        }
        (Family::Pcs, EvalPath::Oracle) => oracle.pcs_report(&params.pcs()?, &coupling, t),
        (Family::Bgcs, EvalPath::PaperLiteral) => {
            bgcs_variances(&params.bgcs()?, &coefficients(&coupling, t)?)
        }
        (Family::Bgcs, EvalPath::Transport) => {
            bgcs_transport(&params.bgcs()?, &coefficients(&coupling, t)?)
        }
        (Family::Bgcs, EvalPath::Oracle) => oracle.bgcs_report(&params.bgcs()?, &coupling, t),
    }
}

/// Evaluates every point; errors become `NaN` factors and their code.
pub fn evaluate_points(
    family: Family,
    points: &[FixedParams],
    path: EvalPath,
    oracle: &Oracle,
) -> Vec<(f64, f64, u8)> {
    points
        .par_iter()
        .map(|p| match evaluate_point(family, p, path, oracle) {
            Ok(r) if r.f_x.is_finite() && r.f_y.is_finite() => (r.f_x, r.f_y, 0),
            // Non-finite factors share the catch-all code.
            Ok(_) => (f64::NAN, f64::NAN, 9),
            Err(e) => (f64::NAN, f64::NAN, e.code()),
        })
        .collect()
}

/// Grid scanner holding the oracle and its factorization cache.
pub struct Scanner {
    pub oracle: Oracle,
    pub oracle_point_limit: usize,
}

impl Default for Scanner {
    fn default() -> Self {
        Self {
            oracle: Oracle::default(),
            oracle_point_limit: ORACLE_POINT_LIMIT,
        }
    }
}

impl Scanner {
    pub fn scan(&self, grid: &GridSpec, path: EvalPath) -> Result<RegionMap> {
        if path == EvalPath::Oracle && grid.points() > self.oracle_point_limit {
            return Err(Error::GridTooLarge {
                points: grid.points(),
                limit: self.oracle_point_limit,
            });
        }
        let (n1, n2) = (grid.axis1.steps, grid.axis2.steps);
        let points: Vec<FixedParams> = (0..n1 * n2).map(|p| grid.at(p / n2, p % n2)).collect();
        let values = evaluate_points(grid.family, &points, path, &self.oracle);
        let fx: Vec<f64> = values.iter().map(|v| v.0).collect();
        let fy: Vec<f64> = values.iter().map(|v| v.1).collect();
        Ok(RegionMap {
            grid: *grid,
            path,
            mask_x: fx.iter().map(|&f| Mask::classify(f)).collect(),
            mask_y: fy.iter().map(|&f| Mask::classify(f)).collect(),
            error_code: values.iter().map(|v| v.2).collect(),
            contours_x: zero_contours(&fx, &grid.axis1, &grid.axis2),
            contours_y: zero_contours(&fy, &grid.axis1, &grid.axis2),
            fx,
            fy,
        })
    }
}

/// Scans with a fresh [`Scanner`].
pub fn scan_plane(grid: &GridSpec, path: EvalPath) -> Result<RegionMap> {
    Scanner::default().scan(grid, path)
}
