use serde::{Deserialize, Serialize};

use crate::bgcs::{BgcsParams, BGCS_MIN_K};
use crate::error::{Error, Result};
use crate::hamiltonian::{CouplingParams, Regime};
use crate::pcs::PcsParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Pcs,
    Bgcs,
}

/// Normalization of the declared time value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    /// Bare `t`.
    T,
    /// `t λ`.
    Tl,
    /// `t ω`.
    Tw,
    /// `|g| t`; undefined at resonance.
    Gt,
}

impl TimeUnit {
    pub fn as_str(&self) -> &'static str {
        match self {
            TimeUnit::T => "t",
            TimeUnit::Tl => "tl",
            TimeUnit::Tw => "tw",
            TimeUnit::Gt => "gt",
        }
    }

    /// Converts a value in this unit to bare `t`.
    pub fn to_time(&self, value: f64, coupling: &CouplingParams) -> Result<f64> {
        let scale = match self {
            TimeUnit::T => 1.0,
            TimeUnit::Tl => coupling.lambda(),
            TimeUnit::Tw => coupling.omega(),
            TimeUnit::Gt => {
                if coupling.regime() == Regime::Resonance {
                    return Err(Error::invalid("time_unit", value, "g*t is undefined at resonance"));
                }
                coupling.effective_frequency()
            }
        };
        if scale == 0.0 {
            return Err(Error::invalid("time_unit", value, "normalizing rate is zero"));
        }
        Ok(value / scale)
    }
}

impl std::str::FromStr for TimeUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "t" => Ok(TimeUnit::T),
            "tl" => Ok(TimeUnit::Tl),
            "tw" => Ok(TimeUnit::Tw),
            "gt" => Ok(TimeUnit::Gt),
            other => Err(format!("unknown time unit `{other}` (expected t, tl, tw or gt)")),
        }
    }
}

/// Parameters a grid axis can sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    R,
    Zmag,
    Phi,
    K,
    /// The time value, in the grid's declared unit.
    Time,
}

impl AxisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisName::R => "r",
            AxisName::Zmag => "zmag",
            AxisName::Phi => "phi",
            AxisName::K => "k",
            AxisName::Time => "time",
        }
    }
}

impl std::str::FromStr for AxisName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "r" => Ok(AxisName::R),
            "zmag" | "z" => Ok(AxisName::Zmag),
            "phi" => Ok(AxisName::Phi),
            "k" => Ok(AxisName::K),
            "time" | "t" => Ok(AxisName::Time),
            other => Err(format!("unknown axis `{other}` (expected r, zmag, phi, k or time)")),
        }
    }
}

/// `steps` equally spaced samples of `[min, max]`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: AxisName, min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::invalid("axis", min, "requires finite min < max"));
        }
        if steps < 2 {
            return Err(Error::invalid("axis", steps as f64, "requires at least 2 steps"));
        }
        Ok(Self {
            name,
            min,
            max,
            steps,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.steps - 1) as f64
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    /// `name:min:max:steps`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("axis `{s}` must look like name:min:max:steps"));
        }
        let name: AxisName = parts[0].parse()?;
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
        let steps = parts[3]
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("`{}`: {e}", parts[3]))?;
        Axis::new(name, num(parts[1])?, num(parts[2])?, steps).map_err(|e| e.to_string())
    }
}

/// Values of every parameter not swept by an axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedParams {
    pub k: f64,
    pub omega: f64,
    pub lambda: f64,
    pub time: f64,
    pub time_unit: TimeUnit,
    pub r: f64,
    pub zmag: f64,
    pub phi: f64,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            k: 0.5,
            omega: 1.0,
            lambda: 0.0,
            time: 0.0,
            time_unit: TimeUnit::T,
            r: 0.0,
            zmag: 0.0,
            phi: 0.0,
        }
    }
}

impl FixedParams {
    pub fn with(mut self, name: AxisName, value: f64) -> Self {
        match name {
            AxisName::R => self.r = value,
            AxisName::Zmag => self.zmag = value,
            AxisName::Phi => self.phi = value,
            AxisName::K => self.k = value,
            AxisName::Time => self.time = value,
        }
        self
    }

    pub fn coupling(&self) -> Result<CouplingParams> {
        CouplingParams::new(self.omega, self.lambda)
    }

    /// Bare `t` after undoing the declared normalization.
    pub fn physical_time(&self) -> Result<f64> {
        self.time_unit.to_time(self.time, &self.coupling()?)
    }

    pub fn pcs(&self) -> Result<PcsParams> {
        PcsParams::new(self.r, self.phi, self.k)
    }

    pub fn bgcs(&self) -> Result<BgcsParams> {
        BgcsParams::new(self.zmag, self.phi, self.k)
    }
}

/// A two-parameter plane for one state family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axis1: Axis,
    pub axis2: Axis,
    pub family: Family,
    pub fixed: FixedParams,
}

impl GridSpec {
    pub fn new(axis1: Axis, axis2: Axis, family: Family, fixed: FixedParams) -> Result<Self> {
        if axis1.name == axis2.name {
            return Err(Error::invalid("axis2", axis2.min, "axes must sweep different parameters"));
        }
        for axis in [&axis1, &axis2] {
            let foreign = match family {
                Family::Pcs => axis.name == AxisName::Zmag,
                Family::Bgcs => axis.name == AxisName::R,
            };
            if foreign {
                return Err(Error::invalid("axis", axis.min, "axis does not belong to this family"));
            }
            if axis.name == AxisName::K {
                let inside = match family {
                    Family::Pcs => axis.min > 0.0,
                    Family::Bgcs => axis.min >= BGCS_MIN_K,
                };
                if !inside {
                    return Err(Error::invalid("k", axis.min, "axis leaves the allowed Bargmann range"));
                }
            }
        }
        fixed.coupling()?;
        Ok(Self {
            axis1,
            axis2,
            family,
            fixed,
        })
    }

    pub fn points(&self) -> usize {
        self.axis1.steps * self.axis2.steps
    }

    /// Fixed parameters with both axis values substituted.
    pub fn at(&self, i1: usize, i2: usize) -> FixedParams {
        self.fixed
            .with(self.axis1.name, self.axis1.value(i1))
            .with(self.axis2.name, self.axis2.value(i2))
    }

    pub fn with_steps(&self, steps1: usize, steps2: usize) -> Self {
        let mut g = *self;
        g.axis1.steps = steps1;
        g.axis2.steps = steps2;
        g
    }
}
