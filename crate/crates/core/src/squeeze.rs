//! Squeezing factors `F_j = (⟨ΔK_j²⟩ − ½|⟨K_z⟩|) / (½|⟨K_z⟩|)`.

use serde::{Deserialize, Serialize};

use crate::hamiltonian::MomentState;

/// Which quadrature a factor refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    X,
    Y,
}

/// How a report was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalPath {
    /// The published closed forms, evaluated verbatim.
    PaperLiteral,
    /// Exact initial moments carried through the SO(2,1) matrix.
    Transport,
    /// Truncated number-basis state evolved by diagonalization.
    Oracle,
}

impl EvalPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalPath::PaperLiteral => "paper",
            EvalPath::Transport => "transport",
            EvalPath::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for EvalPath {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" | "paper-literal" => Ok(EvalPath::PaperLiteral),
            "transport" => Ok(EvalPath::Transport),
            "oracle" => Ok(EvalPath::Oracle),
            other => Err(format!(
                "unknown path `{other}` (expected paper, transport or oracle)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingReport {
    pub f_x: f64,
    pub f_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub mean_kz: f64,
    pub path: EvalPath,
}

/// `F` for one variance against `⟨K_z⟩`.
pub fn squeezing_factor(var: f64, mean_kz: f64) -> f64 {
    let half = 0.5 * mean_kz.abs();
    (var - half) / half
}

impl SqueezingReport {
    pub fn from_variances(var_x: f64, var_y: f64, mean_kz: f64, path: EvalPath) -> Self {
        Self {
            f_x: squeezing_factor(var_x, mean_kz),
            f_y: squeezing_factor(var_y, mean_kz),
            var_x,
            var_y,
            mean_kz,
            path,
        }
    }

    pub fn from_state(state: &MomentState, path: EvalPath) -> Self {
        Self::from_variances(state.var_x(), state.var_y(), state.mean_kz(), path)
    }

    pub fn factor(&self, q: Quadrature) -> f64 {
        match q {
            Quadrature::X => self.f_x,
            Quadrature::Y => self.f_y,
        }
    }

    pub fn factors(&self) -> (f64, f64) {
        (self.f_x, self.f_y)
    }

    /// Checks `F_j ≥ −1` and `(1 + F_x)(1 + F_y) ≥ 1` with relative slack `tol`.
    pub fn satisfies_uncertainty(&self, tol: f64) -> bool {
        self.f_x >= -1.0 - tol
            && self.f_y >= -1.0 - tol
            && (1.0 + self.f_x) * (1.0 + self.f_y) >= 1.0 - tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_definition() {
        let r = SqueezingReport::from_variances(0.25, 0.125, 0.5, EvalPath::Transport);
        assert_eq!(r.f_x, 0.0);
        assert_eq!(r.f_y, -0.5);
        assert!(!r.satisfies_uncertainty(0.0));
        assert_eq!(r.factor(Quadrature::Y), -0.5);
    }

    #[test]
    fn path_round_trips() {
        for p in [EvalPath::PaperLiteral, EvalPath::Transport, EvalPath::Oracle] {
            assert_eq!(p.as_str().parse::<EvalPath>().unwrap(), p);
        }
        assert!("fock".parse::<EvalPath>().is_err());
    }
}
