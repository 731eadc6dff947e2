//! Time paths driving the production models.
//!
//! Time is measured in years from the start of a simulation. Agent counts are
//! real numbers since they feed continuous power functions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logistic capability curve `s(t) = 1 / (1 + e^(−k(t−t0)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    /// Growth rate per year.
    pub k: f64,
    /// Inflection year.
    pub t0: f64,
}

impl LogisticParams {
    pub fn validate(&self) -> Result<()> {
        if self.k.is_finite() && self.k > 0.0 && self.t0.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "logistic needs k > 0 and finite t0, got k={} t0={}",
                self.k, self.t0
            )))
        }
    }
}

/// AI capability level at time `t`, in (0, 1).
pub fn capability(t: f64, params: &LogisticParams) -> f64 {
    1.0 / (1.0 + (-params.k * (t - params.t0)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentPathKind {
    /// `A0 + g t`
    Linear,
    /// Growth rate itself rises linearly, `g(t) = g + accel·t`.
    LinearAccelerating,
    /// Fitted polynomial `c0 + c1 t + c2 t²`, stored with `accel = 2 c2`.
    Quadratic,
}

/// Agent population trajectory.
///
/// Linear-accelerating and quadratic paths evaluate the same polynomial
/// `A0 + g t + ½ accel t²`; they differ only in how they were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentPath {
    pub kind: AgentPathKind,
    pub a0: f64,
    pub g: f64,
    #[serde(default)]
    pub accel: f64,
}

impl AgentPath {
    pub fn linear(a0: f64, g: f64) -> Self {
        AgentPath {
            kind: AgentPathKind::Linear,
            a0,
            g,
            accel: 0.0,
        }
    }

    /// Path whose annual increment grows by `accel` each year.
    pub fn linear_accelerating(a0: f64, g: f64, accel: f64) -> Self {
        AgentPath {
            kind: AgentPathKind::LinearAccelerating,
            a0,
            g,
            accel,
        }
    }

    /// Builds a path from printed polynomial coefficients `c0 + c1 t + c2 t²`.
    pub fn from_quadratic(c0: f64, c1: f64, c2: f64) -> Self {
        AgentPath {
            kind: AgentPathKind::Quadratic,
            a0: c0,
            g: c1,
            accel: 2.0 * c2,
        }
    }

    /// Coefficients `(c0, c1, c2)` of the evaluated polynomial.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        match self.kind {
            AgentPathKind::Linear => (self.a0, self.g, 0.0),
            _ => (self.a0, self.g, 0.5 * self.accel),
        }
    }

    /// Initial relative growth rate `g / A0`, if `A0 > 0`.
    pub fn relative_growth(&self) -> Option<f64> {
        (self.a0 > 0.0).then(|| self.g / self.a0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a0.is_finite() && self.a0 >= 0.0) {
            return Err(Error::domain(format!(
                "A0 must be non-negative, got {}",
                self.a0
            )));
        }
        if !(self.g.is_finite() && self.accel.is_finite()) {
            return Err(Error::domain("agent path coefficients must be finite"));
        }
        Ok(())
    }
}

/// Agent count at `t ≥ 0`. A negative value means the path is being
/// evaluated past the peak of a decelerating polynomial and is reported as
/// an error rather than clamped.
pub fn agent_count(t: f64, path: &AgentPath) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("time must be non-negative, got {t}")));
    }
    let (c0, c1, c2) = path.coefficients();
    let a = c0 + c1 * t + c2 * t * t;
    if a < 0.0 {
        return Err(Error::Path(format!(
            "agent count {a} is negative at t={t}; the path is past its peak"
        )));
    }
    Ok(a)
}

/// Agent penetration `A / N`, not clamped to 1.
pub fn penetration(agents: f64, population: f64) -> Result<f64> {
    if !(population > 0.0) {
        return Err(Error::domain(format!(
            "population must be positive, got {population}"
        )));
    }
    if !(agents >= 0.0) {
        return Err(Error::domain(format!(
            "agent count must be non-negative, got {agents}"
        )));
    }
    Ok(agents / population)
}

/// Relative capability lead of a frontier economy over a follower, decaying
/// as the stretched exponential `Δ(t) = Δ0 · exp(−(t/τ)^β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapCurve {
    pub delta0: f64,
    pub tau: f64,
    pub beta_gap: f64,
}

impl GapCurve {
    pub fn validate(&self) -> Result<()> {
        if self.delta0 >= 0.0 && self.tau > 0.0 && self.beta_gap > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "gap curve needs delta0 >= 0, tau > 0, beta_gap > 0, got {self:?}"
            )))
        }
    }
}

/// Gap at `t`. `t` must be non-negative; negative times yield NaN.
pub fn gap(t: f64, curve: &GapCurve) -> f64 {
    curve.delta0 * (-(t / curve.tau).powf(curve.beta_gap)).exp()
}

/// Follower AI efficiency given a gap value directly.
pub fn phi_a_from_gap(gap: f64, phi_a_leader: f64) -> f64 {
    phi_a_leader / (1.0 + gap)
}

/// Follower AI efficiency `φ_leader / (1 + Δ(t))`.
pub fn phi_a_follower(t: f64, phi_a_leader: f64, curve: &GapCurve) -> f64 {
    phi_a_from_gap(gap(t, curve), phi_a_leader)
}
