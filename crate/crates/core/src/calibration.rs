//! Back-solving baseline efficiencies from observed GDP and capital.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::cobb_douglas;

/// One year of macro data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationObservation {
    pub year: i32,
    /// GDP, USD.
    pub gdp: f64,
    /// Capital stock, USD.
    pub capital: f64,
    /// Employed population.
    pub population: f64,
}

impl CalibrationObservation {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gdp", self.gdp),
            ("capital", self.capital),
            ("population", self.population),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!(
                    "observation {}: {name} must be positive, got {v}",
                    self.year
                )));
            }
        }
        Ok(())
    }
}

/// Assumed AI allocation used when splitting observed output into human and
/// AI contributions. Kept separate from scenario parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiACalibrationAssumptions {
    pub omega: f64,
    pub s: f64,
    pub delta: f64,
    pub agents: f64,
}

impl Default for PhiACalibrationAssumptions {
    fn default() -> Self {
        PhiACalibrationAssumptions {
            omega: 0.1,
            s: 0.5,
            delta: 0.2,
            agents: 1e8,
        }
    }
}

impl PhiACalibrationAssumptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega < 1.0) {
            return Err(Error::domain(format!(
                "omega must lie in (0, 1), got {}",
                self.omega
            )));
        }
        if !(0.0..=1.0).contains(&self.s) {
            return Err(Error::domain(format!(
                "s must lie in [0, 1], got {}",
                self.s
            )));
        }
        if !(self.delta >= 0.0) {
            return Err(Error::domain(format!(
                "delta must be non-negative, got {}",
                self.delta
            )));
        }
        if !(self.agents > 0.0) {
            return Err(Error::domain(format!(
                "agents must be positive, got {}",
                self.agents
            )));
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// `Y / (N^α R^(1−α))`.
pub fn calibrate_phi_h(obs: &CalibrationObservation, alpha: f64) -> Result<f64> {
    obs.validate()?;
    check_alpha(alpha)?;
    Ok(obs.gdp / cobb_douglas(1.0, obs.population, obs.capital, alpha))
}

/// Attributes the part of observed output not explained by human production
/// on `(1−ω)R` to AI, then divides by the AI production kernel.
pub fn calibrate_phi_a(
    obs: &CalibrationObservation,
    phi_h: f64,
    alpha: f64,
    assume: &PhiACalibrationAssumptions,
) -> Result<f64> {
    obs.validate()?;
    check_alpha(alpha)?;
    assume.validate()?;
    let y_human = cobb_douglas(
        phi_h,
        obs.population,
        (1.0 - assume.omega) * obs.capital,
        alpha,
    );
    let residual = obs.gdp - y_human;
    if !(residual > 0.0) {
        return Err(Error::CalibrationInfeasible(format!(
            "human output {y_human:.6e} already meets observed GDP {:.6e} in {}",
            obs.gdp, obs.year
        )));
    }
    let kernel = cobb_douglas(
        1.0,
        assume.agents,
        assume.omega * obs.capital * (1.0 + assume.delta * assume.s),
        alpha,
    );
    Ok(residual / kernel)
}

/// Relative growth rate `g / A0`.
pub fn derive_growth_rate(g: f64, a0: f64) -> Result<f64> {
    if !(a0 > 0.0) {
        return Err(Error::domain(format!("A0 must be positive, got {a0}")));
    }
    Ok(g / a0)
}

/// Absolute growth that keeps relative rate `r` on a base of `a0_target`.
pub fn transfer_growth(r: f64, a0_target: f64) -> f64 {
    r * a0_target
}
