//! Closed-form production functions.
//!
//! All power terms go through [`cobb_douglas`], which evaluates
//! `scale · L^α · K^(1−α)` as `scale · exp(α ln L + (1−α) ln K)`. Inputs near
//! 1e8 persons and 1e14 USD stay well inside `f64` range this way, and a zero
//! factor yields an exact zero rather than `0 · inf`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{AgentPath, LogisticParams};
use crate::error::{Error, Result};

/// Parameters of the AI enhancement term of the collaboration model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnhancementParams {
    /// Baseline enhancement coefficient.
    pub gamma: f64,
    /// Enhancement elasticity, in (0, 1].
    pub beta_enh: f64,
    /// Capability scaling factor: efficiency gain at full capability.
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// Network amplification reached at full penetration.
    pub eta: f64,
}

/// Full parameter bundle for one economy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryProfile {
    pub name: String,
    /// Employed population.
    pub population: f64,
    /// Labor output elasticity.
    pub alpha: f64,
    /// Total capital stock, USD.
    pub capital: f64,
    /// Baseline human efficiency; doubles as the pure-human efficiency.
    pub phi_h: f64,
    /// Baseline AI production efficiency.
    pub phi_a: f64,
    /// Share of capital allocated to autonomous AI production.
    pub omega: f64,
    /// Share of capital kept by humans in the collaboration models.
    pub human_share: f64,
    pub enhancement: EnhancementParams,
    pub network: NetworkParams,
    pub capability: LogisticParams,
    pub agents: AgentPath,
}

impl CountryProfile {
    /// Checks every field invariant.
    pub fn validate(&self) -> Result<()> {
        check_positive("population", self.population)?;
        check_positive("capital", self.capital)?;
        check_alpha(self.alpha)?;
        check_non_negative("phi_h", self.phi_h)?;
        check_non_negative("phi_a", self.phi_a)?;
        check_unit("omega", self.omega)?;
        check_unit("human_share", self.human_share)?;
        check_non_negative("gamma", self.enhancement.gamma)?;
        check_non_negative("delta", self.enhancement.delta)?;
        let b = self.enhancement.beta_enh;
        if !(b.is_finite() && b > 0.0 && b <= 1.0) {
            return Err(Error::domain(format!(
                "beta_enh must lie in (0, 1], got {b}"
            )));
        }
        check_non_negative("eta", self.network.eta)?;
        self.capability.validate()?;
        self.agents.validate()?;
        Ok(())
    }
}

/// Output of one model evaluation split into its human and AI parts.
///
/// For the pure-human and collaboration models (1–3) the whole output is
/// reported in `y_human` and `y_ai` is zero. `y_ai` never includes the network
/// multiplier, so for Model 5 `y_total = y_human + multiplier_network · y_ai`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputBreakdown {
    pub y_total: f64,
    pub y_human: f64,
    pub y_ai: f64,
    pub multiplier_network: f64,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

fn check_non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be non-negative, got {v}"
        )))
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in [0, 1], got {v}")))
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

/// `scale · labor^α · capital^(1−α)` evaluated in log space. A zero factor
/// gives zero.
pub fn cobb_douglas(scale: f64, labor: f64, capital: f64, alpha: f64) -> f64 {
    if scale == 0.0 || labor == 0.0 || capital == 0.0 {
        return 0.0;
    }
    scale * (alpha * labor.ln() + (1.0 - alpha) * capital.ln()).exp()
}

/// Pure human production: `φ0 · N^α · R^(1−α)`.
pub fn model1_output(population: f64, capital: f64, alpha: f64, phi0: f64) -> Result<f64> {
    check_positive("population", population)?;
    check_positive("capital", capital)?;
    check_alpha(alpha)?;
    check_non_negative("phi0", phi0)?;
    Ok(cobb_douglas(phi0, population, capital, alpha))
}

/// Splits capital into the human and AI portions. `R_A` is computed as the
/// remainder so the two always sum back to `R`.
pub fn split_resources(capital: f64, human_share: f64) -> Result<(f64, f64)> {
    check_positive("capital", capital)?;
    check_unit("human_share", human_share)?;
    let human = human_share * capital;
    Ok((human, capital - human))
}

fn check_capability_level(s: f64) -> Result<()> {
    check_unit("capability level s", s)
}

/// AI collaboration model: human output on `R_H`, amplified by
/// `1 + γ (R_A/R_H)^β (1+δs)^β`.
pub fn model2_output(profile: &CountryProfile, s: f64) -> Result<f64> {
    check_capability_level(s)?;
    let (human, ai) = split_resources(profile.capital, profile.human_share)?;
    if human == 0.0 {
        return Err(Error::Singularity(
            "human capital share is zero while AI capital is positive".into(),
        ));
    }
    let base = model1_output(profile.population, human, profile.alpha, profile.phi_h)?;
    let e = &profile.enhancement;
    let boost = if ai == 0.0 || e.gamma == 0.0 {
        0.0
    } else {
        e.gamma * (e.beta_enh * ((ai / human).ln() + (1.0 + e.delta * s).ln())).exp()
    };
    Ok(base * (1.0 + boost))
}

/// Metcalfe-style multiplier `1 + η (A/N)²`.
pub fn network_multiplier(agents: f64, population: f64, eta: f64) -> Result<f64> {
    check_non_negative("agent count", agents)?;
    check_non_negative("eta", eta)?;
    if !(population > 0.0) {
        return Err(Error::domain(format!(
            "population must be positive, got {population}"
        )));
    }
    let p = agents / population;
    Ok(1.0 + eta * p * p)
}

/// Collaboration model with the network externality applied to the whole
/// output.
pub fn model3_output(profile: &CountryProfile, s: f64, agents: f64) -> Result<f64> {
    let y2 = model2_output(profile, s)?;
    let theta = network_multiplier(agents, profile.population, profile.network.eta)?;
    Ok(y2 * theta)
}

fn model4_parts(profile: &CountryProfile, s: f64, agents: f64) -> Result<(f64, f64)> {
    check_capability_level(s)?;
    check_unit("omega", profile.omega)?;
    check_non_negative("agent count", agents)?;
    check_positive("population", profile.population)?;
    check_positive("capital", profile.capital)?;
    check_alpha(profile.alpha)?;
    check_non_negative("phi_h", profile.phi_h)?;
    check_non_negative("phi_a", profile.phi_a)?;
    let w = profile.omega;
    let r = profile.capital;
    let y_human = cobb_douglas(
        profile.phi_h,
        profile.population,
        (1.0 - w) * r,
        profile.alpha,
    );
    let ai_capital = w * r * (1.0 + profile.enhancement.delta * s);
    let y_ai = cobb_douglas(profile.phi_a, agents, ai_capital, profile.alpha);
    Ok((y_human, y_ai))
}

/// Autonomous AI production: humans on `(1−ω)R`, agents on
/// `ωR(1+δs)`, outputs added.
pub fn model4_output(profile: &CountryProfile, s: f64, agents: f64) -> Result<OutputBreakdown> {
    let (y_human, y_ai) = model4_parts(profile, s, agents)?;
    Ok(OutputBreakdown {
        y_total: y_human + y_ai,
        y_human,
        y_ai,
        multiplier_network: 1.0,
    })
}

/// Autonomous AI production with the network multiplier applied to the AI
/// output only.
pub fn model5_output(profile: &CountryProfile, s: f64, agents: f64) -> Result<OutputBreakdown> {
    let (y_human, y_ai) = model4_parts(profile, s, agents)?;
    let theta = network_multiplier(agents, profile.population, profile.network.eta)?;
    Ok(OutputBreakdown {
        y_total: y_human + y_ai * theta,
        y_human,
        y_ai,
        multiplier_network: theta,
    })
}
