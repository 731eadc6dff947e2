//! Scenario definitions, the simulation runner and result analytics.
//!
//! A [`ScenarioConfig`] is a country profile plus a model choice, a horizon
//! and a set of named overrides. [`run`] steps `t = 0, 1, …, horizon`
//! (both ends inclusive) and records the dynamic inputs and model outputs at
//! each step.

mod registry;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    agent_count, capability, penetration, phi_a_follower, AgentPathKind, GapCurve,
};
use crate::error::{Error, Result};
use crate::model::{
    model1_output, model2_output, model4_output, model5_output, network_multiplier, CountryProfile,
    OutputBreakdown,
};

pub use registry::{
    builtin_scenarios, china_phi_a_path, china_profile, us_profile, Registry, CN_2010, CN_2019,
    CN_AGENTS_0, CN_AGENT_GROWTH, CN_ALPHA, CN_GROWTH_ACCEL, DEFAULT_HORIZON, EPOCH_LABEL,
    GAP_ANCHORS, US_2010, US_2019, US_AGENTS_0, US_ALPHA,
};

/// The five production models, numbered as they build on one another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ModelKind {
    PureHuman = 1,
    Collaboration = 2,
    Network = 3,
    Autonomous = 4,
    Combined = 5,
}

impl ModelKind {
    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn title(self) -> &'static str {
        match self {
            ModelKind::PureHuman => "Model 1 (pure human)",
            ModelKind::Collaboration => "Model 2 (AI collaboration)",
            ModelKind::Network => "Model 3 (collaboration with network effects)",
            ModelKind::Autonomous => "Model 4 (autonomous AI production)",
            ModelKind::Combined => "Model 5 (autonomous AI with network effects)",
        }
    }
}

impl TryFrom<u8> for ModelKind {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        Ok(match v {
            1 => ModelKind::PureHuman,
            2 => ModelKind::Collaboration,
            3 => ModelKind::Network,
            4 => ModelKind::Autonomous,
            5 => ModelKind::Combined,
            other => return Err(format!("model must be 1..=5, got {other}")),
        })
    }
}

impl From<ModelKind> for u8 {
    fn from(m: ModelKind) -> u8 {
        m as u8
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Follower AI efficiency tied to a leader through a decaying gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeVaryingPhiA {
    pub leader_phi_a: f64,
    pub gap: GapCurve,
}

impl TimeVaryingPhiA {
    pub fn phi_a_at(&self, t: f64) -> f64 {
        phi_a_follower(t, self.leader_phi_a, &self.gap)
    }
}

/// Keys accepted by [`ScenarioConfig::set`].
pub const OVERRIDE_KEYS: &[&str] = &[
    "population",
    "capital",
    "alpha",
    "phi_h",
    "phi_a",
    "omega",
    "human_share",
    "gamma",
    "beta_enh",
    "delta",
    "eta",
    "k",
    "t0",
    "a0",
    "g",
    "accel",
    "phi_a_leader",
    "delta0",
    "tau",
    "beta_gap",
];

const GAP_KEYS: &[&str] = &["phi_a_leader", "delta0", "tau", "beta_gap"];

fn apply_profile_override(p: &mut CountryProfile, key: &str, v: f64) {
    match key {
        "population" => p.population = v,
        "capital" => p.capital = v,
        "alpha" => p.alpha = v,
        "phi_h" => p.phi_h = v,
        "phi_a" => p.phi_a = v,
        "omega" => p.omega = v,
        "human_share" => p.human_share = v,
        "gamma" => p.enhancement.gamma = v,
        "beta_enh" => p.enhancement.beta_enh = v,
        "delta" => p.enhancement.delta = v,
        "eta" => p.network.eta = v,
        "k" => p.capability.k = v,
        "t0" => p.capability.t0 = v,
        "a0" => p.agents.a0 = v,
        "g" => p.agents.g = v,
        "accel" => {
            // A linear path ignores `accel`, so setting one promotes it.
            if p.agents.kind == AgentPathKind::Linear {
                p.agents.kind = AgentPathKind::LinearAccelerating;
            }
            p.agents.accel = v;
        }
        _ => {}
    }
}

fn apply_gap_override(path: &mut TimeVaryingPhiA, key: &str, v: f64) {
    match key {
        "phi_a_leader" => path.leader_phi_a = v,
        "delta0" => path.gap.delta0 = v,
        "tau" => path.gap.tau = v,
        "beta_gap" => path.gap.beta_gap = v,
        _ => {}
    }
}

fn default_horizon() -> u32 {
    DEFAULT_HORIZON
}

fn default_epoch() -> String {
    EPOCH_LABEL.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub model: ModelKind,
    /// Last simulated year; steps run over `0..=horizon`.
    #[serde(default = "default_horizon")]
    pub horizon: u32,
    /// Calendar year corresponding to `t = 0`.
    #[serde(default = "default_epoch")]
    pub epoch_label: String,
    /// Named parameter overrides applied on top of `profile`.
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    /// When present, replaces the constant `phi_a` in models 4 and 5.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_a_path: Option<TimeVaryingPhiA>,
    pub profile: CountryProfile,
}

impl ScenarioConfig {
    pub fn new(name: impl Into<String>, model: ModelKind, profile: CountryProfile) -> Self {
        ScenarioConfig {
            name: name.into(),
            description: String::new(),
            model,
            horizon: DEFAULT_HORIZON,
            epoch_label: EPOCH_LABEL.into(),
            overrides: BTreeMap::new(),
            phi_a_path: None,
            profile,
        }
    }

    /// Records an override. Unknown keys, and gap keys on a scenario without
    /// a time-varying efficiency, are rejected.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !OVERRIDE_KEYS.contains(&key) {
            return Err(Error::Config(format!(
                "unknown parameter '{key}'; expected one of: {}",
                OVERRIDE_KEYS.join(", ")
            )));
        }
        if GAP_KEYS.contains(&key) && self.phi_a_path.is_none() {
            return Err(Error::Config(format!(
                "parameter '{key}' needs a scenario with a time-varying phi_a"
            )));
        }
        if !value.is_finite() {
            return Err(Error::Config(format!("parameter '{key}' must be finite")));
        }
        self.overrides.insert(key.to_string(), value);
        Ok(())
    }

    pub fn with(mut self, key: &str, value: f64) -> Result<Self> {
        self.set(key, value)?;
        Ok(self)
    }

    /// Profile after applying every override.
    pub fn resolved_profile(&self) -> Result<CountryProfile> {
        let mut p = self.profile.clone();
        for (k, v) in &self.overrides {
            apply_profile_override(&mut p, k, *v);
        }
        p.validate()?;
        Ok(p)
    }

    pub fn resolved_phi_a_path(&self) -> Result<Option<TimeVaryingPhiA>> {
        let Some(mut path) = self.phi_a_path else {
            return Ok(None);
        };
        for (k, v) in &self.overrides {
            apply_gap_override(&mut path, k, *v);
        }
        path.gap.validate()?;
        if !(path.leader_phi_a > 0.0) {
            return Err(Error::domain(format!(
                "leader phi_a must be positive, got {}",
                path.leader_phi_a
            )));
        }
        Ok(Some(path))
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        for k in self.overrides.keys() {
            if !OVERRIDE_KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!(
                    "unknown override '{k}' in {}",
                    self.name
                )));
            }
            if GAP_KEYS.contains(&k.as_str()) && self.phi_a_path.is_none() {
                return Err(Error::Config(format!(
                    "override '{k}' in {} needs a time-varying phi_a",
                    self.name
                )));
            }
        }
        self.resolved_profile()?;
        self.resolved_phi_a_path()?;
        Ok(())
    }

    /// The same scenario with its distinguishing mechanism switched off:
    /// Model 1 on the full capital for Model 2, and `η = 0` for Models 3 and
    /// 5. Models 1 and 4 have no twin.
    pub fn mechanism_disabled_twin(&self) -> Option<ScenarioConfig> {
        let mut twin = self.clone();
        match self.model {
            ModelKind::Collaboration => twin.model = ModelKind::PureHuman,
            ModelKind::Network | ModelKind::Combined => {
                twin.overrides.insert("eta".into(), 0.0);
            }
            ModelKind::PureHuman | ModelKind::Autonomous => return None,
        }
        twin.name = format!("{}-baseline", self.name);
        Some(twin)
    }
}

/// One simulated year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u32,
    /// Capability level.
    pub s: f64,
    /// Agent count.
    #[serde(rename = "A")]
    pub agents: f64,
    /// Penetration `A / N`.
    #[serde(rename = "p")]
    pub penetration: f64,
    /// Network multiplier actually applied (1 when the model has none).
    pub theta: f64,
    pub y_total: f64,
    pub y_human: f64,
    pub y_ai: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub scenario: String,
    pub model: ModelKind,
    pub epoch_label: String,
    /// Fully resolved parameters the run used.
    pub parameters: CountryProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_a_path: Option<TimeVaryingPhiA>,
    pub records: Vec<StepRecord>,
}

impl SimulationResult {
    pub fn y_total(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.y_total).collect()
    }

    pub fn last(&self) -> &StepRecord {
        self.records
            .last()
            .expect("results always hold at least two steps")
    }

    pub fn horizon(&self) -> u32 {
        self.last().t
    }
}

fn evaluate_step(
    model: ModelKind,
    profile: &CountryProfile,
    phi_a_path: Option<&TimeVaryingPhiA>,
    t: u32,
) -> Result<StepRecord> {
    let tf = f64::from(t);
    let s = capability(tf, &profile.capability);
    let agents = agent_count(tf, &profile.agents)?;
    let p = penetration(agents, profile.population)?;
    let out = match model {
        ModelKind::PureHuman => {
            let y = model1_output(
                profile.population,
                profile.capital,
                profile.alpha,
                profile.phi_h,
            )?;
            human_only(y, 1.0)
        }
        ModelKind::Collaboration => human_only(model2_output(profile, s)?, 1.0),
        ModelKind::Network => {
            let theta = network_multiplier(agents, profile.population, profile.network.eta)?;
            human_only(model2_output(profile, s)? * theta, theta)
        }
        ModelKind::Autonomous | ModelKind::Combined => {
            let owned;
            let profile = match phi_a_path {
                Some(path) => {
                    let mut p = profile.clone();
                    p.phi_a = path.phi_a_at(tf);
                    owned = p;
                    &owned
                }
                None => profile,
            };
            if model == ModelKind::Autonomous {
                model4_output(profile, s, agents)?
            } else {
                model5_output(profile, s, agents)?
            }
        }
    };
    Ok(StepRecord {
        t,
        s,
        agents,
        penetration: p,
        theta: out.multiplier_network,
        y_total: out.y_total,
        y_human: out.y_human,
        y_ai: out.y_ai,
    })
}

fn human_only(y: f64, theta: f64) -> OutputBreakdown {
    OutputBreakdown {
        y_total: y,
        y_human: y,
        y_ai: 0.0,
        multiplier_network: theta,
    }
}

/// Simulates every integer year of the horizon.
pub fn run(config: &ScenarioConfig) -> Result<SimulationResult> {
    config.validate()?;
    let profile = config.resolved_profile()?;
    let phi_a_path = config.resolved_phi_a_path()?;
    let records = (0..=config.horizon)
        .map(|t| {
            evaluate_step(config.model, &profile, phi_a_path.as_ref(), t).map_err(|e| {
                Error::AtStep {
                    t,
                    source: Box::new(e),
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimulationResult {
        scenario: config.name.clone(),
        model: config.model,
        epoch_label: config.epoch_label.clone(),
        parameters: profile,
        phi_a_path,
        records,
    })
}

/// Runs several scenarios in parallel; results keep the input order.
pub fn run_batch(configs: &[ScenarioConfig]) -> Vec<Result<SimulationResult>> {
    configs.par_iter().map(run).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonPoint {
    pub t: u32,
    /// `a / b`
    pub ratio: f64,
    /// `100 · (a − b) / b`
    pub enhancement_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSeries {
    pub a: String,
    pub b: String,
    pub points: Vec<ComparisonPoint>,
    /// First step with `a ≥ b`.
    pub crossover_t: Option<u32>,
}

fn check_aligned(a: &SimulationResult, b: &SimulationResult) -> Result<()> {
    if a.records.len() != b.records.len()
        || a.records.iter().zip(&b.records).any(|(x, y)| x.t != y.t)
    {
        return Err(Error::Shape(format!(
            "{} has {} steps but {} has {}",
            a.scenario,
            a.records.len(),
            b.scenario,
            b.records.len()
        )));
    }
    Ok(())
}

/// Per-step ratio and percentage enhancement of `a` over `b`.
pub fn compare(a: &SimulationResult, b: &SimulationResult) -> Result<ComparisonSeries> {
    check_aligned(a, b)?;
    let points = a
        .records
        .iter()
        .zip(&b.records)
        .map(|(x, y)| {
            if y.y_total == 0.0 {
                return Err(Error::Singularity(format!(
                    "{} has zero output at t={}",
                    b.scenario, y.t
                )));
            }
            Ok(ComparisonPoint {
                t: x.t,
                ratio: x.y_total / y.y_total,
                enhancement_pct: 100.0 * (x.y_total - y.y_total) / y.y_total,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonSeries {
        a: a.scenario.clone(),
        b: b.scenario.clone(),
        points,
        crossover_t: first_crossover(a, b),
    })
}

fn first_crossover(a: &SimulationResult, b: &SimulationResult) -> Option<u32> {
    a.records
        .iter()
        .zip(&b.records)
        .find(|(x, y)| x.y_total >= y.y_total)
        .map(|(x, _)| x.t)
}

/// First year in which the follower's output reaches the leader's.
pub fn detect_crossover(
    follower: &SimulationResult,
    leader: &SimulationResult,
) -> Result<Option<u32>> {
    check_aligned(follower, leader)?;
    Ok(first_crossover(follower, leader))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub final_y_total: f64,
    /// Mean over all steps of the percentage change against the unswept
    /// scenario.
    pub mean_enhancement_pct: f64,
}

/// Runs `config` once per grid value of `param`, holding everything else
/// fixed. Runs execute in parallel; rows follow the grid order.
pub fn sensitivity_sweep(
    config: &ScenarioConfig,
    param: &str,
    grid: &[f64],
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    config.clone().set(param, grid[0])?;
    let base = run(config)?;
    grid.par_iter()
        .map(|&value| {
            let cfg = config.clone().with(param, value)?;
            let res = run(&cfg)?;
            let cmp = compare(&res, &base)?;
            let mean =
                cmp.points.iter().map(|p| p.enhancement_pct).sum::<f64>() / cmp.points.len() as f64;
            Ok(SweepRow {
                value,
                final_y_total: res.last().y_total,
                mean_enhancement_pct: mean,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reg() -> Registry {
        builtin_scenarios()
    }

    #[test]
    fn m1_is_constant() {
        let r = run(reg().get("m1-cn").unwrap()).unwrap();
        assert_eq!(r.records.len(), 21);
        let y0 = r.records[0].y_total;
        assert!(r.records.iter().all(|x| x.y_total == y0));
        assert_relative_eq!(y0, 9.031e12, max_relative = 0.015);
    }

    #[test]
    fn gamma_zero_matches_model1_on_human_capital() {
        let cfg = reg()
            .get("m2-cn")
            .unwrap()
            .clone()
            .with("gamma", 0.0)
            .unwrap();
        let m2 = run(&cfg).unwrap();
        let mut twin = cfg
            .clone()
            .with("capital", cfg.profile.capital * 0.85)
            .unwrap();
        twin.model = ModelKind::PureHuman;
        let m1 = run(&twin).unwrap();
        for (a, b) in m2.records.iter().zip(&m1.records) {
            assert_relative_eq!(a.y_total, b.y_total, max_relative = 1e-12);
        }
    }

    #[test]
    fn m3_enhancement_is_eta_p_squared() {
        let cfg = reg().get("m3-cn").unwrap().clone();
        let on = run(&cfg).unwrap();
        let off = run(&cfg.mechanism_disabled_twin().unwrap()).unwrap();
        for ((a, b), rec) in on.records.iter().zip(&off.records).zip(&on.records) {
            let enh = a.y_total / b.y_total - 1.0;
            assert_relative_eq!(
                enh,
                0.04 * rec.penetration * rec.penetration,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn m5_enhancement_structure() {
        let cfg = reg().get("m5-us").unwrap().clone();
        let on = run(&cfg).unwrap();
        let off = run(&cfg.mechanism_disabled_twin().unwrap()).unwrap();
        for (a, b) in on.records.iter().zip(&off.records) {
            let enh = (a.y_total - b.y_total) / b.y_total;
            let p = a.penetration;
            let expect = a.y_ai * 0.07 * p * p / (a.y_human + a.y_ai);
            assert_relative_eq!(enh, expect, max_relative = 1e-9);
        }
    }

    #[test]
    fn compare_self_and_mismatch() {
        let r = run(reg().get("m4-cn").unwrap()).unwrap();
        let c = compare(&r, &r).unwrap();
        assert!(c
            .points
            .iter()
            .all(|p| p.ratio == 1.0 && p.enhancement_pct == 0.0));
        assert_eq!(c.crossover_t, Some(0));
        let mut short = reg().get("m4-us").unwrap().clone();
        short.horizon = 10;
        let s = run(&short).unwrap();
        assert!(matches!(compare(&r, &s), Err(Error::Shape(_))));
        assert!(matches!(detect_crossover(&r, &s), Err(Error::Shape(_))));
    }

    #[test]
    fn m2_multiplier_saturates() {
        let m2 = run(reg().get("m2-cn").unwrap()).unwrap();
        let m1 = run(reg().get("m1-cn").unwrap()).unwrap();
        let c = compare(&m2, &m1).unwrap();
        assert!(c.points.windows(2).all(|w| w[1].ratio > w[0].ratio));
        assert!((c.points.last().unwrap().ratio - 1.2336).abs() < 1e-3);
    }

    #[test]
    fn unknown_override_and_gap_keys() {
        let mut cfg = reg().get("m4-cn").unwrap().clone();
        assert!(matches!(cfg.set("zeta", 1.0), Err(Error::Config(_))));
        assert!(matches!(cfg.set("tau", 1.0), Err(Error::Config(_))));
        let mut t = reg().get("m4-cn-phia-t").unwrap().clone();
        t.set("tau", 6.0).unwrap();
        assert_eq!(t.resolved_phi_a_path().unwrap().unwrap().gap.tau, 6.0);
    }

    #[test]
    fn step_errors_are_annotated() {
        let cfg = reg().get("m4-us").unwrap().clone().with("g", -5e6).unwrap();
        let err = run(&cfg).unwrap_err();
        match err {
            Error::AtStep { t, ref source } => {
                assert_eq!(t, 9);
                assert!(matches!(**source, Error::Path(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sweeps() {
        let m5 = reg().get("m5-cn").unwrap().clone();
        let rows = sensitivity_sweep(&m5, "eta", &[0.0, 0.04, 0.07]).unwrap();
        assert!(rows
            .windows(2)
            .all(|w| w[1].final_y_total >= w[0].final_y_total));

        let m4 = reg().get("m4-cn").unwrap().clone();
        let rows = sensitivity_sweep(&m4, "g", &[3e6, 5e6, 1e7]).unwrap();
        assert!(rows
            .windows(2)
            .all(|w| w[1].final_y_total > w[0].final_y_total));
        assert!(rows[1].mean_enhancement_pct.abs() < 1e-12);

        let rows = sensitivity_sweep(&m4, "omega", &[0.05, 0.10, 0.15]).unwrap();
        for (row, w) in rows.iter().zip([0.05, 0.10, 0.15]) {
            let direct = run(&m4.clone().with("omega", w).unwrap()).unwrap();
            assert_eq!(row.final_y_total, direct.last().y_total);
        }

        assert!(matches!(
            sensitivity_sweep(&m4, "nope", &[1.0]),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            sensitivity_sweep(&m4, "eta", &[]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn batch_matches_sequential() {
        let cfgs: Vec<_> = reg().iter().cloned().collect();
        let par = run_batch(&cfgs);
        for (cfg, r) in cfgs.iter().zip(par) {
            assert_eq!(r.unwrap(), run(cfg).unwrap());
        }
    }
}
