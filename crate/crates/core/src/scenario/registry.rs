//! Baseline country profiles and the named scenario registry.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ModelKind, ScenarioConfig, TimeVaryingPhiA};
use crate::calibration::{
    calibrate_phi_a, calibrate_phi_h, derive_growth_rate, transfer_growth, CalibrationObservation,
    PhiACalibrationAssumptions,
};
use crate::dynamics::{AgentPath, LogisticParams};
use crate::error::{Error, Result};
use crate::fitting::{fit_gap_curve, GapPins, SeriesData};
use crate::model::{CountryProfile, EnhancementParams, NetworkParams};

pub const DEFAULT_HORIZON: u32 = 20;
/// Calendar year at `t = 0`.
pub const EPOCH_LABEL: &str = "2019";

pub const CN_ALPHA: f64 = 0.58625;
pub const US_ALPHA: f64 = 0.59709;

pub const CN_2010: CalibrationObservation = CalibrationObservation {
    year: 2010,
    gdp: 6.19e12,
    capital: 3.93e13,
    population: 7.7e8,
};
pub const CN_2019: CalibrationObservation = CalibrationObservation {
    year: 2019,
    gdp: 14.58e12,
    capital: 9.96e13,
    population: 7.7e8,
};
pub const US_2010: CalibrationObservation = CalibrationObservation {
    year: 2010,
    gdp: 15.05e12,
    capital: 6.1e13,
    population: 1.59e8,
};
pub const US_2019: CalibrationObservation = CalibrationObservation {
    year: 2019,
    gdp: 21.54e12,
    capital: 6.91e13,
    population: 1.59e8,
};

pub const CN_AGENTS_0: f64 = 1.495e8;
pub const CN_AGENT_GROWTH: f64 = 5e6;
pub const US_AGENTS_0: f64 = 4.45e7;
/// Yearly increase of the Chinese agent growth rate in the accelerated path.
pub const CN_GROWTH_ACCEL: f64 = 5e4;

/// Benchmark gap observations as `(t, Δ)`: end of 2023 and end of 2024.
pub const GAP_ANCHORS: [(f64, f64); 2] = [(5.0, 0.217), (6.0, 0.034)];

const SHARED_ENHANCEMENT: EnhancementParams = EnhancementParams {
    gamma: 0.55,
    beta_enh: 0.35,
    delta: 0.20,
};
const SHARED_NETWORK: NetworkParams = NetworkParams { eta: 0.07 };

/// China with efficiencies calibrated from the 2010 and 2019 observations.
pub fn china_profile() -> CountryProfile {
    let assume = PhiACalibrationAssumptions::default();
    let phi_h = calibrate_phi_h(&CN_2010, CN_ALPHA).expect("builtin observation is valid");
    let phi_a =
        calibrate_phi_a(&CN_2019, phi_h, CN_ALPHA, &assume).expect("builtin observation is valid");
    CountryProfile {
        name: "cn".into(),
        population: CN_2019.population,
        alpha: CN_ALPHA,
        capital: CN_2019.capital,
        phi_h,
        phi_a,
        omega: 0.05,
        human_share: 0.85,
        enhancement: SHARED_ENHANCEMENT,
        network: SHARED_NETWORK,
        capability: LogisticParams { k: 0.38, t0: 5.0 },
        agents: AgentPath::linear(CN_AGENTS_0, CN_AGENT_GROWTH),
    }
}

/// United States; agent growth keeps China's relative growth rate.
pub fn us_profile() -> CountryProfile {
    let assume = PhiACalibrationAssumptions::default();
    let phi_h = calibrate_phi_h(&US_2010, US_ALPHA).expect("builtin observation is valid");
    let phi_a =
        calibrate_phi_a(&US_2019, phi_h, US_ALPHA, &assume).expect("builtin observation is valid");
    let r_cn = derive_growth_rate(CN_AGENT_GROWTH, CN_AGENTS_0).expect("A0 is positive");
    CountryProfile {
        name: "us".into(),
        population: US_2019.population,
        alpha: US_ALPHA,
        capital: US_2019.capital,
        phi_h,
        phi_a,
        omega: 0.15,
        human_share: 0.85,
        enhancement: SHARED_ENHANCEMENT,
        network: SHARED_NETWORK,
        capability: LogisticParams { k: 0.30, t0: 3.0 },
        agents: AgentPath::linear(US_AGENTS_0, transfer_growth(r_cn, US_AGENTS_0)),
    }
}

/// Time-varying Chinese AI efficiency converging on the U.S. value.
///
/// `Δ0` is set so that the follower starts at its calibrated efficiency,
/// and `(τ, β)` are fitted through [`GAP_ANCHORS`].
pub fn china_phi_a_path() -> TimeVaryingPhiA {
    let leader = us_profile().phi_a;
    let follower = china_profile().phi_a;
    let delta0 = leader / follower - 1.0;
    let anchors =
        SeriesData::new("cn-us capability gap", GAP_ANCHORS.to_vec()).expect("anchors are ordered");
    let fit = fit_gap_curve(
        &anchors,
        GapPins {
            delta0: Some(delta0),
            ..Default::default()
        },
    )
    .expect("anchors lie below delta0");
    TimeVaryingPhiA {
        leader_phi_a: leader,
        gap: fit.gap_curve().expect("gap fit carries all parameters"),
    }
}

/// Named scenario definitions, ordered by name.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Registry {
    #[serde(rename = "scenario", default)]
    scenarios: Vec<ScenarioConfig>,
}

impl Registry {
    pub fn new(scenarios: impl IntoIterator<Item = ScenarioConfig>) -> Self {
        let map: BTreeMap<String, ScenarioConfig> =
            scenarios.into_iter().map(|s| (s.name.clone(), s)).collect();
        Registry {
            scenarios: map.into_values().collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&ScenarioConfig> {
        self.scenarios.iter().find(|s| s.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.scenarios.iter().map(|s| s.name.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &ScenarioConfig> {
        self.scenarios.iter()
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    /// Looks up `name` or reports the available names.
    pub fn require(&self, name: &str) -> Result<&ScenarioConfig> {
        self.get(name).ok_or_else(|| {
            Error::Config(format!(
                "unknown scenario '{name}'; available: {}",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    /// TOML document with one `[[scenario]]` table per entry.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let reg: Registry = toml::from_str(text).map_err(|e| Error::Serde(e.to_string()))?;
        for s in &reg.scenarios {
            s.validate()?;
        }
        Ok(Registry::new(reg.scenarios))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Registry::from_toml(&text)
    }
}

/// Every built-in scenario.
pub fn builtin_scenarios() -> Registry {
    let cn = china_profile();
    let us = us_profile();
    let make = |name: &str, model: ModelKind, profile: &CountryProfile, sets: &[(&str, f64)]| {
        let mut cfg = ScenarioConfig::new(name, model, profile.clone());
        for (k, v) in sets {
            cfg.set(k, *v).expect("builtin override key is valid");
        }
        cfg
    };

    let phi_a_path = china_phi_a_path();
    let mut accel_g = make(
        "m4-cn-accel-g",
        ModelKind::Autonomous,
        &cn,
        &[("omega", 0.15), ("accel", CN_GROWTH_ACCEL)],
    );
    accel_g.description = "Model 4, China, agent growth rising by 5e4 per year".into();
    let mut phia_t = make(
        "m4-cn-phia-t",
        ModelKind::Autonomous,
        &cn,
        &[("omega", 0.15)],
    );
    phia_t.phi_a_path = Some(phi_a_path);
    phia_t.description = "Model 4, China, AI efficiency converging on the U.S. value".into();
    let mut joint = accel_g.clone();
    joint.name = "m4-cn-joint".into();
    joint.phi_a_path = Some(phi_a_path);
    joint.description =
        "Model 4, China, accelerated agent growth and converging AI efficiency".into();

    let mut all = vec![
        make("m1-cn", ModelKind::PureHuman, &cn, &[]),
        make("m1-us", ModelKind::PureHuman, &us, &[]),
        make("m2-cn", ModelKind::Collaboration, &cn, &[]),
        make("m2-us", ModelKind::Collaboration, &us, &[]),
        make("m3-cn", ModelKind::Network, &cn, &[("eta", 0.04)]),
        make("m3-us", ModelKind::Network, &us, &[("eta", 0.04)]),
        make("m4-cn", ModelKind::Autonomous, &cn, &[("omega", 0.15)]),
        make("m4-us", ModelKind::Autonomous, &us, &[("omega", 0.15)]),
        make("m5-cn", ModelKind::Combined, &cn, &[]),
        make("m5-us", ModelKind::Combined, &us, &[]),
        accel_g,
        phia_t,
        joint,
    ];
    for s in all.iter_mut().filter(|s| s.description.is_empty()) {
        s.description = format!("{}, {}", s.model.title(), s.profile.name);
    }
    Registry::new(all)
}
