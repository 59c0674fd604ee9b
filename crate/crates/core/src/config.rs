//! TOML scenario file.
//!
//! ```toml
//! [radar]            # RadarParams, with [radar.antenna]
//! [cbsd]             # CbsdParams
//! [propagation]      # model = "extended-hata" | "hata" | "free-space"
//! [fading]           # sigma_db
//! [deployment]       # DeploymentConfig
//! [interference]     # target range, Monte Carlo settings, SINR grid
//! [power_control]    # sectors, step
//! [coverage]         # edge budget for density planning
//! [[fdr]]            # channel_offset_mhz, rejection_db
//! ```
//!
//! Only `[radar]` is mandatory; every other section falls back to the
//! reference values.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::interference::{ChannelMode, MonteCarloOptions, SinrGrid};
use crate::propagation::PropagationModel;
use crate::radar::{FdrProfile, FdrTable, RadarParams};
use crate::scenario::{CbsdParams, CoverageBudget, DeploymentConfig, Layout, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSection {
    pub sigma_db: f64,
}

impl Default for FadingSection {
    fn default() -> Self {
        Self { sigma_db: 8.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterferenceSection {
    pub target_range_km: f64,
    pub trials: usize,
    pub seed: u64,
    pub redeploy: bool,
    pub grid: SinrGrid,
    /// Adjacent-channel operation at this offset (looked up in `[[fdr]]`).
    pub channel_offset_mhz: Option<f64>,
    pub protection_distances_km: Vec<f64>,
}

impl Default for InterferenceSection {
    fn default() -> Self {
        Self {
            target_range_km: 50.0,
            trials: 10_000,
            seed: 1,
            redeploy: true,
            grid: SinrGrid::default(),
            channel_offset_mhz: None,
            protection_distances_km: vec![10.0, 20.0, 30.0, 40.0, 50.0, 60.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PowerControlSection {
    pub sectors: usize,
    pub power_step_db: f64,
}

impl Default for PowerControlSection {
    fn default() -> Self {
        Self {
            sectors: 20,
            power_step_db: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoverageSection {
    /// Cell-edge received power. When absent, chosen so that a CBSD at
    /// maximum power covers exactly one lattice cell.
    pub edge_sensitivity_dbm: Option<f64>,
    pub user_height_m: f64,
    pub min_radius_km: f64,
    pub max_radius_km: f64,
}

impl Default for CoverageSection {
    fn default() -> Self {
        Self {
            edge_sensitivity_dbm: None,
            user_height_m: 1.5,
            min_radius_km: 0.05,
            max_radius_km: 50.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub radar: RadarParams,
    #[serde(default)]
    pub cbsd: CbsdParams,
    #[serde(default)]
    pub propagation: PropagationModel,
    #[serde(default)]
    pub fading: FadingSection,
    #[serde(default)]
    pub deployment: DeploymentConfig,
    #[serde(default)]
    pub interference: InterferenceSection,
    #[serde(default)]
    pub power_control: PowerControlSection,
    #[serde(default)]
    pub coverage: CoverageSection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fdr: Vec<FdrProfile>,
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let value: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        if !value.contains_key("radar") {
            return Err(Error::MissingSection("radar".into()));
        }
        let cfg: SimConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario().validate()?;
        FdrTable::new(self.fdr.clone())?;
        ensure(self.fading.sigma_db >= 0.0, || {
            "fading.sigma_db must be non-negative".to_string()
        })?;
        ensure(self.interference.trials >= 1, || {
            "interference.trials must be at least 1".to_string()
        })?;
        ensure(self.interference.target_range_km > 0.0, || {
            "interference.target_range_km must be positive".to_string()
        })?;
        ensure(self.power_control.sectors >= 1, || {
            "power_control.sectors must be at least 1".to_string()
        })?;
        ensure(self.power_control.power_step_db > 0.0, || {
            "power_control.power_step_db must be positive".to_string()
        })?;
        self.interference.grid.points().map(|_| ())
    }

    pub fn scenario(&self) -> ScenarioConfig {
        ScenarioConfig {
            radar: self.radar.clone(),
            cbsd: self.cbsd.clone(),
            propagation: self.propagation,
            deployment: self.deployment.clone(),
        }
    }

    pub fn fdr_table(&self) -> Result<FdrTable> {
        FdrTable::new(self.fdr.clone())
    }

    pub fn channel_mode(&self) -> Result<ChannelMode> {
        match self.interference.channel_offset_mhz {
            None => Ok(ChannelMode::CoChannel),
            Some(off) => ChannelMode::adjacent(&self.fdr_table()?, off),
        }
    }

    pub fn monte_carlo(&self) -> MonteCarloOptions {
        MonteCarloOptions {
            trials: self.interference.trials,
            seed: self.interference.seed,
            sigma_db: self.fading.sigma_db,
            redeploy: self.interference.redeploy,
            grid: self.interference.grid,
        }
    }

    /// Coverage budget, deriving the edge sensitivity from the lattice when
    /// it is not configured.
    pub fn coverage_budget(&self, layout: &Layout) -> Result<CoverageBudget> {
        let c = &self.coverage;
        let mut b = match c.edge_sensitivity_dbm {
            Some(s) => CoverageBudget {
                edge_sensitivity_dbm: s,
                user_height_m: c.user_height_m,
                frequency_mhz: self.radar.frequency_mhz,
                min_radius_km: c.min_radius_km,
                max_radius_km: c.max_radius_km,
            },
            None => CoverageBudget::with_radius_at(
                &self.cbsd,
                self.radar.frequency_mhz,
                c.user_height_m,
                self.cbsd.max_power_dbm,
                layout.pitch_km / 3f64.sqrt(),
            )?,
        };
        b.min_radius_km = c.min_radius_km;
        b.max_radius_km = c.max_radius_km;
        b.validate()?;
        Ok(b)
    }
}
