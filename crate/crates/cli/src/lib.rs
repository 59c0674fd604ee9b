//! Batch runner behind the `coexsim` binary: resolves a scenario file plus
//! command-line overrides, runs one command and writes CSV/JSON results and
//! a manifest into the output directory.
//!
//! Outputs never embed timestamps or host details, so a rerun with the same
//! configuration and seed reproduces every byte.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use coexsim_core::config::SimConfig;
use coexsim_core::interference::{
    analytic_sinr_cdf, monte_carlo_sinr_cdf, protection_distance_sweep,
};
use coexsim_core::power_control::{
    allocate_method1, allocate_method2, allocate_with_density, verify_allocation, AllocationOptions,
};
use coexsim_core::radar::{max_tolerable_interference_dbm, FdrProfile};
use coexsim_core::scenario::{generate_deployment, sectorize, Scenario};
use coexsim_core::{AllocationMethod, DensityPlan, PowerAllocation, SinrDistribution};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Channel offset used when `--fdr-db` is given without a configured one.
pub const DEFAULT_FDR_OFFSET_MHZ: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SinrSweep,
    CdfSingle,
    Allocate { method: AllocationMethod },
    DensityPlan,
    Verify { method: AllocationMethod },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SinrSweep => "sinr-sweep",
            Command::CdfSingle => "cdf-single",
            Command::Allocate { .. } => "allocate",
            Command::DensityPlan => "density-plan",
            Command::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Overrides {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub r_min_km: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub r_target_km: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fdr_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_th_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sectors: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_step_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub config_path: PathBuf,
    pub command: Command,
    pub out_dir: PathBuf,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub overrides: Overrides,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] coexsim_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use coexsim_core::Error as E;
        match self {
            CliError::Read { .. } => "read",
            CliError::Write { .. } => "write",
            CliError::Model(E::Config(_)) | CliError::Model(E::MissingSection(_)) => "config",
            CliError::Model(E::MissingFdr { .. }) => "missing-fdr",
            CliError::Model(E::InfeasibleGeometry(_)) => "infeasible-geometry",
            CliError::Model(_) => "invalid-input",
            CliError::Csv(_) | CliError::Json(_) => "output",
            CliError::Usage(_) => "usage",
        }
    }

    /// Machine-readable error record.
    pub fn record(&self) -> serde_json::Value {
        json!({ "error": self.kind(), "message": self.to_string() })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Files written by a successful run, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub files: Vec<String>,
    /// `false` only for an allocation or plan declared infeasible.
    pub feasible: bool,
}

/// Loads the scenario file and applies command-line overrides.
pub fn resolve_config(run: &RunConfig) -> CliResult<SimConfig> {
    let text = fs::read_to_string(&run.config_path).map_err(|source| CliError::Read {
        path: run.config_path.clone(),
        source,
    })?;
    let mut cfg = SimConfig::from_toml_str(&text)?;
    let o = &run.overrides;
    if let Some(t) = run.trials {
        cfg.interference.trials = t;
    }
    if let Some(s) = run.seed {
        cfg.interference.seed = s;
    }
    if let Some(&r) = o.r_min_km.first() {
        cfg.deployment.protection_distance_km = r;
        cfg.interference.protection_distances_km = o.r_min_km.clone();
    }
    if let Some(&rt) = o.r_target_km.first() {
        cfg.interference.target_range_km = rt;
    }
    if let Some(x) = o.fdr_db {
        let offset = cfg
            .interference
            .channel_offset_mhz
            .unwrap_or(DEFAULT_FDR_OFFSET_MHZ);
        cfg.fdr.retain(|e| e.channel_offset_mhz != offset);
        cfg.fdr.push(FdrProfile::new(offset, x)?);
        cfg.interference.channel_offset_mhz = Some(offset);
    }
    if let Some(i) = o.i_th_dbm {
        cfg.radar.interference_threshold_override_dbm = Some(i);
    }
    if let Some(k) = o.sectors {
        cfg.power_control.sectors = k;
    }
    if let Some(s) = o.power_step_db {
        cfg.power_control.power_step_db = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

struct Out<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Out<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn bytes(&mut self, name: &str, data: &[u8]) -> CliResult<()> {
        let p = self.path(name);
        fs::write(&p, data).map_err(|source| CliError::Write { path: p, source })?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.bytes(name, text.as_bytes())
    }

    fn csv(
        &mut self,
        name: &str,
        header: &[&str],
        rows: impl IntoIterator<Item = Vec<String>>,
    ) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        let data = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        self.bytes(name, &data)
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x < 0.0 {
        "-inf".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "nan".into()
    }
}

fn cdf_rows(d: &SinrDistribution) -> Vec<Vec<String>> {
    d.thresholds_db
        .iter()
        .zip(&d.cdf_values)
        .map(|(t, c)| vec![num(*t), num(*c)])
        .collect()
}

fn range_label(km: f64) -> String {
    num(km).replace('.', "p")
}

fn build_scenario(cfg: &SimConfig) -> CliResult<Scenario> {
    let s = generate_deployment(&cfg.scenario(), cfg.interference.seed)?;
    Ok(sectorize(&s, cfg.power_control.sectors)?)
}

fn i_th(cfg: &SimConfig) -> f64 {
    max_tolerable_interference_dbm(&cfg.radar)
}

fn allocation_options(cfg: &SimConfig) -> CliResult<AllocationOptions> {
    let mut o = AllocationOptions::new(i_th(cfg), cfg.power_control.power_step_db);
    o.mode = cfg.channel_mode()?;
    Ok(o)
}

fn allocate(cfg: &SimConfig, s: &Scenario, method: AllocationMethod) -> CliResult<PowerAllocation> {
    let o = allocation_options(cfg)?;
    match method {
        AllocationMethod::PerCbsd => Ok(allocate_method1(s, &o)?),
        AllocationMethod::PerSector => Ok(allocate_method2(s, &o)?),
        AllocationMethod::DensityAdjusted => Err(CliError::Usage(
            "density-adjusted planning is the density-plan command".into(),
        )),
    }
}

fn write_allocation(out: &mut Out, s: &Scenario, a: &PowerAllocation) -> CliResult<()> {
    let mut sector_of = vec![0usize; s.cbsds.len()];
    for sec in &s.sectors {
        for &id in &sec.member_ids {
            sector_of[id] = sec.index;
        }
    }
    out.csv(
        "allocation.csv",
        &["id", "sector", "range_km", "azimuth_deg", "power_dbm"],
        s.cbsds.iter().map(|c| {
            vec![
                c.id.to_string(),
                sector_of[c.id].to_string(),
                num(c.distance_km),
                num(c.azimuth_deg),
                num(a.per_cbsd_power_dbm[c.id]),
            ]
        }),
    )?;
    out.json("allocation.json", a)
}

fn write_density_plan(out: &mut Out, p: &DensityPlan) -> CliResult<()> {
    let band = |b: Option<(f64, f64)>, hi: bool| {
        b.map_or(String::new(), |(l, h)| num(if hi { h } else { l }))
    };
    out.csv(
        "density_plan.csv",
        &[
            "sector",
            "range_near_km",
            "range_far_km",
            "power_dbm",
            "density_per_km2",
            "cell_radius_km",
            "band_low_dbm",
            "band_high_dbm",
        ],
        p.sectors.iter().map(|s| {
            vec![
                s.index.to_string(),
                num(s.range_interval_km.0),
                num(s.range_interval_km.1),
                num(s.power_dbm),
                num(s.density_per_km2),
                num(s.cell_radius_km),
                band(s.feasible_power_band_dbm, false),
                band(s.feasible_power_band_dbm, true),
            ]
        }),
    )?;
    out.json("density_plan.json", p)
}

/// Runs one command and writes its artifacts plus `manifest.json`.
pub fn run(run: &RunConfig) -> CliResult<RunSummary> {
    let cfg = resolve_config(run)?;
    fs::create_dir_all(&run.out_dir).map_err(|source| CliError::Write {
        path: run.out_dir.clone(),
        source,
    })?;
    let mut out = Out {
        dir: &run.out_dir,
        files: Vec::new(),
    };
    let mut feasible = true;
    let mode = cfg.channel_mode()?;
    let rt_list: Vec<f64> = if run.overrides.r_target_km.is_empty() {
        vec![cfg.interference.target_range_km]
    } else {
        run.overrides.r_target_km.clone()
    };

    match run.command {
        Command::SinrSweep => {
            let rows = protection_distance_sweep(
                &cfg.scenario(),
                &cfg.interference.protection_distances_km,
                cfg.interference.target_range_km * 1e3,
                &cfg.monte_carlo(),
                mode,
            )?;
            out.csv(
                "sweep.csv",
                &[
                    "r_min_km",
                    "compliance_probability",
                    "trials",
                    "seed",
                    "cbsd_count",
                ],
                rows.iter().map(|r| {
                    vec![
                        num(r.r_min_km),
                        num(r.compliance_probability),
                        r.trials.to_string(),
                        r.seed.to_string(),
                        r.cbsd_count.to_string(),
                    ]
                }),
            )?;
            out.json(
                "sweep.json",
                &json!({ "i_th_dbm": i_th(&cfg), "rows": rows }),
            )?;
        }
        Command::CdfSingle => {
            let s = generate_deployment(&cfg.scenario(), cfg.interference.seed)?;
            let multi = rt_list.len() > 1;
            for rt in rt_list {
                let suffix = if multi {
                    format!("_rt{}km", range_label(rt))
                } else {
                    String::new()
                };
                let mc = monte_carlo_sinr_cdf(&s, rt * 1e3, &cfg.monte_carlo(), mode)?;
                let an = analytic_sinr_cdf(
                    &s,
                    rt * 1e3,
                    cfg.fading.sigma_db,
                    &cfg.interference.grid,
                    mode,
                )?;
                out.csv(
                    &format!("cdf{suffix}.csv"),
                    &["threshold_db", "cdf"],
                    cdf_rows(&mc),
                )?;
                out.csv(
                    &format!("cdf_analytic{suffix}.csv"),
                    &["threshold_db", "cdf"],
                    cdf_rows(&an),
                )?;
                out.json(
                    &format!("cdf{suffix}.json"),
                    &json!({
                        "r_min_km": cfg.deployment.protection_distance_km,
                        "r_target_km": rt,
                        "cbsd_count": s.cbsds.len(),
                        "i_th_dbm": i_th(&cfg),
                        "monte_carlo": mc,
                        "analytic": an,
                    }),
                )?;
            }
        }
        Command::Allocate { method } => {
            let s = build_scenario(&cfg)?;
            let a = allocate(&cfg, &s, method)?;
            feasible = a.feasible;
            write_allocation(&mut out, &s, &a)?;
        }
        Command::DensityPlan => {
            let s = build_scenario(&cfg)?;
            let budget = cfg.coverage_budget(&s.layout)?;
            let p = allocate_with_density(&s, &allocation_options(&cfg)?, &budget)?;
            feasible = p.feasible;
            write_density_plan(&mut out, &p)?;
        }
        Command::Verify { method } => {
            let s = build_scenario(&cfg)?;
            let a = allocate(&cfg, &s, method)?;
            feasible = a.feasible;
            write_allocation(&mut out, &s, &a)?;
            let report = if a.feasible {
                Some(verify_allocation(
                    &s,
                    &a,
                    cfg.interference.trials,
                    cfg.fading.sigma_db,
                    cfg.interference.seed,
                )?)
            } else {
                None
            };
            out.json(
                "verification.json",
                &json!({ "feasible": a.feasible, "report": report }),
            )?;
        }
    }

    let manifest = json!({
        "tool": "coexsim",
        "version": TOOL_VERSION,
        "command": run.command,
        "seed": cfg.interference.seed,
        "trials": cfg.interference.trials,
        "overrides": run.overrides,
        "feasible": feasible,
        "outputs": out.files,
        "units": { "power": "dBm", "gain": "dBi", "loss": "dB", "distance": "km" },
        "config": cfg,
        "config_toml": cfg.to_toml_string()?,
    });
    out.json("manifest.json", &manifest)?;
    Ok(RunSummary {
        files: out.files,
        feasible,
    })
}

/// Writes `error.json` into `dir` when possible.
pub fn write_error_record(dir: &Path, err: &CliError) {
    let _ = fs::create_dir_all(dir);
    let text = serde_json::to_string_pretty(&err.record()).unwrap_or_default();
    let _ = fs::write(dir.join("error.json"), text + "\n");
}
