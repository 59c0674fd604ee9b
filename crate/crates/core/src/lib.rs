//! Aggregate interference from a CBRS downlink deployment at a shipborne
//! radar, radar protection criteria, and CBSD transmit-power planning.
//!
//! The crate is organized bottom-up:
//!
//! - [`propagation`]: extended Hata median loss, free-space loss and
//!   log-normal shadowing.
//! - [`antenna`]: cosine-aperture radar azimuth pattern.
//! - [`radar`]: radar constants, noise, echo power, SINR threshold, FDR.
//! - [`scenario`]: deployment generation, sectorization, coverage radius.
//! - [`interference`]: aggregate interference, analytic and Monte Carlo
//!   SINR distributions, protection-distance sweeps.
//! - [`power_control`]: farthest-first power allocation (per device and per
//!   sector), density-adjusted planning and Monte Carlo verification.
//! - [`config`]: the TOML scenario file schema.

pub mod antenna;
pub mod config;
pub mod error;
pub mod interference;
pub mod power_control;
pub mod propagation;
pub mod radar;
pub mod scenario;
pub mod units;

pub use antenna::{AntennaPattern, RadarAntenna};
pub use config::SimConfig;
pub use error::{Error, Result};
pub use interference::{
    CdfSource, ChannelMode, InterferenceBudget, MonteCarloOptions, SinrDistribution, SweepRow,
};
pub use power_control::{
    AllocationMethod, DensityPlan, PowerAllocation, SectorPlan, VerificationReport,
};
pub use propagation::{Environment, FadingModel, PathlossInputs, PathlossModel, PropagationModel};
pub use radar::{FdrProfile, FdrTable, RadarParams};
pub use scenario::{
    Boresight, Cbsd, CbsdParams, CoverageBudget, DeploymentConfig, DeploymentRegion, Scenario,
    Sector,
};
