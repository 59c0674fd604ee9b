//! CBSD deployments around the radar.
//!
//! Sites sit on a jittered hexagonal lattice inside an annular sector facing
//! the radar (radar at the origin of a local east/north frame). The lattice
//! pitch never drops below the separation at which a CBSD at full power is
//! received by its neighbour under the interference limit (−62 dBm by
//! default). Azimuths are compass bearings in degrees, clockwise from north.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure, invalid, Error, Result};
use crate::propagation::{ExtendedHata, PathlossInputs, PathlossModel, PropagationModel};
use crate::radar::RadarParams;
use crate::units::wrap_degrees;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CbsdParams {
    /// EIRP, dBm.
    pub max_power_dbm: f64,
    /// EIRP, dBm.
    pub min_power_dbm: f64,
    pub height_m: f64,
    pub bandwidth_hz: f64,
}

impl Default for CbsdParams {
    fn default() -> Self {
        Self {
            max_power_dbm: 30.0,
            min_power_dbm: 20.0,
            height_m: 30.0,
            bandwidth_hz: 10e6,
        }
    }
}

impl CbsdParams {
    pub fn validate(&self) -> Result<()> {
        ensure(self.min_power_dbm <= self.max_power_dbm, || {
            format!(
                "cbsd.min_power_dbm ({}) exceeds cbsd.max_power_dbm ({})",
                self.min_power_dbm, self.max_power_dbm
            )
        })?;
        ensure(self.height_m > 0.0 && self.bandwidth_hz > 0.0, || {
            "cbsd.height_m and cbsd.bandwidth_hz must be positive".to_string()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cbsd {
    pub id: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub distance_km: f64,
    /// Bearing from the radar.
    pub azimuth_deg: f64,
    pub power_dbm: f64,
    /// Median radar-link loss, cached at generation.
    pub path_loss_db: f64,
}

/// Radar beam pointing.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boresight {
    /// Toward the centroid of the deployment region (worst case).
    #[default]
    Centroid,
    Fixed {
        azimuth_deg: f64,
    },
    /// Uniform over the horizon, redrawn per Monte Carlo trial. Fixed
    /// evaluations fall back to the centroid.
    Random,
}

/// Annular sector on the landward side of the radar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeploymentRegion {
    /// Bearing of the radar-to-shore axis.
    pub axis_azimuth_deg: f64,
    pub angular_extent_deg: f64,
    /// Drop sites seaward of a straight shoreline perpendicular to the axis.
    pub land_mask: bool,
    /// Distance from the radar to that shoreline along the axis.
    pub shore_distance_km: f64,
}

impl Default for DeploymentRegion {
    fn default() -> Self {
        Self {
            axis_azimuth_deg: 0.0,
            angular_extent_deg: 120.0,
            land_mask: true,
            shore_distance_km: 0.0,
        }
    }
}

impl DeploymentRegion {
    pub fn contains(&self, distance_km: f64, azimuth_deg: f64, along_axis_km: f64) -> bool {
        let off = wrap_degrees(azimuth_deg - self.axis_azimuth_deg).abs();
        let in_wedge = self.angular_extent_deg >= 360.0 || off <= self.angular_extent_deg / 2.0;
        let on_land = !self.land_mask || along_axis_km >= self.shore_distance_km;
        distance_km > 0.0 && in_wedge && on_land
    }

    /// Fraction of the radar→site path over water.
    pub fn sea_path_fraction(&self, along_axis_km: f64) -> f64 {
        if self.shore_distance_km <= 0.0 || along_axis_km <= 0.0 {
            return 0.0;
        }
        (self.shore_distance_km / along_axis_km).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeploymentConfig {
    pub protection_distance_km: f64,
    pub max_distance_km: f64,
    #[serde(flatten)]
    pub region: DeploymentRegion,
    /// Nominal inter-site distance. `None` packs sites as densely as the
    /// CBSD-to-CBSD interference limit allows.
    #[serde(default)]
    pub site_spacing_km: Option<f64>,
    /// Per-site jitter radius as a fraction of the lattice pitch.
    pub jitter_fraction: f64,
    /// Redraw the lattice origin uniformly over one cell per realization.
    pub random_offset: bool,
    /// Largest power one CBSD at full EIRP may deliver to another.
    pub cbsd_interference_limit_dbm: f64,
    #[serde(default)]
    pub radar_boresight: Boresight,
}

impl Default for DeploymentConfig {
    fn default() -> Self {
        Self {
            protection_distance_km: 30.0,
            max_distance_km: 100.0,
            region: DeploymentRegion::default(),
            site_spacing_km: Some(5.0),
            jitter_fraction: 0.25,
            random_offset: true,
            cbsd_interference_limit_dbm: -62.0,
            radar_boresight: Boresight::Centroid,
        }
    }
}

impl DeploymentConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.protection_distance_km >= 0.0, || {
            format!(
                "protection distance must be non-negative, got {} km",
                self.protection_distance_km
            )
        })?;
        ensure(self.max_distance_km > 0.0, || {
            "max distance must be positive".to_string()
        })?;
        ensure((0.0..0.5).contains(&self.jitter_fraction), || {
            format!(
                "jitter fraction must be in [0, 0.5), got {}",
                self.jitter_fraction
            )
        })?;
        let ext = self.region.angular_extent_deg;
        if !(ext > 0.0 && ext <= 360.0) {
            return Err(Error::InfeasibleGeometry(format!(
                "angular extent must be in (0, 360] degrees, got {ext}"
            )));
        }
        if let Some(s) = self.site_spacing_km {
            ensure(s > 0.0, || {
                format!("site spacing must be positive, got {s} km")
            })?;
        }
        Ok(())
    }
}

/// Everything needed to generate deployments.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub radar: RadarParams,
    pub cbsd: CbsdParams,
    pub propagation: PropagationModel,
    pub deployment: DeploymentConfig,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.radar.validate()?;
        self.cbsd.validate()?;
        self.deployment.validate()
    }

    pub fn with_protection_distance(&self, km: f64) -> Self {
        let mut c = self.clone();
        c.deployment.protection_distance_km = km;
        c
    }

    /// CBSD-to-CBSD median loss at a ground distance.
    pub fn cbsd_link_loss_db(&self, distance_km: f64) -> Result<f64> {
        let h = self.cbsd.height_m;
        self.propagation.median_loss_db(&PathlossInputs::new(
            self.radar.frequency_mhz,
            distance_km,
            h,
            h,
        ))
    }

    /// Radar-link median loss.
    pub fn radar_link_loss_db(&self, distance_km: f64, sea_path_fraction: f64) -> Result<f64> {
        let mut inputs = PathlossInputs::new(
            self.radar.frequency_mhz,
            distance_km,
            self.cbsd.height_m,
            self.radar.height_m,
        );
        inputs.sea_path_fraction = sea_path_fraction;
        self.propagation.median_loss_db(&inputs)
    }

    /// Smallest separation at which a full-power CBSD is received below the
    /// CBSD interference limit.
    pub fn min_site_distance_km(&self) -> Result<f64> {
        let limit = self.deployment.cbsd_interference_limit_dbm;
        let p = self.cbsd.max_power_dbm;
        let ok = |d: f64| -> Result<bool> { Ok(p - self.cbsd_link_loss_db(d)? < limit) };
        let (mut lo, mut hi) = (1e-4, 1e4);
        if ok(lo)? {
            return Ok(lo);
        }
        if !ok(hi)? {
            return Err(Error::InfeasibleGeometry(format!(
                "no separation up to {hi} km brings a {p} dBm CBSD below {limit} dBm"
            )));
        }
        while hi - lo > 1e-12 * hi {
            let mid = 0.5 * (lo + hi);
            if ok(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Lattice pitch and the separation floor it honours.
    pub fn layout(&self) -> Result<Layout> {
        self.validate()?;
        let min_site_distance_km = self.min_site_distance_km()?;
        // Two neighbours may each move jitter·pitch toward one another.
        let floor = min_site_distance_km / (1.0 - 2.0 * self.deployment.jitter_fraction);
        let pitch_km = self
            .deployment
            .site_spacing_km
            .map_or(floor, |s| s.max(floor));
        if Some(pitch_km) != self.deployment.site_spacing_km {
            log::debug!("lattice pitch raised to {pitch_km:.4} km by the CBSD separation floor");
        }
        Ok(Layout {
            min_site_distance_km,
            pitch_km,
        })
    }

    pub fn boresight_azimuth_deg(&self) -> f64 {
        match self.deployment.radar_boresight {
            Boresight::Fixed { azimuth_deg } => azimuth_deg,
            // The region is symmetric about its axis, so its centroid lies on it.
            Boresight::Centroid | Boresight::Random => self.deployment.region.axis_azimuth_deg,
        }
    }
}

/// Resolved lattice geometry for a scenario configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub min_site_distance_km: f64,
    pub pitch_km: f64,
}

impl Layout {
    /// Draws one deployment realization.
    pub fn realize<R: Rng>(&self, config: &ScenarioConfig, rng: &mut R) -> Result<Vec<Cbsd>> {
        let dep = &config.deployment;
        let (r_min, r_max) = (dep.protection_distance_km, dep.max_distance_km);
        if r_max <= r_min {
            log::warn!("deployment region lies inside the protection distance; no CBSDs placed");
            return Ok(Vec::new());
        }
        let p = self.pitch_km;
        let row = p * 3f64.sqrt() / 2.0;
        let (ou, ov) = if dep.random_offset {
            let (s, t): (f64, f64) = (rng.random(), rng.random());
            (s * p + t * p / 2.0, t * row)
        } else {
            (0.0, 0.0)
        };
        let jitter = dep.jitter_fraction * p;
        let reach = r_max + p + jitter;
        let rows = (reach / row).ceil() as i64 + 1;
        let axis = dep.region.axis_azimuth_deg.to_radians();
        let (sa, ca) = axis.sin_cos();

        let mut out = Vec::new();
        for j in -rows..=rows {
            let v0 = j as f64 * row + ov;
            if v0.abs() > reach {
                continue;
            }
            let shift = j as f64 * p / 2.0 + ou;
            let i_lo = ((-reach - shift) / p).floor() as i64;
            let i_hi = ((reach - shift) / p).ceil() as i64;
            for i in i_lo..=i_hi {
                let u0 = i as f64 * p + shift;
                let (du, dv) = if jitter > 0.0 {
                    let (a, b): (f64, f64) = (rng.random(), rng.random());
                    let rad = jitter * a.sqrt();
                    let ang = 2.0 * PI * b;
                    (rad * ang.cos(), rad * ang.sin())
                } else {
                    (0.0, 0.0)
                };
                let (u, v) = (u0 + du, v0 + dv);
                let dist = u.hypot(v);
                if dist < r_min || dist >= r_max || dist == 0.0 {
                    continue;
                }
                // u runs along the axis, v 90° clockwise from it.
                let east = u * sa + v * ca;
                let north = u * ca - v * sa;
                let az = east.atan2(north).to_degrees().rem_euclid(360.0);
                if !dep.region.contains(dist, az, u) {
                    continue;
                }
                let loss = config.radar_link_loss_db(dist, dep.region.sea_path_fraction(u))?;
                out.push(Cbsd {
                    id: out.len(),
                    x_m: east * 1e3,
                    y_m: north * 1e3,
                    distance_km: dist,
                    azimuth_deg: az,
                    power_dbm: config.cbsd.max_power_dbm,
                    path_loss_db: loss,
                });
            }
        }
        Ok(out)
    }
}

/// A range-interval group of CBSDs sharing one power (and, when density is
/// adjusted, one site density).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub index: usize,
    /// `[near, far)`, km.
    pub range_interval_km: (f64, f64),
    pub member_ids: Vec<usize>,
    /// Radar-link median loss at the interval midpoint.
    pub representative_loss_db: f64,
    #[serde(default)]
    pub density_per_km2: Option<f64>,
}

impl Sector {
    pub fn midpoint_km(&self) -> f64 {
        0.5 * (self.range_interval_km.0 + self.range_interval_km.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub layout: Layout,
    pub cbsds: Vec<Cbsd>,
    pub sectors: Vec<Sector>,
    pub rng_seed: u64,
}

impl Scenario {
    pub fn radar(&self) -> &RadarParams {
        &self.config.radar
    }

    pub fn cbsd_params(&self) -> &CbsdParams {
        &self.config.cbsd
    }

    pub fn protection_distance_km(&self) -> f64 {
        self.config.deployment.protection_distance_km
    }

    pub fn max_distance_km(&self) -> f64 {
        self.config.deployment.max_distance_km
    }

    pub fn region(&self) -> &DeploymentRegion {
        &self.config.deployment.region
    }

    pub fn boresight_azimuth_deg(&self) -> f64 {
        self.config.boresight_azimuth_deg()
    }

    /// Radar antenna gain toward each CBSD, dBi.
    pub fn radar_gains_dbi(&self) -> Vec<f64> {
        let bore = self.boresight_azimuth_deg();
        let ant = &self.config.radar.antenna;
        self.cbsds
            .iter()
            .map(|c| ant.gain_at(c.azimuth_deg - bore))
            .collect()
    }

    /// Builds a scenario around explicit CBSDs (their cached losses are
    /// recomputed from `config`).
    pub fn from_cbsds(config: ScenarioConfig, mut cbsds: Vec<Cbsd>) -> Result<Self> {
        let layout = config.layout()?;
        for (i, c) in cbsds.iter_mut().enumerate() {
            c.id = i;
            let along = c.distance_km
                * wrap_degrees(c.azimuth_deg - config.deployment.region.axis_azimuth_deg)
                    .to_radians()
                    .cos();
            c.path_loss_db = config.radar_link_loss_db(
                c.distance_km,
                config.deployment.region.sea_path_fraction(along),
            )?;
        }
        Ok(Self {
            config,
            layout,
            cbsds,
            sectors: Vec::new(),
            rng_seed: 0,
        })
    }
}

/// Places CBSDs for one realization drawn from `seed`.
pub fn generate_deployment(config: &ScenarioConfig, seed: u64) -> Result<Scenario> {
    let layout = config.layout()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cbsds = layout.realize(config, &mut rng)?;
    let clamped = cbsds.iter().filter(|c| c.distance_km < 1.0).count();
    if clamped > 0 {
        log::warn!("{clamped} CBSDs closer than 1 km use free-space loss");
    }
    Ok(Scenario {
        config: config.clone(),
        layout,
        cbsds,
        sectors: Vec::new(),
        rng_seed: seed,
    })
}

/// Splits `[R_min, R_max)` into `k` equal range intervals and assigns every
/// CBSD to one of them.
pub fn sectorize(scenario: &Scenario, k: usize) -> Result<Scenario> {
    ensure(k >= 1, || "sector count must be at least 1".to_string())?;
    let (near, far) = (
        scenario.protection_distance_km(),
        scenario.max_distance_km(),
    );
    ensure(far > near, || {
        format!("cannot sectorize an empty range [{near}, {far})")
    })?;
    let width = (far - near) / k as f64;
    let mut sectors = Vec::with_capacity(k);
    for index in 0..k {
        let lo = near + index as f64 * width;
        let hi = if index + 1 == k {
            far
        } else {
            near + (index + 1) as f64 * width
        };
        let mid = 0.5 * (lo + hi);
        sectors.push(Sector {
            index,
            range_interval_km: (lo, hi),
            member_ids: Vec::new(),
            representative_loss_db: scenario.config.radar_link_loss_db(mid, 0.0)?,
            density_per_km2: None,
        });
    }
    for c in &scenario.cbsds {
        let idx = (((c.distance_km - near) / width).floor().max(0.0) as usize).min(k - 1);
        sectors[idx].member_ids.push(c.id);
    }
    let mut out = scenario.clone();
    out.sectors = sectors;
    Ok(out)
}

/// Link budget at the cell edge: a user is served where the CBSD-to-user
/// loss does not exceed `power − edge_sensitivity`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageBudget {
    pub edge_sensitivity_dbm: f64,
    pub user_height_m: f64,
    pub frequency_mhz: f64,
    pub min_radius_km: f64,
    pub max_radius_km: f64,
}

impl CoverageBudget {
    /// CBSD-to-user median loss: the eHATA equation, continued below 1 km
    /// so the inversion stays strictly monotone.
    pub fn user_link_loss_db(&self, cbsd: &CbsdParams, distance_km: f64) -> Result<f64> {
        ExtendedHata::default().formula_loss_db(&PathlossInputs::new(
            self.frequency_mhz,
            distance_km,
            cbsd.height_m,
            self.user_height_m,
        ))
    }

    /// Budget whose radius at `power_dbm` is exactly `radius_km`.
    pub fn with_radius_at(
        cbsd: &CbsdParams,
        frequency_mhz: f64,
        user_height_m: f64,
        power_dbm: f64,
        radius_km: f64,
    ) -> Result<Self> {
        let mut b = CoverageBudget {
            edge_sensitivity_dbm: 0.0,
            user_height_m,
            frequency_mhz,
            min_radius_km: 1e-3,
            max_radius_km: 200.0,
        };
        b.edge_sensitivity_dbm = power_dbm - b.user_link_loss_db(cbsd, radius_km)?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.min_radius_km > 0.0 && self.max_radius_km > self.min_radius_km,
            || {
                format!(
                    "coverage radius bounds must satisfy 0 < min < max, got [{}, {}]",
                    self.min_radius_km, self.max_radius_km
                )
            },
        )?;
        ensure(self.user_height_m > 0.0 && self.frequency_mhz > 0.0, || {
            "coverage user height and frequency must be positive".to_string()
        })
    }
}

/// Distance at which a CBSD transmitting `power_dbm` meets the edge budget,
/// clamped to the budget's radius bounds.
pub fn coverage_radius(power_dbm: f64, cbsd: &CbsdParams, budget: &CoverageBudget) -> Result<f64> {
    budget.validate()?;
    let allowed = power_dbm - budget.edge_sensitivity_dbm;
    let loss = |d: f64| budget.user_link_loss_db(cbsd, d);
    if allowed <= loss(budget.min_radius_km)? {
        return Ok(budget.min_radius_km);
    }
    if allowed >= loss(budget.max_radius_km)? {
        return Ok(budget.max_radius_km);
    }
    let (mut lo, mut hi) = (budget.min_radius_km, budget.max_radius_km);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if loss(mid)? <= allowed {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Area of a regular hexagonal cell with circumradius `radius_km`.
pub fn hex_cell_area_km2(radius_km: f64) -> f64 {
    1.5 * 3f64.sqrt() * radius_km * radius_km
}

/// Sites per km² of a hexagonal layout whose cells have circumradius
/// `radius_km`; disks of that radius then cover the plane.
pub fn density_for_radius(radius_km: f64) -> Result<f64> {
    if radius_km <= 0.0 {
        return Err(invalid(format!(
            "cell radius must be positive, got {radius_km}"
        )));
    }
    Ok(1.0 / hex_cell_area_km2(radius_km))
}
