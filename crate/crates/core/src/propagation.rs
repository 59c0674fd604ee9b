//! Median transmission loss between a CBSD and the radar, plus large-scale
//! log-normal shadowing.
//!
//! The median loss follows the NTIA extended Hata (eHATA) point-to-point
//! formulation: Okumura's attenuation relative to free space, extrapolated in
//! frequency at the 1 km and 100 km reference distances, joined by a
//! two-slope power law with a height-dependent breakpoint, then corrected for
//! base-station and receiver height and added to free-space loss over the
//! slant path. All logarithms are base 10.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, invalid, Result};
use crate::units::SPEED_OF_LIGHT;

/// Below this link distance eHATA is undefined and the free-space loss is
/// used instead.
pub const EHATA_MIN_DISTANCE_KM: f64 = 1.0;

/// Okumura reference mobile height, m.
const REFERENCE_MOBILE_HEIGHT_M: f64 = 3.0;

/// Okumura reference base-station height, m.
const REFERENCE_BASE_HEIGHT_M: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Environment {
    #[default]
    OutdoorUrban,
}

/// Geometry and carrier of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathlossInputs {
    pub frequency_mhz: f64,
    /// Ground distance between the two antennas.
    pub distance_km: f64,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    pub environment: Environment,
    /// Share of the path over water, in `[0, 1]`.
    pub sea_path_fraction: f64,
}

impl PathlossInputs {
    pub fn new(frequency_mhz: f64, distance_km: f64, tx_height_m: f64, rx_height_m: f64) -> Self {
        Self {
            frequency_mhz,
            distance_km,
            tx_height_m,
            rx_height_m,
            environment: Environment::OutdoorUrban,
            sea_path_fraction: 0.0,
        }
    }

    pub fn with_distance(mut self, distance_km: f64) -> Self {
        self.distance_km = distance_km;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.frequency_mhz > 0.0 && self.frequency_mhz.is_finite(),
            || format!("frequency must be positive, got {} MHz", self.frequency_mhz),
        )?;
        ensure(
            self.distance_km > 0.0 && self.distance_km.is_finite(),
            || format!("distance must be positive, got {} km", self.distance_km),
        )?;
        ensure(self.tx_height_m > 0.0 && self.rx_height_m > 0.0, || {
            format!(
                "antenna heights must be positive, got tx {} m, rx {} m",
                self.tx_height_m, self.rx_height_m
            )
        })?;
        ensure((0.0..=1.0).contains(&self.sea_path_fraction), || {
            format!(
                "sea path fraction must be in [0, 1], got {}",
                self.sea_path_fraction
            )
        })
    }

    /// Straight-line distance between the antennas, m.
    pub fn slant_distance_m(&self) -> f64 {
        let ground = self.distance_km * 1e3;
        let dh = self.tx_height_m - self.rx_height_m;
        (ground * ground + dh * dh).sqrt()
    }
}

/// `20·log10(4πR/λ)` with `λ = c/f`.
pub fn free_space_loss(frequency_mhz: f64, slant_distance_m: f64) -> Result<f64> {
    ensure(frequency_mhz > 0.0, || {
        format!("frequency must be positive, got {frequency_mhz} MHz")
    })?;
    ensure(slant_distance_m > 0.0, || {
        format!("distance must be positive, got {slant_distance_m} m")
    })?;
    let wavelength_m = SPEED_OF_LIGHT / (frequency_mhz * 1e6);
    Ok(20.0 * (4.0 * std::f64::consts::PI * slant_distance_m / wavelength_m).log10())
}

/// Hata medium-city mobile-height correction, with the eHATA extension of
/// `20·log10(h/10)` above 10 m.
pub fn mobile_height_correction(frequency_mhz: f64, height_m: f64) -> f64 {
    let lf = frequency_mhz.log10();
    let h = height_m.min(10.0);
    let tall = if height_m > 10.0 {
        20.0 * (height_m / 10.0).log10()
    } else {
        0.0
    };
    (1.1 * lf - 0.7) * h - (1.56 * lf - 0.8) + tall
}

/// Terms of the eHATA two-slope law for one frequency and base height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EhataTerms {
    /// Attenuation relative to free space at 1 km, 200 m base, dB.
    pub abm_1km_db: f64,
    /// Attenuation relative to free space at 100 km, 200 m base, dB.
    pub abm_100km_db: f64,
    /// Lower-range power-law exponent.
    pub n_low: f64,
    /// Upper-range power-law exponent.
    pub n_high: f64,
    /// Breakpoint distance, km. Infinite when the upper exponent does not
    /// exceed the lower one.
    pub breakpoint_km: f64,
}

impl EhataTerms {
    pub fn new(frequency_mhz: f64, base_height_m: f64) -> Self {
        let lf = frequency_mhz.log10();
        let lh = base_height_m.log10();
        let abm_1km_db = 30.52 - 16.81 * lf + 4.45 * lf * lf;
        let abm_100km_db = 120.78 - 52.71 * lf + 10.06 * lf * lf;
        let n_low = 0.1 * (24.9 - 6.55 * lh);
        let n_high = 2.0 * (3.27 * lh - 0.67 * lh * lh - 1.75);
        // Continuity of abm_1·r^nl and abm_100·(r/100)^nh in linear units.
        let breakpoint_km = if n_high > n_low {
            let log_bp = (2.0 * n_high + (abm_1km_db - abm_100km_db) / 10.0) / (n_high - n_low);
            10f64.powf(log_bp)
        } else {
            f64::INFINITY
        };
        Self {
            abm_1km_db,
            abm_100km_db,
            n_low,
            n_high,
            breakpoint_km,
        }
    }

    /// Median attenuation relative to free space at `distance_km`, before
    /// height corrections.
    pub fn attenuation_db(&self, distance_km: f64) -> f64 {
        let lr = distance_km.log10();
        if distance_km <= self.breakpoint_km {
            self.abm_1km_db + 10.0 * self.n_low * lr
        } else {
            let lbp = self.breakpoint_km.log10();
            self.abm_1km_db + 10.0 * self.n_low * lbp + 10.0 * self.n_high * (lr - lbp)
        }
    }
}

/// Extended Hata point-to-point median loss model.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExtendedHata {
    /// Added per km of over-water path; negative values reduce the loss.
    #[serde(default)]
    pub sea_path_adjustment_db_per_km: f64,
}

impl ExtendedHata {
    /// The eHATA equation evaluated at any positive distance. Callers that
    /// need the 1 km validity floor use [`ehata_median_loss`] or the
    /// [`PathlossModel`] impl.
    pub fn formula_loss_db(&self, inputs: &PathlossInputs) -> Result<f64> {
        inputs.validate()?;
        let f = inputs.frequency_mhz;
        let terms = EhataTerms::new(f, inputs.tx_height_m);
        let height_gain = 13.82 * (REFERENCE_BASE_HEIGHT_M / inputs.tx_height_m).log10();
        let rx_correction = mobile_height_correction(f, REFERENCE_MOBILE_HEIGHT_M)
            - mobile_height_correction(f, inputs.rx_height_m);
        let fsl = free_space_loss(f, inputs.slant_distance_m())?;
        let sea =
            self.sea_path_adjustment_db_per_km * inputs.sea_path_fraction * inputs.distance_km;
        Ok(terms.attenuation_db(inputs.distance_km) + height_gain + rx_correction + fsl + sea)
    }
}

/// Median eHATA loss, defined for links of at least 1 km.
pub fn ehata_median_loss(inputs: &PathlossInputs) -> Result<f64> {
    if inputs.distance_km < EHATA_MIN_DISTANCE_KM {
        return Err(invalid(format!(
            "eHATA requires a distance of at least {EHATA_MIN_DISTANCE_KM} km, got {} km",
            inputs.distance_km
        )));
    }
    ExtendedHata::default().formula_loss_db(inputs)
}

/// Okumura-Hata urban loss; kept as a swap-in for tests and comparisons.
pub fn hata_urban_loss(inputs: &PathlossInputs) -> Result<f64> {
    inputs.validate()?;
    let lf = inputs.frequency_mhz.log10();
    let lh = inputs.tx_height_m.log10();
    let a_hm = (1.1 * lf - 0.7) * inputs.rx_height_m - (1.56 * lf - 0.8);
    Ok(69.55 + 26.16 * lf - 13.82 * lh - a_hm + (44.9 - 6.55 * lh) * inputs.distance_km.log10())
}

/// A median loss value and whether the model fell back to free space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianLoss {
    pub db: f64,
    pub clamped_to_free_space: bool,
}

pub trait PathlossModel {
    fn median_loss(&self, inputs: &PathlossInputs) -> Result<MedianLoss>;

    fn median_loss_db(&self, inputs: &PathlossInputs) -> Result<f64> {
        self.median_loss(inputs).map(|l| l.db)
    }
}

/// Selectable propagation models. The Hata family clamps to free-space loss
/// below 1 km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum PropagationModel {
    ExtendedHata(ExtendedHata),
    Hata,
    FreeSpace,
}

impl Default for PropagationModel {
    fn default() -> Self {
        PropagationModel::ExtendedHata(ExtendedHata::default())
    }
}

impl PathlossModel for PropagationModel {
    fn median_loss(&self, inputs: &PathlossInputs) -> Result<MedianLoss> {
        inputs.validate()?;
        let below_floor = inputs.distance_km < EHATA_MIN_DISTANCE_KM;
        let db = match self {
            PropagationModel::FreeSpace => {
                free_space_loss(inputs.frequency_mhz, inputs.slant_distance_m())?
            }
            _ if below_floor => {
                log::trace!(
                    "{:.3} km link below the eHATA floor; using free-space loss",
                    inputs.distance_km
                );
                free_space_loss(inputs.frequency_mhz, inputs.slant_distance_m())?
            }
            PropagationModel::ExtendedHata(m) => m.formula_loss_db(inputs)?,
            PropagationModel::Hata => hata_urban_loss(inputs)?,
        };
        Ok(MedianLoss {
            db,
            clamped_to_free_space: below_floor && !matches!(self, PropagationModel::FreeSpace),
        })
    }
}

/// Log-normal shadowing: Normal(0, σ²) in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingModel {
    pub sigma_db: f64,
    #[serde(default)]
    pub seed: u64,
}

impl FadingModel {
    pub fn new(sigma_db: f64, seed: u64) -> Result<Self> {
        ensure(sigma_db >= 0.0 && sigma_db.is_finite(), || {
            format!("fading sigma must be non-negative, got {sigma_db} dB")
        })?;
        Ok(Self { sigma_db, seed })
    }

    /// An endless stream of shadowing draws that owns its RNG.
    pub fn sampler(&self) -> Result<ShadowingSampler> {
        ShadowingSampler::new(self.sigma_db, ChaCha8Rng::seed_from_u64(self.seed))
    }
}

/// Draws i.i.d. shadowing values from a caller-owned RNG.
#[derive(Debug, Clone)]
pub struct ShadowingSampler<R = ChaCha8Rng> {
    normal: Option<Normal<f64>>,
    rng: R,
}

impl<R: rand::Rng> ShadowingSampler<R> {
    pub fn new(sigma_db: f64, rng: R) -> Result<Self> {
        ensure(sigma_db >= 0.0 && sigma_db.is_finite(), || {
            format!("fading sigma must be non-negative, got {sigma_db} dB")
        })?;
        let normal = if sigma_db > 0.0 {
            Some(Normal::new(0.0, sigma_db).map_err(|e| invalid(e.to_string()))?)
        } else {
            None
        };
        Ok(Self { normal, rng })
    }

    #[inline]
    pub fn draw(&mut self) -> f64 {
        match &self.normal {
            Some(n) => n.sample(&mut self.rng),
            None => 0.0,
        }
    }

    pub fn into_rng(self) -> R {
        self.rng
    }
}

impl<R: rand::Rng> Iterator for ShadowingSampler<R> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.draw())
    }
}

/// `n` shadowing draws in dB. The same model (and seed) always yields the
/// same sequence.
pub fn sample_shadowing(model: &FadingModel, n: usize) -> Result<Vec<f64>> {
    ensure(n >= 1, || "sample count must be at least 1".to_string())?;
    Ok(model.sampler()?.take(n).collect())
}
