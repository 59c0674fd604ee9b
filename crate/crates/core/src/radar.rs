//! Radar constants, receiver noise, target echo power, the SINR threshold
//! implied by the INR protection criterion, and frequency-dependent
//! rejection for adjacent-channel interferers.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::antenna::RadarAntenna;
use crate::error::{ensure, Error, Result};
use crate::units::{db_to_linear, linear_to_db, watts_to_dbm, SPEED_OF_LIGHT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarParams {
    pub frequency_mhz: f64,
    pub wavelength_m: f64,
    pub tx_power_w: f64,
    pub antenna: RadarAntenna,
    pub height_m: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub rcs_m2: f64,
    pub inr_threshold_db: f64,
    pub temperature_k: f64,
    pub boltzmann: f64,
    /// Fixed maximum tolerable interference, replacing `P_N + INR_thr`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interference_threshold_override_dbm: Option<f64>,
}

impl Default for RadarParams {
    /// Shipborne S-band radar reference values.
    fn default() -> Self {
        Self {
            frequency_mhz: 3600.0,
            wavelength_m: 0.083,
            tx_power_w: 1.32e6,
            antenna: RadarAntenna::new(33.5, 0.81, 7.3).expect("valid reference antenna"),
            height_m: 8.0,
            bandwidth_hz: 10e6,
            noise_figure_db: 3.0,
            rcs_m2: 100.0,
            inr_threshold_db: -6.0,
            temperature_k: 290.0,
            boltzmann: 1.38e-23,
            interference_threshold_override_dbm: None,
        }
    }
}

impl RadarParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("frequency_mhz", self.frequency_mhz),
            ("wavelength_m", self.wavelength_m),
            ("tx_power_w", self.tx_power_w),
            ("height_m", self.height_m),
            ("bandwidth_hz", self.bandwidth_hz),
            ("rcs_m2", self.rcs_m2),
            ("temperature_k", self.temperature_k),
            ("boltzmann", self.boltzmann),
        ];
        for (name, v) in positive {
            ensure(v > 0.0 && v.is_finite(), || {
                format!("radar.{name} must be positive, got {v}")
            })?;
        }
        let nominal = SPEED_OF_LIGHT / (self.frequency_mhz * 1e6);
        ensure(
            (self.wavelength_m - nominal).abs() / nominal <= 0.01,
            || {
                format!(
                    "radar.wavelength_m = {} is not within 1% of c/f = {nominal:.5} m",
                    self.wavelength_m
                )
            },
        )
    }

    pub fn snr_db(&self, target_range_m: f64) -> Result<f64> {
        Ok(target_return_power_dbm(self, target_range_m)? - noise_power_dbm(self))
    }
}

/// `10·log10(kTB / 1 mW) + NF`.
pub fn noise_power_dbm(params: &RadarParams) -> f64 {
    watts_to_dbm(params.boltzmann * params.temperature_k * params.bandwidth_hz)
        + params.noise_figure_db
}

/// Median echo power from a target at `target_range_m`:
/// `P_S·G_T·Ω·λ² / ((4π)³·R⁴)`.
pub fn target_return_power_dbm(params: &RadarParams, target_range_m: f64) -> Result<f64> {
    ensure(target_range_m > 0.0 && target_range_m.is_finite(), || {
        format!("target range must be positive, got {target_range_m} m")
    })?;
    let gain = db_to_linear(params.antenna.peak_gain_dbi);
    let watts = params.tx_power_w * gain * params.rcs_m2 * params.wavelength_m.powi(2)
        / ((4.0 * PI).powi(3) * target_range_m.powi(4));
    Ok(watts_to_dbm(watts))
}

/// Minimum SINR the radar must achieve: the median echo over noise inflated
/// by the largest tolerable interference, `P_R / ((1 + 10^(INR/10))·P_N)`.
pub fn sinr_threshold_db(params: &RadarParams, target_range_m: f64) -> Result<f64> {
    let inflation = linear_to_db(1.0 + db_to_linear(params.inr_threshold_db));
    Ok(params.snr_db(target_range_m)? - inflation)
}

/// `I_th`: `P_N + INR_thr`, or the configured override.
pub fn max_tolerable_interference_dbm(params: &RadarParams) -> f64 {
    params
        .interference_threshold_override_dbm
        .unwrap_or_else(|| noise_power_dbm(params) + params.inr_threshold_db)
}

/// Rejection of an adjacent-channel interferer at one channel offset.
/// `rejection_db` is positive and attenuates interference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdrProfile {
    pub channel_offset_mhz: f64,
    pub rejection_db: f64,
}

impl FdrProfile {
    pub fn new(channel_offset_mhz: f64, rejection_db: f64) -> Result<Self> {
        ensure(rejection_db >= 0.0 && rejection_db.is_finite(), || {
            format!("FDR rejection must be a non-negative dB value, got {rejection_db}")
        })?;
        Ok(Self {
            channel_offset_mhz,
            rejection_db,
        })
    }

    /// The factor's exponent as it multiplies interference: `−rejection`.
    pub fn gain_db(&self) -> f64 {
        -self.rejection_db
    }
}

/// Offset → rejection table. There is no built-in default; adjacent-channel
/// runs must supply one.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FdrTable {
    pub entries: Vec<FdrProfile>,
}

impl FdrTable {
    pub fn new(mut entries: Vec<FdrProfile>) -> Result<Self> {
        for e in &entries {
            FdrProfile::new(e.channel_offset_mhz, e.rejection_db)?;
        }
        entries.sort_by(|a, b| a.channel_offset_mhz.total_cmp(&b.channel_offset_mhz));
        Ok(Self { entries })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rejection at `offset_mhz`, linearly interpolated in dB between table
    /// entries. Offsets outside the table are an error.
    pub fn lookup(&self, offset_mhz: f64) -> Result<FdrProfile> {
        let missing = || Error::MissingFdr { offset_mhz };
        let mut sorted = self.entries.clone();
        sorted.sort_by(|a, b| a.channel_offset_mhz.total_cmp(&b.channel_offset_mhz));
        if let Some(e) = sorted
            .iter()
            .find(|e| (e.channel_offset_mhz - offset_mhz).abs() < 1e-9)
        {
            return Ok(*e);
        }
        let hi = sorted
            .iter()
            .position(|e| e.channel_offset_mhz > offset_mhz)
            .ok_or_else(missing)?;
        if hi == 0 {
            return Err(missing());
        }
        let (a, b) = (sorted[hi - 1], sorted[hi]);
        let t = (offset_mhz - a.channel_offset_mhz) / (b.channel_offset_mhz - a.channel_offset_mhz);
        FdrProfile::new(
            offset_mhz,
            a.rejection_db + t * (b.rejection_db - a.rejection_db),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_power_reference() {
        let p = RadarParams::default();
        assert!((noise_power_dbm(&p) - -100.977_229_156_998).abs() < 1e-9);
    }

    #[test]
    fn thermal_floor_per_hertz() {
        let p = RadarParams {
            bandwidth_hz: 1.0,
            noise_figure_db: 0.0,
            ..Default::default()
        };
        assert!((noise_power_dbm(&p) - -173.977_229_156_998).abs() < 1e-9);
    }

    #[test]
    fn doubling_bandwidth_adds_3db() {
        let p = RadarParams::default();
        let q = RadarParams {
            bandwidth_hz: 2.0 * p.bandwidth_hz,
            ..p.clone()
        };
        assert!((noise_power_dbm(&q) - noise_power_dbm(&p) - 10.0 * 2f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn echo_power_reference_and_scaling() {
        let p = RadarParams::default();
        let at50 = target_return_power_dbm(&p, 50e3).unwrap();
        assert!((at50 - -97.847_794_934_524).abs() < 1e-9, "{at50}");
        let at100 = target_return_power_dbm(&p, 100e3).unwrap();
        assert!((at50 - at100 - 40.0 * 2f64.log10()).abs() < 1e-9);
        let big = RadarParams {
            rcs_m2: 200.0,
            ..p.clone()
        };
        let d = target_return_power_dbm(&big, 50e3).unwrap() - at50;
        assert!((d - 10.0 * 2f64.log10()).abs() < 1e-9);
        assert!(target_return_power_dbm(&p, 0.0).is_err());
    }

    #[test]
    fn sinr_threshold_reference() {
        let p = RadarParams::default();
        let thr = sinr_threshold_db(&p, 50e3).unwrap();
        assert!((thr - 2.156_206_285_387).abs() < 1e-9, "{thr}");
        let snr = p.snr_db(50e3).unwrap();
        assert!((snr - thr - 0.973_227_937_087).abs() < 1e-9);
        assert!(thr < snr);
    }

    #[test]
    fn threshold_approaches_snr_without_interference() {
        let p = RadarParams {
            inr_threshold_db: -200.0,
            ..Default::default()
        };
        let thr = sinr_threshold_db(&p, 30e3).unwrap();
        assert!((thr - p.snr_db(30e3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tolerable_interference() {
        let p = RadarParams::default();
        assert!((max_tolerable_interference_dbm(&p) - -106.977_229_156_998).abs() < 1e-9);
        let fixed = RadarParams {
            interference_threshold_override_dbm: Some(-117.0),
            ..p.clone()
        };
        assert_eq!(max_tolerable_interference_dbm(&fixed), -117.0);
        let zero = RadarParams {
            inr_threshold_db: 0.0,
            ..p.clone()
        };
        assert_eq!(max_tolerable_interference_dbm(&zero), noise_power_dbm(&p));
    }

    #[test]
    fn inr_compliance_equivalence() {
        // I ≤ I_th  ⇔  SINR ≥ SINR_thr at median echo and noise.
        let p = RadarParams::default();
        let range = 50e3;
        let s = target_return_power_dbm(&p, range).unwrap();
        let n = noise_power_dbm(&p);
        let thr = sinr_threshold_db(&p, range).unwrap();
        let ith = max_tolerable_interference_dbm(&p);
        for k in 0..400 {
            let i = -140.0 + 0.1 * k as f64;
            if (i - ith).abs() < 1e-9 {
                continue;
            }
            let sinr = s - linear_to_db(db_to_linear(n) + db_to_linear(i));
            assert_eq!(i <= ith, sinr >= thr, "I = {i}");
        }
    }

    #[test]
    fn validation() {
        assert!(RadarParams::default().validate().is_ok());
        let bad = RadarParams {
            wavelength_m: 0.1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = RadarParams {
            rcs_m2: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn fdr_lookup() {
        let t = FdrTable::new(vec![
            FdrProfile::new(20.0, 60.0).unwrap(),
            FdrProfile::new(10.0, 40.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(t.lookup(10.0).unwrap().rejection_db, 40.0);
        assert!((t.lookup(15.0).unwrap().rejection_db - 50.0).abs() < 1e-12);
        assert_eq!(t.lookup(5.0), Err(Error::MissingFdr { offset_mhz: 5.0 }));
        assert!(t.lookup(25.0).is_err());
        assert!(FdrTable::default().lookup(10.0).is_err());
        assert!(FdrProfile::new(10.0, -3.0).is_err());
        assert_eq!(FdrProfile::new(10.0, 3.0).unwrap().gain_db(), -3.0);
    }
}
