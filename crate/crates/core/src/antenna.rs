//! Radar azimuth pattern for a cosine aperture field distribution
//! (ITU-R M.1851 theoretical pattern), floored at the side-lobe level.
//!
//! For an aperture of length `l` the normalized field is
//!
//! ```text
//! F(u) = (π²/4) · cos(u) / ((π²/4) − u²),   u = π·(l/λ)·sin φ
//! ```
//!
//! which is 1 at boresight and has its first null at `u = 3π/2`. The ratio
//! `l/λ` is solved from the 3-dB beamwidth.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ensure, Result};
use crate::units::wrap_degrees;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AntennaPattern {
    #[default]
    M1851Cosine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AntennaSpec", into = "AntennaSpec")]
pub struct RadarAntenna {
    pub peak_gain_dbi: f64,
    pub beamwidth_3db_deg: f64,
    pub sidelobe_level_dbi: f64,
    pub pattern: AntennaPattern,
    aperture_wavelengths: f64,
}

/// Serialized form; `l/λ` is derived on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntennaSpec {
    peak_gain_dbi: f64,
    beamwidth_3db_deg: f64,
    sidelobe_level_dbi: f64,
    #[serde(default)]
    pattern: AntennaPattern,
}

impl TryFrom<AntennaSpec> for RadarAntenna {
    type Error = crate::Error;

    fn try_from(s: AntennaSpec) -> Result<Self> {
        RadarAntenna::new(s.peak_gain_dbi, s.beamwidth_3db_deg, s.sidelobe_level_dbi)
    }
}

impl From<RadarAntenna> for AntennaSpec {
    fn from(a: RadarAntenna) -> Self {
        AntennaSpec {
            peak_gain_dbi: a.peak_gain_dbi,
            beamwidth_3db_deg: a.beamwidth_3db_deg,
            sidelobe_level_dbi: a.sidelobe_level_dbi,
            pattern: a.pattern,
        }
    }
}

/// Normalized cosine-aperture field. The removable singularity at `u = π/2`
/// evaluates to `π/4`.
pub fn cosine_aperture_field(u: f64) -> f64 {
    let q = PI * PI / 4.0;
    let u = u.abs();
    let d = u - FRAC_PI_2;
    if d.abs() < 1e-7 {
        // F(π/2 + d) ≈ π/4 − d/4
        return PI / 4.0 - d / 4.0;
    }
    q * u.cos() / (q - u * u)
}

/// `u` at which the normalized field falls to −3 dB.
fn half_power_argument() -> f64 {
    let target = 10f64.powf(-3.0 / 20.0);
    let (mut lo, mut hi) = (0.0, 3.0 * FRAC_PI_2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cosine_aperture_field(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl RadarAntenna {
    pub fn new(
        peak_gain_dbi: f64,
        beamwidth_3db_deg: f64,
        sidelobe_level_dbi: f64,
    ) -> Result<Self> {
        ensure(beamwidth_3db_deg > 0.0 && beamwidth_3db_deg < 180.0, || {
            format!("3-dB beamwidth must be in (0, 180) degrees, got {beamwidth_3db_deg}")
        })?;
        ensure(peak_gain_dbi > sidelobe_level_dbi, || {
            format!(
                "peak gain ({peak_gain_dbi} dBi) must exceed side-lobe level ({sidelobe_level_dbi} dBi)"
            )
        })?;
        let half = (beamwidth_3db_deg / 2.0).to_radians();
        let aperture_wavelengths = half_power_argument() / (PI * half.sin());
        Ok(Self {
            peak_gain_dbi,
            beamwidth_3db_deg,
            sidelobe_level_dbi,
            pattern: AntennaPattern::M1851Cosine,
            aperture_wavelengths,
        })
    }

    /// Aperture length in wavelengths implied by the beamwidth.
    pub fn aperture_wavelengths(&self) -> f64 {
        self.aperture_wavelengths
    }

    /// Offset of the first null from boresight, degrees.
    pub fn first_null_deg(&self) -> f64 {
        (1.5 / self.aperture_wavelengths)
            .min(1.0)
            .asin()
            .to_degrees()
    }

    /// Gain toward an azimuth offset from boresight. Any angle is accepted
    /// and wrapped into `[-180, 180]`; the rear half-plane sits at the
    /// side-lobe floor.
    pub fn gain_at(&self, azimuth_offset_deg: f64) -> f64 {
        let phi = wrap_degrees(azimuth_offset_deg.abs()).abs();
        if phi >= 90.0 {
            return self.sidelobe_level_dbi;
        }
        let u = PI * self.aperture_wavelengths * phi.to_radians().sin();
        let field = cosine_aperture_field(u).abs();
        let g = if field > 0.0 {
            self.peak_gain_dbi + 20.0 * field.log10()
        } else {
            f64::NEG_INFINITY
        };
        g.clamp(self.sidelobe_level_dbi, self.peak_gain_dbi)
    }

    /// Linear gain.
    pub fn gain_linear_at(&self, azimuth_offset_deg: f64) -> f64 {
        crate::units::db_to_linear(self.gain_at(azimuth_offset_deg))
    }

    /// `∫ g(φ) dφ` in linear gain × radians over `[from, to]` degrees
    /// (offsets from boresight), by composite Simpson on a grid fine enough
    /// to resolve the main lobe.
    pub fn integrated_gain(&self, from_deg: f64, to_deg: f64) -> f64 {
        if to_deg <= from_deg {
            return 0.0;
        }
        let step = (self.beamwidth_3db_deg / 200.0).min(0.01);
        let mut n = ((to_deg - from_deg) / step).ceil() as usize;
        if n % 2 == 1 {
            n += 1;
        }
        let h = (to_deg - from_deg) / n as f64;
        let mut s = self.gain_linear_at(from_deg) + self.gain_linear_at(to_deg);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * self.gain_linear_at(from_deg + i as f64 * h);
        }
        s * h / 3.0 * PI / 180.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_antenna() -> RadarAntenna {
        RadarAntenna::new(33.5, 0.81, 7.3).unwrap()
    }

    #[test]
    fn boresight_and_half_power() {
        let a = table_antenna();
        assert_eq!(a.gain_at(0.0), 33.5);
        assert!((a.gain_at(0.405) - 30.5).abs() < 0.2);
        assert!((a.gain_at(-0.405) - 30.5).abs() < 0.2);
        assert_eq!(a.gain_at(90.0), 7.3);
    }

    #[test]
    fn aperture_close_to_closed_form_beamwidth() {
        // The cosine distribution has θ3 ≈ 68.8·λ/l degrees.
        let a = table_antenna();
        assert!((a.aperture_wavelengths() - 68.8 / 0.81).abs() / (68.8 / 0.81) < 0.02);
    }

    #[test]
    fn field_is_smooth_through_singularity() {
        let left = cosine_aperture_field(FRAC_PI_2 - 1e-5);
        let mid = cosine_aperture_field(FRAC_PI_2);
        let right = cosine_aperture_field(FRAC_PI_2 + 1e-5);
        assert!((left - mid).abs() < 1e-4 && (right - mid).abs() < 1e-4);
        assert!((mid - PI / 4.0).abs() < 1e-6);
        assert!(cosine_aperture_field(1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn first_sidelobe_above_floor() {
        // The cosine taper's first side lobe is about −23 dB.
        let a = table_antenna();
        let null = a.first_null_deg();
        let peak = (0..400)
            .map(|i| a.gain_at(null + i as f64 * 0.002))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((peak - (33.5 - 23.0)).abs() < 0.5, "{peak}");
    }

    #[test]
    fn main_lobe_monotone() {
        let a = table_antenna();
        let null = a.first_null_deg();
        let mut prev = a.gain_at(0.0);
        for i in 1..=1000 {
            let g = a.gain_at(null * i as f64 / 1000.0);
            assert!(g <= prev + 1e-12);
            prev = g;
        }
    }

    #[test]
    fn rejects_bad_descriptor() {
        assert!(RadarAntenna::new(5.0, 0.81, 7.3).is_err());
        assert!(RadarAntenna::new(33.5, 0.0, 7.3).is_err());
    }

    #[test]
    fn integrated_gain_of_isotropic_floor() {
        let a = table_antenna();
        // Far from boresight only the floor remains.
        let v = a.integrated_gain(10.0, 40.0);
        let floor = 10f64.powf(0.73) * 30f64.to_radians();
        assert!((v - floor).abs() / floor < 1e-9);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn symmetric_and_bounded(phi in -720.0f64..720.0) {
                let a = table_antenna();
                let g = a.gain_at(phi);
                prop_assert_eq!(g, a.gain_at(-phi));
                prop_assert!((7.3..=33.5).contains(&g));
                prop_assert!(g <= a.gain_at(0.0));
            }
        }
    }
}
