//! Aggregate CBSD interference at the radar and the resulting SINR
//! distribution, both analytic (log-normal sum approximation) and by Monte
//! Carlo simulation.
//!
//! Interference from CBSD `m` is `10^((P_m + g(φ_m) − ρ(r_m) + F_m − X)/10)`
//! mW, where `X` is the receiver rejection (0 dB co-channel). The echo is
//! the median radar-equation return times its own shadowing `F_R`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use std::f64::consts::SQRT_2;

use crate::error::{ensure, Result};
use crate::propagation::ShadowingSampler;
use crate::radar::{
    max_tolerable_interference_dbm, noise_power_dbm, sinr_threshold_db, target_return_power_dbm,
    FdrProfile, FdrTable,
};
use crate::scenario::{generate_deployment, Boresight, Cbsd, Scenario, ScenarioConfig};
use crate::units::{db_sum, db_to_linear, linear_to_db};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelMode {
    #[default]
    CoChannel,
    Adjacent(FdrProfile),
}

impl ChannelMode {
    /// Adjacent-channel mode at `offset_mhz`, looked up in `table`.
    pub fn adjacent(table: &FdrTable, offset_mhz: f64) -> Result<Self> {
        Ok(Self::Adjacent(table.lookup(offset_mhz)?))
    }

    pub fn rejection_db(&self) -> f64 {
        match self {
            Self::CoChannel => 0.0,
            Self::Adjacent(p) => p.rejection_db,
        }
    }
}

/// Median (unfaded) interference terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceBudget {
    pub per_cbsd_median_dbm: Vec<f64>,
    pub aggregate_median_dbm: f64,
}

impl InterferenceBudget {
    pub fn new(scenario: &Scenario, mode: ChannelMode) -> Self {
        let per = median_terms_dbm(
            &scenario.cbsds,
            scenario,
            scenario.boresight_azimuth_deg(),
            mode,
        );
        let aggregate_median_dbm = db_sum(per.iter().copied());
        Self {
            per_cbsd_median_dbm: per,
            aggregate_median_dbm,
        }
    }
}

fn median_terms_dbm(
    cbsds: &[Cbsd],
    scenario: &Scenario,
    boresight_deg: f64,
    mode: ChannelMode,
) -> Vec<f64> {
    terms_for(cbsds, &scenario.config, boresight_deg, mode)
}

fn terms_for(
    cbsds: &[Cbsd],
    config: &ScenarioConfig,
    boresight_deg: f64,
    mode: ChannelMode,
) -> Vec<f64> {
    let ant = &config.radar.antenna;
    let x = mode.rejection_db();
    cbsds
        .iter()
        .map(|c| c.power_dbm + ant.gain_at(c.azimuth_deg - boresight_deg) - c.path_loss_db - x)
        .collect()
}

/// Aggregate interference in dBm for one shadowing draw per CBSD.
/// An empty `fading_db` means median conditions. No CBSDs gives `-inf`.
pub fn aggregate_interference_dbm(
    scenario: &Scenario,
    fading_db: &[f64],
    mode: ChannelMode,
) -> Result<f64> {
    ensure(
        fading_db.is_empty() || fading_db.len() == scenario.cbsds.len(),
        || {
            format!(
                "{} fading draws for {} CBSDs",
                fading_db.len(),
                scenario.cbsds.len()
            )
        },
    )?;
    let terms = median_terms_dbm(
        &scenario.cbsds,
        scenario,
        scenario.boresight_azimuth_deg(),
        mode,
    );
    let faded = terms
        .iter()
        .enumerate()
        .map(|(i, t)| t + fading_db.get(i).copied().unwrap_or(0.0));
    Ok(db_sum(faded))
}

/// SINR evaluation grid in dB, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SinrGrid {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl Default for SinrGrid {
    fn default() -> Self {
        Self {
            start_db: -20.0,
            stop_db: 60.0,
            step_db: 0.1,
        }
    }
}

impl SinrGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        ensure(self.step_db > 0.0 && self.stop_db >= self.start_db, || {
            format!("invalid SINR grid {:?}", self)
        })?;
        let n = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize;
        Ok((0..=n)
            .map(|i| self.start_db + i as f64 * self.step_db)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CdfSource {
    Analytic,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinrDistribution {
    pub thresholds_db: Vec<f64>,
    /// `P[SINR < T]` at each threshold.
    pub cdf_values: Vec<f64>,
    /// `P[I_agg ≤ I_th]`.
    pub compliance_probability: f64,
    pub sinr_threshold_db: f64,
    pub source: CdfSource,
    /// Zero for analytic distributions.
    pub trials: usize,
}

impl SinrDistribution {
    /// `P[SINR < t]` by linear interpolation on the grid.
    pub fn cdf_at(&self, t: f64) -> f64 {
        let x = &self.thresholds_db;
        let i = x.partition_point(|&v| v <= t);
        if i == 0 {
            return self.cdf_values[0];
        }
        if i == x.len() {
            return self.cdf_values[x.len() - 1];
        }
        let f = (t - x[i - 1]) / (x[i] - x[i - 1]);
        self.cdf_values[i - 1] + f * (self.cdf_values[i] - self.cdf_values[i - 1])
    }

    pub fn max_abs_deviation(&self, other: &SinrDistribution) -> f64 {
        self.cdf_values
            .iter()
            .zip(&other.cdf_values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// SINR distribution from the log-normal sum approximation.
///
/// With `w_m = 10^((t_m − t_s)/10)`, `Λ = Σ w_m + P_N/P_R` and
/// `λ_m = w_m/Λ`, the SINR in dB is approximated as normal with median
/// `−10·log10 Λ` and deviation `σ̄ = σ·sqrt(1 + Σ λ_m²)`.
pub fn analytic_sinr_cdf(
    scenario: &Scenario,
    target_range_m: f64,
    sigma_db: f64,
    grid: &SinrGrid,
    mode: ChannelMode,
) -> Result<SinrDistribution> {
    ensure(sigma_db >= 0.0, || {
        format!("fading sigma must be non-negative, got {sigma_db}")
    })?;
    let radar = &scenario.config.radar;
    let ts = target_return_power_dbm(radar, target_range_m)?;
    let pn = noise_power_dbm(radar);
    let budget = InterferenceBudget::new(scenario, mode);
    let w: Vec<f64> = budget
        .per_cbsd_median_dbm
        .iter()
        .map(|t| db_to_linear(t - ts))
        .collect();
    let lambda_total = w.iter().sum::<f64>() + db_to_linear(pn - ts);
    let sum_l2: f64 = w.iter().map(|wm| (wm / lambda_total).powi(2)).sum();
    let sigma_bar = sigma_db * (1.0 + sum_l2).sqrt();
    let median = -linear_to_db(lambda_total);

    let thresholds_db = grid.points()?;
    let cdf_values = thresholds_db
        .iter()
        .map(|&t| {
            if sigma_bar > 0.0 {
                std_normal_cdf((t - median) / sigma_bar)
            } else if median < t {
                1.0
            } else {
                0.0
            }
        })
        .collect();

    // Interference alone: same weighting restricted to the CBSD terms.
    let i_th = max_tolerable_interference_dbm(radar);
    let i_med = budget.aggregate_median_dbm;
    let compliance_probability = if w.is_empty() {
        1.0
    } else {
        let wt: f64 = w.iter().sum();
        let s_i = sigma_db * w.iter().map(|wm| (wm / wt).powi(2)).sum::<f64>().sqrt();
        if s_i > 0.0 {
            std_normal_cdf((i_th - i_med) / s_i)
        } else if i_med <= i_th {
            1.0
        } else {
            0.0
        }
    };

    Ok(SinrDistribution {
        thresholds_db,
        cdf_values,
        compliance_probability,
        sinr_threshold_db: sinr_threshold_db(radar, target_range_m)?,
        source: CdfSource::Analytic,
        trials: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloOptions {
    pub trials: usize,
    pub seed: u64,
    pub sigma_db: f64,
    /// Redraw the deployment (lattice offset and jitter) every trial.
    pub redeploy: bool,
    pub grid: SinrGrid,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        Self {
            trials: 10_000,
            seed: 1,
            sigma_db: 8.0,
            redeploy: true,
            grid: SinrGrid::default(),
        }
    }
}

/// One trial's outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub sinr_db: f64,
    pub interference_dbm: f64,
}

/// RNG for trial `index`: its own ChaCha stream under the master seed, so
/// results do not depend on scheduling.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs the trials and returns each outcome in trial order.
pub fn monte_carlo_trials(
    scenario: &Scenario,
    target_range_m: f64,
    opts: &MonteCarloOptions,
    mode: ChannelMode,
) -> Result<Vec<TrialOutcome>> {
    ensure(opts.trials >= 1, || "trials must be at least 1".to_string())?;
    ensure(opts.sigma_db >= 0.0, || {
        format!("fading sigma must be non-negative, got {}", opts.sigma_db)
    })?;
    let config = &scenario.config;
    let ts = target_return_power_dbm(&config.radar, target_range_m)?;
    let pn_lin = db_to_linear(noise_power_dbm(&config.radar));
    let random_bore = config.deployment.radar_boresight == Boresight::Random;
    let fixed_bore = scenario.boresight_azimuth_deg();
    let fixed_terms = terms_for(&scenario.cbsds, config, fixed_bore, mode);

    (0..opts.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(opts.seed, t);
            let cbsds;
            let owned;
            let (sites, terms): (&[Cbsd], &[f64]) = if opts.redeploy {
                cbsds = scenario.layout.realize(config, &mut rng)?;
                let bore = if random_bore {
                    rng.random::<f64>() * 360.0
                } else {
                    fixed_bore
                };
                owned = terms_for(&cbsds, config, bore, mode);
                (&cbsds, &owned)
            } else if random_bore {
                let bore = rng.random::<f64>() * 360.0;
                owned = terms_for(&scenario.cbsds, config, bore, mode);
                (&scenario.cbsds, &owned)
            } else {
                (&scenario.cbsds, &fixed_terms)
            };
            debug_assert_eq!(sites.len(), terms.len());
            let mut fade = ShadowingSampler::new(opts.sigma_db, rng)?;
            let i_lin: f64 = terms.iter().map(|m| db_to_linear(m + fade.draw())).sum();
            let echo = ts + fade.draw();
            Ok(TrialOutcome {
                sinr_db: echo - linear_to_db(pn_lin + i_lin),
                interference_dbm: linear_to_db(i_lin),
            })
        })
        .collect()
}

/// Empirical SINR distribution over Monte Carlo trials.
pub fn monte_carlo_sinr_cdf(
    scenario: &Scenario,
    target_range_m: f64,
    opts: &MonteCarloOptions,
    mode: ChannelMode,
) -> Result<SinrDistribution> {
    let outcomes = monte_carlo_trials(scenario, target_range_m, opts, mode)?;
    let radar = &scenario.config.radar;
    let i_th = max_tolerable_interference_dbm(radar);
    let n = outcomes.len() as f64;
    let compliant = outcomes
        .iter()
        .filter(|o| o.interference_dbm <= i_th)
        .count();
    let mut sinr: Vec<f64> = outcomes.iter().map(|o| o.sinr_db).collect();
    sinr.sort_by(f64::total_cmp);
    let thresholds_db = opts.grid.points()?;
    let cdf_values = thresholds_db
        .iter()
        .map(|&t| sinr.partition_point(|&s| s < t) as f64 / n)
        .collect();
    Ok(SinrDistribution {
        thresholds_db,
        cdf_values,
        compliance_probability: compliant as f64 / n,
        sinr_threshold_db: sinr_threshold_db(radar, target_range_m)?,
        source: CdfSource::MonteCarlo,
        trials: outcomes.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r_min_km: f64,
    pub compliance_probability: f64,
    pub trials: usize,
    pub seed: u64,
    /// CBSDs in the seed deployment.
    pub cbsd_count: usize,
}

/// Monte Carlo compliance at each protection distance. Every point uses the
/// same master seed.
pub fn protection_distance_sweep(
    config: &ScenarioConfig,
    r_min_km: &[f64],
    target_range_m: f64,
    opts: &MonteCarloOptions,
    mode: ChannelMode,
) -> Result<Vec<SweepRow>> {
    ensure(!r_min_km.is_empty(), || {
        "protection distance list is empty".to_string()
    })?;
    let mut rows = Vec::with_capacity(r_min_km.len());
    for &r in r_min_km {
        let scenario = generate_deployment(&config.with_protection_distance(r), opts.seed)?;
        let dist = monte_carlo_sinr_cdf(&scenario, target_range_m, opts, mode)?;
        rows.push(SweepRow {
            r_min_km: r,
            compliance_probability: dist.compliance_probability,
            trials: dist.trials,
            seed: opts.seed,
            cbsd_count: scenario.cbsds.len(),
        });
    }
    for w in rows.windows(2) {
        if w[1].r_min_km > w[0].r_min_km
            && w[1].compliance_probability < w[0].compliance_probability
        {
            log::warn!(
                "compliance fell from {:.4} at {} km to {:.4} at {} km",
                w[0].compliance_probability,
                w[0].r_min_km,
                w[1].compliance_probability,
                w[1].r_min_km
            );
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioConfig;

    fn site(distance_km: f64, azimuth_deg: f64, power_dbm: f64) -> Cbsd {
        let a = azimuth_deg.to_radians();
        Cbsd {
            id: 0,
            x_m: distance_km * 1e3 * a.sin(),
            y_m: distance_km * 1e3 * a.cos(),
            distance_km,
            azimuth_deg,
            power_dbm,
            path_loss_db: 0.0,
        }
    }

    fn fixed(sites: Vec<Cbsd>) -> Scenario {
        Scenario::from_cbsds(ScenarioConfig::default(), sites).unwrap()
    }

    fn ring(m: usize, r_km: f64) -> Scenario {
        fixed(
            (0..m)
                .map(|i| {
                    site(
                        r_km + i as f64 * 2.0,
                        -40.0 + 80.0 * i as f64 / m.max(2) as f64,
                        30.0,
                    )
                })
                .collect(),
        )
    }

    fn fixed_opts(trials: usize, sigma_db: f64) -> MonteCarloOptions {
        MonteCarloOptions {
            trials,
            seed: 99,
            sigma_db,
            redeploy: false,
            grid: SinrGrid::default(),
        }
    }

    #[test]
    fn empty_sum_is_negative_infinity() {
        let s = fixed(Vec::new());
        assert_eq!(
            aggregate_interference_dbm(&s, &[], ChannelMode::CoChannel).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn single_term() {
        let s = fixed(vec![site(40.0, 3.0, 25.0)]);
        let c = &s.cbsds[0];
        let expect = 25.0 + s.config.radar.antenna.gain_at(3.0) - c.path_loss_db;
        let got = aggregate_interference_dbm(&s, &[], ChannelMode::CoChannel).unwrap();
        assert!((got - expect).abs() < 1e-12);
        let faded = aggregate_interference_dbm(&s, &[2.5], ChannelMode::CoChannel).unwrap();
        assert!((faded - expect - 2.5).abs() < 1e-12);
        assert!(aggregate_interference_dbm(&s, &[1.0, 2.0], ChannelMode::CoChannel).is_err());
    }

    #[test]
    fn zero_rejection_equals_cochannel() {
        let s = ring(7, 30.0);
        let a = aggregate_interference_dbm(&s, &[], ChannelMode::CoChannel).unwrap();
        let b = aggregate_interference_dbm(
            &s,
            &[],
            ChannelMode::Adjacent(FdrProfile::new(10.0, 0.0).unwrap()),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn doubling_power_adds_3db() {
        let s = ring(9, 30.0);
        let mut d = s.clone();
        for c in &mut d.cbsds {
            c.power_dbm += linear_to_db(2.0);
        }
        let a = InterferenceBudget::new(&s, ChannelMode::CoChannel).aggregate_median_dbm;
        let b = InterferenceBudget::new(&d, ChannelMode::CoChannel).aggregate_median_dbm;
        assert!((b - a - linear_to_db(2.0)).abs() < 1e-9);
    }

    #[test]
    fn budget_sum_matches_terms() {
        let s = ring(12, 20.0);
        let b = InterferenceBudget::new(&s, ChannelMode::CoChannel);
        let lin: f64 = b.per_cbsd_median_dbm.iter().map(|t| db_to_linear(*t)).sum();
        assert!((linear_to_db(lin) - b.aggregate_median_dbm).abs() < 1e-9);
    }

    #[test]
    fn analytic_step_without_interference_or_fading() {
        let s = fixed(Vec::new());
        let d =
            analytic_sinr_cdf(&s, 50e3, 0.0, &SinrGrid::default(), ChannelMode::CoChannel).unwrap();
        let snr = s.config.radar.snr_db(50e3).unwrap();
        for (t, c) in d.thresholds_db.iter().zip(&d.cdf_values) {
            assert_eq!(*c, if *t > snr { 1.0 } else { 0.0 }, "T = {t}");
        }
        assert_eq!(d.compliance_probability, 1.0);
    }

    #[test]
    fn analytic_symmetric_at_balanced_interferer() {
        // One interferer with median equal to the echo and negligible noise.
        let mut s = fixed(vec![site(40.0, 0.0, 30.0)]);
        s.config.radar.noise_figure_db = -200.0;
        let ts = target_return_power_dbm(&s.config.radar, 50e3).unwrap();
        let t1 = InterferenceBudget::new(&s, ChannelMode::CoChannel).aggregate_median_dbm;
        s.cbsds[0].power_dbm += ts - t1;
        let d =
            analytic_sinr_cdf(&s, 50e3, 8.0, &SinrGrid::default(), ChannelMode::CoChannel).unwrap();
        assert!((d.cdf_at(0.0) - 0.5).abs() < 1e-9, "{}", d.cdf_at(0.0));
    }

    #[test]
    fn monte_carlo_degenerate_step() {
        let s = ring(5, 30.0);
        let d =
            monte_carlo_sinr_cdf(&s, 50e3, &fixed_opts(1, 0.0), ChannelMode::CoChannel).unwrap();
        let i = InterferenceBudget::new(&s, ChannelMode::CoChannel).aggregate_median_dbm;
        let r = &s.config.radar;
        let sinr = target_return_power_dbm(r, 50e3).unwrap()
            - linear_to_db(db_to_linear(noise_power_dbm(r)) + db_to_linear(i));
        for (t, c) in d.thresholds_db.iter().zip(&d.cdf_values) {
            assert_eq!(*c, if sinr < *t { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let s = ring(5, 30.0);
        let o = fixed_opts(2000, 8.0);
        let a = monte_carlo_sinr_cdf(&s, 50e3, &o, ChannelMode::CoChannel).unwrap();
        let b = monte_carlo_sinr_cdf(&s, 50e3, &o, ChannelMode::CoChannel).unwrap();
        assert_eq!(a, b);
        let seq: Vec<TrialOutcome> = {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap();
            pool.install(|| monte_carlo_trials(&s, 50e3, &o, ChannelMode::CoChannel).unwrap())
        };
        assert_eq!(
            seq,
            monte_carlo_trials(&s, 50e3, &o, ChannelMode::CoChannel).unwrap()
        );
    }

    #[test]
    fn cdf_bounds_and_monotone() {
        let s = ring(25, 30.0);
        for d in [
            monte_carlo_sinr_cdf(&s, 50e3, &fixed_opts(3000, 8.0), ChannelMode::CoChannel).unwrap(),
            analytic_sinr_cdf(&s, 50e3, 8.0, &SinrGrid::default(), ChannelMode::CoChannel).unwrap(),
        ] {
            assert_eq!(d.thresholds_db.len(), 801);
            assert!(d.cdf_values.iter().all(|c| (0.0..=1.0).contains(c)));
            assert!(d.cdf_values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn analytic_matches_monte_carlo() {
        for m in [1usize, 5, 25] {
            for sigma in [4.0, 8.0] {
                let s = ring(m, 30.0);
                let mc = monte_carlo_sinr_cdf(
                    &s,
                    50e3,
                    &fixed_opts(40_000, sigma),
                    ChannelMode::CoChannel,
                )
                .unwrap();
                let an = analytic_sinr_cdf(
                    &s,
                    50e3,
                    sigma,
                    &SinrGrid::default(),
                    ChannelMode::CoChannel,
                )
                .unwrap();
                let dev = mc.max_abs_deviation(&an);
                assert!(dev <= 0.02, "M = {m}, σ = {sigma}: {dev}");
            }
        }
    }

    #[test]
    fn compliance_independent_of_target_range() {
        let s = generate_deployment(&ScenarioConfig::default(), 5).unwrap();
        let o = MonteCarloOptions {
            trials: 500,
            ..Default::default()
        };
        let a = monte_carlo_sinr_cdf(&s, 50e3, &o, ChannelMode::CoChannel).unwrap();
        let b = monte_carlo_sinr_cdf(&s, 100e3, &o, ChannelMode::CoChannel).unwrap();
        assert_eq!(a.compliance_probability, b.compliance_probability);
        assert_ne!(a.cdf_values, b.cdf_values);
    }

    #[test]
    fn adjacent_dominates_cochannel() {
        let s = generate_deployment(&ScenarioConfig::default().with_protection_distance(10.0), 5)
            .unwrap();
        let o = MonteCarloOptions {
            trials: 400,
            ..Default::default()
        };
        let co = monte_carlo_sinr_cdf(&s, 50e3, &o, ChannelMode::CoChannel).unwrap();
        let mut prev = co.compliance_probability;
        for x in [5.0, 10.0, 20.0] {
            let adj = ChannelMode::Adjacent(FdrProfile::new(10.0, x).unwrap());
            let p = monte_carlo_sinr_cdf(&s, 50e3, &o, adj)
                .unwrap()
                .compliance_probability;
            assert!(p >= prev);
            prev = p;
        }
    }

    #[test]
    fn sweep_single_point_matches_direct_call() {
        let c = ScenarioConfig::default();
        let o = MonteCarloOptions {
            trials: 300,
            ..Default::default()
        };
        let rows =
            protection_distance_sweep(&c, &[30.0], 50e3, &o, ChannelMode::CoChannel).unwrap();
        let s = generate_deployment(&c, o.seed).unwrap();
        let d = monte_carlo_sinr_cdf(&s, 50e3, &o, ChannelMode::CoChannel).unwrap();
        assert_eq!(rows[0].compliance_probability, d.compliance_probability);
        assert_eq!(rows[0].cbsd_count, s.cbsds.len());
        assert!(protection_distance_sweep(&c, &[], 50e3, &o, ChannelMode::CoChannel).is_err());
    }

    #[test]
    fn missing_fdr_is_reported() {
        let t = FdrTable::default();
        assert!(matches!(
            ChannelMode::adjacent(&t, 10.0),
            Err(crate::Error::MissingFdr { .. })
        ));
    }

    #[test]
    fn grid_points() {
        let g = SinrGrid {
            start_db: 0.0,
            stop_db: 1.0,
            step_db: 0.25,
        };
        assert_eq!(g.points().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(SinrGrid { step_db: 0.0, ..g }.points().is_err());
    }
}
