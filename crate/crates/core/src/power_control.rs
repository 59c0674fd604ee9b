//! Farthest-first CBSD power allocation under the radar interference limit.
//!
//! Every CBSD starts at its minimum power. If that already violates the
//! limit the allocation is infeasible. Otherwise powers are raised in fixed
//! steps, farthest device (or sector) first, until the next step would push
//! the median aggregate interference over `I_th`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::interference::{monte_carlo_trials, ChannelMode, MonteCarloOptions, SinrGrid};
use crate::scenario::{coverage_radius, density_for_radius, CoverageBudget, Scenario};
use crate::units::{db_to_linear, linear_to_db};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllocationMethod {
    PerCbsd,
    PerSector,
    DensityAdjusted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationOptions {
    pub i_th_dbm: f64,
    pub power_step_db: f64,
    #[serde(default)]
    pub mode: ChannelMode,
    /// Record median I_agg after every accepted increment.
    #[serde(default)]
    pub trace_steps: bool,
}

impl AllocationOptions {
    pub fn new(i_th_dbm: f64, power_step_db: f64) -> Self {
        Self {
            i_th_dbm,
            power_step_db,
            mode: ChannelMode::CoChannel,
            trace_steps: false,
        }
    }

    fn validate(&self, scenario: &Scenario) -> Result<()> {
        scenario.config.cbsd.validate()?;
        ensure(
            self.power_step_db > 0.0 && self.power_step_db.is_finite(),
            || format!("power step must be positive, got {} dB", self.power_step_db),
        )?;
        ensure(!self.i_th_dbm.is_nan(), || {
            "I_th must be a number".to_string()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    pub method: AllocationMethod,
    pub per_cbsd_power_dbm: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_sector_power_dbm: Option<Vec<f64>>,
    /// Median I_agg under the allocation model (sector losses for method 2).
    pub achieved_i_agg_dbm: f64,
    /// Median I_agg with every CBSD's own path loss.
    pub exact_i_agg_dbm: f64,
    pub bootstrap_i_agg_dbm: f64,
    pub i_th_dbm: f64,
    pub feasible: bool,
    /// Accepted power increments.
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub step_trace_dbm: Vec<f64>,
}

/// Upper bound on accepted increments for `m` units.
pub fn max_increments(m: usize, min_dbm: f64, max_dbm: f64, step_db: f64) -> usize {
    m * ((max_dbm - min_dbm) / step_db).ceil().max(0.0) as usize
}

/// Linear path gain × antenna gain × rejection toward the radar, per CBSD.
fn coupling(scenario: &Scenario, mode: ChannelMode) -> Vec<f64> {
    let gains = scenario.radar_gains_dbi();
    scenario
        .cbsds
        .iter()
        .zip(gains)
        .map(|(c, g)| db_to_linear(g - c.path_loss_db - mode.rejection_db()))
        .collect()
}

fn exact_i_agg_dbm(coupling: &[f64], powers_dbm: &[f64]) -> f64 {
    linear_to_db(
        coupling
            .iter()
            .zip(powers_dbm)
            .map(|(c, p)| c * db_to_linear(*p))
            .sum(),
    )
}

/// The shared greedy sweep over `units` (CBSDs or sectors) given each
/// unit's linear coupling to the radar and its visiting order.
struct Sweep {
    powers_dbm: Vec<f64>,
    bootstrap_dbm: f64,
    achieved_dbm: f64,
    feasible: bool,
    iterations: usize,
    trace: Vec<f64>,
}

fn greedy_sweep(
    coupling: &[f64],
    order: &[usize],
    min_dbm: f64,
    max_dbm: f64,
    opts: &AllocationOptions,
) -> Sweep {
    let i_th = db_to_linear(opts.i_th_dbm);
    let mut powers = vec![min_dbm; coupling.len()];
    let mut lin = vec![db_to_linear(min_dbm); coupling.len()];
    let total = |lin: &[f64]| -> f64 { coupling.iter().zip(lin).map(|(c, p)| c * p).sum() };
    let bootstrap = total(&lin);
    if bootstrap > i_th {
        return Sweep {
            powers_dbm: powers,
            bootstrap_dbm: linear_to_db(bootstrap),
            achieved_dbm: linear_to_db(bootstrap),
            feasible: false,
            iterations: 0,
            trace: Vec::new(),
        };
    }
    let mut current = bootstrap;
    let mut iterations = 0;
    let mut trace = Vec::new();
    'outer: for &u in order {
        while powers[u] < max_dbm {
            let next = (powers[u] + opts.power_step_db).min(max_dbm);
            let old = lin[u];
            lin[u] = db_to_linear(next);
            // Full recomputation of the aggregate, as each increment would
            // be re-evaluated against the whole deployment.
            let candidate = total(&lin);
            if candidate > i_th {
                lin[u] = old;
                break 'outer;
            }
            powers[u] = next;
            current = candidate;
            iterations += 1;
            if opts.trace_steps {
                trace.push(linear_to_db(current));
            }
        }
    }
    Sweep {
        powers_dbm: powers,
        bootstrap_dbm: linear_to_db(bootstrap),
        achieved_dbm: linear_to_db(current),
        feasible: true,
        iterations,
        trace,
    }
}

/// Per-CBSD allocation. Ties in distance are broken by azimuth, then id.
pub fn allocate_method1(scenario: &Scenario, opts: &AllocationOptions) -> Result<PowerAllocation> {
    opts.validate(scenario)?;
    let cb = &scenario.config.cbsd;
    let c = coupling(scenario, opts.mode);
    let mut order: Vec<usize> = (0..scenario.cbsds.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&scenario.cbsds[a], &scenario.cbsds[b]);
        y.distance_km
            .total_cmp(&x.distance_km)
            .then(x.azimuth_deg.total_cmp(&y.azimuth_deg))
            .then(x.id.cmp(&y.id))
    });
    let s = greedy_sweep(&c, &order, cb.min_power_dbm, cb.max_power_dbm, opts);
    let per_cbsd_power_dbm = if s.feasible {
        s.powers_dbm
    } else {
        scenario.cbsds.iter().map(|x| x.power_dbm).collect()
    };
    let exact = exact_i_agg_dbm(&c, &per_cbsd_power_dbm);
    Ok(PowerAllocation {
        method: AllocationMethod::PerCbsd,
        per_cbsd_power_dbm,
        per_sector_power_dbm: None,
        achieved_i_agg_dbm: if s.feasible {
            s.achieved_dbm
        } else {
            s.bootstrap_dbm
        },
        exact_i_agg_dbm: exact,
        bootstrap_i_agg_dbm: s.bootstrap_dbm,
        i_th_dbm: opts.i_th_dbm,
        feasible: s.feasible,
        iterations: s.iterations,
        step_trace_dbm: s.trace,
    })
}

/// Per-sector allocation, farthest sector first. Each member's loss is
/// replaced by its sector's representative loss.
pub fn allocate_method2(scenario: &Scenario, opts: &AllocationOptions) -> Result<PowerAllocation> {
    opts.validate(scenario)?;
    if scenario.sectors.is_empty() {
        return Err(Error::NotSectorized);
    }
    let cb = &scenario.config.cbsd;
    let gains = scenario.radar_gains_dbi();
    let sector_coupling: Vec<f64> = scenario
        .sectors
        .iter()
        .map(|s| {
            s.member_ids
                .iter()
                .map(|&id| {
                    db_to_linear(gains[id] - s.representative_loss_db - opts.mode.rejection_db())
                })
                .sum()
        })
        .collect();
    let order: Vec<usize> = (0..scenario.sectors.len()).rev().collect();
    let s = greedy_sweep(
        &sector_coupling,
        &order,
        cb.min_power_dbm,
        cb.max_power_dbm,
        opts,
    );

    let per_cbsd_power_dbm: Vec<f64> = if s.feasible {
        let mut p = vec![cb.min_power_dbm; scenario.cbsds.len()];
        for (sec, &pw) in scenario.sectors.iter().zip(&s.powers_dbm) {
            for &id in &sec.member_ids {
                p[id] = pw;
            }
        }
        p
    } else {
        scenario.cbsds.iter().map(|x| x.power_dbm).collect()
    };
    let exact = exact_i_agg_dbm(&coupling(scenario, opts.mode), &per_cbsd_power_dbm);
    Ok(PowerAllocation {
        method: AllocationMethod::PerSector,
        per_cbsd_power_dbm,
        per_sector_power_dbm: s.feasible.then_some(s.powers_dbm),
        achieved_i_agg_dbm: if s.feasible {
            s.achieved_dbm
        } else {
            s.bootstrap_dbm
        },
        exact_i_agg_dbm: exact,
        bootstrap_i_agg_dbm: s.bootstrap_dbm,
        i_th_dbm: opts.i_th_dbm,
        feasible: s.feasible,
        iterations: s.iterations,
        step_trace_dbm: s.trace,
    })
}

/// Power, site density and cell size for one sector of a density plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorPlan {
    pub index: usize,
    pub range_interval_km: (f64, f64),
    pub power_dbm: f64,
    pub density_per_km2: f64,
    pub cell_radius_km: f64,
    /// `[low, high]` powers admissible with the other sectors at plan
    /// values, or `None` if no step is admissible.
    pub feasible_power_band_dbm: Option<(f64, f64)>,
    /// Median interference contributed by this sector, dBm.
    pub interference_dbm: f64,
}

impl SectorPlan {
    /// Whether the hexagonal layout of this sector (cells of radius
    /// `cell_radius_km`, lattice anchored at the radar) serves `(x, y)` km.
    pub fn covers(&self, x_km: f64, y_km: f64) -> bool {
        let r = self.cell_radius_km;
        let pitch = 3f64.sqrt() * r;
        let row = pitch * 3f64.sqrt() / 2.0;
        let j0 = (y_km / row).round() as i64;
        let mut best = f64::INFINITY;
        for j in j0 - 1..=j0 + 1 {
            let cy = j as f64 * row;
            let shift = j as f64 * pitch / 2.0;
            let i0 = ((x_km - shift) / pitch).round() as i64;
            for i in i0 - 1..=i0 + 1 {
                let cx = i as f64 * pitch + shift;
                best = best.min((x_km - cx).hypot(y_km - cy));
            }
        }
        best <= r * (1.0 + 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityPlan {
    pub sectors: Vec<SectorPlan>,
    pub feasible: bool,
    pub achieved_i_agg_dbm: f64,
    pub bootstrap_i_agg_dbm: f64,
    pub i_th_dbm: f64,
    pub iterations: usize,
    /// Near edge of the nearest sector planned above minimum power.
    pub cutoff_km: Option<f64>,
}

/// Radar-facing integral `∫∫ g(φ) / ρ(r) r dr dφ` of one sector annulus, in
/// linear gain × km².
fn sector_kernel(
    scenario: &Scenario,
    near_km: f64,
    far_km: f64,
    angular: f64,
    rejection_db: f64,
) -> Result<f64> {
    let n = 64;
    let h = (far_km - near_km) / n as f64;
    let mut s = 0.0;
    for i in 0..=n {
        let r = near_km + i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        s += w * r * db_to_linear(-scenario.config.radar_link_loss_db(r, 0.0)? - rejection_db);
    }
    Ok(s * h / 3.0 * angular)
}

/// Jointly steps power up and site density down, farthest sector first.
///
/// Each sector is treated as a uniform spread of CBSDs at density
/// `1 / hex_area(coverage_radius(P))`, so its median interference is
/// `P · density(P) · ∫∫ g/ρ dA`.
pub fn allocate_with_density(
    scenario: &Scenario,
    opts: &AllocationOptions,
    budget: &CoverageBudget,
) -> Result<DensityPlan> {
    opts.validate(scenario)?;
    budget.validate()?;
    if scenario.sectors.is_empty() {
        return Err(Error::NotSectorized);
    }
    let cb = &scenario.config.cbsd;
    let region = scenario.region();
    let off = region.axis_azimuth_deg - scenario.boresight_azimuth_deg();
    let half = region.angular_extent_deg.min(360.0) / 2.0;
    let angular = scenario
        .config
        .radar
        .antenna
        .integrated_gain(off - half, off + half);

    let kernels = scenario
        .sectors
        .iter()
        .map(|s| {
            sector_kernel(
                scenario,
                s.range_interval_km.0,
                s.range_interval_km.1,
                angular,
                opts.mode.rejection_db(),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let steps = {
        let mut v = vec![cb.min_power_dbm];
        while *v.last().unwrap() < cb.max_power_dbm {
            v.push((v.last().unwrap() + opts.power_step_db).min(cb.max_power_dbm));
        }
        v
    };
    // Per-power emission density: P · density(P), mW/km².
    let emission = |p: f64| -> Result<(f64, f64, f64)> {
        let r = coverage_radius(p, cb, budget)?;
        let d = density_for_radius(r)?;
        Ok((db_to_linear(p) * d, d, r))
    };
    let k = scenario.sectors.len();
    let i_th = db_to_linear(opts.i_th_dbm);
    let (e_min, _, _) = emission(cb.min_power_dbm)?;
    let mut level = vec![0usize; k];
    let mut contrib: Vec<f64> = kernels.iter().map(|g| e_min * g).collect();
    let bootstrap: f64 = contrib.iter().sum();
    let feasible = bootstrap <= i_th;
    let mut iterations = 0;

    if feasible {
        'outer: for s in (0..k).rev() {
            while level[s] + 1 < steps.len() {
                let (e, _, _) = emission(steps[level[s] + 1])?;
                let candidate = contrib.iter().sum::<f64>() - contrib[s] + e * kernels[s];
                if candidate > i_th {
                    break 'outer;
                }
                level[s] += 1;
                contrib[s] = e * kernels[s];
                iterations += 1;
            }
        }
    }
    let total: f64 = contrib.iter().sum();

    let mut sectors = Vec::with_capacity(k);
    for (s, sec) in scenario.sectors.iter().enumerate() {
        let p = steps[level[s]];
        let (_, density, radius) = emission(p)?;
        let others = total - contrib[s];
        let mut band: Option<(f64, f64)> = None;
        for &q in &steps {
            let (e, _, _) = emission(q)?;
            if others + e * kernels[s] <= i_th {
                band = Some(band.map_or((q, q), |(lo, _)| (lo, q)));
            }
        }
        sectors.push(SectorPlan {
            index: sec.index,
            range_interval_km: sec.range_interval_km,
            power_dbm: p,
            density_per_km2: density,
            cell_radius_km: radius,
            feasible_power_band_dbm: band,
            interference_dbm: linear_to_db(contrib[s]),
        });
    }
    let cutoff_km = feasible
        .then(|| {
            sectors
                .iter()
                .find(|s| s.power_dbm > cb.min_power_dbm)
                .map(|s| s.range_interval_km.0)
        })
        .flatten();
    Ok(DensityPlan {
        sectors,
        feasible,
        achieved_i_agg_dbm: linear_to_db(total),
        bootstrap_i_agg_dbm: linear_to_db(bootstrap),
        i_th_dbm: opts.i_th_dbm,
        iterations,
        cutoff_km,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `P[I_agg ≤ I_th]` with shadowing.
    pub probability: f64,
    pub trials: usize,
    pub sigma_db: f64,
    pub i_th_dbm: f64,
    /// `(percentile, I_th − I_agg)` in dB.
    pub margin_percentiles_db: Vec<(f64, f64)>,
}

/// Monte Carlo check of an allocation on its fixed deployment.
pub fn verify_allocation(
    scenario: &Scenario,
    allocation: &PowerAllocation,
    trials: usize,
    sigma_db: f64,
    seed: u64,
) -> Result<VerificationReport> {
    ensure(
        allocation.per_cbsd_power_dbm.len() == scenario.cbsds.len(),
        || "allocation does not match the deployment".to_string(),
    )?;
    let mut s = scenario.clone();
    for (c, p) in s.cbsds.iter_mut().zip(&allocation.per_cbsd_power_dbm) {
        c.power_dbm = *p;
    }
    let opts = MonteCarloOptions {
        trials,
        seed,
        sigma_db,
        redeploy: false,
        grid: SinrGrid::default(),
    };
    let outcomes = monte_carlo_trials(&s, 50e3, &opts, ChannelMode::CoChannel)?;
    let i_th = allocation.i_th_dbm;
    let mut margins: Vec<f64> = outcomes.iter().map(|o| i_th - o.interference_dbm).collect();
    margins.sort_by(f64::total_cmp);
    let ok = margins.iter().filter(|m| **m >= 0.0).count();
    let pct = |q: f64| {
        let idx = ((q / 100.0) * (margins.len() - 1) as f64).round() as usize;
        margins[idx]
    };
    Ok(VerificationReport {
        probability: ok as f64 / margins.len() as f64,
        trials,
        sigma_db,
        i_th_dbm: i_th,
        margin_percentiles_db: [1.0, 5.0, 50.0, 95.0, 99.0]
            .iter()
            .map(|&q| (q, pct(q)))
            .collect(),
    })
}
