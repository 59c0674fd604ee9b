//! Fixtures shared by the benchmarks.

use coexsim_core::scenario::{generate_deployment, sectorize, Scenario, ScenarioConfig};

/// The first `m` CBSDs of a 1 km lattice beyond `r_min_km`, split into `k`
/// sectors.
pub fn dense_scenario(m: usize, k: usize, r_min_km: f64) -> Scenario {
    let mut cfg = ScenarioConfig::default().with_protection_distance(r_min_km);
    cfg.deployment.site_spacing_km = Some(1.0);
    let mut sites = generate_deployment(&cfg, 8)
        .expect("valid default geometry")
        .cbsds;
    sites.truncate(m);
    let s = Scenario::from_cbsds(cfg, sites).expect("valid default geometry");
    sectorize(&s, k).expect("non-empty range")
}

/// The reference deployment at a protection distance.
pub fn reference_scenario(r_min_km: f64) -> Scenario {
    let cfg = ScenarioConfig::default().with_protection_distance(r_min_km);
    generate_deployment(&cfg, 1).expect("valid default geometry")
}
