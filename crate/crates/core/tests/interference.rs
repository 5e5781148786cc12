//! Interference-engine checks: coupling monotonicity, scenario ordering,
//! omega invariance, compound-load moments, and schedule-independence.

use mccsim_core::channel::{channel_inversion_powers, ScatteringModel};
use mccsim_core::geometry::{
    apothem_for_cluster_size, sample_ppp, Hexagon, NetworkRealization, Point2, PointSet, Scenario,
};
use mccsim_core::simcore::{
    estimate_outage, interference_power, normalized_interference, run_outage_trial, sample_gains,
    sample_zn, trial_rng, SimConfig,
};

fn sparse_cfg(scenario: Scenario) -> SimConfig {
    SimConfig::baseline(ScatteringModel::sparse_default(), scenario)
}

#[test]
fn growing_the_cluster_never_increases_interference() {
    // Couple the cluster sizes: one Poisson pattern and one gain draw, with
    // each interferer keeping its gains as the hexagon grows around it.
    let density = 1e-2;
    let cfg = sparse_cfg(Scenario::ClusterCenter);
    for t in 0..200 {
        let mut rng = trial_rng(301, t);
        let pattern = sample_ppp(density, cfg.disk_radius, &mut rng).unwrap();
        let gains = sample_gains(&cfg, pattern.len(), &mut rng).unwrap();
        let mut prev = f64::INFINITY;
        for &ell in &[1.0, 2.0, 4.0, 8.0] {
            let apothem = apothem_for_cluster_size(density, ell).unwrap();
            let hex = Hexagon::new(Point2::ORIGIN, apothem).unwrap();
            let mut s = 0.0;
            for (i, p) in pattern.points.iter().enumerate() {
                if hex.contains(*p) {
                    continue;
                }
                let l = gains.interferer_serving_distances[i];
                let l2 = l * l;
                let r2 = p.dist_sq(Point2::ORIGIN);
                s += l2 * l2 * gains.side_lobes[i]
                    / (gains.interferer_main_lobes[i] * r2 * r2);
            }
            assert!(
                s <= prev,
                "trial {t}: interference rose from {prev} to {s} at cluster size {ell}"
            );
            prev = s;
        }
    }
}

#[test]
fn outage_orders_cluster_center_below_typical() {
    let trials = 200_000;
    let mut cc = sparse_cfg(Scenario::ClusterCenter);
    cc.trials = trials;
    cc.seed = 302;
    let mut typ = sparse_cfg(Scenario::Typical);
    typ.trials = trials;
    typ.seed = 302;
    let cc_est = estimate_outage(&cc).unwrap();
    let typ_est = estimate_outage(&typ).unwrap();
    assert!(
        cc_est.ci.1 < typ_est.ci.0,
        "cluster-center {:?} should sit strictly below typical {:?}",
        cc_est.ci,
        typ_est.ci
    );
}

#[test]
fn outage_drops_sharply_with_cluster_size() {
    let mut small = sparse_cfg(Scenario::ClusterCenter);
    small.cluster_size = 1.0;
    small.trials = 100_000;
    small.seed = 303;
    let mut large = sparse_cfg(Scenario::ClusterCenter);
    large.cluster_size = 6.0;
    large.trials = 100_000;
    large.seed = 303;
    let a = estimate_outage(&small).unwrap();
    let b = estimate_outage(&large).unwrap();
    assert!(
        b.ci.1 < a.ci.0,
        "cluster size 6 {:?} should sit strictly below size 1 {:?}",
        b.ci,
        a.ci
    );
}

#[test]
fn outage_indicators_are_omega_invariant() {
    let trials = 10_000u64;
    let collect = |omega: f64| -> Vec<bool> {
        let mut cfg = sparse_cfg(Scenario::Typical);
        cfg.omega = omega;
        (0..trials)
            .map(|i| {
                let mut rng = trial_rng(304, i);
                run_outage_trial(&cfg, &mut rng).unwrap()
            })
            .collect()
    };
    let base = collect(1.0);
    assert!(base.iter().any(|&b| b) && base.iter().any(|&b| !b));
    assert_eq!(base, collect(0.1));
    assert_eq!(base, collect(100.0));
}

#[test]
fn interference_power_agrees_with_inversion_powers() {
    // Dual route: omega * sum (L^a/W) G r^-a versus explicit per-interferer
    // transmit powers times side lobes times path loss.
    let cfg = SimConfig {
        omega: 2.5,
        alpha: 3.5,
        ..sparse_cfg(Scenario::ClusterCenter)
    };
    let mut rng = trial_rng(305, 0);
    let real = mccsim_core::geometry::sample_realization(
        cfg.density,
        cfg.disk_radius,
        cfg.apothem().unwrap(),
        Scenario::ClusterCenter,
        &mut rng,
    )
    .unwrap();
    let gains = sample_gains(&cfg, real.interferers.len(), &mut rng).unwrap();
    let fast = interference_power(&real, &gains, &cfg).unwrap();
    let powers = channel_inversion_powers(cfg.omega, cfg.alpha, 0.0, &gains).unwrap();
    let mut slow = 0.0;
    for (i, p) in real.interferers.points.iter().enumerate() {
        let r = p.dist(real.typical_mobile);
        slow += powers.interferer_powers[i] * gains.side_lobes[i] * r.powf(-cfg.alpha);
    }
    assert!(
        (fast / slow - 1.0).abs() < 1e-12,
        "fast {fast} vs explicit {slow}"
    );
}

#[test]
fn general_exponent_matches_manual_powf() {
    let hex = Hexagon::new(Point2::ORIGIN, 1.0).unwrap();
    let real = NetworkRealization {
        interferers: PointSet {
            points: vec![Point2::new(3.0, 1.0), Point2::new(-2.0, 5.0)],
            generating_density: 1e-2,
            region_radius: 100.0,
        },
        typical_bs: Point2::ORIGIN,
        typical_mobile: Point2::ORIGIN,
        serving_distance: 0.0,
        edge_distance: 1.0,
        cluster: hex,
    };
    let gains = mccsim_core::channel::GainDraw {
        main_lobe: 7.0,
        side_lobes: vec![0.4, 0.9],
        interferer_main_lobes: vec![6.5, 9.0],
        interferer_serving_distances: vec![4.0, 11.0],
    };
    let alpha = 3.3;
    let s = normalized_interference(&real, &gains, alpha).unwrap();
    let mut manual = 0.0;
    for (i, p) in real.interferers.points.iter().enumerate() {
        manual += gains.interferer_serving_distances[i].powf(alpha) * gains.side_lobes[i]
            / (gains.interferer_main_lobes[i] * p.dist(Point2::ORIGIN).powf(alpha));
    }
    assert!((s / manual - 1.0).abs() < 1e-12, "engine {s} vs manual {manual}");
}

#[test]
fn compound_load_mean_matches_closed_form() {
    // E[Z] = cluster_size * E[L^4] * E[1/W] * E[G] under the sparse baseline.
    let cfg = sparse_cfg(Scenario::ClusterCenter);
    let n = 100_000;
    let mut rng = trial_rng(306, 0);
    let draws: Vec<f64> = (0..n).map(|_| sample_zn(&cfg, &mut rng).unwrap()).collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    let pi_lambda = std::f64::consts::PI * cfg.density;
    let expect = cfg.cluster_size * (2.0 / (pi_lambda * pi_lambda)) * ((10.0f64 / 6.0).ln() / 4.0)
        * 0.5;
    assert!(
        (mean - expect).abs() <= 3.0 * se,
        "mean {mean} vs closed form {expect} (3 SE = {:.2})",
        3.0 * se
    );
}

#[test]
fn estimates_are_identical_across_thread_counts() {
    let mut cfg = sparse_cfg(Scenario::Typical);
    cfg.trials = 10_000;
    cfg.seed = 307;
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| estimate_outage(&cfg).unwrap());
    let two = rayon::ThreadPoolBuilder::new()
        .num_threads(2)
        .build()
        .unwrap()
        .install(|| estimate_outage(&cfg).unwrap());
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| estimate_outage(&cfg).unwrap());
    assert_eq!(serial, two);
    assert_eq!(serial, four);
    let sirs_serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| mccsim_core::simcore::per_trial_sir(&cfg).unwrap());
    let sirs_four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| mccsim_core::simcore::per_trial_sir(&cfg).unwrap());
    assert_eq!(sirs_serial, sirs_four);
}
