//! Distribution-law checks: samplers against their closed-form laws, the
//! Poisson field against its count law, and scenario conditioning against
//! its defining guard zones.

use mccsim_core::analytics::{edge_distance_cdf, serving_distance_ccdf};
use mccsim_core::channel::{sample_serving_distance, sample_sparse_gains, ScatteringModel};
use mccsim_core::geometry::{sample_ppp, sample_realization, Hexagon, Point2, Scenario};
use mccsim_core::simcore::trial_rng;
use mccsim_core::stats::{ks_test, poisson_gof};

const LEVEL: f64 = 0.01;

#[test]
fn serving_distance_law_ks() {
    let density = 1e-2;
    let mut rng = trial_rng(101, 0);
    let mut samples: Vec<f64> = (0..100_000)
        .map(|_| sample_serving_distance(density, &mut rng).unwrap())
        .collect();
    let cdf = |x: f64| 1.0 - serving_distance_ccdf(x.max(0.0), density).unwrap();
    let outcome = ks_test(&mut samples, cdf, LEVEL).unwrap();
    assert!(
        outcome.pass,
        "serving-distance KS {:.5} exceeds critical {:.5}",
        outcome.statistic, outcome.critical
    );
}

#[test]
fn edge_distance_law_ks() {
    let apothem = 10.0;
    let hex = Hexagon::new(Point2::ORIGIN, apothem).unwrap();
    let mut rng = trial_rng(102, 0);
    let mut samples: Vec<f64> = (0..100_000)
        .map(|_| hex.edge_distance(hex.sample_uniform(&mut rng)).unwrap())
        .collect();
    let cdf = |x: f64| edge_distance_cdf(x.clamp(0.0, apothem), apothem).unwrap();
    let outcome = ks_test(&mut samples, cdf, LEVEL).unwrap();
    assert!(
        outcome.pass,
        "edge-distance KS {:.5} exceeds critical {:.5}",
        outcome.statistic, outcome.critical
    );
}

#[test]
fn ppp_count_matches_poisson_law() {
    let density = 1e-2;
    let radius = (2.0e4 / std::f64::consts::PI).sqrt();
    let mean = density * std::f64::consts::PI * radius * radius;
    let mut rng = trial_rng(103, 0);
    let counts: Vec<u64> = (0..10_000)
        .map(|_| sample_ppp(density, radius, &mut rng).unwrap().len() as u64)
        .collect();
    let sample_mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
    assert!(
        (sample_mean / mean - 1.0).abs() < 0.01,
        "mean count {sample_mean} vs expected {mean}"
    );
    let gof = poisson_gof(&counts, mean, LEVEL).unwrap();
    assert!(
        gof.pass,
        "count GoF statistic {:.2} exceeds critical {:.2}",
        gof.statistic, gof.critical
    );
}

#[test]
fn sparse_gain_marginals_ks() {
    let model = ScatteringModel::sparse_default();
    let mut rng = trial_rng(104, 0);
    let draw = sample_sparse_gains(&model, 100_000, 1e-2, &mut rng).unwrap();
    let mut w = draw.interferer_main_lobes.clone();
    let outcome = ks_test(&mut w, |x| ((x - 6.0) / 4.0).clamp(0.0, 1.0), LEVEL).unwrap();
    assert!(outcome.pass, "main-lobe KS {outcome:?}");
    let mut g = draw.side_lobes.clone();
    let outcome = ks_test(&mut g, |x| x.clamp(0.0, 1.0), LEVEL).unwrap();
    assert!(outcome.pass, "side-lobe KS {outcome:?}");
    let mut l = draw.interferer_serving_distances.clone();
    let cdf = |x: f64| 1.0 - serving_distance_ccdf(x.max(0.0), 1e-2).unwrap();
    let outcome = ks_test(&mut l, cdf, LEVEL).unwrap();
    assert!(outcome.pass, "interferer serving-distance KS {outcome:?}");
}

#[test]
fn typical_scenario_guard_zone_always_holds() {
    let mut rng = trial_rng(105, 0);
    for _ in 0..10_000 {
        let real = sample_realization(1e-2, 79.0, 10.0, Scenario::Typical, &mut rng).unwrap();
        let l_sq = real.serving_distance * real.serving_distance;
        for p in &real.interferers.points {
            assert!(
                p.dist_sq(real.typical_mobile) > l_sq,
                "interferer inside the guard zone"
            );
            assert!(!real.cluster.contains(*p), "interferer inside the cluster");
        }
    }
}

#[test]
fn received_power_factor_mean_stabilizes() {
    // Running mean of P*G over the last decade of a million draws moves by
    // less than 2%: the factor has a finite mean despite its heavy tail.
    let model = ScatteringModel::sparse_default();
    let mut rng = trial_rng(106, 0);
    let n = 1_000_000usize;
    let draw = sample_sparse_gains(&model, n, 1e-2, &mut rng).unwrap();
    let mut running = 0.0;
    let mut at_checkpoints = Vec::new();
    for i in 0..n {
        let l = draw.interferer_serving_distances[i];
        let l2 = l * l;
        running += l2 * l2 * draw.side_lobes[i] / draw.interferer_main_lobes[i];
        let count = i + 1;
        if count >= n / 10 && count % (n / 100) == 0 {
            at_checkpoints.push(running / count as f64);
        }
    }
    let lo = at_checkpoints.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = at_checkpoints.iter().cloned().fold(0.0f64, f64::max);
    assert!(
        (hi - lo) / hi < 0.02,
        "running mean wandered from {lo} to {hi}"
    );
    // And it sits near the closed-form mean E[L^4] E[1/W] E[G].
    let expect = 2.0 / (std::f64::consts::PI * 1e-2).powi(2) * (10.0f64 / 6.0).ln() / 4.0 * 0.5;
    let last = *at_checkpoints.last().unwrap();
    assert!(
        (last / expect - 1.0).abs() < 0.02,
        "mean {last} vs closed form {expect}"
    );
}
