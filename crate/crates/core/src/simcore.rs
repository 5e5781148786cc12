//! Monte Carlo engine: outage trials, interference accumulation, compound
//! interference loads, and ring-based sandwich bounds.
//!
//! Every trial owns an independent ChaCha8 substream derived from
//! `(seed, trial_index)`, and cross-trial reductions are integer counts or
//! index-ordered collects, so results are bit-identical whether trials run
//! serially or on any number of threads.
//!
//! The outage decision is evaluated in a scale-free form: with
//! channel-inversion powers the received SIR is `omega / I`, where
//! `I = omega * S` and `S = sum (L^alpha / W) G r^-alpha` does not depend on
//! `omega`. Outage (`SIR < theta`) is therefore decided as `S > 1/theta`,
//! which makes the `omega`-invariance of outage exact in floating point.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::analytics::ModelParams;
use crate::channel::{
    sample_rich_gains, sample_sparse_gains, GainDraw, ScatteringModel,
};
use crate::error::{ensure, Error, Result};
use crate::geometry::{
    apothem_for_cluster_size, sample_realization, NetworkRealization, Scenario,
};
use crate::stats::{rule_of_three, wilson_interval, Z_95};

/// Full description of one simulation: network, channel, scenario, and
/// reproducibility parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Base-station density per unit area.
    pub density: f64,
    /// Mean number of base stations in the cooperation cluster.
    pub cluster_size: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// SIR threshold defining outage.
    pub theta: f64,
    /// Mean received power delivered by channel inversion.
    pub omega: f64,
    pub scattering: ScatteringModel,
    pub scenario: Scenario,
    pub trials: u64,
    pub seed: u64,
    /// Radius of the disk the Poisson field is drawn on.
    pub disk_radius: f64,
}

impl SimConfig {
    /// Baseline configuration: density `1e-2`, cluster size 4, path-loss
    /// exponent 4, threshold 3, unit power, one million trials on a disk
    /// holding 200 base stations in expectation.
    pub fn baseline(scattering: ScatteringModel, scenario: Scenario) -> Self {
        SimConfig {
            density: 1e-2,
            cluster_size: 4.0,
            alpha: 4.0,
            theta: 3.0,
            omega: 1.0,
            scattering,
            scenario,
            trials: 1_000_000,
            seed: 1729,
            disk_radius: disk_radius_for_expected_count(1e-2, 200.0)
                .expect("valid baseline radius"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.density > 0.0 && self.density.is_finite(),
            "density must be finite and positive, got {}",
            self.density
        );
        ensure!(
            self.cluster_size > 0.0 && self.cluster_size.is_finite(),
            "cluster size must be finite and positive, got {}",
            self.cluster_size
        );
        ensure!(self.alpha > 2.0, "alpha must exceed 2, got {}", self.alpha);
        ensure!(
            self.theta > 0.0 && self.theta.is_finite(),
            "theta must be finite and positive, got {}",
            self.theta
        );
        ensure!(
            self.omega > 0.0 && self.omega.is_finite(),
            "omega must be finite and positive, got {}",
            self.omega
        );
        ensure!(self.trials >= 1, "need at least one trial");
        ensure!(
            self.disk_radius > 0.0 && self.disk_radius.is_finite(),
            "disk radius must be finite and positive, got {}",
            self.disk_radius
        );
        self.scattering.validate()?;
        let apothem = self.apothem()?;
        ensure!(
            apothem * 2.0 / crate::geometry::SQRT_3 <= self.disk_radius,
            "cluster (circumradius {:.3}) must fit inside the sampling disk (radius {})",
            apothem * 2.0 / crate::geometry::SQRT_3,
            self.disk_radius
        );
        Ok(())
    }

    /// Apothem of the cluster hexagon implied by `cluster_size`.
    pub fn apothem(&self) -> Result<f64> {
        apothem_for_cluster_size(self.density, self.cluster_size)
    }

    /// Closed-form parameter bundle matching this configuration. The half of
    /// the scattering parameters not used by `self.scattering` keeps its
    /// baseline value.
    pub fn model_params(&self) -> ModelParams {
        let mut params = ModelParams {
            density: self.density,
            alpha: self.alpha,
            theta: self.theta,
            omega: self.omega,
            ..ModelParams::baseline()
        };
        match &self.scattering {
            ScatteringModel::Sparse {
                delta,
                delta_prime,
                gamma,
            } => {
                params.delta = *delta;
                params.delta_prime = *delta_prime;
                params.gamma = *gamma;
            }
            ScatteringModel::Rich { diversity } => {
                params.nu = diversity.min_support();
                params.pr_n_equals_nu = diversity.pr_min();
            }
        }
        params
    }
}

/// Disk radius for which the Poisson field holds `count` points in
/// expectation.
pub fn disk_radius_for_expected_count(density: f64, count: f64) -> Result<f64> {
    ensure!(
        density > 0.0 && density.is_finite(),
        "density must be finite and positive, got {density}"
    );
    ensure!(
        count > 0.0 && count.is_finite(),
        "expected count must be finite and positive, got {count}"
    );
    Ok((count / (std::f64::consts::PI * density)).sqrt())
}

/// Independent ChaCha8 substream for one trial: the seed selects the key,
/// the trial index selects the stream.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// `s^(alpha/2)` on squared distances, with the `alpha = 4` hot path reduced
/// to a single multiply.
#[derive(Debug, Clone, Copy)]
struct HalfPow {
    half: f64,
    square: bool,
}

impl HalfPow {
    fn new(alpha: f64) -> Self {
        HalfPow {
            half: alpha / 2.0,
            square: alpha == 4.0,
        }
    }

    #[inline]
    fn eval(&self, s: f64) -> f64 {
        if self.square {
            s * s
        } else {
            s.powf(self.half)
        }
    }
}

/// Draws gains for `n_interferers` interferers under the configured
/// scattering model.
pub fn sample_gains<R: Rng + ?Sized>(
    cfg: &SimConfig,
    n_interferers: usize,
    rng: &mut R,
) -> Result<GainDraw> {
    match &cfg.scattering {
        ScatteringModel::Sparse { .. } => {
            sample_sparse_gains(&cfg.scattering, n_interferers, cfg.density, rng)
        }
        ScatteringModel::Rich { .. } => {
            sample_rich_gains(&cfg.scattering, n_interferers, cfg.density, rng)
        }
    }
}

/// Scale-free interference sum `S = sum_i (L_i^alpha / W_i) G_i r_i^-alpha`
/// over the realization's interferers; the physical interference is
/// `omega * S`.
pub fn normalized_interference(
    realization: &NetworkRealization,
    gains: &GainDraw,
    alpha: f64,
) -> Result<f64> {
    ensure!(alpha > 2.0, "alpha must exceed 2, got {alpha}");
    ensure!(
        realization.interferers.len() == gains.len()
            && gains.len() == gains.interferer_main_lobes.len()
            && gains.len() == gains.interferer_serving_distances.len(),
        "gain draw covers {} interferers, realization has {}",
        gains.len(),
        realization.interferers.len()
    );
    let pw = HalfPow::new(alpha);
    let mobile = realization.typical_mobile;
    let mut total = 0.0;
    for (i, p) in realization.interferers.points.iter().enumerate() {
        let r_sq = p.dist_sq(mobile);
        if r_sq == 0.0 {
            return Err(Error::Singularity(format!(
                "interferer {i} collocated with the mobile"
            )));
        }
        let l = gains.interferer_serving_distances[i];
        let w = gains.interferer_main_lobes[i];
        ensure!(w > 0.0, "main lobe {i} must be positive, got {w}");
        total += pw.eval(l * l) * gains.side_lobes[i] / (w * pw.eval(r_sq));
    }
    Ok(total)
}

/// Aggregate interference power at the tagged mobile,
/// `sum_Y (omega L_Y^alpha / W_Y) G_Y |Y - mobile|^-alpha`.
pub fn interference_power(
    realization: &NetworkRealization,
    gains: &GainDraw,
    cfg: &SimConfig,
) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.omega * normalized_interference(realization, gains, cfg.alpha)?)
}

/// Runs a single outage trial: draws a realization and gains, accumulates
/// interference, and reports whether the received SIR fell below `theta`.
pub fn run_outage_trial<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<bool> {
    let s = trial_normalized_interference(cfg, rng)?;
    Ok(s > 1.0 / cfg.theta)
}

/// One end-to-end trial returning the scale-free interference sum `S`.
fn trial_normalized_interference<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<f64> {
    let realization = sample_realization(
        cfg.density,
        cfg.disk_radius,
        cfg.apothem()?,
        cfg.scenario,
        rng,
    )?;
    let gains = sample_gains(cfg, realization.interferers.len(), rng)?;
    normalized_interference(&realization, &gains, cfg.alpha)
}

/// One end-to-end trial returning the received SIR `omega / I = 1 / S`
/// (infinite when no interference is realized).
pub fn trial_sir<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<f64> {
    let s = trial_normalized_interference(cfg, rng)?;
    Ok(if s == 0.0 { f64::INFINITY } else { 1.0 / s })
}

/// Outage probability estimate with its 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub trials: u64,
    pub outage_count: u64,
    pub p_hat: f64,
    /// Wilson score interval; for a zero count the upper end is the
    /// rule-of-three bound `3 / trials`.
    pub ci: (f64, f64),
    /// `-ln p_hat`, absent when no outage was observed.
    pub ope: Option<f64>,
}

impl OutageEstimate {
    pub fn from_counts(outage_count: u64, trials: u64) -> Result<Self> {
        ensure!(trials >= 1, "need at least one trial");
        ensure!(
            outage_count <= trials,
            "count {outage_count} exceeds trials {trials}"
        );
        let p_hat = outage_count as f64 / trials as f64;
        let ci = if outage_count == 0 {
            (0.0, rule_of_three(trials)?)
        } else {
            wilson_interval(outage_count, trials, Z_95)?
        };
        let ope = if outage_count > 0 {
            Some(-p_hat.ln())
        } else {
            None
        };
        Ok(OutageEstimate {
            trials,
            outage_count,
            p_hat,
            ci,
            ope,
        })
    }
}

/// Estimates the outage probability over `cfg.trials` independent trials.
/// Trials run in parallel; the count reduction is order-insensitive, so the
/// estimate is bit-identical to a serial run.
pub fn estimate_outage(cfg: &SimConfig) -> Result<OutageEstimate> {
    cfg.validate()?;
    let outage_count = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i);
            run_outage_trial(cfg, &mut rng).map(u64::from)
        })
        .try_reduce(|| 0u64, |a, b| Ok(a + b))?;
    OutageEstimate::from_counts(outage_count, cfg.trials)
}

/// Per-trial received SIRs for `cfg.trials` trials, in trial order (so the
/// output is independent of the parallel schedule).
pub fn per_trial_sir(cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i);
            trial_sir(cfg, &mut rng)
        })
        .collect()
}

/// Draws one compound interference load: a Poisson(`cluster_size`) number of
/// independent `P * G` terms with `P = omega L^alpha / W`.
pub fn sample_zn<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<f64> {
    cfg.validate()?;
    let pois = Poisson::new(cfg.cluster_size)
        .map_err(|e| Error::invalid(format!("poisson mean {}: {e}", cfg.cluster_size)))?;
    let k = pois.sample(rng) as usize;
    let gains = sample_gains(cfg, k, rng)?;
    let pw = HalfPow::new(cfg.alpha);
    let mut total = 0.0;
    for i in 0..k {
        let l = gains.interferer_serving_distances[i];
        total += cfg.omega * pw.eval(l * l) * gains.side_lobes[i] / gains.interferer_main_lobes[i];
    }
    Ok(total)
}

/// Draws one power-gain product `P * G` with `P = omega L^alpha / W`: the
/// interference contribution of a single base station before path loss.
pub fn sample_power_gain<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<f64> {
    cfg.validate()?;
    let gains = sample_gains(cfg, 1, rng)?;
    let pw = HalfPow::new(cfg.alpha);
    let l = gains.interferer_serving_distances[0];
    Ok(cfg.omega * pw.eval(l * l) * gains.side_lobes[0] / gains.interferer_main_lobes[0])
}

/// Tally of sandwich-bound violations over coupled trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingBoundReport {
    pub trials: u64,
    /// Trials where the ring-weighted upper sum fell below the exact
    /// interference.
    pub upper_violations: u64,
    /// Trials where the near-ring lower sum exceeded the exact interference.
    pub lower_violations: u64,
}

/// Checks, on coupled cluster-center realizations, that the exact
/// interference is sandwiched between the near-ring lower bound (interferers
/// within gauge `sqrt(1 + epsilon) * apothem`, each weighted as if at
/// distance `(1 + epsilon) * circumradius`) and the ring-quantized upper
/// bound (each interferer in ring `n` weighted as if at distance
/// `sqrt(n) * apothem`).
pub fn check_ring_bounds(cfg: &SimConfig, trials: u64, epsilon: f64) -> Result<RingBoundReport> {
    cfg.validate()?;
    ensure!(trials >= 1, "need at least one trial");
    ensure!(
        epsilon > 0.0 && epsilon.is_finite(),
        "epsilon must be finite and positive, got {epsilon}"
    );
    let mut probe = cfg.clone();
    probe.scenario = Scenario::ClusterCenter;
    let apothem = probe.apothem()?;
    let pw = HalfPow::new(probe.alpha);
    let ring_edge_sq = |n: f64| pw.eval(n * apothem * apothem);
    let circ = apothem * 2.0 / crate::geometry::SQRT_3;
    let near_weight = (1.0 + epsilon) * circ;
    let near_gauge = (1.0 + epsilon).sqrt() * apothem;
    let near_denom = pw.eval(near_weight * near_weight);

    let (upper_violations, lower_violations) = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<(u64, u64)> {
            let mut rng = trial_rng(probe.seed, i);
            let realization = sample_realization(
                probe.density,
                probe.disk_radius,
                apothem,
                Scenario::ClusterCenter,
                &mut rng,
            )?;
            let gains = sample_gains(&probe, realization.interferers.len(), &mut rng)?;
            let exact = normalized_interference(&realization, &gains, probe.alpha)?;
            let mut upper = 0.0;
            let mut lower = 0.0;
            for (j, p) in realization.interferers.points.iter().enumerate() {
                let l = gains.interferer_serving_distances[j];
                let pg = pw.eval(l * l) * gains.side_lobes[j] / gains.interferer_main_lobes[j];
                let n = realization.cluster.ring_index(*p).ok_or_else(|| {
                    Error::invalid("cluster-center interferer inside the cluster".to_string())
                })?;
                upper += pg / ring_edge_sq(n as f64);
                let gauge = realization.cluster.gauge(*p);
                if gauge <= near_gauge {
                    debug_assert!(p.dist(realization.cluster.center()) <= near_weight + 1e-9);
                    lower += pg / near_denom;
                }
            }
            Ok(((exact > upper) as u64, (lower > exact) as u64))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;

    Ok(RingBoundReport {
        trials,
        upper_violations,
        lower_violations,
    })
}

/// Empirical complementary distribution of `samples` at the given
/// strictly-increasing thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCurve {
    pub thresholds: Vec<f64>,
    /// `tail[i]` = fraction of samples strictly above `thresholds[i]`.
    pub tail: Vec<f64>,
}

/// Evaluates the empirical tail (fraction strictly above each threshold).
pub fn empirical_tail(samples: &[f64], thresholds: &[f64]) -> Result<TailCurve> {
    ensure!(!samples.is_empty(), "need at least one sample");
    ensure!(!thresholds.is_empty(), "need at least one threshold");
    for w in thresholds.windows(2) {
        ensure!(
            w[0] < w[1],
            "thresholds must be strictly increasing ({} then {})",
            w[0],
            w[1]
        );
    }
    for &t in thresholds {
        ensure!(t.is_finite(), "thresholds must be finite, got {t}");
    }
    let mut sorted = samples.to_vec();
    ensure!(
        sorted.iter().all(|s| s.is_finite()),
        "samples must be finite"
    );
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;
    let tail = thresholds
        .iter()
        .map(|&t| {
            let above = sorted.len() - sorted.partition_point(|&s| s <= t);
            above as f64 / n
        })
        .collect();
    Ok(TailCurve {
        thresholds: thresholds.to_vec(),
        tail,
    })
}
