//! Channel models: antenna gains under sparse and rich scattering, the
//! nearest-server distance law, channel-inversion power control, and a
//! zero-forcing beamforming oracle used to cross-check the rich-scattering
//! gain laws.
//!
//! Gains separate into a main lobe `W` (a base station toward its own mobile)
//! and side lobes `G` (toward anyone else's mobile). Sparse scattering draws
//! `W` uniform on `[delta, delta']` and `G` uniform on `[0, gamma]`; rich
//! scattering draws `W` as a sum of `N` unit exponentials (the residual
//! beamforming gain with `N` spatial degrees of freedom) and `G` unit
//! exponential, with `N` drawn per base station from a diversity pmf.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Scattering model selector without parameters, for dispatch and reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScatteringKind {
    Sparse,
    Rich,
}

impl std::fmt::Display for ScatteringKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScatteringKind::Sparse => "sparse",
            ScatteringKind::Rich => "rich",
        })
    }
}

impl std::str::FromStr for ScatteringKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(ScatteringKind::Sparse),
            "rich" => Ok(ScatteringKind::Rich),
            other => Err(Error::invalid(format!(
                "unknown scattering kind '{other}' (expected sparse or rich)"
            ))),
        }
    }
}

/// Uniform draw on the half-open interval `(0, 1]`, safe to pass to `ln`.
#[inline]
pub(crate) fn unit_positive<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Unit-rate exponential draw.
#[inline]
pub(crate) fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -unit_positive(rng).ln()
}

/// Distribution of the diversity order `N` in the rich-scattering model.
///
/// Support values are the number of spatial degrees of freedom left after
/// in-cluster nulling; the model requires every support point to be at
/// least 2 so the main-lobe law has a finite second moment margin.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityPmf {
    /// `(value, probability)` pairs, sorted by value, probabilities > 0
    /// summing to 1.
    support: Vec<(u32, f64)>,
}

impl DiversityPmf {
    /// Pmf putting all mass on a single diversity order `n >= 2`.
    pub fn point_mass(n: u32) -> Result<Self> {
        Self::new(vec![(n, 1.0)])
    }

    /// Builds a pmf from `(value, probability)` pairs. Values must be
    /// distinct and at least 2, probabilities positive and summing to 1
    /// within 1e-12.
    pub fn new(mut pairs: Vec<(u32, f64)>) -> Result<Self> {
        ensure!(!pairs.is_empty(), "diversity pmf must have support");
        pairs.sort_by_key(|&(n, _)| n);
        let mut total = 0.0;
        for window in pairs.windows(2) {
            ensure!(
                window[0].0 != window[1].0,
                "duplicate diversity value {}",
                window[0].0
            );
        }
        for &(n, p) in &pairs {
            ensure!(n >= 2, "diversity order must be at least 2, got {n}");
            ensure!(
                p > 0.0 && p.is_finite(),
                "diversity probability must be positive, got {p}"
            );
            total += p;
        }
        ensure!(
            (total - 1.0).abs() <= 1e-12,
            "diversity probabilities sum to {total}, expected 1"
        );
        Ok(DiversityPmf { support: pairs })
    }

    /// Smallest support value; governs the interference tail decay.
    pub fn min_support(&self) -> u32 {
        self.support[0].0
    }

    /// Probability of the smallest support value.
    pub fn pr_min(&self) -> f64 {
        self.support[0].1
    }

    /// Mean diversity order.
    pub fn mean(&self) -> f64 {
        self.support.iter().map(|&(n, p)| n as f64 * p).sum()
    }

    /// Inverse-cdf sample.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u = rng.gen::<f64>();
        let mut acc = 0.0;
        for &(n, p) in &self.support {
            acc += p;
            if u < acc {
                return n;
            }
        }
        self.support.last().unwrap().0
    }
}

/// Antenna-gain model selector with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ScatteringModel {
    /// Narrow-beam model: main lobe uniform on `[delta, delta_prime]`, side
    /// lobe uniform on `[0, gamma]`.
    Sparse {
        delta: f64,
        delta_prime: f64,
        gamma: f64,
    },
    /// Zero-forcing model: main lobe a sum of `N` unit exponentials with `N`
    /// drawn from `diversity`, side lobe unit exponential.
    Rich { diversity: DiversityPmf },
}

impl ScatteringModel {
    pub fn kind(&self) -> ScatteringKind {
        match self {
            ScatteringModel::Sparse { .. } => ScatteringKind::Sparse,
            ScatteringModel::Rich { .. } => ScatteringKind::Rich,
        }
    }

    /// Default sparse parameters: `delta = 6`, `delta' = 10`, `gamma = 1`.
    pub fn sparse_default() -> Self {
        ScatteringModel::Sparse {
            delta: 6.0,
            delta_prime: 10.0,
            gamma: 1.0,
        }
    }

    /// Default rich parameters: diversity order fixed at 3.
    pub fn rich_default() -> Self {
        ScatteringModel::Rich {
            diversity: DiversityPmf::point_mass(3).expect("3 >= 2"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ScatteringModel::Sparse {
                delta,
                delta_prime,
                gamma,
            } => {
                ensure!(
                    *delta > 0.0 && delta.is_finite(),
                    "sparse delta must be finite and positive, got {delta}"
                );
                ensure!(
                    *delta_prime >= *delta && delta_prime.is_finite(),
                    "sparse delta' must satisfy delta' >= delta, got {delta_prime} < {delta}"
                );
                ensure!(
                    *gamma > 0.0 && gamma.is_finite(),
                    "sparse gamma must be finite and positive, got {gamma}"
                );
                Ok(())
            }
            ScatteringModel::Rich { diversity } => {
                // Re-validate in case the pmf was built by deserialization.
                DiversityPmf::new(diversity.support.clone()).map(|_| ())
            }
        }
    }
}

/// Gains and interferer serving distances for one network trial.
///
/// `main_lobe` is the serving base station's gain toward its own mobile.
/// Entry `i` of the three vectors belongs to interferer `i`: its side lobe
/// toward the tagged mobile, its own main lobe (toward its own mobile, which
/// sets its transmit power), and the distance to that mobile.
#[derive(Debug, Clone, PartialEq)]
pub struct GainDraw {
    pub main_lobe: f64,
    pub side_lobes: Vec<f64>,
    pub interferer_main_lobes: Vec<f64>,
    pub interferer_serving_distances: Vec<f64>,
}

impl GainDraw {
    pub fn len(&self) -> usize {
        self.side_lobes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side_lobes.is_empty()
    }
}

/// Transmit powers implied by channel inversion for one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDraw {
    /// Serving base station's power toward the tagged mobile.
    pub serving_power: f64,
    /// Interferer `i`'s power toward its own mobile.
    pub interferer_powers: Vec<f64>,
}

/// Draws the distance from a mobile to its nearest base station in a Poisson
/// field of the given density: `Pr(L > x) = exp(-pi density x^2)`.
pub fn sample_serving_distance<R: Rng + ?Sized>(density: f64, rng: &mut R) -> Result<f64> {
    ensure!(
        density > 0.0 && density.is_finite(),
        "serving-distance density must be finite and positive, got {density}"
    );
    let u = unit_positive(rng);
    Ok((-u.ln() / (std::f64::consts::PI * density)).sqrt())
}

/// Draws sparse-scattering gains for the tagged link and `n_interferers`
/// interferers. Per interferer the draw order is main lobe, side lobe,
/// serving distance.
pub fn sample_sparse_gains<R: Rng + ?Sized>(
    model: &ScatteringModel,
    n_interferers: usize,
    density: f64,
    rng: &mut R,
) -> Result<GainDraw> {
    let ScatteringModel::Sparse {
        delta,
        delta_prime,
        gamma,
    } = model
    else {
        return Err(Error::invalid("sample_sparse_gains needs a sparse model"));
    };
    model.validate()?;
    let span = delta_prime - delta;
    let draw_w = |rng: &mut R| delta + span * rng.gen::<f64>();
    let main_lobe = draw_w(rng);
    let mut side_lobes = Vec::with_capacity(n_interferers);
    let mut interferer_main_lobes = Vec::with_capacity(n_interferers);
    let mut interferer_serving_distances = Vec::with_capacity(n_interferers);
    for _ in 0..n_interferers {
        interferer_main_lobes.push(draw_w(rng));
        side_lobes.push(gamma * rng.gen::<f64>());
        interferer_serving_distances.push(sample_serving_distance(density, rng)?);
    }
    Ok(GainDraw {
        main_lobe,
        side_lobes,
        interferer_main_lobes,
        interferer_serving_distances,
    })
}

/// Draws rich-scattering gains for the tagged link and `n_interferers`
/// interferers. Each base station gets its own diversity order from the pmf;
/// per interferer the draw order is diversity, main lobe, side lobe, serving
/// distance.
pub fn sample_rich_gains<R: Rng + ?Sized>(
    model: &ScatteringModel,
    n_interferers: usize,
    density: f64,
    rng: &mut R,
) -> Result<GainDraw> {
    let ScatteringModel::Rich { diversity } = model else {
        return Err(Error::invalid("sample_rich_gains needs a rich model"));
    };
    model.validate()?;
    let draw_w = |rng: &mut R| {
        let n = diversity.sample(rng);
        (0..n).map(|_| exp1(rng)).sum::<f64>()
    };
    let main_lobe = draw_w(rng);
    let mut side_lobes = Vec::with_capacity(n_interferers);
    let mut interferer_main_lobes = Vec::with_capacity(n_interferers);
    let mut interferer_serving_distances = Vec::with_capacity(n_interferers);
    for _ in 0..n_interferers {
        interferer_main_lobes.push(draw_w(rng));
        side_lobes.push(exp1(rng));
        interferer_serving_distances.push(sample_serving_distance(density, rng)?);
    }
    Ok(GainDraw {
        main_lobe,
        side_lobes,
        interferer_main_lobes,
        interferer_serving_distances,
    })
}

/// Channel-inversion transmit power `omega * L^alpha / W`: the power that
/// delivers mean received power `omega` over a link of length `L` with main
/// lobe `W` under path-loss exponent `alpha`.
pub fn channel_inversion_power(
    omega: f64,
    serving_distance: f64,
    main_lobe: f64,
    alpha: f64,
) -> Result<f64> {
    ensure!(
        omega > 0.0 && omega.is_finite(),
        "omega must be finite and positive, got {omega}"
    );
    ensure!(
        serving_distance >= 0.0 && serving_distance.is_finite(),
        "serving distance must be finite and non-negative, got {serving_distance}"
    );
    ensure!(
        main_lobe > 0.0 && main_lobe.is_finite(),
        "main lobe must be finite and positive, got {main_lobe}"
    );
    ensure!(alpha > 2.0, "path-loss exponent must exceed 2, got {alpha}");
    Ok(omega * serving_distance.powf(alpha) / main_lobe)
}

/// Applies [`channel_inversion_power`] to the tagged link and every
/// interferer of a gain draw.
pub fn channel_inversion_powers(
    omega: f64,
    alpha: f64,
    serving_distance: f64,
    gains: &GainDraw,
) -> Result<PowerDraw> {
    let serving_power = channel_inversion_power(omega, serving_distance, gains.main_lobe, alpha)?;
    let mut interferer_powers = Vec::with_capacity(gains.len());
    for (l, w) in gains
        .interferer_serving_distances
        .iter()
        .zip(&gains.interferer_main_lobes)
    {
        interferer_powers.push(channel_inversion_power(omega, *l, *w, alpha)?);
    }
    Ok(PowerDraw {
        serving_power,
        interferer_powers,
    })
}

/// One draw of the zero-forcing main-lobe/side-lobe pair from first
/// principles, for validating the rich-scattering gain laws.
///
/// A base station with `q_antennas` antennas serves one mobile while nulling
/// the other `m_cluster - 1` mobiles of its cluster: it beamforms along the
/// projection of the served mobile's channel onto the orthogonal complement
/// of the others' channels. With independent standard complex Gaussian
/// channels the main lobe `|f* h_own|^2` is a sum of
/// `q_antennas - m_cluster + 1` unit exponentials and the side lobe
/// `|f* h_other|^2` toward any outside mobile is unit exponential.
///
/// Returns `(main_lobe, side_lobe)` from a single beamformer draw.
pub fn zf_gain_oracle<R: Rng + ?Sized>(
    q_antennas: usize,
    m_cluster: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    ensure!(q_antennas >= 1, "need at least one antenna");
    ensure!(m_cluster >= 1, "need at least one mobile in the cluster");
    ensure!(
        m_cluster <= q_antennas,
        "zero-forcing needs q_antennas >= m_cluster, got {q_antennas} < {m_cluster}"
    );
    let q = q_antennas;
    let draw_cn = |rng: &mut R| -> Vec<Complex64> {
        (0..q)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect()
    };

    let h_own = draw_cn(rng);
    // Orthonormalize the nulled channels (modified Gram-Schmidt), then strip
    // their span from the served channel.
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m_cluster - 1);
    for _ in 1..m_cluster {
        let mut v = draw_cn(rng);
        for e in &basis {
            let coef = inner(e, &v);
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= coef * ei;
            }
        }
        let norm = norm_sq(&v).sqrt();
        if norm < 1e-12 {
            return Err(Error::Numerical(
                "degenerate nulled-channel set in zero-forcing oracle".into(),
            ));
        }
        for vi in &mut v {
            *vi /= norm;
        }
        basis.push(v);
    }
    let mut residual = h_own.clone();
    for e in &basis {
        let coef = inner(e, &residual);
        for (ri, ei) in residual.iter_mut().zip(e) {
            *ri -= coef * ei;
        }
    }
    let main_lobe = norm_sq(&residual);
    if main_lobe < 1e-300 {
        return Err(Error::Numerical(
            "served channel lies in the nulled span".into(),
        ));
    }
    let scale = main_lobe.sqrt();
    let beam: Vec<Complex64> = residual.iter().map(|r| r / scale).collect();

    let h_other = draw_cn(rng);
    let side_lobe = inner(&beam, &h_other).norm_sqr();
    Ok((main_lobe, side_lobe))
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(ai, bi)| ai.conj() * bi).sum()
}

fn norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|ai| ai.norm_sqr()).sum()
}
