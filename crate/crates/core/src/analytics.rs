//! Closed-form laws, tail formulas, and outage-probability-exponent (OPE)
//! bounds.
//!
//! Everything here is deterministic. Tail expressions that are only
//! asymptotically valid are named and documented as asymptotes; the test
//! suites hold them to correspondingly loose, one-sided tolerances.

use statrs::function::gamma::gamma;

use crate::channel::ScatteringKind;
use crate::error::{ensure, Error, Result};
use crate::geometry::SQRT_3;
use crate::quad::adaptive_simpson;

/// Model parameters shared by the closed-form expressions.
///
/// `nu` and `pr_n_equals_nu` describe the minimum diversity order of the
/// rich-scattering model and its probability; the sparse gain supports are
/// `[delta, delta_prime]` for main lobes and `[0, gamma]` for side lobes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub density: f64,
    pub alpha: f64,
    pub theta: f64,
    pub omega: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub gamma: f64,
    pub nu: u32,
    pub pr_n_equals_nu: f64,
}

impl ModelParams {
    /// Baseline parameter set: density `1e-2`, path-loss exponent 4, SIR
    /// threshold 3, unit mean received power, sparse supports `[6, 10]` and
    /// `[0, 1]`, diversity order fixed at 3.
    pub fn baseline() -> Self {
        ModelParams {
            density: 1e-2,
            alpha: 4.0,
            theta: 3.0,
            omega: 1.0,
            delta: 6.0,
            delta_prime: 10.0,
            gamma: 1.0,
            nu: 3,
            pr_n_equals_nu: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.density > 0.0 && self.density.is_finite(),
            "density must be finite and positive, got {}",
            self.density
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
        ensure!(
            self.delta > 0.0 && self.delta.is_finite(),
            "delta must be finite and positive, got {}",
            self.delta
        );
        ensure!(
            self.delta_prime >= self.delta && self.delta_prime.is_finite(),
            "delta_prime must satisfy delta' >= delta"
        );
        ensure!(
            self.gamma > 0.0 && self.gamma.is_finite(),
            "gamma must be finite and positive, got {}",
            self.gamma
        );
        ensure!(self.nu >= 2, "nu must be at least 2, got {}", self.nu);
        ensure!(
            self.pr_n_equals_nu > 0.0 && self.pr_n_equals_nu <= 1.0,
            "pr_n_equals_nu must lie in (0, 1], got {}",
            self.pr_n_equals_nu
        );
        Ok(())
    }
}

/// Lower/upper pair of an asymptotic sandwich bound, with the parameter
/// regime it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub regime: &'static str,
}

/// CCDF of the distance from a mobile to its nearest base station:
/// `exp(-pi density x^2)`.
pub fn serving_distance_ccdf(x: f64, density: f64) -> Result<f64> {
    ensure!(x >= 0.0, "distance must be non-negative, got {x}");
    ensure!(
        density > 0.0 && density.is_finite(),
        "density must be finite and positive, got {density}"
    );
    Ok((-std::f64::consts::PI * density * x * x).exp())
}

/// CDF of the distance from a uniform point in a hexagon to the hexagon
/// boundary: `1 - (1 - x/apothem)^2`.
pub fn edge_distance_cdf(x: f64, apothem: f64) -> Result<f64> {
    ensure!(
        apothem > 0.0 && apothem.is_finite(),
        "apothem must be finite and positive, got {apothem}"
    );
    ensure!(
        (0.0..=apothem).contains(&x),
        "edge distance must lie in [0, apothem], got {x}"
    );
    let t = 1.0 - x / apothem;
    Ok(1.0 - t * t)
}

/// Constant in the linear-in-`ell` OPE bounds for a cluster-center mobile
/// under sparse scattering: `(pi / (2 sqrt 3)) (delta / (theta gamma))^(2/alpha)`.
pub fn c1(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    let ratio = params.delta / (params.theta * params.gamma);
    Ok(std::f64::consts::PI / (2.0 * SQRT_3) * ratio.powf(2.0 / params.alpha))
}

/// Constant in the `ell^(alpha/4)` lower OPE bound for a cluster-center
/// mobile under sparse scattering when `2 < alpha <= 4`.
pub fn c2(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    let a = params.alpha;
    let num = std::f64::consts::PI
        * params.density.powf(1.0 - a / 4.0)
        * params.delta.powf(2.0 / a);
    let den = params.omega.powf((4.0 - a) / (2.0 * a))
        * params.theta.sqrt()
        * (2.0 * SQRT_3).powf(a / 4.0)
        * params.gamma.powf(2.0 / a);
    Ok(num / den)
}

/// OPE sandwich for a cluster-center mobile under sparse scattering.
///
/// For `alpha > 4` the bounds are `[c1 ell, (4 c1 / 3) ell]`; for
/// `2 < alpha <= 4` the lower bound weakens to `c2 ell^(alpha/4)`.
pub fn ope_bounds_cc_sparse(ell: f64, params: &ModelParams) -> Result<BoundPair> {
    params.validate()?;
    ensure!(
        ell > 0.0 && ell.is_finite(),
        "cluster size must be finite and positive, got {ell}"
    );
    let c1 = c1(params)?;
    let upper = 4.0 * c1 / 3.0 * ell;
    if params.alpha > 4.0 {
        Ok(BoundPair {
            lower: c1 * ell,
            upper,
            regime: "alpha > 4",
        })
    } else {
        let c2 = c2(params)?;
        Ok(BoundPair {
            lower: c2 * ell.powf(params.alpha / 4.0),
            upper,
            regime: "2 < alpha <= 4",
        })
    }
}

/// OPE sandwich for the typical mobile (either scattering model):
/// `[(1/2)(1 - 2/alpha) ln ell, (1/2) ln ell]`.
pub fn ope_bounds_typical(ell: f64, alpha: f64) -> Result<BoundPair> {
    ensure!(
        ell >= 1.0 && ell.is_finite(),
        "cluster size must be at least 1, got {ell}"
    );
    ensure!(alpha > 2.0, "alpha must exceed 2, got {alpha}");
    let log_ell = ell.ln();
    Ok(BoundPair {
        lower: 0.5 * (1.0 - 2.0 / alpha) * log_ell,
        upper: 0.5 * log_ell,
        regime: "typical log law",
    })
}

/// OPE sandwich for a cluster-center mobile under rich scattering:
/// `[(alpha nu / 2 - 1) ln ell, (alpha nu / 2) ln ell]`.
pub fn ope_bounds_cc_rich(ell: f64, alpha: f64, nu: u32) -> Result<BoundPair> {
    ensure!(
        ell >= 1.0 && ell.is_finite(),
        "cluster size must be at least 1, got {ell}"
    );
    ensure!(alpha > 2.0, "alpha must exceed 2, got {alpha}");
    ensure!(nu >= 2, "nu must be at least 2, got {nu}");
    let log_ell = ell.ln();
    let half = alpha * nu as f64 / 2.0;
    Ok(BoundPair {
        lower: (half - 1.0) * log_ell,
        upper: half * log_ell,
        regime: "cluster-center rich log law",
    })
}

/// Asymptotic throughput of a cluster-center mobile, in nats:
/// `(alpha / 2) ln ell`.
pub fn throughput_scaling(ell: f64, alpha: f64) -> Result<f64> {
    ensure!(
        ell >= 1.0 && ell.is_finite(),
        "cluster size must be at least 1, got {ell}"
    );
    ensure!(
        alpha > 0.0 && alpha.is_finite(),
        "alpha must be finite and positive, got {alpha}"
    );
    Ok(alpha / 2.0 * ell.ln())
}

/// Density of the main-to-side-lobe ratio `beta = W / G` when
/// `W ~ Uniform[delta, delta']` and `G ~ Uniform[0, gamma]`.
///
/// Piecewise rational with support `[delta/gamma, infinity)`:
/// `gamma / (2 (delta' - delta)) (1 - (delta / (gamma b))^2)` on the inner
/// piece and `(delta + delta') / (2 gamma b^2)` beyond `delta'/gamma`.
/// The inner piece is empty in the degenerate case `delta = delta'`.
pub fn beta_ratio_density(b: f64, delta: f64, delta_prime: f64, gamma: f64) -> Result<f64> {
    ensure!(
        delta > 0.0 && delta_prime >= delta && gamma > 0.0,
        "beta density needs 0 < delta <= delta' and gamma > 0"
    );
    ensure!(b.is_finite(), "ratio must be finite, got {b}");
    if b < delta / gamma {
        return Ok(0.0);
    }
    if b >= delta_prime / gamma {
        return Ok((delta + delta_prime) / (2.0 * gamma * b * b));
    }
    let r = delta / (gamma * b);
    Ok(gamma / (2.0 * (delta_prime - delta)) * (1.0 - r * r))
}

/// Exact tail of one interferer's received-power factor `P * G` under sparse
/// scattering, by quadrature of
/// `integral exp(-pi density (tau x / omega)^(2/alpha)) f_beta(tau) d tau`
/// over the ratio density, to absolute tolerance `1e-10`.
pub fn tail_pg_sparse_quadrature(x: f64, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    ensure!(
        x > 0.0 && x.is_finite(),
        "threshold must be finite and positive, got {x}"
    );
    let (delta, dp, gamma) = (params.delta, params.delta_prime, params.gamma);
    let two_over_alpha = 2.0 / params.alpha;
    // exp(-pi lam (tau x / omega)^(2/a)) = exp(-c tau^(2/a))
    let c = std::f64::consts::PI * params.density * (x / params.omega).powf(two_over_alpha);
    let integrand = |tau: f64| -> f64 {
        let weight = (-c * tau.powf(two_over_alpha)).exp();
        weight * beta_ratio_density(tau, delta, dp, gamma).unwrap_or(0.0)
    };

    const ABS_TOL: f64 = 1e-10;
    let panel_tol = 2e-12;
    let lo = delta / gamma;
    let knee = dp / gamma;
    let mut total = 0.0;
    if knee > lo {
        total += adaptive_simpson(&integrand, lo, knee, panel_tol)?;
    }
    // Outer piece on dyadic panels [a, 2a]. Truncation is controlled by the
    // analytic remainder bound exp(-c a^(2/a)) * Pr(beta > a) with
    // Pr(beta > a) = (delta + delta') / (2 gamma a); stop once it is far
    // below tolerance and the integrand itself is negligible next to its
    // peak value.
    let peak = integrand(lo.max(knee)).max(integrand(lo)).max(1e-300);
    let mut a = knee;
    for _ in 0..200 {
        let remainder = (-c * a.powf(two_over_alpha)).exp() * (delta + dp) / (2.0 * gamma * a);
        if remainder < 0.05 * ABS_TOL && integrand(a) < 1e-16 * peak {
            return Ok(total.min(1.0));
        }
        let b = 2.0 * a;
        total += adaptive_simpson(&integrand, a, b, panel_tol)?;
        a = b;
    }
    Err(Error::Numerical(format!(
        "tail quadrature did not truncate by tau = {a:e} (x = {x})"
    )))
}

/// Large-`x` exponent of the sparse `P * G` tail:
/// `-ln Pr(P G > x) ~ pi density (delta / (gamma omega))^(2/alpha) x^(2/alpha)`.
pub fn sparse_tail_exponent(x: f64, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    ensure!(
        x > 0.0 && x.is_finite(),
        "threshold must be finite and positive, got {x}"
    );
    let scale = params.delta / (params.gamma * params.omega);
    Ok(std::f64::consts::PI
        * params.density
        * scale.powf(2.0 / params.alpha)
        * x.powf(2.0 / params.alpha))
}

/// Asymptotic tail of one interferer's received-power factor `P * G` under
/// rich scattering:
/// `omega^nu Gamma(alpha nu / 2 + 1) Pr(N = nu) (pi density)^(-alpha nu / 2) x^-nu`.
///
/// Valid for large `x` only; the exact tail decays slower at moderate `x`.
pub fn tail_pg_rich(x: f64, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    ensure!(
        x > 0.0 && x.is_finite(),
        "threshold must be finite and positive, got {x}"
    );
    let nu = params.nu as f64;
    let half = params.alpha * nu / 2.0;
    Ok(params.omega.powf(nu)
        * gamma(half + 1.0)
        * params.pr_n_equals_nu
        * (std::f64::consts::PI * params.density).powf(-half)
        * x.powf(-nu))
}

/// Which asymptotic regime a compound-interference tail value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZnRegime {
    /// Sparse, `alpha > 4`: value is the exponent order of
    /// `-ln Pr(Z > ell^(alpha/2) x)`, tight on both sides.
    SparseExponent,
    /// Sparse, `2 < alpha <= 4`: value is a lower bound on that exponent.
    SparseExponentFloor,
    /// Rich: value is the tail probability itself.
    RichTail,
}

/// Asymptotic description of the tail of the compound interference load
/// `Z` past the threshold `ell^(alpha/2) x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZnAsymptote {
    pub value: f64,
    pub regime: ZnRegime,
}

impl ZnAsymptote {
    /// True when `value` is an exponent of `-ln Pr(...)` rather than a
    /// probability.
    pub fn is_exponent(&self) -> bool {
        matches!(
            self.regime,
            ZnRegime::SparseExponent | ZnRegime::SparseExponentFloor
        )
    }
}

/// Asymptote for the tail of the compound interference load past
/// `ell^(alpha/2) x`.
///
/// Sparse: exponent `pi density (delta/(gamma omega))^(2/alpha) ell x^(2/alpha)`
/// when `alpha > 4`, weakening to the floor
/// `pi density (delta/(gamma omega))^(2/alpha) ell^(alpha/4) sqrt(x)` for
/// `2 < alpha <= 4`. Rich: tail probability
/// `omega^nu Gamma(alpha nu/2 + 1) Pr(N=nu) (pi density)^(-alpha nu/2) x^-nu ell^(1 - alpha nu/2)`.
pub fn zn_tail_asymptote(
    x: f64,
    ell: f64,
    params: &ModelParams,
    scattering: ScatteringKind,
) -> Result<ZnAsymptote> {
    params.validate()?;
    ensure!(
        x > 0.0 && x.is_finite(),
        "threshold must be finite and positive, got {x}"
    );
    ensure!(
        ell > 0.0 && ell.is_finite(),
        "cluster size must be finite and positive, got {ell}"
    );
    match scattering {
        ScatteringKind::Sparse => {
            let scale = params.delta / (params.gamma * params.omega);
            let base = std::f64::consts::PI * params.density * scale.powf(2.0 / params.alpha);
            if params.alpha > 4.0 {
                Ok(ZnAsymptote {
                    value: base * ell * x.powf(2.0 / params.alpha),
                    regime: ZnRegime::SparseExponent,
                })
            } else {
                Ok(ZnAsymptote {
                    value: base * ell.powf(params.alpha / 4.0) * x.sqrt(),
                    regime: ZnRegime::SparseExponentFloor,
                })
            }
        }
        ScatteringKind::Rich => {
            let half = params.alpha * params.nu as f64 / 2.0;
            let value = tail_pg_rich(x, params)? * ell.powf(1.0 - half);
            Ok(ZnAsymptote {
                value,
                regime: ZnRegime::RichTail,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn serving_ccdf_examples() {
        assert_eq!(serving_distance_ccdf(0.0, 1e-2).unwrap(), 1.0);
        let v = serving_distance_ccdf(10.0, 1e-2).unwrap();
        assert!((v - (-PI).exp()).abs() < 1e-15, "got {v}");
        let mut prev = 1.0;
        for i in 1..200 {
            let v = serving_distance_ccdf(i as f64, 1e-2).unwrap();
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
        assert!(serving_distance_ccdf(-1.0, 1e-2).is_err());
    }

    #[test]
    fn edge_cdf_examples() {
        assert_eq!(edge_distance_cdf(0.0, 4.0).unwrap(), 0.0);
        assert_eq!(edge_distance_cdf(4.0, 4.0).unwrap(), 1.0);
        assert!((edge_distance_cdf(2.0, 4.0).unwrap() - 0.75).abs() < 1e-15);
        assert!(edge_distance_cdf(4.1, 4.0).is_err());
        assert!(edge_distance_cdf(-0.1, 4.0).is_err());
    }

    #[test]
    fn c1_matches_baseline_value() {
        let v = c1(&ModelParams::baseline()).unwrap();
        let expect = PI / (2.0 * SQRT_3) * 2f64.sqrt();
        assert!((v - expect).abs() < 1e-15);
        assert!((v - 1.282549830161864).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn c1_ratio_one_is_alpha_free() {
        for &alpha in &[2.5, 3.0, 4.0, 5.5] {
            let params = ModelParams {
                delta: 3.0,
                delta_prime: 3.0,
                theta: 3.0,
                gamma: 1.0,
                alpha,
                ..ModelParams::baseline()
            };
            let v = c1(&params).unwrap();
            assert!((v - PI / (2.0 * SQRT_3)).abs() < 1e-15, "alpha {alpha}: {v}");
        }
    }

    #[test]
    fn c2_at_alpha_4_ignores_omega_and_meets_c1() {
        let base = ModelParams::baseline();
        let other = ModelParams {
            omega: 7.0,
            ..base
        };
        assert_eq!(c2(&base).unwrap(), c2(&other).unwrap());
        // At the baseline the two constants coincide.
        assert!((c2(&base).unwrap() - c1(&base).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn cc_sparse_bounds_by_regime() {
        let heavy = ModelParams {
            alpha: 5.0,
            ..ModelParams::baseline()
        };
        for &ell in &[0.5, 1.0, 3.0, 12.0] {
            let b = ope_bounds_cc_sparse(ell, &heavy).unwrap();
            assert!((b.upper / b.lower - 4.0 / 3.0).abs() < 1e-12);
            assert_eq!(b.regime, "alpha > 4");
        }
        let base = ModelParams::baseline();
        let b = ope_bounds_cc_sparse(6.0, &base).unwrap();
        assert!((b.lower - c2(&base).unwrap() * 6.0).abs() < 1e-12);
        assert!((b.upper - 4.0 * c1(&base).unwrap() / 3.0 * 6.0).abs() < 1e-12);
        assert_eq!(b.regime, "2 < alpha <= 4");
        let tiny = ope_bounds_cc_sparse(1e-12, &base).unwrap();
        assert!(tiny.lower < 1e-9 && tiny.upper < 1e-9);
        let bad = ModelParams {
            alpha: 2.0,
            ..base
        };
        assert!(ope_bounds_cc_sparse(1.0, &bad).is_err());
    }

    #[test]
    fn typical_bounds_examples() {
        let b = ope_bounds_typical(1.0, 4.0).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        let e2 = (2.0f64).exp();
        let b = ope_bounds_typical(e2, 4.0).unwrap();
        assert!((b.lower - 0.5).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
        // Bounds close up as alpha grows.
        let b = ope_bounds_typical(e2, 1e9).unwrap();
        assert!((b.upper - b.lower) < 1e-8);
        assert!(ope_bounds_typical(0.5, 4.0).is_err());
        assert!(ope_bounds_typical(2.0, 2.0).is_err());
    }

    #[test]
    fn cc_rich_bounds_examples() {
        let b = ope_bounds_cc_rich(1.0, 4.0, 3).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        for &ell in &[2.0, 5.0, 9.0] {
            let b = ope_bounds_cc_rich(ell, 4.0, 3).unwrap();
            assert!((b.lower - 5.0 * ell.ln()).abs() < 1e-12);
            assert!((b.upper - 6.0 * ell.ln()).abs() < 1e-12);
            assert!((b.upper - b.lower - ell.ln()).abs() < 1e-12);
        }
        let b = ope_bounds_cc_rich(7.0, 3.0, 5).unwrap();
        assert!((b.upper - b.lower - 7f64.ln()).abs() < 1e-12);
        assert!(ope_bounds_cc_rich(2.0, 4.0, 1).is_err());
    }

    #[test]
    fn throughput_examples() {
        assert_eq!(throughput_scaling(1.0, 4.0).unwrap(), 0.0);
        let v = throughput_scaling(std::f64::consts::E, 4.0).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let a = throughput_scaling(5.0, 3.0).unwrap();
        let b = throughput_scaling(5.0, 6.0).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
        assert!(throughput_scaling(0.9, 4.0).is_err());
    }

    #[test]
    fn beta_density_integrates_to_one() {
        // Riemann check of the closed-form pieces plus the exact tail mass.
        let (d, dp, g) = (6.0, 10.0, 1.0);
        let n = 400_000;
        let (lo, hi) = (d / g, 5.0e4);
        let h = (hi - lo) / n as f64;
        let mut mass = 0.0;
        for i in 0..n {
            let b = lo + (i as f64 + 0.5) * h;
            mass += beta_ratio_density(b, d, dp, g).unwrap() * h;
        }
        mass += (d + dp) / (2.0 * g * hi);
        assert!((mass - 1.0).abs() < 1e-4, "got {mass}");
        assert_eq!(beta_ratio_density(5.9, d, dp, g).unwrap(), 0.0);
    }

    #[test]
    fn beta_density_handles_degenerate_support() {
        // delta = delta': beta = delta / G with G uniform.
        let f = beta_ratio_density(12.0, 6.0, 6.0, 1.0).unwrap();
        assert!((f - 6.0 / 144.0).abs() < 1e-15, "got {f}");
        assert_eq!(beta_ratio_density(5.0, 6.0, 6.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sparse_tail_tends_to_one_for_tiny_threshold() {
        let v = tail_pg_sparse_quadrature(1e-300, &ModelParams::baseline()).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn sparse_tail_is_monotone() {
        let params = ModelParams::baseline();
        let mut prev = 1.0;
        for &x in &[1.0, 10.0, 100.0, 1000.0, 10000.0] {
            let v = tail_pg_sparse_quadrature(x, &params).unwrap();
            assert!(v <= prev && v >= 0.0, "x {x}: {v} after {prev}");
            prev = v;
        }
    }

    #[test]
    fn rich_tail_coefficient_and_slope() {
        let params = ModelParams::baseline();
        let coeff = 720.0 / (PI * 1e-2).powi(6);
        let v = tail_pg_rich(1.0, &params).unwrap();
        assert!((v / coeff - 1.0).abs() < 1e-12, "got {v} want {coeff}");
        // Pure power law: x^-3.
        let r = tail_pg_rich(10.0, &params).unwrap() / v;
        assert!((r - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn zn_sparse_exponent_is_linear_in_ell_when_heavy() {
        let params = ModelParams {
            alpha: 5.0,
            ..ModelParams::baseline()
        };
        let a = zn_tail_asymptote(2.0, 1.0, &params, ScatteringKind::Sparse).unwrap();
        let b = zn_tail_asymptote(2.0, 2.0, &params, ScatteringKind::Sparse).unwrap();
        assert_eq!(a.regime, ZnRegime::SparseExponent);
        assert!(a.is_exponent());
        assert!((b.value / a.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zn_sparse_floor_regime_at_moderate_alpha() {
        let params = ModelParams::baseline();
        let a = zn_tail_asymptote(4.0, 3.0, &params, ScatteringKind::Sparse).unwrap();
        assert_eq!(a.regime, ZnRegime::SparseExponentFloor);
        let expect = PI * 1e-2 * 6f64.sqrt() * 3f64.powf(1.0) * 2.0;
        assert!((a.value - expect).abs() < 1e-12, "got {}", a.value);
    }

    #[test]
    fn zn_rich_tail_cancels_ell_factor() {
        let params = ModelParams::baseline();
        let a = zn_tail_asymptote(5.0, 1.0, &params, ScatteringKind::Rich).unwrap();
        let b = zn_tail_asymptote(5.0, 2.0, &params, ScatteringKind::Rich).unwrap();
        assert_eq!(a.regime, ZnRegime::RichTail);
        assert!(!a.is_exponent());
        // alpha nu / 2 - 1 = 5 at the baseline.
        assert!((b.value * 2f64.powf(5.0) / a.value - 1.0).abs() < 1e-12);
        assert!(zn_tail_asymptote(0.0, 1.0, &params, ScatteringKind::Rich).is_err());
    }
}
