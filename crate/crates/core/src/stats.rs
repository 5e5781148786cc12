//! Statistical routines backing the validation suites: Kolmogorov-Smirnov
//! tests, Wilson score intervals, least-squares slopes, and a chi-square
//! goodness-of-fit test for Poisson counts.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{ensure, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Outcome of a distribution test: the observed statistic against its
/// critical value at the requested level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    pub statistic: f64,
    pub critical: f64,
    pub pass: bool,
}

/// Asymptotic Kolmogorov critical coefficient `c(level) = sqrt(-ln(level/2)/2)`.
fn ks_coefficient(level: f64) -> Result<f64> {
    ensure!(
        level > 0.0 && level < 1.0,
        "significance level must lie in (0, 1), got {level}"
    );
    Ok((-(level / 2.0).ln() / 2.0).sqrt())
}

/// One-sample Kolmogorov-Smirnov statistic of `samples` against the CDF `f`.
/// Sorts the sample buffer in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> Result<f64> {
    ensure!(!samples.is_empty(), "need at least one sample");
    ensure!(samples.iter().all(|s| s.is_finite()), "samples must be finite");
    samples.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// One-sample Kolmogorov-Smirnov test at the given significance level,
/// using the asymptotic critical value `c(level) / sqrt(n)`.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F, level: f64) -> Result<TestOutcome> {
    let statistic = ks_statistic(samples, cdf)?;
    let critical = ks_coefficient(level)? / (samples.len() as f64).sqrt();
    Ok(TestOutcome {
        statistic,
        critical,
        pass: statistic <= critical,
    })
}

/// Two-sample Kolmogorov-Smirnov test at the given significance level, with
/// critical value `c(level) sqrt((n + m) / (n m))`. Sorts both buffers.
pub fn ks2_test(a: &mut [f64], b: &mut [f64], level: f64) -> Result<TestOutcome> {
    ensure!(
        !a.is_empty() && !b.is_empty(),
        "both samples must be non-empty"
    );
    ensure!(
        a.iter().chain(b.iter()).all(|s| s.is_finite()),
        "samples must be finite"
    );
    a.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
    b.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
    let (n, m) = (a.len(), b.len());
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d: f64 = 0.0;
    while i < n && j < m {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let critical = ks_coefficient(level)? * ((n + m) as f64 / (n as f64 * m as f64)).sqrt();
    Ok(TestOutcome {
        statistic: d,
        critical,
        pass: d <= critical,
    })
}

/// Wilson score interval for a binomial proportion at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    ensure!(trials >= 1, "need at least one trial");
    ensure!(
        successes <= trials,
        "successes {successes} exceed trials {trials}"
    );
    ensure!(z > 0.0 && z.is_finite(), "z must be finite and positive");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // At the boundary counts the score interval is exactly one-sided.
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    Ok((lo, hi))
}

/// Rule-of-three upper 95% bound for an event never observed in `trials`
/// attempts.
pub fn rule_of_three(trials: u64) -> Result<f64> {
    ensure!(trials >= 1, "need at least one trial");
    Ok(3.0 / trials as f64)
}

/// Least-squares line fit; returns `(slope, intercept)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    ensure!(
        xs.len() == ys.len() && xs.len() >= 2,
        "need matching samples, at least two points"
    );
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    ensure!(sxx > 0.0, "abscissae are degenerate");
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Chi-square goodness-of-fit of observed counts against a Poisson law with
/// the given mean, pooling cells so every expected count is at least 5.
pub fn poisson_gof(counts: &[u64], mean: f64, level: f64) -> Result<TestOutcome> {
    ensure!(counts.len() >= 10, "need a reasonable number of observations");
    ensure!(
        mean > 0.0 && mean.is_finite(),
        "mean must be finite and positive, got {mean}"
    );
    ensure!(
        level > 0.0 && level < 1.0,
        "significance level must lie in (0, 1), got {level}"
    );
    let n = counts.len() as f64;
    let max_k = *counts.iter().max().expect("non-empty") as usize;

    // Poisson pmf by the stable upward recursion p_{k+1} = p_k * mean / (k+1).
    let mut pmf = Vec::with_capacity(max_k + 1);
    let mut p = (-mean).exp();
    pmf.push(p);
    for k in 0..max_k {
        p *= mean / (k as f64 + 1.0);
        pmf.push(p);
    }

    let mut observed = vec![0u64; max_k + 1];
    for &c in counts {
        observed[c as usize] += 1;
    }

    // Pool consecutive cells until each group expects at least 5; the final
    // group absorbs the upper tail mass.
    let mut groups: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    let mut acc_obs = 0.0;
    let mut acc_exp = 0.0;
    for k in 0..=max_k {
        acc_obs += observed[k] as f64;
        acc_exp += pmf[k] * n;
        if acc_exp >= 5.0 {
            groups.push((acc_obs, acc_exp));
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    let tail_mass: f64 = 1.0 - pmf.iter().sum::<f64>();
    acc_exp += tail_mass.max(0.0) * n;
    if acc_exp > 0.0 || acc_obs > 0.0 {
        match groups.last_mut() {
            Some(last) if acc_exp < 5.0 => {
                last.0 += acc_obs;
                last.1 += acc_exp;
            }
            _ => groups.push((acc_obs, acc_exp)),
        }
    }
    ensure!(groups.len() >= 2, "too few cells after pooling");

    let statistic: f64 = groups
        .iter()
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = (groups.len() - 1) as f64;
    let chi = ChiSquared::new(dof)
        .map_err(|e| crate::error::Error::Numerical(format!("chi-square dof {dof}: {e}")))?;
    let critical = chi.inverse_cdf(1.0 - level);
    Ok(TestOutcome {
        statistic,
        critical,
        pass: statistic <= critical,
    })
}
