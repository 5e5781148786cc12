//! Adaptive Simpson quadrature for the tail integrals in `analytics`.

use crate::error::{Error, Result};

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` with adaptive
/// Simpson refinement. The interval is pre-split into equal panels so a
/// feature much narrower than the interval cannot slip between the initial
/// sample points; each panel then refines adaptively. Fails if any panel
/// cannot meet its share of the tolerance within the depth limit.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    const PRE_SPLIT: usize = 16;
    let h = (b - a) / PRE_SPLIT as f64;
    let panel_tol = tol / PRE_SPLIT as f64;
    let mut total = 0.0;
    for i in 0..PRE_SPLIT {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == PRE_SPLIT { b } else { lo + h };
        let flo = f(lo);
        let fhi = f(hi);
        let m = 0.5 * (lo + hi);
        let fm = f(m);
        let whole = simpson(lo, hi, flo, fm, fhi);
        total += panel(f, lo, hi, flo, fm, fhi, whole, panel_tol, 60, 4)?;
    }
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn panel<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    force: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // `force` keeps the first levels subdividing unconditionally, so an
    // apparent early agreement cannot hide structure between sample points.
    if force == 0 && delta.abs() <= 15.0 * tol {
        // Richardson extrapolation of the two half-panel estimates.
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numerical(format!(
            "quadrature failed to converge on [{a}, {b}] (residual {delta:e})"
        )));
    }
    let half_tol = 0.5 * tol;
    let next_force = force.saturating_sub(1);
    let l = panel(f, a, m, fa, flm, fm, left, half_tol, depth - 1, next_force)?;
    let r = panel(f, m, b, fm, frm, fb, right, half_tol, depth - 1, next_force)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let v = adaptive_simpson(&|x| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-11);
    }

    #[test]
    fn integrates_decaying_exponential() {
        let v = adaptive_simpson(&|x: f64| (-x).exp(), 0.0, 40.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn handles_sharp_peak() {
        // Narrow Gaussian bump inside a wide interval.
        let f = |x: f64| (-(x - 5.0) * (x - 5.0) * 400.0).exp();
        let v = adaptive_simpson(&f, 0.0, 100.0, 1e-12).unwrap();
        let exact = (std::f64::consts::PI / 400.0).sqrt();
        assert!((v - exact).abs() < 1e-10, "got {v} want {exact}");
    }
}
