//! Copy-count guarantee from Hoeffding's inequality plus a union bound over
//! the observables.
//!
//! Each debiased single-copy term lies in `[-a, a]` with
//! `a = 3^w / (1 - 2p)^w`, so for `N` copies
//! `Pr(|o_hat - <O>| > eps) < 2 exp(-N eps^2 / (2 a^2))`, and requiring
//! `M` times that to be at most `delta` gives
//! `N >= 2 * 9^w * ln(2M / delta) / ((1 - 2p)^(2w) * eps^2)`.

use crate::error::{Error, Result};

fn check(w: usize, m: usize, epsilon: f64, delta: f64, p_err: f64) -> Result<()> {
    if w == 0 || m == 0 {
        return Err(Error::InvalidParameter("weight and observable count must be at least 1"));
    }
    if !(epsilon > 0.0) || !(delta > 0.0) {
        return Err(Error::InvalidParameter("epsilon and delta must be positive"));
    }
    if !(0.0..0.5).contains(&p_err) {
        return Err(Error::Degenerate(p_err));
    }
    Ok(())
}

/// Smallest `N` meeting the bound; 0 when `delta >= 2M` makes it vacuous.
pub fn min_copies(w: usize, m: usize, epsilon: f64, delta: f64, p_err: f64) -> Result<u64> {
    check(w, m, epsilon, delta, p_err)?;
    let log_term = libm::log(2.0 * m as f64 / delta);
    if log_term <= 0.0 {
        return Ok(0);
    }
    let attenuation = libm::pow(1.0 - 2.0 * p_err, 2.0 * w as f64);
    let n = 2.0 * libm::pow(9.0, w as f64) * log_term / (attenuation * epsilon * epsilon);
    Ok(libm::ceil(n) as u64)
}

/// Union-bound failure probability guaranteed with `copies` copies, capped at 1.
pub fn hoeffding_failure_bound(copies: u64, w: usize, m: usize, epsilon: f64, p_err: f64) -> Result<f64> {
    check(w, m, epsilon, 1.0, p_err)?;
    let a2 = libm::pow(9.0, w as f64) / libm::pow(1.0 - 2.0 * p_err, 2.0 * w as f64);
    let bound = 2.0 * m as f64 * libm::exp(-(copies as f64) * epsilon * epsilon / (2.0 * a2));
    Ok(bound.min(1.0))
}
