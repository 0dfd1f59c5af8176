//! Decoder-side estimation of Pauli expectations from delivered shadows.
//!
//! For an observable with support `S`, a record is *compatible* when its
//! basis agrees with the observable on every qubit of `S`. The raw estimate
//! sums the support parities `prod_j (-1)^b_j` of compatible records and
//! divides by the total record count `N`, not by the number of compatible
//! records. Its mean is `3^-|S| (1 - 2p)^|S| <O>`, so scaling by
//! `a = 3^|S| / (1 - 2p)^|S|` removes both the basis-selection and the
//! bit-flip attenuation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qsim::{BasisString, PauliObservable};

use super::TransmissionOutcome;

/// Indices of records whose basis matches `obs` on its whole support.
pub fn compatibility_set(bases: &[BasisString], obs: &PauliObservable) -> Result<Vec<usize>> {
    let n = obs.num_qubits();
    if let Some(b) = bases.iter().find(|b| b.num_qubits() != n) {
        return Err(Error::DimensionMismatch { expected: n, actual: b.num_qubits() });
    }
    Ok(bases
        .iter()
        .enumerate()
        .filter(|(_, b)| obs.terms().iter().all(|&(q, p)| b.letters()[q] == p))
        .map(|(i, _)| i)
        .collect())
}

/// `(1/N) sum_{i in compat} prod_{j in S} (-1)^{b_ij}` with `N = outcomes.len()`.
pub fn biased_estimate(outcomes: &[Vec<u8>], compat: &[usize], obs: &PauliObservable) -> f64 {
    if outcomes.is_empty() {
        return 0.0;
    }
    let sum: i64 = compat
        .iter()
        .map(|&i| {
            let bits = &outcomes[i];
            let parity = obs.support().fold(0u8, |acc, q| acc ^ (bits[q] & 1));
            if parity == 0 {
                1
            } else {
                -1
            }
        })
        .sum();
    sum as f64 / outcomes.len() as f64
}

fn check_p_err(p_err: f64) -> Result<()> {
    if (0.0..0.5).contains(&p_err) {
        Ok(())
    } else {
        Err(Error::Degenerate(p_err))
    }
}

/// `3^w / (1 - 2 p_err)^w`.
pub fn debias_factor(weight: usize, p_err: f64) -> Result<f64> {
    check_p_err(p_err)?;
    if weight == 0 {
        return Err(Error::InvalidParameter("observable weight must be at least 1"));
    }
    let w = weight as i32;
    Ok(libm::pow(3.0, f64::from(w)) / libm::pow(1.0 - 2.0 * p_err, f64::from(w)))
}

pub fn debiased_estimate(biased: f64, weight: usize, p_err: f64) -> Result<f64> {
    Ok(debias_factor(weight, p_err)? * biased)
}

/// Probability that an even number of `weight` independent bits flip.
pub fn p_even(weight: usize, p_err: f64) -> f64 {
    (1.0 + libm::pow(1.0 - 2.0 * p_err, weight as f64)) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableEstimate {
    pub estimate: f64,
    pub biased: f64,
    pub compat_count: usize,
    pub debias_factor: f64,
    /// Set by [`EstimateReport::score`] once the true value is known.
    pub within_tolerance: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimateReport {
    pub copies: usize,
    pub p_err: f64,
    pub entries: Vec<ObservableEstimate>,
}

impl EstimateReport {
    pub fn estimates(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.estimate)
    }

    /// Marks each entry against its true expectation; returns whether every
    /// entry is within `epsilon`.
    pub fn score(&mut self, truths: &[f64], epsilon: f64) -> Result<bool> {
        if truths.len() != self.entries.len() {
            return Err(Error::LengthMismatch { expected: self.entries.len(), actual: truths.len() });
        }
        let mut all = true;
        for (entry, &truth) in self.entries.iter_mut().zip(truths) {
            let ok = (entry.estimate - truth).abs() <= epsilon;
            entry.within_tolerance = Some(ok);
            all &= ok;
        }
        Ok(all)
    }
}

/// Estimates every observable from a delivered transmission.
pub fn estimate_all(
    outcome: &TransmissionOutcome,
    observables: &[PauliObservable],
) -> Result<EstimateReport> {
    let (Some(bases), Some(bits)) = (outcome.bases(), outcome.outcome_bits()) else {
        return Err(Error::EstimateOnOutage);
    };
    let p_err = outcome.p_err();
    let entries = observables
        .iter()
        .map(|obs| {
            let compat = compatibility_set(bases, obs)?;
            let biased = biased_estimate(bits, &compat, obs);
            let factor = debias_factor(obs.weight(), p_err)?;
            Ok(ObservableEstimate {
                estimate: factor * biased,
                biased,
                compat_count: compat.len(),
                debias_factor: factor,
                within_tolerance: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimateReport { copies: bases.len(), p_err, entries })
}
