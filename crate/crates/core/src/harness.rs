//! Experiment building blocks that need no I/O: observable sampling,
//! budget matching between schemes, interval estimates and seed derivation.

use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng;

use crate::baselines::CqcrConfig;
use crate::error::{Error, Result};
use crate::fec::{ChannelSpec, CodeSpec};
use crate::protocol::UepConfig;
use crate::qsim::{Pauli, PauliObservable};

/// How observable weights are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Uniform over `1..=max`.
    UpTo(usize),
    Fixed(usize),
}

impl WeightMode {
    pub fn max_weight(self) -> usize {
        match self {
            WeightMode::UpTo(w) | WeightMode::Fixed(w) => w,
        }
    }
}

/// Random Pauli observables: weight per `mode`, support uniform without
/// replacement, letters uniform. Duplicates are allowed.
pub fn sample_observables<R: Rng + ?Sized>(
    n: usize,
    count: usize,
    mode: WeightMode,
    rng: &mut R,
) -> Result<Vec<PauliObservable>> {
    let w = mode.max_weight();
    if count == 0 || w == 0 || w > n {
        return Err(Error::InvalidParameter("need count >= 1 and 1 <= weight <= n"));
    }
    (0..count)
        .map(|_| {
            let weight = match mode {
                WeightMode::UpTo(max) => rng.gen_range(1..=max),
                WeightMode::Fixed(fixed) => fixed,
            };
            let support = index::sample(rng, n, weight);
            let terms: Vec<(usize, Pauli)> =
                support.into_iter().map(|q| (q, Pauli::random(rng))).collect();
            PauliObservable::new(n, terms)
        })
        .collect()
}

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// SplitMix64 finalizer over a seed and two stream indices.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    for _ in 0..2 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// A transmission scheme with every parameter fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    SttUep { outcome_code: CodeSpec, basis_code: CodeSpec, copies: usize },
    SttCc { code: CodeSpec, copies: usize },
    Cqcr { bits_per_amplitude: u32, code: CodeSpec },
}

impl Scheme {
    /// Payload bits on the wire, CRC excluded.
    pub fn budget(&self, n: usize) -> usize {
        match *self {
            Scheme::SttUep { outcome_code, basis_code, copies } => {
                stt_budget(n, outcome_code, basis_code, copies)
            }
            Scheme::SttCc { code, copies } => stt_budget(n, code, code, copies),
            Scheme::Cqcr { bits_per_amplitude, code } => {
                code.encoded_len((1usize << n) * bits_per_amplitude as usize)
            }
        }
    }

    pub fn copies(&self) -> Option<usize> {
        match *self {
            Scheme::SttUep { copies, .. } | Scheme::SttCc { copies, .. } => Some(copies),
            Scheme::Cqcr { .. } => None,
        }
    }

    pub fn uep_config(&self, channel: ChannelSpec) -> Option<Result<UepConfig>> {
        match *self {
            Scheme::SttUep { outcome_code, basis_code, .. } => {
                Some(UepConfig::new(outcome_code, basis_code, channel))
            }
            Scheme::SttCc { code, .. } => Some(UepConfig::single_rate(code, channel)),
            Scheme::Cqcr { .. } => None,
        }
    }

    pub fn cqcr_config(&self, channel: ChannelSpec) -> Option<Result<CqcrConfig>> {
        match *self {
            Scheme::Cqcr { bits_per_amplitude, code } => {
                Some(CqcrConfig::new(bits_per_amplitude, code, channel))
            }
            _ => None,
        }
    }
}

fn stt_budget(n: usize, outcome: CodeSpec, basis: CodeSpec, copies: usize) -> usize {
    outcome.encoded_len(n * copies)
        + basis.encoded_len(crate::shadows::basis_code_bits(n) * copies)
}

/// A scheme with some parameters left for [`match_budget`] to choose.
/// `None` marks a free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeTemplate {
    SttUep { outcome_code: CodeSpec, basis_code: Option<CodeSpec>, copies: Option<usize> },
    SttCc { code: Option<CodeSpec>, copies: Option<usize> },
    Cqcr { bits_per_amplitude: u32, code: Option<CodeSpec> },
}

#[derive(Debug, Clone, Copy)]
pub struct BudgetContext<'a> {
    pub n: usize,
    pub channel: ChannelSpec,
    /// Codes a free rate may be chosen from.
    pub code_grid: &'a [CodeSpec],
    /// Largest predicted outage accepted when both code and copy count are free.
    pub max_outage: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetMatch {
    pub scheme: Scheme,
    pub bits: usize,
}

/// Largest copy count whose budget fits in `target`.
fn max_copies(target: usize, budget: impl Fn(usize) -> usize) -> usize {
    let (mut lo, mut hi) = (0usize, target + 1);
    // invariant: budget(lo) <= target < budget(hi) (every copy costs >= 1 bit)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if budget(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Resolves the free parameters of `template` so the budget is as close to
/// `target` as possible without exceeding it.
///
/// * Only the rate free: the code with the largest fitting budget; ties go
///   to the lower rate.
/// * Only the copy count free: the largest fitting copy count.
/// * Both free (shadow schemes): each code gets its largest fitting copy
///   count; among codes whose predicted basis-stream outage is at most
///   `ctx.max_outage` the one with most copies wins, and if no code meets
///   that level the one with the smallest predicted outage wins.
pub fn match_budget(target: usize, template: SchemeTemplate, ctx: &BudgetContext<'_>) -> Result<BudgetMatch> {
    let n = ctx.n;
    let infeasible = Error::InfeasibleBudget { target };
    let grid = |fixed: Option<CodeSpec>, below: f64| -> Vec<CodeSpec> {
        match fixed {
            Some(c) => alloc::vec![c],
            None => ctx.code_grid.iter().copied().filter(|c| c.rate() < below).collect(),
        }
    };

    if let SchemeTemplate::Cqcr { bits_per_amplitude, code } = template {
        return grid(code, f64::INFINITY)
            .into_iter()
            .map(|code| Scheme::Cqcr { bits_per_amplitude, code })
            .map(|scheme| BudgetMatch { scheme, bits: scheme.budget(n) })
            .filter(|m| m.bits <= target)
            .max_by(|a, b| a.bits.cmp(&b.bits).then(rate_of(b).total_cmp(&rate_of(a))))
            .ok_or(infeasible);
    }

    let (codes, copies): (Vec<(CodeSpec, CodeSpec)>, Option<usize>) = match template {
        SchemeTemplate::SttUep { outcome_code, basis_code, copies } => (
            grid(basis_code, outcome_code.rate()).into_iter().map(|b| (outcome_code, b)).collect(),
            copies,
        ),
        SchemeTemplate::SttCc { code, copies } => {
            (grid(code, f64::INFINITY).into_iter().map(|c| (c, c)).collect(), copies)
        }
        SchemeTemplate::Cqcr { .. } => unreachable!(),
    };
    let cc = matches!(template, SchemeTemplate::SttCc { .. });
    let build = |outcome_code, basis_code, copies| {
        if cc {
            Scheme::SttCc { code: outcome_code, copies }
        } else {
            Scheme::SttUep { outcome_code, basis_code, copies }
        }
    };

    let candidates: Vec<BudgetMatch> = codes
        .iter()
        .map(|&(oc, bc)| {
            let copies = copies
                .unwrap_or_else(|| max_copies(target, |c| stt_budget(n, oc, bc, c)));
            let scheme = build(oc, bc, copies);
            BudgetMatch { scheme, bits: scheme.budget(n) }
        })
        .filter(|m| m.bits <= target && m.scheme.copies().unwrap_or(0) >= 1)
        .collect();

    let free_rate = codes.len() > 1;
    if copies.is_some() || !free_rate {
        return candidates
            .into_iter()
            .max_by(|a, b| a.bits.cmp(&b.bits).then(rate_of(b).total_cmp(&rate_of(a))))
            .ok_or(infeasible);
    }

    let outage = |m: &BudgetMatch| -> f64 {
        let (oc, bc, copies) = match m.scheme {
            Scheme::SttUep { outcome_code, basis_code, copies } => (outcome_code, basis_code, copies),
            Scheme::SttCc { code, copies } => (code, code, copies),
            Scheme::Cqcr { .. } => unreachable!(),
        };
        UepConfig::with_any_rates(oc, bc, ctx.channel)
            .map(|cfg| cfg.predicted_outage(n, copies))
            .unwrap_or(1.0)
    };
    let reliable = candidates
        .iter()
        .filter(|m| outage(m) <= ctx.max_outage)
        .max_by(|a, b| a.scheme.copies().cmp(&b.scheme.copies()).then(a.bits.cmp(&b.bits)))
        .copied();
    reliable
        .or_else(|| {
            candidates.iter().copied().min_by(|a, b| {
                outage(a).total_cmp(&outage(b)).then(b.scheme.copies().cmp(&a.scheme.copies()))
            })
        })
        .ok_or(infeasible)
}

fn rate_of(m: &BudgetMatch) -> f64 {
    match m.scheme {
        Scheme::SttUep { basis_code, .. } => basis_code.rate(),
        Scheme::SttCc { code, .. } | Scheme::Cqcr { code, .. } => code.rate(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Vec<CodeSpec> {
        let mut g = alloc::vec![CodeSpec::Uncoded, CodeSpec::Hamming74];
        g.extend((3..=15).step_by(2).map(CodeSpec::Repetition));
        g
    }

    fn ctx(n: usize, p: f64, grid: &[CodeSpec]) -> BudgetContext<'_> {
        BudgetContext { n, channel: ChannelSpec::bsc(p).unwrap(), code_grid: grid, max_outage: 0.01 }
    }

    #[test]
    fn observable_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let obs = sample_observables(6, 200, WeightMode::UpTo(1), &mut rng).unwrap();
        assert!(obs.iter().all(|o| o.weight() == 1));
        let obs = sample_observables(6, 200, WeightMode::Fixed(3), &mut rng).unwrap();
        assert!(obs.iter().all(|o| o.weight() == 3));
        let obs = sample_observables(6, 2000, WeightMode::UpTo(3), &mut rng).unwrap();
        for w in 1..=3 {
            assert!(obs.iter().any(|o| o.weight() == w));
        }
        assert!(sample_observables(3, 1, WeightMode::Fixed(4), &mut rng).is_err());
        assert!(sample_observables(3, 0, WeightMode::Fixed(1), &mut rng).is_err());
        assert!(sample_observables(3, 1, WeightMode::UpTo(0), &mut rng).is_err());
    }

    #[test]
    fn letter_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let obs = sample_observables(5, 10_000, WeightMode::Fixed(1), &mut rng).unwrap();
        let se = libm::sqrt(2.0 / 9.0 / 10_000.0);
        for letter in Pauli::ALL {
            let f = obs.iter().filter(|o| o.terms()[0].1 == letter).count() as f64 / 10_000.0;
            assert!((f - 1.0 / 3.0).abs() < 4.0 * se, "{letter}: {f}");
        }
    }

    #[test]
    fn wilson() {
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
        let (lo, hi) = wilson_interval(0, 100);
        assert!(lo.abs() < 1e-12);
        assert!(hi > 0.03 && hi < 0.04);
        // 50/100: centre 0.5, half-width ~ 0.0962
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
        assert_ne!(derive_seed(1, 0, 1), derive_seed(1, 1, 0));
        assert_eq!(derive_seed(7, 3, 9), derive_seed(7, 3, 9));
    }

    #[test]
    fn rate_matching_example() {
        let g = grid();
        let t = SchemeTemplate::SttUep {
            outcome_code: CodeSpec::Uncoded,
            basis_code: None,
            copies: Some(1),
        };
        let m = match_budget(116, t, &ctx(20, 0.0, &g)).unwrap();
        assert_eq!(
            m.scheme,
            Scheme::SttUep {
                outcome_code: CodeSpec::Uncoded,
                basis_code: CodeSpec::Repetition(3),
                copies: 1
            }
        );
        assert_eq!(m.bits, 116);
        // between rep3 (116) and rep5 (180): still rep3
        assert_eq!(match_budget(179, t, &ctx(20, 0.0, &g)).unwrap().bits, 116);
    }

    #[test]
    fn infeasible() {
        let g = grid();
        let t = SchemeTemplate::SttUep {
            outcome_code: CodeSpec::Uncoded,
            basis_code: None,
            copies: Some(1),
        };
        // cheapest admissible basis code is Hamming: 20 + 56 = 76
        assert_eq!(match_budget(70, t, &ctx(20, 0.0, &g)), Err(Error::InfeasibleBudget { target: 70 }));
        let c = SchemeTemplate::Cqcr { bits_per_amplitude: 4, code: None };
        assert!(match_budget(4000, c, &ctx(10, 0.0, &g)).is_err());
    }

    #[test]
    fn cqcr_budget() {
        let g = grid();
        let c = SchemeTemplate::Cqcr { bits_per_amplitude: 4, code: Some(CodeSpec::Uncoded) };
        assert_eq!(match_budget(4096, c, &ctx(10, 0.0, &g)).unwrap().bits, 4096);
        let free = SchemeTemplate::Cqcr { bits_per_amplitude: 4, code: None };
        let m = match_budget(13_000, free, &ctx(10, 0.0, &g)).unwrap();
        assert_eq!(m.scheme, Scheme::Cqcr { bits_per_amplitude: 4, code: CodeSpec::Repetition(3) });
        assert_eq!(m.bits, 12_288);
    }

    #[test]
    fn copies_free() {
        let g = grid();
        let t = SchemeTemplate::SttCc { code: Some(CodeSpec::Hamming74), copies: None };
        let m = match_budget(1000, t, &ctx(3, 0.0, &g)).unwrap();
        let copies = m.scheme.copies().unwrap();
        assert!(m.bits <= 1000);
        assert!(Scheme::SttCc { code: CodeSpec::Hamming74, copies: copies + 1 }.budget(3) > 1000);
    }

    #[test]
    fn both_free_respects_outage() {
        let g = grid();
        let t = SchemeTemplate::SttUep { outcome_code: CodeSpec::Uncoded, basis_code: None, copies: None };
        let c = ctx(10, 0.02, &g);
        let m = match_budget(200_000, t, &c).unwrap();
        let cfg = m.scheme.uep_config(c.channel).unwrap().unwrap();
        assert!(cfg.predicted_outage(10, m.scheme.copies().unwrap()) <= 0.01);
        assert!(m.bits <= 200_000);
        // a weaker code would fit more copies but break the outage target
        if let Scheme::SttUep { basis_code: CodeSpec::Repetition(k), copies, .. } = m.scheme {
            let weaker = UepConfig::with_any_rates(CodeSpec::Uncoded, CodeSpec::Repetition(k - 2), c.channel).unwrap();
            let more = max_copies(200_000, |n| stt_budget(10, CodeSpec::Uncoded, CodeSpec::Repetition(k - 2), n));
            assert!(more > copies);
            assert!(weaker.predicted_outage(10, more) > 0.01);
        } else {
            panic!("expected a repetition basis code, got {:?}", m.scheme);
        }
    }
}
