//! Comparison schemes.
//!
//! *CQCR* ships a quantized copy of the full state vector. Each complex
//! amplitude gets `b` bits, split evenly between the real and imaginary
//! parts; each part goes through a midrise uniform quantizer over `[-1, 1]`
//! with `2^(b/2)` levels. Level indices are written least-significant bit
//! first, real part before imaginary part, amplitudes in index order. The
//! receiver dequantizes to cell midpoints and renormalizes.
//!
//! *STT-CC* is the shadow link with a single code for both streams.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fec::{channel_transmit, decode, encode, ChannelSpec, CodeSpec};
use crate::protocol::{run_link, LinkRun, UepConfig};
use crate::qsim::{NamedState, PauliObservable, StateVector};
use crate::shadows::ShadowBatch;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CqcrConfig {
    bits_per_amplitude: u32,
    pub code: CodeSpec,
    pub channel: ChannelSpec,
}

impl CqcrConfig {
    /// `bits_per_amplitude` must be even and in `2..=32`.
    pub fn new(bits_per_amplitude: u32, code: CodeSpec, channel: ChannelSpec) -> Result<Self> {
        if !(2..=32).contains(&bits_per_amplitude) || bits_per_amplitude % 2 != 0 {
            return Err(Error::InvalidParameter("bits per amplitude must be even and in 2..=32"));
        }
        Ok(Self { bits_per_amplitude, code: code.validate()?, channel })
    }

    pub fn bits_per_amplitude(&self) -> u32 {
        self.bits_per_amplitude
    }

    /// `2^n b / R` plus code padding.
    pub fn budget(&self, n: usize) -> usize {
        self.code.encoded_len((1usize << n) * self.bits_per_amplitude as usize)
    }

    fn levels(&self) -> u32 {
        1 << (self.bits_per_amplitude / 2)
    }
}

fn quantize(x: f64, levels: u32) -> u32 {
    let step = 2.0 / f64::from(levels);
    let idx = libm::floor((x + 1.0) / step);
    idx.clamp(0.0, f64::from(levels - 1)) as u32
}

fn dequantize(idx: u32, levels: u32) -> f64 {
    let step = 2.0 / f64::from(levels);
    -1.0 + (f64::from(idx) + 0.5) * step
}

#[derive(Debug, Clone, PartialEq)]
pub struct CqcrRun {
    pub state: StateVector,
    pub budget: usize,
}

/// Quantize, encode, send, decode and reconstruct `state`.
pub fn cqcr_roundtrip<R: Rng + ?Sized>(
    state: &StateVector,
    cfg: &CqcrConfig,
    rng: &mut R,
) -> Result<CqcrRun> {
    let levels = cfg.levels();
    let width = (cfg.bits_per_amplitude / 2) as usize;
    let mut info = Vec::with_capacity(state.amplitudes().len() * 2 * width);
    for a in state.amplitudes() {
        for part in [a.re, a.im] {
            let idx = quantize(part, levels);
            info.extend((0..width).map(|b| ((idx >> b) & 1) as u8));
        }
    }
    let coded = encode(&info, cfg.code);
    let received = channel_transmit(&coded, &cfg.channel, rng);
    let decoded = decode(&received, cfg.code, info.len())?;

    let parts: Vec<f64> = decoded
        .chunks_exact(width)
        .map(|group| {
            let idx = group.iter().enumerate().fold(0u32, |acc, (b, &bit)| acc | (u32::from(bit) << b));
            dequantize(idx, levels)
        })
        .collect();
    let raw: Vec<Complex64> = parts.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
    let n = state.num_qubits();
    let reconstructed = match StateVector::normalized(raw)? {
        Some(s) => s,
        None => StateVector::named(NamedState::AllZero, n)?,
    };
    Ok(CqcrRun { state: reconstructed, budget: coded.len() })
}

/// `<psi_hat|O|psi_hat>` on the reconstructed state.
pub fn cqcr_estimate(state_hat: &StateVector, obs: &PauliObservable) -> Result<f64> {
    state_hat.expectation(obs)
}

/// The shadow link with `code` on both streams.
pub fn stt_cc_run<R: Rng + ?Sized>(
    batch: &ShadowBatch,
    code: CodeSpec,
    channel: ChannelSpec,
    observables: &[PauliObservable],
    rng: &mut R,
) -> Result<LinkRun> {
    run_link(batch, &UepConfig::single_rate(code, channel)?, observables, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn noiseless() -> ChannelSpec {
        ChannelSpec::bsc(0.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(CqcrConfig::new(3, CodeSpec::Uncoded, noiseless()).is_err());
        assert!(CqcrConfig::new(0, CodeSpec::Uncoded, noiseless()).is_err());
        assert!(CqcrConfig::new(34, CodeSpec::Uncoded, noiseless()).is_err());
        let cfg = CqcrConfig::new(4, CodeSpec::Uncoded, noiseless()).unwrap();
        assert_eq!(cfg.budget(10), 4096);
        let cfg = CqcrConfig::new(2, CodeSpec::Repetition(3), noiseless()).unwrap();
        assert_eq!(cfg.budget(3), 48);
    }

    #[test]
    fn quantizer_cells() {
        assert_eq!(quantize(-1.0, 4), 0);
        assert_eq!(quantize(1.0, 4), 3);
        assert_eq!(quantize(0.0, 4), 2);
        assert_eq!(quantize(-0.01, 4), 1);
        assert_eq!(dequantize(0, 2), -0.5);
        assert_eq!(dequantize(1, 2), 0.5);
        for levels in [2, 16, 256] {
            for i in 0..=200 {
                let x = -1.0 + i as f64 / 100.0;
                let err = (dequantize(quantize(x, levels), levels) - x).abs();
                assert!(err <= 1.0 / f64::from(levels) + 1e-12);
            }
        }
    }

    #[test]
    fn fine_quantization_recovers_zero_state() {
        let state = StateVector::named(NamedState::AllZero, 2).unwrap();
        let cfg = CqcrConfig::new(16, CodeSpec::Uncoded, noiseless()).unwrap();
        let run = cqcr_roundtrip(&state, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let z0 = PauliObservable::from_label("ZI").unwrap();
        let est = cqcr_estimate(&run.state, &z0).unwrap();
        assert!((est - 1.0).abs() < 1.0 / 64.0, "{est}");
        assert_eq!(run.budget, cfg.budget(2));
    }

    #[test]
    fn coarse_quantization_stays_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let state = StateVector::haar_random(5, &mut rng).unwrap();
        let cfg = CqcrConfig::new(2, CodeSpec::Uncoded, ChannelSpec::bsc(0.2).unwrap()).unwrap();
        let run = cqcr_roundtrip(&state, &cfg, &mut rng).unwrap();
        let norm: f64 = run.state.probabilities().iter().sum();
        assert!((norm - 1.0).abs() < 1e-10);
    }
}
