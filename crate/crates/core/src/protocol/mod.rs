//! The unequal-error-protection link: framing and coding of the basis and
//! outcome streams, outage detection, and decoder-side estimation.

mod bound;
mod estimate;

pub use bound::{hoeffding_failure_bound, min_copies};
pub use estimate::{
    biased_estimate, compatibility_set, debias_factor, debiased_estimate, estimate_all, p_even,
    EstimateReport, ObservableEstimate,
};

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fec::{
    analytic_ber, analytic_bler, channel_transmit, crc_append, crc_check, decode, encode,
    ChannelSpec, CodeSpec, Interleaver, CRC_BITS,
};
use crate::qsim::{BasisString, PauliObservable};
use crate::shadows::{basis_code_bits, pack_bases, pack_outcomes, unpack_bases, unpack_outcomes, ShadowBatch};

const DEFAULT_INTERLEAVER_SEED: u64 = 0x5EED_1EAF;

/// Code assignment for the two streams. The basis stream normally gets the
/// strictly stronger (lower-rate) code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UepConfig {
    pub outcome_code: CodeSpec,
    pub basis_code: CodeSpec,
    pub channel: ChannelSpec,
    /// Shared by encoder and decoder.
    pub interleaver_seed: u64,
}

impl UepConfig {
    /// Requires `rate(basis_code) < rate(outcome_code)`.
    pub fn new(outcome_code: CodeSpec, basis_code: CodeSpec, channel: ChannelSpec) -> Result<Self> {
        if basis_code.rate() >= outcome_code.rate() {
            return Err(Error::InvalidParameter(
                "basis stream must use a lower code rate than the outcome stream",
            ));
        }
        Self::with_any_rates(outcome_code, basis_code, channel)
    }

    /// Skips the rate-ordering check.
    pub fn with_any_rates(
        outcome_code: CodeSpec,
        basis_code: CodeSpec,
        channel: ChannelSpec,
    ) -> Result<Self> {
        Ok(Self {
            outcome_code: outcome_code.validate()?,
            basis_code: basis_code.validate()?,
            channel,
            interleaver_seed: DEFAULT_INTERLEAVER_SEED,
        })
    }

    /// One code for both streams.
    pub fn single_rate(code: CodeSpec, channel: ChannelSpec) -> Result<Self> {
        Self::with_any_rates(code, code, channel)
    }

    /// Post-decoding flip probability of the outcome stream.
    pub fn outcome_error_rate(&self) -> f64 {
        analytic_ber(self.outcome_code, &self.channel)
    }

    /// Probability that the CRC-framed basis block of `copies` records
    /// decodes with at least one error.
    pub fn predicted_outage(&self, n: usize, copies: usize) -> f64 {
        analytic_bler(self.basis_code, &self.channel, basis_code_bits(n) * copies + CRC_BITS)
    }

    /// Bits on the wire for `copies` records of `n` qubits.
    pub fn budget(&self, n: usize, copies: usize) -> BitBudget {
        let basis_info = basis_code_bits(n) * copies;
        let basis_bits = self.basis_code.encoded_len(basis_info);
        BitBudget {
            outcome_bits: self.outcome_code.encoded_len(n * copies),
            basis_bits,
            crc_bits: self.basis_code.encoded_len(basis_info + CRC_BITS) - basis_bits,
        }
    }
}

/// Transmitted bit counts. [`BitBudget::total`] is `(n/R_b + ceil(n log2 3)/R_u) N`
/// plus any code padding; the CRC overhead is kept separate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BitBudget {
    pub outcome_bits: usize,
    pub basis_bits: usize,
    pub crc_bits: usize,
}

impl BitBudget {
    pub fn total(&self) -> usize {
        self.outcome_bits + self.basis_bits
    }

    pub fn on_air(&self) -> usize {
        self.total() + self.crc_bits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutageCause {
    CrcFailure,
    /// CRC passed but a basis code decoded to a value `>= 3^n`.
    OutOfRangeBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkStatus {
    Ok,
    Outage(OutageCause),
}

/// What the decoder holds after channel decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionOutcome {
    payload: core::result::Result<(Vec<BasisString>, Vec<Vec<u8>>), OutageCause>,
    p_err: f64,
}

impl TransmissionOutcome {
    pub fn delivered(bases: Vec<BasisString>, outcome_bits: Vec<Vec<u8>>, p_err: f64) -> Result<Self> {
        if bases.len() != outcome_bits.len() {
            return Err(Error::LengthMismatch { expected: bases.len(), actual: outcome_bits.len() });
        }
        if !(0.0..0.5).contains(&p_err) {
            return Err(Error::Degenerate(p_err));
        }
        Ok(Self { payload: Ok((bases, outcome_bits)), p_err })
    }

    pub fn outage(cause: OutageCause, p_err: f64) -> Self {
        Self { payload: Err(cause), p_err }
    }

    pub fn status(&self) -> LinkStatus {
        match &self.payload {
            Ok(_) => LinkStatus::Ok,
            Err(cause) => LinkStatus::Outage(*cause),
        }
    }

    pub fn is_outage(&self) -> bool {
        self.payload.is_err()
    }

    pub fn bases(&self) -> Option<&[BasisString]> {
        self.payload.as_ref().ok().map(|(b, _)| b.as_slice())
    }

    pub fn outcome_bits(&self) -> Option<&[Vec<u8>]> {
        self.payload.as_ref().ok().map(|(_, o)| o.as_slice())
    }

    /// Analytic flip probability attached to every decoded outcome bit.
    pub fn p_err(&self) -> f64 {
        self.p_err
    }
}

fn stream_seeds(cfg: &UepConfig) -> (u64, u64) {
    (cfg.interleaver_seed, cfg.interleaver_seed ^ 0x9E37_79B9_7F4A_7C15)
}

/// Interleave, encode, send, decode and deinterleave one stream.
fn send_stream<R: Rng + ?Sized>(
    info: &[u8],
    code: CodeSpec,
    chan: &ChannelSpec,
    seed: u64,
    rng: &mut R,
) -> (Vec<u8>, usize) {
    let interleaver = Interleaver::new(info.len(), seed);
    let coded = encode(&interleaver.permute(info), code);
    let received = channel_transmit(&coded, chan, rng);
    let decoded = decode(&received, code, info.len()).expect("length preserved by the channel");
    (interleaver.restore(&decoded), coded.len())
}

/// Runs both streams of `batch` over the channel. Channel corruption is
/// reported through the outcome's status, never as an error.
pub fn transmit<R: Rng + ?Sized>(
    batch: &ShadowBatch,
    cfg: &UepConfig,
    rng: &mut R,
) -> (TransmissionOutcome, BitBudget) {
    let n = batch.num_qubits();
    let copies = batch.len();
    let (basis_seed, outcome_seed) = stream_seeds(cfg);

    let framed = crc_append(&pack_bases(batch));
    let (basis_rx, basis_sent) = send_stream(&framed, cfg.basis_code, &cfg.channel, basis_seed, rng);
    let (outcome_rx, outcome_sent) =
        send_stream(&pack_outcomes(batch), cfg.outcome_code, &cfg.channel, outcome_seed, rng);

    let basis_payload = cfg.basis_code.encoded_len(basis_code_bits(n) * copies);
    let budget = BitBudget {
        outcome_bits: outcome_sent,
        basis_bits: basis_payload,
        crc_bits: basis_sent - basis_payload,
    };

    let p_err = cfg.outcome_error_rate();
    if !crc_check(&basis_rx) {
        return (TransmissionOutcome::outage(OutageCause::CrcFailure, p_err), budget);
    }
    let bases = match unpack_bases(&basis_rx[..basis_rx.len() - CRC_BITS], n, copies) {
        Ok(bases) => bases,
        Err(_) => return (TransmissionOutcome::outage(OutageCause::OutOfRangeBasis, p_err), budget),
    };
    let outcomes = unpack_outcomes(&outcome_rx, n, copies).expect("outcome stream length");
    let outcome = TransmissionOutcome { payload: Ok((bases, outcomes)), p_err };
    (outcome, budget)
}

/// One full pass: transmit, then estimate unless the link is in outage.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkRun {
    pub budget: BitBudget,
    pub transmission: TransmissionOutcome,
    pub report: Option<EstimateReport>,
}

pub fn run_link<R: Rng + ?Sized>(
    batch: &ShadowBatch,
    cfg: &UepConfig,
    observables: &[PauliObservable],
    rng: &mut R,
) -> Result<LinkRun> {
    let (transmission, budget) = transmit(batch, cfg, rng);
    let report = if transmission.is_outage() {
        None
    } else {
        Some(estimate_all(&transmission, observables)?)
    };
    Ok(LinkRun { budget, transmission, report })
}
