//! Shadow acquisition and the two-stream wire layout.
//!
//! # Basis stream
//!
//! Each record's basis is the base-3 integer `sum_j trit_j * 3^j` with
//! X=0, Y=1, Z=2 and qubit 0 as the least significant trit. That integer is
//! written least-significant bit first into exactly [`basis_code_bits`]`(n)`
//! bits (`ceil(n log2 3)`), and records are concatenated in order.
//!
//! # Outcome stream
//!
//! Each record contributes its `n` outcome bits, qubit 0 first; records are
//! concatenated in order.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::qsim::{BasisString, Pauli, StateVector};

/// One measured copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowRecord {
    pub basis: BasisString,
    pub bits: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowBatch {
    n: usize,
    records: Vec<ShadowRecord>,
}

impl ShadowBatch {
    pub fn new(n: usize, records: Vec<ShadowRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::InvalidParameter("a shadow batch needs at least one record"));
        }
        for r in &records {
            if r.basis.num_qubits() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: r.basis.num_qubits() });
            }
            if r.bits.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: r.bits.len() });
            }
        }
        Ok(Self { n, records })
    }

    /// Builds a batch from separately decoded bases and outcomes.
    pub fn from_parts(n: usize, bases: Vec<BasisString>, outcomes: Vec<Vec<u8>>) -> Result<Self> {
        if bases.len() != outcomes.len() {
            return Err(Error::LengthMismatch { expected: bases.len(), actual: outcomes.len() });
        }
        let records = bases
            .into_iter()
            .zip(outcomes)
            .map(|(basis, bits)| ShadowRecord { basis, bits })
            .collect();
        Self::new(n, records)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[ShadowRecord] {
        &self.records
    }

    pub fn bases(&self) -> impl Iterator<Item = &BasisString> {
        self.records.iter().map(|r| &r.basis)
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &[u8]> {
        self.records.iter().map(|r| r.bits.as_slice())
    }
}

/// Measures `copies` copies of `state`, each in an independently drawn
/// uniform random Pauli basis.
pub fn acquire<R: Rng + ?Sized>(state: &StateVector, copies: usize, rng: &mut R) -> Result<ShadowBatch> {
    if copies == 0 {
        return Err(Error::InvalidParameter("at least one copy is required"));
    }
    let n = state.num_qubits();
    let records = (0..copies)
        .map(|_| {
            let basis = BasisString::random(n, rng);
            let bits = state.sample_in_basis(&basis, rng)?;
            Ok(ShadowRecord { basis, bits })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShadowBatch { n, records })
}

/// `ceil(n log2 3)`: the smallest `k` with `2^k >= 3^n`.
pub fn basis_code_bits(n: usize) -> usize {
    let states = 3u128.pow(n as u32);
    let mut k = 0;
    while (1u128 << k) < states {
        k += 1;
    }
    k
}

pub fn pack_bases(batch: &ShadowBatch) -> Vec<u8> {
    pack_basis_strings(batch.n, batch.bases())
}

/// Packs any sequence of `n`-qubit bases in the wire layout.
pub fn pack_basis_strings<'a>(n: usize, bases: impl IntoIterator<Item = &'a BasisString>) -> Vec<u8> {
    let width = basis_code_bits(n);
    let mut out = Vec::new();
    for basis in bases {
        let value = basis
            .letters()
            .iter()
            .rev()
            .fold(0u64, |acc, p| acc * 3 + u64::from(p.trit()));
        out.extend((0..width).map(|b| ((value >> b) & 1) as u8));
    }
    out
}

pub fn pack_outcomes(batch: &ShadowBatch) -> Vec<u8> {
    batch.records.iter().flat_map(|r| r.bits.iter().copied()).collect()
}

fn check_stream(stream: &[u8], per_record: usize, copies: usize) -> Result<()> {
    if copies == 0 {
        return Err(Error::InvalidParameter("at least one copy is required"));
    }
    let expected = per_record * copies;
    if stream.len() != expected {
        return Err(Error::LengthMismatch { expected, actual: stream.len() });
    }
    Ok(())
}

/// Inverse of [`pack_bases`]. A group decoding to a value `>= 3^n` yields
/// [`Error::OutOfRangeBasis`].
pub fn unpack_bases(stream: &[u8], n: usize, copies: usize) -> Result<Vec<BasisString>> {
    let width = basis_code_bits(n);
    check_stream(stream, width, copies)?;
    let limit = 3u64.pow(n as u32);
    stream
        .chunks_exact(width)
        .enumerate()
        .map(|(record, group)| {
            let value = group
                .iter()
                .enumerate()
                .fold(0u64, |acc, (b, &bit)| acc | (u64::from(bit & 1) << b));
            if value >= limit {
                return Err(Error::OutOfRangeBasis { record, value });
            }
            let mut rest = value;
            let letters = (0..n)
                .map(|_| {
                    let trit = (rest % 3) as u8;
                    rest /= 3;
                    Pauli::from_trit(trit).expect("trit below 3")
                })
                .collect();
            Ok(BasisString::new(letters))
        })
        .collect()
}

/// Inverse of [`pack_outcomes`].
pub fn unpack_outcomes(stream: &[u8], n: usize, copies: usize) -> Result<Vec<Vec<u8>>> {
    check_stream(stream, n, copies)?;
    Ok(stream.chunks_exact(n).map(<[u8]>::to_vec).collect())
}
