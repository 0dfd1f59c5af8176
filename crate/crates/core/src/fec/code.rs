use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

use super::ChannelSpec;

/// Hard-decision block code.
///
/// | family       | rate | codeword                                  |
/// |--------------|------|-------------------------------------------|
/// | `uncoded`    | 1    | the bit itself                            |
/// | `rep<k>`     | 1/k  | the bit repeated `k` times (odd `k >= 3`) |
/// | `hamming74`  | 4/7  | `d0 d1 d2 d3 p0 p1 p2`                    |
///
/// Hamming parities are `p0 = d0^d1^d3`, `p1 = d0^d2^d3`, `p2 = d1^d2^d3`.
/// A message whose length is not a multiple of 4 is zero-padded up to the
/// next block; the padding is transmitted and counted in
/// [`CodeSpec::encoded_len`], and stripped again by [`decode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeSpec {
    Uncoded,
    Repetition(u32),
    Hamming74,
}

/// Syndrome `s0 | s1 << 1 | s2 << 2` to flipped position.
const HAMMING_SYNDROME: [Option<usize>; 8] =
    [None, Some(4), Some(5), Some(0), Some(6), Some(1), Some(2), Some(3)];

impl CodeSpec {
    pub fn repetition(k: u32) -> Result<Self> {
        if k < 3 || k % 2 == 0 {
            return Err(Error::InvalidCode("repetition factor must be odd and at least 3"));
        }
        Ok(CodeSpec::Repetition(k))
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            CodeSpec::Repetition(k) => Self::repetition(k),
            other => Ok(other),
        }
    }

    pub fn rate(self) -> f64 {
        match self {
            CodeSpec::Uncoded => 1.0,
            CodeSpec::Repetition(k) => 1.0 / f64::from(k),
            CodeSpec::Hamming74 => 4.0 / 7.0,
        }
    }

    /// Channel bits emitted for `info_bits` information bits, padding included.
    pub fn encoded_len(self, info_bits: usize) -> usize {
        match self {
            CodeSpec::Uncoded => info_bits,
            CodeSpec::Repetition(k) => info_bits * k as usize,
            CodeSpec::Hamming74 => info_bits.div_ceil(4) * 7,
        }
    }

    /// Zero bits appended to fill the last codeword.
    pub fn padding(self, info_bits: usize) -> usize {
        match self {
            CodeSpec::Hamming74 => info_bits.div_ceil(4) * 4 - info_bits,
            _ => 0,
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSpec::Uncoded => write!(f, "uncoded"),
            CodeSpec::Repetition(k) => write!(f, "rep{k}"),
            CodeSpec::Hamming74 => write!(f, "hamming74"),
        }
    }
}

impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "uncoded" => Ok(CodeSpec::Uncoded),
            "hamming74" => Ok(CodeSpec::Hamming74),
            other => other
                .strip_prefix("rep")
                .and_then(|k| k.parse().ok())
                .ok_or(Error::InvalidCode("expected `uncoded`, `hamming74` or `rep<k>`"))
                .and_then(CodeSpec::repetition),
        }
    }
}

pub fn encode(bits: &[u8], code: CodeSpec) -> Vec<u8> {
    match code {
        CodeSpec::Uncoded => bits.to_vec(),
        CodeSpec::Repetition(k) => {
            bits.iter().flat_map(|&b| core::iter::repeat(b).take(k as usize)).collect()
        }
        CodeSpec::Hamming74 => {
            let mut out = Vec::with_capacity(code.encoded_len(bits.len()));
            for chunk in bits.chunks(4) {
                let mut d = [0u8; 4];
                d[..chunk.len()].copy_from_slice(chunk);
                out.extend_from_slice(&d);
                out.extend_from_slice(&hamming_parity(&d));
            }
            out
        }
    }
}

fn hamming_parity(d: &[u8; 4]) -> [u8; 3] {
    [d[0] ^ d[1] ^ d[3], d[0] ^ d[2] ^ d[3], d[1] ^ d[2] ^ d[3]]
}

/// Decodes `bits` back to `info_bits` information bits: majority vote for
/// repetition, single-error syndrome correction for Hamming.
pub fn decode(bits: &[u8], code: CodeSpec, info_bits: usize) -> Result<Vec<u8>> {
    let expected = code.encoded_len(info_bits);
    if bits.len() != expected {
        return Err(Error::LengthMismatch { expected, actual: bits.len() });
    }
    Ok(match code {
        CodeSpec::Uncoded => bits.to_vec(),
        CodeSpec::Repetition(k) => bits
            .chunks_exact(k as usize)
            .map(|word| {
                let ones = word.iter().filter(|&&b| b == 1).count();
                u8::from(2 * ones > k as usize)
            })
            .collect(),
        CodeSpec::Hamming74 => {
            let mut out = Vec::with_capacity(info_bits + 3);
            for block in bits.chunks_exact(7) {
                let mut word = [0u8; 7];
                word.copy_from_slice(block);
                let d = [word[0], word[1], word[2], word[3]];
                let p = hamming_parity(&d);
                let syndrome = (p[0] ^ word[4]) | (p[1] ^ word[5]) << 1 | (p[2] ^ word[6]) << 2;
                if let Some(pos) = HAMMING_SYNDROME[syndrome as usize] {
                    word[pos] ^= 1;
                }
                out.extend_from_slice(&word[..4]);
            }
            out.truncate(info_bits);
            out
        }
    })
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Probability that a decoded information bit is wrong.
///
/// Hamming(7,4) with syndrome decoding: summing the information-bit errors
/// left by every error pattern of weight `j` over the 7 positions gives
/// 0, 0, 36, 76, 64, 48, 28, 4 for `j = 0..=7`; dividing by the 4 information
/// bits per block yields
/// `9p^2q^5 + 19p^3q^4 + 16p^4q^3 + 12p^5q^2 + 7p^6q + p^7`.
pub fn analytic_ber(code: CodeSpec, chan: &ChannelSpec) -> f64 {
    let p = chan.crossover();
    let q = 1.0 - p;
    match code {
        CodeSpec::Uncoded => p,
        CodeSpec::Repetition(k) => ((k / 2 + 1)..=k)
            .map(|j| binomial(k, j) * libm::pow(p, f64::from(j)) * libm::pow(q, f64::from(k - j)))
            .sum(),
        CodeSpec::Hamming74 => {
            const COEFF: [f64; 8] = [0.0, 0.0, 9.0, 19.0, 16.0, 12.0, 7.0, 1.0];
            COEFF
                .iter()
                .enumerate()
                .map(|(j, c)| c * libm::pow(p, j as f64) * libm::pow(q, (7 - j) as f64))
                .sum()
        }
    }
}

/// Probability that at least one of `info_bits` decoded bits is wrong.
///
/// Uncoded and repetition codes decode every information bit independently,
/// so this is `1 - (1 - BER)^m`. Hamming blocks fail whenever two or more of
/// their 7 bits flip, so this is `1 - (1 - P_block)^ceil(m/4)` with
/// `P_block = 1 - q^7 - 7pq^6`.
pub fn analytic_bler(code: CodeSpec, chan: &ChannelSpec, info_bits: usize) -> f64 {
    let (per_unit, units) = match code {
        CodeSpec::Hamming74 => {
            let p = chan.crossover();
            let q = 1.0 - p;
            (1.0 - libm::pow(q, 7.0) - 7.0 * p * libm::pow(q, 6.0), info_bits.div_ceil(4))
        }
        _ => (analytic_ber(code, chan), info_bits),
    };
    if per_unit <= 0.0 || units == 0 {
        return 0.0;
    }
    -libm::expm1(units as f64 * libm::log1p(-per_unit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn bsc(p: f64) -> ChannelSpec {
        ChannelSpec::bsc(p).unwrap()
    }

    #[test]
    fn parse_and_rate() {
        assert_eq!("rep3".parse::<CodeSpec>().unwrap(), CodeSpec::Repetition(3));
        assert_eq!("hamming74".parse::<CodeSpec>().unwrap().rate(), 4.0 / 7.0);
        assert_eq!("uncoded".parse::<CodeSpec>().unwrap().rate(), 1.0);
        assert!("rep4".parse::<CodeSpec>().is_err());
        assert!("rep1".parse::<CodeSpec>().is_err());
        assert!("ldpc".parse::<CodeSpec>().is_err());
        assert_eq!(CodeSpec::Repetition(5).to_string(), "rep5");
    }

    #[test]
    fn repetition_encoding() {
        let code = CodeSpec::repetition(3).unwrap();
        assert_eq!(encode(&[1, 0, 1, 1], code), [1, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn repetition_corrects_one_flip_per_word() {
        let code = CodeSpec::Repetition(3);
        let msg = [1, 0, 1, 1];
        let mut word = encode(&msg, code);
        for (i, b) in word.iter_mut().enumerate() {
            if i % 3 == i / 3 % 3 {
                *b ^= 1;
            }
        }
        assert_eq!(decode(&word, code, 4).unwrap(), msg);
    }

    #[test]
    fn hamming_corrects_every_single_flip() {
        for m in 0u8..16 {
            let msg: Vec<u8> = (0..4).map(|b| (m >> b) & 1).collect();
            let word = encode(&msg, CodeSpec::Hamming74);
            assert_eq!(word.len(), 7);
            assert_eq!(decode(&word, CodeSpec::Hamming74, 4).unwrap(), msg);
            for pos in 0..7 {
                let mut bad = word.clone();
                bad[pos] ^= 1;
                assert_eq!(decode(&bad, CodeSpec::Hamming74, 4).unwrap(), msg, "m={m} pos={pos}");
            }
        }
    }

    #[test]
    fn hamming_padding() {
        let code = CodeSpec::Hamming74;
        assert_eq!(code.encoded_len(5), 14);
        assert_eq!(code.padding(5), 3);
        assert_eq!(code.padding(8), 0);
        let msg = [1, 0, 1, 1, 1];
        let word = encode(&msg, code);
        assert_eq!(word.len(), 14);
        assert_eq!(decode(&word, code, 5).unwrap(), msg);
        assert_eq!(
            decode(&word[..13], code, 5),
            Err(Error::LengthMismatch { expected: 14, actual: 13 })
        );
    }

    #[test]
    fn closed_form_rates() {
        let ber = analytic_ber(CodeSpec::Repetition(3), &bsc(0.1));
        assert!((ber - 0.028).abs() < 1e-15);
        assert_eq!(analytic_ber(CodeSpec::Uncoded, &bsc(0.07)), 0.07);
        for code in [CodeSpec::Uncoded, CodeSpec::Repetition(5), CodeSpec::Hamming74] {
            assert_eq!(analytic_ber(code, &bsc(0.0)), 0.0);
            assert_eq!(analytic_bler(code, &bsc(0.0), 100), 0.0);
        }
        let bler = analytic_bler(CodeSpec::Uncoded, &bsc(0.01), 10);
        assert!((bler - (1.0 - 0.99f64.powi(10))).abs() < 1e-15);
    }

    /// Exhaustive enumeration of the 128 error patterns through the real decoder.
    #[test]
    fn hamming_closed_forms_match_enumeration() {
        for p in [0.01f64, 0.05, 0.1, 0.3] {
            let (mut ber, mut block) = (0.0, 0.0);
            for pattern in 0u32..128 {
                let flips: Vec<u8> = (0..7).map(|i| ((pattern >> i) & 1) as u8).collect();
                let w = pattern.count_ones() as i32;
                let prob = p.powi(w) * (1.0 - p).powi(7 - w);
                let decoded = decode(&flips, CodeSpec::Hamming74, 4).unwrap();
                let wrong = decoded.iter().filter(|&&b| b == 1).count();
                ber += prob * wrong as f64 / 4.0;
                if wrong > 0 {
                    block += prob;
                }
            }
            assert!((analytic_ber(CodeSpec::Hamming74, &bsc(p)) - ber).abs() < 1e-14);
            assert!((analytic_bler(CodeSpec::Hamming74, &bsc(p), 4) - block).abs() < 1e-14);
        }
    }

    #[test]
    fn repetition_matches_enumeration() {
        let p: f64 = 0.13;
        for k in [3u32, 5, 7] {
            let mut ber = 0.0;
            for pattern in 0u32..(1 << k) {
                let w = pattern.count_ones() as i32;
                if 2 * w > k as i32 {
                    ber += p.powi(w) * (1.0 - p).powi(k as i32 - w);
                }
            }
            assert!((analytic_ber(CodeSpec::Repetition(k), &bsc(p)) - ber).abs() < 1e-14);
        }
    }

    #[test]
    fn decode_length_checked() {
        assert!(decode(&[0; 7], CodeSpec::Repetition(3), 2).is_err());
        assert!(decode(&[0; 6], CodeSpec::Repetition(3), 2).is_ok());
    }
}
