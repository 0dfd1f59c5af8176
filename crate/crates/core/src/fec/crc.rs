//! CRC-16/CCITT-FALSE over bit streams: polynomial 0x1021, initial value
//! 0xFFFF, no reflection, no final XOR. Bits are consumed in stream order
//! (a byte fed MSB first gives the usual byte-oriented result) and the 16
//! check bits are appended MSB first.

use alloc::vec::Vec;

pub const CRC_BITS: usize = 16;

const POLY: u16 = 0x1021;
const INIT: u16 = 0xFFFF;

pub fn crc16(bits: &[u8]) -> u16 {
    bits.iter().fold(INIT, |crc, &b| {
        let feedback = ((crc >> 15) as u8 ^ b) & 1;
        let shifted = crc << 1;
        if feedback == 1 {
            shifted ^ POLY
        } else {
            shifted
        }
    })
}

pub fn crc_append(bits: &[u8]) -> Vec<u8> {
    let crc = crc16(bits);
    let mut out = Vec::with_capacity(bits.len() + CRC_BITS);
    out.extend_from_slice(bits);
    out.extend((0..CRC_BITS).rev().map(|i| ((crc >> i) & 1) as u8));
    out
}

/// True when the trailing 16 bits match the CRC of the bits before them.
pub fn crc_check(bits: &[u8]) -> bool {
    let Some(split) = bits.len().checked_sub(CRC_BITS) else {
        return false;
    };
    let (payload, tail) = bits.split_at(split);
    let received = tail.iter().fold(0u16, |acc, &b| (acc << 1) | u16::from(b & 1));
    crc16(payload) == received
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Byte-wise table-driven reference, written independently of the bit loop.
    fn reference_crc(bytes: &[u8]) -> u16 {
        let mut table = [0u16; 256];
        for (i, entry) in table.iter_mut().enumerate() {
            let mut c = (i as u16) << 8;
            for _ in 0..8 {
                c = if c & 0x8000 != 0 { (c << 1) ^ 0x1021 } else { c << 1 };
            }
            *entry = c;
        }
        bytes
            .iter()
            .fold(0xFFFF, |crc, &b| (crc << 8) ^ table[((crc >> 8) as u8 ^ b) as usize])
    }

    fn to_bits(bytes: &[u8]) -> Vec<u8> {
        bytes.iter().flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1)).collect()
    }

    #[test]
    fn check_value() {
        assert_eq!(reference_crc(b"123456789"), 0x29B1);
        assert_eq!(crc16(&to_bits(b"123456789")), 0x29B1);
    }

    #[test]
    fn matches_reference_on_random_bytes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for len in 0..64 {
            let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            assert_eq!(crc16(&to_bits(&bytes)), reference_crc(&bytes));
        }
    }

    #[test]
    fn append_then_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for len in [0, 1, 17, 200] {
            let bits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
            let framed = crc_append(&bits);
            assert_eq!(framed.len(), len + CRC_BITS);
            assert!(crc_check(&framed));
            for i in 0..framed.len() {
                let mut bad = framed.clone();
                bad[i] ^= 1;
                assert!(!crc_check(&bad), "flip at {i} of {len}");
            }
        }
        assert!(!crc_check(&[1; 5]));
    }

    #[test]
    fn undetected_rate_on_random_corruption() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let blocks = 200_000;
        let undetected = (0..blocks)
            .filter(|_| {
                let bits: Vec<u8> = (0..48).map(|_| rng.gen_range(0..2)).collect();
                let mut framed = crc_append(&bits);
                let mut changed = false;
                for b in framed.iter_mut() {
                    if rng.gen::<f64>() < 0.2 {
                        *b ^= 1;
                        changed = true;
                    }
                }
                changed && crc_check(&framed)
            })
            .count();
        assert!((undetected as f64) / (blocks as f64) <= libm::pow(2.0, -14.0), "{undetected}");
    }
}
