use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded pseudorandom permutation of a fixed length. Output position `i`
/// carries input position `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
}

impl Interleaver {
    pub fn new(len: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self { perm }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permute(&self, bits: &[u8]) -> Vec<u8> {
        assert_eq!(bits.len(), self.perm.len(), "interleaver length");
        self.perm.iter().map(|&src| bits[src]).collect()
    }

    pub fn restore(&self, bits: &[u8]) -> Vec<u8> {
        assert_eq!(bits.len(), self.perm.len(), "interleaver length");
        let mut out = alloc::vec![0; bits.len()];
        for (&dst, &b) in self.perm.iter().zip(bits) {
            out[dst] = b;
        }
        out
    }
}

pub fn interleave(bits: &[u8], seed: u64) -> Vec<u8> {
    Interleaver::new(bits.len(), seed).permute(bits)
}

pub fn deinterleave(bits: &[u8], seed: u64) -> Vec<u8> {
    Interleaver::new(bits.len(), seed).restore(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::Rng;

    #[test]
    fn roundtrip_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bits: Vec<u8> = (0..1000).map(|_| rng.gen_range(0..2)).collect();
        let mixed = interleave(&bits, 42);
        assert_eq!(mixed, interleave(&bits, 42));
        assert_ne!(mixed, bits);
        assert_eq!(deinterleave(&mixed, 42), bits);
        assert!(interleave(&[], 1).is_empty());
    }

    /// Wald-Wolfowitz runs statistic of a 0/1 sequence, as a z-score.
    fn runs_z(seq: &[u8]) -> f64 {
        let n1 = seq.iter().filter(|&&b| b == 1).count() as f64;
        let n0 = seq.len() as f64 - n1;
        let runs = 1 + seq.windows(2).filter(|w| w[0] != w[1]).count();
        let n = n0 + n1;
        let mean = 2.0 * n0 * n1 / n + 1.0;
        let var = 2.0 * n0 * n1 * (2.0 * n0 * n1 - n) / (n * n * (n - 1.0));
        (runs as f64 - mean) / libm::sqrt(var)
    }

    #[test]
    fn spreads_burst_errors() {
        let len = 20_000;
        let seed = 7;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // Bursty channel: 40 bursts of 25 consecutive flips.
        let mut channel_errors = vec![0u8; len];
        for _ in 0..40 {
            let start = rng.gen_range(0..len - 25);
            channel_errors[start..start + 25].iter_mut().for_each(|e| *e = 1);
        }
        assert!(runs_z(&channel_errors) < -10.0, "bursts are visible before interleaving");

        let sent = interleave(&vec![0u8; len], seed);
        let received: Vec<u8> = sent.iter().zip(&channel_errors).map(|(b, e)| b ^ e).collect();
        let errors = deinterleave(&received, seed);
        let z = runs_z(&errors);
        assert!(z.abs() < 4.0, "runs z-score {z}");
    }
}
