use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};

/// Memoryless binary symmetric channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    crossover: f64,
    snr_db: Option<f64>,
}

impl ChannelSpec {
    pub fn bsc(crossover: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&crossover) {
            return Err(Error::InvalidCrossover(crossover));
        }
        Ok(Self { crossover, snr_db: None })
    }

    /// Hard-decision BPSK over AWGN: `crossover = Q(sqrt(2 R Eb/N0))`, where
    /// `rate` is the code rate the bits are sent at.
    pub fn from_snr_db(snr_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) || !snr_db.is_finite() {
            return Err(Error::InvalidParameter("snr mapping needs a finite snr and rate in (0, 1]"));
        }
        let ebn0 = libm::pow(10.0, snr_db / 10.0);
        let crossover = q_function(libm::sqrt(2.0 * rate * ebn0));
        let mut chan = Self::bsc(crossover)?;
        chan.snr_db = Some(snr_db);
        Ok(chan)
    }

    pub fn crossover(&self) -> f64 {
        self.crossover
    }

    pub fn snr_db(&self) -> Option<f64> {
        self.snr_db
    }
}

fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / core::f64::consts::SQRT_2)
}

/// Flips each bit independently with the channel's crossover probability.
pub fn channel_transmit<R: Rng + ?Sized>(bits: &[u8], chan: &ChannelSpec, rng: &mut R) -> Vec<u8> {
    let p = chan.crossover;
    if p == 0.0 {
        return bits.to_vec();
    }
    bits.iter().map(|&b| if rng.gen::<f64>() < p { b ^ 1 } else { b }).collect()
}
