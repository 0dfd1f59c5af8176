//! Classical coding substrate: a binary symmetric channel, a small family
//! of hard-decision block codes with exact post-decoding error rates, a
//! CRC-16 and a seeded interleaver.
//!
//! Bit streams are `Vec<u8>` holding one bit (0 or 1) per element.

mod channel;
mod code;
mod crc;
mod interleave;

pub use channel::{channel_transmit, ChannelSpec};
pub use code::{analytic_ber, analytic_bler, decode, encode, CodeSpec};
pub use crc::{crc16, crc_append, crc_check, CRC_BITS};
pub use interleave::{deinterleave, interleave, Interleaver};
