//! Transmitting Pauli-observable information about a quantum state over a
//! noisy binary channel with classical shadows and unequal error protection.
//!
//! The encoder measures copies of a state in random Pauli bases
//! ([`shadows`]), sends the basis stream behind a CRC with a strong code and
//! the outcome stream with a weaker one ([`protocol`], [`fec`]), and the
//! decoder turns the delivered shadows into debiased estimates of arbitrary
//! weight-limited Pauli observables. [`baselines`] holds the comparison
//! schemes and [`harness`] the pieces of a Monte-Carlo experiment that need
//! no I/O.
//!
//! The crate is `no_std` and needs only `alloc`. Randomness is always passed
//! in explicitly.

#![no_std]

extern crate alloc;

pub mod baselines;
mod error;
pub mod fec;
pub mod harness;
pub mod protocol;
pub mod qsim;
pub mod shadows;

pub use error::{Error, Result};
pub use fec::{ChannelSpec, CodeSpec};
pub use protocol::{EstimateReport, TransmissionOutcome, UepConfig};
pub use qsim::{BasisString, NamedState, Pauli, PauliObservable, StateVector};
pub use shadows::{ShadowBatch, ShadowRecord};
