//! Compression pipelines and streaming-model simulators.
//!
//! The crate is organised around a simulated machine ([`model_vm`]) whose
//! ledger records passes, sort passes and charged memory. The streaming
//! algorithms ([`stream_bwt`], [`stream_st`]) run against that machine and
//! are checked against the in-memory reference transforms in
//! [`transforms`]. [`coders`] and [`pipelines`] turn transformed streams
//! into containers, [`entropy`] measures the inputs, and [`adversary`]
//! builds De Bruijn inputs for memory/redundancy experiments.

pub mod adversary;
pub mod coders;
pub mod entropy;
pub mod model_vm;
pub mod pipelines;
pub mod stream_bwt;
pub mod stream_st;
pub mod transforms;

pub use model_vm::{Machine, MachineConfig, MachineError, MachineLedger, ModelKind};
pub use transforms::{SentinelString, Sym};

/// ⌈log2 x⌉, with `ceil_log2(0) == ceil_log2(1) == 0`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}
