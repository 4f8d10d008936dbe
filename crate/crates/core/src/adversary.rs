//! De Bruijn inputs and the block-versus-full-memory separation experiment.
//!
//! A power `d^i` of a De Bruijn prefix of order `k` has zero k-th order
//! entropy, yet every window shorter than `σ^k` looks random. A block coder
//! whose blocks are much shorter than `σ^k` therefore pays about a bit per
//! character, while a coder that sees the whole string pays for `d` once.

use serde::Serialize;
use thiserror::Error;

use crate::model_vm::{MachineConfig, ModelKind};
use crate::pipelines::{compress, BlockPlan, CompressOptions, PipelineError, PipelineId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("need sigma >= 2 and k >= 1, got sigma = {sigma}, k = {k}")]
    Order { sigma: u32, k: u32 },
    #[error("{sigma}^{k} characters exceed the limit of {limit}")]
    TooLarge { sigma: u32, k: u32, limit: u64 },
    #[error("length {len} is not {sigma}^{k}")]
    Length { len: usize, sigma: u32, k: u32 },
    #[error("n = {0} is too small for the experiment")]
    TooShort(u64),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// Largest prefix [`de_bruijn`] will build.
pub const MAX_PREFIX_LEN: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeBruijnPrefix {
    pub sigma: u32,
    pub k: u32,
    pub d: Vec<u32>,
}

fn checked_len(sigma: u32, k: u32) -> Result<u64, AdversaryError> {
    if sigma < 2 || k < 1 {
        return Err(AdversaryError::Order { sigma, k });
    }
    u64::from(sigma)
        .checked_pow(k)
        .filter(|&l| l <= MAX_PREFIX_LEN)
        .ok_or(AdversaryError::TooLarge {
            sigma,
            k,
            limit: MAX_PREFIX_LEN,
        })
}

/// The lexicographically least De Bruijn sequence of order `k`, built by
/// concatenating Lyndon words whose length divides `k`.
pub fn de_bruijn(sigma: u32, k: u32) -> Result<DeBruijnPrefix, AdversaryError> {
    let len = checked_len(sigma, k)?;
    let k_us = k as usize;
    let mut d = Vec::with_capacity(len as usize);
    let mut a = vec![0u32; k_us + 1];
    let mut t = 1usize;
    let mut p = 1usize;
    // iterative form of the FKM generator over prenecklaces a[1..=t]
    loop {
        if t > k_us {
            if k_us.is_multiple_of(p) {
                d.extend_from_slice(&a[1..=p]);
            }
            // step back to the last position that can still grow
            t -= 1;
            loop {
                if t == 0 {
                    return Ok(DeBruijnPrefix { sigma, k, d });
                }
                if a[t] + 1 < sigma {
                    break;
                }
                t -= 1;
            }
            a[t] += 1;
            p = t;
            t += 1;
        } else {
            a[t] = a[t - p];
            t += 1;
        }
    }
}

/// Whether every k-tuple occurs exactly once in `d` read cyclically.
pub fn verify_de_bruijn(d: &[u32], sigma: u32, k: u32) -> Result<bool, AdversaryError> {
    let len = checked_len(sigma, k)?;
    if d.len() as u64 != len {
        return Err(AdversaryError::Length {
            len: d.len(),
            sigma,
            k,
        });
    }
    if d.iter().any(|&c| c >= sigma) {
        return Ok(false);
    }
    let mut seen = vec![false; d.len()];
    for start in 0..d.len() {
        let code = (0..k as usize).fold(0usize, |acc, j| {
            acc * sigma as usize + d[(start + j) % d.len()] as usize
        });
        if std::mem::replace(&mut seen[code], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn db_power(prefix: &DeBruijnPrefix, i: usize) -> Vec<u32> {
    prefix.d.repeat(i)
}

/// Letters `a`, `b`, … for ranks 0, 1, …
pub fn letters(s: &[u32]) -> Vec<u8> {
    s.iter().map(|&c| b'a' + c as u8).collect()
}

/// `⌈(c + ε/2)·log2 n⌉`.
pub fn adversary_k(n: u64, c: f64, epsilon: f64) -> u32 {
    ((c + epsilon / 2.0) * (n as f64).log2() - 1e-9).ceil() as u32
}

/// Memory granted to the block coder: `⌈n^c⌉` words of 64 bits, which
/// leaves room for its constant-size coder tables at small `n`.
pub fn block_budget_bits(n: u64, c: f64) -> u64 {
    64 * ((n as f64).powf(c) - 1e-9).ceil() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub n: u64,
    pub c: f64,
    pub epsilon: f64,
    pub k: u32,
    pub sigma: u32,
    pub power: usize,
    pub block_len: u64,
    pub blocks: usize,
    pub budget_bits: u64,
    pub block_peak_memory_bits: u64,
    pub size_block_bits: u64,
    pub size_full_bits: u64,
    pub ratio: f64,
}

/// The binary input of the experiment: `d^i` for the order
/// [`adversary_k`], with `i = max(1, n / 2^k)`.
pub fn separation_input(n: u64, c: f64, epsilon: f64) -> Result<(u32, Vec<u32>), AdversaryError> {
    BlockPlan::new(c, epsilon)?;
    if n < 4 {
        return Err(AdversaryError::TooShort(n));
    }
    let k = adversary_k(n, c, epsilon).max(1);
    let d = de_bruijn(2, k)?;
    let i = (n >> k).max(1) as usize;
    Ok((k, db_power(&d, i)))
}

/// Compresses `d^i` with the block coder under [`block_budget_bits`] and
/// with the full-memory BWT + DC + AC pipeline.
pub fn separation_experiment(
    n: u64,
    c: f64,
    epsilon: f64,
) -> Result<SeparationReport, AdversaryError> {
    let plan = BlockPlan::new(c, epsilon)?;
    let (k, s) = separation_input(n, c, epsilon)?;
    let data = letters(&s);

    let budget_bits = block_budget_bits(n, c);
    let mut block = CompressOptions::new(PipelineId::BlockKth);
    block.plan = plan;
    block.machine = MachineConfig::new(ModelKind::Standard, budget_bits);
    let b = compress(&data, &block)?;

    let full = compress(&data, &CompressOptions::new(PipelineId::BwtDcAc))?;
    let size_block_bits = 8 * b.bytes.len() as u64;
    let size_full_bits = 8 * full.bytes.len() as u64;
    Ok(SeparationReport {
        n: s.len() as u64,
        c,
        epsilon,
        k,
        sigma: 2,
        power: s.len() >> k,
        block_len: b.header.block_len,
        blocks: b.block_lens.len(),
        budget_bits,
        block_peak_memory_bits: b.ledger.peak_memory_bits,
        size_block_bits,
        size_full_bits,
        ratio: size_block_bits as f64 / size_full_bits as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{hk, hk_cyclic};
    use crate::pipelines::block_encode;

    #[test]
    fn small_sequences() {
        assert_eq!(letters(&de_bruijn(2, 2).unwrap().d), b"aabb");
        assert_eq!(letters(&de_bruijn(2, 1).unwrap().d), b"ab");
        assert_eq!(letters(&de_bruijn(2, 3).unwrap().d), b"aaababbb");
        assert_eq!(letters(&de_bruijn(3, 2).unwrap().d), b"aabacbbcc");
    }

    #[test]
    fn generated_prefixes_verify() {
        for sigma in 2..=4 {
            for k in 1..=6 {
                let d = de_bruijn(sigma, k).unwrap();
                assert_eq!(d.d.len() as u64, u64::from(sigma).pow(k));
                assert!(
                    verify_de_bruijn(&d.d, sigma, k).unwrap(),
                    "sigma={sigma} k={k}"
                );
            }
        }
    }

    #[test]
    fn verification_rejects() {
        assert!(!verify_de_bruijn(&[0, 1, 0, 1], 2, 2).unwrap());
        assert!(verify_de_bruijn(&[0, 1, 1], 2, 2).is_err());
        assert!(de_bruijn(1, 3).is_err());
        assert!(de_bruijn(2, 0).is_err());
        assert!(de_bruijn(2, 40).is_err());
    }

    #[test]
    fn powers_have_zero_entropy() {
        assert_eq!(
            letters(&db_power(&de_bruijn(2, 2).unwrap(), 2)),
            b"aabbaabb"
        );
        for (sigma, k) in [(2, 3), (3, 2), (2, 5)] {
            let d = de_bruijn(sigma, k).unwrap();
            for i in [4, 16] {
                let s = db_power(&d, i);
                assert_eq!(s.len(), i * d.d.len());
                assert!(hk_cyclic(&s, k as usize).unwrap().abs() < 1e-12);
                let bound = k as f64 / s.len() as f64 * f64::from(sigma).log2();
                assert!(hk(&s, k as usize).unwrap() <= bound + 1e-12);
            }
        }
    }

    #[test]
    fn experiment_parameters() {
        assert_eq!(adversary_k(1 << 16, 0.5, 0.25), 10);
        assert_eq!(adversary_k(1 << 12, 0.5, 0.25), 8);
        let r = separation_experiment(1 << 12, 0.5, 0.25).unwrap();
        assert_eq!(r.k, 8);
        assert_eq!(r.n, 4096);
        assert_eq!(r.block_len, 23);
        assert_eq!(r.blocks, 179);
        assert!(r.block_peak_memory_bits <= r.budget_bits);
        assert!(r.size_full_bits <= r.size_block_bits);
        assert!(separation_experiment(1 << 12, 0.2, 0.25).is_err());
    }

    #[test]
    fn smaller_memory_never_helps() {
        let d = de_bruijn(2, 8).unwrap();
        let s = db_power(&d, 16);
        let sizes: Vec<usize> = [0.7, 0.5, 0.3]
            .iter()
            .map(|&c| {
                let plan = BlockPlan::new(c, 0.2).unwrap();
                block_encode(&s, 2, &plan, true).payload.len()
            })
            .collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{sizes:?}");
    }
}
