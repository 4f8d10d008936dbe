//! Empirical entropy of finite strings.
//!
//! `hk` follows the linear convention: only positions `k..n` have a full
//! length-k context, so the context groups together hold `n - k`
//! characters, while the normalisation is still by `n`. `hk_cyclic` wraps
//! contexts around the end of the string and covers all `n` positions.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EntropyError {
    #[error("entropy of an empty string is undefined")]
    Empty,
}

/// Counts of the characters following each length-k context.
#[derive(Debug, Clone)]
pub struct ContextStats<T> {
    pub k: usize,
    pub n: usize,
    pub table: HashMap<Vec<T>, HashMap<T, usize>>,
}

impl<T: Copy + Eq + Hash> ContextStats<T> {
    pub fn linear(s: &[T], k: usize) -> Self {
        let mut table: HashMap<Vec<T>, HashMap<T, usize>> = HashMap::new();
        for i in k..s.len() {
            *table
                .entry(s[i - k..i].to_vec())
                .or_default()
                .entry(s[i])
                .or_default() += 1;
        }
        ContextStats {
            k,
            n: s.len(),
            table,
        }
    }

    pub fn cyclic(s: &[T], k: usize) -> Self {
        let n = s.len();
        let mut table: HashMap<Vec<T>, HashMap<T, usize>> = HashMap::new();
        for i in 0..n {
            let ctx: Vec<T> = (0..k).map(|j| s[(i + n * k - k + j) % n]).collect();
            *table.entry(ctx).or_default().entry(s[i]).or_default() += 1;
        }
        ContextStats { k, n, table }
    }

    /// Number of characters covered by some context.
    pub fn covered(&self) -> usize {
        self.table.values().flat_map(|m| m.values()).sum()
    }

    /// Σ_w |w_s| H_0(w_s), in bits.
    pub fn total_bits(&self) -> f64 {
        self.table
            .values()
            .map(|counts| group_bits(counts.values().copied()))
            .sum()
    }
}

/// |w| H_0(w) for a group with the given character counts.
fn group_bits(counts: impl Iterator<Item = usize> + Clone) -> f64 {
    let total: usize = counts.clone().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let c = c as f64;
            c * (total / c).log2()
        })
        .sum()
}

pub fn h0<T: Copy + Eq + Hash>(s: &[T]) -> Result<f64, EntropyError> {
    hk(s, 0)
}

pub fn hk<T: Copy + Eq + Hash>(s: &[T], k: usize) -> Result<f64, EntropyError> {
    if s.is_empty() {
        return Err(EntropyError::Empty);
    }
    Ok(ContextStats::linear(s, k).total_bits() / s.len() as f64)
}

pub fn hk_cyclic<T: Copy + Eq + Hash>(s: &[T], k: usize) -> Result<f64, EntropyError> {
    if s.is_empty() {
        return Err(EntropyError::Empty);
    }
    Ok(ContextStats::cyclic(s, k).total_bits() / s.len() as f64)
}

/// Whether |a|H_k(a) + |b|H_k(b) ≤ |ab|H_k(ab) holds to within 1e-9.
pub fn superadditive_check<T: Copy + Eq + Hash>(a: &[T], b: &[T], k: usize) -> bool {
    if a.is_empty() || b.is_empty() {
        return true;
    }
    let parts = ContextStats::linear(a, k).total_bits() + ContextStats::linear(b, k).total_bits();
    let ab = [a, b].concat();
    parts <= ContextStats::linear(&ab, k).total_bits() + 1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub n: usize,
    pub sigma: usize,
    /// `h[k]` is H_k in bits per character; `h[0]` is H_0.
    pub h: Vec<f64>,
}

impl EntropyReport {
    pub fn h0(&self) -> f64 {
        self.h[0]
    }

    pub fn hk(&self, k: usize) -> Option<f64> {
        self.h.get(k).copied()
    }
}

/// H_0 through H_max_k. Empty input reports zeros.
pub fn report<T: Copy + Eq + Hash + Ord>(s: &[T], max_k: usize) -> EntropyReport {
    let sigma = s.iter().collect::<BTreeSet<_>>().len();
    let h = (0..=max_k).map(|k| hk(s, k).unwrap_or(0.0)).collect();
    EntropyReport {
        n: s.len(),
        sigma,
        h,
    }
}
