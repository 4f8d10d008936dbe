//! The Schindler transform in the StreamSort model.
//!
//! Characters start as one byte each. Pad passes double every record until
//! it is wide enough to hold a length-`k` context key, a single rewrite pass
//! puts each character behind the key of its `k` predecessors, one stable
//! sort pass orders the tape by key, and a final pass strips the keys and
//! inserts the sentinel.

use thiserror::Error;

use crate::ceil_log2;
use crate::model_vm::{
    Direction, Machine, MachineConfig, MachineError, MachineLedger, ModelKind, TapeId,
};
use crate::stream_bwt::records::char_record;
use crate::transforms::SentinelString;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StError {
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("this algorithm needs the streamsort model, not {0}")]
    WrongModel(ModelKind),
    #[error("context key of {bits} bits (k = {k}) exceeds the {limit}-bit limit")]
    KeyTooWide { k: usize, bits: u64, limit: u64 },
    #[error("alphabet size {0} is outside 1..=256")]
    Sigma(u32),
    #[error("symbol {symbol} at position {position} is outside an alphabet of size {sigma}")]
    OutOfAlphabet {
        symbol: u8,
        position: u64,
        sigma: u32,
    },
}

/// Bits per key character: ranks shift up by one so that 0 can stand for
/// the sentinel.
pub fn key_char_bits(sigma: u32) -> u32 {
    ceil_log2(u64::from(sigma) + 1).max(1)
}

/// Largest admissible key width for `n` characters.
pub fn max_key_bits(n: u64) -> u64 {
    4 * u64::from(ceil_log2(n + 1).max(8))
}

/// Largest `k` whose key fits [`max_key_bits`].
pub fn max_k(n: u64, sigma: u32) -> usize {
    (max_key_bits(n) / u64::from(key_char_bits(sigma))) as usize
}

/// `⌈log_σ (n + 1)⌉`, capped at [`max_k`]; the candidate range for best-k.
pub fn default_k_max(n: u64, sigma: u32) -> usize {
    let per_char = f64::from(sigma.max(2)).log2();
    let k = ((n as f64 + 1.0).log2() / per_char - 1e-9).ceil().max(0.0) as usize;
    k.min(max_k(n, sigma))
}

/// Record width in bits after padding, and the number of pad passes: the
/// width doubles from 8 until it reaches `⌈log2 n⌉ + k·b`.
pub fn padding_plan(n: u64, k: usize, sigma: u32) -> (u64, u32) {
    let target = u64::from(ceil_log2(n)) + k as u64 * u64::from(key_char_bits(sigma));
    let mut width = 8u64;
    let mut passes = 0;
    while width < target {
        width *= 2;
        passes += 1;
    }
    (width, passes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StRun {
    pub output: SentinelString<u32>,
    pub pad_passes: u32,
    pub record_bits: u64,
}

/// Packs key symbols MSB-first, `bits` each, into whole bytes.
fn pack_key(symbols: &[u32], bits: u32, out: &mut Vec<u8>) {
    let total = symbols.len() * bits as usize;
    let start = out.len();
    out.resize(start + total.div_ceil(8), 0);
    let mut pos = 0;
    for &sym in symbols {
        for b in (0..bits).rev() {
            if (sym >> b) & 1 == 1 {
                out[start + pos / 8] |= 0x80 >> (pos % 8);
            }
            pos += 1;
        }
    }
}

/// Computes `ST(s, k)` for the input tape (one byte per character, ranks
/// below `sigma`), writing it to the output tape with the sentinel as the
/// empty record.
pub fn streamsort_st(m: &mut Machine, k: usize, sigma: u32) -> Result<StRun, StError> {
    if m.model() != ModelKind::StreamSort {
        return Err(StError::WrongModel(m.model()));
    }
    if !(1..=256).contains(&sigma) {
        return Err(StError::Sigma(sigma));
    }

    m.charge_memory(64)?;
    let mut head = m.begin_pass(TapeId::Input, Direction::Forward)?;
    let mut n = 0u64;
    let mut bad = None;
    while let Some(r) = m.read(&mut head) {
        if bad.is_none() && (r.len() != 1 || u32::from(r[0]) >= sigma) {
            bad = Some(StError::OutOfAlphabet {
                symbol: r.first().copied().unwrap_or(0),
                position: n,
                sigma,
            });
        }
        n += 1;
    }
    m.end_pass(head)?;
    m.release_memory(64)?;
    if let Some(e) = bad {
        return Err(e);
    }

    let b = key_char_bits(sigma);
    let key_bits = k as u64 * u64::from(b);
    if key_bits > max_key_bits(n) {
        return Err(StError::KeyTooWide {
            k,
            bits: key_bits,
            limit: max_key_bits(n),
        });
    }
    let control = u64::from(ceil_log2(n + 1).max(1));
    m.charge_memory(control)?;

    let (record_bits, pad_passes) = padding_plan(n, k, sigma);
    let mut width = 8u64;
    for _ in 0..pad_passes {
        m.charge_memory(2 * width)?;
        let mut head = m.begin_rewrite(TapeId::Input)?;
        while let Some(mut r) = m.read(&mut head) {
            r.resize(2 * r.len(), 0);
            m.write(&mut head, r)?;
        }
        m.end_pass(head)?;
        m.release_memory(2 * width)?;
        width *= 2;
    }

    // key attachment: the tracker holds the last k characters, nearest first
    let key_len = (key_bits as usize).div_ceil(8);
    let attach = key_bits + 8;
    m.charge_memory(attach)?;
    let mut tracker = vec![0u32; k];
    let mut head = m.begin_rewrite(TapeId::Input)?;
    while let Some(r) = m.read(&mut head) {
        let c = r[0];
        let mut rec = Vec::with_capacity(key_len + 1);
        pack_key(&tracker, b, &mut rec);
        rec.push(c);
        m.write(&mut head, rec)?;
        if k > 0 {
            tracker.rotate_right(1);
            tracker[0] = u32::from(c) + 1;
        }
    }
    m.end_pass(head)?;
    let mut sentinel_key = Vec::with_capacity(key_len);
    pack_key(&tracker, b, &mut sentinel_key);
    m.release_memory(attach)?;
    m.charge_memory(key_bits)?;

    m.sort_pass(|r| &r[..key_len], true)?;

    // cleanup: the sentinel is the last character, so it follows every
    // record whose key does not exceed its own
    m.charge_memory(key_bits + 8)?;
    let mut head = m.begin_pass(TapeId::Input, Direction::Forward)?;
    let mut body = Vec::with_capacity(n as usize);
    let mut sentinel = None;
    while let Some(r) = m.read(&mut head) {
        if sentinel.is_none() && r[..key_len] > sentinel_key[..] {
            sentinel = Some(body.len());
            m.emit(char_record(None));
        }
        let c = r[key_len];
        m.emit(char_record(Some(u32::from(c))));
        body.push(u32::from(c));
    }
    let sentinel = sentinel.unwrap_or_else(|| {
        m.emit(char_record(None));
        body.len()
    });
    m.end_pass(head)?;
    m.release_memory(2 * key_bits + 8 + control)?;

    Ok(StRun {
        output: SentinelString { body, sentinel },
        pad_passes,
        record_bits,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestK {
    pub k: usize,
    pub payload: Vec<u8>,
    /// Payload size in bits for each `k` in `0..=k_max`.
    pub sizes_bits: Vec<u64>,
    pub ledger: MachineLedger,
    /// Pass lines of every run, prefixed with `k=<k>`, when tracing.
    pub trace: Vec<String>,
}

/// Runs [`streamsort_st`] on a fresh machine for every `k` in `0..=k_max`,
/// encodes each transform with `encode`, and keeps the shortest payload
/// (smallest `k` on ties). The ledger aggregates all runs.
pub fn streamsort_st_best_k<E>(
    s: &[u8],
    sigma: u32,
    k_max: usize,
    config: &MachineConfig,
    trace: bool,
    mut encode: E,
) -> Result<BestK, StError>
where
    E: FnMut(&SentinelString<u32>) -> Vec<u8>,
{
    let mut ledger = MachineLedger::default();
    let mut best: Option<(usize, Vec<u8>)> = None;
    let mut sizes_bits = Vec::with_capacity(k_max + 1);
    let mut lines = Vec::new();
    for k in 0..=k_max {
        let mut m = Machine::new(config.clone(), s)?;
        if trace {
            m.enable_trace();
        }
        let run = streamsort_st(&mut m, k, sigma)?;
        ledger.absorb(&m.ledger());
        lines.extend(m.trace_lines().iter().map(|l| format!("k={k} {l}")));
        let payload = encode(&run.output);
        sizes_bits.push(8 * payload.len() as u64);
        if best.as_ref().is_none_or(|(_, p)| payload.len() < p.len()) {
            best = Some((k, payload));
        }
    }
    let (k, payload) = best.expect("k = 0 is always tried");
    Ok(BestK {
        k,
        payload,
        sizes_bits,
        ledger,
        trace: lines,
    })
}
