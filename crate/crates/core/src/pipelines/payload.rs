//! Second-stage coders for transformed strings. The sentinel travels as
//! the extra symbol `sigma`.

use super::PipelineError;
use crate::ceil_log2;
use crate::coders::{
    decode_symbol, encode_symbol, DeltaCoder, FreqModel, RangeDecoder, RangeEncoder,
};
use crate::transforms::{
    dc_decode_with, dc_encode, mtf_decode, rle_decode, MtfList, SentinelString,
};

const CODER_STATE_BITS: u64 = 64;

fn rendered(t: &SentinelString<u32>, sigma: u32) -> Vec<u32> {
    t.clone().render(sigma)
}

fn unrender(symbols: &[u32], sigma: u32) -> Result<SentinelString<u32>, PipelineError> {
    Ok(SentinelString::parse(symbols, &sigma)?)
}

/// The initial move-to-front list: sentinel first, then ranks in order.
pub fn mtf_init(sigma: u32) -> MtfList {
    MtfList(std::iter::once(sigma).chain(0..sigma).collect())
}

/// Streaming move-to-front, run-length and arithmetic coding. Run symbols
/// use an adaptive model over the `sigma + 1` list positions, run lengths
/// a [`DeltaCoder`].
#[derive(Debug, Clone)]
pub struct MtfRleEncoder {
    list: Vec<u32>,
    run: Option<(u32, u64)>,
    symbols: FreqModel,
    lengths: DeltaCoder,
    enc: RangeEncoder,
}

impl MtfRleEncoder {
    pub fn new(sigma: u32) -> Self {
        MtfRleEncoder {
            list: mtf_init(sigma).0,
            run: None,
            symbols: FreqModel::new(sigma + 1),
            lengths: DeltaCoder::new(),
            enc: RangeEncoder::new(),
        }
    }

    /// Charge for the list, the pending run, the models and the coder.
    pub fn memory_bits(sigma: u32) -> u64 {
        let entries = u64::from(sigma) + 1;
        entries * u64::from(ceil_log2(entries).max(1))
            + 64
            + entries * 16
            + DeltaCoder::MEMORY_BITS
            + CODER_STATE_BITS
    }

    /// `sym` in `0..=sigma`, the sentinel being `sigma`.
    pub fn push(&mut self, sym: u32) {
        let i = self
            .list
            .iter()
            .position(|&x| x == sym)
            .expect("symbol in the list");
        self.list[..=i].rotate_right(1);
        let i = i as u32;
        match &mut self.run {
            Some((s, len)) if *s == i => *len += 1,
            _ => {
                self.flush();
                self.run = Some((i, 1));
            }
        }
    }

    fn flush(&mut self) {
        if let Some((s, len)) = self.run.take() {
            encode_symbol(&mut self.enc, &mut self.symbols, s);
            self.lengths.encode(&mut self.enc, len);
        }
    }

    pub fn finish(mut self) -> Vec<u8> {
        self.flush();
        self.enc.finish()
    }
}

pub fn mtf_rle_ac_encode(t: &SentinelString<u32>, sigma: u32) -> Vec<u8> {
    let mut enc = MtfRleEncoder::new(sigma);
    for s in rendered(t, sigma) {
        enc.push(s);
    }
    enc.finish()
}

/// Decodes `len` symbols (sentinel included).
pub fn mtf_rle_ac_decode(
    bytes: &[u8],
    len: u64,
    sigma: u32,
) -> Result<SentinelString<u32>, PipelineError> {
    let mut dec = RangeDecoder::new(bytes);
    let mut symbols = FreqModel::new(sigma + 1);
    let mut lengths = DeltaCoder::new();
    let mut runs = Vec::new();
    let mut produced = 0u64;
    while produced < len {
        let s = decode_symbol(&mut dec, &mut symbols)?;
        let l = lengths.decode(&mut dec)?;
        produced = produced
            .checked_add(l)
            .filter(|&p| p <= len)
            .ok_or_else(|| {
                PipelineError::Format("run lengths exceed the announced length".into())
            })?;
        runs.push((s, l));
    }
    dec.finish()?;
    let ix = rle_decode(&runs)?;
    let s = mtf_decode(&ix, &mtf_init(sigma))?;
    unrender(&s, sigma)
}

/// Distance coding followed by arithmetic coding: first occurrences as
/// `delta(p + 2)` (`delta(1)` for absent symbols), then one `delta(g + 1)`
/// per run, each stream with its own [`DeltaCoder`].
pub fn dc_ac_encode(t: &SentinelString<u32>, sigma: u32) -> Vec<u8> {
    let d = dc_encode(&rendered(t, sigma), sigma + 1).expect("ranks below sigma");
    let mut enc = RangeEncoder::new();
    let mut firsts = DeltaCoder::new();
    for f in &d.first {
        firsts.encode(&mut enc, f.map_or(1, |p| p + 2));
    }
    let mut gaps = DeltaCoder::new();
    for &g in &d.gaps {
        gaps.encode(&mut enc, g + 1);
    }
    enc.finish()
}

/// Charge for distance coding `len` symbols held in a buffer.
pub fn dc_ac_memory_bits(len: u64, sigma: u32) -> u64 {
    let entries = u64::from(sigma) + 1;
    let word = u64::from(ceil_log2(len + 1).max(1));
    len * u64::from(ceil_log2(entries).max(1))
        + entries * word
        + 2 * DeltaCoder::MEMORY_BITS
        + CODER_STATE_BITS
}

pub fn dc_ac_decode(
    bytes: &[u8],
    len: u64,
    sigma: u32,
) -> Result<SentinelString<u32>, PipelineError> {
    let mut dec = RangeDecoder::new(bytes);
    let mut firsts = DeltaCoder::new();
    let first = (0..=sigma)
        .map(|_| Ok(firsts.decode(&mut dec)?.checked_sub(2)))
        .collect::<Result<Vec<_>, PipelineError>>()?;
    let mut gaps = DeltaCoder::new();
    let s = dc_decode_with(&first, len, || {
        gaps.decode(&mut dec)
            .map(|g| g - 1)
            .map_err(|e| crate::transforms::TransformError::MalformedDc(e.to_string()))
    })?;
    dec.finish()?;
    unrender(&s, sigma)
}
