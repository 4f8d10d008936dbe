//! Adaptive range coding and the order-k context coder.

mod freq;
mod kth;
mod number;
mod range;

pub use freq::FreqModel;
pub use kth::{
    kth_order_decode, kth_order_encode, ContextModelBank, KthDecoder, KthEncoder, CONTEXT_COST_BITS,
};
pub use number::DeltaCoder;
pub use range::{RangeDecoder, RangeEncoder};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoderError {
    #[error("symbol {symbol} out of range for an alphabet of {sigma}")]
    SymbolOutOfRange { symbol: u32, sigma: u32 },
    #[error("payload ends early")]
    Truncated,
    #[error("{0} unread bytes after the payload")]
    TrailingBytes(usize),
    #[error("payload does not decode")]
    Corrupt,
    #[error("{sigma}^{k} contexts do not fit a 64-bit key")]
    ContextOverflow { sigma: u32, k: usize },
}

/// Encodes `symbol` with `model` and then updates the model.
pub fn encode_symbol(enc: &mut RangeEncoder, model: &mut FreqModel, symbol: u32) {
    let (cum, freq) = model.interval(symbol);
    enc.encode(cum, freq, model.total());
    model.update(symbol);
}

pub fn decode_symbol(dec: &mut RangeDecoder<'_>, model: &mut FreqModel) -> Result<u32, CoderError> {
    let target = dec.target(model.total())?;
    let (symbol, cum, freq) = model.lookup(target);
    dec.consume(cum, freq)?;
    model.update(symbol);
    Ok(symbol)
}

/// Order-0 adaptive arithmetic coding of symbols in `0..sigma`.
pub fn ac_encode(symbols: &[u32], sigma: u32) -> Result<Vec<u8>, CoderError> {
    let mut model = FreqModel::new(sigma);
    let mut enc = RangeEncoder::new();
    for &s in symbols {
        if s >= sigma {
            return Err(CoderError::SymbolOutOfRange { symbol: s, sigma });
        }
        encode_symbol(&mut enc, &mut model, s);
    }
    Ok(enc.finish())
}

pub fn ac_decode(bytes: &[u8], count: usize, sigma: u32) -> Result<Vec<u32>, CoderError> {
    let mut model = FreqModel::new(sigma);
    let mut dec = RangeDecoder::new(bytes);
    let out = (0..count)
        .map(|_| decode_symbol(&mut dec, &mut model))
        .collect::<Result<Vec<_>, _>>()?;
    dec.finish()?;
    Ok(out)
}
