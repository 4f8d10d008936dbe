use std::collections::HashMap;

use super::{decode_symbol, encode_symbol, CoderError, FreqModel, RangeDecoder, RangeEncoder};

/// Bits charged per symbol counter of an instantiated context.
pub const CONTEXT_COST_BITS: u64 = 16;

/// One adaptive model per observed length-k context, plus an order-0
/// model for the first k characters.
#[derive(Debug, Clone)]
pub struct ContextModelBank {
    sigma: u32,
    k: usize,
    modulus: u64,
    fallback: FreqModel,
    models: HashMap<u64, FreqModel>,
}

impl ContextModelBank {
    pub fn new(sigma: u32, k: usize) -> Result<Self, CoderError> {
        let modulus = u32::try_from(k)
            .ok()
            .and_then(|k| u64::from(sigma).checked_pow(k))
            .ok_or(CoderError::ContextOverflow { sigma, k })?;
        Ok(ContextModelBank {
            sigma,
            k,
            modulus,
            fallback: FreqModel::new(sigma),
            models: HashMap::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn contexts(&self) -> usize {
        self.models.len()
    }

    /// Charge for the counters of all instantiated models.
    pub fn memory_bits(&self) -> u64 {
        (self.models.len() as u64 + 1) * u64::from(self.sigma) * CONTEXT_COST_BITS
    }

    /// Model for the context `history`, or the fallback while fewer than k
    /// characters have been seen. The flag reports a fresh instantiation.
    fn model(&mut self, history: Option<u64>) -> (&mut FreqModel, bool) {
        match history {
            None => (&mut self.fallback, false),
            Some(h) => {
                let fresh = !self.models.contains_key(&h);
                let sigma = self.sigma;
                (
                    self.models
                        .entry(h)
                        .or_insert_with(|| FreqModel::new(sigma)),
                    fresh,
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct History {
    value: u64,
    seen: usize,
}

impl History {
    fn current(&self, k: usize) -> Option<u64> {
        (self.seen >= k).then_some(self.value)
    }

    fn push(&mut self, sym: u32, sigma: u32, modulus: u64) {
        self.value = ((u128::from(self.value) * u128::from(sigma) + u128::from(sym))
            % u128::from(modulus)) as u64;
        self.seen += 1;
    }
}

#[derive(Debug, Clone)]
pub struct KthEncoder {
    bank: ContextModelBank,
    enc: RangeEncoder,
    history: History,
}

impl KthEncoder {
    pub fn new(sigma: u32, k: usize) -> Result<Self, CoderError> {
        Ok(KthEncoder {
            bank: ContextModelBank::new(sigma, k)?,
            enc: RangeEncoder::new(),
            history: History { value: 0, seen: 0 },
        })
    }

    /// Codes one symbol; returns whether a new context model was created.
    pub fn push(&mut self, sym: u32) -> Result<bool, CoderError> {
        let sigma = self.bank.sigma;
        if sym >= sigma {
            return Err(CoderError::SymbolOutOfRange { symbol: sym, sigma });
        }
        let (model, fresh) = self.bank.model(self.history.current(self.bank.k));
        encode_symbol(&mut self.enc, model, sym);
        self.history.push(sym, sigma, self.bank.modulus);
        Ok(fresh)
    }

    pub fn bank(&self) -> &ContextModelBank {
        &self.bank
    }

    pub fn finish(self) -> Vec<u8> {
        self.enc.finish()
    }
}

#[derive(Debug, Clone)]
pub struct KthDecoder<'a> {
    bank: ContextModelBank,
    dec: RangeDecoder<'a>,
    history: History,
}

impl<'a> KthDecoder<'a> {
    pub fn new(bytes: &'a [u8], sigma: u32, k: usize) -> Result<Self, CoderError> {
        Ok(KthDecoder {
            bank: ContextModelBank::new(sigma, k)?,
            dec: RangeDecoder::new(bytes),
            history: History { value: 0, seen: 0 },
        })
    }

    pub fn next_symbol(&mut self) -> Result<u32, CoderError> {
        let (model, _) = self.bank.model(self.history.current(self.bank.k));
        let sym = decode_symbol(&mut self.dec, model)?;
        self.history.push(sym, self.bank.sigma, self.bank.modulus);
        Ok(sym)
    }

    pub fn finish(self) -> Result<(), CoderError> {
        self.dec.finish()
    }
}

pub fn kth_order_encode(s: &[u32], sigma: u32, k: usize) -> Result<Vec<u8>, CoderError> {
    let mut enc = KthEncoder::new(sigma, k)?;
    for &c in s {
        enc.push(c)?;
    }
    Ok(enc.finish())
}

pub fn kth_order_decode(
    bytes: &[u8],
    n: usize,
    sigma: u32,
    k: usize,
) -> Result<Vec<u32>, CoderError> {
    let mut dec = KthDecoder::new(bytes, sigma, k)?;
    let out = (0..n)
        .map(|_| dec.next_symbol())
        .collect::<Result<Vec<_>, _>>()?;
    dec.finish()?;
    Ok(out)
}
