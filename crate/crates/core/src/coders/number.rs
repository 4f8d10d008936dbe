use super::{decode_symbol, encode_symbol, CoderError, FreqModel, RangeDecoder, RangeEncoder};

const MAX_PREFIX: usize = 6;

/// Adaptive coding of positive integers along the structure of their Elias
/// delta codewords.
///
/// For `m` with `N` significant bits and `L = ⌊log2 N⌋`, the `L` prefix
/// zeros and the terminating one are coded with one binary model per
/// prefix position, the low `L` bits of `N` with one model per `(L, bit)`,
/// and the `N − 1` mantissa bits of `m` are sent raw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaCoder {
    prefix: Vec<FreqModel>,
    length: Vec<FreqModel>,
}

/// Index of the model for bit `i` (from the top) of the low part of `N`.
fn length_slot(l: usize, i: usize) -> usize {
    l * (l - 1) / 2 + i
}

impl Default for DeltaCoder {
    fn default() -> Self {
        Self::new()
    }
}

impl DeltaCoder {
    /// Charge for the binary models, two 16-bit counters each.
    pub const MEMORY_BITS: u64 = ((MAX_PREFIX + 1 + MAX_PREFIX * (MAX_PREFIX + 1) / 2) * 32) as u64;

    pub fn new() -> Self {
        DeltaCoder {
            prefix: vec![FreqModel::new(2); MAX_PREFIX + 1],
            length: vec![FreqModel::new(2); MAX_PREFIX * (MAX_PREFIX + 1) / 2],
        }
    }

    /// Codes `m ≥ 1`.
    pub fn encode(&mut self, enc: &mut RangeEncoder, m: u64) {
        assert!(m >= 1, "delta codes start at 1");
        let n = 64 - m.leading_zeros();
        let l = (31 - n.leading_zeros()) as usize;
        for j in 0..l {
            encode_symbol(enc, &mut self.prefix[j], 0);
        }
        if l < MAX_PREFIX {
            encode_symbol(enc, &mut self.prefix[l], 1);
        }
        for i in 0..l {
            let bit = (n >> (l - 1 - i)) & 1;
            encode_symbol(enc, &mut self.length[length_slot(l, i)], bit);
        }
        enc.encode_raw(m & !(1u64 << (n - 1)), n - 1);
    }

    pub fn decode(&mut self, dec: &mut RangeDecoder<'_>) -> Result<u64, CoderError> {
        let mut l = 0;
        while l < MAX_PREFIX && decode_symbol(dec, &mut self.prefix[l])? == 0 {
            l += 1;
        }
        let mut n = 1u32;
        for i in 0..l {
            n = (n << 1) | decode_symbol(dec, &mut self.length[length_slot(l, i)])?;
        }
        if n > 64 {
            return Err(CoderError::Corrupt);
        }
        let low = dec.decode_raw(n - 1)?;
        Ok((1u64 << (n - 1)) | low)
    }
}
