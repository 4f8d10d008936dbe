use super::CoderError;

const TOP: u32 = 1 << 24;

/// 32-bit range encoder with carry propagation.
///
/// The first byte a carry-propagating coder emits is always zero and is
/// dropped; the decoder starts from the next four.
#[derive(Debug, Clone)]
pub struct RangeEncoder {
    low: u64,
    range: u32,
    cache: u8,
    cache_size: u64,
    out: Vec<u8>,
    symbols: u64,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        RangeEncoder {
            low: 0,
            range: u32::MAX,
            cache: 0,
            cache_size: 1,
            out: Vec::new(),
            symbols: 0,
        }
    }

    pub fn encode(&mut self, cum: u32, freq: u32, total: u32) {
        debug_assert!(freq > 0 && cum + freq <= total && total <= 1 << 16);
        let r = self.range / total;
        self.low += u64::from(r) * u64::from(cum);
        self.range = r * freq;
        self.symbols += 1;
        while self.range < TOP {
            self.range <<= 8;
            self.shift_low();
        }
    }

    /// `bits` low bits of `value`, each at probability one half.
    pub fn encode_raw(&mut self, value: u64, bits: u32) {
        for b in (0..bits).rev() {
            self.encode(((value >> b) & 1) as u32, 1, 2);
        }
    }

    fn shift_low(&mut self) {
        if (self.low as u32) < 0xFF00_0000 || self.low >> 32 != 0 {
            let carry = (self.low >> 32) as u8;
            let mut byte = self.cache;
            loop {
                self.out.push(byte.wrapping_add(carry));
                byte = 0xFF;
                self.cache_size -= 1;
                if self.cache_size == 0 {
                    break;
                }
            }
            self.cache = (self.low >> 24) as u8;
        }
        self.cache_size += 1;
        self.low = (self.low & 0x00FF_FFFF) << 8;
    }

    /// Bytes written so far, the dropped leading zero included.
    pub fn bytes_so_far(&self) -> u64 {
        self.out.len() as u64 + self.cache_size
    }

    pub fn finish(mut self) -> Vec<u8> {
        if self.symbols == 0 {
            return Vec::new();
        }
        for _ in 0..5 {
            self.shift_low();
        }
        debug_assert_eq!(self.out[0], 0);
        self.out.remove(0);
        self.out
    }
}

#[derive(Debug, Clone)]
pub struct RangeDecoder<'a> {
    bytes: &'a [u8],
    pos: usize,
    code: u32,
    range: u32,
    started: bool,
    pending: u32,
}

impl<'a> RangeDecoder<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        RangeDecoder {
            bytes,
            pos: 0,
            code: 0,
            range: u32::MAX,
            started: false,
            pending: 0,
        }
    }

    fn next_byte(&mut self) -> Result<u8, CoderError> {
        let b = *self.bytes.get(self.pos).ok_or(CoderError::Truncated)?;
        self.pos += 1;
        Ok(b)
    }

    /// Returns the target count in `0..total`; follow with [`Self::consume`].
    pub fn target(&mut self, total: u32) -> Result<u32, CoderError> {
        if !self.started {
            for _ in 0..4 {
                self.code = (self.code << 8) | u32::from(self.next_byte()?);
            }
            self.started = true;
        }
        self.pending = self.range / total;
        let v = self.code / self.pending;
        if v >= total {
            return Err(CoderError::Corrupt);
        }
        Ok(v)
    }

    pub fn consume(&mut self, cum: u32, freq: u32) -> Result<(), CoderError> {
        self.code -= self.pending * cum;
        self.range = self.pending * freq;
        while self.range < TOP {
            self.code = (self.code << 8) | u32::from(self.next_byte()?);
            self.range <<= 8;
        }
        Ok(())
    }

    pub fn decode_raw(&mut self, bits: u32) -> Result<u64, CoderError> {
        let mut v = 0;
        for _ in 0..bits {
            let b = self.target(2)?;
            self.consume(b, 1)?;
            v = (v << 1) | u64::from(b);
        }
        Ok(v)
    }

    /// Fails unless every byte was consumed.
    pub fn finish(self) -> Result<(), CoderError> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(CoderError::TrailingBytes(self.bytes.len() - self.pos))
        }
    }
}
