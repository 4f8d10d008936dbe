use super::container::{read_varint, write_varint};
use super::payload::{dc_ac_decode, dc_ac_encode, dc_ac_memory_bits};
use super::PipelineError;
use crate::ceil_log2;
use crate::transforms::{bwt, bwt_inverse_naive};

/// Starting estimate of `n` when the length is not known in advance.
pub const INITIAL_ESTIMATE: u64 = 16;

/// Block lengths `⌈n^(c − ε/2)⌉` for constants `1 − ε > c > ε > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockPlan {
    pub c: f64,
    pub epsilon: f64,
}

impl Default for BlockPlan {
    fn default() -> Self {
        BlockPlan {
            c: 0.5,
            epsilon: 0.25,
        }
    }
}

impl BlockPlan {
    pub fn new(c: f64, epsilon: f64) -> Result<Self, PipelineError> {
        if !(1.0 - epsilon > c && c > epsilon && epsilon > 0.0) {
            return Err(PipelineError::Plan(format!(
                "need 1 - epsilon > c > epsilon > 0, got c = {c}, epsilon = {epsilon}"
            )));
        }
        Ok(BlockPlan { c, epsilon })
    }

    pub fn exponent(&self) -> f64 {
        self.c - self.epsilon / 2.0
    }

    pub fn block_len(&self, n: u64) -> u64 {
        let len = ((n.max(1) as f64).powf(self.exponent()) - 1e-9).ceil();
        (len as u64).max(1)
    }

    pub fn sizer(&self, known_n: Option<u64>) -> BlockSizer {
        BlockSizer {
            plan: *self,
            fixed: known_n.map(|n| self.block_len(n)),
            estimate: INITIAL_ESTIMATE,
        }
    }

    /// Lengths of the blocks covering `n` characters.
    pub fn boundaries(&self, n: u64, known_n: bool) -> Vec<u64> {
        let mut sizer = self.sizer(known_n.then_some(n));
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < n {
            let len = sizer.next_len(pos).min(n - pos);
            out.push(len);
            pos += len;
        }
        out
    }
}

/// Online choice of block lengths. With unknown `n` the estimate doubles
/// while the block start has reached it, and each block uses the estimate
/// current at its start.
#[derive(Debug, Clone)]
pub struct BlockSizer {
    plan: BlockPlan,
    fixed: Option<u64>,
    estimate: u64,
}

impl BlockSizer {
    pub fn next_len(&mut self, pos: u64) -> u64 {
        if let Some(len) = self.fixed {
            return len;
        }
        while pos >= self.estimate {
            self.estimate *= 2;
        }
        self.plan.block_len(self.estimate)
    }

    pub fn estimate(&self) -> u64 {
        self.estimate
    }
}

/// Charge for compressing one block of `len` characters with the stand-in
/// coder: the block, its suffix ranks during the BWT, and the coder state.
pub fn block_memory_bits(len: u64, sigma: u32) -> u64 {
    2 * len * u64::from(ceil_log2(len + 2)) + dc_ac_memory_bits(len + 1, sigma)
}

/// One frame: block length, payload length in bytes, payload.
pub fn encode_block(block: &[u32], sigma: u32, out: &mut Vec<u8>) -> u64 {
    let payload = dc_ac_encode(&bwt(block), sigma);
    let start = out.len();
    write_varint(out, block.len() as u64);
    write_varint(out, payload.len() as u64);
    out.extend_from_slice(&payload);
    8 * (out.len() - start) as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEncoding {
    pub payload: Vec<u8>,
    pub block_lens: Vec<u64>,
    /// Frame size of each block in bits.
    pub block_bits: Vec<u64>,
}

pub fn block_encode(s: &[u32], sigma: u32, plan: &BlockPlan, known_n: bool) -> BlockEncoding {
    let block_lens = plan.boundaries(s.len() as u64, known_n);
    let mut payload = Vec::new();
    let mut block_bits = Vec::with_capacity(block_lens.len());
    let mut pos = 0;
    for &len in &block_lens {
        let end = pos + len as usize;
        block_bits.push(encode_block(&s[pos..end], sigma, &mut payload));
        pos = end;
    }
    BlockEncoding {
        payload,
        block_lens,
        block_bits,
    }
}

/// Decodes frames until `n` characters are recovered.
pub fn block_decode(payload: &[u8], n: u64, sigma: u32) -> Result<Vec<u32>, PipelineError> {
    let mut out = Vec::with_capacity(n as usize);
    let mut pos = 0;
    while (out.len() as u64) < n {
        let len = read_varint(payload, &mut pos)?;
        let bytes = read_varint(payload, &mut pos)? as usize;
        if len == 0 || out.len() as u64 + len > n {
            return Err(PipelineError::Format(format!(
                "block of {len} characters does not fit"
            )));
        }
        let frame = payload
            .get(pos..pos + bytes)
            .ok_or_else(|| PipelineError::Format("truncated block frame".into()))?;
        pos += bytes;
        let t = dc_ac_decode(frame, len + 1, sigma)?;
        out.extend(bwt_inverse_naive(&t)?);
    }
    if pos != payload.len() {
        return Err(PipelineError::Format(format!(
            "{} bytes after the last block",
            payload.len() - pos
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn plan_constraints() {
        assert!(BlockPlan::new(0.5, 0.25).is_ok());
        assert!(BlockPlan::new(0.2, 0.25).is_err());
        assert!(BlockPlan::new(0.8, 0.25).is_err());
        assert!(BlockPlan::new(0.5, 0.0).is_err());
    }

    #[test]
    fn known_length_blocks() {
        let plan = BlockPlan::new(0.5, 0.25).unwrap();
        // 4096^0.375 = 2^4.5 ≈ 22.6
        assert_eq!(plan.block_len(4096), 23);
        let b = plan.boundaries(4096, true);
        assert_eq!(b.len(), 179);
        assert!(b[..178].iter().all(|&l| l == 23));
        assert_eq!(b[178], 4096 - 178 * 23);
    }

    #[test]
    fn unknown_length_blocks_follow_the_doubling_rule() {
        let plan = BlockPlan::new(0.6, 0.2).unwrap();
        for n in [0u64, 1, 15, 16, 17, 100, 1000, 5000] {
            // reference: estimate doubles until it exceeds the block start
            let mut expected = Vec::new();
            let mut pos = 0u64;
            while pos < n {
                let mut est = 16u64;
                while est <= pos {
                    est *= 2;
                }
                let len = ((est as f64).powf(0.5) - 1e-9).ceil() as u64;
                let len = len.min(n - pos);
                expected.push(len);
                pos += len;
            }
            assert_eq!(plan.boundaries(n, false), expected, "n = {n}");
        }
    }

    #[test]
    fn block_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let plan = BlockPlan::default();
        for _ in 0..30 {
            let sigma = rng.gen_range(1..5);
            let s: Vec<u32> = (0..rng.gen_range(0..3000))
                .map(|_| rng.gen_range(0..sigma))
                .collect();
            for known in [true, false] {
                let e = block_encode(&s, sigma, &plan, known);
                assert_eq!(e.block_lens.iter().sum::<u64>(), s.len() as u64);
                assert_eq!(e.block_bits.iter().sum::<u64>(), 8 * e.payload.len() as u64);
                assert_eq!(block_decode(&e.payload, s.len() as u64, sigma).unwrap(), s);
            }
        }
    }

    #[test]
    fn single_block_is_the_unblocked_payload() {
        let s: Vec<u32> = b"abracadabra"
            .iter()
            .map(|&c| u32::from(c - b'a'))
            .collect();
        let plan = BlockPlan::new(0.9, 0.05).unwrap();
        let mut plan_one = plan;
        plan_one.c = 1.0;
        let e = block_encode(&s, 18, &plan_one, true);
        assert_eq!(e.block_lens, [11]);
        let direct = dc_ac_encode(&bwt(&s), 18);
        assert_eq!(&e.payload[2..], &direct[..]);
    }

    #[test]
    fn corrupt_frames() {
        let s = vec![0u32, 1, 1, 0, 1, 1, 1, 0];
        let e = block_encode(&s, 2, &BlockPlan::default(), true);
        assert!(block_decode(&e.payload, 9, 2).is_err());
        assert!(block_decode(&e.payload[..e.payload.len() - 1], 8, 2).is_err());
        let mut extra = e.payload.clone();
        extra.push(0);
        assert!(block_decode(&extra, 8, 2).is_err());
    }
}
