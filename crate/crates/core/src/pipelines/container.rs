use std::io::Cursor;

use super::{PipelineError, PipelineId};

pub const MAGIC: &[u8; 4] = b"SBC1";
/// `k` byte meaning "choose the best k".
pub const K_AUTO: u8 = 255;

/// Container framing: magic, pipeline, sigma (0 for 256), k, then the
/// varints n, block_len and payload_bits. The alphabet map (sigma bytes)
/// and the payload follow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainerHeader {
    pub pipeline: PipelineId,
    pub sigma: u32,
    pub k: u8,
    pub n: u64,
    pub block_len: u64,
    pub payload_bits: u64,
}

fn format(msg: impl Into<String>) -> PipelineError {
    PipelineError::Format(msg.into())
}

pub(crate) fn write_varint(out: &mut Vec<u8>, v: u64) {
    leb128::write::unsigned(out, v).expect("writing to a Vec cannot fail");
}

pub(crate) fn read_varint(bytes: &[u8], pos: &mut usize) -> Result<u64, PipelineError> {
    let mut cur = Cursor::new(&bytes[*pos..]);
    let v = leb128::read::unsigned(&mut cur).map_err(|e| format(format!("bad varint: {e}")))?;
    *pos += cur.position() as usize;
    Ok(v)
}

impl ContainerHeader {
    pub fn write(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(MAGIC);
        out.push(self.pipeline.code());
        out.push((self.sigma % 256) as u8);
        out.push(self.k);
        write_varint(out, self.n);
        write_varint(out, self.block_len);
        write_varint(out, self.payload_bits);
    }

    /// Parses a header and advances `pos` past it.
    pub fn read(bytes: &[u8], pos: &mut usize) -> Result<Self, PipelineError> {
        let fixed = bytes
            .get(*pos..*pos + 7)
            .ok_or_else(|| format("truncated header"))?;
        if &fixed[..4] != MAGIC {
            return Err(format("bad magic"));
        }
        let pipeline = PipelineId::from_code(fixed[4])
            .ok_or_else(|| format(format!("unknown pipeline id {}", fixed[4])))?;
        let sigma = if fixed[5] == 0 {
            256
        } else {
            u32::from(fixed[5])
        };
        let k = fixed[6];
        *pos += 7;
        let n = read_varint(bytes, pos)?;
        let block_len = read_varint(bytes, pos)?;
        let payload_bits = read_varint(bytes, pos)?;
        Ok(ContainerHeader {
            pipeline,
            sigma,
            k,
            n,
            block_len,
            payload_bits,
        })
    }
}

/// A parsed container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub header: ContainerHeader,
    /// Byte value of each rank.
    pub alphabet: Vec<u8>,
    pub payload: Vec<u8>,
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.alphabet.len() + self.payload.len());
        self.header.write(&mut out);
        out.extend_from_slice(&self.alphabet);
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, PipelineError> {
        let mut pos = 0;
        let header = ContainerHeader::read(bytes, &mut pos)?;
        let sigma = header.sigma as usize;
        let alphabet = bytes
            .get(pos..pos + sigma)
            .ok_or_else(|| format("truncated alphabet map"))?
            .to_vec();
        if alphabet.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format("alphabet map is not strictly increasing"));
        }
        pos += sigma;
        if header.payload_bits % 8 != 0 {
            return Err(format("payload is not a whole number of bytes"));
        }
        let payload = &bytes[pos..];
        if payload.len() as u64 != header.payload_bits / 8 {
            return Err(format(format!(
                "header announces {} payload bits, found {}",
                header.payload_bits,
                8 * payload.len()
            )));
        }
        Ok(Container {
            header,
            alphabet,
            payload: payload.to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn header_roundtrip_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let h = ContainerHeader {
                pipeline: PipelineId::ALL[rng.gen_range(0..PipelineId::ALL.len())],
                sigma: rng.gen_range(1..=256),
                k: rng.gen(),
                n: rng.gen::<u64>() >> rng.gen_range(0..64),
                block_len: rng.gen::<u64>() >> rng.gen_range(0..64),
                payload_bits: rng.gen::<u64>() >> rng.gen_range(0..64),
            };
            let mut bytes = Vec::new();
            h.write(&mut bytes);
            let mut pos = 0;
            assert_eq!(ContainerHeader::read(&bytes, &mut pos).unwrap(), h);
            assert_eq!(pos, bytes.len());
        }
    }

    #[test]
    fn layout_is_byte_exact() {
        let h = ContainerHeader {
            pipeline: PipelineId::BwtDcAc,
            sigma: 256,
            k: 3,
            n: 300,
            block_len: 0,
            payload_bits: 16,
        };
        let mut bytes = Vec::new();
        h.write(&mut bytes);
        assert_eq!(bytes, [b'S', b'B', b'C', b'1', 2, 0, 3, 0xAC, 0x02, 0, 16]);
    }

    #[test]
    fn corrupt_containers() {
        let c = Container {
            header: ContainerHeader {
                pipeline: PipelineId::KthOrder,
                sigma: 2,
                k: 1,
                n: 5,
                block_len: 0,
                payload_bits: 16,
            },
            alphabet: vec![b'a', b'b'],
            payload: vec![1, 2],
        };
        let bytes = c.to_bytes();
        assert_eq!(Container::parse(&bytes).unwrap(), c);
        assert!(Container::parse(&bytes[..bytes.len() - 1]).is_err());
        assert!(Container::parse(&bytes[..5]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Container::parse(&bad).is_err());
        let mut bad = bytes.clone();
        bad[4] = 99;
        assert!(Container::parse(&bad).is_err());
        let mut bad = bytes;
        bad.swap(10, 11);
        assert!(Container::parse(&bad).is_err());
    }
}
