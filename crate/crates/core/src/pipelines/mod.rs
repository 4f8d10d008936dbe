//! Compressors built from the transforms and coders, the block scheme with
//! its memory/redundancy tradeoff, and the container format.
//!
//! Rank-level functions (`encode_*`/`decode_*`) work on strings over
//! `0..sigma` and return bare payloads. [`compress`] and [`decompress`]
//! work on bytes, run the streaming part of each pipeline on a simulated
//! machine and frame the result as a container.

mod alphabet;
mod block;
mod container;
mod payload;

pub use alphabet::Alphabet;
pub use block::{
    block_decode, block_encode, block_memory_bits, encode_block, BlockEncoding, BlockPlan,
    BlockSizer, INITIAL_ESTIMATE,
};
pub use container::{Container, ContainerHeader, K_AUTO, MAGIC};
pub use payload::{
    dc_ac_decode, dc_ac_encode, dc_ac_memory_bits, mtf_init, mtf_rle_ac_decode, mtf_rle_ac_encode,
    MtfRleEncoder,
};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::coders::{kth_order_decode, kth_order_encode, CoderError, KthEncoder};
use crate::model_vm::{
    Direction, Machine, MachineConfig, MachineError, MachineLedger, ModelKind, TapeId,
};
use crate::stream_bwt::records::{char_record, parse_char};
use crate::stream_st::{default_k_max, streamsort_st, streamsort_st_best_k, StError};
use crate::transforms::{
    bwt, bwt_inverse_naive, check_alphabet, st_forward, SentinelString, TransformError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("malformed container: {0}")]
    Format(String),
    #[error(transparent)]
    Coder(#[from] CoderError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Stream(#[from] StError),
    #[error("invalid block plan: {0}")]
    Plan(String),
    #[error("{0} containers cannot be decoded")]
    EncodeOnly(PipelineId),
    #[error("invalid input: {0}")]
    Input(String),
}

impl PipelineError {
    pub fn is_budget(&self) -> bool {
        match self {
            PipelineError::Machine(e) | PipelineError::Stream(StError::Machine(e)) => e.is_budget(),
            _ => false,
        }
    }

    /// Errors caused by a damaged or foreign container.
    pub fn is_format(&self) -> bool {
        matches!(
            self,
            PipelineError::Format(_) | PipelineError::Coder(_) | PipelineError::Transform(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PipelineId {
    BwtMtfRleAc,
    BwtDcAc,
    StDcAc,
    BlockKth,
    KthOrder,
}

impl PipelineId {
    pub const ALL: [PipelineId; 5] = [
        PipelineId::BwtMtfRleAc,
        PipelineId::BwtDcAc,
        PipelineId::StDcAc,
        PipelineId::BlockKth,
        PipelineId::KthOrder,
    ];

    pub fn code(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(usize::from(code).checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            PipelineId::BwtMtfRleAc => "bwt-mtf-rle-ac",
            PipelineId::BwtDcAc => "bwt-dc-ac",
            PipelineId::StDcAc => "st-dc-ac",
            PipelineId::BlockKth => "block-kth",
            PipelineId::KthOrder => "kth-order",
        }
    }

    /// False only for the ST pipeline, which has no inverse.
    pub fn decodable(self) -> bool {
        self != PipelineId::StDcAc
    }

    /// The model the pipeline's streaming part runs in by default.
    pub fn default_model(self) -> ModelKind {
        match self {
            PipelineId::StDcAc => ModelKind::StreamSort,
            _ => ModelKind::Standard,
        }
    }
}

impl fmt::Display for PipelineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PipelineId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown pipeline `{s}`"))
    }
}

pub fn encode_bwt_mtf_rle_ac(s: &[u32], sigma: u32) -> Result<Vec<u8>, PipelineError> {
    check_alphabet(s, sigma)?;
    Ok(mtf_rle_ac_encode(&bwt(s), sigma))
}

pub fn decode_bwt_mtf_rle_ac(
    payload: &[u8],
    n: u64,
    sigma: u32,
) -> Result<Vec<u32>, PipelineError> {
    let t = mtf_rle_ac_decode(payload, n + 1, sigma)?;
    Ok(bwt_inverse_naive(&t)?)
}

pub fn encode_bwt_dc_ac(s: &[u32], sigma: u32) -> Result<Vec<u8>, PipelineError> {
    check_alphabet(s, sigma)?;
    Ok(dc_ac_encode(&bwt(s), sigma))
}

pub fn decode_bwt_dc_ac(payload: &[u8], n: u64, sigma: u32) -> Result<Vec<u32>, PipelineError> {
    let t = dc_ac_decode(payload, n + 1, sigma)?;
    Ok(bwt_inverse_naive(&t)?)
}

/// `DC(ST(s, k))` arithmetic-coded; there is no decoder.
pub fn encode_st_dc_ac(s: &[u32], sigma: u32, k: usize) -> Result<Vec<u8>, PipelineError> {
    check_alphabet(s, sigma)?;
    Ok(dc_ac_encode(&st_forward(s, k), sigma))
}

/// Per-k payload sizes and the shortest, smallest k on ties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StChoice {
    pub k: usize,
    pub payload: Vec<u8>,
    pub sizes_bits: Vec<u64>,
}

pub fn encode_st_dc_ac_best(
    s: &[u32],
    sigma: u32,
    k_max: usize,
) -> Result<StChoice, PipelineError> {
    check_alphabet(s, sigma)?;
    let mut sizes_bits = Vec::with_capacity(k_max + 1);
    let mut best: Option<(usize, Vec<u8>)> = None;
    for k in 0..=k_max {
        let p = dc_ac_encode(&st_forward(s, k), sigma);
        sizes_bits.push(8 * p.len() as u64);
        if best.as_ref().is_none_or(|(_, b)| p.len() < b.len()) {
            best = Some((k, p));
        }
    }
    let (k, payload) = best.expect("k = 0 is always tried");
    Ok(StChoice {
        k,
        payload,
        sizes_bits,
    })
}

pub fn encode_kth(s: &[u32], sigma: u32, k: usize) -> Result<Vec<u8>, PipelineError> {
    Ok(kth_order_encode(s, sigma, k)?)
}

pub fn decode_kth(payload: &[u8], n: u64, sigma: u32, k: usize) -> Result<Vec<u32>, PipelineError> {
    Ok(kth_order_decode(payload, n as usize, sigma, k)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressOptions {
    pub pipeline: PipelineId,
    /// Context order; `None` selects the best k for the ST pipeline.
    pub k: Option<usize>,
    pub plan: BlockPlan,
    pub known_n: bool,
    pub machine: MachineConfig,
    /// Use the identity alphabet `0..sigma` instead of inferring one.
    pub sigma: Option<u32>,
    /// Record one line per machine pass.
    pub trace: bool,
}

impl CompressOptions {
    pub fn new(pipeline: PipelineId) -> Self {
        CompressOptions {
            pipeline,
            k: match pipeline {
                PipelineId::StDcAc => None,
                PipelineId::KthOrder => Some(2),
                _ => Some(0),
            },
            plan: BlockPlan::default(),
            known_n: true,
            machine: MachineConfig::unbounded(pipeline.default_model()),
            sigma: None,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Compressed {
    pub bytes: Vec<u8>,
    pub header: ContainerHeader,
    pub ledger: MachineLedger,
    /// ST pipeline only: payload bits for each k tried.
    pub st_sizes_bits: Vec<u64>,
    /// Block pipeline only: characters per block.
    pub block_lens: Vec<u64>,
    pub trace: Vec<String>,
}

fn rank_bytes(ranks: &[u32]) -> Vec<u8> {
    ranks.iter().map(|&r| r as u8).collect()
}

fn header_k(k: usize) -> Result<u8, PipelineError> {
    u8::try_from(k)
        .ok()
        .filter(|&k| k != K_AUTO)
        .ok_or_else(|| PipelineError::Input(format!("k = {k} does not fit the container")))
}

/// One pass over a transform loaded on the input tape, coding it with a
/// streaming move-to-front coder.
fn run_mtf(m: &mut Machine, sigma: u32) -> Result<Vec<u8>, PipelineError> {
    let bits = MtfRleEncoder::memory_bits(sigma);
    m.charge_memory(bits)?;
    let mut enc = MtfRleEncoder::new(sigma);
    let mut head = m.begin_pass(TapeId::Input, Direction::Forward)?;
    while let Some(r) = m.read(&mut head) {
        let c = parse_char(&r).map_err(|e| PipelineError::Input(e.to_string()))?;
        enc.push(c.unwrap_or(sigma));
    }
    m.end_pass(head)?;
    let payload = enc.finish();
    m.emit(payload.clone());
    m.release_memory(bits)?;
    Ok(payload)
}

/// One pass over a transform, buffered and distance coded.
fn run_dc(m: &mut Machine, sigma: u32, len: u64) -> Result<Vec<u8>, PipelineError> {
    let bits = dc_ac_memory_bits(len, sigma);
    m.charge_memory(bits)?;
    let mut symbols = Vec::with_capacity(len as usize);
    let mut head = m.begin_pass(TapeId::Input, Direction::Forward)?;
    while let Some(r) = m.read(&mut head) {
        symbols.push(parse_char(&r).map_err(|e| PipelineError::Input(e.to_string()))?);
    }
    m.end_pass(head)?;
    let t = SentinelString::from_options(symbols)?;
    let payload = dc_ac_encode(&t, sigma);
    m.emit(payload.clone());
    m.release_memory(bits)?;
    Ok(payload)
}

fn run_kth(m: &mut Machine, sigma: u32, k: usize) -> Result<Vec<u8>, PipelineError> {
    let mut enc = KthEncoder::new(sigma, k)?;
    let mut charged = 128 + enc.bank().memory_bits();
    m.charge_memory(charged)?;
    let mut head = m.begin_pass(TapeId::Input, Direction::Forward)?;
    while let Some(r) = m.read(&mut head) {
        if enc.push(u32::from(r[0]))? {
            let now = 128 + enc.bank().memory_bits();
            m.charge_memory(now - charged)?;
            charged = now;
        }
    }
    m.end_pass(head)?;
    let payload = enc.finish();
    m.emit(payload.clone());
    m.release_memory(charged)?;
    Ok(payload)
}

fn run_blocks(
    m: &mut Machine,
    sigma: u32,
    plan: &BlockPlan,
    known_n: Option<u64>,
) -> Result<(Vec<u8>, Vec<u64>), PipelineError> {
    let mut sizer = plan.sizer(known_n);
    let mut payload = Vec::new();
    let mut lens = Vec::new();
    let mut head = m.begin_pass(TapeId::Input, Direction::Forward)?;
    let mut pos = 0u64;
    let mut block = Vec::new();
    let mut target = 0u64;
    let mut charged = 0u64;
    loop {
        let next = m.read(&mut head);
        if block.is_empty() {
            if next.is_none() {
                break;
            }
            target = sizer.next_len(pos);
            charged = block_memory_bits(target, sigma);
            m.charge_memory(charged)?;
        }
        if let Some(r) = &next {
            block.push(u32::from(r[0]));
            pos += 1;
        }
        if block.len() as u64 == target || (next.is_none() && !block.is_empty()) {
            let start = payload.len();
            encode_block(&block, sigma, &mut payload);
            m.emit(payload[start..].to_vec());
            lens.push(block.len() as u64);
            block.clear();
            m.release_memory(charged)?;
        }
        if next.is_none() {
            break;
        }
    }
    m.end_pass(head)?;
    Ok((payload, lens))
}

/// Compresses `data` into a container.
pub fn compress(data: &[u8], opts: &CompressOptions) -> Result<Compressed, PipelineError> {
    let alphabet = match opts.sigma {
        Some(sigma) => Alphabet::identity(sigma)?,
        None => Alphabet::infer(data),
    };
    let sigma = alphabet.sigma();
    let s = alphabet.to_ranks(data)?;
    let n = s.len() as u64;
    let cfg = opts.machine.clone();
    let trace;
    let traced = |mut m: Machine| {
        if opts.trace {
            m.enable_trace();
        }
        m
    };
    let mut st_sizes_bits = Vec::new();
    let mut block_lens = Vec::new();
    let mut block_len = 0;
    let mut k = opts.k.unwrap_or(0);

    let (payload, ledger) = match opts.pipeline {
        PipelineId::BwtMtfRleAc | PipelineId::BwtDcAc => {
            let t = bwt(&s);
            let records = t.iter().map(|c| char_record(c.copied())).collect();
            let mut m = traced(Machine::with_records(cfg, records)?);
            let payload = if opts.pipeline == PipelineId::BwtMtfRleAc {
                run_mtf(&mut m, sigma)?
            } else {
                run_dc(&mut m, sigma, n + 1)?
            };
            trace = m.trace_lines().to_vec();
            (payload, m.ledger())
        }
        PipelineId::KthOrder => {
            let mut m = traced(Machine::new(cfg, &rank_bytes(&s))?);
            let payload = run_kth(&mut m, sigma, k)?;
            trace = m.trace_lines().to_vec();
            (payload, m.ledger())
        }
        PipelineId::BlockKth => {
            let known = opts.known_n.then_some(n);
            block_len = opts.plan.sizer(known).next_len(0);
            let mut m = traced(Machine::new(cfg, &rank_bytes(&s))?);
            let (payload, lens) = run_blocks(&mut m, sigma, &opts.plan, known)?;
            block_lens = lens;
            trace = m.trace_lines().to_vec();
            (payload, m.ledger())
        }
        PipelineId::StDcAc => {
            let bytes = rank_bytes(&s);
            match opts.k {
                Some(fixed) => {
                    let mut m = traced(Machine::new(cfg, &bytes)?);
                    let run = streamsort_st(&mut m, fixed, sigma)?;
                    let payload = dc_ac_encode(&run.output, sigma);
                    st_sizes_bits.push(8 * payload.len() as u64);
                    trace = m.trace_lines().to_vec();
                    (payload, m.ledger())
                }
                None => {
                    let best = streamsort_st_best_k(
                        &bytes,
                        sigma,
                        default_k_max(n, sigma),
                        &cfg,
                        opts.trace,
                        |t| dc_ac_encode(t, sigma),
                    )?;
                    k = best.k;
                    st_sizes_bits = best.sizes_bits;
                    trace = best.trace;
                    (best.payload, best.ledger)
                }
            }
        }
    };

    let header = ContainerHeader {
        pipeline: opts.pipeline,
        sigma,
        k: header_k(k)?,
        n,
        block_len,
        payload_bits: 8 * payload.len() as u64,
    };
    let container = Container {
        header: header.clone(),
        alphabet: alphabet.symbols().to_vec(),
        payload,
    };
    Ok(Compressed {
        bytes: container.to_bytes(),
        header,
        ledger,
        st_sizes_bits,
        block_lens,
        trace,
    })
}

/// Parses a container and reproduces the original bytes.
pub fn decompress(bytes: &[u8]) -> Result<Vec<u8>, PipelineError> {
    let c = Container::parse(bytes)?;
    let h = &c.header;
    let alphabet = Alphabet::from_symbols(c.alphabet.clone())?;
    let (n, sigma) = (h.n, h.sigma);
    let ranks = match h.pipeline {
        PipelineId::BwtMtfRleAc => decode_bwt_mtf_rle_ac(&c.payload, n, sigma)?,
        PipelineId::BwtDcAc => decode_bwt_dc_ac(&c.payload, n, sigma)?,
        PipelineId::BlockKth => block_decode(&c.payload, n, sigma)?,
        PipelineId::KthOrder => decode_kth(&c.payload, n, sigma, usize::from(h.k))?,
        PipelineId::StDcAc => return Err(PipelineError::EncodeOnly(h.pipeline)),
    };
    if ranks.len() as u64 != n {
        return Err(PipelineError::Format(
            "decoded length differs from the header".into(),
        ));
    }
    alphabet.to_bytes(&ranks)
}
