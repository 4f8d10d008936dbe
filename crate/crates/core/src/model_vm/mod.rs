//! Explicit machines for the five streaming models.
//!
//! A [`Machine`] owns an input tape, optional work tapes and a write-only
//! output tape. Algorithms move data only through pass handles, so every
//! sweep of a head is counted, every rewrite is checked against the
//! model's expansion bound, and every register the algorithm declares via
//! [`Machine::charge_memory`] is tracked against the memory budget.

mod extsort;

pub use extsort::merge_sort_tape;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Number of work tapes the Read-Write algorithms in this crate expect.
pub const RW_WORK_TAPES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ModelKind {
    Standard,
    Multipass,
    WStreams,
    StreamSort,
    ReadWrite,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Standard,
        ModelKind::Multipass,
        ModelKind::WStreams,
        ModelKind::StreamSort,
        ModelKind::ReadWrite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Standard => "standard",
            ModelKind::Multipass => "multipass",
            ModelKind::WStreams => "wstreams",
            ModelKind::StreamSort => "streamsort",
            ModelKind::ReadWrite => "readwrite",
        }
    }

    /// Whether the input tape may be replaced during a pass.
    pub fn can_rewrite(self) -> bool {
        matches!(
            self,
            ModelKind::WStreams | ModelKind::StreamSort | ModelKind::ReadWrite
        )
    }

    pub fn can_sort(self) -> bool {
        self == ModelKind::StreamSort
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineConfig {
    pub model: ModelKind,
    pub memory_budget_bits: u64,
    /// Bound on bytes written per rewrite pass relative to the bytes on the
    /// tape before it (W-Streams and StreamSort).
    pub expansion_factor: f64,
    /// Read-Write only.
    pub work_tapes: usize,
    /// Passes charged to the ledger for each sort pass.
    pub sort_pass_cost: u64,
}

impl MachineConfig {
    pub fn new(model: ModelKind, memory_budget_bits: u64) -> Self {
        let work_tapes = if model == ModelKind::ReadWrite {
            RW_WORK_TAPES
        } else {
            0
        };
        MachineConfig {
            model,
            memory_budget_bits,
            expansion_factor: 2.0,
            work_tapes,
            sort_pass_cost: 1,
        }
    }

    /// A configuration with an effectively unbounded memory budget.
    pub fn unbounded(model: ModelKind) -> Self {
        Self::new(model, u64::MAX)
    }

    pub fn with_expansion_factor(mut self, factor: f64) -> Self {
        self.expansion_factor = factor;
        self
    }

    pub fn with_work_tapes(mut self, work_tapes: usize) -> Self {
        self.work_tapes = work_tapes;
        self
    }

    pub fn with_sort_pass_cost(mut self, cost: u64) -> Self {
        self.sort_pass_cost = cost;
        self
    }

    pub fn validate(&self) -> Result<(), MachineError> {
        if self.memory_budget_bits == 0 {
            return Err(MachineError::InvalidConfig(
                "memory budget must be positive".into(),
            ));
        }
        if self.expansion_factor.is_nan() || self.expansion_factor < 1.0 {
            return Err(MachineError::InvalidConfig(format!(
                "expansion factor {} is below 1",
                self.expansion_factor
            )));
        }
        if self.work_tapes > 0 && self.model != ModelKind::ReadWrite {
            return Err(MachineError::InvalidConfig(format!(
                "the {} model has no work tapes",
                self.model
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TapeId {
    Input,
    Work(usize),
    Output,
}

impl fmt::Display for TapeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TapeId::Input => f.write_str("input"),
            TapeId::Work(i) => write!(f, "work{i}"),
            TapeId::Output => f.write_str("output"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    fn label(self) -> &'static str {
        match self {
            Direction::Forward => "fwd",
            Direction::Reverse => "rev",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MachineLedger {
    pub passes: u64,
    pub sort_passes: u64,
    pub peak_memory_bits: u64,
    pub total_output_bits: u64,
    pub per_pass_tape_bits: Vec<u64>,
}

impl MachineLedger {
    /// Folds another run's ledger into this one: counts add, peaks take the max.
    pub fn absorb(&mut self, other: &MachineLedger) {
        self.passes += other.passes;
        self.sort_passes += other.sort_passes;
        self.peak_memory_bits = self.peak_memory_bits.max(other.peak_memory_bits);
        self.total_output_bits += other.total_output_bits;
        self.per_pass_tape_bits
            .extend_from_slice(&other.per_pass_tape_bits);
    }
}

/// A sequence of length-prefixed byte-string records.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tape {
    records: Vec<Vec<u8>>,
}

impl Tape {
    pub fn from_records(records: Vec<Vec<u8>>) -> Self {
        Tape { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[Vec<u8>] {
        &self.records
    }

    /// Payload bytes, excluding the length prefixes.
    pub fn bytes(&self) -> u64 {
        self.records.iter().map(|r| r.len() as u64).sum()
    }

    pub fn into_records(self) -> Vec<Vec<u8>> {
        self.records
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PassMode {
    Read,
    Write,
    Rewrite,
}

/// An open head on one tape. Obtained from [`Machine::begin_pass`],
/// [`Machine::begin_write`] or [`Machine::begin_rewrite`] and returned with
/// [`Machine::end_pass`].
#[derive(Debug)]
#[must_use = "a pass must be closed with Machine::end_pass"]
pub struct PassHandle {
    tape: TapeId,
    number: u64,
    direction: Direction,
    mode: PassMode,
    cursor: usize,
    bytes_in: u64,
    bytes_out: u64,
    limit: Option<u64>,
    pending: Vec<Vec<u8>>,
}

impl PassHandle {
    pub fn tape(&self) -> TapeId {
        self.tape
    }

    pub fn bytes_out(&self) -> u64 {
        self.bytes_out
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MachineError {
    #[error("invalid machine configuration: {0}")]
    InvalidConfig(String),
    #[error("the {0} model allows only one pass over the input")]
    InputPassExhausted(ModelKind),
    #[error("{op} is not available in the {model} model")]
    Unsupported { model: ModelKind, op: &'static str },
    #[error("tape {0} does not exist")]
    NoSuchTape(TapeId),
    #[error("tape {0} already has an open head")]
    TapeBusy(TapeId),
    #[error("head on tape {0} cannot write")]
    NotWritable(TapeId),
    #[error("pass on tape {tape} wrote {written} bytes, over its expansion limit of {limit}")]
    ExpansionExceeded {
        tape: TapeId,
        written: u64,
        limit: u64,
    },
    #[error("memory budget exceeded: {requested} more bits with {in_use} in use, budget {budget}")]
    BudgetExceeded {
        requested: u64,
        in_use: u64,
        budget: u64,
    },
    #[error("released {bits} bits but only {in_use} are charged")]
    ReleaseUnderflow { bits: u64, in_use: u64 },
}

impl MachineError {
    pub fn is_budget(&self) -> bool {
        matches!(self, MachineError::BudgetExceeded { .. })
    }
}

#[derive(Debug, Clone)]
pub struct Machine {
    config: MachineConfig,
    /// Index 0 is the input tape, then the work tapes.
    tapes: Vec<Tape>,
    output: Tape,
    open: Vec<TapeId>,
    ledger: MachineLedger,
    memory_in_use: u64,
    input_passes: u64,
    trace: Option<Vec<String>>,
}

impl Machine {
    /// Loads `input` one byte per record.
    pub fn new(config: MachineConfig, input: &[u8]) -> Result<Self, MachineError> {
        Self::with_records(config, input.iter().map(|&b| vec![b]).collect())
    }

    pub fn with_records(
        config: MachineConfig,
        records: Vec<Vec<u8>>,
    ) -> Result<Self, MachineError> {
        config.validate()?;
        let mut tapes = vec![Tape::from_records(records)];
        tapes.resize_with(1 + config.work_tapes, Tape::default);
        Ok(Machine {
            config,
            tapes,
            output: Tape::default(),
            open: Vec::new(),
            ledger: MachineLedger::default(),
            memory_in_use: 0,
            input_passes: 0,
            trace: None,
        })
    }

    pub fn config(&self) -> &MachineConfig {
        &self.config
    }

    pub fn model(&self) -> ModelKind {
        self.config.model
    }

    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn trace_enabled(&self) -> bool {
        self.trace.is_some()
    }

    /// One line per closed pass, in order.
    pub fn trace_lines(&self) -> &[String] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn ledger(&self) -> MachineLedger {
        self.ledger.clone()
    }

    pub fn memory_in_use(&self) -> u64 {
        self.memory_in_use
    }

    pub fn tape(&self, id: TapeId) -> Result<&Tape, MachineError> {
        match id {
            TapeId::Output => Ok(&self.output),
            _ => Ok(&self.tapes[self.slot(id)?]),
        }
    }

    pub fn output(&self) -> &Tape {
        &self.output
    }

    pub fn take_output(&mut self) -> Vec<Vec<u8>> {
        std::mem::take(&mut self.output).into_records()
    }

    fn slot(&self, id: TapeId) -> Result<usize, MachineError> {
        match id {
            TapeId::Input => Ok(0),
            TapeId::Work(i) if i < self.config.work_tapes => Ok(1 + i),
            _ => Err(MachineError::NoSuchTape(id)),
        }
    }

    fn claim(&mut self, id: TapeId) -> Result<usize, MachineError> {
        let slot = self.slot(id)?;
        if self.open.contains(&id) {
            return Err(MachineError::TapeBusy(id));
        }
        self.open.push(id);
        Ok(slot)
    }

    fn check_direction(&self, direction: Direction) -> Result<(), MachineError> {
        if direction == Direction::Reverse && self.config.model != ModelKind::ReadWrite {
            return Err(MachineError::Unsupported {
                model: self.config.model,
                op: "reverse pass",
            });
        }
        Ok(())
    }

    /// Opens a read head and counts one pass.
    pub fn begin_pass(
        &mut self,
        tape: TapeId,
        direction: Direction,
    ) -> Result<PassHandle, MachineError> {
        self.check_direction(direction)?;
        if tape == TapeId::Output {
            return Err(MachineError::Unsupported {
                model: self.config.model,
                op: "reading the output tape",
            });
        }
        if tape == TapeId::Input
            && self.config.model == ModelKind::Standard
            && self.input_passes >= 1
        {
            return Err(MachineError::InputPassExhausted(ModelKind::Standard));
        }
        let slot = self.claim(tape)?;
        if tape == TapeId::Input {
            self.input_passes += 1;
        }
        self.ledger.passes += 1;
        let cursor = match direction {
            Direction::Forward => 0,
            Direction::Reverse => self.tapes[slot].len(),
        };
        Ok(PassHandle {
            tape,
            number: self.ledger.passes,
            direction,
            mode: PassMode::Read,
            cursor,
            bytes_in: 0,
            bytes_out: 0,
            limit: None,
            pending: Vec::new(),
        })
    }

    /// Opens a head that replaces the tape's contents when the pass closes
    /// (Read-Write model).
    pub fn begin_write(&mut self, tape: TapeId) -> Result<PassHandle, MachineError> {
        if self.config.model != ModelKind::ReadWrite {
            return Err(MachineError::Unsupported {
                model: self.config.model,
                op: "write pass",
            });
        }
        if tape == TapeId::Output {
            return Err(MachineError::NotWritable(tape));
        }
        self.claim(tape)?;
        self.ledger.passes += 1;
        Ok(PassHandle {
            tape,
            number: self.ledger.passes,
            direction: Direction::Forward,
            mode: PassMode::Write,
            cursor: 0,
            bytes_in: 0,
            bytes_out: 0,
            limit: None,
            pending: Vec::new(),
        })
    }

    /// Opens a head that reads the tape front to back while writing its
    /// replacement, bounded by the expansion factor (W-Streams, StreamSort).
    pub fn begin_rewrite(&mut self, tape: TapeId) -> Result<PassHandle, MachineError> {
        if !self.config.model.can_rewrite() || self.config.model == ModelKind::ReadWrite {
            return Err(MachineError::Unsupported {
                model: self.config.model,
                op: "rewrite pass",
            });
        }
        let slot = self.claim(tape)?;
        if tape == TapeId::Input {
            self.input_passes += 1;
        }
        self.ledger.passes += 1;
        let before = self.tapes[slot].bytes();
        let limit = (before as f64 * self.config.expansion_factor).floor() as u64;
        Ok(PassHandle {
            tape,
            number: self.ledger.passes,
            direction: Direction::Forward,
            mode: PassMode::Rewrite,
            cursor: 0,
            bytes_in: 0,
            bytes_out: 0,
            limit: Some(limit),
            pending: Vec::new(),
        })
    }

    /// Next record under the head, or `None` at the end of the tape.
    pub fn read(&mut self, head: &mut PassHandle) -> Option<Vec<u8>> {
        if head.mode == PassMode::Write {
            return None;
        }
        let slot = self.slot(head.tape).ok()?;
        let tape = &self.tapes[slot];
        let record = match head.direction {
            Direction::Forward => {
                let r = tape.records.get(head.cursor)?.clone();
                head.cursor += 1;
                r
            }
            Direction::Reverse => {
                if head.cursor == 0 {
                    return None;
                }
                head.cursor -= 1;
                tape.records[head.cursor].clone()
            }
        };
        head.bytes_in += record.len() as u64;
        Some(record)
    }

    pub fn write(&mut self, head: &mut PassHandle, record: Vec<u8>) -> Result<(), MachineError> {
        if head.mode == PassMode::Read {
            return Err(MachineError::NotWritable(head.tape));
        }
        let written = head.bytes_out + record.len() as u64;
        if let Some(limit) = head.limit {
            if written > limit {
                return Err(MachineError::ExpansionExceeded {
                    tape: head.tape,
                    written,
                    limit,
                });
            }
        }
        head.bytes_out = written;
        head.pending.push(record);
        Ok(())
    }

    /// Closes a head. Write and rewrite heads commit their records here.
    pub fn end_pass(&mut self, head: PassHandle) -> Result<(), MachineError> {
        let PassHandle {
            tape,
            number,
            direction,
            mode,
            bytes_in,
            bytes_out,
            pending,
            ..
        } = head;
        self.open.retain(|&t| t != tape);
        let slot = self.slot(tape)?;
        let bits = match mode {
            PassMode::Read => bytes_in * 8,
            PassMode::Write | PassMode::Rewrite => {
                self.tapes[slot] = Tape::from_records(pending);
                bytes_out * 8
            }
        };
        self.ledger.per_pass_tape_bits.push(bits);
        self.log_pass(number, tape, direction, bytes_in, bytes_out);
        Ok(())
    }

    fn log_pass(
        &mut self,
        pass: u64,
        tape: TapeId,
        direction: Direction,
        bytes_in: u64,
        bytes_out: u64,
    ) {
        let peak = self.ledger.peak_memory_bits;
        if let Some(trace) = self.trace.as_mut() {
            trace.push(format!(
                "pass={pass} tape={tape} dir={} bytes_in={bytes_in} bytes_out={bytes_out} mem_peak={peak}",
                direction.label()
            ));
        }
    }

    /// Appends a record to the write-only output tape. Output is a stream,
    /// not a pass.
    pub fn emit(&mut self, record: Vec<u8>) {
        self.ledger.total_output_bits += 8 * record.len() as u64;
        self.output.records.push(record);
    }

    /// Reorders the input tape by `key` (StreamSort only). Costs one sort
    /// pass plus `sort_pass_cost` passes.
    pub fn sort_pass<K>(&mut self, key: K, stable: bool) -> Result<(), MachineError>
    where
        K: for<'a> Fn(&'a [u8]) -> &'a [u8],
    {
        if !self.config.model.can_sort() {
            return Err(MachineError::Unsupported {
                model: self.config.model,
                op: "sort pass",
            });
        }
        if self.open.contains(&TapeId::Input) {
            return Err(MachineError::TapeBusy(TapeId::Input));
        }
        let cmp = |a: &Vec<u8>, b: &Vec<u8>| -> Ordering { key(a).cmp(key(b)) };
        let records = &mut self.tapes[0].records;
        if stable {
            records.sort_by(cmp);
        } else {
            records.sort_unstable_by(cmp);
        }
        self.ledger.sort_passes += 1;
        self.ledger.passes += self.config.sort_pass_cost;
        let bytes = self.tapes[0].bytes();
        self.ledger.per_pass_tape_bits.push(bytes * 8);
        self.log_pass(
            self.ledger.passes,
            TapeId::Input,
            Direction::Forward,
            bytes,
            bytes,
        );
        Ok(())
    }

    pub fn charge_memory(&mut self, bits: u64) -> Result<(), MachineError> {
        let total = self.memory_in_use.saturating_add(bits);
        if total > self.config.memory_budget_bits {
            return Err(MachineError::BudgetExceeded {
                requested: bits,
                in_use: self.memory_in_use,
                budget: self.config.memory_budget_bits,
            });
        }
        self.memory_in_use = total;
        self.ledger.peak_memory_bits = self.ledger.peak_memory_bits.max(total);
        Ok(())
    }

    pub fn release_memory(&mut self, bits: u64) -> Result<(), MachineError> {
        if bits > self.memory_in_use {
            return Err(MachineError::ReleaseUnderflow {
                bits,
                in_use: self.memory_in_use,
            });
        }
        self.memory_in_use -= bits;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drain(m: &mut Machine, tape: TapeId) -> Vec<Vec<u8>> {
        let mut h = m.begin_pass(tape, Direction::Forward).unwrap();
        let mut out = Vec::new();
        while let Some(r) = m.read(&mut h) {
            out.push(r);
        }
        m.end_pass(h).unwrap();
        out
    }

    #[test]
    fn fresh_machine_has_zero_ledger() {
        let m = Machine::new(MachineConfig::new(ModelKind::Standard, 1024), b"abc").unwrap();
        assert_eq!(m.ledger(), MachineLedger::default());
        assert_eq!(m.ledger(), m.ledger());
        let rw = Machine::new(
            MachineConfig::new(ModelKind::ReadWrite, 2048).with_work_tapes(2),
            b"",
        )
        .unwrap();
        assert!(rw.tape(TapeId::Input).unwrap().is_empty());
        assert!(rw.tape(TapeId::Work(1)).is_ok());
        assert!(rw.tape(TapeId::Work(2)).is_err());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let cfg = MachineConfig::new(ModelKind::WStreams, 64).with_expansion_factor(0.5);
        assert!(matches!(
            Machine::new(cfg, b"x"),
            Err(MachineError::InvalidConfig(_))
        ));
        let cfg = MachineConfig::new(ModelKind::Standard, 64).with_work_tapes(1);
        assert!(Machine::new(cfg, b"x").is_err());
        assert!(Machine::new(MachineConfig::new(ModelKind::Standard, 0), b"x").is_err());
    }

    #[test]
    fn standard_model_allows_one_input_pass() {
        let mut m = Machine::new(MachineConfig::new(ModelKind::Standard, 64), b"abc").unwrap();
        assert_eq!(
            drain(&mut m, TapeId::Input),
            vec![b"a".to_vec(), b"b".to_vec(), b"c".to_vec()]
        );
        assert_eq!(m.ledger().passes, 1);
        assert_eq!(
            m.begin_pass(TapeId::Input, Direction::Forward).unwrap_err(),
            MachineError::InputPassExhausted(ModelKind::Standard)
        );
        assert_eq!(m.ledger().passes, 1);
    }

    #[test]
    fn multipass_counts_every_pass() {
        let mut m = Machine::new(MachineConfig::new(ModelKind::Multipass, 64), b"ab").unwrap();
        for _ in 0..3 {
            drain(&mut m, TapeId::Input);
        }
        assert_eq!(m.ledger().passes, 3);
        assert!(m.begin_rewrite(TapeId::Input).is_err());
        assert!(m.begin_pass(TapeId::Input, Direction::Reverse).is_err());
    }

    #[test]
    fn wstreams_rewrite_respects_expansion() {
        let cfg = MachineConfig::new(ModelKind::WStreams, 64).with_expansion_factor(2.0);
        let mut m = Machine::new(cfg, b"abcd").unwrap();
        let mut h = m.begin_rewrite(TapeId::Input).unwrap();
        let mut err = None;
        while let Some(r) = m.read(&mut h) {
            let tripled = [r.clone(), r.clone(), r].concat();
            if let Err(e) = m.write(&mut h, tripled) {
                err = Some(e);
                break;
            }
        }
        assert!(matches!(
            err,
            Some(MachineError::ExpansionExceeded { limit: 8, .. })
        ));
        m.end_pass(h).unwrap();

        let mut h = m.begin_rewrite(TapeId::Input).unwrap();
        while let Some(r) = m.read(&mut h) {
            m.write(&mut h, [r.clone(), r].concat()).unwrap();
        }
        m.end_pass(h).unwrap();
        let ledger = m.ledger();
        let bits = &ledger.per_pass_tape_bits;
        assert!(bits[bits.len() - 1] as f64 <= 2.0 * bits[bits.len() - 2] as f64 + 1e-9);
    }

    #[test]
    fn sort_pass_is_stable_and_model_gated() {
        let records = vec![b"b0".to_vec(), b"a1".to_vec(), b"a2".to_vec()];
        let mut m =
            Machine::with_records(MachineConfig::new(ModelKind::StreamSort, 64), records).unwrap();
        m.sort_pass(|r| &r[..1], true).unwrap();
        assert_eq!(
            m.tape(TapeId::Input).unwrap().records(),
            &[b"a1".to_vec(), b"a2".to_vec(), b"b0".to_vec()]
        );
        let before = m.tape(TapeId::Input).unwrap().clone();
        m.sort_pass(|r| &r[..1], true).unwrap();
        assert_eq!(m.tape(TapeId::Input).unwrap(), &before);
        assert_eq!(m.ledger().sort_passes, 2);
        assert_eq!(m.ledger().passes, 2);

        let mut mp = Machine::new(MachineConfig::new(ModelKind::Multipass, 64), b"x").unwrap();
        assert!(matches!(
            mp.sort_pass(|r| r, true),
            Err(MachineError::Unsupported { .. })
        ));
    }

    #[test]
    fn sort_pass_cost_is_configurable() {
        let cfg = MachineConfig::new(ModelKind::StreamSort, 64).with_sort_pass_cost(3);
        let mut m = Machine::new(cfg, b"cab").unwrap();
        m.sort_pass(|r| r, false).unwrap();
        assert_eq!(m.ledger().passes, 3);
        assert_eq!(m.ledger().sort_passes, 1);
    }

    #[test]
    fn memory_budget_is_enforced() {
        let mut m = Machine::new(MachineConfig::new(ModelKind::Standard, 100), b"").unwrap();
        m.charge_memory(64).unwrap();
        m.charge_memory(32).unwrap();
        assert_eq!(m.ledger().peak_memory_bits, 96);
        m.release_memory(96).unwrap();
        m.charge_memory(0).unwrap();
        m.charge_memory(64).unwrap();
        assert!(m.charge_memory(64).unwrap_err().is_budget());
        assert_eq!(m.memory_in_use(), 64);
        assert!(matches!(
            m.release_memory(65),
            Err(MachineError::ReleaseUnderflow { .. })
        ));
    }

    #[test]
    fn read_write_heads_and_trace() {
        let mut m = Machine::new(MachineConfig::new(ModelKind::ReadWrite, 64), b"xyz").unwrap();
        m.enable_trace();
        let mut r = m.begin_pass(TapeId::Input, Direction::Reverse).unwrap();
        let mut w = m.begin_write(TapeId::Work(0)).unwrap();
        assert_eq!(
            m.begin_pass(TapeId::Input, Direction::Forward).unwrap_err(),
            MachineError::TapeBusy(TapeId::Input)
        );
        while let Some(rec) = m.read(&mut r) {
            m.write(&mut w, rec).unwrap();
        }
        m.end_pass(r).unwrap();
        m.end_pass(w).unwrap();
        assert_eq!(
            m.tape(TapeId::Work(0)).unwrap().records(),
            &[b"z".to_vec(), b"y".to_vec(), b"x".to_vec()]
        );
        assert_eq!(m.ledger().passes, 2);
        assert_eq!(
            m.trace_lines()[0],
            "pass=1 tape=input dir=rev bytes_in=3 bytes_out=0 mem_peak=0"
        );
        m.emit(vec![1, 2]);
        assert_eq!(m.ledger().total_output_bits, 16);
    }
}
