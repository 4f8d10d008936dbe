//! BWT construction and inversion in the Read-Write model by prefix
//! doubling, plus the sorting reductions to the BWT.
//!
//! Both directions drive triples `(tagged char, rank, tagged char)` through
//! rounds of copy, sort, merge into quintuples, and shrink back to triples.
//! Every sort is an external merge sort over the work tapes, so each round
//! costs `O(log n)` passes while only a handful of records is ever held in
//! charged memory.

mod encode;
mod invert;
pub mod records;
mod reductions;

pub use encode::{rw_bwt_encode, rw_suffix_array};
pub use invert::rw_bwt_invert;
pub use reductions::{sort_chars_via_bwt, sort_numbers_via_bwt};

use thiserror::Error;

use crate::model_vm::{
    merge_sort_tape, Direction, Machine, MachineError, ModelKind, TapeId, RW_WORK_TAPES,
};
use records::{by_first, by_last, Quintuple, Tagged, Triple};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RwError {
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("this algorithm needs the readwrite model, not {0}")]
    WrongModel(ModelKind),
    #[error("this algorithm needs {RW_WORK_TAPES} work tapes, the machine has {0}")]
    TooFewTapes(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not the BWT of any string: {0}")]
    NotBwtImage(String),
}

/// Rows of one tape snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rows {
    Triples(Vec<Triple>),
    /// The two sorted copies side by side: by last component, by first.
    Pairs(Vec<(Triple, Triple)>),
    Quintuples(Vec<Quintuple>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub name: &'static str,
    pub rows: Rows,
}

impl Stage {
    /// Tab-separated lines, one per row, in the column layout of the
    /// worked examples.
    pub fn render(&self, label: &dyn Fn(Tagged) -> String) -> Vec<String> {
        let mid = |x: u32| {
            if x == records::UNKNOWN {
                "?".to_string()
            } else {
                x.to_string()
            }
        };
        let triple = |t: &Triple| format!("{}\t{}\t{}", label(t.left), mid(t.mid), label(t.right));
        match &self.rows {
            Rows::Triples(ts) => ts.iter().map(triple).collect(),
            Rows::Pairs(ps) => ps
                .iter()
                .map(|(l, r)| format!("{}\t\t{}", triple(l), triple(r)))
                .collect(),
            Rows::Quintuples(qs) => qs
                .iter()
                .map(|q| {
                    format!(
                        "{}\t{}\t{}\t{}\t{}",
                        label(q.a),
                        mid(q.x),
                        label(q.b),
                        mid(q.y),
                        label(q.c)
                    )
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrace {
    pub round: usize,
    pub stages: Vec<Stage>,
}

/// Result of a doubling run. `trace` is filled only when the machine has
/// tracing enabled.
#[derive(Debug, Clone, PartialEq)]
pub struct RwRun<T> {
    pub output: T,
    pub rounds: usize,
    pub initial: Option<Stage>,
    pub trace: Vec<RoundTrace>,
}

/// `m_1`-style labels, with `#` for the sentinel and ranks shown as bytes.
pub fn byte_label(t: Tagged) -> String {
    match t.ch() {
        None => format!("#_{}", t.id),
        Some(c) => match char::from_u32(c).filter(|ch| ch.is_ascii_graphic()) {
            Some(ch) => format!("{ch}_{}", t.id),
            None => format!("<{c}>_{}", t.id),
        },
    }
}

const T: TapeId = TapeId::Work(0);
const A: TapeId = TapeId::Work(1);
const Q: TapeId = TapeId::Work(2);
const SCRATCH: [TapeId; 4] = [
    TapeId::Work(3),
    TapeId::Work(4),
    TapeId::Work(5),
    TapeId::Work(2),
];

fn check_machine(m: &Machine) -> Result<(), RwError> {
    if m.model() != ModelKind::ReadWrite {
        return Err(RwError::WrongModel(m.model()));
    }
    if m.config().work_tapes < RW_WORK_TAPES {
        return Err(RwError::TooFewTapes(m.config().work_tapes));
    }
    Ok(())
}

/// Charges `bits` for the duration of `f`.
fn with_registers<R>(
    m: &mut Machine,
    bits: u64,
    f: impl FnOnce(&mut Machine) -> Result<R, RwError>,
) -> Result<R, RwError> {
    m.charge_memory(bits)?;
    let out = f(m)?;
    m.release_memory(bits)?;
    Ok(out)
}

fn triples_on(m: &Machine, tape: TapeId) -> Result<Vec<Triple>, RwError> {
    Ok(m.tape(tape)?
        .records()
        .iter()
        .map(|r| Triple::from_bytes(r))
        .collect())
}

fn quintuples_on(m: &Machine, tape: TapeId) -> Result<Vec<Quintuple>, RwError> {
    Ok(m.tape(tape)?
        .records()
        .iter()
        .map(|r| Quintuple::from_bytes(r))
        .collect())
}

/// Copies `T` to `A`, sorts `A` by last and `T` by first component, and
/// merges them into quintuples on `Q`.
fn copy_sort_merge(m: &mut Machine, stages: &mut Vec<Stage>) -> Result<(), RwError> {
    let tracing = m.trace_enabled();
    if tracing {
        stages.push(Stage {
            name: "triples",
            rows: Rows::Triples(triples_on(m, T)?),
        });
    }
    with_registers(m, 8 * records::TRIPLE_LEN as u64, |m| {
        let mut src = m.begin_pass(T, Direction::Forward)?;
        let mut dst = m.begin_write(A)?;
        while let Some(r) = m.read(&mut src) {
            m.write(&mut dst, r)?;
        }
        m.end_pass(src)?;
        m.end_pass(dst)?;
        Ok(())
    })?;
    merge_sort_tape(m, A, SCRATCH, by_last)?;
    merge_sort_tape(m, T, SCRATCH, by_first)?;
    if tracing {
        let pairs = triples_on(m, A)?
            .into_iter()
            .zip(triples_on(m, T)?)
            .collect();
        stages.push(Stage {
            name: "copy and sort",
            rows: Rows::Pairs(pairs),
        });
    }
    with_registers(
        m,
        8 * (2 * records::TRIPLE_LEN + records::QUINTUPLE_LEN) as u64,
        |m| {
            let mut left = m.begin_pass(A, Direction::Forward)?;
            let mut right = m.begin_pass(T, Direction::Forward)?;
            let mut out = m.begin_write(Q)?;
            while let (Some(l), Some(r)) = (m.read(&mut left), m.read(&mut right)) {
                let (l, r) = (Triple::from_bytes(&l), Triple::from_bytes(&r));
                if l.right != r.left {
                    return Err(RwError::InvalidInput("sorted copies do not pair up".into()));
                }
                m.write(&mut out, Quintuple::join(l, r).to_bytes())?;
            }
            m.end_pass(left)?;
            m.end_pass(right)?;
            m.end_pass(out)?;
            Ok(())
        },
    )?;
    if tracing {
        stages.push(Stage {
            name: "merge",
            rows: Rows::Quintuples(quintuples_on(m, Q)?),
        });
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::records::{Tagged, Triple};

    /// Parses rows like `"i_11 1 #_12"`; `?` is the unknown rank.
    pub fn triples(rows: &[&str]) -> Vec<Triple> {
        rows.iter()
            .map(|row| {
                let f: Vec<&str> = row.split_whitespace().collect();
                Triple {
                    left: tag(f[0]),
                    mid: if f[1] == "?" {
                        0
                    } else {
                        f[1].parse().unwrap()
                    },
                    right: tag(f[2]),
                }
            })
            .collect()
    }

    pub fn tag(s: &str) -> Tagged {
        let (c, id) = s.split_once('_').unwrap();
        let ch = match c {
            "#" => None,
            c => Some(u32::from(c.as_bytes()[0])),
        };
        Tagged::new(ch, id.parse().unwrap()).unwrap()
    }
}
