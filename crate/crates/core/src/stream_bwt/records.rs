//! Fixed-width tape records for the doubling rounds.
//!
//! All fields are big-endian so byte order is sort order.

use std::cmp::Ordering;

use super::RwError;

/// Reserved mid value for an unresolved rank.
pub const UNKNOWN: u32 = 0;

pub const TAG_LEN: usize = 6;
pub const TRIPLE_LEN: usize = 16;
pub const QUINTUPLE_LEN: usize = 26;

/// A character tagged with a unique identifier. Code 0 is the sentinel,
/// code `c + 1` the rank `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tagged {
    pub code: u16,
    pub id: u32,
}

impl Tagged {
    pub fn new(ch: Option<u32>, id: u32) -> Result<Self, RwError> {
        let code = match ch {
            None => 0,
            Some(c) => u16::try_from(c + 1)
                .map_err(|_| RwError::InvalidInput(format!("rank {c} exceeds the tag width")))?,
        };
        Ok(Tagged { code, id })
    }

    pub fn ch(self) -> Option<u32> {
        self.code.checked_sub(1).map(u32::from)
    }

    pub fn is_sentinel(self) -> bool {
        self.code == 0
    }

    fn put(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.code.to_be_bytes());
        out.extend_from_slice(&self.id.to_be_bytes());
    }

    fn get(b: &[u8]) -> Self {
        Tagged {
            code: u16::from_be_bytes([b[0], b[1]]),
            id: u32::from_be_bytes([b[2], b[3], b[4], b[5]]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple {
    pub left: Tagged,
    pub mid: u32,
    pub right: Tagged,
}

impl Triple {
    pub fn to_bytes(self) -> Vec<u8> {
        let mut out = Vec::with_capacity(TRIPLE_LEN);
        self.left.put(&mut out);
        out.extend_from_slice(&self.mid.to_be_bytes());
        self.right.put(&mut out);
        out
    }

    pub fn from_bytes(b: &[u8]) -> Self {
        debug_assert_eq!(b.len(), TRIPLE_LEN);
        Triple {
            left: Tagged::get(&b[0..6]),
            mid: u32::from_be_bytes([b[6], b[7], b[8], b[9]]),
            right: Tagged::get(&b[10..16]),
        }
    }
}

/// Two triples joined on the shared middle character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quintuple {
    pub a: Tagged,
    pub x: u32,
    pub b: Tagged,
    pub y: u32,
    pub c: Tagged,
}

impl Quintuple {
    pub fn join(left: Triple, right: Triple) -> Self {
        debug_assert_eq!(left.right, right.left);
        Quintuple {
            a: left.left,
            x: left.mid,
            b: left.right,
            y: right.mid,
            c: right.right,
        }
    }

    pub fn to_bytes(self) -> Vec<u8> {
        let mut out = Vec::with_capacity(QUINTUPLE_LEN);
        self.a.put(&mut out);
        out.extend_from_slice(&self.x.to_be_bytes());
        self.b.put(&mut out);
        out.extend_from_slice(&self.y.to_be_bytes());
        self.c.put(&mut out);
        out
    }

    pub fn from_bytes(b: &[u8]) -> Self {
        debug_assert_eq!(b.len(), QUINTUPLE_LEN);
        Quintuple {
            a: Tagged::get(&b[0..6]),
            x: u32::from_be_bytes([b[6], b[7], b[8], b[9]]),
            b: Tagged::get(&b[10..16]),
            y: u32::from_be_bytes([b[16], b[17], b[18], b[19]]),
            c: Tagged::get(&b[20..26]),
        }
    }
}

pub fn by_first(p: &[u8], q: &[u8]) -> Ordering {
    p[0..6].cmp(&q[0..6])
}

pub fn by_last(p: &[u8], q: &[u8]) -> Ordering {
    p[10..16].cmp(&q[10..16])
}

pub fn by_mid(p: &[u8], q: &[u8]) -> Ordering {
    p[6..10].cmp(&q[6..10])
}

/// Fourth component, then the third ignoring its id, then the second,
/// then the first component's id.
pub fn by_context(p: &[u8], q: &[u8]) -> Ordering {
    p[16..20]
        .cmp(&q[16..20])
        .then_with(|| p[10..12].cmp(&q[10..12]))
        .then_with(|| p[6..10].cmp(&q[6..10]))
        .then_with(|| p[2..6].cmp(&q[2..6]))
}

/// Second component, then the third ignoring its id, then the fourth, then
/// the first component's id.
pub fn by_suffix(p: &[u8], q: &[u8]) -> Ordering {
    p[6..10]
        .cmp(&q[6..10])
        .then_with(|| p[10..12].cmp(&q[10..12]))
        .then_with(|| p[16..20].cmp(&q[16..20]))
        .then_with(|| p[2..6].cmp(&q[2..6]))
}

/// The renumbering key of a sorted quintuple: `(x, b's character, y)`.
pub fn middle_key(q: &Quintuple) -> (u32, u16, u32) {
    (q.x, q.b.code, q.y)
}

/// One character per input record: a big-endian rank of one to four
/// bytes, or the empty record for the sentinel.
pub fn char_record(c: Option<u32>) -> Vec<u8> {
    match c {
        None => Vec::new(),
        Some(c) if c < 256 => vec![c as u8],
        Some(c) => c.to_be_bytes().to_vec(),
    }
}

pub fn parse_char(record: &[u8]) -> Result<Option<u32>, RwError> {
    if record.is_empty() {
        return Ok(None);
    }
    if record.len() > 4 {
        return Err(RwError::InvalidInput(format!(
            "{}-byte character record",
            record.len()
        )));
    }
    Ok(Some(
        record
            .iter()
            .fold(0u32, |acc, &b| (acc << 8) | u32::from(b)),
    ))
}

pub fn char_records(s: &[u32]) -> Vec<Vec<u8>> {
    s.iter().map(|&c| char_record(Some(c))).collect()
}
