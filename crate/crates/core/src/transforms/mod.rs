//! In-memory reference transforms.
//!
//! Strings are sequences of ranks; the sentinel is kept out of band and
//! orders below every rank. Contexts are read backwards: the context of
//! position `i` in `t = s·#` is `t[i-1] t[i-2] …`, indices taken modulo
//! `n + 1`.

mod bwt;
mod dc;
mod delta;
mod mtf;
mod rle;
mod st;

pub use bwt::{bwt, bwt_inverse_naive, bwt_naive};
pub use dc::{dc_decode, dc_decode_with, dc_encode, DcStream};
pub use delta::{elias_delta_decode, elias_delta_encode, elias_delta_len};
pub use mtf::{mtf_decode, mtf_encode, MtfList};
pub use rle::{rle_decode, rle_encode};
pub use st::st_forward;

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("symbol {symbol} is outside the alphabet of size {sigma}")]
    OutOfAlphabet { symbol: u32, sigma: u32 },
    #[error("expected exactly one sentinel, found {0}")]
    SentinelCount(usize),
    #[error("not the image of any string under the BWT")]
    NotBwtImage,
    #[error("move-to-front index {index} out of range for a list of {len}")]
    MtfIndex { index: u32, len: usize },
    #[error("run of length zero")]
    EmptyRun,
    #[error("malformed distance-coded stream: {0}")]
    MalformedDc(String),
    #[error("truncated Elias delta code")]
    TruncatedDelta,
}

/// A symbol of `s·#`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Sentinel,
    Char(u32),
}

impl From<Option<u32>> for Sym {
    fn from(v: Option<u32>) -> Self {
        v.map_or(Sym::Sentinel, Sym::Char)
    }
}

impl From<Sym> for Option<u32> {
    fn from(v: Sym) -> Self {
        match v {
            Sym::Sentinel => None,
            Sym::Char(c) => Some(c),
        }
    }
}

/// A string with exactly one sentinel, stored as the body without the
/// sentinel plus the sentinel's index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SentinelString<T = u32> {
    pub body: Vec<T>,
    pub sentinel: usize,
}

impl<T> SentinelString<T> {
    /// `body·#`.
    pub fn terminated(body: Vec<T>) -> Self {
        let sentinel = body.len();
        SentinelString { body, sentinel }
    }

    /// Length including the sentinel.
    pub fn len(&self) -> usize {
        self.body.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Symbol `i`, `None` for the sentinel.
    pub fn get(&self, i: usize) -> Option<&T> {
        match i.cmp(&self.sentinel) {
            std::cmp::Ordering::Less => Some(&self.body[i]),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(&self.body[i - 1]),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Option<&T>> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    pub fn from_options(symbols: Vec<Option<T>>) -> Result<Self, TransformError> {
        let count = symbols.iter().filter(|s| s.is_none()).count();
        if count != 1 {
            return Err(TransformError::SentinelCount(count));
        }
        let sentinel = symbols.iter().position(Option::is_none).unwrap_or(0);
        Ok(SentinelString {
            body: symbols.into_iter().flatten().collect(),
            sentinel,
        })
    }

    /// Writes `sentinel` in place of the sentinel.
    pub fn render(&self, sentinel: T) -> Vec<T>
    where
        T: Clone,
    {
        let mut out = self.body.clone();
        out.insert(self.sentinel, sentinel);
        out
    }

    /// Parses a rendered string in which `sentinel` marks the sentinel.
    pub fn parse(rendered: &[T], sentinel: &T) -> Result<Self, TransformError>
    where
        T: Clone + PartialEq,
    {
        Self::from_options(
            rendered
                .iter()
                .map(|c| (c != sentinel).then(|| c.clone()))
                .collect(),
        )
    }

    pub fn map<U>(self, f: impl FnMut(T) -> U) -> SentinelString<U> {
        SentinelString {
            body: self.body.into_iter().map(f).collect(),
            sentinel: self.sentinel,
        }
    }
}

impl SentinelString<u32> {
    pub fn syms(&self) -> Vec<Sym> {
        self.iter().map(|c| Sym::from(c.copied())).collect()
    }

    pub fn from_syms(syms: &[Sym]) -> Result<Self, TransformError> {
        Self::from_options(syms.iter().map(|&s| s.into()).collect())
    }
}

impl fmt::Display for SentinelString<u8> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.iter() {
            match c {
                Some(&b) => write!(f, "{}", b as char)?,
                None => f.write_str("#")?,
            }
        }
        Ok(())
    }
}

pub fn check_alphabet(s: &[u32], sigma: u32) -> Result<(), TransformError> {
    match s.iter().find(|&&c| c >= sigma) {
        Some(&symbol) => Err(TransformError::OutOfAlphabet { symbol, sigma }),
        None => Ok(()),
    }
}

/// Index of `i - d` modulo `n + 1`.
pub(crate) fn back(i: usize, d: usize, len: usize) -> usize {
    (i + len - d % len) % len
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_orders_first() {
        assert!(Sym::Sentinel < Sym::Char(0));
        assert!(Sym::Char(0) < Sym::Char(1));
    }

    #[test]
    fn sentinel_string_accessors() {
        let t = SentinelString::parse(b"ms#sp", &b'#').unwrap();
        assert_eq!(t.sentinel, 2);
        assert_eq!(t.body, b"mssp");
        assert_eq!(t.len(), 5);
        assert_eq!(t.get(2), None);
        assert_eq!(t.get(3), Some(&b's'));
        assert_eq!(t.render(b'#'), b"ms#sp");
        assert_eq!(t.to_string(), "ms#sp");
        assert_eq!(
            SentinelString::parse(b"a#b#", &b'#'),
            Err(TransformError::SentinelCount(2))
        );
        assert_eq!(
            SentinelString::parse(b"ab", &b'#'),
            Err(TransformError::SentinelCount(0))
        );
    }

    #[test]
    fn sym_conversion_roundtrips() {
        let t = SentinelString::<u32> {
            body: vec![3, 1],
            sentinel: 1,
        };
        let syms = t.syms();
        assert_eq!(syms, [Sym::Char(3), Sym::Sentinel, Sym::Char(1)]);
        assert_eq!(SentinelString::from_syms(&syms).unwrap(), t);
    }

    #[test]
    fn alphabet_check() {
        assert!(check_alphabet(&[0, 1, 2], 3).is_ok());
        assert_eq!(
            check_alphabet(&[0, 3], 3),
            Err(TransformError::OutOfAlphabet {
                symbol: 3,
                sigma: 3
            })
        );
    }
}
