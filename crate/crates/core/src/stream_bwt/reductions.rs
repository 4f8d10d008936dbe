use super::RwError;
use crate::ceil_log2;
use crate::transforms::{bwt, bwt_naive};

/// Sorts the characters of `s` with one BWT over the pair string
/// `(s_1, s_0) (s_2, s_1) … (s_n, s_{n-1}) (s_0, s_n)`, where `s_0` is a
/// character below the alphabet.
///
/// Each pair lands at the rank of its predecessor, whose first component
/// is the pair's own second component. The transform's first symbol is
/// `(s_1, s_0)` and its second the sentinel; the remaining second
/// components come out sorted.
pub fn sort_chars_via_bwt<T: Ord + Clone>(s: &[T]) -> Vec<T> {
    if s.is_empty() {
        return Vec::new();
    }
    let pairs: Vec<(Option<T>, Option<T>)> = (0..=s.len())
        .map(|i| {
            let cur = s.get(i).cloned();
            let prev = i.checked_sub(1).map(|j| s[j].clone());
            (cur, prev)
        })
        .collect();
    let t = bwt_naive(&pairs);
    debug_assert_eq!(t.sentinel, 1);
    t.body
        .into_iter()
        .skip(1)
        .map(|(_, prev)| prev.expect("only the first pair lacks a predecessor"))
        .collect()
}

/// Sorts `n` numbers of `2 log n` bits through a BWT with forward contexts.
///
/// Bit `j` of `x_i` is replaced by the phrase `x_i[j] 2 x_i i j` over
/// `{0, 1, 2}` (with `x_i` in `2 log n` bits, `i` in `log n` bits and `j`
/// in `⌈log2(2 log n)⌉` bits, all 0-based). Only phrase heads precede a
/// `2`, so the last `2 n log n` symbols of the transform are the bits of
/// the `x_i` in sorted order, ties broken by `i` and then `j`.
pub fn sort_numbers_via_bwt(xs: &[u64]) -> Result<Vec<u64>, RwError> {
    let n = xs.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(RwError::InvalidInput(format!(
            "{n} numbers; the count must be a power of two of at least 2"
        )));
    }
    let log_n = n.trailing_zeros();
    let width = 2 * log_n;
    if width > 63 {
        return Err(RwError::InvalidInput("too many numbers".into()));
    }
    if let Some(x) = xs.iter().find(|&&x| x >> width != 0) {
        return Err(RwError::InvalidInput(format!(
            "{x} does not fit in {width} bits"
        )));
    }
    let gadget = gadget(xs, log_n);
    // forward contexts of u are backward contexts of u reversed
    let reversed: Vec<u32> = gadget.iter().rev().copied().collect();
    let t = bwt(&reversed).render(3);
    let tail = &t[t.len() - n * width as usize..];
    Ok(tail
        .chunks(width as usize)
        .map(|bits| bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
        .collect())
}

fn push_bits(out: &mut Vec<u32>, value: u64, bits: u32) {
    out.extend((0..bits).rev().map(|b| ((value >> b) & 1) as u32));
}

fn gadget(xs: &[u64], log_n: u32) -> Vec<u32> {
    let width = 2 * log_n;
    let j_width = ceil_log2(u64::from(width)).max(1);
    let mut out = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for j in 0..width {
            out.push(((x >> (width - 1 - j)) & 1) as u32);
            out.push(2);
            push_bits(&mut out, x, width);
            push_bits(&mut out, i as u64, log_n);
            push_bits(&mut out, u64::from(j), j_width);
        }
    }
    out
}
