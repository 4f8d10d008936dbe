use super::TransformError;

/// Distance-coded string.
///
/// `gaps` has one entry per maximal run, in string order: the distance from
/// the run's last position to the next occurrence of its symbol, or 0 when
/// the symbol does not occur again.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DcStream {
    pub first: Vec<Option<u64>>,
    pub n: u64,
    pub gaps: Vec<u64>,
}

pub fn dc_encode(s: &[u32], sigma: u32) -> Result<DcStream, TransformError> {
    super::check_alphabet(s, sigma)?;
    let mut first = vec![None; sigma as usize];
    let mut next = vec![0u64; s.len()];
    let mut following: Vec<Option<usize>> = vec![None; sigma as usize];
    for (i, &c) in s.iter().enumerate().rev() {
        next[i] = following[c as usize].map_or(0, |r| (r - i) as u64);
        following[c as usize] = Some(i);
    }
    for (c, f) in following.iter().enumerate() {
        first[c] = f.map(|p| p as u64);
    }
    let gaps = (0..s.len())
        .filter(|&i| i + 1 == s.len() || s[i + 1] != s[i])
        .map(|i| next[i])
        .collect();
    Ok(DcStream {
        first,
        n: s.len() as u64,
        gaps,
    })
}

pub fn dc_decode(d: &DcStream) -> Result<Vec<u32>, TransformError> {
    let mut gaps = d.gaps.iter().copied();
    let out = dc_decode_with(&d.first, d.n, || {
        gaps.next()
            .ok_or_else(|| TransformError::MalformedDc("too few gaps".into()))
    })?;
    if gaps.next().is_some() {
        return Err(TransformError::MalformedDc("too many gaps".into()));
    }
    Ok(out)
}

/// Decodes with gaps pulled on demand, one per run.
///
/// A run of `a` starting at `p` extends up to the earliest pending
/// occurrence of any other symbol.
pub fn dc_decode_with<F>(
    first: &[Option<u64>],
    n: u64,
    mut next_gap: F,
) -> Result<Vec<u32>, TransformError>
where
    F: FnMut() -> Result<u64, TransformError>,
{
    let malformed = |m: String| TransformError::MalformedDc(m);
    let mut pending: Vec<Option<u64>> = first.to_vec();
    for (a, p) in pending.iter().enumerate() {
        if let Some(p) = *p {
            if p >= n {
                return Err(malformed(format!(
                    "first occurrence {p} of symbol {a} beyond length {n}"
                )));
            }
            if pending[..a].contains(&Some(p)) {
                return Err(malformed(format!("two symbols start at {p}")));
            }
        }
    }
    let mut out = Vec::with_capacity(n as usize);
    let mut p = 0u64;
    while p < n {
        let a = pending
            .iter()
            .position(|&q| q == Some(p))
            .ok_or_else(|| malformed(format!("no symbol at position {p}")))?;
        let end = pending
            .iter()
            .enumerate()
            .filter(|&(b, _)| b != a)
            .filter_map(|(_, &q)| q)
            .min()
            .unwrap_or(n);
        out.extend(std::iter::repeat_n(a as u32, (end - p) as usize));
        let q = end - 1;
        pending[a] = match next_gap()? {
            0 => None,
            1 => return Err(malformed("gap of 1".into())),
            g => {
                let r = q.checked_add(g).filter(|&r| r < n).ok_or_else(|| {
                    malformed(format!("gap {g} after position {q} leaves the string"))
                })?;
                if pending.contains(&Some(r)) {
                    return Err(malformed(format!("two symbols at position {r}")));
                }
                Some(r)
            }
        };
        p = end;
    }
    Ok(out)
}
