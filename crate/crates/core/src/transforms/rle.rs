use super::TransformError;

/// Maximal runs as `(symbol, length)` pairs.
pub fn rle_encode(ix: &[u32]) -> Vec<(u32, u64)> {
    let mut out: Vec<(u32, u64)> = Vec::new();
    for &c in ix {
        match out.last_mut() {
            Some((last, run)) if *last == c => *run += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

pub fn rle_decode(runs: &[(u32, u64)]) -> Result<Vec<u32>, TransformError> {
    let mut out = Vec::new();
    for &(c, run) in runs {
        if run == 0 {
            return Err(TransformError::EmptyRun);
        }
        out.extend(std::iter::repeat_n(c, run as usize));
    }
    Ok(out)
}
