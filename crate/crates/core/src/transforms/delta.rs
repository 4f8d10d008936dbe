use super::TransformError;

/// Elias delta code of `m ≥ 1`, most significant bit first.
pub fn elias_delta_encode(m: u64) -> Vec<bool> {
    assert!(m >= 1, "Elias delta codes positive integers");
    let n = 63 - m.leading_zeros();
    let l = u64::from(n) + 1;
    let ll = 63 - l.leading_zeros();
    let mut out = vec![false; ll as usize];
    out.extend((0..=ll).rev().map(|b| (l >> b) & 1 == 1));
    out.extend((0..n).rev().map(|b| (m >> b) & 1 == 1));
    out
}

/// Length in bits of the delta code of `m ≥ 1`.
pub fn elias_delta_len(m: u64) -> u32 {
    let n = 63 - m.leading_zeros();
    let ll = 63 - (u64::from(n) + 1).leading_zeros();
    2 * ll + 1 + n
}

pub fn elias_delta_decode(bits: &mut impl Iterator<Item = bool>) -> Result<u64, TransformError> {
    let mut next = || bits.next().ok_or(TransformError::TruncatedDelta);
    let mut ll = 0;
    while !next()? {
        ll += 1;
        if ll > 6 {
            return Err(TransformError::TruncatedDelta);
        }
    }
    let mut l = 1u64;
    for _ in 0..ll {
        l = (l << 1) | u64::from(next()?);
    }
    if l > 64 {
        return Err(TransformError::TruncatedDelta);
    }
    let mut m = 1u64;
    for _ in 0..l - 1 {
        m = (m << 1) | u64::from(next()?);
    }
    Ok(m)
}
