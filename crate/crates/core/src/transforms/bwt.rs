use super::{back, SentinelString, TransformError};

/// BWT by direct comparison of full backward contexts.
pub fn bwt_naive<T: Ord + Clone>(s: &[T]) -> SentinelString<T> {
    let len = s.len() + 1;
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&i, &j| {
        (1..=len)
            .map(|d| s.get(back(i, d, len)).cmp(&s.get(back(j, d, len))))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    collect(s, &order)
}

/// BWT by prefix doubling over backward contexts, `O(n log² n)`.
pub fn bwt(s: &[u32]) -> SentinelString<u32> {
    let n = s.len();
    let len = n + 1;
    let mut rank: Vec<u64> = (0..len)
        .map(|i| s.get(back(i, 1, len)).map_or(0, |&c| u64::from(c) + 1))
        .collect();
    let mut order: Vec<usize> = (0..len).collect();
    let mut h = 1;
    loop {
        let key = |i: usize| (rank[i], rank[back(i, h, len)]);
        order.sort_unstable_by_key(|&i| key(i));
        let mut next = vec![0u64; len];
        let mut r = 0;
        for w in 1..len {
            if key(order[w]) != key(order[w - 1]) {
                r += 1;
            }
            next[order[w]] = r;
        }
        rank = next;
        if r as usize == n {
            break;
        }
        h *= 2;
    }
    collect(s, &order)
}

fn collect<T: Clone>(s: &[T], order: &[usize]) -> SentinelString<T> {
    let n = s.len();
    let sentinel = order.iter().position(|&i| i == n).unwrap_or(0);
    SentinelString {
        body: order
            .iter()
            .filter(|&&i| i < n)
            .map(|&i| s[i].clone())
            .collect(),
        sentinel,
    }
}

/// Inverts the BWT by walking the last-to-first mapping.
///
/// Row 0 is the rotation whose context starts with the sentinel, so its
/// last column holds `s_1`; each step moves one position forward in `s`.
pub fn bwt_inverse_naive<T: Ord + Clone>(t: &SentinelString<T>) -> Result<Vec<T>, TransformError> {
    let len = t.len();
    let mut sorted: Vec<usize> = (0..len).collect();
    sorted.sort_by(|&a, &b| t.get(a).cmp(&t.get(b)));
    let mut next = vec![0usize; len];
    for (f, &r) in sorted.iter().enumerate() {
        next[r] = f;
    }
    let mut out = Vec::with_capacity(len - 1);
    let mut row = 0;
    for _ in 0..len - 1 {
        match t.get(row) {
            Some(c) => out.push(c.clone()),
            None => return Err(TransformError::NotBwtImage),
        }
        row = next[row];
    }
    if t.get(row).is_some() || next[row] != 0 {
        return Err(TransformError::NotBwtImage);
    }
    Ok(out)
}
