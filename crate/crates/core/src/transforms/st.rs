use super::{back, SentinelString};

/// Schindler transform: a stable sort of `s·#` by length-`k` backward
/// contexts, wrapping through the sentinel.
pub fn st_forward<T: Ord + Clone>(s: &[T], k: usize) -> SentinelString<T> {
    let len = s.len() + 1;
    let context =
        |i: usize| -> Vec<Option<&T>> { (1..=k).map(|d| s.get(back(i, d, len))).collect() };
    let mut keyed: Vec<(Vec<Option<&T>>, usize)> = (0..len).map(|i| (context(i), i)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let symbols = keyed.into_iter().map(|(_, i)| s.get(i).cloned()).collect();
    SentinelString::from_options(symbols).expect("one sentinel per rotation set")
}
