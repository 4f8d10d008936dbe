use super::TransformError;

/// The self-organising list of move-to-front coding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtfList(pub Vec<u32>);

impl MtfList {
    /// `0, 1, …, sigma - 1`.
    pub fn identity(sigma: u32) -> Self {
        MtfList((0..sigma).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn mtf_encode(s: &[u32], init: &MtfList) -> Result<Vec<u32>, TransformError> {
    let mut list = init.0.clone();
    s.iter()
        .map(|&c| {
            let i = list
                .iter()
                .position(|&x| x == c)
                .ok_or(TransformError::OutOfAlphabet {
                    symbol: c,
                    sigma: list.len() as u32,
                })?;
            list[..=i].rotate_right(1);
            Ok(i as u32)
        })
        .collect()
}

pub fn mtf_decode(ix: &[u32], init: &MtfList) -> Result<Vec<u32>, TransformError> {
    let mut list = init.0.clone();
    ix.iter()
        .map(|&i| {
            if i as usize >= list.len() {
                return Err(TransformError::MtfIndex {
                    index: i,
                    len: list.len(),
                });
            }
            let c = list[i as usize];
            list[..=i as usize].rotate_right(1);
            Ok(c)
        })
        .collect()
}
