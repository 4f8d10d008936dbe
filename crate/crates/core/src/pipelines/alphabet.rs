use super::PipelineError;

/// Mapping between input bytes and dense ranks `0..sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    ranks: [Option<u8>; 256],
}

impl Alphabet {
    /// Distinct bytes of `data` in increasing order; `{0}` for empty data.
    pub fn infer(data: &[u8]) -> Self {
        let mut seen = [false; 256];
        for &b in data {
            seen[b as usize] = true;
        }
        let symbols: Vec<u8> = (0..=255u8).filter(|&b| seen[b as usize]).collect();
        if symbols.is_empty() {
            return Self::from_symbols(vec![0]).expect("nonempty");
        }
        Self::from_symbols(symbols).expect("sorted and distinct")
    }

    /// The bytes `0..sigma` mapped to themselves.
    pub fn identity(sigma: u32) -> Result<Self, PipelineError> {
        if !(1..=256).contains(&sigma) {
            return Err(PipelineError::Input(format!(
                "alphabet size {sigma} is outside 1..=256"
            )));
        }
        Self::from_symbols((0..sigma).map(|b| b as u8).collect())
    }

    pub fn from_symbols(symbols: Vec<u8>) -> Result<Self, PipelineError> {
        if symbols.is_empty() || symbols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PipelineError::Format(
                "alphabet must be nonempty and strictly increasing".into(),
            ));
        }
        let mut ranks = [None; 256];
        for (r, &b) in symbols.iter().enumerate() {
            ranks[b as usize] = Some(r as u8);
        }
        Ok(Alphabet { symbols, ranks })
    }

    pub fn sigma(&self) -> u32 {
        self.symbols.len() as u32
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn to_ranks(&self, data: &[u8]) -> Result<Vec<u32>, PipelineError> {
        data.iter()
            .enumerate()
            .map(|(i, &b)| {
                self.ranks[b as usize].map(u32::from).ok_or_else(|| {
                    PipelineError::Input(format!(
                        "byte {b:#04x} at offset {i} is outside the alphabet"
                    ))
                })
            })
            .collect()
    }

    pub fn to_bytes(&self, ranks: &[u32]) -> Result<Vec<u8>, PipelineError> {
        ranks
            .iter()
            .map(|&r| {
                self.symbols
                    .get(r as usize)
                    .copied()
                    .ok_or_else(|| PipelineError::Format(format!("rank {r} outside the alphabet")))
            })
            .collect()
    }
}
