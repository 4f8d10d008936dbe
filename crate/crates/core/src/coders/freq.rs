/// Adaptive frequency table for the range coder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreqModel {
    counts: Vec<u32>,
    total: u32,
}

impl FreqModel {
    pub const INCREMENT: u32 = 32;
    pub const RESCALE_AT: u32 = 1 << 15;

    pub fn new(sigma: u32) -> Self {
        assert!(
            (1..Self::RESCALE_AT).contains(&sigma),
            "alphabet of {sigma} symbols does not fit the model"
        );
        FreqModel {
            counts: vec![1; sigma as usize],
            total: sigma,
        }
    }

    pub fn sigma(&self) -> u32 {
        self.counts.len() as u32
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// `(cumulative count below sym, count of sym)`.
    pub fn interval(&self, sym: u32) -> (u32, u32) {
        let cum = self.counts[..sym as usize].iter().sum();
        (cum, self.counts[sym as usize])
    }

    /// The symbol whose interval contains `target`, with its interval.
    pub fn lookup(&self, target: u32) -> (u32, u32, u32) {
        let mut cum = 0;
        for (s, &c) in self.counts.iter().enumerate() {
            if target < cum + c {
                return (s as u32, cum, c);
            }
            cum += c;
        }
        let last = self.counts.len() - 1;
        (last as u32, cum - self.counts[last], self.counts[last])
    }

    pub fn update(&mut self, sym: u32) {
        self.counts[sym as usize] += Self::INCREMENT;
        self.total += Self::INCREMENT;
        if self.total >= Self::RESCALE_AT {
            for c in &mut self.counts {
                *c = (*c).div_ceil(2);
            }
            self.total = self.counts.iter().sum();
        }
    }
}
