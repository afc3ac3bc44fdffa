//! splitmix64 and the seed-splitting hash.

/// The splitmix64 generator (Steele, Lea and Flood), fixed so that synthetic
/// corpora are identical on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform integer in `lo..=hi` (multiply-shift reduction).
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        let r = ((self.next_u64() as u128 * span as u128) >> 64) as u64;
        lo + r as i64
    }

    /// Uniform integer in `-magnitude..=magnitude`.
    pub fn symmetric(&mut self, magnitude: i64) -> i64 {
        self.range(-magnitude.abs(), magnitude.abs())
    }
}

fn fnv1a<'a>(bytes: impl IntoIterator<Item = &'a u8>) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .into_iter()
        .fold(OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(PRIME))
}

/// 64-bit FNV-1a over the label name followed by the little-endian index.
pub fn sample_hash(label: &str, index: usize) -> u64 {
    fnv1a(
        label
            .as_bytes()
            .iter()
            .chain((index as u64).to_le_bytes().iter()),
    )
}
