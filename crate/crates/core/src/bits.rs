//! Small fixed-size bitset used by the greedy and exact search engines.

pub(crate) struct Bitset(Vec<u64>);

impl Bitset {
    pub fn new(size: u64) -> Self {
        Bitset(vec![0; (size as usize).div_ceil(64)])
    }

    #[inline]
    pub fn test(&self, i: u64) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: u64) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: u64) {
        self.0[(i / 64) as usize] &= !(1 << (i % 64));
    }
}
