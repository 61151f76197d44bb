//! Fixed-capacity vertex bitset used by the search routines.

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitSet {
    words: Vec<u64>,
    capacity: usize,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        BitSet { words: vec![0; capacity.div_ceil(WORD)], capacity }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let hi = (lo + WORD).min(capacity);
            *w = if hi - lo == WORD { u64::MAX } else { (1u64 << (hi - lo)) - 1 };
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(capacity: usize, it: I) -> Self {
        let mut s = Self::new(capacity);
        for v in it {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v / WORD] |= 1 << (v % WORD);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v / WORD] &= !(1 << (v % WORD));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    #[inline]
    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    #[inline]
    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    #[inline]
    pub fn difference_with_words(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= !b;
        }
    }

    #[inline]
    pub fn words_intersect(words: &[u64], set: &BitSet) -> bool {
        words.iter().zip(&set.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_respects_capacity() {
        for cap in [0, 1, 63, 64, 65, 130] {
            let s = BitSet::full(cap);
            assert_eq!(s.len(), cap);
            assert_eq!(s.to_vec(), (0..cap).collect::<Vec<_>>());
        }
    }

    #[test]
    fn set_algebra() {
        let mut a = BitSet::from_iter(100, [1, 5, 70, 99]);
        let b = BitSet::from_iter(100, [5, 70]);
        let mut c = a.clone();
        c.intersect_with(&b);
        assert_eq!(c, b);
        a.difference_with(&b);
        assert_eq!(a.to_vec(), vec![1, 99]);
        assert_eq!(a.first(), Some(1));
        assert!(!BitSet::words_intersect(&b.words, &a));
    }
}
