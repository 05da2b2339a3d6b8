use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Subset of `[0, capacity)` stored as a bitmask. Bits at or above
/// `capacity` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    capacity: usize,
    words: Vec<u64>,
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl VertexSet {
    pub fn empty(capacity: usize) -> Self {
        VertexSet {
            capacity,
            words: vec![0; words_for(capacity)],
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut set = VertexSet {
            capacity,
            words: vec![u64::MAX; words_for(capacity)],
        };
        set.trim();
        set
    }

    /// Panics if a vertex is `>= capacity`.
    pub fn from_vertices(capacity: usize, vertices: impl IntoIterator<Item = u32>) -> Self {
        let mut set = Self::empty(capacity);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    pub(crate) fn from_words(capacity: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(capacity));
        let mut set = VertexSet { capacity, words };
        set.trim();
        set
    }

    fn trim(&mut self) {
        let rem = self.capacity % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, v: u32) {
        assert!((v as usize) < self.capacity, "vertex {v} outside capacity {}", self.capacity);
        self.words[v as usize / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: u32) {
        if (v as usize) < self.capacity {
            self.words[v as usize / 64] &= !(1 << (v % 64));
        }
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        (v as usize) < self.capacity && self.words[v as usize / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (i, w) in self.words.iter_mut().enumerate() {
            *w &= other.words.get(i).copied().unwrap_or(0);
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        bits(&self.words)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

/// Ascending positions of the set bits in `words`.
pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = u32> + '_ {
    words.iter().enumerate().flat_map(|(i, &word)| {
        let mut w = word;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros();
            w &= w - 1;
            Some(i as u32 * 64 + b)
        })
    })
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet({}; ", self.capacity)?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct VertexSetRepr {
    capacity: usize,
    vertices: Vec<u32>,
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        VertexSetRepr {
            capacity: self.capacity,
            vertices: self.to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = VertexSetRepr::deserialize(deserializer)?;
        if let Some(&v) = repr.vertices.iter().find(|&&v| v as usize >= repr.capacity) {
            return Err(serde::de::Error::custom(format!(
                "vertex {v} outside capacity {}",
                repr.capacity
            )));
        }
        Ok(VertexSet::from_vertices(repr.capacity, repr.vertices))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_set_has_no_stray_bits() {
        for n in [0, 1, 63, 64, 65, 130] {
            let full = VertexSet::full(n);
            assert_eq!(full.len(), n);
            assert_eq!(full.to_vec(), (0..n as u32).collect::<Vec<_>>());
        }
    }

    #[test]
    fn remove_out_of_range_is_noop() {
        let mut s = VertexSet::from_vertices(3, [0, 2]);
        s.remove(10);
        assert_eq!(s.to_vec(), vec![0, 2]);
        assert!(!s.contains(10));
    }

    proptest! {
        #[test]
        fn iter_matches_membership(n in 0usize..200, picks in proptest::collection::vec(any::<u32>(), 0..40)) {
            let picks: Vec<u32> = if n == 0 { vec![] } else { picks.into_iter().map(|p| p % n as u32).collect() };
            let set = VertexSet::from_vertices(n, picks.iter().copied());
            let mut expected = picks.clone();
            expected.sort_unstable();
            expected.dedup();
            prop_assert_eq!(set.to_vec(), expected.clone());
            prop_assert_eq!(set.len(), expected.len());
            let json = serde_json::to_string(&set).unwrap();
            let back: VertexSet = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, set);
        }
    }
}
