//! Binomial coefficients, colexicographic ranking and lexicographic
//! enumeration of k-subsets.

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Pascal table `C(v, j)` for `v < n` and `j <= depth`, used for colex ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialTable {
    depth: usize,
    rows: Vec<u64>,
}

impl BinomialTable {
    /// Panics if some entry overflows `u64`; callers size-check beforehand.
    pub fn new(n: usize, depth: usize) -> Self {
        let width = depth + 1;
        let mut rows = vec![0u64; n * width];
        for v in 0..n {
            rows[v * width] = 1;
            for j in 1..=depth {
                rows[v * width + j] = if v == 0 {
                    0
                } else {
                    rows[(v - 1) * width + j]
                        .checked_add(rows[(v - 1) * width + j - 1])
                        .expect("binomial table overflow")
                };
            }
        }
        BinomialTable { depth, rows }
    }

    #[inline]
    pub fn get(&self, v: u32, j: usize) -> u64 {
        debug_assert!(j <= self.depth);
        self.rows[v as usize * (self.depth + 1) + j]
    }

    /// Colex rank of a strictly increasing subset: `sum_i C(subset[i], i + 1)`.
    /// Subsets of `[0, m)` occupy ranks `0..C(m, len)` whatever the universe.
    #[inline]
    pub fn colex_rank(&self, subset: &[u32]) -> u64 {
        subset
            .iter()
            .enumerate()
            .map(|(i, &v)| self.get(v, i + 1))
            .sum()
    }
}

/// Advances `combo` (strictly increasing, entries in `[0, n)`) to the next
/// subset in lexicographic order. Returns `false` once exhausted.
pub fn next_combination(combo: &mut [u32], n: u32) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) as u32 {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First k-subset of `[0, n)` in lexicographic order, if any exists.
pub fn first_combination(n: usize, k: usize) -> Option<Vec<u32>> {
    (k <= n).then(|| (0..k as u32).collect())
}

/// Calls `f` on every k-subset of `[0, n)` in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[u32])) {
    if let Some(mut combo) = first_combination(n, k) {
        loop {
            f(&combo);
            if !next_combination(&mut combo, n as u32) {
                break;
            }
        }
    }
}

/// Calls `f` on each `(k-1)`-subset of the sorted `set` obtained by dropping
/// one element, together with the dropped element.
pub fn for_each_drop_one(set: &[u32], buf: &mut Vec<u32>, mut f: impl FnMut(&[u32], u32)) {
    for skip in 0..set.len() {
        buf.clear();
        buf.extend(
            set.iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v),
        );
        f(buf, set[skip]);
    }
}
