//! Range minimum over a fixed array in O(1) per query.
//!
//! The array is cut into blocks of `BLOCK` entries. Inside each block we
//! keep running minima from the block start (`prefix`) and towards the
//! block end (`suffix`); across blocks a sparse table over block minima,
//! where `levels[k][b]` is the minimum of blocks `b .. b + 2^k`. A query
//! spanning several blocks is a suffix, a prefix and one sparse-table
//! lookup; a query inside one block scans at most `BLOCK` entries.
//! Memory is `3n + (n / BLOCK) log n`.

use crate::error::{invalid, Result};
use crate::metric::min;

const BLOCK: usize = 16;

#[derive(Debug, Clone)]
pub struct RangeMin<T> {
    values: Vec<T>,
    prefix: Vec<T>,
    suffix: Vec<T>,
    levels: Vec<Vec<T>>,
    build_ops: usize,
}

impl<T> Default for RangeMin<T> {
    fn default() -> Self {
        RangeMin {
            values: Vec::new(),
            prefix: Vec::new(),
            suffix: Vec::new(),
            levels: Vec::new(),
            build_ops: 0,
        }
    }
}

#[inline]
fn floor_log2(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

impl<T: PartialOrd + Copy> RangeMin<T> {
    pub fn build(values: &[T]) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("range-minimum structure over an empty array"));
        }
        let mut r = RangeMin::default();
        r.rebuild(values.iter().copied());
        Ok(r)
    }

    /// Rebuilds over new values, reusing the allocations. `values` must be
    /// non-empty.
    pub(crate) fn rebuild(&mut self, values: impl Iterator<Item = T>) {
        self.values.clear();
        self.values.extend(values);
        let n = self.values.len();
        debug_assert!(n > 0);
        let v = &self.values;

        self.prefix.clear();
        self.prefix.extend_from_slice(v);
        self.suffix.clear();
        self.suffix.extend_from_slice(v);
        for start in (0..n).step_by(BLOCK) {
            let end = (start + BLOCK).min(n);
            for p in start + 1..end {
                self.prefix[p] = min(self.prefix[p - 1], self.prefix[p]);
            }
            for p in (start..end - 1).rev() {
                self.suffix[p] = min(self.suffix[p + 1], self.suffix[p]);
            }
        }
        let blocks = n.div_ceil(BLOCK);
        let mut ops = 2 * n;

        let depth = floor_log2(blocks) + 1;
        self.levels
            .resize_with(depth.max(self.levels.len()), Vec::new);
        self.levels.truncate(depth);
        self.levels[0].clear();
        let top = &mut self.levels[0];
        top.extend((0..blocks).map(|b| self.suffix[b * BLOCK]));
        ops += blocks;
        for k in 1..depth {
            let width = 1 << (k - 1);
            let (done, rest) = self.levels.split_at_mut(k);
            let prev = &done[k - 1];
            let next = &mut rest[0];
            next.clear();
            next.extend((0..=blocks - 2 * width).map(|b| min(prev[b], prev[b + width])));
            ops += next.len();
        }
        self.build_ops = ops;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Table cells filled by the last build.
    pub fn build_ops(&self) -> usize {
        self.build_ops
    }

    /// Entry `p`, counted from 1.
    pub fn value(&self, p: usize) -> T {
        self.values[p - 1]
    }

    /// Minimum of `values[l..=r]`, positions counted from 1.
    pub fn query(&self, l: usize, r: usize) -> Result<T> {
        if l == 0 || l > r || r > self.len() {
            return Err(invalid(format!(
                "range [{l}, {r}] is not inside [1, {}]",
                self.len()
            )));
        }
        Ok(self.min_in(l, r))
    }

    /// Unchecked 1-based query.
    #[inline]
    pub(crate) fn min_in(&self, l: usize, r: usize) -> T {
        let (l, r) = (l - 1, r - 1);
        let (bl, br) = (l / BLOCK, r / BLOCK);
        if bl == br {
            let mut m = self.values[l];
            for &x in &self.values[l + 1..=r] {
                m = min(m, x);
            }
            return m;
        }
        let mut m = min(self.suffix[l], self.prefix[r]);
        if bl + 1 < br {
            let (lo, hi) = (bl + 1, br - 1);
            let k = floor_log2(hi - lo + 1);
            let row = &self.levels[k];
            m = min(m, min(row[lo], row[hi + 1 - (1 << k)]));
        }
        m
    }
}
