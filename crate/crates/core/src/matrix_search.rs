//! Smallest feasible value in an implicit sorted matrix, and in a plain set.
//!
//! The predicate is assumed monotone (false below some threshold, true from
//! it on) and expensive: each call is a full decision run. Entries are
//! cheap to moderate to evaluate. The matrix search keeps a bracket
//! `(infeasible, feasible]` and a list of square blocks that may still hold
//! an entry strictly inside it. Each round halves the block size, evaluates
//! the two corners of every surviving block (its minimum and maximum once
//! the matrix is oriented ascending), and spends two predicate calls on the
//! median minimum corner and the median maximum corner. Blocks that the new
//! bracket excludes are dropped.
//!
//! A monotone staircase crosses at most `2K` blocks of a `K x K` grid, so
//! at most `6K` blocks survive a round. That gives the budgets below:
//! `2` calls per level plus a final halving over at most `12N` singletons,
//! and two corner evaluations per block after each split.

use std::cmp::Ordering;

use serde::Serialize;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Ascending,
    Descending,
}

/// `ceil(log2(n))`, with `ceil_log2(1) == 0`.
pub fn ceil_log2(n: usize) -> usize {
    n.max(1).next_power_of_two().trailing_zeros() as usize
}

/// Predicate calls per doubling of the matrix side.
pub const PREDICATE_CALLS_PER_LEVEL: usize = 3;
/// Additive slack on predicate calls.
pub const PREDICATE_CALLS_SLACK: usize = 8;
/// Corner evaluations per matrix row.
pub const EVALUATIONS_PER_ROW: usize = 96;

/// Worst-case predicate calls for an `n x n` search.
pub fn predicate_budget(n: usize) -> usize {
    PREDICATE_CALLS_PER_LEVEL * ceil_log2(n) + PREDICATE_CALLS_SLACK
}

/// Worst-case entry evaluations for an `n x n` search.
pub fn evaluation_budget(n: usize) -> usize {
    EVALUATIONS_PER_ROW * n + 2
}

/// An `n x n` matrix given by an evaluation function over 1-based
/// `(row, col)`. `rows` is the order of values along each row (left to
/// right), `cols` along each column (top to bottom).
pub struct SortedMatrix<F> {
    n: usize,
    eval: F,
    rows: Order,
    cols: Order,
}

impl<F> SortedMatrix<F> {
    pub fn new(n: usize, rows: Order, cols: Order, eval: F) -> Self {
        SortedMatrix {
            n,
            eval,
            rows,
            cols,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl<T, F: Fn(usize, usize) -> T> SortedMatrix<F> {
    pub fn get(&self, row: usize, col: usize) -> T {
        (self.eval)(row, col)
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub predicate_calls: usize,
    pub evaluations: usize,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, rhs: Self) {
        self.predicate_calls += rhs.predicate_calls;
        self.evaluations += rhs.evaluations;
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOutcome<T> {
    /// Smallest feasible value, `None` when nothing is feasible.
    pub value: Option<T>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy)]
struct Block<T> {
    row: usize,
    col: usize,
    low: T,
    high: T,
}

/// The matrix re-indexed so rows and columns both ascend, padded with
/// `T::infinity()` up to a power-of-two side.
struct Ascending<'a, F> {
    m: &'a SortedMatrix<F>,
    evaluations: usize,
}

impl<'a, T: Scalar, F: Fn(usize, usize) -> T> Ascending<'a, F> {
    /// 0-based position in the padded, ascending matrix.
    fn at(&mut self, r: usize, c: usize) -> T {
        let n = self.m.n;
        if r >= n || c >= n {
            return T::infinity();
        }
        let row = match self.m.cols {
            Order::Ascending => r,
            Order::Descending => n - 1 - r,
        };
        let col = match self.m.rows {
            Order::Ascending => c,
            Order::Descending => n - 1 - c,
        };
        self.evaluations += 1;
        self.m.get(row + 1, col + 1)
    }

    fn block(&mut self, row: usize, col: usize, size: usize) -> Block<T> {
        let low = self.at(row, col);
        let high = if size == 1 || low == T::infinity() {
            low
        } else {
            self.at(row + size - 1, col + size - 1)
        };
        Block {
            row,
            col,
            low,
            high,
        }
    }
}

struct Bracket<T> {
    /// Largest value known infeasible.
    infeasible: Option<T>,
    /// Smallest entry known feasible, `T::infinity()` until one is found.
    feasible: T,
}

impl<T: Scalar> Bracket<T> {
    fn inside(&self, v: T) -> bool {
        v < self.feasible && self.infeasible.is_none_or(|lo| v > lo)
    }

    fn live(&self, b: &Block<T>) -> bool {
        b.low < self.feasible && self.infeasible.is_none_or(|lo| b.high > lo)
    }

    fn record(&mut self, v: T, ok: bool) {
        if ok {
            self.feasible = v;
        } else {
            self.infeasible = Some(v);
        }
    }
}

fn cmp<T: PartialOrd>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).expect("matrix entries must be comparable")
}

fn median<T: Scalar>(mut values: Vec<T>) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mid = values.len() / 2;
    let (_, m, _) = values.select_nth_unstable_by(mid, cmp);
    Some(*m)
}

/// Smallest entry `v` of `m` with `predicate(v)`.
///
/// `predicate` must be monotone over the entry values. Ties between equal
/// entries are irrelevant since only the value is reported.
pub fn min_feasible_in_matrix<T, F, P>(m: &SortedMatrix<F>, mut predicate: P) -> SearchOutcome<T>
where
    T: Scalar,
    F: Fn(usize, usize) -> T,
    P: FnMut(T) -> bool,
{
    let mut stats = SearchStats::default();
    if m.n == 0 {
        return SearchOutcome { value: None, stats };
    }
    let mut view = Ascending { m, evaluations: 0 };
    let mut bracket = Bracket {
        infeasible: None,
        feasible: T::infinity(),
    };
    let mut size = m.n.next_power_of_two();
    let mut blocks = vec![view.block(0, 0, size)];
    blocks.retain(|b| bracket.live(b));

    let mut probe = |bracket: &mut Bracket<T>, blocks: &mut Vec<Block<T>>, v: Option<T>| {
        if let Some(v) = v {
            stats.predicate_calls += 1;
            bracket.record(v, predicate(v));
            blocks.retain(|b| bracket.live(b));
        }
    };

    while size > 1 && !blocks.is_empty() {
        size /= 2;
        let mut next = Vec::with_capacity(blocks.len() * 4);
        for b in &blocks {
            for (dr, dc) in [(0, 0), (0, size), (size, 0), (size, size)] {
                let child = view.block(b.row + dr, b.col + dc, size);
                if bracket.live(&child) {
                    next.push(child);
                }
            }
        }
        blocks = next;
        if size == 1 {
            break;
        }
        let lows = blocks
            .iter()
            .map(|b| b.low)
            .filter(|&v| bracket.inside(v))
            .collect();
        probe(&mut bracket, &mut blocks, median(lows));
        let highs = blocks
            .iter()
            .map(|b| b.high)
            .filter(|&v| bracket.inside(v))
            .collect();
        probe(&mut bracket, &mut blocks, median(highs));
    }

    // Singletons: every surviving entry lies strictly inside the bracket,
    // and each probe at the median discards at least half of them.
    while !blocks.is_empty() {
        let values = blocks.iter().map(|b| b.low).collect();
        probe(&mut bracket, &mut blocks, median(values));
    }

    stats.evaluations = view.evaluations;
    let value = (bracket.feasible < T::infinity()).then_some(bracket.feasible);
    SearchOutcome { value, stats }
}

/// Smallest value of `values` with `predicate(v)`: sort, then binary search.
pub fn min_feasible_in_set<T, P>(values: &[T], mut predicate: P) -> SearchOutcome<T>
where
    T: Scalar,
    P: FnMut(T) -> bool,
{
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(cmp);
    sorted.dedup();
    let mut stats = SearchStats::default();
    let (mut lo, mut hi) = (0, sorted.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        stats.predicate_calls += 1;
        if predicate(sorted[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    SearchOutcome {
        value: sorted.get(lo).copied(),
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: Vec<Vec<f64>>) -> SortedMatrix<impl Fn(usize, usize) -> f64> {
        let n = rows.len();
        SortedMatrix::new(
            n,
            Order::Ascending,
            Order::Ascending,
            move |r: usize, c: usize| rows[r - 1][c - 1],
        )
    }

    #[test]
    fn small_matrix_examples() {
        let m = dense(vec![vec![1.0, 5.0], vec![5.0, 9.0]]);
        assert_eq!(min_feasible_in_matrix(&m, |v| v >= 7.0).value, Some(9.0));

        let m = dense(vec![vec![0.0; 3]; 3]);
        assert_eq!(min_feasible_in_matrix(&m, |v| v >= 0.0).value, Some(0.0));

        let m = dense(vec![vec![42.0]]);
        let out = min_feasible_in_matrix(&m, |v| v >= 1.0);
        assert_eq!(out.value, Some(42.0));
        assert_eq!(out.stats.predicate_calls, 1);
    }

    #[test]
    fn nothing_feasible() {
        let m = dense(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(min_feasible_in_matrix(&m, |v| v > 10.0).value, None);
        let empty = SortedMatrix::new(0, Order::Ascending, Order::Ascending, |_, _| 0.0);
        assert_eq!(min_feasible_in_matrix(&empty, |_| true).value, None);
    }

    #[test]
    fn descending_orders() {
        // rows descend left to right, columns descend top to bottom
        let m = SortedMatrix::new(3, Order::Descending, Order::Descending, |r, c| {
            (10 - r - c) as f64
        });
        assert_eq!(min_feasible_in_matrix(&m, |v| v >= 5.5).value, Some(6.0));
        // rows descend, columns ascend
        let m = SortedMatrix::new(3, Order::Descending, Order::Ascending, |r, c| {
            (10 + r - c) as f64
        });
        assert_eq!(min_feasible_in_matrix(&m, |v| v >= 9.5).value, Some(10.0));
    }

    #[test]
    fn set_examples() {
        assert_eq!(
            min_feasible_in_set(&[5.0, 1.0, 9.0, 3.0], |v| v >= 4.0).value,
            Some(5.0)
        );
        assert_eq!(
            min_feasible_in_set(&[2.0, 2.0, 2.0], |v| v >= 2.0).value,
            Some(2.0)
        );
        assert_eq!(min_feasible_in_set(&[1.0, 2.0], |v| v >= 10.0).value, None);
        assert_eq!(min_feasible_in_set::<f64, _>(&[], |_| true).value, None);
    }

    #[test]
    fn budgets_on_a_large_matrix() {
        let n = 3000;
        let m = SortedMatrix::new(n, Order::Ascending, Order::Ascending, |r, c| {
            (r * 7919 + c * 104729) as f64
        });
        for target in [0.0, 1e6, 2.5e8, 3.3e8, 1e12] {
            let out = min_feasible_in_matrix(&m, |v| v >= target);
            assert!(
                out.stats.predicate_calls <= predicate_budget(n),
                "{:?}",
                out.stats
            );
            assert!(
                out.stats.evaluations <= evaluation_budget(n),
                "{:?}",
                out.stats
            );
        }
    }

    #[test]
    fn log2_helper() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }
}
