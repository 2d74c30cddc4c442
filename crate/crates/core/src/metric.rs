//! Problem instance and the fast evaluators for the diameter components.
//!
//! Vertices are numbered `1..=n` in every public method. For a candidate
//! edge `(i, j)` the diameter of the augmented path splits into four terms:
//!
//! * `alpha`: farthest vertex of `[i, j]` from `v_1`,
//! * `beta`: farthest vertex of `[i, j]` from `v_n`,
//! * `gamma`: largest distance between two vertices of the cycle `[i, j]`,
//! * `delta`: distance from `v_1` to `v_n`.
//!
//! `delta` and path lengths are O(1) lookups into a prefix-sum array,
//! `alpha` and `beta` are O(log n) binary searches over a unimodal
//! sequence. `gamma` has no fast evaluator; see [`crate::oracle`] for the
//! definition-level version and [`crate::decision`] for the threshold test.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::{RealScalar, Scalar};

/// The added edge `e(v_i, v_j)` with `1 <= i <= j`. `i == j` leaves the
/// path unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CandidateEdge {
    pub i: usize,
    pub j: usize,
}

impl CandidateEdge {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == 0 || i > j {
            return Err(invalid(format!("edge ({i}, {j}) must satisfy 1 <= i <= j")));
        }
        Ok(CandidateEdge { i, j })
    }

    pub fn is_degenerate(&self) -> bool {
        self.i == self.j
    }
}

impl fmt::Display for CandidateEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// The four diameter components of one candidate edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticProfile<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
    /// `max(alpha, beta, gamma, delta)`
    pub diameter: T,
    /// `max(alpha, beta, delta)`
    pub eta: T,
}

impl<T: Scalar> DiagnosticProfile<T> {
    pub fn new(alpha: T, beta: T, gamma: T, delta: T) -> Self {
        let eta = max(max(alpha, beta), delta);
        DiagnosticProfile {
            alpha,
            beta,
            gamma,
            delta,
            diameter: max(gamma, eta),
            eta,
        }
    }
}

#[inline]
pub(crate) fn max<T: PartialOrd>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

#[inline]
pub(crate) fn min<T: PartialOrd>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

#[derive(Clone)]
enum Embedding<T> {
    Points {
        dim: usize,
        coords: Vec<T>,
        norm: fn(&[T], &[T]) -> T,
    },
    Matrix {
        data: Vec<T>,
    },
}

/// Borrowed view of where the distances come from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a, T> {
    /// `n` points of dimension `dim`, row-major.
    Points { dim: usize, coords: &'a [T] },
    /// Row-major `n x n` distance matrix.
    Matrix { data: &'a [T] },
}

/// An immutable path `v_1 .. v_n` embedded in a metric space.
#[derive(Clone)]
pub struct MetricPath<T> {
    n: usize,
    embedding: Embedding<T>,
    /// `prefix[k]` is the path length from `v_1` to `v_k`; slot 0 is unused.
    prefix: Vec<T>,
}

impl<T: Scalar> fmt::Debug for MetricPath<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricPath")
            .field("n", &self.n)
            .field("kind", &self.kind())
            .field("length", &self.total_length())
            .finish()
    }
}

fn euclidean<T: RealScalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        let d = x - y;
        acc = acc + d * d;
    }
    acc.sqrt()
}

impl<T: RealScalar> MetricPath<T> {
    /// Builds a path through `points` in order, with Euclidean distances.
    pub fn from_points(points: &[Vec<T>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (k, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidInstance(format!(
                    "points[{k}] has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat_points(dim, coords)
    }

    /// Same as [`MetricPath::from_points`] with row-major coordinates.
    pub fn from_flat_points(dim: usize, coords: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInstance(
                "point dimension must be at least 1".into(),
            ));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidInstance(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(k) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidInstance(format!(
                "points[{}][{}] is not finite",
                k / dim,
                k % dim
            )));
        }
        let n = coords.len() / dim;
        Self::assemble(
            n,
            Embedding::Points {
                dim,
                coords,
                norm: euclidean::<T>,
            },
        )
    }
}

impl<T: Scalar> MetricPath<T> {
    /// Builds a path from a symmetric distance matrix with zero diagonal.
    ///
    /// The triangle inequality is not checked here; see
    /// [`MetricPath::check_triangle_inequality`].
    pub fn from_matrix(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "matrix[{r}] has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_flat_matrix(n, data)
    }

    /// Same as [`MetricPath::from_matrix`] with a row-major buffer.
    pub fn from_flat_matrix(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidInstance(format!(
                "matrix buffer has {} entries, expected {}",
                data.len(),
                n * n
            )));
        }
        for r in 0..n {
            if data[r * n + r] != T::zero() {
                return Err(Error::InvalidInstance(format!(
                    "matrix[{r}][{r}] is not zero"
                )));
            }
            for c in 0..n {
                let v = data[r * n + c];
                if !v.is_valid_length() {
                    return Err(Error::InvalidInstance(format!(
                        "matrix[{r}][{c}] = {v} is not a finite non-negative length"
                    )));
                }
                if c > r && v != data[c * n + r] {
                    return Err(Error::InvalidInstance(format!(
                        "matrix[{r}][{c}] = {v} differs from matrix[{c}][{r}] = {}",
                        data[c * n + r]
                    )));
                }
            }
        }
        Self::assemble(n, Embedding::Matrix { data })
    }

    fn assemble(n: usize, embedding: Embedding<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance(
                "a path needs at least one vertex".into(),
            ));
        }
        let mut path = MetricPath {
            n,
            embedding,
            prefix: Vec::with_capacity(n + 1),
        };
        path.prefix.push(T::zero());
        path.prefix.push(T::zero());
        for k in 2..=n {
            let step = path.w(k - 1, k);
            if !step.is_valid_length() {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {k}) has invalid length {step}",
                    k - 1
                )));
            }
            let next = path.prefix[k - 1] + step;
            path.prefix.push(next);
        }
        Ok(path)
    }

    /// Checks `d(i,k) + d(k,j) >= d(i,j)` for every triple. O(n^3).
    pub fn check_triangle_inequality(&self) -> Result<()> {
        let n = self.n;
        for i in 1..=n {
            for j in i + 1..=n {
                let direct = self.w(i, j);
                for k in 1..=n {
                    if self.w(i, k) + self.w(k, j) < direct {
                        return Err(Error::InvalidInstance(format!(
                            "triangle inequality fails: d({i},{k}) + d({k},{j}) < d({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix-backed copy with every distance passed through `f`. Used to
    /// rerun integral instances in an exact scalar type.
    pub fn map_distances<U: Scalar>(&self, f: impl Fn(T) -> U) -> Result<MetricPath<U>> {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for u in 1..=n {
            for v in 1..=n {
                data.push(f(self.w(u, v)));
            }
        }
        MetricPath::from_flat_matrix(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &'static str {
        match self.embedding {
            Embedding::Points { .. } => "points",
            Embedding::Matrix { .. } => "matrix",
        }
    }

    pub fn source(&self) -> Source<'_, T> {
        match &self.embedding {
            Embedding::Points { dim, coords, .. } => Source::Points { dim: *dim, coords },
            Embedding::Matrix { data } => Source::Matrix { data },
        }
    }

    /// Length of the whole path, `d_P(1, n)`.
    pub fn total_length(&self) -> T {
        self.prefix[self.n]
    }

    /// Prefix sums `A[1..=n]` (0-based slice, `A[1]` first).
    pub fn prefix_sums(&self) -> &[T] {
        &self.prefix[1..]
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::IndexOutOfRange {
                index: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_edge(&self, e: CandidateEdge) -> Result<()> {
        self.check_vertex(e.i)?;
        self.check_vertex(e.j)?;
        if e.i > e.j {
            return Err(invalid(format!("edge {e} must satisfy i <= j")));
        }
        Ok(())
    }

    /// Builds a validated edge for this path.
    pub fn edge(&self, i: usize, j: usize) -> Result<CandidateEdge> {
        let e = CandidateEdge::new(i, j)?;
        self.check_edge(e)?;
        Ok(e)
    }

    /// Metric distance `|v_u v_v|`.
    pub fn dist(&self, u: usize, v: usize) -> Result<T> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.w(u, v))
    }

    /// Length of the subpath from `v_i` to `v_j`, `i <= j`.
    pub fn path_dist(&self, i: usize, j: usize) -> Result<T> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i > j {
            return Err(invalid(format!("path_dist({i}, {j}) needs i <= j")));
        }
        Ok(self.dp(i, j))
    }

    /// Distance from `v_1` to `v_n` once `e` is added.
    pub fn delta(&self, e: CandidateEdge) -> Result<T> {
        self.check_edge(e)?;
        Ok(self.delta_at(e.i, e.j))
    }

    /// Farthest vertex of `[i, j]` from `v_1` once `e` is added.
    pub fn alpha(&self, e: CandidateEdge) -> Result<T> {
        self.check_edge(e)?;
        Ok(self.alpha_at(e.i, e.j).0)
    }

    /// [`MetricPath::alpha`] together with the number of points of the
    /// unimodal sequence that the binary search looked at.
    pub fn alpha_traced(&self, e: CandidateEdge) -> Result<(T, usize)> {
        self.check_edge(e)?;
        Ok(self.alpha_at(e.i, e.j))
    }

    /// Farthest vertex of `[i, j]` from `v_n` once `e` is added.
    pub fn beta(&self, e: CandidateEdge) -> Result<T> {
        self.check_edge(e)?;
        Ok(self.beta_at(e.i, e.j).0)
    }

    pub fn beta_traced(&self, e: CandidateEdge) -> Result<(T, usize)> {
        self.check_edge(e)?;
        Ok(self.beta_at(e.i, e.j))
    }

    /// Length of the walk `v_k -> v_i -> v_j -> v_l` around the cycle of `e`,
    /// for `i <= k <= l <= j`.
    pub fn cycle_detour(&self, e: CandidateEdge, k: usize, l: usize) -> Result<T> {
        self.check_edge(e)?;
        if k < e.i || l > e.j || k > l {
            return Err(invalid(format!(
                "cycle_detour needs {} <= k <= l <= {}, got k = {k}, l = {l}",
                e.i, e.j
            )));
        }
        Ok(self.detour(e.i, e.j, self.w(e.i, e.j), k, l))
    }

    /// Total length of the cycle closed by `e`.
    pub fn cycle_length(&self, e: CandidateEdge) -> Result<T> {
        self.check_edge(e)?;
        Ok(self.cycle_len(e.i, e.j))
    }

    // ---- unchecked kernels, 1-based ----

    #[inline]
    pub(crate) fn w(&self, u: usize, v: usize) -> T {
        match &self.embedding {
            Embedding::Points { dim, coords, norm } => {
                let (a, b) = ((u - 1) * dim, (v - 1) * dim);
                norm(&coords[a..a + dim], &coords[b..b + dim])
            }
            Embedding::Matrix { data } => data[(u - 1) * self.n + (v - 1)],
        }
    }

    #[inline]
    pub(crate) fn dp(&self, i: usize, j: usize) -> T {
        self.prefix[j] - self.prefix[i]
    }

    /// `d_P(1,i) + w + d_P(k,j)`: from `v_1` to `v_k` through the new edge.
    #[inline]
    pub(crate) fn via_from_first(&self, i: usize, j: usize, w: T, k: usize) -> T {
        self.dp(1, i) + w + self.dp(k, j)
    }

    /// `d_P(i,k) + w + d_P(j,n)`: from `v_k` to `v_n` through the new edge.
    #[inline]
    pub(crate) fn to_last_via(&self, i: usize, j: usize, w: T, k: usize) -> T {
        self.dp(i, k) + w + self.dp(j, self.n)
    }

    #[inline]
    pub(crate) fn detour(&self, i: usize, j: usize, w: T, k: usize, l: usize) -> T {
        self.dp(i, k) + w + self.dp(l, j)
    }

    #[inline]
    pub(crate) fn cycle_len(&self, i: usize, j: usize) -> T {
        self.dp(i, j) + self.w(i, j)
    }

    /// `(i, i)` and `(i, i + 1)` add nothing to the path. Every evaluator
    /// and the oracle answer for them with plain path distances, so equal
    /// quantities are never computed along two rounding routes.
    #[inline]
    pub(crate) fn is_path_edge(i: usize, j: usize) -> bool {
        j <= i + 1
    }

    /// Largest cycle distance of `(i, a)` given the shortest gap `B` on
    /// its forced range.
    #[inline]
    pub(crate) fn cycle_detour_max(&self, i: usize, a: usize, shortest_gap: T) -> T {
        if Self::is_path_edge(i, a) {
            self.dp(i, a)
        } else {
            self.cycle_len(i, a) - shortest_gap
        }
    }

    #[inline]
    pub(crate) fn delta_at(&self, i: usize, j: usize) -> T {
        let n = self.n;
        if Self::is_path_edge(i, j) {
            return self.dp(1, n);
        }
        min(self.dp(1, n), self.dp(1, i) + self.w(i, j) + self.dp(j, n))
    }

    /// `d(v_1, v_k)` over `k in [i, j]` is `min(increasing, decreasing)`.
    /// Find the last `k` where the plain path is no longer than the detour;
    /// the maximum is there or one step to the right.
    pub(crate) fn alpha_at(&self, i: usize, j: usize) -> (T, usize) {
        if Self::is_path_edge(i, j) {
            return (self.dp(1, j), 1);
        }
        let w = self.w(i, j);
        let mut probes = 0;
        let (mut lo, mut hi) = (i, j);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            probes += 1;
            if self.dp(1, mid) <= self.via_from_first(i, j, w, mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let mut best = self.dp(1, lo);
        probes += 1;
        if lo < j {
            best = max(best, self.via_from_first(i, j, w, lo + 1));
            probes += 1;
        }
        (best, probes)
    }

    /// Mirror of [`MetricPath::alpha_at`]: first `k` where the plain path to
    /// `v_n` is no longer than the detour, maximum there or one step left.
    pub(crate) fn beta_at(&self, i: usize, j: usize) -> (T, usize) {
        if Self::is_path_edge(i, j) {
            return (self.dp(i, self.n), 1);
        }
        let w = self.w(i, j);
        let n = self.n;
        let mut probes = 0;
        let (mut lo, mut hi) = (i, j);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            probes += 1;
            if self.dp(mid, n) <= self.to_last_via(i, j, w, mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let mut best = self.dp(lo, n);
        probes += 1;
        if lo > i {
            best = max(best, self.to_last_via(i, j, w, lo - 1));
            probes += 1;
        }
        (best, probes)
    }
}
