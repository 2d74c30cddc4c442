//! Linear-time feasibility test: is there an edge whose augmented diameter
//! is within a threshold?
//!
//! For a fixed row `i` the components behave monotonically in `j`: `alpha`
//! and `gamma` grow, `beta` and `delta` shrink. So each one admits the
//! threshold on an interval of `j`, and the interval endpoints move
//! monotonically with `i`. Three two-pointer sweeps produce the endpoints
//! for `alpha`, `beta`, `delta`. `gamma` has no cheap evaluator, so it is
//! only tested at the single candidate `a_i` (the leftmost `j` admitted by
//! the other three) through the reach arrays of [`GammaOracle`].

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::metric::{CandidateEdge, MetricPath};
use crate::rmq::RangeMin;
use crate::scalar::{Scalar, Threshold};

/// Upper bound on threshold tests per vertex performed by one decision run:
/// two per vertex for each of the three sweeps plus one `gamma` test.
pub const DECIDE_TESTS_PER_VERTEX: usize = 7;

/// Interval endpoints of the admitted `j` range for every row `i`.
///
/// Stored per row, 0-based slot `i - 1`. `alpha` holds `i - 1` when not even
/// `j = i` is admitted; `beta` and `delta` hold `n + 1` for "no such j".
#[derive(Debug, Clone, Default)]
pub struct IndexProfile {
    n: usize,
    strict: bool,
    alpha: Vec<usize>,
    beta: Vec<usize>,
    delta: Vec<usize>,
    tests: usize,
}

impl IndexProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Largest admitted `j` for `alpha`, `None` if `alpha(i, i)` already fails.
    pub fn alpha_index(&self, i: usize) -> Option<usize> {
        let v = self.alpha[i - 1];
        (v >= i).then_some(v)
    }

    /// Smallest admitted `j` for `beta`, `None` standing for infinity.
    pub fn beta_index(&self, i: usize) -> Option<usize> {
        let v = self.beta[i - 1];
        (v <= self.n).then_some(v)
    }

    pub fn delta_index(&self, i: usize) -> Option<usize> {
        let v = self.delta[i - 1];
        (v <= self.n).then_some(v)
    }

    /// Smallest `j` admitted by `alpha`, `beta` and `delta` together.
    #[inline]
    pub fn candidate(&self, i: usize) -> Option<usize> {
        let a = self.beta[i - 1].max(self.delta[i - 1]);
        (a <= self.alpha[i - 1] && a <= self.n).then_some(a)
    }

    /// Threshold tests spent building the profile.
    pub fn tests(&self) -> usize {
        self.tests
    }
}

/// O(1) membership tests for `alpha(i, j)` and `beta(i, j)` against a
/// threshold, without evaluating either function.
struct ReachTests<'a, T> {
    path: &'a MetricPath<T>,
    th: Threshold<T>,
    /// Largest `k` with `d_P(1, k)` admitted, 0 if none.
    from_first: usize,
    /// Smallest `k` with `d_P(k, n)` admitted, `n + 1` if none.
    to_last: usize,
}

impl<'a, T: Scalar> ReachTests<'a, T> {
    fn new(path: &'a MetricPath<T>, th: Threshold<T>) -> Self {
        let n = path.n();
        let a = path.prefix_sums();
        let from_first = a.partition_point(|&x| th.admits(x - a[0]));
        let to_last = a.partition_point(|&x| !th.admits(a[n - 1] - x)) + 1;
        ReachTests {
            path,
            th,
            from_first,
            to_last,
        }
    }

    /// Vertices past `from_first` are out of budget along the path, so the
    /// first of them must be reached through the new edge; the detour only
    /// gets shorter further right.
    #[inline]
    fn alpha_ok(&self, i: usize, j: usize) -> bool {
        let k = self.from_first;
        if k >= j {
            true
        } else if k < i || MetricPath::<T>::is_path_edge(i, j) {
            false
        } else {
            let w = self.path.w(i, j);
            self.th.admits(self.path.via_from_first(i, j, w, k + 1))
        }
    }

    #[inline]
    fn beta_ok(&self, i: usize, j: usize) -> bool {
        let k = self.to_last;
        if k <= i {
            true
        } else if k > j || MetricPath::<T>::is_path_edge(i, j) {
            false
        } else {
            let w = self.path.w(i, j);
            self.th.admits(self.path.to_last_via(i, j, w, k - 1))
        }
    }

    #[inline]
    fn delta_ok(&self, i: usize, j: usize) -> bool {
        self.th.admits(self.path.delta_at(i, j))
    }
}

pub(crate) fn index_profile<T: Scalar>(path: &MetricPath<T>, th: Threshold<T>) -> IndexProfile {
    let mut profile = IndexProfile::default();
    fill_index_profile(path, th, &mut profile);
    profile
}

fn fill_index_profile<T: Scalar>(path: &MetricPath<T>, th: Threshold<T>, out: &mut IndexProfile) {
    let n = path.n();
    let tests = ReachTests::new(path, th);
    let mut count = 0;
    out.n = n;
    out.strict = th.strict;

    let alpha = &mut out.alpha;
    alpha.clear();
    let mut p = n;
    for i in 1..=n {
        while p >= i {
            count += 1;
            if tests.alpha_ok(i, p) {
                break;
            }
            p -= 1;
        }
        alpha.push(if p >= i { p } else { i - 1 });
    }

    // Clamping to `j >= i` breaks monotonicity in `i`, so the sweep runs
    // over the row padded with `beta(i, i)` left of the diagonal, whose
    // first admitted index does not increase with `i`.
    let beta = &mut out.beta;
    beta.clear();
    beta.resize(n, 0);
    let mut p = 1;
    for i in (1..=n).rev() {
        while p <= n {
            count += 1;
            if tests.beta_ok(i, p.max(i)) {
                break;
            }
            p += 1;
        }
        beta[i - 1] = if p <= n { p.max(i) } else { n + 1 };
    }

    let delta = &mut out.delta;
    delta.clear();
    let mut p = 1;
    for i in 1..=n {
        p = p.max(i);
        while p <= n {
            count += 1;
            if tests.delta_ok(i, p) {
                break;
            }
            p += 1;
        }
        delta.push(p);
    }
    out.tests = count;
}

/// Computes the `alpha`/`beta`/`delta` interval endpoints for every row,
/// against `<= lambda` or, with `strict`, `< lambda`.
pub fn compute_index_profile<T: Scalar>(
    path: &MetricPath<T>,
    lambda: T,
    strict: bool,
) -> Result<IndexProfile> {
    check_lambda(lambda)?;
    Ok(index_profile(
        path,
        Threshold {
            value: lambda,
            strict,
        },
    ))
}

/// Constant-time `gamma(i, a_i)` test against a fixed threshold.
///
/// `reach[j]` is the farthest vertex reachable from `v_j` along the path
/// within budget; `cover[k]` is the first `j` whose reach covers `k`;
/// `gap[j] = d_P(j, reach[j] + 1)` is the first path length that overflows.
/// Inside the cycle of `(i, a)`, every pair `(j, reach[j] + 1)` with `j`
/// before `cover[a]` must be served by the detour, whose length is the
/// cycle length minus `gap[j]`. So the test reduces to one range minimum.
#[derive(Debug, Clone)]
pub struct GammaOracle<T> {
    threshold: Threshold<T>,
    reach: Vec<usize>,
    cover: Vec<usize>,
    /// Over the gaps.
    rmq: RangeMin<T>,
}

impl<T: Scalar> GammaOracle<T> {
    pub(crate) fn new(path: &MetricPath<T>, th: Threshold<T>) -> Self {
        let mut oracle = GammaOracle {
            threshold: th,
            reach: Vec::new(),
            cover: Vec::new(),
            rmq: RangeMin::default(),
        };
        oracle.rebuild(path, th);
        oracle
    }

    fn rebuild(&mut self, path: &MetricPath<T>, th: Threshold<T>) {
        self.threshold = th;
        fill_reach(path, th, &mut self.reach, &mut self.cover);
        let n = path.n();
        let reach = &self.reach;
        self.rmq.rebuild((1..=n).map(|j| gap_at(path, reach, j)));
    }

    pub fn threshold(&self) -> Threshold<T> {
        self.threshold
    }

    /// `g_j`: largest `k >= j` with `d_P(j, k)` admitted (`j - 1` if none).
    pub fn reach(&self, j: usize) -> usize {
        self.reach[j - 1]
    }

    /// `h_k`: smallest `j <= k` with `reach(j) >= k` (`k + 1` if none).
    pub fn cover(&self, k: usize) -> usize {
        self.cover[k - 1]
    }

    /// `d_P(j, reach(j) + 1)`, infinite when the reach is the last vertex.
    pub fn gap(&self, j: usize) -> T {
        self.rmq.value(j)
    }

    pub fn reaches(&self) -> &[usize] {
        &self.reach
    }

    pub fn covers(&self) -> &[usize] {
        &self.cover
    }

    /// Whether `gamma(i, a)` is admitted, in O(1).
    pub fn gamma_feasible(&self, path: &MetricPath<T>, i: usize, a: usize) -> Result<bool> {
        if i == 0 || a > path.n() || i >= a {
            return Err(invalid(format!(
                "gamma test needs 1 <= i < a <= {}, got i = {i}, a = {a}",
                path.n()
            )));
        }
        if self.reach.len() != path.n() {
            return Err(invalid("oracle was built for a different path"));
        }
        Ok(self.admits(path, i, a))
    }

    #[inline]
    pub(crate) fn admits(&self, path: &MetricPath<T>, i: usize, a: usize) -> bool {
        let h = self.cover[a - 1];
        if h <= i {
            return true;
        }
        let shortest_gap = self.rmq.min_in(i, h - 1);
        self.threshold
            .admits(path.cycle_detour_max(i, a, shortest_gap))
    }
}

fn fill_reach<T: Scalar>(
    path: &MetricPath<T>,
    th: Threshold<T>,
    reach: &mut Vec<usize>,
    cover: &mut Vec<usize>,
) {
    let n = path.n();
    reach.clear();
    let mut p = 0;
    for j in 1..=n {
        if p < j {
            p = j - 1;
        }
        while p < n && th.admits(path.dp(j, p + 1)) {
            p += 1;
        }
        reach.push(p);
    }

    cover.clear();
    let mut j = 1;
    for k in 1..=n {
        while j <= k && reach[j - 1] < k {
            j += 1;
        }
        cover.push(j);
    }
}

#[inline]
fn gap_at<T: Scalar>(path: &MetricPath<T>, reach: &[usize], j: usize) -> T {
    let next = reach[j - 1] + 1;
    if next <= path.n() {
        path.dp(j, next)
    } else {
        T::infinity()
    }
}

/// `g`, `h` and `B` arrays for a threshold. Shared with the optimizer,
/// which needs them for a strict threshold.
pub(crate) fn reach_arrays<T: Scalar>(
    path: &MetricPath<T>,
    th: Threshold<T>,
) -> (Vec<usize>, Vec<usize>, Vec<T>) {
    let (mut reach, mut cover) = (Vec::new(), Vec::new());
    fill_reach(path, th, &mut reach, &mut cover);
    let gap = (1..=path.n()).map(|j| gap_at(path, &reach, j)).collect();
    (reach, cover, gap)
}

/// Builds the `gamma` test structure for `<= lambda` (or `< lambda`).
pub fn build_gamma_oracle<T: Scalar>(
    path: &MetricPath<T>,
    lambda: T,
    strict: bool,
) -> Result<GammaOracle<T>> {
    check_lambda(lambda)?;
    Ok(GammaOracle::new(
        path,
        Threshold {
            value: lambda,
            strict,
        },
    ))
}

/// Verdict of one decision run.
#[derive(Debug, Clone, Serialize)]
pub struct DecisionOutcome<T> {
    pub lambda: T,
    /// An edge whose augmented diameter is within `lambda`, when one exists.
    pub witness: Option<CandidateEdge>,
    /// Threshold tests performed (profile sweeps plus `gamma` tests).
    pub tests: usize,
}

impl<T> DecisionOutcome<T> {
    pub fn feasible(&self) -> bool {
        self.witness.is_some()
    }
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if lambda >= T::zero() {
        Ok(())
    } else {
        Err(invalid(format!(
            "threshold must be non-negative, got {lambda}"
        )))
    }
}

/// Decides whether some edge brings the diameter down to `lambda` or less.
pub fn decide<T: Scalar>(path: &MetricPath<T>, lambda: T) -> Result<DecisionOutcome<T>> {
    check_lambda(lambda)?;
    Ok(decide_with(path, Threshold::at_most(lambda)))
}

pub(crate) fn decide_with<T: Scalar>(path: &MetricPath<T>, th: Threshold<T>) -> DecisionOutcome<T> {
    Scratch::default().decide(path, th)
}

/// Buffers reused across decision runs on paths of similar size, so that
/// repeated calls do not keep allocating O(n) arrays.
#[derive(Debug)]
pub(crate) struct Scratch<T> {
    profile: IndexProfile,
    gamma: Option<GammaOracle<T>>,
}

impl<T> Default for Scratch<T> {
    fn default() -> Self {
        Scratch {
            profile: IndexProfile::default(),
            gamma: None,
        }
    }
}

impl<T: Scalar> Scratch<T> {
    pub(crate) fn decide(&mut self, path: &MetricPath<T>, th: Threshold<T>) -> DecisionOutcome<T> {
        fill_index_profile(path, th, &mut self.profile);
        let profile = &self.profile;
        let mut tests = profile.tests();
        let mut gamma_ready = false;
        let mut witness = None;
        for i in 1..=path.n() {
            let Some(a) = profile.candidate(i) else {
                continue;
            };
            if a <= i {
                witness = Some(CandidateEdge { i, j: i });
                break;
            }
            tests += 1;
            if !gamma_ready {
                match &mut self.gamma {
                    Some(g) => g.rebuild(path, th),
                    None => self.gamma = Some(GammaOracle::new(path, th)),
                }
                gamma_ready = true;
            }
            if self.gamma.as_ref().unwrap().admits(path, i, a) {
                witness = Some(CandidateEdge { i, j: a });
                break;
            }
        }
        DecisionOutcome {
            lambda: th.value,
            witness,
            tests,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{generate, Family, GeneratorSpec};
    use crate::testing::{col5, sq4};

    #[test]
    fn test_count_is_linear_on_every_family() {
        for (k, kind) in Family::KINDS.iter().enumerate() {
            let spec = GeneratorSpec {
                family: Family::by_name(kind).unwrap(),
                n: 300,
                dim: 2,
                seed: k as u64,
            };
            let p = generate(&spec).unwrap();
            let top = p.total_length();
            for step in 0..=20 {
                let out = decide(&p, top * step as f64 / 20.0).unwrap();
                assert!(out.tests <= DECIDE_TESTS_PER_VERTEX * p.n(), "{kind}: {}", out.tests);
            }
        }
    }

    #[test]
    fn square_profile_at_two() {
        let p = sq4();
        let prof = compute_index_profile(&p, 2.0, false).unwrap();
        assert_eq!(prof.delta_index(1), Some(4));
        assert_eq!(prof.alpha_index(1), Some(4));
        assert_eq!(prof.beta_index(1), Some(4));
        // delta(2, 4) = 1 + sqrt(2) > 2, so rows 2.. have no delta interval.
        for i in 2..=4 {
            assert_eq!(prof.delta_index(i), None);
        }
        assert_eq!(prof.candidate(1), Some(4));
    }

    #[test]
    fn collinear_profile_at_path_length() {
        let p = col5();
        let prof = compute_index_profile(&p, 4.0, false).unwrap();
        for i in 1..=5 {
            assert_eq!(prof.delta_index(i), Some(i));
            assert_eq!(prof.candidate(i), Some(i));
        }
    }

    #[test]
    fn strict_profile_loses_exact_ties() {
        let p = sq4();
        let prof = compute_index_profile(&p, 2.0, true).unwrap();
        assert_eq!(prof.beta_index(1), None);
        assert_eq!(prof.candidate(1), None);
    }

    #[test]
    fn gamma_oracle_arrays() {
        let p = col5();
        let g = build_gamma_oracle(&p, 2.0, false).unwrap();
        assert_eq!(g.reaches(), &[3, 4, 5, 5, 5]);
        assert_eq!(g.cover(5), 3);

        let p = sq4();
        let g = build_gamma_oracle(&p, 2.0, false).unwrap();
        assert_eq!(g.reaches(), &[3, 4, 4, 4]);
        assert_eq!(g.cover(4), 2);
        assert_eq!(g.gap(1), 3.0);
        assert_eq!(g.gap(2), f64::INFINITY);

        let g = build_gamma_oracle(&p, 3.0, false).unwrap();
        assert!(g.reaches().iter().all(|&r| r == 4));
        assert!((1..=4).all(|j| g.gap(j) == f64::INFINITY));
    }

    #[test]
    fn gamma_test_on_square() {
        let p = sq4();
        let g = build_gamma_oracle(&p, 2.0, false).unwrap();
        // cover(4) = 2 > 1; min gap over [1, 1] is 3 >= 4 - 2.
        assert!(g.gamma_feasible(&p, 1, 4).unwrap());
        assert!(g.gamma_feasible(&p, 2, 4).unwrap());
        assert!(g.gamma_feasible(&p, 4, 4).is_err());
        assert!(g.gamma_feasible(&p, 3, 2).is_err());
    }

    #[test]
    fn decide_examples() {
        let p = sq4();
        let out = decide(&p, 2.0).unwrap();
        assert_eq!(out.witness, Some(CandidateEdge { i: 1, j: 4 }));
        assert!(!decide(&p, 1.9).unwrap().feasible());

        let p = col5();
        let out = decide(&p, 4.0).unwrap();
        assert_eq!(out.witness, Some(CandidateEdge { i: 1, j: 1 }));
        assert!(!decide(&p, 3.999).unwrap().feasible());
    }

    #[test]
    fn negative_threshold_rejected() {
        let p = sq4();
        assert!(decide(&p, -1.0).is_err());
        assert!(decide(&p, f64::NAN).is_err());
        assert!(compute_index_profile(&p, -0.5, false).is_err());
        assert!(build_gamma_oracle(&p, -0.5, true).is_err());
    }

    #[test]
    fn single_vertex_is_feasible_at_zero() {
        let p = MetricPath::from_points(&[vec![1.0]]).unwrap();
        let out = decide(&p, 0.0).unwrap();
        assert_eq!(out.witness, Some(CandidateEdge { i: 1, j: 1 }));
    }

    #[test]
    fn test_count_is_linear() {
        let pts: Vec<Vec<f64>> = (0..500)
            .map(|k| vec![(k as f64).sin() * 10.0, (k as f64 * 0.7).cos() * 10.0])
            .collect();
        let p = MetricPath::from_points(&pts).unwrap();
        for lambda in [0.0, 5.0, 50.0, 200.0, 1e4] {
            let out = decide(&p, lambda).unwrap();
            assert!(
                out.tests <= DECIDE_TESTS_PER_VERTEX * p.n(),
                "{} tests",
                out.tests
            );
        }
    }
}
