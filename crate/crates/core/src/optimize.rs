//! O(n log n) search for the optimal diameter `lambda*` and an edge that
//! attains it.
//!
//! `lambda*` is the smallest feasible value among all `alpha`, `beta`,
//! `gamma`, `delta` values. The first three families are searched directly
//! as sorted matrices. `gamma` values cannot be enumerated cheaply, so the
//! pipeline narrows them down:
//!
//! 1. `lambda_1`: best feasible value of the `alpha`/`beta`/`delta` families.
//! 2. Rows whose strict (`< lambda_1`) intervals intersect give one candidate
//!    partner `a_i` each. If no row qualifies, `lambda* = lambda_1`.
//! 3. `lambda_p`: best feasible subpath length, another sorted matrix.
//! 4. For the remaining case the optimum is a detour length around the cycle
//!    of some `(i, a_i)`, and there is one such candidate per row, computed
//!    with reach arrays strict at `lambda_p` and one range minimum each.
//! 5. `lambda* = min(lambda_1, lambda_p, lambda')`, edge from one more
//!    decision run.
//!
//! Every candidate value is accepted by the same decision procedure, so the
//! minimum is feasible by construction.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::decision::{index_profile, reach_arrays, Scratch};
use crate::error::{invalid, Result};
use crate::matrix_search::{
    min_feasible_in_matrix, min_feasible_in_set, Order, SearchStats, SortedMatrix,
};
use crate::metric::{min, CandidateEdge, MetricPath};
use crate::rmq::RangeMin;
use crate::scalar::{Scalar, Threshold};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Alpha,
    Beta,
    Delta,
}

fn feasible<T: Scalar>(scratch: &mut Scratch<T>, path: &MetricPath<T>, lambda: T) -> bool {
    scratch.decide(path, Threshold::at_most(lambda)).feasible()
}

/// Smallest feasible value of one component family, searched as a sorted
/// matrix. Below the diagonal the matrices repeat a diagonal value so both
/// orders stay monotone and no foreign value is introduced.
pub fn lambda_f<T: Scalar>(path: &MetricPath<T>, f: Component) -> (T, SearchStats) {
    lambda_f_with(&mut Scratch::default(), path, f)
}

fn lambda_f_with<T: Scalar>(
    scratch: &mut Scratch<T>,
    path: &MetricPath<T>,
    f: Component,
) -> (T, SearchStats) {
    let n = path.n();
    let predicate = |v| feasible(scratch, path, v);
    let out = match f {
        Component::Alpha => {
            let m = SortedMatrix::new(n, Order::Ascending, Order::Ascending, |i, j| {
                if j >= i {
                    path.alpha_at(i, j).0
                } else {
                    path.alpha_at(j, j).0
                }
            });
            min_feasible_in_matrix(&m, predicate)
        }
        Component::Beta => {
            let m = SortedMatrix::new(
                n,
                Order::Descending,
                Order::Descending,
                |i: usize, j: usize| path.beta_at(i, j.max(i)).0,
            );
            min_feasible_in_matrix(&m, predicate)
        }
        Component::Delta => {
            let m = SortedMatrix::new(n, Order::Descending, Order::Ascending, |i, j| {
                if j >= i {
                    path.delta_at(i, j)
                } else {
                    path.delta_at(j, j)
                }
            });
            min_feasible_in_matrix(&m, predicate)
        }
    };
    // delta(i, i) is the plain path diameter, which is always feasible.
    let value = out
        .value
        .expect("every component family holds a feasible value");
    (value, out.stats)
}

/// Smallest feasible subpath length `d_P(i, j)`.
pub fn lambda_path<T: Scalar>(path: &MetricPath<T>) -> (T, SearchStats) {
    lambda_path_with(&mut Scratch::default(), path)
}

fn lambda_path_with<T: Scalar>(scratch: &mut Scratch<T>, path: &MetricPath<T>) -> (T, SearchStats) {
    let m = SortedMatrix::new(path.n(), Order::Ascending, Order::Descending, |i, j| {
        if j >= i {
            path.dp(i, j)
        } else {
            T::zero()
        }
    });
    let out = min_feasible_in_matrix(&m, |v| feasible(scratch, path, v));
    let value = out.value.expect("the full path length is always feasible");
    (value, out.stats)
}

/// Per-row candidates for the case where the optimum is a `gamma` value
/// below `lambda_1` and below `lambda_p`.
#[derive(Debug, Clone)]
pub struct CandidateTable<T> {
    partner: Vec<Option<usize>>,
    members: Vec<usize>,
    refined: Vec<usize>,
    detour_max: Vec<T>,
}

impl<T: Scalar> CandidateTable<T> {
    /// `a_i`: smallest `j` with `alpha`, `beta`, `delta` all `< lambda_1`.
    pub fn partner(&self, i: usize) -> Option<usize> {
        self.partner[i - 1]
    }

    /// Rows with a partner.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Members whose cycle contains at least one pair overflowing
    /// `lambda_p` along the path.
    pub fn refined(&self) -> &[usize] {
        &self.refined
    }

    /// Largest forced detour length on the cycle of `(i, a_i)`, one per
    /// entry of [`CandidateTable::refined`].
    pub fn detour_max(&self) -> &[T] {
        &self.detour_max
    }

    pub fn iter_refined(&self) -> impl Iterator<Item = (CandidateEdge, T)> + '_ {
        self.refined.iter().zip(&self.detour_max).map(|(&i, &d)| {
            (
                CandidateEdge {
                    i,
                    j: self.partner[i - 1].unwrap(),
                },
                d,
            )
        })
    }
}

/// Partners at `< lambda_1`, reach arrays at `< lambda_p`, and the largest
/// forced detour `|C(i, a_i)| - min gap` for every refined row.
pub fn build_candidate_table<T: Scalar>(
    path: &MetricPath<T>,
    lambda_1: T,
    lambda_p: T,
) -> Result<CandidateTable<T>> {
    let positive = |v: T| v > T::zero();
    if !positive(lambda_1) || !positive(lambda_p) {
        return Err(invalid(format!(
            "candidate table needs positive thresholds, got {lambda_1} and {lambda_p}"
        )));
    }
    Ok(candidate_table(path, lambda_1, lambda_p))
}

fn candidate_table<T: Scalar>(path: &MetricPath<T>, lambda_1: T, lambda_p: T) -> CandidateTable<T> {
    let n = path.n();
    let profile = index_profile(path, Threshold::below(lambda_1));
    let partner: Vec<Option<usize>> = (1..=n).map(|i| profile.candidate(i)).collect();
    let members: Vec<usize> = (1..=n).filter(|&i| partner[i - 1].is_some()).collect();

    let mut refined = Vec::new();
    let mut detour_max = Vec::new();
    if !members.is_empty() {
        let (_, cover, gap) = reach_arrays(path, Threshold::below(lambda_p));
        let rmq = RangeMin::build(&gap).expect("non-empty path");
        for &i in &members {
            let a = partner[i - 1].unwrap();
            let h = cover[a - 1];
            if i < h {
                refined.push(i);
                detour_max.push(path.cycle_detour_max(i, a, rmq.min_in(i, h - 1)));
            }
        }
    }
    CandidateTable {
        partner,
        members,
        refined,
        detour_max,
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SolveStats {
    pub alpha: SearchStats,
    pub beta: SearchStats,
    pub delta: SearchStats,
    /// Absent when no row has a strict candidate.
    pub path: Option<SearchStats>,
    pub candidates: Option<SearchStats>,
    /// All decision runs, including the final one that extracts the edge.
    pub decision_calls: usize,
    /// Matrix entries evaluated across the sorted-matrix searches.
    pub matrix_evaluations: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult<T> {
    pub lambda_star: T,
    pub edge: CandidateEdge,
    pub lambda_alpha: T,
    pub lambda_beta: T,
    pub lambda_delta: T,
    pub lambda_1: T,
    pub lambda_p: Option<T>,
    /// Best feasible forced-detour candidate, if any was feasible.
    pub lambda_prime: Option<T>,
    pub stats: SolveStats,
}

/// Finds the minimum achievable diameter and an edge attaining it.
pub fn solve<T: Scalar>(path: &MetricPath<T>) -> SolveResult<T> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let mut scratch = Scratch::default();

    let (lambda_alpha, s) = lambda_f_with(&mut scratch, path, Component::Alpha);
    stats.alpha = s;
    let (lambda_beta, s) = lambda_f_with(&mut scratch, path, Component::Beta);
    stats.beta = s;
    let (lambda_delta, s) = lambda_f_with(&mut scratch, path, Component::Delta);
    stats.delta = s;
    let lambda_1 = min(min(lambda_alpha, lambda_beta), lambda_delta);
    let mut total = stats.alpha;
    total += stats.beta;
    total += stats.delta;

    let mut lambda_star = lambda_1;
    let mut lambda_p = None;
    let mut lambda_prime = None;

    let partners = index_profile(path, Threshold::below(lambda_1));
    if (1..=path.n()).any(|i| partners.candidate(i).is_some()) {
        let (lp, s) = lambda_path_with(&mut scratch, path);
        stats.path = Some(s);
        total += s;
        lambda_p = Some(lp);
        lambda_star = min(lambda_star, lp);

        let table = candidate_table(path, lambda_1, lp);
        let out = min_feasible_in_set(table.detour_max(), |v| feasible(&mut scratch, path, v));
        stats.candidates = Some(out.stats);
        total += out.stats;
        lambda_prime = out.value;
        if let Some(v) = out.value {
            lambda_star = min(lambda_star, v);
        }
    }

    let edge = scratch
        .decide(path, Threshold::at_most(lambda_star))
        .witness
        .expect("lambda* was accepted by the same decision procedure");
    stats.decision_calls = total.predicate_calls + 1;
    stats.matrix_evaluations = total.evaluations;
    stats.elapsed = start.elapsed();

    SolveResult {
        lambda_star,
        edge,
        lambda_alpha,
        lambda_beta,
        lambda_delta,
        lambda_1,
        lambda_p,
        lambda_prime,
        stats,
    }
}
