//! Definition-level reference implementation.
//!
//! Everything here is computed from raw vertex distances and path lengths,
//! enumerating vertices and pairs instead of using the fast evaluators. It
//! exists to cross-check the rest of the crate and is polynomial but slow;
//! [`brute_solve`] refuses paths longer than a cap.

use crate::error::{invalid, Result};
use crate::metric::{max, min, CandidateEdge, DiagnosticProfile, MetricPath};
use crate::scalar::Scalar;

/// Default vertex cap for [`brute_solve`].
pub const DEFAULT_ORACLE_CAP: usize = 200;

fn along<T: Scalar>(path: &MetricPath<T>, u: usize, v: usize) -> T {
    if u <= v {
        path.dp(u, v)
    } else {
        path.dp(v, u)
    }
}

fn pair<T: Scalar>(path: &MetricPath<T>, e: CandidateEdge, u: usize, v: usize) -> T {
    let (u, v) = if u <= v { (u, v) } else { (v, u) };
    let w = path.w(e.i, e.j);
    let direct = along(path, u, v);
    if MetricPath::<T>::is_path_edge(e.i, e.j) {
        return direct;
    }
    let forward = along(path, u, e.i) + w + along(path, e.j, v);
    let backward = along(path, u, e.j) + w + along(path, e.i, v);
    min(direct, min(forward, backward))
}

/// Shortest-path distance between `u` and `v` after adding `e`.
pub fn brute_pair_distance<T: Scalar>(
    path: &MetricPath<T>,
    e: CandidateEdge,
    u: usize,
    v: usize,
) -> Result<T> {
    path.check_edge(e)?;
    path.dist(u, v)?;
    Ok(pair(path, e, u, v))
}

fn profile<T: Scalar>(path: &MetricPath<T>, e: CandidateEdge) -> DiagnosticProfile<T> {
    let n = path.n();
    let mut alpha = T::zero();
    let mut beta = T::zero();
    for k in e.i..=e.j {
        alpha = max(alpha, pair(path, e, 1, k));
        beta = max(beta, pair(path, e, k, n));
    }
    let mut gamma = T::zero();
    for k in e.i..=e.j {
        for l in k..=e.j {
            gamma = max(gamma, pair(path, e, k, l));
        }
    }
    DiagnosticProfile::new(alpha, beta, gamma, pair(path, e, 1, n))
}

/// All four components of `e` by enumeration: O(n) for `alpha`/`beta`,
/// O(n^2) for `gamma`.
pub fn brute_profile<T: Scalar>(
    path: &MetricPath<T>,
    e: CandidateEdge,
) -> Result<DiagnosticProfile<T>> {
    path.check_edge(e)?;
    Ok(profile(path, e))
}

/// Diameter of the augmented graph over all vertex pairs. Agrees with
/// `brute_profile(..).diameter`, which only looks at the four families.
pub fn apsp_diameter<T: Scalar>(path: &MetricPath<T>, e: CandidateEdge) -> Result<T> {
    path.check_edge(e)?;
    let n = path.n();
    let mut best = T::zero();
    for u in 1..=n {
        for v in u..=n {
            best = max(best, pair(path, e, u, v));
        }
    }
    Ok(best)
}

/// Optimal diameter and the lexicographically smallest edge attaining it,
/// for `n <= DEFAULT_ORACLE_CAP`.
pub fn brute_solve<T: Scalar>(path: &MetricPath<T>) -> Result<(T, CandidateEdge)> {
    brute_solve_capped(path, DEFAULT_ORACLE_CAP)
}

pub fn brute_solve_capped<T: Scalar>(
    path: &MetricPath<T>,
    cap: usize,
) -> Result<(T, CandidateEdge)> {
    let n = path.n();
    if n > cap {
        return Err(invalid(format!("n = {n} exceeds the oracle cap of {cap}")));
    }
    let mut best: Option<(T, CandidateEdge)> = None;
    for i in 1..=n {
        for j in i..=n {
            let e = CandidateEdge { i, j };
            let d = profile(path, e).diameter;
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, e));
            }
        }
    }
    Ok(best.expect("n >= 1"))
}
