mod common;

use common::{edges, family, rel_close, to_i64};
use doap::decision::{build_gamma_oracle, compute_index_profile};
use doap::instances::{generate, Family, GeneratorSpec};
use doap::optimize::build_candidate_table;
use doap::oracle::{brute_profile, brute_solve};
use doap::{decide, solve, CandidateEdge, IntegerPath, Path64};
use proptest::prelude::*;

fn float_path() -> impl Strategy<Value = Path64> {
    (0usize..5, 1usize..24, 2usize..4, any::<u64>()).prop_map(|(kind, n, dim, seed)| {
        generate(&GeneratorSpec {
            family: family(kind),
            n,
            dim,
            seed,
        })
        .unwrap()
    })
}

fn integer_path() -> impl Strategy<Value = IntegerPath> {
    (1usize..18, 2u32..12, any::<u64>()).prop_map(|(n, w, seed)| {
        let family = Family::RandomMetric {
            max_weight: w as f64,
            integral: true,
            offset: 0.0,
        };
        let p = generate(&GeneratorSpec {
            family,
            n,
            dim: 0,
            seed,
        })
        .unwrap();
        p.map_distances(to_i64).unwrap()
    })
}

/// Every distinct value in the spectrum of the four components, plus one
/// below each, so thresholds land on and just off every tie.
fn thresholds(path: &IntegerPath) -> Vec<i64> {
    let mut out = vec![0];
    for e in edges(path.n()) {
        let p = brute_profile(path, e).unwrap();
        for v in [p.alpha, p.beta, p.gamma, p.delta] {
            out.push(v);
            out.push(v - 1);
        }
    }
    out.retain(|&v| v >= 0);
    out.sort_unstable();
    out.dedup();
    out
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn fast_evaluators_match_oracle(path in float_path()) {
        for e in edges(path.n()) {
            let b = brute_profile(&path, e).unwrap();
            prop_assert_eq!(path.alpha(e).unwrap(), b.alpha, "alpha {}", e);
            prop_assert_eq!(path.beta(e).unwrap(), b.beta, "beta {}", e);
            prop_assert_eq!(path.delta(e).unwrap(), b.delta, "delta {}", e);
        }
    }

    #[test]
    fn index_profile_matches_definitions(path in integer_path()) {
        let n = path.n();
        for lambda in thresholds(&path) {
            for strict in [false, true] {
                let ok = |v: i64| if strict { v < lambda } else { v <= lambda };
                let prof = compute_index_profile(&path, lambda, strict).unwrap();
                for i in 1..=n {
                    let row: Vec<_> = (i..=n)
                        .map(|j| brute_profile(&path, CandidateEdge { i, j }).unwrap())
                        .collect();
                    let alpha = (i..=n).rev().find(|&j| ok(row[j - i].alpha));
                    let beta = (i..=n).find(|&j| ok(row[j - i].beta));
                    let delta = (i..=n).find(|&j| ok(row[j - i].delta));
                    prop_assert_eq!(prof.alpha_index(i), alpha);
                    prop_assert_eq!(prof.beta_index(i), beta);
                    prop_assert_eq!(prof.delta_index(i), delta);
                }
            }
        }
    }

    #[test]
    fn gamma_test_matches_definition(path in integer_path()) {
        let n = path.n();
        for lambda in thresholds(&path) {
            for strict in [false, true] {
                let g = build_gamma_oracle(&path, lambda, strict).unwrap();
                for i in 1..n {
                    for a in i + 1..=n {
                        let gamma = brute_profile(&path, CandidateEdge { i, j: a }).unwrap().gamma;
                        let want = if strict { gamma < lambda } else { gamma <= lambda };
                        prop_assert_eq!(g.gamma_feasible(&path, i, a).unwrap(), want);
                    }
                }
            }
        }
    }

    #[test]
    fn decision_matches_optimum(path in integer_path()) {
        let (best, _) = brute_solve(&path).unwrap();
        for lambda in thresholds(&path) {
            let out = decide(&path, lambda).unwrap();
            prop_assert_eq!(out.feasible(), lambda >= best);
            if let Some(e) = out.witness {
                prop_assert!(brute_profile(&path, e).unwrap().diameter <= lambda);
            }
        }
    }

    #[test]
    fn candidate_detours_are_forced_maxima(path in integer_path(), lp in 1i64..30) {
        let r = solve(&path);
        if r.lambda_1 <= 0 {
            return Ok(());
        }
        let table = build_candidate_table(&path, r.lambda_1, lp).unwrap();
        let mut refined = table.refined().iter();
        for &i in table.members() {
            let a = table.partner(i).unwrap();
            let w = path.dist(i, a).unwrap();
            let dp = |x: usize, y: usize| path.path_dist(x, y).unwrap();
            let forced = (i..=a)
                .flat_map(|k| (k..=a).map(move |l| (k, l)))
                .filter(|&(k, l)| dp(k, l) >= lp)
                .map(|(k, l)| dp(i, k) + w + dp(l, a))
                .max();
            if let Some(v) = forced {
                prop_assert_eq!(refined.next().copied(), Some(i));
                let pos = table.refined().iter().position(|&x| x == i).unwrap();
                prop_assert_eq!(table.detour_max()[pos], v);
            }
        }
        prop_assert_eq!(refined.next(), None);
    }

    #[test]
    fn decision_is_monotone_in_lambda(path in float_path(), steps in prop::collection::vec(0.0f64..1.0, 1..12)) {
        let total = path.total_length();
        let mut lambdas: Vec<f64> = steps.iter().map(|s| s * total * 1.1).collect();
        lambdas.sort_by(f64::total_cmp);
        let verdicts: Vec<bool> = lambdas.iter().map(|&l| decide(&path, l).unwrap().feasible()).collect();
        for w in verdicts.windows(2) {
            prop_assert!(!w[0] || w[1]);
        }
    }

    #[test]
    fn solve_is_feasible_and_optimal(path in float_path()) {
        let r = solve(&path);
        prop_assert!(decide(&path, r.lambda_star).unwrap().feasible());
        let (best, _) = brute_solve(&path).unwrap();
        prop_assert!(rel_close(r.lambda_star, best, 1e-9));
        prop_assert!(r.lambda_star <= r.lambda_1);
        prop_assert_eq!(r.stats.decision_calls >= 1, true);
    }
}
