#![allow(dead_code)]

use doap::instances::{generate, Family, GeneratorSpec, SplitMix64};
use doap::{CandidateEdge, Path64, Scalar};

pub struct Case {
    pub label: String,
    pub path: Path64,
}

/// Non-integral parameters for each family, so the corpus has no
/// engineered near-ties. Regular polygons are jittered and random metrics
/// offset (strict triangles) for the same reason.
pub fn family(kind: usize) -> Family {
    match kind % 5 {
        0 => Family::EuclideanUniform { side: 10.0 },
        1 => Family::Collinear { spacing: 1.5 },
        2 => Family::ConvexPolygon {
            radius: 3.0,
            jitter: 0.6,
        },
        3 => Family::Clustered {
            clusters: 3,
            side: 10.0,
            spread: 0.8,
        },
        _ => Family::RandomMetric {
            max_weight: 10.0,
            integral: false,
            offset: 1.5,
        },
    }
}

/// `count` instances cycling through the families, with `n` drawn from
/// `n_min..=n_max` and `dim` from 2..=3.
pub fn mixed_corpus(count: usize, n_min: usize, n_max: usize, seed: u64) -> Vec<Case> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|t| {
            let n = n_min + rng.below((n_max - n_min + 1) as u64) as usize;
            let dim = 2 + rng.below(2) as usize;
            let spec = GeneratorSpec {
                family: family(t),
                n,
                dim,
                seed: rng.next_u64(),
            };
            let path = generate(&spec).expect("valid generator spec");
            Case {
                label: format!("{} n={n} seed={}", spec.family.name(), spec.seed),
                path,
            }
        })
        .collect()
}

/// Integer-weighted metrics with many exact ties, for exact scalar types.
pub fn integral_corpus(count: usize, n_max: usize, seed: u64) -> Vec<Case> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let n = 1 + rng.below(n_max as u64) as usize;
            let max_weight = (2 + rng.below(12)) as f64;
            let spec = GeneratorSpec {
                family: Family::RandomMetric {
                    max_weight,
                    integral: true,
                    offset: 0.0,
                },
                n,
                dim: 0,
                seed: rng.next_u64(),
            };
            let path = generate(&spec).expect("valid generator spec");
            Case {
                label: format!("integral n={n} w<{max_weight} seed={}", spec.seed),
                path,
            }
        })
        .collect()
}

pub fn edges(n: usize) -> impl Iterator<Item = CandidateEdge> {
    (1..=n).flat_map(move |i| (i..=n).map(move |j| CandidateEdge { i, j }))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

pub fn to_i64<T: Scalar>(v: T) -> i64 {
    let f = v.to_f64();
    assert_eq!(f, f.round());
    f as i64
}
