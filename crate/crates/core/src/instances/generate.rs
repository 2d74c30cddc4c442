use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use super::rng::SplitMix64;
use crate::error::{invalid, Result};
use crate::metric::MetricPath;

/// Instance family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// Coordinates uniform in `[0, side)`.
    EuclideanUniform { side: f64 },
    /// `(k * spacing, 0, ..)` for `k = 0..n`.
    Collinear { spacing: f64 },
    /// Points on a circle in angular order. Each angle moves by up to
    /// `jitter / 2` of a sector, so `jitter < 1` keeps them in convex
    /// position. With `jitter = 0`, `n = 4` and the default radius this is
    /// the unit square.
    ConvexPolygon { radius: f64, jitter: f64 },
    /// Centres uniform in `[0, side)`; each point picks a random centre and
    /// an offset uniform in `[-spread, spread)` per coordinate.
    Clustered {
        clusters: usize,
        side: f64,
        spread: f64,
    },
    /// Weights uniform in `[0, max_weight)` (floored when `integral`),
    /// closed under shortest paths, then `offset` added to every
    /// off-diagonal entry. A positive offset makes every triangle strict,
    /// so no two mathematically equal quantities are computed along
    /// different floating-point routes.
    RandomMetric {
        max_weight: f64,
        integral: bool,
        offset: f64,
    },
}

impl Family {
    pub const KINDS: [&'static str; 5] = [
        "euclidean_uniform",
        "collinear",
        "convex_polygon",
        "clustered",
        "random_metric",
    ];

    /// Family with default parameters.
    pub fn by_name(kind: &str) -> Result<Self> {
        Ok(match kind {
            "euclidean_uniform" => Family::EuclideanUniform { side: 1.0 },
            "collinear" => Family::Collinear { spacing: 1.0 },
            "convex_polygon" => Family::ConvexPolygon {
                radius: FRAC_1_SQRT_2,
                jitter: 0.0,
            },
            "clustered" => Family::Clustered {
                clusters: 4,
                side: 1.0,
                spread: 0.05,
            },
            "random_metric" => Family::RandomMetric {
                max_weight: 1.0,
                integral: false,
                offset: 0.0,
            },
            _ => {
                return Err(invalid(format!(
                    "unknown kind `{kind}`, expected one of {}",
                    Family::KINDS.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::EuclideanUniform { .. } => "euclidean_uniform",
            Family::Collinear { .. } => "collinear",
            Family::ConvexPolygon { .. } => "convex_polygon",
            Family::Clustered { .. } => "clustered",
            Family::RandomMetric { .. } => "random_metric",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    /// Ignored by `random_metric`.
    pub dim: usize,
    pub seed: u64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<MetricPath<f64>> {
    let n = spec.n;
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let dim = spec.dim;
    let euclidean = !matches!(spec.family, Family::RandomMetric { .. });
    if euclidean && dim == 0 {
        return Err(invalid("dim must be at least 1"));
    }
    let mut rng = SplitMix64::new(spec.seed);
    match spec.family {
        Family::EuclideanUniform { side } => {
            positive("side", side)?;
            let coords = (0..n * dim).map(|_| side * rng.next_f64()).collect();
            MetricPath::from_flat_points(dim, coords)
        }
        Family::Collinear { spacing } => {
            positive("spacing", spacing)?;
            let mut coords = vec![0.0; n * dim];
            for k in 0..n {
                coords[k * dim] = k as f64 * spacing;
            }
            MetricPath::from_flat_points(dim, coords)
        }
        Family::ConvexPolygon { radius, jitter } => {
            positive("radius", radius)?;
            if !(0.0..1.0).contains(&jitter) {
                return Err(invalid(format!("jitter must lie in [0, 1), got {jitter}")));
            }
            if dim < 2 {
                return Err(invalid("convex_polygon needs dim >= 2"));
            }
            let centre = radius * FRAC_1_SQRT_2;
            let mut coords = vec![0.0; n * dim];
            for k in 0..n {
                let shift = if jitter > 0.0 {
                    jitter * (rng.next_f64() - 0.5)
                } else {
                    0.0
                };
                let theta = -0.75 * PI + 2.0 * PI * (k as f64 + shift) / n as f64;
                coords[k * dim] = centre + radius * theta.cos();
                coords[k * dim + 1] = centre + radius * theta.sin();
            }
            // Snap rounding noise so the regular square is exact.
            for c in &mut coords {
                let r = c.round();
                if (*c - r).abs() < 1e-12 {
                    *c = r;
                }
            }
            MetricPath::from_flat_points(dim, coords)
        }
        Family::Clustered {
            clusters,
            side,
            spread,
        } => {
            positive("side", side)?;
            if clusters == 0 {
                return Err(invalid("clusters must be at least 1"));
            }
            if !(spread.is_finite() && spread >= 0.0) {
                return Err(invalid(format!(
                    "spread must be finite and non-negative, got {spread}"
                )));
            }
            let centres: Vec<f64> = (0..clusters * dim).map(|_| side * rng.next_f64()).collect();
            let mut coords = Vec::with_capacity(n * dim);
            for _ in 0..n {
                let c = rng.below(clusters as u64) as usize;
                for d in 0..dim {
                    coords.push(centres[c * dim + d] + spread * (2.0 * rng.next_f64() - 1.0));
                }
            }
            MetricPath::from_flat_points(dim, coords)
        }
        Family::RandomMetric {
            max_weight,
            integral,
            offset,
        } => {
            positive("max_weight", max_weight)?;
            if !(offset.is_finite() && offset >= 0.0) {
                return Err(invalid(format!(
                    "offset must be finite and non-negative, got {offset}"
                )));
            }
            let mut m = vec![0.0; n * n];
            for r in 0..n {
                for c in r + 1..n {
                    let mut w = max_weight * rng.next_f64();
                    if integral {
                        w = w.floor();
                    }
                    m[r * n + c] = w;
                    m[c * n + r] = w;
                }
            }
            metric_closure(n, &mut m);
            if offset > 0.0 {
                for r in 0..n {
                    for c in 0..n {
                        if r != c {
                            m[r * n + c] += offset;
                        }
                    }
                }
            }
            MetricPath::from_flat_matrix(n, m)
        }
    }
}

/// Floyd-Warshall, repeated until no entry shrinks, so the stored values
/// satisfy the triangle inequality exactly in floating point.
fn metric_closure(n: usize, m: &mut [f64]) {
    loop {
        let mut changed = false;
        for k in 0..n {
            for r in 0..n {
                let rk = m[r * n + k];
                for c in 0..n {
                    let via = rk + m[k * n + c];
                    if via < m[r * n + c] {
                        m[r * n + c] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Keep the matrix exactly symmetric.
    for r in 0..n {
        for c in r + 1..n {
            let v = m[r * n + c].min(m[c * n + r]);
            m[r * n + c] = v;
            m[c * n + r] = v;
        }
    }
}
