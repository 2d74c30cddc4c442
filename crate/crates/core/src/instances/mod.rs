//! Seeded instance generators, fixtures, and the JSON instance format.

mod generate;
mod io;
mod rng;

pub use generate::{generate, Family, GeneratorSpec};
pub use io::{parse_instance, read_instance, to_json, write_instance, InstanceFile};
pub use rng::SplitMix64;

use crate::metric::MetricPath;

/// The unit square visited as `(0,0), (1,0), (1,1), (0,1)`.
pub fn unit_square() -> MetricPath<f64> {
    MetricPath::from_points(&[
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
        vec![0.0, 1.0],
    ])
    .expect("valid fixture")
}

/// `n` points on a line, `spacing` apart.
pub fn collinear(n: usize, spacing: f64) -> MetricPath<f64> {
    generate(&GeneratorSpec {
        family: Family::Collinear { spacing },
        n,
        dim: 1,
        seed: 0,
    })
    .expect("valid fixture")
}
