//! Fixtures shared by the benchmarks in `benches/`.

use std::sync::Arc;

use starbody::bodies::{BodySpec, StarBody};
use starbody::sphere::SphereGrid;

pub fn grid(n: usize, m: usize) -> Arc<SphereGrid> {
    Arc::new(SphereGrid::build(n, m).expect("benchmark grid is valid"))
}

/// ρ = 1 + 0.05·G_4 about the last axis.
pub fn perturbed_ball(n: usize, m: usize) -> StarBody {
    let mut axis = vec![0.0; n];
    axis[n - 1] = 1.0;
    StarBody::from_spec(grid(n, m), &BodySpec::zonal(4, axis, 0.05)).expect("body is positive")
}
