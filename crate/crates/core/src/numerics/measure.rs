use std::f64::consts::PI;

use super::gamma::gamma_fn;

/// κ_n, the volume of the unit ball in R^n.
pub fn ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    PI.powf(half) / gamma_fn(half + 1.0).expect("argument is positive")
}

/// σ_{n-1} = |S^{n-1}| = n κ_n.
pub fn sphere_measure(n: usize) -> f64 {
    n as f64 * ball_volume(n)
}
