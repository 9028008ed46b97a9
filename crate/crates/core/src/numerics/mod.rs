//! Small numerical kernels shared by the solver and the certificates.

pub mod ode;
pub mod quad;
pub mod roots;
pub mod tridiag;

use std::f64::consts::PI;

/// Surface area ω_{N−1} = 2π^{N/2}/Γ(N/2) of the unit sphere in ℝ^N.
pub fn sphere_area(dimension: usize) -> f64 {
    let half = dimension as f64 / 2.0;
    2.0 * PI.powf(half) / libm::tgamma(half)
}

/// Volume of the ball of the given radius in ℝ^N.
pub fn ball_volume(dimension: usize, radius: f64) -> f64 {
    sphere_area(dimension) * radius.powi(dimension as i32) / dimension as f64
}

/// Critical Sobolev exponent 2N/(N−2).
pub fn critical_exponent(dimension: usize) -> f64 {
    let n = dimension as f64;
    2.0 * n / (n - 2.0)
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `n` equispaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Tolerance used by hypothesis comparisons: absolute 1e-12 plus relative 1e-8.
pub fn comparison_slack(scale: f64) -> f64 {
    1e-12 + 1e-8 * scale.abs()
}
