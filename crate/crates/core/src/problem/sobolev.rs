//! Best constant of the embedding D^{1,2}(ℝ^N) ⊂ L^{2*}(ℝ^N).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{critical_exponent, sphere_area};

/// S = N(N−2)π (Γ(N/2)/Γ(N))^{2/N}.
pub fn sobolev_constant(dimension: usize) -> Result<f64> {
    if dimension < 3 {
        return Err(Error::domain(format!("Sobolev constant needs N >= 3, got {dimension}")));
    }
    let n = dimension as f64;
    let ratio = libm::tgamma(n / 2.0) / libm::tgamma(n);
    Ok(n * (n - 2.0) * PI * ratio.powf(2.0 / n))
}

/// Rayleigh quotient ∫|∇u|² / |u|²_{2*} of the instanton (1+r²)^{−(N−2)/2},
/// by composite Simpson on [0, r_max] plus the leading-order analytic tails.
pub fn instanton_rayleigh_quotient(dimension: usize, nodes: usize, r_max: f64) -> Result<f64> {
    if dimension < 3 {
        return Err(Error::domain(format!("instanton needs N >= 3, got {dimension}")));
    }
    let n = dimension as f64;
    let crit = critical_exponent(dimension);
    let m = if nodes.is_multiple_of(2) { nodes } else { nodes + 1 };
    let h = r_max / m as f64;
    let grad = |r: f64| {
        let du = (n - 2.0) * r * (1.0 + r * r).powf(-n / 2.0);
        du * du * r.powf(n - 1.0)
    };
    let mass = |r: f64| (1.0 + r * r).powf(-n) * r.powf(n - 1.0);
    let simpson = |g: &dyn Fn(f64) -> f64| {
        let mut acc = g(0.0) + g(r_max);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * g(i as f64 * h);
        }
        acc * h / 3.0
    };
    // |∇u|² r^{N−1} ~ (N−2)² r^{1−N}, |u|^{2*} r^{N−1} ~ r^{−N−1}
    let grad_tail = (n - 2.0) * r_max.powf(2.0 - n);
    let mass_tail = r_max.powf(-n) / n;
    let omega = sphere_area(dimension);
    let num = omega * (simpson(&grad) + grad_tail);
    let den = omega * (simpson(&mass) + mass_tail);
    Ok(num / den.powf(2.0 / crit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let s3 = sobolev_constant(3).unwrap();
        assert!((s3 - 3.0 * (PI / 2.0).powf(4.0 / 3.0)).abs() < 1e-12);
        let s4 = sobolev_constant(4).unwrap();
        assert!((s4 - 8.0 * PI / 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn low_dimension_rejected() {
        assert!(sobolev_constant(2).is_err());
    }

    #[test]
    fn instanton_matches() {
        for n in 3..=6 {
            let s = sobolev_constant(n).unwrap();
            let q = instanton_rayleigh_quotient(n, 10_000, 100.0).unwrap();
            assert!((q / s - 1.0).abs() < 1e-3, "N={n}: {q} vs {s}");
        }
    }
}
