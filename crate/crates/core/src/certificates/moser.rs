use serde::Serialize;

use super::BoundContext;
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;

/// Constants of the L∞ bound |u|∞ ≤ M for solutions of the penalized problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoserConstants {
    pub tau: f64,
    pub tau_prime: f64,
    pub sigma: f64,
    pub a3: f64,
    pub a4: f64,
    /// Coefficient of |u|^{p−2}.
    pub c1: f64,
    /// Coefficient of (1 + |u|)^{p−1}; zero when a₂ = 0.
    pub c2: f64,
    pub c3: f64,
    pub u_norm: f64,
    pub m: f64,
}

impl MoserConstants {
    /// 2* − p, which equals 2(σ − 1).
    pub fn gap(&self) -> f64 {
        2.0 * (self.sigma - 1.0)
    }
}

/// τ, τ′ and σ for exponent p in dimension N.
pub fn moser_exponents(dimension: usize, p: f64) -> Result<(f64, f64, f64)> {
    let crit = crate::numerics::critical_exponent(dimension);
    if !(p > 2.0 && p < crit) {
        return Err(Error::domain(format!("need 2 < p < {crit}, got p = {p}")));
    }
    let tau = crit / (p - 2.0);
    let tau_prime = tau / (tau - 1.0);
    let sigma = crit / (2.0 * tau_prime);
    Ok((tau, tau_prime, sigma))
}

pub fn moser_constants(spec: &ProblemSpec, ctx: &BoundContext, u_norm_2star: f64) -> Result<MoserConstants> {
    if !(u_norm_2star >= 0.0 && u_norm_2star.is_finite()) {
        return Err(Error::domain(format!("|u|_2* must be finite and >= 0, got {u_norm_2star}")));
    }
    let p = spec.p;
    let crit = spec.critical_exponent();
    let (tau, tau_prime, sigma) = moser_exponents(spec.dimension, p)?;
    let (a1, a2, alpha, omega) = (spec.a1, spec.a2, ctx.alpha, ctx.omega_measure);
    let u = u_norm_2star;

    let a3_free = alpha * omega.powf((p - 2.0) / crit);
    let a3 = 2.0 * a1 * u.powf(p - 2.0) + a3_free;
    let (a4_coeff, a4_free) = if a2 > 0.0 {
        (
            2f64.powf(p - 1.0) * a2.powf(-p) * (a1 * a2.powf(p - 2.0) + 1.0) * (a2 + 1.0),
            alpha * a2 * (1.0 + omega),
        )
    } else {
        (0.0, 0.0)
    };
    let a4 = a4_coeff * (1.0 + u).powf(p - 1.0) + a4_free;

    let s1 = sigma.powf(2.0 * sigma / (sigma - 1.0));
    let lead = 2.0 * s1 / ctx.sobolev;
    let tail = if a2 > 0.0 { a2.powf(2.0 * (sigma - 1.0)) } else { 0.0 };
    let inner = lead * (a3 + a4) + 2.0 * s1 + tail;
    let m = inner.powf(1.0 / (crit - p)) * (1.0 + u);
    Ok(MoserConstants {
        tau,
        tau_prime,
        sigma,
        a3,
        a4,
        c1: lead * 2.0 * a1,
        c2: lead * a4_coeff,
        c3: lead * (a3_free + a4_free) + 2.0 * s1 + tail,
        u_norm: u,
        m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::fixtures::p1;
    use crate::problem::sobolev_constant;
    use proptest::prelude::*;

    fn ctx() -> BoundContext {
        BoundContext {
            alpha: 0.0,
            omega_measure: 0.0,
            sobolev: sobolev_constant(3).unwrap(),
        }
    }

    #[test]
    fn exponents_for_cubic() {
        let (tau, tp, sigma) = moser_exponents(3, 3.0).unwrap();
        assert!((tau - 6.0).abs() < 1e-14);
        assert!((tp - 1.2).abs() < 1e-14);
        assert!((sigma - 2.5).abs() < 1e-14);
    }

    #[test]
    fn bound_for_unit_norm() {
        let c = moser_constants(&p1(1.0), &ctx(), 1.0).unwrap();
        assert_eq!(c.a3, 2.0);
        assert_eq!(c.a4, 0.0);
        assert_eq!(c.c2, 0.0);
        let s1 = 2.5f64.powf(10.0 / 3.0);
        let want = (2.0 * s1 * 2.0 / ctx().sobolev + 2.0 * s1).cbrt() * 2.0;
        assert!((c.m - want).abs() < 1e-12 * want);
        assert!((c.m - 7.737204010665506).abs() < 1e-12);
        assert!((c.m - 7.73).abs() < 1e-2);
    }

    #[test]
    fn grouped_form_reproduces_bound() {
        let mut spec = p1(1.0);
        spec.a2 = 0.7;
        let ctx = BoundContext {
            alpha: 0.3,
            omega_measure: 2.0,
            ..ctx()
        };
        let u = 1.9;
        let c = moser_constants(&spec, &ctx, u).unwrap();
        let grouped = (c.c1 * u.powf(spec.p - 2.0) + c.c2 * (1.0 + u).powf(spec.p - 1.0) + c.c3)
            .powf(1.0 / (6.0 - spec.p))
            * (1.0 + u);
        assert!((grouped - c.m).abs() < 1e-12 * c.m);
    }

    #[test]
    fn rejects_supercritical() {
        let mut spec = p1(1.0);
        spec.p = 6.0;
        assert!(matches!(moser_constants(&spec, &ctx(), 1.0), Err(Error::Domain(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn gap_identity(n in 3usize..8, t in 0.001f64..0.999) {
            let crit = crate::numerics::critical_exponent(n);
            let p = 2.0 + t * (crit - 2.0);
            let (_, _, sigma) = moser_exponents(n, p).unwrap();
            prop_assert!(sigma > 1.0);
            prop_assert!((2.0 * (sigma - 1.0) - (crit - p)).abs() <= 1e-12 * crit);
        }

        #[test]
        fn monotone_in_inputs(u in 0.0f64..50.0, du in 0.0f64..5.0, a1 in 0.1f64..5.0, a2 in 0.0f64..3.0, alpha in 0.0f64..2.0) {
            let mut spec = p1(1.0);
            spec.a1 = a1;
            spec.a2 = a2;
            let base = BoundContext { alpha, omega_measure: 1.5, ..ctx() };
            let m0 = moser_constants(&spec, &base, u).unwrap().m;
            prop_assert!(m0 >= 0.0);
            let slack = 1e-12 * m0;
            prop_assert!(moser_constants(&spec, &base, u + du).unwrap().m >= m0 - slack);
            let mut s = spec.clone();
            s.a1 = a1 + du;
            prop_assert!(moser_constants(&s, &base, u).unwrap().m >= m0 - slack);
            let more = BoundContext { alpha: alpha + du, ..base };
            prop_assert!(moser_constants(&spec, &more, u).unwrap().m >= m0 - slack);
        }
    }
}
