use serde::{Deserialize, Serialize};

use super::nonlinearity::Nonlinearity;
use super::potential::Potential;
use crate::error::{Error, Result};
use crate::numerics::critical_exponent;

/// Parameters of the fast-decay regime: f flat at the origin like exp(−a/|s|^q),
/// V decaying no faster than exp(−μ r^{(N−2)q}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentialParams {
    pub a: f64,
    pub mu: f64,
}

/// Full description of −Δu + V(r)u = f(r, u) on ℝ^N with radial data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSpec {
    pub dimension: usize,
    pub potential: Potential,
    pub nonlinearity: Nonlinearity,
    pub q: f64,
    pub p: f64,
    pub a1: f64,
    pub a2: f64,
    pub theta: f64,
    pub s0: f64,
    /// Penalization radius R.
    pub radius: f64,
    /// Decay parameter Λ.
    pub lambda: f64,
    /// Bump radius r₀ (bump centred at the origin).
    pub r0: f64,
    /// Bump ceiling V∞; derived from V on B_{r₀} when absent.
    pub v_infty: Option<f64>,
    pub odd: bool,
    pub exponential: Option<ExponentialParams>,
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(key, format!("must be finite and > 0, got {v}")))
    }
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.dimension;
        if n < 3 {
            return Err(Error::config("problem.dimension", format!("must be >= 3, got {n}")));
        }
        let crit = critical_exponent(n);
        if !(self.p > 2.0 && self.p < crit) {
            return Err(Error::config(
                "problem.p",
                format!("must satisfy 2 < p < 2N/(N-2) = {crit}, got {}", self.p),
            ));
        }
        if self.exponential.is_some() {
            positive("problem.q", self.q)?;
        } else if !(self.q > 2.0 && self.q.is_finite()) {
            return Err(Error::config("problem.q", format!("must be > 2, got {}", self.q)));
        }
        if !(self.theta > 2.0 && self.theta.is_finite()) {
            return Err(Error::config("problem.theta", format!("must be > 2, got {}", self.theta)));
        }
        positive("problem.a1", self.a1)?;
        if !(self.a2 >= 0.0 && self.a2.is_finite()) {
            return Err(Error::config("problem.a2", format!("must be >= 0, got {}", self.a2)));
        }
        if !(self.s0 >= 0.0 && self.s0.is_finite()) {
            return Err(Error::config("problem.s0", format!("must be >= 0, got {}", self.s0)));
        }
        positive("problem.radius_R", self.radius)?;
        positive("problem.lambda", self.lambda)?;
        positive("problem.r0", self.r0)?;
        if self.radius <= self.r0 {
            return Err(Error::config(
                "problem.radius_R",
                format!("must exceed r0 = {}, got {}", self.r0, self.radius),
            ));
        }
        if let Some(v) = self.v_infty {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::config("problem.v_infty", format!("must be >= 0, got {v}")));
            }
        }
        if let Some(e) = self.exponential {
            positive("exponential.a", e.a)?;
            positive("exponential.mu", e.mu)?;
        }
        let m = self.nonlinearity.modulation();
        if !(m.amp >= 0.0 && m.amp.is_finite() && m.rate >= 0.0 && m.rate.is_finite()) {
            return Err(Error::config(
                "problem.nonlinearity",
                "modulation needs amp >= 0 and rate >= 0",
            ));
        }
        if let Nonlinearity::PowerSum { gamma1, gamma2, .. } = self.nonlinearity {
            if gamma1 < 1.0 || gamma2 < 1.0 {
                return Err(Error::config("problem.nonlinearity", "exponents gamma must be >= 1"));
            }
        }
        Ok(())
    }

    pub fn critical_exponent(&self) -> f64 {
        critical_exponent(self.dimension)
    }

    /// Decay exponent (N−2)(q−2) of the weight in the potential hypotheses.
    pub fn decay_exponent(&self) -> f64 {
        (self.dimension as f64 - 2.0) * (self.q - 2.0)
    }

    pub fn v(&self, r: f64) -> f64 {
        self.potential.eval(r)
    }

    pub fn f(&self, r: f64, s: f64) -> f64 {
        self.nonlinearity.eval(r, s, self.odd)
    }

    pub fn big_f(&self, r: f64, s: f64) -> f64 {
        self.nonlinearity.antiderivative(r, s, self.odd)
    }

    pub fn f_s(&self, r: f64, s: f64) -> f64 {
        self.nonlinearity.derivative(r, s, self.odd)
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        ProblemSpec {
            radius,
            ..self.clone()
        }
    }
}

/// Reference problems.
pub mod fixtures {
    use super::*;

    /// Prototype: N=3, f=(s⁺)², V=Λ/(1+r), q=p=θ=3, S₀=0, R=1.
    pub fn p1(lambda: f64) -> ProblemSpec {
        ProblemSpec {
            dimension: 3,
            potential: Potential::PowerDecay {
                amplitude: lambda,
                exponent: 1.0,
            },
            nonlinearity: Nonlinearity::power(1.0, 3.0),
            q: 3.0,
            p: 3.0,
            a1: 1.0,
            a2: 0.0,
            theta: 3.0,
            s0: 0.0,
            radius: 1.0,
            lambda,
            r0: 0.9,
            v_infty: None,
            odd: false,
            exponential: None,
        }
    }

    /// V ≡ 1 with f = (s⁺)².
    pub fn unit(radius: f64) -> ProblemSpec {
        ProblemSpec {
            potential: Potential::Constant { value: 1.0 },
            radius,
            ..p1(1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::p1;
    use crate::error::Error;

    #[test]
    fn p1_is_valid() {
        p1(10.0).validate().unwrap();
    }

    #[test]
    fn supercritical_p_names_key() {
        let mut s = p1(1.0);
        s.p = 7.0;
        match s.validate() {
            Err(Error::Config { key, .. }) => assert_eq!(key, "problem.p"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn radius_must_exceed_bump() {
        let mut s = p1(1.0);
        s.r0 = 1.5;
        assert!(s.validate().is_err());
    }

    #[test]
    fn decay_exponent() {
        assert_eq!(p1(1.0).decay_exponent(), 1.0);
    }
}
