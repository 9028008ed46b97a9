//! Nonlinearity families f(r, s) and their antiderivatives in s.

use serde::{Deserialize, Serialize};

use crate::numerics::quad::integrate;

/// Bounded positive radial modulation w(r) = 1 + amp·exp(−rate·r).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Modulation {
    pub amp: f64,
    pub rate: f64,
}

impl Modulation {
    pub fn eval(&self, r: f64) -> f64 {
        if self.amp == 0.0 {
            1.0
        } else {
            1.0 + self.amp * (-self.rate * r).exp()
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.amp == 0.0
    }
}

/// Nonlinearity families. Values are given for s > 0; the non-odd
/// extension vanishes for s ≤ 0 and the odd one reflects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Nonlinearity {
    /// w(r)·[c1·s^(gamma1−1) + c2·s^(gamma2−1)].
    PowerSum {
        c1: f64,
        gamma1: f64,
        #[serde(default)]
        c2: f64,
        #[serde(default = "two")]
        gamma2: f64,
        #[serde(default)]
        modulation: Modulation,
    },
    /// w(r)·c1·s^(power−1)·exp(−a/s^q).
    ExpFlat {
        c1: f64,
        power: f64,
        a: f64,
        q: f64,
        #[serde(default)]
        modulation: Modulation,
    },
}

fn two() -> f64 {
    2.0
}

#[inline]
fn pos(s: f64) -> f64 {
    if s > 0.0 {
        s
    } else {
        0.0
    }
}

impl Nonlinearity {
    /// Pure power c·(s⁺)^(gamma−1).
    pub fn power(c: f64, gamma: f64) -> Self {
        Nonlinearity::PowerSum {
            c1: c,
            gamma1: gamma,
            c2: 0.0,
            gamma2: 2.0,
            modulation: Modulation::default(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Nonlinearity::PowerSum { .. } => "power_sum",
            Nonlinearity::ExpFlat { .. } => "exp_flat",
        }
    }

    pub fn modulation(&self) -> Modulation {
        match self {
            Nonlinearity::PowerSum { modulation, .. } | Nonlinearity::ExpFlat { modulation, .. } => {
                *modulation
            }
        }
    }

    /// True when f does not depend on r.
    pub fn is_autonomous(&self) -> bool {
        self.modulation().is_trivial()
    }

    fn base(&self, s: f64) -> f64 {
        match *self {
            Nonlinearity::PowerSum {
                c1, gamma1, c2, gamma2, ..
            } => term(c1, gamma1 - 1.0, s) + term(c2, gamma2 - 1.0, s),
            Nonlinearity::ExpFlat { c1, power, a, q, .. } => {
                c1 * s.powf(power - 1.0) * (-a / s.powf(q)).exp()
            }
        }
    }

    fn base_derivative(&self, s: f64) -> f64 {
        match *self {
            Nonlinearity::PowerSum {
                c1, gamma1, c2, gamma2, ..
            } => {
                term(c1 * (gamma1 - 1.0), gamma1 - 2.0, s) + term(c2 * (gamma2 - 1.0), gamma2 - 2.0, s)
            }
            Nonlinearity::ExpFlat { power, a, q, .. } => {
                let f = self.base(s);
                if f == 0.0 {
                    0.0
                } else {
                    f * ((power - 1.0) / s + a * q / s.powf(q + 1.0))
                }
            }
        }
    }

    fn base_antiderivative(&self, s: f64) -> f64 {
        match *self {
            Nonlinearity::PowerSum {
                c1, gamma1, c2, gamma2, ..
            } => term(c1 / gamma1, gamma1, s) + term(c2 / gamma2, gamma2, s),
            Nonlinearity::ExpFlat { .. } => {
                let res = integrate(|t| if t > 0.0 { self.base(t) } else { 0.0 }, 0.0, s, 1e-300, 1e-13);
                res.value
            }
        }
    }

    fn base_ln_abs(&self, s: f64) -> f64 {
        match *self {
            Nonlinearity::ExpFlat { c1, power, a, q, .. } => {
                c1.abs().ln() + (power - 1.0) * s.ln() - a / s.powf(q)
            }
            Nonlinearity::PowerSum { .. } => self.base(s).abs().ln(),
        }
    }

    /// f(r, s).
    pub fn eval(&self, r: f64, s: f64, odd: bool) -> f64 {
        if s > 0.0 {
            self.modulation().eval(r) * self.base(s)
        } else if odd && s < 0.0 {
            -self.modulation().eval(r) * self.base(-s)
        } else {
            0.0
        }
    }

    /// ∂f/∂s(r, s).
    pub fn derivative(&self, r: f64, s: f64, odd: bool) -> f64 {
        if s > 0.0 {
            self.modulation().eval(r) * self.base_derivative(s)
        } else if odd && s < 0.0 {
            self.modulation().eval(r) * self.base_derivative(-s)
        } else {
            0.0
        }
    }

    /// F(r, s) = ∫₀ˢ f(r, t) dt.
    pub fn antiderivative(&self, r: f64, s: f64, odd: bool) -> f64 {
        let t = if odd { s.abs() } else { pos(s) };
        if t == 0.0 {
            return 0.0;
        }
        self.modulation().eval(r) * self.base_antiderivative(t)
    }

    /// ln|f(r, s)|, evaluated without underflow for the exponential family.
    pub fn ln_abs(&self, r: f64, s: f64, odd: bool) -> f64 {
        let t = if odd { s.abs() } else { pos(s) };
        if t == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.modulation().eval(r).ln() + self.base_ln_abs(t)
    }

    /// Whether F has a closed form (no quadrature needed).
    pub fn has_closed_antiderivative(&self) -> bool {
        matches!(self, Nonlinearity::PowerSum { .. })
    }
}

#[inline]
fn term(c: f64, e: f64, s: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else if e == 0.0 {
        c
    } else {
        c * s.powf(e)
    }
}
