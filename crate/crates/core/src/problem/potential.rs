//! Radial potential families and their declared tail behaviour.

use serde::{Deserialize, Serialize};

use crate::numerics::roots::bisect;

/// Radial potential V(r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Potential {
    /// V ≡ value.
    Constant { value: f64 },
    /// V = amplitude·(1 + r)^(−exponent).
    PowerDecay { amplitude: f64, exponent: f64 },
    /// V = amplitude·exp(−rate·r^power).
    ExpDecay { amplitude: f64, rate: f64, power: f64 },
    /// V = c2·r² + c0.
    Quadratic { c2: f64, c0: f64 },
    /// Power decay with a compactly supported negative well:
    /// V = amplitude·(1 + r)^(−exponent) − depth·(1 − (r/width)²)⁺.
    Well {
        amplitude: f64,
        exponent: f64,
        depth: f64,
        width: f64,
    },
}

/// Weight multiplying V in the decay hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailWeight {
    /// r^gamma.
    Power { gamma: f64 },
    /// exp(mu·r^kappa).
    Exp { mu: f64, kappa: f64 },
}

impl TailWeight {
    pub fn ln_weight(&self, r: f64) -> f64 {
        match *self {
            TailWeight::Power { gamma } => gamma * r.ln(),
            TailWeight::Exp { mu, kappa } => mu * r.powf(kappa),
        }
    }

    /// Weighted value W(r)·V, computed through logarithms when V > 0 so
    /// that large exponential weights saturate to +∞ instead of NaN.
    pub fn apply(&self, r: f64, v: f64) -> f64 {
        if v > 0.0 {
            (self.ln_weight(r) + v.ln()).exp()
        } else if v == 0.0 {
            0.0
        } else {
            -(self.ln_weight(r) + (-v).ln()).exp()
        }
    }

    fn ln_weight_derivative(&self, r: f64) -> f64 {
        match *self {
            TailWeight::Power { gamma } => gamma / r,
            TailWeight::Exp { mu, kappa } => mu * kappa * r.powf(kappa - 1.0),
        }
    }
}

impl Potential {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Potential::Constant { value } => value,
            Potential::PowerDecay { amplitude, exponent } => amplitude * (1.0 + r).powf(-exponent),
            Potential::ExpDecay { amplitude, rate, power } => amplitude * (-rate * r.powf(power)).exp(),
            Potential::Quadratic { c2, c0 } => c2 * r * r + c0,
            Potential::Well {
                amplitude,
                exponent,
                depth,
                width,
            } => {
                let x = r / width;
                amplitude * (1.0 + r).powf(-exponent) - depth * (1.0 - x * x).max(0.0)
            }
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Potential::Constant { .. } => "constant",
            Potential::PowerDecay { .. } => "power_decay",
            Potential::ExpDecay { .. } => "exp_decay",
            Potential::Quadratic { .. } => "quadratic",
            Potential::Well { .. } => "well",
        }
    }

    /// Radius beyond which the family is known to be strictly positive, if any.
    pub fn positive_beyond(&self) -> Option<f64> {
        match *self {
            Potential::Constant { value } => (value > 0.0).then_some(0.0),
            Potential::PowerDecay { amplitude, .. } | Potential::ExpDecay { amplitude, .. } => {
                (amplitude > 0.0).then_some(0.0)
            }
            Potential::Quadratic { c2, c0 } => {
                if c2 > 0.0 {
                    Some((-c0 / c2).max(0.0).sqrt())
                } else if c2 == 0.0 && c0 > 0.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
            Potential::Well { amplitude, width, .. } => (amplitude > 0.0).then_some(width),
        }
    }

    /// Exact infimum of W(r)·V(r) over `[r_from, ∞)` when the family declares
    /// enough monotonicity to certify it. `None` means sampling is the only
    /// available evidence.
    pub fn tail_infimum(&self, weight: TailWeight, r_from: f64) -> Option<f64> {
        if !(r_from > 0.0) {
            return None;
        }
        let at = |r: f64| weight.apply(r, self.eval(r));
        match *self {
            Potential::Constant { value } => {
                if value >= 0.0 {
                    Some(at(r_from))
                } else {
                    Some(f64::NEG_INFINITY)
                }
            }
            Potential::PowerDecay { amplitude, exponent } => {
                power_decay_tail(amplitude, exponent, weight, r_from, &at)
            }
            Potential::Well {
                amplitude,
                exponent,
                width,
                ..
            } => {
                if r_from >= width {
                    power_decay_tail(amplitude, exponent, weight, r_from, &at)
                } else {
                    None
                }
            }
            Potential::ExpDecay { amplitude, rate, power } => {
                if amplitude <= 0.0 {
                    return if amplitude == 0.0 { Some(0.0) } else { None };
                }
                if rate <= 0.0 {
                    return Potential::Constant { value: amplitude }
                        .tail_infimum(weight, r_from)
                        .map(|v| v * (-rate * r_from.powf(power)).exp().min(1.0));
                }
                match weight {
                    TailWeight::Power { .. } => Some(0.0),
                    TailWeight::Exp { mu, kappa } => {
                        if kappa == power {
                            if mu >= rate {
                                Some(at(r_from))
                            } else {
                                Some(0.0)
                            }
                        } else if kappa > power {
                            // d/dr log = r^{power−1}(mu·kappa·r^{kappa−power} − rate·power), one sign change
                            let turn = (rate * power / (mu * kappa)).powf(1.0 / (kappa - power));
                            if r_from >= turn {
                                Some(at(r_from))
                            } else {
                                Some(at(turn))
                            }
                        } else {
                            Some(0.0)
                        }
                    }
                }
            }
            Potential::Quadratic { c2, c0 } => {
                if c2 > 0.0 {
                    (self.eval(r_from) >= 0.0).then(|| at(r_from))
                } else if c2 == 0.0 {
                    Potential::Constant { value: c0 }.tail_infimum(weight, r_from)
                } else {
                    Some(f64::NEG_INFINITY)
                }
            }
        }
    }
}

fn power_decay_tail<F: Fn(f64) -> f64>(
    amplitude: f64,
    exponent: f64,
    weight: TailWeight,
    r_from: f64,
    at: &F,
) -> Option<f64> {
    if amplitude < 0.0 {
        return Some(f64::NEG_INFINITY);
    }
    if amplitude == 0.0 {
        return Some(0.0);
    }
    // d/dr log(W·V) = (log W)' − exponent/(1 + r)
    let slope = |r: f64| weight.ln_weight_derivative(r) - exponent / (1.0 + r);
    match weight {
        TailWeight::Power { gamma } => {
            if exponent <= gamma {
                Some(at(r_from))
            } else {
                // rises to a single maximum, then decays to zero
                Some(0.0)
            }
        }
        TailWeight::Exp { kappa, .. } => {
            if kappa < 1.0 {
                return None;
            }
            // slope is increasing for kappa ≥ 1: one sign change at most
            if slope(r_from) >= 0.0 {
                return Some(at(r_from));
            }
            let mut hi = 2.0 * r_from.max(1.0);
            while slope(hi) < 0.0 {
                hi *= 2.0;
                if hi > 1e12 {
                    return None;
                }
            }
            let turn = bisect(slope, r_from, hi, 1e-14)?;
            Some(at(turn))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_tail_increasing() {
        let v = Potential::PowerDecay {
            amplitude: 10.0,
            exponent: 1.0,
        };
        let inf = v.tail_infimum(TailWeight::Power { gamma: 1.0 }, 1.0).unwrap();
        assert!((inf - 5.0).abs() < 1e-14);
    }

    #[test]
    fn faster_decay_has_zero_infimum() {
        let v = Potential::PowerDecay {
            amplitude: 1.0,
            exponent: 3.0,
        };
        assert_eq!(v.tail_infimum(TailWeight::Power { gamma: 1.0 }, 2.0), Some(0.0));
    }

    #[test]
    fn exp_weight_on_power_decay_finds_turning_point() {
        let v = Potential::PowerDecay {
            amplitude: 1.0,
            exponent: 4.0,
        };
        let w = TailWeight::Exp { mu: 0.1, kappa: 1.0 };
        let inf = v.tail_infimum(w, 1.0).unwrap();
        // minimum of exp(0.1 r)(1+r)^{-4} sits at r = 39
        let expected = (3.9f64).exp() * 40f64.powi(-4);
        assert!((inf - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn quadratic_well() {
        let v = Potential::Quadratic { c2: 1.0, c0: -1.0 };
        assert_eq!(v.eval(0.0), -1.0);
        assert_eq!(v.positive_beyond(), Some(1.0));
        assert!(Potential::Constant { value: -1.0 }.positive_beyond().is_none());
    }
}
