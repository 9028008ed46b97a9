//! Dormand–Prince 5(4) integrator for small first-order systems.

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive integrator state for `y' = rhs(t, y)` with `y ∈ ℝ²`.
#[derive(Debug, Clone, Copy)]
pub struct DormandPrince {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub min_step: f64,
}

impl Default for DormandPrince {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            min_step: 1e-14,
        }
    }
}

impl DormandPrince {
    /// Advances from `t0` to exactly `t1`, adapting the step. `h` carries the
    /// suggested step between calls. Returns `None` if the step collapses or
    /// the state becomes non-finite.
    pub fn advance<F>(&self, rhs: &F, t0: f64, t1: f64, y: [f64; 2], h: &mut f64) -> Option<[f64; 2]>
    where
        F: Fn(f64, [f64; 2]) -> [f64; 2],
    {
        let mut t = t0;
        let mut y = y;
        let span = t1 - t0;
        if span <= 0.0 {
            return Some(y);
        }
        if !(*h > 0.0) {
            *h = span;
        }
        let mut guard = 0usize;
        while t < t1 {
            guard += 1;
            if guard > 1_000_000 {
                return None;
            }
            let step = h.min(t1 - t);
            let mut k = [[0.0; 2]; 7];
            for s in 0..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    ys[0] += step * A[s][j] * kj[0];
                    ys[1] += step * A[s][j] * kj[1];
                }
                k[s] = rhs(t + C[s] * step, ys);
            }
            let mut y5 = y;
            let mut err = 0.0f64;
            for c in 0..2 {
                let mut d5 = 0.0;
                let mut d4 = 0.0;
                for s in 0..7 {
                    d5 += B5[s] * k[s][c];
                    d4 += B4[s] * k[s][c];
                }
                y5[c] = y[c] + step * d5;
                let sc = self.abs_tol + self.rel_tol * y[c].abs().max(y5[c].abs());
                err = err.max((step * (d5 - d4)).abs() / sc);
            }
            if !y5[0].is_finite() || !y5[1].is_finite() {
                return None;
            }
            if err <= 1.0 {
                t = if step == t1 - t { t1 } else { t + step };
                y = y5;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                *h = step * grow;
            } else {
                *h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if *h < self.min_step {
                    return None;
                }
            }
        }
        Some(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let dp = DormandPrince::default();
        let rhs = |_t: f64, y: [f64; 2]| [y[1], -y[0]];
        let mut h = 0.1;
        let mut y = [1.0, 0.0];
        let mut t = 0.0;
        for _ in 0..10 {
            y = dp.advance(&rhs, t, t + 0.5, y, &mut h).unwrap();
            t += 0.5;
        }
        assert!((y[0] - 5f64.cos()).abs() < 1e-10);
        assert!((y[1] + 5f64.sin()).abs() < 1e-10);
    }
}
