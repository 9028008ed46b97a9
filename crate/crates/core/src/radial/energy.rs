use std::sync::Arc;

use super::function::{quadratic_form, DiscreteRadialFunction};
use super::grid::RadialGrid;
use crate::error::{Error, Result};
use crate::numerics::tridiag::{solve_general, SpdTridiagonal};
use crate::penalization::{BranchMap, PenalizedNonlinearity};
use crate::problem::ProblemSpec;

/// Discrete penalized energy J(u) = ½Σa(Δu)² + ½ΣV w u² − ΣG w with
/// precomputed coefficients and the factored preconditioner.
pub struct Energy<'a> {
    grid: &'a RadialGrid,
    pen: &'a PenalizedNonlinearity,
    potential: Vec<f64>,
    maps: Vec<Option<Arc<BranchMap>>>,
    precond: SpdTridiagonal,
}

/// Gradient of J: Riesz direction d = B⁻¹ρ and dual residual (dᵀρ)^{1/2}.
#[derive(Debug, Clone)]
pub struct Gradient {
    pub direction: DiscreteRadialFunction,
    pub residual: f64,
    /// Weak-form residual ρ on the unknowns (length M + 1, last entry 0).
    pub weak: Vec<f64>,
}

impl<'a> Energy<'a> {
    pub fn new(grid: &'a RadialGrid, pen: &'a PenalizedNonlinearity) -> Result<Self> {
        let spec = pen.spec();
        if spec.dimension != grid.dimension {
            return Err(Error::Precondition(format!(
                "grid dimension {} differs from problem dimension {}",
                grid.dimension, spec.dimension
            )));
        }
        let potential: Vec<f64> = grid.nodes().iter().map(|&r| spec.v(r)).collect();
        let maps = grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, &r)| pen.branch_map(i, r))
            .collect();
        let m = grid.intervals;
        let a = grid.stiffness();
        let w = grid.weights();
        let diag: Vec<f64> = (0..m)
            .map(|i| {
                let left = if i > 0 { a[i - 1] } else { 0.0 };
                left + a[i] + (potential[i].max(0.0) + 1.0) * w[i]
            })
            .collect();
        let off: Vec<f64> = (0..m - 1).map(|i| -a[i]).collect();
        let precond = SpdTridiagonal::factor(&diag, &off)
            .map_err(|e| Error::Numerical(format!("preconditioner is not SPD: {e}")))?;
        Ok(Energy {
            grid,
            pen,
            potential,
            maps,
            precond,
        })
    }

    pub fn grid(&self) -> &RadialGrid {
        self.grid
    }

    pub fn pen(&self) -> &PenalizedNonlinearity {
        self.pen
    }

    pub fn spec(&self) -> &ProblemSpec {
        self.pen.spec()
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// ∫|∇u|² + V u² (may be negative when V is).
    pub fn quadratic(&self, u: &DiscreteRadialFunction) -> f64 {
        quadratic_form(self.grid, |i| self.potential[i], u.values())
    }

    pub fn g_at(&self, i: usize, s: f64) -> f64 {
        self.pen.g(self.grid.nodes()[i], s)
    }

    pub fn big_g_at(&self, i: usize, s: f64) -> f64 {
        self.pen.big_g_with(self.maps[i].as_deref(), self.grid.nodes()[i], s)
    }

    /// Σ G(r_i, u_i) w_i.
    pub fn nonlinear(&self, u: &DiscreteRadialFunction) -> f64 {
        u.values()
            .iter()
            .zip(self.grid.weights())
            .enumerate()
            .map(|(i, (&s, &w))| if s == 0.0 { 0.0 } else { self.big_g_at(i, s) * w })
            .sum()
    }

    pub fn j(&self, u: &DiscreteRadialFunction) -> f64 {
        0.5 * self.quadratic(u) - self.nonlinear(u)
    }

    pub fn norm(&self, u: &DiscreteRadialFunction) -> Result<f64> {
        let sq = self.quadratic(u);
        if sq < 0.0 {
            return Err(Error::Hypothesis {
                hypothesis: "V1",
                detail: format!("quadratic form is negative ({sq:e}) at this resolution"),
            });
        }
        Ok(sq.sqrt())
    }

    /// ρ_i = (A u)_i − g(r_i, u_i) w_i for i < M, ρ_M = 0.
    pub fn weak_residual(&self, u: &DiscreteRadialFunction) -> Vec<f64> {
        let a = self.grid.stiffness();
        let w = self.grid.weights();
        let x = u.values();
        let m = self.grid.intervals;
        let mut rho = vec![0.0; m + 1];
        for i in 0..m {
            let mut au = a[i] * (x[i] - x[i + 1]) + self.potential[i] * w[i] * x[i];
            if i > 0 {
                au += a[i - 1] * (x[i] - x[i - 1]);
            }
            rho[i] = au - self.g_at(i, x[i]) * w[i];
        }
        rho
    }

    /// Solve B y = rhs on the unknowns; rhs and result have length M + 1 with last entry 0.
    pub fn riesz(&self, rhs: &[f64]) -> Vec<f64> {
        let m = self.grid.intervals;
        let mut y = self.precond.solve(&rhs[..m]);
        y.push(0.0);
        y
    }

    pub fn gradient(&self, u: &DiscreteRadialFunction) -> Gradient {
        let weak = self.weak_residual(u);
        let d = self.riesz(&weak);
        let dual: f64 = d.iter().zip(&weak).map(|(a, b)| a * b).sum();
        Gradient {
            direction: DiscreteRadialFunction::from_values(self.grid, d).expect("grid-sized vector"),
            residual: dual.max(0.0).sqrt(),
            weak,
        }
    }

    /// Bilinear form of the preconditioner, ∫∇x·∇y + (V⁺+1)xy.
    pub fn inner_b(&self, x: &DiscreteRadialFunction, y: &DiscreteRadialFunction) -> f64 {
        let a = self.grid.stiffness();
        let w = self.grid.weights();
        let (x, y) = (x.values(), y.values());
        let grad: f64 = (0..a.len()).map(|i| a[i] * (x[i + 1] - x[i]) * (y[i + 1] - y[i])).sum();
        let mass: f64 = (0..x.len())
            .map(|i| (self.potential[i].max(0.0) + 1.0) * w[i] * x[i] * y[i])
            .sum();
        grad + mass
    }

    pub fn norm_b(&self, x: &DiscreteRadialFunction) -> f64 {
        self.inner_b(x, x).max(0.0).sqrt()
    }

    /// Newton correction δ solving J''(u) δ = −ρ (tridiagonal, pivoted).
    pub fn newton_step(&self, u: &DiscreteRadialFunction, weak: &[f64]) -> Result<DiscreteRadialFunction> {
        let a = self.grid.stiffness();
        let w = self.grid.weights();
        let x = u.values();
        let m = self.grid.intervals;
        let r = self.grid.nodes();
        let diag: Vec<f64> = (0..m)
            .map(|i| {
                let left = if i > 0 { a[i - 1] } else { 0.0 };
                left + a[i] + (self.potential[i] - self.pen.g_s(r[i], x[i])) * w[i]
            })
            .collect();
        let off: Vec<f64> = (0..m - 1).map(|i| -a[i]).collect();
        let rhs: Vec<f64> = weak[..m].iter().map(|v| -v).collect();
        let mut delta = solve_general(&off, &diag, &off, &rhs)?;
        delta.push(0.0);
        DiscreteRadialFunction::from_values(self.grid, delta)
    }
}

/// J(u) = ½‖u‖² − ΣG(r_i,u_i)w_i.
pub fn energy_j(grid: &RadialGrid, pen: &PenalizedNonlinearity, u: &DiscreteRadialFunction) -> Result<f64> {
    let e = Energy::new(grid, pen)?;
    let n = e.norm(u)?;
    Ok(0.5 * n * n - e.nonlinear(u))
}

/// Riesz representative of J′(u) and its dual norm.
pub fn grad_j(
    grid: &RadialGrid,
    pen: &PenalizedNonlinearity,
    u: &DiscreteRadialFunction,
) -> Result<(DiscreteRadialFunction, f64)> {
    let e = Energy::new(grid, pen)?;
    let g = e.gradient(u);
    Ok((g.direction, g.residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalization::make_penalized;
    use crate::problem::fixtures::{p1, unit};

    #[test]
    fn zero_state() {
        let grid = RadialGrid::new(3, 10.0, 200).unwrap();
        let pen = make_penalized(&p1(5.0)).unwrap();
        let zero = DiscreteRadialFunction::zeros(&grid);
        assert_eq!(energy_j(&grid, &pen, &zero).unwrap(), 0.0);
        let (d, res) = grad_j(&grid, &pen, &zero).unwrap();
        assert!(d.is_zero());
        assert_eq!(res, 0.0);
    }

    #[test]
    fn nonpositive_profiles_are_quadratic() {
        let grid = RadialGrid::new(3, 10.0, 200).unwrap();
        let spec = p1(5.0);
        let pen = make_penalized(&spec).unwrap();
        let u = DiscreteRadialFunction::from_fn(&grid, |r| -(-r * r).exp());
        let n = crate::radial::norm_e(&grid, &spec, &u).unwrap();
        let j = energy_j(&grid, &pen, &u).unwrap();
        assert!((j - 0.5 * n * n).abs() <= 1e-12 * j);
    }

    #[test]
    fn gradient_is_exact_derivative() {
        let grid = RadialGrid::new(3, 4.0, 200).unwrap();
        let pen = make_penalized(&unit(1.0)).unwrap();
        let e = Energy::new(&grid, &pen).unwrap();
        let u = DiscreteRadialFunction::from_fn(&grid, |r| 0.8 * (-r * r).exp());
        let v = DiscreteRadialFunction::from_fn(&grid, |r| (1.0 + r).recip());
        let weak = e.weak_residual(&u);
        let pairing: f64 = weak.iter().zip(v.values()).map(|(a, b)| a * b).sum();
        let h = 1e-4;
        let fd = (e.j(&u.axpy(h, &v)) - e.j(&u.axpy(-h, &v))) / (2.0 * h);
        assert!((fd - pairing).abs() < 1e-7 * pairing.abs().max(1.0));
    }

    #[test]
    fn newton_step_solves_linearization() {
        let grid = RadialGrid::new(3, 4.0, 100).unwrap();
        let pen = make_penalized(&unit(1.0)).unwrap();
        let e = Energy::new(&grid, &pen).unwrap();
        let u = DiscreteRadialFunction::from_fn(&grid, |r| 2.0 * (-r * r).exp());
        let weak = e.weak_residual(&u);
        let delta = e.newton_step(&u, &weak).unwrap();
        let eps = 1e-6;
        let moved = e.weak_residual(&u.axpy(eps, &delta));
        // ρ(u + εδ) ≈ (1 − ε)ρ(u)
        for i in 0..grid.intervals {
            let target = (1.0 - eps) * weak[i];
            assert!((moved[i] - target).abs() < 1e-8 * weak.iter().fold(0.0f64, |m, x| m.max(x.abs())));
        }
    }
}
