//! Tridiagonal linear algebra: a reusable Cholesky factor for symmetric
//! positive definite systems and a pivoted LU solve for general ones.

use crate::error::{Error, Result};

/// Cholesky factor `L Lᵀ` of a symmetric tridiagonal SPD matrix.
#[derive(Debug, Clone)]
pub struct SpdTridiagonal {
    l_diag: Vec<f64>,
    l_sub: Vec<f64>,
}

impl SpdTridiagonal {
    /// `diag[i] = A_ii`, `off[i] = A_{i,i+1}`.
    pub fn factor(diag: &[f64], off: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 || off.len() + 1 != n {
            return Err(Error::Numerical(format!(
                "tridiagonal shape mismatch: diag {} off {}",
                n,
                off.len()
            )));
        }
        let mut l_diag = vec![0.0; n];
        let mut l_sub = vec![0.0; n - 1];
        let mut pivot = diag[0];
        for i in 0..n {
            if i > 0 {
                let m = off[i - 1] / l_diag[i - 1];
                l_sub[i - 1] = m;
                pivot = diag[i] - m * m;
            }
            if !(pivot > 0.0) || !pivot.is_finite() {
                return Err(Error::Numerical(format!("matrix not SPD at row {i}")));
            }
            l_diag[i] = pivot.sqrt();
        }
        Ok(Self { l_diag, l_sub })
    }

    pub fn len(&self) -> usize {
        self.l_diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l_diag.is_empty()
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.l_diag.len();
        assert_eq!(rhs.len(), n);
        let mut y = vec![0.0; n];
        y[0] = rhs[0] / self.l_diag[0];
        for i in 1..n {
            y[i] = (rhs[i] - self.l_sub[i - 1] * y[i - 1]) / self.l_diag[i];
        }
        for i in (0..n).rev() {
            let next = if i + 1 < n { self.l_sub[i] * y[i + 1] } else { 0.0 };
            y[i] = (y[i] - next) / self.l_diag[i];
        }
        y
    }
}

/// Solves a general tridiagonal system with partial pivoting.
/// `sub[i] = A_{i+1,i}`, `diag[i] = A_ii`, `sup[i] = A_{i,i+1}`.
pub fn solve_general(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n || rhs.len() != n {
        return Err(Error::Numerical("tridiagonal shape mismatch".into()));
    }
    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    du.push(0.0);
    let mut du2 = vec![0.0; n];
    let mut dl = sub.to_vec();
    let mut b = rhs.to_vec();
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                return Err(Error::Numerical(format!("singular tridiagonal at row {i}")));
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - fact * tmp;
            du2[i] = du[i + 1];
            du[i + 1] *= -fact;
            du[i] = tmp;
            b.swap(i, i + 1);
            b[i + 1] -= fact * b[i];
        }
    }
    if d[n - 1] == 0.0 {
        return Err(Error::Numerical("singular tridiagonal at last row".into()));
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = b[i];
        if i + 1 < n {
            v -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            v -= du2[i] * x[i + 2];
        }
        x[i] = v / d[i];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite tridiagonal solution".into()));
    }
    Ok(x)
}
