//! Factorization of the KKT Jacobian and the three linear solves per
//! iteration: the first-order (centered Newton) system, the full second-order
//! system, and the simplified second-order variant that keeps only the
//! complementarity curvature.
//!
//! One LU factorization with partial pivoting serves every right-hand side of
//! the iteration. Singularity is reported, never silently regularized.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kkt::{Dims, Iterate, KktJacobian, KktResidual, SecondOrderRhs};

/// Relative pivot threshold below which the matrix is declared singular.
const PIVOT_TOL: f64 = 1e-12;
/// Required relative residual of every linear solve.
const SOLVE_TOL: f64 = 1e-8;

/// Dense LU decomposition with partial (row) pivoting, P A = L U packed in
/// one matrix.
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: DMatrix<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    /// Factorizes A. A pivot smaller than `PIVOT_TOL` times the largest
    /// magnitude of the input matrix fails with the ratio of the offending
    /// pivot to the largest one as a crude conditioning diagnostic.
    pub fn factorize(a: &DMatrix<f64>) -> std::result::Result<Self, f64> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU needs a square matrix");
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let amax = a.amax();
        if amax == 0.0 {
            return Err(0.0);
        }
        let threshold = PIVOT_TOL * amax;
        let mut pivot_max: f64 = 0.0;
        let mut pivot_min = f64::INFINITY;
        for k in 0..n {
            let mut imax = k;
            let mut vmax = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > vmax {
                    vmax = v;
                    imax = i;
                }
            }
            if vmax < threshold {
                return Err(if pivot_max > 0.0 { vmax / pivot_max } else { 0.0 });
            }
            if imax != k {
                lu.swap_rows(k, imax);
                perm.swap(k, imax);
            }
            let pivot = lu[(k, k)];
            pivot_max = pivot_max.max(pivot.abs());
            pivot_min = pivot_min.min(pivot.abs());
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    lu[(i, j)] -= factor * lu[(k, j)];
                }
            }
        }
        Ok(DenseLu { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        let mut x = DVector::from_fn(n, |i, _| b[self.perm[i]]);
        // forward: L y = P b (unit diagonal)
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        // backward: U x = y
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solves A' x = b (used by the condition estimator).
    pub fn solve_transpose(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        // A = P' L U, so A' = U' L' P: first U' w = b (lower triangular),
        // then L' v = w (upper triangular, unit diagonal), then x = P' v.
        let mut w = b.clone();
        for i in 0..n {
            let mut acc = w[i];
            for j in 0..i {
                acc -= self.lu[(j, i)] * w[j];
            }
            w[i] = acc / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut acc = w[i];
            for j in i + 1..n {
                acc -= self.lu[(j, i)] * w[j];
            }
            w[i] = acc;
        }
        let mut x = DVector::zeros(n);
        for i in 0..n {
            x[self.perm[i]] = w[i];
        }
        x
    }

    /// Hager-style estimate of the 1-norm of A^{-1}.
    fn inv_one_norm_estimate(&self) -> f64 {
        let n = self.dim();
        let mut x = DVector::from_element(n, 1.0 / n as f64);
        let mut est = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x);
            est = y.iter().map(|t| t.abs()).sum();
            let xi = DVector::from_fn(n, |i, _| if y[i] >= 0.0 { 1.0 } else { -1.0 });
            let z = self.solve_transpose(&xi);
            let (jmax, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, t)| (i, t.abs()))
                .fold((0, 0.0), |acc, it| if it.1 > acc.1 { it } else { acc });
            if zmax <= z.dot(&x).abs() {
                break;
            }
            x = DVector::zeros(n);
            x[jmax] = 1.0;
        }
        est
    }
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|t| t.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// A reusable factorization of F'(v), kept alongside the matrix so every
/// solve can verify its own residual.
#[derive(Debug)]
pub struct KktFactorization {
    lu: DenseLu,
    matrix: DMatrix<f64>,
    pub cond_estimate: f64,
    pub dims: Dims,
}

/// Factorizes the KKT Jacobian once per iteration.
pub fn factorize(jac: &KktJacobian) -> Result<KktFactorization> {
    let lu = DenseLu::factorize(&jac.matrix)
        .map_err(|cond_estimate| Error::SingularKkt { cond_estimate })?;
    let inv_norm = lu.inv_one_norm_estimate();
    let cond_estimate = if inv_norm > 0.0 {
        1.0 / (one_norm(&jac.matrix) * inv_norm)
    } else {
        1.0
    };
    Ok(KktFactorization {
        lu,
        matrix: jac.matrix.clone(),
        cond_estimate,
        dims: jac.dims,
    })
}

impl KktFactorization {
    /// Solves against the stored matrix and enforces the relative residual
    /// bound; a violation is a numerical failure, not a warning.
    pub fn solve_flat(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        let u = self.lu.solve(rhs);
        if u.iter().any(|t| !t.is_finite()) {
            return Err(Error::non_finite("linear solve"));
        }
        let resid = (&self.matrix * &u - rhs).norm() / rhs.norm().max(1.0);
        if !(resid < SOLVE_TOL) {
            return Err(Error::non_finite(format!(
                "linear solve residual {resid:.3e} exceeds {SOLVE_TOL:.0e}"
            )));
        }
        Ok(u)
    }
}

/// Which second-order system produced the curvature term of the ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondOrderMode {
    FullSecondOrder,
    Simplified,
}

/// First and second derivatives of the ellipse through the current iterate.
/// Whenever the iterate has w = z, both tuples satisfy wdot = zdot and
/// wddot = zddot (fourth-row identities of the two systems).
#[derive(Debug, Clone)]
pub struct ArcDerivatives {
    pub vdot: Iterate,
    pub vddot: Iterate,
    pub mode: SecondOrderMode,
}

/// Solves F'(v) vdot = F(v) - sigma mu e_bar, where e_bar has ones only in the
/// complementarity block.
pub fn solve_first_order(
    fact: &KktFactorization,
    res: &KktResidual,
    sigma: f64,
) -> Result<Iterate> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidArguments(format!(
            "centering parameter must lie in (0,1), got {sigma}"
        )));
    }
    let dims = fact.dims;
    let mut rhs = res.to_flat();
    let (_, _, _, _, oz) = dims.offsets();
    let shift = sigma * res.mu;
    for i in 0..dims.p {
        rhs[oz + i] -= shift;
    }
    let u = fact.solve_flat(&rhs)?;
    Ok(Iterate::from_flat(&u, dims))
}

/// Solves the second-order system with the same coefficient matrix.
pub fn solve_second_order(fact: &KktFactorization, rhs: &SecondOrderRhs) -> Result<Iterate> {
    debug_assert_eq!(rhs.dims(), fact.dims);
    let u = fact.solve_flat(&rhs.to_flat())?;
    Ok(Iterate::from_flat(&u, fact.dims))
}

/// Solves the simplified variant: right-hand side (0, 0, 0, 0, -2 D(zdot) sdot),
/// dropping every higher-order derivative.
pub fn solve_simplified_second_order(
    fact: &KktFactorization,
    zdot: &DVector<f64>,
    sdot: &DVector<f64>,
) -> Result<Iterate> {
    let dims = fact.dims;
    let mut rhs = DVector::zeros(dims.total());
    let (_, _, _, _, oz) = dims.offsets();
    for i in 0..dims.p {
        rhs[oz + i] = -2.0 * zdot[i] * sdot[i];
    }
    let u = fact.solve_flat(&rhs)?;
    Ok(Iterate::from_flat(&u, dims))
}
