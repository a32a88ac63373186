//! The primal-dual iterate, the KKT residual F(v), its Jacobian F'(v), the
//! merit function, and the tensor contractions feeding the second-order
//! right-hand side.
//!
//! Block order everywhere is `(x, y, w, s, z)` with sizes `(n, m, p, p, p)`.
//! The equality Jacobian is stored n-by-m with column `j` equal to the
//! gradient of `h_j`; the inequality Jacobian is n-by-p with column `i` equal
//! to the gradient of `g_i`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::problem::{fd_hessian_directional, ProblemDef};

/// Block sizes of the primal-dual system: `n` variables, `m` equalities,
/// `p` inequalities. The flattened KKT system has `n + m + 3p` rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub n: usize,
    pub m: usize,
    pub p: usize,
}

impl Dims {
    pub fn total(&self) -> usize {
        self.n + self.m + 3 * self.p
    }

    /// Flat offsets of the five blocks: (x, y, w, s, z).
    pub fn offsets(&self) -> (usize, usize, usize, usize, usize) {
        let (n, m, p) = (self.n, self.m, self.p);
        (0, n, n + m, n + m + p, n + m + 2 * p)
    }
}

/// The tuple v = (x, y, w, s, z). The same layout carries iterates and the
/// ellipse derivatives; positivity of (w, s, z) and w = z are solver-maintained
/// invariants of accepted iterates, not of the type.
#[derive(Debug, Clone, PartialEq)]
pub struct Iterate {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub w: DVector<f64>,
    pub s: DVector<f64>,
    pub z: DVector<f64>,
}

impl Iterate {
    pub fn zeros(dims: Dims) -> Self {
        Iterate {
            x: DVector::zeros(dims.n),
            y: DVector::zeros(dims.m),
            w: DVector::zeros(dims.p),
            s: DVector::zeros(dims.p),
            z: DVector::zeros(dims.p),
        }
    }

    pub fn dims(&self) -> Dims {
        Dims {
            n: self.x.len(),
            m: self.y.len(),
            p: self.w.len(),
        }
    }

    pub fn to_flat(&self) -> DVector<f64> {
        let dims = self.dims();
        let mut flat = DVector::zeros(dims.total());
        let (ox, oy, ow, os, oz) = dims.offsets();
        flat.rows_mut(ox, dims.n).copy_from(&self.x);
        flat.rows_mut(oy, dims.m).copy_from(&self.y);
        flat.rows_mut(ow, dims.p).copy_from(&self.w);
        flat.rows_mut(os, dims.p).copy_from(&self.s);
        flat.rows_mut(oz, dims.p).copy_from(&self.z);
        flat
    }

    pub fn from_flat(flat: &DVector<f64>, dims: Dims) -> Self {
        assert_eq!(flat.len(), dims.total(), "flat vector length mismatch");
        let (ox, oy, ow, os, oz) = dims.offsets();
        Iterate {
            x: flat.rows(ox, dims.n).into_owned(),
            y: flat.rows(oy, dims.m).into_owned(),
            w: flat.rows(ow, dims.p).into_owned(),
            s: flat.rows(os, dims.p).into_owned(),
            z: flat.rows(oz, dims.p).into_owned(),
        }
    }

    pub fn is_finite(&self) -> bool {
        [&self.x, &self.y, &self.w, &self.s, &self.z]
            .iter()
            .all(|b| b.iter().all(|v| v.is_finite()))
    }
}

/// The KKT residual F(v) split into its five named blocks, with the merit
/// value phi = ||F||^2 and the duality measure mu = z's / p.
#[derive(Debug, Clone)]
pub struct KktResidual {
    /// grad_x L = grad f + (grad h) y - (grad g) w
    pub grad_lag_x: DVector<f64>,
    /// h(x)
    pub eq_res: DVector<f64>,
    /// g(x) - s
    pub ineq_res: DVector<f64>,
    /// w - z
    pub dual_res: DVector<f64>,
    /// D(z) s, componentwise z_i * s_i
    pub comp_res: DVector<f64>,
    pub merit: f64,
    pub mu: f64,
}

impl KktResidual {
    pub fn dims(&self) -> Dims {
        Dims {
            n: self.grad_lag_x.len(),
            m: self.eq_res.len(),
            p: self.comp_res.len(),
        }
    }

    pub fn to_flat(&self) -> DVector<f64> {
        let dims = self.dims();
        let mut flat = DVector::zeros(dims.total());
        let (ox, oy, ow, os, oz) = dims.offsets();
        flat.rows_mut(ox, dims.n).copy_from(&self.grad_lag_x);
        flat.rows_mut(oy, dims.m).copy_from(&self.eq_res);
        flat.rows_mut(ow, dims.p).copy_from(&self.ineq_res);
        flat.rows_mut(os, dims.p).copy_from(&self.dual_res);
        flat.rows_mut(oz, dims.p).copy_from(&self.comp_res);
        flat
    }
}

/// Gradient of the Lagrangian with respect to x:
/// grad f(x) + grad h(x) y - grad g(x) w.
pub fn lagrangian_grad_x(prob: &ProblemDef, v: &Iterate) -> Result<DVector<f64>> {
    let mut grad = prob.obj_gradient(&v.x);
    if prob.m() > 0 {
        grad += prob.eq_jacobian(&v.x) * &v.y;
    }
    grad -= prob.ineq_jacobian(&v.x) * &v.w;
    if grad.iter().any(|t| !t.is_finite()) {
        return Err(Error::non_finite("lagrangian gradient"));
    }
    Ok(grad)
}

/// Hessian of the Lagrangian with respect to x at multipliers (y, w), held
/// fixed: grad^2 f + sum_j y_j grad^2 h_j - sum_i w_i grad^2 g_i.
pub fn lagrangian_hessian_x(
    prob: &ProblemDef,
    x: &DVector<f64>,
    y: &DVector<f64>,
    w: &DVector<f64>,
) -> DMatrix<f64> {
    let mut hess = prob.obj_hessian(x);
    for j in 0..prob.m() {
        hess += prob.eq_hessian(x, j) * y[j];
    }
    for i in 0..prob.p() {
        hess -= prob.ineq_hessian(x, i) * w[i];
    }
    hess
}

/// Evaluates F(v) and packages the five blocks with merit and mu.
pub fn residual(prob: &ProblemDef, v: &Iterate) -> Result<KktResidual> {
    let dims = v.dims();
    debug_assert_eq!(dims.n, prob.n());
    let grad_lag_x = lagrangian_grad_x(prob, v)?;
    let eq_res = prob.eq_constraints(&v.x);
    let ineq_res = prob.ineq_constraints(&v.x) - &v.s;
    let dual_res = &v.w - &v.z;
    let comp_res = v.z.component_mul(&v.s);

    let merit = grad_lag_x.norm_squared()
        + eq_res.norm_squared()
        + ineq_res.norm_squared()
        + dual_res.norm_squared()
        + comp_res.norm_squared();
    if !merit.is_finite() {
        return Err(Error::non_finite("KKT residual"));
    }
    let mu = v.z.dot(&v.s) / dims.p as f64;
    Ok(KktResidual {
        grad_lag_x,
        eq_res,
        ineq_res,
        dual_res,
        comp_res,
        merit,
        mu,
    })
}

/// The Jacobian F'(v), assembled dense with its block descriptors.
///
/// ```text
///   [ grad^2_x L   grad h   -grad g    0      0    ]
///   [ (grad h)^T     0         0       0      0    ]
///   [ (grad g)^T     0         0      -I      0    ]
///   [     0          0         I       0     -I    ]
///   [     0          0         0      D(z)   D(s)  ]
/// ```
#[derive(Debug, Clone)]
pub struct KktJacobian {
    pub matrix: DMatrix<f64>,
    pub dims: Dims,
}

impl KktJacobian {
    /// Returns the (row, col) block of the 5x5 partition, for inspection.
    pub fn block(&self, row: usize, col: usize) -> DMatrix<f64> {
        let d = self.dims;
        let sizes = [d.n, d.m, d.p, d.p, d.p];
        let offs = {
            let (a, b, c, e, f) = d.offsets();
            [a, b, c, e, f]
        };
        self.matrix
            .view((offs[row], offs[col]), (sizes[row], sizes[col]))
            .into_owned()
    }
}

/// Assembles F'(v) as a dense (n+m+3p) square matrix.
pub fn jacobian(prob: &ProblemDef, v: &Iterate) -> Result<KktJacobian> {
    let dims = v.dims();
    let (n, m, p) = (dims.n, dims.m, dims.p);
    let total = dims.total();
    let (ox, oy, ow, os, oz) = dims.offsets();

    let hess_l = lagrangian_hessian_x(prob, &v.x, &v.y, &v.w);
    let eq_jac = prob.eq_jacobian(&v.x); // n x m
    let ineq_jac = prob.ineq_jacobian(&v.x); // n x p

    let mut a = DMatrix::zeros(total, total);
    a.view_mut((ox, ox), (n, n)).copy_from(&hess_l);
    if m > 0 {
        a.view_mut((ox, oy), (n, m)).copy_from(&eq_jac);
        a.view_mut((oy, ox), (m, n)).copy_from(&eq_jac.transpose());
    }
    a.view_mut((ox, ow), (n, p)).copy_from(&(-&ineq_jac));
    a.view_mut((ow, ox), (p, n)).copy_from(&ineq_jac.transpose());
    for i in 0..p {
        a[(ow + i, os + i)] = -1.0; // row 3: -I on s
        a[(os + i, ow + i)] = 1.0; // row 4: +I on w
        a[(os + i, oz + i)] = -1.0; // row 4: -I on z
        a[(oz + i, os + i)] = v.z[i]; // row 5: D(z) on s
        a[(oz + i, oz + i)] = v.s[i]; // row 5: D(s) on z
    }
    if a.iter().any(|t| !t.is_finite()) {
        return Err(Error::non_finite("KKT Jacobian"));
    }
    Ok(KktJacobian { matrix: a, dims })
}

/// Right-hand side of the second-order (ellipse curvature) system, in the
/// same five-block layout as F.
#[derive(Debug, Clone)]
pub struct SecondOrderRhs {
    pub lag: DVector<f64>,
    pub eq: DVector<f64>,
    pub ineq: DVector<f64>,
    pub dual: DVector<f64>,
    pub comp: DVector<f64>,
}

impl SecondOrderRhs {
    pub fn dims(&self) -> Dims {
        Dims {
            n: self.lag.len(),
            m: self.eq.len(),
            p: self.comp.len(),
        }
    }

    pub fn to_flat(&self) -> DVector<f64> {
        let dims = self.dims();
        let mut flat = DVector::zeros(dims.total());
        let (ox, oy, ow, os, oz) = dims.offsets();
        flat.rows_mut(ox, dims.n).copy_from(&self.lag);
        flat.rows_mut(oy, dims.m).copy_from(&self.eq);
        flat.rows_mut(ow, dims.p).copy_from(&self.ineq);
        flat.rows_mut(os, dims.p).copy_from(&self.dual);
        flat.rows_mut(oz, dims.p).copy_from(&self.comp);
        flat
    }
}

/// Directional third-derivative contraction (grad^3_x L) xdot xdot, formed
/// with one forward Hessian difference per coordinate (n+1 Hessian
/// evaluations, never materializing the tensor):
/// sum_i xdot_i * [(grad^2 L(x + eps e_i) - grad^2 L(x)) / eps] * xdot.
pub fn third_order_contraction(
    prob: &ProblemDef,
    v: &Iterate,
    xdot: &DVector<f64>,
    eps_hat: f64,
) -> Result<DVector<f64>> {
    let y = v.y.clone();
    let w = v.w.clone();
    let hess = |x: &DVector<f64>| lagrangian_hessian_x(prob, x, &y, &w);
    let diff = fd_hessian_directional(&hess, &v.x, eps_hat)?;
    let mut out = DVector::zeros(prob.n());
    for i in 0..prob.n() {
        if xdot[i] == 0.0 {
            continue; // the i-th slice contributes nothing
        }
        out += (diff.coordinate(i)? * xdot) * xdot[i];
    }
    Ok(out)
}

/// Assembles the five right-hand-side blocks of the second-order system from
/// the first-order direction `vdot`:
///
/// ```text
///   [ -(grad^3 L) xd xd - 2 (grad^2 h) yd xd + 2 (grad^2 g) zd xd ]
///   [ -(grad^2 h)^T xd xd ]      (component j:  -xd' (grad^2 h_j) xd)
///   [ -(grad^2 g)^T xd xd ]
///   [ 0 ]
///   [ -2 D(zd) sd ]
/// ```
///
/// where (grad^2 h) yd xd = sum_j yd_j (grad^2 h_j) xd and likewise for g.
pub fn contract_third_order(
    prob: &ProblemDef,
    v: &Iterate,
    vdot: &Iterate,
    eps_hat: f64,
) -> Result<SecondOrderRhs> {
    let dims = v.dims();
    let xd = &vdot.x;

    let mut lag = -third_order_contraction(prob, v, xd, eps_hat)?;
    let mut eq = DVector::zeros(dims.m);
    for j in 0..dims.m {
        let hj = prob.eq_hessian(&v.x, j);
        let hj_xd = &hj * xd;
        lag -= &hj_xd * (2.0 * vdot.y[j]);
        eq[j] = -xd.dot(&hj_xd);
    }
    let mut ineq = DVector::zeros(dims.p);
    for i in 0..dims.p {
        let gi = prob.ineq_hessian(&v.x, i);
        let gi_xd = &gi * xd;
        lag += &gi_xd * (2.0 * vdot.z[i]);
        ineq[i] = -xd.dot(&gi_xd);
    }
    let comp = vdot.z.component_mul(&vdot.s) * -2.0;

    let rhs = SecondOrderRhs {
        lag,
        eq,
        ineq,
        dual: DVector::zeros(dims.p),
        comp,
    };
    if rhs.to_flat().iter().any(|t| !t.is_finite()) {
        return Err(Error::non_finite("second-order right-hand side"));
    }
    Ok(rhs)
}
