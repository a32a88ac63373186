//! NLP problem definitions: derivative oracles, finite-difference
//! cross-checks, and the built-in registry of benchmark instances.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

mod standard;

/// A scalar-valued function of x with analytic gradient and Hessian.
pub struct ScalarFunc {
    value: Box<dyn Fn(&DVector<f64>) -> f64 + Send + Sync>,
    gradient: Box<dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync>,
    hessian: Box<dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync>,
}

impl ScalarFunc {
    pub fn new(
        value: impl Fn(&DVector<f64>) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
        hessian: impl Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        ScalarFunc {
            value: Box::new(value),
            gradient: Box::new(gradient),
            hessian: Box::new(hessian),
        }
    }

    /// f(x) = 0.5 x'Qx + c'x + r with Q symmetric.
    pub fn quadratic(q: DMatrix<f64>, c: DVector<f64>, r: f64) -> Self {
        assert_eq!(q.nrows(), q.ncols());
        assert_eq!(q.nrows(), c.len());
        assert_eq!(q.clone(), q.transpose(), "quadratic form must be symmetric");
        let q2 = q.clone();
        let q3 = q.clone();
        let c2 = c.clone();
        ScalarFunc {
            value: Box::new(move |x| 0.5 * x.dot(&(&q * x)) + c.dot(x) + r),
            gradient: Box::new(move |x| &q2 * x + &c2),
            hessian: Box::new(move |_| q3.clone()),
        }
    }

    /// f(x) = c'x + r.
    pub fn linear(c: DVector<f64>, r: f64) -> Self {
        let n = c.len();
        let c2 = c.clone();
        ScalarFunc {
            value: Box::new(move |x| c.dot(x) + r),
            gradient: Box::new(move |_| c2.clone()),
            hessian: Box::new(move |_| DMatrix::zeros(n, n)),
        }
    }

    pub fn constant(r: f64) -> Self {
        ScalarFunc {
            value: Box::new(move |_| r),
            gradient: Box::new(move |x| DVector::zeros(x.len())),
            hessian: Box::new(move |x| DMatrix::zeros(x.len(), x.len())),
        }
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        (self.value)(x)
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.gradient)(x)
    }

    pub fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        (self.hessian)(x)
    }
}

/// An NLP instance: min f(x) s.t. h(x) = 0, g(x) >= 0, with analytic first
/// and second derivatives for every component function.
///
/// Immutable after construction; derivative callables are reentrant, so one
/// instance can serve concurrent solves.
pub struct ProblemDef {
    name: String,
    n: usize,
    objective: ScalarFunc,
    eq: Vec<ScalarFunc>,
    ineq: Vec<ScalarFunc>,
    x0: DVector<f64>,
    known_objective: Option<f64>,
}

impl std::fmt::Debug for ProblemDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemDef")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("m", &self.eq.len())
            .field("p", &self.ineq.len())
            .finish_non_exhaustive()
    }
}

impl ProblemDef {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.eq.len()
    }

    pub fn p(&self) -> usize {
        self.ineq.len()
    }

    pub fn x0(&self) -> &DVector<f64> {
        &self.x0
    }

    pub fn known_objective(&self) -> Option<f64> {
        self.known_objective
    }

    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        self.objective.value(x)
    }

    pub fn obj_gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.objective.gradient(x)
    }

    pub fn obj_hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.objective.hessian(x)
    }

    pub fn eq_constraints(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.m(), self.eq.iter().map(|h| h.value(x)))
    }

    pub fn ineq_constraints(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.p(), self.ineq.iter().map(|g| g.value(x)))
    }

    /// n-by-m, column j = gradient of h_j.
    pub fn eq_jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.n, self.m());
        for (j, h) in self.eq.iter().enumerate() {
            jac.set_column(j, &h.gradient(x));
        }
        jac
    }

    /// n-by-p, column i = gradient of g_i.
    pub fn ineq_jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.n, self.p());
        for (i, g) in self.ineq.iter().enumerate() {
            jac.set_column(i, &g.gradient(x));
        }
        jac
    }

    pub fn eq_hessian(&self, x: &DVector<f64>, j: usize) -> DMatrix<f64> {
        self.eq[j].hessian(x)
    }

    pub fn ineq_hessian(&self, x: &DVector<f64>, i: usize) -> DMatrix<f64> {
        self.ineq[i].hessian(x)
    }
}

/// Assembles a [`ProblemDef`], enforcing the structural invariants
/// (p >= 1, m <= n, x0 of length n).
pub struct ProblemBuilder {
    name: String,
    n: usize,
    objective: Option<ScalarFunc>,
    eq: Vec<ScalarFunc>,
    ineq: Vec<ScalarFunc>,
    x0: Option<DVector<f64>>,
    known_objective: Option<f64>,
}

impl ProblemBuilder {
    pub fn new(name: impl Into<String>, n: usize) -> Self {
        ProblemBuilder {
            name: name.into(),
            n,
            objective: None,
            eq: Vec::new(),
            ineq: Vec::new(),
            x0: None,
            known_objective: None,
        }
    }

    pub fn objective(mut self, f: ScalarFunc) -> Self {
        self.objective = Some(f);
        self
    }

    pub fn eq(mut self, h: ScalarFunc) -> Self {
        self.eq.push(h);
        self
    }

    pub fn ineq(mut self, g: ScalarFunc) -> Self {
        self.ineq.push(g);
        self
    }

    /// Adds bound constraints as inequalities: `x_j - lo >= 0` and/or
    /// `hi - x_j >= 0`.
    pub fn bounds(mut self, j: usize, lo: Option<f64>, hi: Option<f64>) -> Self {
        let n = self.n;
        if let Some(lo) = lo {
            let mut c = DVector::zeros(n);
            c[j] = 1.0;
            self.ineq.push(ScalarFunc::linear(c, -lo));
        }
        if let Some(hi) = hi {
            let mut c = DVector::zeros(n);
            c[j] = -1.0;
            self.ineq.push(ScalarFunc::linear(c, hi));
        }
        self
    }

    pub fn start(mut self, x0: DVector<f64>) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn known_objective(mut self, value: f64) -> Self {
        self.known_objective = Some(value);
        self
    }

    pub fn build(self) -> ProblemDef {
        let objective = self.objective.expect("objective required");
        let x0 = self.x0.expect("starting point required");
        assert_eq!(x0.len(), self.n, "{}: x0 length", self.name);
        assert!(!self.ineq.is_empty(), "{}: p >= 1 required", self.name);
        assert!(self.eq.len() <= self.n, "{}: m <= n required", self.name);
        ProblemDef {
            name: self.name,
            n: self.n,
            objective,
            eq: self.eq,
            ineq: self.ineq,
            x0,
            known_objective: self.known_objective,
        }
    }
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Forward-difference slices of a Hessian field: coordinate `i` yields
/// `(H(x + eps e_i) - H(x)) / eps`. The base Hessian is evaluated once at
/// construction.
pub struct HessianDifference<'f> {
    hessian: &'f (dyn Fn(&DVector<f64>) -> DMatrix<f64> + 'f),
    base: DMatrix<f64>,
    x: DVector<f64>,
    eps_hat: f64,
}

impl HessianDifference<'_> {
    pub fn coordinate(&self, i: usize) -> Result<DMatrix<f64>> {
        let mut xp = self.x.clone();
        xp[i] += self.eps_hat;
        let shifted = (self.hessian)(&xp);
        let diff = (shifted - &self.base) / self.eps_hat;
        if diff.iter().any(|t| !t.is_finite()) {
            return Err(Error::non_finite_at("Hessian forward difference", i));
        }
        Ok(diff)
    }
}

/// Builds the per-coordinate forward-difference approximation of the third
/// derivative of a Hessian field, from `eps_hat > 0` and evaluability at x.
pub fn fd_hessian_directional<'f, F>(
    l_hessian: &'f F,
    x: &DVector<f64>,
    eps_hat: f64,
) -> Result<HessianDifference<'f>>
where
    F: Fn(&DVector<f64>) -> DMatrix<f64>,
{
    if !(eps_hat > 0.0) {
        return Err(Error::InvalidArguments(format!(
            "eps_hat must be positive, got {eps_hat}"
        )));
    }
    let base = l_hessian(x);
    if base.iter().any(|t| !t.is_finite()) {
        return Err(Error::non_finite("Hessian at base point"));
    }
    Ok(HessianDifference {
        hessian: l_hessian,
        base,
        x: x.clone(),
        eps_hat,
    })
}

fn central_diff_scalar(f: &dyn Fn(&DVector<f64>) -> f64, x: &DVector<f64>, j: usize) -> f64 {
    let h = 1e-6 * x[j].abs().max(1.0);
    let mut xp = x.clone();
    let mut xm = x.clone();
    xp[j] += h;
    xm[j] -= h;
    (f(&xp) - f(&xm)) / (2.0 * h)
}

fn central_diff_vector(
    f: &dyn Fn(&DVector<f64>) -> DVector<f64>,
    x: &DVector<f64>,
    j: usize,
) -> DVector<f64> {
    let h = 1e-6 * x[j].abs().max(1.0);
    let mut xp = x.clone();
    let mut xm = x.clone();
    xp[j] += h;
    xm[j] -= h;
    (f(&xp) - f(&xm)) / (2.0 * h)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Cross-check result for one derivative level.
#[derive(Debug, Clone)]
pub struct ValidationLevel {
    pub level: &'static str,
    pub max_rel_err: f64,
    pub pass: bool,
}

/// Outcome of [`validate_problem`]: max relative error per derivative level
/// against central differences, with pass/fail at the requested tolerance.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub problem: String,
    pub tol: f64,
    pub levels: Vec<ValidationLevel>,
    pub pass: bool,
}

const ABS_FLOOR: f64 = 1e-8;

fn rel_err(a: f64, b: f64) -> f64 {
    let diff = (a - b).abs();
    if diff <= ABS_FLOOR {
        return 0.0;
    }
    diff / a.abs().max(b.abs()).max(1.0)
}

/// Cross-checks every analytic derivative against central differences at x0
/// and two deterministically perturbed points. Never fails hard: evaluation
/// problems surface as failed levels.
pub fn validate_problem(prob: &ProblemDef, tol: f64) -> ValidationReport {
    assert!(tol > 0.0);
    let n = prob.n();
    let mut points = vec![prob.x0().clone()];
    for (k, scale) in [(1usize, 0.05), (2usize, 0.07)] {
        let x = DVector::from_fn(n, |j, _| {
            prob.x0()[j] + scale * ((j + 1) as f64 * 2.3 + k as f64).sin()
        });
        points.push(x);
    }

    let mut levels: Vec<ValidationLevel> = Vec::new();
    let mut push = |level: &'static str, err: f64| {
        levels.push(ValidationLevel {
            level,
            max_rel_err: err,
            pass: err.is_finite() && err < tol,
        });
    };

    let mut grad_err: f64 = 0.0;
    let mut hess_err: f64 = 0.0;
    let mut eq_jac_err: f64 = 0.0;
    let mut eq_hess_err: f64 = 0.0;
    let mut ineq_jac_err: f64 = 0.0;
    let mut ineq_hess_err: f64 = 0.0;

    for x in &points {
        let grad = prob.obj_gradient(x);
        let hess = prob.obj_hessian(x);
        let eq_jac = prob.eq_jacobian(x);
        let ineq_jac = prob.ineq_jacobian(x);
        for j in 0..n {
            let fd = central_diff_scalar(&|t| prob.objective(t), x, j);
            grad_err = grad_err.max(rel_err(grad[j], fd));

            let fd_col = central_diff_vector(&|t| prob.obj_gradient(t), x, j);
            for i in 0..n {
                hess_err = hess_err.max(rel_err(hess[(i, j)], fd_col[i]));
            }

            let fd_eq = central_diff_vector(&|t| prob.eq_constraints(t), x, j);
            for k in 0..prob.m() {
                eq_jac_err = eq_jac_err.max(rel_err(eq_jac[(j, k)], fd_eq[k]));
            }
            let fd_ineq = central_diff_vector(&|t| prob.ineq_constraints(t), x, j);
            for k in 0..prob.p() {
                ineq_jac_err = ineq_jac_err.max(rel_err(ineq_jac[(j, k)], fd_ineq[k]));
            }
        }
        for k in 0..prob.m() {
            let hk = prob.eq_hessian(x, k);
            for j in 0..n {
                let fd_col = central_diff_vector(&|t| prob.eq_jacobian(t).column(k).into_owned(), x, j);
                for i in 0..n {
                    eq_hess_err = eq_hess_err.max(rel_err(hk[(i, j)], fd_col[i]));
                }
            }
        }
        for k in 0..prob.p() {
            let gk = prob.ineq_hessian(x, k);
            for j in 0..n {
                let fd_col =
                    central_diff_vector(&|t| prob.ineq_jacobian(t).column(k).into_owned(), x, j);
                for i in 0..n {
                    ineq_hess_err = ineq_hess_err.max(rel_err(gk[(i, j)], fd_col[i]));
                }
            }
        }
    }

    push("gradient", grad_err);
    push("hessian", hess_err);
    push("eq_jacobian", eq_jac_err);
    push("eq_hessians", eq_hess_err);
    push("ineq_jacobian", ineq_jac_err);
    push("ineq_hessians", ineq_hess_err);

    let pass = levels.iter().all(|l| l.pass);
    ValidationReport {
        problem: prob.name().to_string(),
        tol,
        levels,
        pass,
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// Classification of a registry entry, mirroring the benchmark grouping:
/// problems whose objective and constraints are polynomials of degree <= 2
/// are `Qcqp`, everything else is `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemTag {
    Qcqp,
    Other,
}

impl std::fmt::Display for ProblemTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProblemTag::Qcqp => write!(f, "QCQP"),
            ProblemTag::Other => write!(f, "OTHER"),
        }
    }
}

impl std::str::FromStr for ProblemTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "QCQP" => Ok(ProblemTag::Qcqp),
            "OTHER" => Ok(ProblemTag::Other),
            other => Err(Error::InvalidArguments(format!("unknown tag {other:?}"))),
        }
    }
}

/// The compiled-in benchmark problems, keyed by name.
pub struct ProblemRegistry {
    entries: BTreeMap<String, (ProblemDef, ProblemTag)>,
}

impl ProblemRegistry {
    /// Registry with every built-in problem.
    pub fn builtin() -> Self {
        let mut entries = BTreeMap::new();
        for (prob, tag) in standard::all() {
            let prev = entries.insert(prob.name().to_string(), (prob, tag));
            assert!(prev.is_none(), "duplicate problem name");
        }
        ProblemRegistry { entries }
    }

    pub fn get(&self, name: &str) -> Result<&ProblemDef> {
        self.entries
            .get(name)
            .map(|(p, _)| p)
            .ok_or_else(|| Error::UnknownProblem {
                name: name.to_string(),
                available: self.names().iter().map(|s| s.to_string()).collect(),
            })
    }

    pub fn tag(&self, name: &str) -> Result<ProblemTag> {
        self.entries
            .get(name)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::UnknownProblem {
                name: name.to_string(),
                available: self.names().iter().map(|s| s.to_string()).collect(),
            })
    }

    /// All names, sorted.
    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(|s| s.as_str()).collect()
    }

    pub fn names_with_tag(&self, tag: ProblemTag) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(_, (_, t))| *t == tag)
            .map(|(name, _)| name.as_str())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ProblemDef, ProblemTag)> {
        self.entries.iter().map(|(k, (p, t))| (k.as_str(), p, *t))
    }
}
