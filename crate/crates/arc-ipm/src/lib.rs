//! An infeasible arc-search interior-point solver for general nonlinear
//! programs
//!
//! ```text
//!     min  f(x)   s.t.  h(x) = 0,  g(x) >= 0,
//! ```
//!
//! together with a line-search baseline, a simplified arc variant that skips
//! the expensive third-order terms, and a benchmark harness that runs
//! solver/problem suites and computes performance profiles.
//!
//! The solver works on the slack reformulation `g(x) - s = 0, s >= 0` with
//! multipliers `y` (equalities), `w` (inequalities) and `z` (complementarity),
//! collected in the primal-dual tuple `v = (x, y, w, s, z)`. Each iteration
//! factorizes the KKT Jacobian once, solves for the first and second
//! derivatives of an ellipse that approximates the central path, and steps
//! along that ellipse by an angle `alpha` chosen to keep the iterate interior,
//! stay in a wide neighborhood, and decrease the merit function
//! `phi(v) = ||F(v)||^2` monotonically.

pub mod bench;
pub mod error;
pub mod kkt;
pub mod newton;
pub mod problem;
pub mod solver;
pub mod step;

pub use error::{Error, Result};
pub use kkt::{jacobian, lagrangian_grad_x, residual, Dims, Iterate, KktJacobian, KktResidual};
pub use newton::{factorize, ArcDerivatives, KktFactorization, SecondOrderMode};
pub use problem::{validate_problem, ProblemDef, ProblemRegistry, ProblemTag, ValidationReport};
pub use solver::{solve, InitStrategy, Method, SolveReport, SolveStatus, SolverConfig};
pub use step::{ellipse_point, select_step, MeritBaseline, StepOutcome, StepParams};
