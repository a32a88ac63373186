//! Built-in benchmark problems from the Hock-Schittkowski and Boggs-Tolle
//! collections, hand-encoded with analytic derivatives.
//!
//! Purely equality-constrained instances carry one extra inactive inequality
//! `g_1(x) = R - sum x_i^2` with R large enough to stay slack at the optimum,
//! so every instance satisfies p >= 1 with one uniform code path. The added
//! constraint perturbs neither the optimum nor the KKT point (its multiplier
//! is zero there).

use nalgebra::{dmatrix, dvector, DMatrix, DVector};

use super::{ProblemBuilder, ProblemDef, ProblemTag, ScalarFunc};

pub(super) fn all() -> Vec<(ProblemDef, ProblemTag)> {
    vec![
        (maratos(), ProblemTag::Qcqp),
        (hs8(), ProblemTag::Qcqp),
        (hs12(), ProblemTag::Qcqp),
        (hs22(), ProblemTag::Qcqp),
        (hs30(), ProblemTag::Qcqp),
        (hs63(), ProblemTag::Qcqp),
        (hs65(), ProblemTag::Qcqp),
        (hs40(), ProblemTag::Other),
        (hs78(), ProblemTag::Other),
        (bt11(), ProblemTag::Other),
        (hs112(), ProblemTag::Other),
    ]
}

/// g(x) = r - sum x_i^2, the slack ball inequality added to equality-only
/// problems.
fn slack_ball(n: usize, r: f64) -> ScalarFunc {
    ScalarFunc::quadratic(-2.0 * DMatrix::identity(n, n), DVector::zeros(n), r)
}

/// min -x1 + 1e-6 (x1^2 + x2^2 - 1)  s.t.  x1^2 + x2^2 = 1.
/// Optimum -1 at (1, 0).
fn maratos() -> ProblemDef {
    let tau = 1e-6;
    ProblemBuilder::new("MARATOS", 2)
        .objective(ScalarFunc::quadratic(
            2.0 * tau * DMatrix::identity(2, 2),
            dvector![-1.0, 0.0],
            -tau,
        ))
        .eq(ScalarFunc::quadratic(
            2.0 * DMatrix::identity(2, 2),
            DVector::zeros(2),
            -1.0,
        ))
        .ineq(slack_ball(2, 10.0))
        .start(dvector![1.1, 0.1])
        .known_objective(-1.0)
        .build()
}

/// Constant objective -1 subject to x1^2 + x2^2 = 25, x1 x2 = 9 (a pure
/// feasibility problem; m = n here).
fn hs8() -> ProblemDef {
    ProblemBuilder::new("HS8", 2)
        .objective(ScalarFunc::constant(-1.0))
        .eq(ScalarFunc::quadratic(
            2.0 * DMatrix::identity(2, 2),
            DVector::zeros(2),
            -25.0,
        ))
        .eq(ScalarFunc::quadratic(
            dmatrix![0.0, 1.0; 1.0, 0.0],
            DVector::zeros(2),
            -9.0,
        ))
        .ineq(slack_ball(2, 100.0))
        .start(dvector![2.0, 1.0])
        .known_objective(-1.0)
        .build()
}

/// min x1^2/2 + x2^2 - x1 x2 - 7 x1 - 7 x2  s.t.  25 - 4 x1^2 - x2^2 >= 0.
fn hs12() -> ProblemDef {
    ProblemBuilder::new("HS12", 2)
        .objective(ScalarFunc::quadratic(
            dmatrix![1.0, -1.0; -1.0, 2.0],
            dvector![-7.0, -7.0],
            0.0,
        ))
        .ineq(ScalarFunc::quadratic(
            dmatrix![-8.0, 0.0; 0.0, -2.0],
            DVector::zeros(2),
            25.0,
        ))
        .start(dvector![0.0, 0.0])
        .known_objective(-30.0)
        .build()
}

/// min (x1-2)^2 + (x2-1)^2  s.t.  -x1 - x2 + 2 >= 0,  -x1^2 + x2 >= 0.
fn hs22() -> ProblemDef {
    ProblemBuilder::new("HS22", 2)
        .objective(ScalarFunc::quadratic(
            2.0 * DMatrix::identity(2, 2),
            dvector![-4.0, -2.0],
            5.0,
        ))
        .ineq(ScalarFunc::linear(dvector![-1.0, -1.0], 2.0))
        .ineq(ScalarFunc::quadratic(
            dmatrix![-2.0, 0.0; 0.0, 0.0],
            dvector![0.0, 1.0],
            0.0,
        ))
        .start(dvector![2.0, 2.0])
        .known_objective(1.0)
        .build()
}

/// min ||x||^2  s.t.  x1^2 + x2^2 - 1 >= 0, 1 <= x1 <= 10, |x2| <= 10,
/// |x3| <= 10.
fn hs30() -> ProblemDef {
    ProblemBuilder::new("HS30", 3)
        .objective(ScalarFunc::quadratic(
            2.0 * DMatrix::identity(3, 3),
            DVector::zeros(3),
            0.0,
        ))
        .ineq(ScalarFunc::quadratic(
            DMatrix::from_diagonal(&dvector![2.0, 2.0, 0.0]),
            DVector::zeros(3),
            -1.0,
        ))
        .bounds(0, Some(1.0), Some(10.0))
        .bounds(1, Some(-10.0), Some(10.0))
        .bounds(2, Some(-10.0), Some(10.0))
        .start(dvector![1.0, 1.0, 1.0])
        .known_objective(0.9999)
        .build()
}

/// min 1000 - x1^2 - 2 x2^2 - x3^2 - x1 x2 - x1 x3
/// s.t. 8 x1 + 14 x2 + 7 x3 = 56,  x1^2 + x2^2 + x3^2 = 25,  x >= 0.
fn hs63() -> ProblemDef {
    ProblemBuilder::new("HS63", 3)
        .objective(ScalarFunc::quadratic(
            dmatrix![-2.0, -1.0, -1.0; -1.0, -4.0, 0.0; -1.0, 0.0, -2.0],
            DVector::zeros(3),
            1000.0,
        ))
        .eq(ScalarFunc::linear(dvector![8.0, 14.0, 7.0], -56.0))
        .eq(ScalarFunc::quadratic(
            2.0 * DMatrix::identity(3, 3),
            DVector::zeros(3),
            -25.0,
        ))
        .bounds(0, Some(0.0), None)
        .bounds(1, Some(0.0), None)
        .bounds(2, Some(0.0), None)
        .start(dvector![2.0, 2.0, 2.0])
        .known_objective(961.7152)
        .build()
}

/// min (x1-x2)^2 + (x1+x2-10)^2/9 + (x3-5)^2
/// s.t. 48 - x1^2 - x2^2 - x3^2 >= 0, |x1| <= 4.5, |x2| <= 4.5, |x3| <= 5.
/// The collection's starting point (-5, 5, 0) violates the bounds.
fn hs65() -> ProblemDef {
    let q = dmatrix![
        2.0 + 2.0 / 9.0, -2.0 + 2.0 / 9.0, 0.0;
        -2.0 + 2.0 / 9.0, 2.0 + 2.0 / 9.0, 0.0;
        0.0, 0.0, 2.0
    ];
    ProblemBuilder::new("HS65", 3)
        .objective(ScalarFunc::quadratic(
            q,
            dvector![-20.0 / 9.0, -20.0 / 9.0, -10.0],
            100.0 / 9.0 + 25.0,
        ))
        .ineq(ScalarFunc::quadratic(
            -2.0 * DMatrix::identity(3, 3),
            DVector::zeros(3),
            48.0,
        ))
        .bounds(0, Some(-4.5), Some(4.5))
        .bounds(1, Some(-4.5), Some(4.5))
        .bounds(2, Some(-5.0), Some(5.0))
        .start(dvector![-5.0, 5.0, 0.0])
        .known_objective(0.9535)
        .build()
}

/// min -x1 x2 x3 x4  s.t.  x1^3 + x2^2 = 1,  x1^2 x4 = x3,  x4^2 = x2.
fn hs40() -> ProblemDef {
    ProblemBuilder::new("HS40", 4)
        .objective(ScalarFunc::new(
            |x| -x[0] * x[1] * x[2] * x[3],
            |x| {
                dvector![
                    -x[1] * x[2] * x[3],
                    -x[0] * x[2] * x[3],
                    -x[0] * x[1] * x[3],
                    -x[0] * x[1] * x[2]
                ]
            },
            |x| {
                let mut h = DMatrix::zeros(4, 4);
                for i in 0..4 {
                    for j in 0..4 {
                        if i != j {
                            let prod: f64 = (0..4).filter(|&k| k != i && k != j).map(|k| x[k]).product();
                            h[(i, j)] = -prod;
                        }
                    }
                }
                h
            },
        ))
        .eq(ScalarFunc::new(
            |x| x[0].powi(3) + x[1] * x[1] - 1.0,
            |x| dvector![3.0 * x[0] * x[0], 2.0 * x[1], 0.0, 0.0],
            |x| DMatrix::from_diagonal(&dvector![6.0 * x[0], 2.0, 0.0, 0.0]),
        ))
        .eq(ScalarFunc::new(
            |x| x[0] * x[0] * x[3] - x[2],
            |x| dvector![2.0 * x[0] * x[3], 0.0, -1.0, x[0] * x[0]],
            |x| {
                let mut h = DMatrix::zeros(4, 4);
                h[(0, 0)] = 2.0 * x[3];
                h[(0, 3)] = 2.0 * x[0];
                h[(3, 0)] = 2.0 * x[0];
                h
            },
        ))
        .eq(ScalarFunc::new(
            |x| x[3] * x[3] - x[1],
            |x| dvector![0.0, -1.0, 0.0, 2.0 * x[3]],
            |_| DMatrix::from_diagonal(&dvector![0.0, 0.0, 0.0, 2.0]),
        ))
        .ineq(slack_ball(4, 10.0))
        .start(dvector![0.8, 0.8, 0.8, 0.8])
        .known_objective(-0.25)
        .build()
}

/// min x1 x2 x3 x4 x5
/// s.t. ||x||^2 = 10,  x2 x3 - 5 x4 x5 = 0,  x1^3 + x2^3 = -1.
fn hs78() -> ProblemDef {
    ProblemBuilder::new("HS78", 5)
        .objective(ScalarFunc::new(
            |x| x.iter().product(),
            |x| {
                DVector::from_fn(5, |i, _| {
                    (0..5).filter(|&k| k != i).map(|k| x[k]).product()
                })
            },
            |x| {
                DMatrix::from_fn(5, 5, |i, j| {
                    if i == j {
                        0.0
                    } else {
                        (0..5).filter(|&k| k != i && k != j).map(|k| x[k]).product()
                    }
                })
            },
        ))
        .eq(ScalarFunc::quadratic(
            2.0 * DMatrix::identity(5, 5),
            DVector::zeros(5),
            -10.0,
        ))
        .eq(ScalarFunc::new(
            |x| x[1] * x[2] - 5.0 * x[3] * x[4],
            |x| dvector![0.0, x[2], x[1], -5.0 * x[4], -5.0 * x[3]],
            |_| {
                let mut h = DMatrix::zeros(5, 5);
                h[(1, 2)] = 1.0;
                h[(2, 1)] = 1.0;
                h[(3, 4)] = -5.0;
                h[(4, 3)] = -5.0;
                h
            },
        ))
        .eq(ScalarFunc::new(
            |x| x[0].powi(3) + x[1].powi(3) + 1.0,
            |x| dvector![3.0 * x[0] * x[0], 3.0 * x[1] * x[1], 0.0, 0.0, 0.0],
            |x| DMatrix::from_diagonal(&dvector![6.0 * x[0], 6.0 * x[1], 0.0, 0.0, 0.0]),
        ))
        .ineq(slack_ball(5, 100.0))
        .start(dvector![-2.0, 1.5, 2.0, -1.0, -1.0])
        .known_objective(-2.9197)
        .build()
}

/// min (x1-1)^2 + (x1-x2)^2 + (x2-x3)^2 + (x3-x4)^4 + (x4-x5)^4
/// s.t. x1 + x2^2 + x3^3 = 6,  x2 - x3^2 + x4^2 = 2 + 2 sqrt(2),  x1 x5 = 2.
fn bt11() -> ProblemDef {
    let c2 = 2.0 + 2.0 * std::f64::consts::SQRT_2;
    ProblemBuilder::new("BT11", 5)
        .objective(ScalarFunc::new(
            |x| {
                (x[0] - 1.0).powi(2)
                    + (x[0] - x[1]).powi(2)
                    + (x[1] - x[2]).powi(2)
                    + (x[2] - x[3]).powi(4)
                    + (x[3] - x[4]).powi(4)
            },
            |x| {
                let c34 = 4.0 * (x[2] - x[3]).powi(3);
                let c45 = 4.0 * (x[3] - x[4]).powi(3);
                dvector![
                    2.0 * (x[0] - 1.0) + 2.0 * (x[0] - x[1]),
                    -2.0 * (x[0] - x[1]) + 2.0 * (x[1] - x[2]),
                    -2.0 * (x[1] - x[2]) + c34,
                    -c34 + c45,
                    -c45
                ]
            },
            |x| {
                let a = 12.0 * (x[2] - x[3]).powi(2);
                let b = 12.0 * (x[3] - x[4]).powi(2);
                dmatrix![
                    4.0, -2.0, 0.0, 0.0, 0.0;
                    -2.0, 4.0, -2.0, 0.0, 0.0;
                    0.0, -2.0, 2.0 + a, -a, 0.0;
                    0.0, 0.0, -a, a + b, -b;
                    0.0, 0.0, 0.0, -b, b
                ]
            },
        ))
        .eq(ScalarFunc::new(
            |x| x[0] + x[1] * x[1] + x[2].powi(3) - 6.0,
            |x| dvector![1.0, 2.0 * x[1], 3.0 * x[2] * x[2], 0.0, 0.0],
            |x| DMatrix::from_diagonal(&dvector![0.0, 2.0, 6.0 * x[2], 0.0, 0.0]),
        ))
        .eq(ScalarFunc::new(
            move |x| x[1] - x[2] * x[2] + x[3] * x[3] - c2,
            |x| dvector![0.0, 1.0, -2.0 * x[2], 2.0 * x[3], 0.0],
            |_| DMatrix::from_diagonal(&dvector![0.0, 0.0, -2.0, 2.0, 0.0]),
        ))
        .eq(ScalarFunc::new(
            |x| x[0] * x[4] - 2.0,
            |x| dvector![x[4], 0.0, 0.0, 0.0, x[0]],
            |_| {
                let mut h = DMatrix::zeros(5, 5);
                h[(0, 4)] = 1.0;
                h[(4, 0)] = 1.0;
                h
            },
        ))
        .ineq(slack_ball(5, 100.0))
        .start(dvector![2.0, 2.0, 2.0, 2.0, 2.0])
        .known_objective(0.8249)
        .build()
}

/// Chemical equilibrium: min sum_j x_j (c_j + ln(x_j / sum_k x_k)) over
/// three linear mass balances, x_j >= 1e-6. Non-quadratic with n = 10.
fn hs112() -> ProblemDef {
    const C: [f64; 10] = [
        -6.089, -17.164, -34.054, -5.914, -24.721, -14.986, -24.100, -10.708, -26.662, -22.179,
    ];
    let mut b = ProblemBuilder::new("HS112", 10)
        .objective(ScalarFunc::new(
            |x| {
                let total: f64 = x.sum();
                x.iter()
                    .enumerate()
                    .map(|(j, &xj)| xj * (C[j] + (xj / total).ln()))
                    .sum()
            },
            |x| {
                let ln_total = x.sum().ln();
                DVector::from_fn(10, |j, _| C[j] + x[j].ln() - ln_total)
            },
            |x| {
                let inv_total = 1.0 / x.sum();
                DMatrix::from_fn(10, 10, |i, j| {
                    let diag = if i == j { 1.0 / x[i] } else { 0.0 };
                    diag - inv_total
                })
            },
        ))
        .eq(ScalarFunc::linear(
            dvector![1.0, 2.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            -2.0,
        ))
        .eq(ScalarFunc::linear(
            dvector![0.0, 0.0, 0.0, 1.0, 2.0, 1.0, 1.0, 0.0, 0.0, 0.0],
            -1.0,
        ))
        .eq(ScalarFunc::linear(
            dvector![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 1.0],
            -1.0,
        ));
    for j in 0..10 {
        b = b.bounds(j, Some(1e-6), None);
    }
    b.start(DVector::from_element(10, 0.1))
        .known_objective(-47.76109086)
        .build()
}
