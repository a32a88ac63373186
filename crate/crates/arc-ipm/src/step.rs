//! Step-angle selection along the ellipse: the analytic fraction-to-boundary
//! angle, the wide-neighborhood guard, the merit-decrease test, and the
//! backtracking search that combines them into the accepted step.
//!
//! The ellipse point is `v(alpha) = v - vdot sin(alpha) + vddot (1 - cos(alpha))`
//! with `alpha` in (0, pi/2]; `sin(alpha)` plays the role of the step
//! fraction, so the line-search baseline reuses this module with vddot = 0.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::kkt::{residual, Iterate, KktResidual};
use crate::newton::ArcDerivatives;
use crate::problem::ProblemDef;

/// Step-control parameters. `sigma` and `gamma` are the per-iteration
/// centering and neighborhood values chosen by the solver loop.
#[derive(Debug, Clone, Copy)]
pub struct StepParams {
    /// Fraction-to-boundary factor in (0,1): w(alpha) >= delta w, s(alpha) >= delta s.
    pub delta: f64,
    /// Decrease constant in (0, 1/2].
    pub beta: f64,
    /// Neighborhood constant gamma_k in [1/2, gamma_{k-1}].
    pub gamma: f64,
    /// Centering parameter sigma_k in (0, 1/2).
    pub sigma: f64,
    /// Geometric backtracking ratio in (0,1).
    pub backtrack_ratio: f64,
    pub max_backtracks: usize,
}

impl Default for StepParams {
    fn default() -> Self {
        StepParams {
            delta: 1e-3,
            beta: 0.1,
            gamma: 0.5,
            sigma: 0.125,
            backtrack_ratio: 0.7,
            max_backtracks: 60,
        }
    }
}

impl StepParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.delta > 0.0
            && self.delta < 1.0
            && self.beta > 0.0
            && self.beta <= 0.5
            && (0.5..=1.0).contains(&self.gamma)
            && self.sigma > 0.0
            && self.sigma < 1.0
            && self.backtrack_ratio > 0.0
            && self.backtrack_ratio < 1.0
            && self.delta.is_finite()
            && self.beta.is_finite()
            && self.gamma.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArguments(format!("step parameters {self:?}")))
        }
    }
}

/// Scales of the solve's initial point entering the wide-neighborhood guard:
/// min(D(z0) s0) and phi(v0).
#[derive(Debug, Clone, Copy)]
pub struct MeritBaseline {
    pub min_comp0: f64,
    pub merit0: f64,
}

impl MeritBaseline {
    pub fn new(v0: &Iterate, merit0: f64) -> Self {
        MeritBaseline {
            min_comp0: min_comp(v0),
            merit0,
        }
    }
}

fn min_comp(v: &Iterate) -> f64 {
    v.z.iter()
        .zip(v.s.iter())
        .map(|(z, s)| z * s)
        .fold(f64::INFINITY, f64::min)
}

/// The accepted step: the angle, the three candidate angles it is the
/// minimum of, the trial iterate and its merit.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub alpha: f64,
    pub alpha_tilde: f64,
    pub alpha_hat: f64,
    pub alpha_check: f64,
    pub trial: Iterate,
    pub merit_new: f64,
    pub backtracks_used: usize,
    /// Whether the neighborhood guard rejected at least one trial angle.
    pub hat_guard_active: bool,
}

/// Evaluates the ellipse at angle `alpha`:
/// v - vdot sin(alpha) + vddot (1 - cos(alpha)), blockwise.
pub fn ellipse_point(v: &Iterate, d: &ArcDerivatives, alpha: f64) -> Iterate {
    let sin = alpha.sin();
    let omc = 1.0 - alpha.cos();
    let eval = |v: &nalgebra::DVector<f64>,
                vd: &nalgebra::DVector<f64>,
                vdd: &nalgebra::DVector<f64>| v - vd * sin + vdd * omc;
    Iterate {
        x: eval(&v.x, &d.vdot.x, &d.vddot.x),
        y: eval(&v.y, &d.vdot.y, &d.vddot.y),
        w: eval(&v.w, &d.vdot.w, &d.vddot.w),
        s: eval(&v.s, &d.vdot.s, &d.vddot.s),
        z: eval(&v.z, &d.vdot.z, &d.vddot.z),
    }
}

fn clamped_asin(t: f64) -> f64 {
    t.clamp(-1.0, 1.0).asin()
}

fn clamped_acos(t: f64) -> f64 {
    t.clamp(-1.0, 1.0).acos()
}

/// Largest angle `a` in (0, pi/2] such that
/// `val - dot*sin(alpha) + ddot*(1 - cos(alpha)) >= delta*val` for every
/// alpha in [0, a], split into seven sign cases of (dot, ddot). Requires
/// val > 0 and 0 <= delta < 1.
pub fn component_angle(val: f64, dot: f64, ddot: f64, delta: f64) -> f64 {
    debug_assert!(val > 0.0);
    debug_assert!((0.0..1.0).contains(&delta));
    let q = (1.0 - delta) * val; // q + ddot >= dot sin + ddot cos must hold
    let angle = if dot == 0.0 && ddot == 0.0 {
        // case 7
        FRAC_PI_2
    } else if dot == 0.0 {
        // case 1
        if ddot >= -q {
            FRAC_PI_2
        } else {
            clamped_acos((q + ddot) / ddot)
        }
    } else if ddot == 0.0 {
        // case 2
        if dot <= q {
            FRAC_PI_2
        } else {
            clamped_asin(q / dot)
        }
    } else {
        let r = dot.hypot(ddot);
        match (dot > 0.0, ddot > 0.0) {
            (true, true) => {
                // case 3: dot sin + ddot cos = r sin(alpha + beta)
                if q + ddot >= r {
                    FRAC_PI_2
                } else {
                    clamped_asin((q + ddot) / r) - clamped_asin(ddot / r)
                }
            }
            (true, false) => {
                // case 4: r sin(alpha - beta)
                if q + ddot >= r {
                    FRAC_PI_2
                } else {
                    clamped_asin((q + ddot) / r) + clamped_asin(-ddot / r)
                }
            }
            (false, false) => {
                // case 5: -r sin(alpha + beta)
                if q + ddot >= 0.0 {
                    FRAC_PI_2
                } else {
                    std::f64::consts::PI
                        - clamped_asin(-(q + ddot) / r)
                        - clamped_asin(-ddot / r)
                }
            }
            // case 6: dot < 0, ddot > 0 never violates on [0, pi/2]
            (false, true) => FRAC_PI_2,
        }
    };
    angle.min(FRAC_PI_2)
}

/// Largest angle keeping both positive families away from the boundary:
/// the minimum of the per-component analytic angles for w and s, capped at
/// pi/2. Requires w, s > 0.
pub fn alpha_tilde(v: &Iterate, d: &ArcDerivatives, delta: f64) -> f64 {
    let mut angle = FRAC_PI_2;
    for i in 0..v.w.len() {
        angle = angle.min(component_angle(v.w[i], d.vdot.w[i], d.vddot.w[i], delta));
        angle = angle.min(component_angle(v.s[i], d.vdot.s[i], d.vddot.s[i], delta));
    }
    angle
}

/// Wide-neighborhood measure at the trial point:
/// min(D(z(a)) s(a)) - gamma * min(D(z0) s0) * phi(v(a)) / phi(v0).
/// Nonnegative values certify the iterate did not race to the boundary.
pub fn m_hat(
    v0: &Iterate,
    merit0: f64,
    trial: &Iterate,
    merit_trial: f64,
    gamma: f64,
) -> f64 {
    min_comp(trial) - gamma * min_comp(v0) * (merit_trial / merit0)
}

/// First derivative of the merit function along the ellipse at alpha = 0,
/// with sign chosen so positive values mean decrease:
/// 2 (phi(v) - sigma mu^2 / p).
pub fn directional_decrease(merit: f64, sigma: f64, mu: f64, p: usize) -> f64 {
    2.0 * (merit - sigma * mu * mu / p as f64)
}

/// The merit-decrease acceptance test:
/// phi(v(alpha)) <= phi(v) - beta sin(alpha) * directional.
/// When it accepts, the guaranteed geometric decrease
/// phi(v(alpha)) <= phi(v) (1 - 2 beta (1 - sigma) sin(alpha)) is asserted.
#[allow(clippy::too_many_arguments)]
pub fn armijo_decrease(
    merit0: f64,
    merit_trial: f64,
    sigma: f64,
    mu: f64,
    p: usize,
    beta: f64,
    alpha: f64,
    directional: f64,
) -> bool {
    debug_assert!(
        (directional - directional_decrease(merit0, sigma, mu, p)).abs()
            <= 1e-9 * directional.abs().max(1.0),
        "directional derivative inconsistent with its defining formula"
    );
    let accepted = merit_trial <= merit0 - beta * alpha.sin() * directional;
    if accepted {
        let bound = merit0 * (1.0 - 2.0 * beta * (1.0 - sigma) * alpha.sin());
        assert!(
            merit_trial <= bound + 1e-9 * merit0.abs() + f64::MIN_POSITIVE,
            "accepted step violates the guaranteed decrease bound: \
             {merit_trial} > {bound}"
        );
    }
    accepted
}

/// Componentwise complementarity product along the ellipse, computable
/// without forming the trial point when the derivatives solve the first- and
/// second-order systems:
/// z s (1-sin a) + sigma mu sin a - (zd sdd + zdd sd) sin a (1-cos a)
///   + (zdd sdd - zd sd)(1-cos a)^2.
#[allow(clippy::too_many_arguments)]
pub fn component_product_identity(
    z: f64,
    s: f64,
    zdot: f64,
    sdot: f64,
    zddot: f64,
    sddot: f64,
    sigma: f64,
    mu: f64,
    alpha: f64,
) -> f64 {
    let sin = alpha.sin();
    let omc = 1.0 - alpha.cos();
    z * s * (1.0 - sin) + sigma * mu * sin - (zdot * sddot + zddot * sdot) * sin * omc
        + (zddot * sddot - zdot * sdot) * omc * omc
}

/// Relative threshold under which the predicted decrease is treated as
/// stagnation (the accepted-step guard derived from the delta-threshold on
/// beta sin(alpha) grad_alpha phi).
const STAGNATION_FACTOR: f64 = 1e-6;

struct TrialRecord {
    alpha: f64,
    hat_ok: bool,
    decrease_ok: bool,
}

/// Selects the step angle: computes the analytic alpha_tilde, then backtracks
/// geometrically, accepting the first angle at which the neighborhood guard
/// and the decrease test both hold (the fraction-to-boundary inequalities hold
/// for every angle below alpha_tilde by construction, and are asserted).
///
/// Trial points with non-finite merit are rejected and backtracked past.
pub fn select_step(
    prob: &ProblemDef,
    v: &Iterate,
    d: &ArcDerivatives,
    res: &KktResidual,
    baseline: &MeritBaseline,
    params: &StepParams,
) -> Result<StepOutcome> {
    params.validate()?;
    let dims = v.dims();
    debug_assert!(
        v.w.iter().all(|&t| t > 0.0)
            && v.s.iter().all(|&t| t > 0.0)
            && v.z.iter().all(|&t| t > 0.0),
        "select_step requires an interior iterate"
    );
    let merit0 = res.merit;
    let directional = directional_decrease(merit0, params.sigma, res.mu, dims.p);
    if !(directional > 0.0) {
        return Err(Error::StepFailure {
            backtracks: 0,
            reason: format!("nonpositive predicted decrease {directional:.3e}"),
        });
    }

    let atilde = alpha_tilde(v, d, params.delta);
    let stagnation = params.delta * STAGNATION_FACTOR * merit0;

    let mut trials: Vec<TrialRecord> = Vec::new();
    let mut hat_guard_active = false;
    let mut alpha = atilde;
    let mut accepted: Option<(usize, Iterate, f64)> = None;
    for j in 0..=params.max_backtracks {
        if params.beta * alpha.sin() * directional <= stagnation {
            return Err(Error::StepFailure {
                backtracks: j,
                reason: format!(
                    "predicted decrease at angle {alpha:.3e} fell below the stagnation threshold"
                ),
            });
        }
        let trial = ellipse_point(v, d, alpha);
        let (hat_ok, decrease_ok, merit_trial) = match residual(prob, &trial) {
            Ok(trial_res) => {
                let hat_measure = min_comp(&trial)
                    - params.gamma * baseline.min_comp0 * (trial_res.merit / baseline.merit0);
                let hat = hat_measure >= 0.0
                    && trial.z.iter().all(|&t| t > 0.0)
                    && trial.w.iter().all(|&t| t > 0.0);
                let dec = armijo_decrease(
                    merit0,
                    trial_res.merit,
                    params.sigma,
                    res.mu,
                    dims.p,
                    params.beta,
                    alpha,
                    directional,
                );
                (hat, dec, trial_res.merit)
            }
            // out-of-domain trial: treat as rejected and keep shrinking
            Err(Error::NumericalFailure { .. }) => (false, false, f64::INFINITY),
            Err(other) => return Err(other),
        };
        if !hat_ok {
            hat_guard_active = true;
        }
        trials.push(TrialRecord {
            alpha,
            hat_ok,
            decrease_ok,
        });
        if hat_ok && decrease_ok {
            accepted = Some((j, trial, merit_trial));
            break;
        }
        alpha *= params.backtrack_ratio;
    }

    let Some((k, trial, merit_new)) = accepted else {
        return Err(Error::StepFailure {
            backtracks: params.max_backtracks,
            reason: "neighborhood or decrease test failed at every trial angle".into(),
        });
    };

    // fraction-to-boundary holds for alpha <= alpha_tilde by construction
    let accepted_alpha = trials[k].alpha;
    for i in 0..dims.p {
        let slack_w = 1e-12 * (1.0 + v.w[i].abs());
        let slack_s = 1e-12 * (1.0 + v.s[i].abs());
        assert!(
            trial.w[i] >= params.delta * v.w[i] - slack_w,
            "fraction-to-boundary violated on w[{i}]"
        );
        assert!(
            trial.s[i] >= params.delta * v.s[i] - slack_s,
            "fraction-to-boundary violated on s[{i}]"
        );
    }

    // the largest trial angle from which each predicate held contiguously
    // down to the accepted one; the binding predicate's angle equals the
    // accepted angle, so alpha = min(alpha_hat, alpha_check).
    let mut alpha_hat = accepted_alpha;
    for rec in trials[..=k].iter().rev() {
        if rec.hat_ok {
            alpha_hat = rec.alpha;
        } else {
            break;
        }
    }
    let mut alpha_check = accepted_alpha;
    for rec in trials[..=k].iter().rev() {
        if rec.decrease_ok {
            alpha_check = rec.alpha;
        } else {
            break;
        }
    }

    Ok(StepOutcome {
        alpha: accepted_alpha,
        alpha_tilde: atilde,
        alpha_hat,
        alpha_check,
        trial,
        merit_new,
        backtracks_used: k,
        hat_guard_active,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::SecondOrderMode;
    use nalgebra::{dvector, DVector};
    use std::f64::consts::PI;

    fn iterate1(w: f64, s: f64, z: f64) -> Iterate {
        Iterate {
            x: dvector![0.0],
            y: DVector::zeros(0),
            w: dvector![w],
            s: dvector![s],
            z: dvector![z],
        }
    }

    fn derivs1(wd: f64, sd: f64, wdd: f64, sdd: f64) -> ArcDerivatives {
        ArcDerivatives {
            vdot: Iterate {
                x: dvector![0.0],
                y: DVector::zeros(0),
                w: dvector![wd],
                s: dvector![sd],
                z: dvector![wd],
            },
            vddot: Iterate {
                x: dvector![0.0],
                y: DVector::zeros(0),
                w: dvector![wdd],
                s: dvector![sdd],
                z: dvector![wdd],
            },
            mode: SecondOrderMode::FullSecondOrder,
        }
    }

    #[test]
    fn ellipse_point_alpha_zero_is_identity() {
        let v = iterate1(1.0, 2.0, 1.0);
        let d = derivs1(0.3, -0.4, 0.1, 0.2);
        let at0 = ellipse_point(&v, &d, 0.0);
        assert_eq!(at0, v);
    }

    #[test]
    fn ellipse_point_alpha_right_angle() {
        let v = iterate1(1.0, 2.0, 1.0);
        let d = derivs1(0.5, 0.25, -0.125, 0.75);
        let at = ellipse_point(&v, &d, FRAC_PI_2);
        assert!((at.w[0] - (1.0 - 0.5 - 0.125)).abs() < 1e-15);
        assert!((at.s[0] - (2.0 - 0.25 + 0.75)).abs() < 1e-15);
    }

    #[test]
    fn ellipse_point_degenerates_to_damped_line_step() {
        let v = iterate1(1.0, 2.0, 1.0);
        let mut d = derivs1(0.5, 0.25, 0.0, 0.0);
        d.vddot = Iterate::zeros(v.dims());
        for alpha in [0.1, 0.5, 1.2] {
            let at = ellipse_point(&v, &d, alpha);
            assert!((at.w[0] - (1.0 - 0.5 * alpha.sin())).abs() < 1e-15);
        }
    }

    #[test]
    fn component_angle_case7_full_turn() {
        assert_eq!(component_angle(1.0, 0.0, 0.0, 0.5), FRAC_PI_2);
    }

    #[test]
    fn component_angle_case2_arcsine() {
        // w=1, delta=0, wdot=2, wddot=0: arcsin(1/2) = pi/6
        let a = component_angle(1.0, 2.0, 0.0, 0.0);
        assert!((a - PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn component_angle_case1_arccos() {
        // w=1, delta=0, wdot=0, wddot=-2: need cos a >= (1-2)/(-2) = 1/2
        let a = component_angle(1.0, 0.0, -2.0, 0.0);
        assert!((a - PI / 3.0).abs() < 1e-14);
    }

    // brute-force oracle over the 1e-5 grid, shared trig tables
    fn grid_oracle(val: f64, dot: f64, ddot: f64, delta: f64) -> f64 {
        let step = 1e-5;
        let nsteps = (FRAC_PI_2 / step) as usize;
        let mut last_ok = 0.0;
        for k in 1..=nsteps {
            let a = (k as f64) * step;
            let value = val - dot * a.sin() + ddot * (1.0 - a.cos());
            if value >= delta * val - 1e-13 * val.abs() {
                last_ok = a;
            } else {
                break;
            }
        }
        last_ok.min(FRAC_PI_2)
    }

    #[test]
    fn component_angle_case4_matches_grid() {
        let a = component_angle(1.0, 1.0, -1.0, 0.1);
        let g = grid_oracle(1.0, 1.0, -1.0, 0.1);
        assert!((a - g).abs() <= 1.0001e-5, "analytic {a} vs grid {g}");
    }

    #[test]
    fn component_angle_all_cases_match_grid() {
        // deterministic sweep across the seven sign cases
        let mut lcg: u64 = 0x9E3779B97F4A7C15;
        let mut rand01 = move || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((lcg >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for case in 0..7 {
            for _ in 0..40 {
                let val = 0.1 + 10.0 * rand01();
                let delta = [0.0, 1e-3, 0.1, 0.5][(rand01() * 4.0) as usize % 4];
                let mut mag = || 4.0 * rand01() + 0.05;
                let (dot, ddot) = match case {
                    0 => (0.0, mag()),
                    1 => (0.0, -mag()),
                    2 => (mag(), 0.0),
                    3 => (-mag(), 0.0),
                    4 => (mag(), mag()),
                    5 => (mag(), -mag()),
                    _ => (-mag(), -mag()),
                };
                let a = component_angle(val, dot, ddot, delta);
                let g = grid_oracle(val, dot, ddot, delta);
                assert!(
                    (a - g).abs() <= 1.1e-5,
                    "case {case}: val={val} dot={dot} ddot={ddot} delta={delta}: {a} vs {g}"
                );
            }
        }
    }

    #[test]
    fn alpha_tilde_guarantees_boundary_fraction() {
        let v = iterate1(1.0, 0.5, 1.0);
        let d = derivs1(2.0, -0.5, -1.0, 0.3);
        let delta = 0.05;
        let at = alpha_tilde(&v, &d, delta);
        assert!(at > 0.0 && at <= FRAC_PI_2);
        for k in 0..200 {
            let a = at * (k as f64) / 200.0;
            let p = ellipse_point(&v, &d, a);
            assert!(p.w[0] >= delta * v.w[0] - 1e-12);
            assert!(p.s[0] >= delta * v.s[0] - 1e-12);
        }
    }

    #[test]
    fn m_hat_at_start_is_positive() {
        // trial = v0 with gamma = 1/2: min(z0 s0) * (1 - 1/2) > 0
        let v0 = iterate1(1.0, 2.0, 1.0);
        let got = m_hat(&v0, 3.0, &v0, 3.0, 0.5);
        assert!((got - 1.0).abs() < 1e-15); // min comp 2.0, times (1 - 0.5)
    }

    #[test]
    fn m_hat_hand_value() {
        // z(a)s(a) = (0.4, 0.9), min comp0 = 1, phi ratio 0.5, gamma 1/2:
        // 0.4 - 0.25 = 0.15
        let v0 = Iterate {
            x: dvector![0.0],
            y: DVector::zeros(0),
            w: dvector![1.0, 1.0],
            s: dvector![1.0, 1.0],
            z: dvector![1.0, 1.0],
        };
        let trial = Iterate {
            x: dvector![0.0],
            y: DVector::zeros(0),
            w: dvector![1.0, 1.0],
            s: dvector![0.4, 0.9],
            z: dvector![1.0, 1.0],
        };
        let got = m_hat(&v0, 2.0, &trial, 1.0, 0.5);
        assert!((got - 0.15).abs() < 1e-15);
    }

    #[test]
    fn armijo_hand_example() {
        // phi=1, sigma mu^2/p = 0.1, beta=0.1, sin a = 0.5:
        // threshold 1 - 0.1*0.5*2*0.9 = 0.91; 0.9 passes.
        let alpha = 0.5f64.asin();
        let mu = 1.0;
        let sigma = 0.1; // sigma mu^2 / p = 0.1 with p = 1
        let directional = directional_decrease(1.0, sigma, mu, 1);
        assert!((directional - 1.8).abs() < 1e-15);
        assert!(armijo_decrease(1.0, 0.9, sigma, mu, 1, 0.1, alpha, directional));
        assert!(!armijo_decrease(1.0, 0.92, sigma, mu, 1, 0.1, alpha, directional));
    }

    #[test]
    fn armijo_no_decrease_rejects() {
        let directional = directional_decrease(1.0, 0.125, 0.5, 1);
        assert!(!armijo_decrease(1.0, 1.0, 0.125, 0.5, 1, 0.1, 0.7, directional));
    }

    #[test]
    fn component_product_identity_trivial_angles() {
        let f = |alpha: f64| {
            component_product_identity(2.0, 3.0, 0.5, 0.25, -0.5, 0.75, 0.125, 1.5, alpha)
        };
        assert!((f(0.0) - 6.0).abs() < 1e-15); // z s at alpha = 0
        // alpha = pi/2: sigma mu - (zd sdd + zdd sd) + (zdd sdd - zd sd)
        let expect = 0.125 * 1.5 - (0.5 * 0.75 + (-0.5) * 0.25) + ((-0.5) * 0.75 - 0.5 * 0.25);
        assert!((f(FRAC_PI_2) - expect).abs() < 1e-15);
    }

    #[test]
    fn select_step_zero_direction_fails() {
        use crate::problem::{ProblemBuilder, ScalarFunc};
        use nalgebra::DMatrix;
        let prob = ProblemBuilder::new("T", 1)
            .objective(ScalarFunc::quadratic(
                DMatrix::identity(1, 1),
                dvector![-2.0],
                0.0,
            ))
            .ineq(ScalarFunc::linear(dvector![1.0], 0.0))
            .start(dvector![1.0])
            .build();
        let v = Iterate {
            x: dvector![1.0],
            y: DVector::zeros(0),
            w: dvector![1.0],
            s: dvector![1.0],
            z: dvector![1.0],
        };
        let res = residual(&prob, &v).unwrap();
        assert!(res.merit > 0.0);
        let zero = Iterate::zeros(v.dims());
        let d = ArcDerivatives {
            vdot: zero.clone(),
            vddot: zero,
            mode: SecondOrderMode::Simplified,
        };
        let params = StepParams::default();
        match select_step(&prob, &v, &d, &res, &MeritBaseline::new(&v, res.merit), &params) {
            Err(Error::StepFailure { .. }) => {}
            other => panic!("expected StepFailure, got {other:?}"),
        }
    }
}
