use arc_ipm::kkt::{contract_third_order, jacobian, residual, Iterate};
use arc_ipm::newton::{factorize, solve_first_order, solve_second_order, ArcDerivatives, SecondOrderMode};
use arc_ipm::problem::ProblemRegistry;
use arc_ipm::solver::{initialize, InitStrategy};
use arc_ipm::step::{alpha_tilde, ellipse_point};

fn min_comp(v: &Iterate) -> f64 {
    v.z.iter().zip(v.s.iter()).map(|(z, s)| z * s).fold(f64::INFINITY, f64::min)
}

#[test]
fn hs63_paper_literal_alpha() {
    let reg = ProblemRegistry::builtin();
    let prob = reg.get("HS63").unwrap();
    let mut v = initialize(prob, InitStrategy::Standard).unwrap();
    let mut res = residual(prob, &v).unwrap();
    let merit0 = res.merit;
    let mc0 = min_comp(&v);
    let gamma = 0.5;
    let sigma = 0.125;
    for k in 0..200 {
        if res.merit <= 1e-8 {
            eprintln!("converged at iteration {k}, obj = {:.6}", prob.objective(&v.x));
            return;
        }
        let fact = factorize(&jacobian(prob, &v).unwrap()).unwrap();
        let vdot = solve_first_order(&fact, &res, sigma).unwrap();
        let rhs = contract_third_order(prob, &v, &vdot, 1e-4).unwrap();
        let vddot = solve_second_order(&fact, &rhs).unwrap();
        let d = ArcDerivatives { vdot, vddot, mode: SecondOrderMode::FullSecondOrder };
        let at = alpha_tilde(&v, &d, 1e-3);
        // exact-max alpha_hat on [0, at] via fine grid from the top
        let m_hat_at = |alpha: f64| {
            let t = ellipse_point(&v, &d, alpha);
            match residual(prob, &t) {
                Ok(r) => min_comp(&t) - gamma * mc0 * (r.merit / merit0),
                Err(_) => f64::NEG_INFINITY,
            }
        };
        let mut alpha = at;
        if m_hat_at(at) < 0.0 {
            // bisect the first crossing from above
            let (mut lo, mut hi) = (0.0f64, at);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if m_hat_at(mid) >= 0.0 { lo = mid } else { hi = mid }
            }
            alpha = lo;
        }
        // enforce plain merit decrease by halving if needed (C3)
        let mut trial = ellipse_point(&v, &d, alpha);
        let mut tries = 0;
        let mut tres = residual(prob, &trial);
        while tries < 60 {
            if let Ok(r) = &tres {
                if r.merit < res.merit { break; }
            }
            alpha *= 0.7;
            trial = ellipse_point(&v, &d, alpha);
            tres = residual(prob, &trial);
            tries += 1;
        }
        let r = tres.unwrap();
        if k < 12 || k % 20 == 0 {
            eprintln!("k={k} alpha={alpha:.4} at={at:.4} merit={:.4e} obj={:.4}", r.merit, prob.objective(&trial.x));
        }
        v = trial;
        res = r;
    }
    eprintln!("no convergence; final obj {:.6}, merit {:.3e}", prob.objective(&v.x), res.merit);
}
