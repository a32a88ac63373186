use arc_ipm::problem::ProblemRegistry;
use arc_ipm::solver::{solve, Method, SolverConfig};

#[test]
fn hs63_arc_variants() {
    let reg = ProblemRegistry::builtin();
    let prob = reg.get("HS63").unwrap();
    for ratio in [0.5, 0.7, 0.8, 0.9, 0.95] {
        for beta in [0.1, 0.2, 0.3, 0.5] {
            let mut cfg = SolverConfig::new(Method::Arc);
            cfg.step.backtrack_ratio = ratio;
            cfg.step.beta = beta;
            let r = solve(prob, &cfg);
            eprintln!(
                "ratio={ratio} beta={beta}: {:?} iters={} obj={:.4} merit={:.2e}",
                r.status.kind(), r.iterations, r.objective, r.merit_final
            );
        }
    }
}
