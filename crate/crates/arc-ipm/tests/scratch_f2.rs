use arc_ipm::kkt::{contract_third_order, jacobian, residual, Iterate};
use arc_ipm::newton::{factorize, solve_first_order};
use arc_ipm::problem::ProblemRegistry;
use arc_ipm::solver::{initialize, InitStrategy};
use nalgebra::DVector;

#[test]
fn second_order_rhs_matches_fd_of_residual_along_ray() {
    let reg = ProblemRegistry::builtin();
    for name in ["HS63", "HS22", "HS40", "BT11"] {
        let prob = reg.get(name).unwrap();
        let v = initialize(prob, InitStrategy::Standard).unwrap();
        let res = residual(prob, &v).unwrap();
        let fact = factorize(&jacobian(prob, &v).unwrap()).unwrap();
        let vdot = solve_first_order(&fact, &res, 0.125).unwrap();
        let rhs = contract_third_order(prob, &v, &vdot, 1e-5).unwrap().to_flat();

        let dims = v.dims();
        let tau = 1e-4;
        let flat = v.to_flat();
        let d = vdot.to_flat();
        let fp = residual(prob, &Iterate::from_flat(&(&flat + &d * tau), dims)).unwrap().to_flat();
        let f0 = res.to_flat();
        let fm = residual(prob, &Iterate::from_flat(&(&flat - &d * tau), dims)).unwrap().to_flat();
        let f2: DVector<f64> = (fp - &f0 * 2.0 + fm) / (tau * tau);
        let err = (&rhs + &f2).norm() / f2.norm().max(1.0);
        eprintln!("{name}: ||rhs + F''[vdot,vdot]|| rel = {err:.3e}  (rhs norm {:.3e})", rhs.norm());
        assert!(err < 1e-4, "{name}: {err}");
    }
}
