//! A-priori radius bounds for sublevel sets, checked against the exact
//! symmetric solution, with the comparison ODE and the excess inequality.

use std::f64::consts::PI;

use weak_imcf::bounds::{
    excess_inequality_check, horizon, main_bound, ode_comparison, summarize, verify_containment,
};
use weak_imcf::{solve, IsoProfile, WarpedManifold};

fn main() -> weak_imcf::Result<()> {
    let p = IsoProfile::euclidean(3)?;
    let a0 = 4.0 * PI;
    for (name, m) in [("euclidean", WarpedManifold::euclidean(3, 200.0)?), ("dip", WarpedManifold::dip(3, 200.0)?)] {
        let sol = solve(&m, 1.0)?;
        let times: Vec<f64> = (0..=8).map(|i| i as f64 * 0.5).collect();
        let reports = verify_containment(&sol, &p, sol.manifold().sphere_area(1.0)?, &times);
        for r in reports.iter().step_by(2) {
            println!("{name}: t = {:.1}, rho_t = {:.4} <= R_1 = {:.4} ({})", r.t, r.rho_t, r.r1, r.contained);
        }
        let s = summarize(&reports);
        println!("{name}: {} checks, all contained {}, min margin {:.4}", s.checks, s.all_contained, s.min_margin);
        for (t, rho) in [(1.0, 1.2), (2.0, 2.0)] {
            println!("  excess e^t S - A at t = {t}, rho = {rho}: {:.4}", excess_inequality_check(&sol, t, rho)?);
        }
    }

    let cap = 50.0 * a0;
    println!("horizon ln(A/a0) = {:.4}", horizon(a0, cap));
    for t in [1.0, 2.0, 3.0, 3.9] {
        println!("  main bound at t = {t}: {:.4}", main_bound(&p, 1.0, a0, t, cap)?);
    }
    if let Err(e) = main_bound(&p, 1.0, a0, 4.0, cap) {
        println!("  t = 4: {e}");
    }

    let ode = ode_comparison(&p, 10.0, 2.0)?;
    for rho in [0.0, 1.0, 2.0] {
        println!("comparison ODE V({rho}) = {:.5}", ode.value(rho)?);
    }
    println!("extinction radius {:.5}", ode.extinction_radius());
    Ok(())
}
