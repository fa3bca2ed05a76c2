//! Certifies discretized exact solutions as discrete weak solutions: each
//! sublevel set must minimize `J` among competitors that differ inside the
//! window. A bumped `u` is rejected.

use weak_imcf::discrete::{radial_nodes, RadialDiscretization};
use weak_imcf::{solve, WarpedManifold};

fn main() -> weak_imcf::Result<()> {
    let m = WarpedManifold::dip(3, 10.0)?;
    let sol = solve(&m, 1.0)?;
    for hi in [2.5, 4.0, 5.5] {
        let d = RadialDiscretization::from_solution(&sol, hi, ((hi - 1.0) * 4000.0) as usize, 8)?;
        let u_hi = sol.u_at(hi)?;
        let times: Vec<f64> = (0..4).map(|i| u_hi * i as f64 / 4.0).collect();
        let report = d.certify(&times, 1e-6)?;
        println!("window [0, {hi}] with {} cells: worst violation {:.2e}, pass = {}", d.complex.len(), report.worst_violation, report.pass);
    }

    // raise u by 0.2 on [1.55, 1.6] of the Euclidean solution
    let e = WarpedManifold::euclidean(3, 4.0)?;
    let sol = solve(&e, 1.0)?;
    let nodes = radial_nodes(&e, 1.0, 2.5, 6000, 8)?;
    let bumped = RadialDiscretization::new(&e, 1.0, &nodes, |r| {
        sol.u_at(r).map(|u| if (1.55..=1.6).contains(&r) { u + 0.2 } else { u })
    })?;
    let report = bumped.certify(&[0.5, 0.9, 1.0], 1e-6)?;
    for v in &report.verdicts {
        println!("perturbed, t = {}: J(E_t) = {:.6}, min J = {:.6}, violation {:.3e}", v.t, v.j_sublevel, v.j_minimum, v.violation);
    }
    println!("{}", report.to_json()?);
    Ok(())
}
