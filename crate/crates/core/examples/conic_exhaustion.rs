//! Conic cutoffs on the dip and log-cylinder models: escape times, agreement
//! below the horizon, and the stitched limit against the direct solution.

use weak_imcf::conic::{limit_solution, stabilization_check, ExhaustionOptions};
use weak_imcf::profile::IsoProfile;
use weak_imcf::WarpedManifold;

fn main() -> weak_imcf::Result<()> {
    let c3 = (36.0 * std::f64::consts::PI).cbrt();
    let profile = IsoProfile::power(c3, 2.0 / 3.0)?;
    let options = ExhaustionOptions::default();
    for (name, m) in [("dip", WarpedManifold::dip(3, 60.0)?), ("log_cylinder", WarpedManifold::log_cylinder(3, 60.0)?)] {
        let a0 = m.sphere_area(1.0)?;
        let area_cap = std::f64::consts::E * a0;
        let report = stabilization_check(&m, 1.0, &profile, area_cap, &[4.0, 8.0, 16.0, 32.0, 48.0], &options)?;
        println!("{name}: T~ = {:.6}, R2 = {:.4}, k1 = {:?}", report.t_tilde, report.r2, report.k1);
        for e in &report.entries {
            println!(
                "  k = {:>4}  T_k = {:.6}  above k1 = {:<5}  diff = {:?}  certified = {}",
                e.k, e.t_k, e.above_k1, e.diff_with_prev, e.certified
            );
        }
        if let Some(c) = &report.certification {
            println!("  certification worst violation {:.3e}", c.worst_violation);
        }
        println!("  stabilization pass = {}", report.pass);
        let limit = limit_solution(&m, 1.0, &profile, &[0.5, 1.0], &options)?;
        println!("  limit vs direct sup-norm {:.3e}, pass = {}", limit.direct_diff, limit.pass);
    }
    Ok(())
}
