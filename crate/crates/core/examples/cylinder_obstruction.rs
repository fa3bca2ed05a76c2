//! The round cylinder has sphere area bounded above, so no precompact hull
//! and no proper solution exist, and the bounds degenerate.

use weak_imcf::hull::symmetric_hull;
use weak_imcf::profile::check_nondegeneracy;
use weak_imcf::{solve, IsoProfile, WarpedManifold};

fn main() -> weak_imcf::Result<()> {
    let m = WarpedManifold::cylinder(3, 1.0, 50.0)?;
    let sol = solve(&m, 1.0)?;
    println!("cylinder: T_max = {}, proper = {}", sol.t_max(), sol.is_proper());
    match sol.sublevel(0.5) {
        Ok(s) => println!("unexpected sublevel {s:?}"),
        Err(e) => println!("sublevel at t = 0.5: {e}"),
    }
    match symmetric_hull(&m, 1.0) {
        Ok(r) => println!("unexpected hull B({r})"),
        Err(e) => println!("hull: {e}"),
    }
    // the cylinder profile is constant at the cross-section area 4 pi
    let p = IsoProfile::power(4.0 * std::f64::consts::PI, 0.0)?;
    for cap in [10.0, 20.0] {
        let r = check_nondegeneracy(&p, cap);
        println!("A = {cap}: exceeds liminf {}, passes {}", r.exceeds_a, r.passes());
    }
    Ok(())
}
