//! Isoperimetric profiles: the strong (monotone) envelope, non-degeneracy
//! against an area cap, the head integral, and volume growth of the models.

use weak_imcf::profile::{
    ball_volume_lower_bound, check_nondegeneracy, strong_profile, superlinear_growth_check,
    symmetric_candidate_profile,
};
use weak_imcf::quadrature::adaptive_simpson;
use weak_imcf::{IsoProfile, WarpedManifold};

fn main() -> weak_imcf::Result<()> {
    let p = IsoProfile::euclidean(3)?;
    let sp = strong_profile(&p)?;
    for v in [0.1, 1.0, 10.0, 100.0] {
        println!("I({v}) = {:.6}, strong {:.6}", p.value(v), sp.value(v));
    }
    // substituting v = s^3 removes the v^(-2/3) singularity at the origin
    let direct = adaptive_simpson(&|s: f64| 3.0 * s * s / p.value(s * s * s), 1e-12, 5f64.cbrt(), 1e-12);
    println!("int_0^5 dv/I(v) = {:.10} (profile), {direct:.10} (quadrature)", p.reciprocal_integral(5.0)?);
    println!("ball volume lower bound {:.6}", ball_volume_lower_bound(&p)?);

    let dented = IsoProfile::tabulated(vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![2.0, 3.0, 1.5, 4.0, 5.0])?;
    let sp = strong_profile(&dented)?;
    println!("dented table: envelope {:?}, inverse(3.5) = {:.3}", sp.envelope(), sp.inverse(3.5)?);

    let cyl = WarpedManifold::cylinder(3, 1.0, 40.0)?;
    let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.5).collect();
    let cand = symmetric_candidate_profile(&cyl, &grid)?;
    for cap in [10.0, 20.0] {
        let r = check_nondegeneracy(&cand, cap);
        println!("cylinder, A = {cap}: liminf ~ {:.4}, non-degenerate {}", r.liminf_surrogate, r.passes());
    }

    for (name, m) in [
        ("euclidean", WarpedManifold::euclidean(3, 1e4)?),
        ("log_cylinder", WarpedManifold::log_cylinder(3, 1e4)?),
        ("cylinder", WarpedManifold::cylinder(3, 1.0, 1e4)?),
    ] {
        let g = superlinear_growth_check(&m, 2.0, 1.05)?;
        println!("{name}: growth exponent {:.3} on {:?}, superlinear {}", g.growth_exponent, g.window, g.superlinear);
    }
    Ok(())
}
