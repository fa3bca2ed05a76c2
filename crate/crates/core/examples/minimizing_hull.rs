//! Strictly outward minimizing hulls: the closed form for balls against the
//! min-cut hull on a radial complex, plus the envelope characterization on a
//! small planar complex.

use weak_imcf::discrete::{CellComplex, RegionSet};
use weak_imcf::hull::{envelope_equivalence_check, minimizing_hull_on, symmetric_hull};
use weak_imcf::{IsoProfile, WarpedManifold};

fn main() -> weak_imcf::Result<()> {
    let p = IsoProfile::euclidean(3)?;
    for (name, m) in [
        ("euclidean", WarpedManifold::euclidean(3, 20.0)?),
        ("dip", WarpedManifold::dip(3, 20.0)?),
        ("two_dips", WarpedManifold::two_dips(3, 20.0)?),
    ] {
        for r0 in [1.0, 3.0] {
            let exact = symmetric_hull(&m, r0)?;
            let area = m.sphere_area(r0)?;
            match minimizing_hull_on(&m, r0, &p, 1e3 * area, 4000) {
                Ok(h) => println!(
                    "{name}, r0 = {r0}: hull B({exact:.4}) exact, B({:.4}) by min-cut, bound {:.3}, perimeter {:.4}",
                    h.hull_radius, h.bound, h.perimeter
                ),
                Err(e) => println!("{name}, r0 = {r0}: hull B({exact:.4}) exact, min-cut: {e}"),
            }
        }
    }

    let c = CellComplex::random_planar(3, 3, 7)?;
    let omega = RegionSet::from_fn(c.len(), |i| i == 0 || i == 8);
    let v = envelope_equivalence_check(&c, &omega, 0.0)?;
    println!(
        "planar 3x3: {} strictly minimizing supersets, envelope equals maximal solution: {}",
        v.strictly_minimizing_supersets, v.equal
    );
    Ok(())
}
