//! Least-area problems with obstacles and strictly outward minimizing hulls.

use serde::{Deserialize, Serialize};

use crate::bounds::barrier_radius;
use crate::discrete::{
    enumerate::MAX_FREE_CELLS, minimize, perimeter, CellComplex, ComplexKind, Energy, Extremal, RegionSet,
};
use crate::error::{Error, Result};
use crate::profile::{check_nondegeneracy, IsoProfile};
use crate::symmetric::solve;
use crate::warped::WarpedManifold;

/// Least-perimeter set between the obstacles; the minimal-volume representative.
pub fn least_area_outside(c: &CellComplex, omega: &RegionSet, outer: &RegionSet) -> Result<RegionSet> {
    let all = RegionSet::full(c.len());
    Ok(minimize(c, &all, omega, outer, Energy::Perimeter, Extremal::MinimalVolume)?.set)
}

/// The maximal-volume least-perimeter set between the obstacles. It contains every other minimizer.
pub fn maximal_volume_solution(c: &CellComplex, omega: &RegionSet, outer: &RegionSet) -> Result<RegionSet> {
    let all = RegionSet::full(c.len());
    Ok(minimize(c, &all, omega, outer, Energy::Perimeter, Extremal::MaximalVolume)?.set)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullResult {
    pub set: RegionSet,
    pub perimeter: f64,
    /// The a-priori radius `R`.
    pub bound: f64,
    /// Radius of the outer obstacle actually used, `min(R + 1, end of complex)`.
    pub obstacle_radius: f64,
    /// Outer radius of the hull.
    pub hull_radius: f64,
}

/// Outermost node radius touched by `set` on a radial complex.
pub fn radial_extent(c: &CellComplex, set: &RegionSet) -> f64 {
    set.iter().last().map_or(c.nodes()[0], |i| c.nodes()[i + 1])
}

/// Hull of `omega ⊆ B(r)` on a radial complex: the maximal-volume least-area
/// set inside `B(R + 1)`, which must then lie in `B(R)`.
pub fn minimizing_hull(
    c: &CellComplex,
    omega: &RegionSet,
    profile: &IsoProfile,
    area_cap: f64,
    r: f64,
) -> Result<HullResult> {
    if c.kind() != ComplexKind::Radial1D {
        return Err(Error::InvalidInput("minimizing hull needs radii: use a radial complex".into()));
    }
    let a = perimeter(c, omega);
    if a > area_cap * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!("perimeter {a} of the initial set exceeds A = {area_cap}")));
    }
    if radial_extent(c, omega) > r * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!("initial set is not inside B({r})")));
    }
    let nondeg = check_nondegeneracy(profile, area_cap);
    if !nondeg.exceeds_a {
        return Err(Error::NonDegeneracyExceeded { area: area_cap, liminf: nondeg.liminf_surrogate });
    }
    let bound = barrier_radius(profile, r, a)?;
    let nodes = c.nodes();
    let obstacle_radius = (bound + 1.0).min(*nodes.last().unwrap());
    let outer = RegionSet::from_fn(c.len(), |i| nodes[i + 1] <= obstacle_radius * (1.0 + 1e-12)).union(omega);
    let set = maximal_volume_solution(c, omega, &outer)?;
    let hull_radius = radial_extent(c, &set);
    if hull_radius > bound * (1.0 + 1e-12) {
        return Err(Error::ContainmentViolated { bound, radius: hull_radius });
    }
    Ok(HullResult { perimeter: perimeter(c, &set), set, bound, obstacle_radius, hull_radius })
}

/// [`minimizing_hull`] of `{r < r0}` on a radial complex over `[0, r_max]` with `cells` uniform cells.
pub fn minimizing_hull_on(
    m: &WarpedManifold,
    r0: f64,
    profile: &IsoProfile,
    area_cap: f64,
    cells: usize,
) -> Result<HullResult> {
    let c = CellComplex::radial_uniform(m, 0.0, m.r_max(), cells)?;
    let k = c.nodes().iter().position(|&x| (x - r0).abs() <= 1e-12 * r0.max(1.0)).ok_or_else(|| {
        Error::InvalidInput(format!("r0 = {r0} is not a node of the {cells}-cell complex"))
    })?;
    minimizing_hull(&c, &RegionSet::prefix(c.len(), k), profile, area_cap, r0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeVerdict {
    /// Maximal-volume least-area solution.
    pub maximal_solution: RegionSet,
    /// Least-volume strictly outward minimizing superset, found by enumeration.
    pub least_envelope: Option<RegionSet>,
    pub strictly_minimizing_supersets: usize,
    pub equal: bool,
}

/// Enumerates every superset of `omega` and compares the least-volume strictly
/// outward minimizing one with the maximal-volume least-area solution.
pub fn envelope_equivalence_check(c: &CellComplex, omega: &RegionSet, tolerance: f64) -> Result<EnvelopeVerdict> {
    let all = RegionSet::full(c.len());
    let e1 = maximal_volume_solution(c, omega, &all)?;
    let free: Vec<usize> = (0..c.len()).filter(|&i| !omega.contains(i)).collect();
    let f = free.len();
    if f > MAX_FREE_CELLS.min(20) {
        return Err(Error::InvalidInput(format!("{f} free cells are too many to enumerate")));
    }
    let size = 1usize << f;
    // perimeter of every superset, indexed by the mask of added cells, via Gray code
    let mut per = vec![0.0; size];
    let mut set = omega.clone();
    let mut value = perimeter(c, &set);
    per[0] = value;
    let mut mask = 0usize;
    for step in 1..size {
        let bit = step.trailing_zeros() as usize;
        let cell = free[bit];
        for &fi in c.incident(cell) {
            let face = c.interfaces()[fi];
            let other = if face.a == cell { face.b } else { Some(face.a) };
            let other_in = other.is_some_and(|o| set.contains(o));
            value += if set.contains(cell) != other_in { -face.weight } else { face.weight };
        }
        set.set(cell, !set.contains(cell));
        mask ^= 1 << bit;
        per[mask] = value;
    }
    // least perimeter over proper supersets of each mask
    let mut sup_min = per.clone();
    let mut proper = vec![f64::INFINITY; size];
    for m in (0..size).rev() {
        for b in 0..f {
            if m & (1 << b) == 0 {
                proper[m] = proper[m].min(sup_min[m | (1 << b)]);
            }
        }
        sup_min[m] = per[m].min(proper[m]);
    }
    let volume = |m: usize| -> f64 { (0..f).filter(|b| m & (1 << b) != 0).map(|b| c.volumes()[free[b]]).sum() };
    let mut best: Option<(usize, f64)> = None;
    let mut count = 0;
    for m in 0..size {
        if proper[m] > per[m] + tolerance {
            count += 1;
            let v = volume(m);
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((m, v));
            }
        }
    }
    let least_envelope = best.map(|(m, _)| {
        let mut s = omega.clone();
        for b in 0..f {
            if m & (1 << b) != 0 {
                s.set(free[b], true);
            }
        }
        s
    });
    let equal = least_envelope.as_ref() == Some(&e1);
    Ok(EnvelopeVerdict { maximal_solution: e1, least_envelope, strictly_minimizing_supersets: count, equal })
}

/// Outer radius of the hull of `{r < r0}`: `sup { s : inf_{[s, inf)} f <= inf_{[r0, inf)} f }`.
pub fn symmetric_hull(m: &WarpedManifold, r0: f64) -> Result<f64> {
    let sol = solve(m, r0)?;
    match sol.sublevel(0.0) {
        Ok((_, outer)) => Ok(outer),
        Err(Error::NotPrecompact { .. }) => Err(Error::NoPrecompactHull {
            liminf: m.tail_infimum(sol.options().tail_fraction),
            level: sol.base_level(),
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::{exhaustive_minimum, outward_minimizing_check};
    use crate::profile::symmetric_candidate_profile;
    use std::f64::consts::PI;

    fn radial(m: &WarpedManifold, hi: f64, cells: usize) -> CellComplex {
        CellComplex::radial_uniform(m, 0.0, hi, cells).unwrap()
    }

    fn node(c: &CellComplex, r: f64) -> usize {
        c.nodes().iter().position(|&x| (x - r).abs() < 1e-12).unwrap()
    }

    #[test]
    fn least_area_examples() {
        let e = WarpedManifold::euclidean(3, 10.0).unwrap();
        let c = radial(&e, 6.0, 60);
        let n = c.len();
        let omega = RegionSet::prefix(n, node(&c, 1.0));
        let outer = RegionSet::prefix(n, node(&c, 5.0));
        assert_eq!(least_area_outside(&c, &omega, &outer).unwrap(), omega);
        assert_eq!(maximal_volume_solution(&c, &omega, &outer).unwrap(), omega);

        let d = WarpedManifold::dip(3, 10.0).unwrap();
        let c = radial(&d, 4.0, 40);
        let n = c.len();
        let omega = RegionSet::prefix(n, node(&c, 1.0));
        let outer = RegionSet::prefix(n, node(&c, 3.0));
        let least = least_area_outside(&c, &omega, &outer).unwrap();
        let max = maximal_volume_solution(&c, &omega, &outer).unwrap();
        assert_eq!(least, omega);
        assert_eq!(max, RegionSet::prefix(n, node(&c, 2.0)));
        assert!((perimeter(&c, &max) - d.sphere_area(1.0).unwrap()).abs() < 1e-12);

        let cyl = WarpedManifold::cylinder(3, 1.0, 12.0).unwrap();
        let c = radial(&cyl, 10.0, 40);
        let n = c.len();
        let omega = RegionSet::prefix(n, node(&c, 1.0));
        let all = RegionSet::full(n);
        assert_eq!(least_area_outside(&c, &omega, &all).unwrap(), omega);
        assert_eq!(maximal_volume_solution(&c, &omega, &all).unwrap(), all);
    }

    #[test]
    fn minimizers_are_closed_under_union() {
        let d = WarpedManifold::two_dips(3, 10.0).unwrap();
        let c = CellComplex::radial(&d, &[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0]).unwrap();
        let n = c.len();
        let omega = RegionSet::prefix(n, 2);
        let outer = RegionSet::prefix(n, 10);
        let all = RegionSet::full(n);
        let r = exhaustive_minimum(&c, &all, &omega, &outer, Energy::Perimeter, 1e-9).unwrap();
        assert!(r.minimizers.len() >= 2);
        let max = maximal_volume_solution(&c, &omega, &outer).unwrap();
        for a in &r.minimizers {
            assert!(a.is_subset(&max));
            for b in &r.minimizers {
                let u = a.union(b);
                assert!((perimeter(&c, &u) - r.value).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn hull_examples() {
        let e = WarpedManifold::euclidean(3, 30.0).unwrap();
        let c3 = (36.0 * PI).powf(1.0 / 3.0);
        let p = IsoProfile::power(c3, 2.0 / 3.0).unwrap();
        let h = minimizing_hull_on(&e, 1.0, &p, 100.0, 300).unwrap();
        assert_eq!(h.hull_radius, 1.0);
        assert!(h.bound > 1.0);

        let d = WarpedManifold::dip(3, 10.0).unwrap();
        let grid: Vec<f64> = (0..=40).map(|i| 0.25 * i as f64).collect();
        let cand = symmetric_candidate_profile(&d, &grid).unwrap();
        let h = minimizing_hull_on(&d, 1.0, &cand, 20.0, 200).unwrap();
        assert_eq!(h.hull_radius, 2.0);
        assert!(h.hull_radius <= h.bound);

        // idempotence
        let c = CellComplex::radial_uniform(&d, 0.0, 10.0, 200).unwrap();
        let again = minimizing_hull(&c, &h.set, &cand, 20.0, h.hull_radius).unwrap();
        assert_eq!(again.set, h.set);
        assert!(outward_minimizing_check(&c, &h.set, 1e-12).unwrap().strictly);
    }

    #[test]
    fn hull_errors() {
        let e = WarpedManifold::euclidean(3, 30.0).unwrap();
        let flat = IsoProfile::power(1.0, 0.0).unwrap();
        assert!(matches!(
            minimizing_hull_on(&e, 1.0, &flat, 100.0, 300),
            Err(Error::NonDegeneracyExceeded { .. })
        ));
        // the hull of B(1) is B(2.5), past r + 1. A profile far above the true
        // one puts the barrier near r + 1, so the hull escapes it.
        let w = crate::warped::SampledWarp::new(vec![0.0, 1.0, 1.5, 2.5, 10.0], vec![0.0, 1.0, 1.5, 0.9, 7.0]).unwrap();
        let bump = WarpedManifold::new(3, crate::warped::Warp::Sampled(w), 10.0).unwrap();
        let huge = IsoProfile::power(1e4, 2.0 / 3.0).unwrap();
        match minimizing_hull_on(&bump, 1.0, &huge, 100.0, 200) {
            Err(Error::ContainmentViolated { bound, radius }) => {
                assert!(bound < 2.01 && radius == 2.5);
            }
            other => panic!("expected containment violation, got {other:?}"),
        }
        let grid: Vec<f64> = (0..=40).map(|i| 0.25 * i as f64).collect();
        let cand = symmetric_candidate_profile(&bump, &grid).unwrap();
        assert_eq!(minimizing_hull_on(&bump, 1.0, &cand, 20.0, 200).unwrap().hull_radius, 2.5);
    }

    #[test]
    fn envelope_equivalence_examples() {
        let e = WarpedManifold::euclidean(3, 10.0).unwrap();
        let c = radial(&e, 3.0, 12);
        let omega = RegionSet::prefix(c.len(), 4);
        let v = envelope_equivalence_check(&c, &omega, 1e-9).unwrap();
        assert!(v.equal && v.maximal_solution == omega);

        let d = WarpedManifold::dip(3, 10.0).unwrap();
        let c = CellComplex::radial(&d, &[0.0, 0.5, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 4.0]).unwrap();
        let omega = RegionSet::prefix(c.len(), 2);
        let v = envelope_equivalence_check(&c, &omega, 1e-9).unwrap();
        assert!(v.equal, "{v:?}");
        assert_eq!(v.maximal_solution, RegionSet::prefix(c.len(), 6));

        for seed in 0..10 {
            let c = CellComplex::random_planar(3, 4, seed).unwrap();
            let omega = RegionSet::from_fn(12, |i| i == 5);
            assert!(envelope_equivalence_check(&c, &omega, 0.0).unwrap().equal, "seed {seed}");
        }
    }

    #[test]
    fn symmetric_hull_examples() {
        let e = WarpedManifold::euclidean(3, 10.0).unwrap();
        assert_eq!(symmetric_hull(&e, 1.0).unwrap(), 1.0);
        let d = WarpedManifold::dip(3, 10.0).unwrap();
        assert_eq!(symmetric_hull(&d, 1.0).unwrap(), 2.0);
        let c = WarpedManifold::cylinder(3, 1.0, 10.0).unwrap();
        assert!(matches!(symmetric_hull(&c, 1.0), Err(Error::NoPrecompactHull { .. })));
    }
}
