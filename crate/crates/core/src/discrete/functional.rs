//! Perimeter and `J_u^K(E) = |dE cap K| - int_{E cap K} |grad u|` on a cell
//! complex, exact minimization by minimum cut, and weak-solution certification.

use serde::{Deserialize, Serialize};

use super::complex::{CellComplex, RegionSet};
use super::maxflow::FlowGraph;
use crate::error::{Error, Result};

/// Which functional a minimization uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Energy {
    /// `J_u^K` with the complex's density.
    J,
    /// Perimeter inside `K` only (density ignored).
    Perimeter,
}

/// Which of the (lattice of) minimizers to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremal {
    #[default]
    MinimalVolume,
    MaximalVolume,
}

fn inside(set: &RegionSet, cell: Option<usize>) -> bool {
    cell.is_some_and(|c| set.contains(c))
}

/// Total weight of interfaces with exactly one side in `e`; the exterior is outside.
pub fn perimeter(c: &CellComplex, e: &RegionSet) -> f64 {
    c.interfaces()
        .iter()
        .filter(|f| e.contains(f.a) != inside(e, f.b))
        .map(|f| f.weight)
        .sum()
}

/// Cut weight over interfaces touching `k`.
pub fn perimeter_in(c: &CellComplex, e: &RegionSet, k: &RegionSet) -> f64 {
    c.interfaces()
        .iter()
        .filter(|f| (k.contains(f.a) || inside(k, f.b)) && e.contains(f.a) != inside(e, f.b))
        .map(|f| f.weight)
        .sum()
}

pub fn j_functional(c: &CellComplex, e: &RegionSet, k: &RegionSet) -> f64 {
    let bulk: f64 = e
        .iter()
        .filter(|&i| k.contains(i))
        .map(|i| c.volumes()[i] * c.density()[i])
        .sum();
    perimeter_in(c, e, k) - bulk
}

pub fn energy(c: &CellComplex, e: &RegionSet, k: &RegionSet, kind: Energy) -> f64 {
    match kind {
        Energy::J => j_functional(c, e, k),
        Energy::Perimeter => perimeter_in(c, e, k),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Minimizer {
    pub set: RegionSet,
    pub value: f64,
}

/// Cells whose membership is not fixed by the obstacles: in `K`, in `outer`, not in `inner`.
pub fn free_cells(k: &RegionSet, inner: &RegionSet, outer: &RegionSet) -> Vec<usize> {
    (0..k.len()).filter(|&i| k.contains(i) && outer.contains(i) && !inner.contains(i)).collect()
}

fn check_obstacles(c: &CellComplex, k: &RegionSet, inner: &RegionSet, outer: &RegionSet) -> Result<()> {
    let n = c.len();
    if k.len() != n || inner.len() != n || outer.len() != n {
        return Err(Error::InvalidInput("region sets must match the complex".into()));
    }
    if !inner.is_subset(outer) {
        return Err(Error::InfeasibleObstacles);
    }
    Ok(())
}

/// Minimizes `energy` over `inner ⊆ E ⊆ outer` with `E Δ inner ⊆ K`.
///
/// Radial complexes are paths and are solved exactly by dynamic programming
/// in linear time; everything else goes through a minimum cut.
pub fn minimize(
    c: &CellComplex,
    k: &RegionSet,
    inner: &RegionSet,
    outer: &RegionSet,
    kind: Energy,
    extremal: Extremal,
) -> Result<Minimizer> {
    check_obstacles(c, k, inner, outer)?;
    match c.chain_order() {
        Some(order) => Ok(minimize_chain(c, &order, k, inner, outer, kind, extremal)),
        None => minimize_by_cut(c, k, inner, outer, kind, extremal),
    }
}

/// [`minimize`] forced through the minimum-cut solver.
pub fn minimize_by_cut(
    c: &CellComplex,
    k: &RegionSet,
    inner: &RegionSet,
    outer: &RegionSet,
    kind: Energy,
    extremal: Extremal,
) -> Result<Minimizer> {
    check_obstacles(c, k, inner, outer)?;
    let n = c.len();
    let (s, t) = (n, n + 1);
    let mut g = FlowGraph::new(n + 2);
    let inf = g.infinite_capacity();
    let free: Vec<bool> = (0..n).map(|i| k.contains(i) && outer.contains(i) && !inner.contains(i)).collect();
    for i in 0..n {
        if !free[i] {
            if inner.contains(i) {
                g.add_edge(s, i, inf);
            } else {
                g.add_edge(i, t, inf);
            }
        } else if kind == Energy::J {
            // being in E earns vol * density: charge its absence instead
            g.add_edge(s, i, c.volumes()[i] * c.density()[i]);
        }
    }
    for f in c.interfaces() {
        if !(k.contains(f.a) || inside(k, f.b)) {
            continue;
        }
        match f.b {
            Some(b) => g.add_undirected(f.a, b, f.weight),
            None => g.add_edge(f.a, t, f.weight),
        }
    }
    g.max_flow(s, t);
    let side = match extremal {
        Extremal::MinimalVolume => g.source_side(s),
        Extremal::MaximalVolume => g.maximal_source_side(t),
    };
    let set = RegionSet::from_fn(n, |i| side[i]);
    let value = energy(c, &set, k, kind);
    Ok(Minimizer { set, value })
}

fn minimize_chain(
    c: &CellComplex,
    order: &[usize],
    k: &RegionSet,
    inner: &RegionSet,
    outer: &RegionSet,
    kind: Energy,
    extremal: Extremal,
) -> Minimizer {
    let n = c.len();
    let faces = c.interfaces();
    let counted = |slot: usize| {
        let f = faces[order[slot]];
        if k.contains(f.a) || inside(k, f.b) {
            f.weight
        } else {
            0.0
        }
    };
    let unary = |i: usize| {
        if kind == Energy::J && k.contains(i) {
            -c.volumes()[i] * c.density()[i]
        } else {
            0.0
        }
    };
    let allowed = |i: usize, x: usize| {
        let free = k.contains(i) && outer.contains(i) && !inner.contains(i);
        free || (x == 1) == inner.contains(i)
    };
    let scale: f64 = faces.iter().map(|f| f.weight).sum::<f64>()
        + (0..n).map(|i| unary(i).abs()).sum::<f64>();
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    // (cost, volume) with ties in cost broken by volume
    let better = |a: (f64, f64), b: (f64, f64)| {
        if a.0 < b.0 - tol {
            return true;
        }
        if a.0 > b.0 + tol {
            return false;
        }
        match extremal {
            Extremal::MinimalVolume => a.1 < b.1,
            Extremal::MaximalVolume => a.1 > b.1,
        }
    };
    const NONE: (f64, f64) = (f64::INFINITY, 0.0);
    let mut best = [NONE; 2];
    let mut back = vec![[0u8; 2]; n];
    for x in 0..2 {
        if allowed(0, x) {
            let jump = if x == 1 { counted(0) } else { 0.0 };
            best[x] = (jump + unary(0) * x as f64, c.volumes()[0] * x as f64);
        }
    }
    for i in 1..n {
        let mut next = [NONE; 2];
        for x in 0..2 {
            if !allowed(i, x) {
                continue;
            }
            for y in 0..2 {
                if best[y].0.is_infinite() {
                    continue;
                }
                let jump = if x != y { counted(i) } else { 0.0 };
                let cand = (best[y].0 + jump + unary(i) * x as f64, best[y].1 + c.volumes()[i] * x as f64);
                if next[x].0.is_infinite() || better(cand, next[x]) {
                    next[x] = cand;
                    back[i][x] = y as u8;
                }
            }
        }
        best = next;
    }
    let close = |x: usize| (best[x].0 + if x == 1 { counted(n) } else { 0.0 }, best[x].1);
    let mut x = if best[0].0.is_infinite() {
        1
    } else if best[1].0.is_infinite() || !better(close(1), close(0)) {
        0
    } else {
        1
    };
    let mut members = vec![false; n];
    for i in (0..n).rev() {
        members[i] = x == 1;
        x = back[i][x] as usize;
    }
    let set = RegionSet::from_members(members);
    let value = energy(c, &set, k, kind);
    Minimizer { set, value }
}

pub fn minimize_j(c: &CellComplex, k: &RegionSet, inner: &RegionSet, outer: &RegionSet) -> Result<Minimizer> {
    minimize(c, k, inner, outer, Energy::J, Extremal::MinimalVolume)
}

pub fn minimize_j_maximal(c: &CellComplex, k: &RegionSet, inner: &RegionSet, outer: &RegionSet) -> Result<Minimizer> {
    minimize(c, k, inner, outer, Energy::J, Extremal::MaximalVolume)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeVerdict {
    pub t: f64,
    pub j_sublevel: f64,
    pub j_minimum: f64,
    pub violation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub tolerance: f64,
    pub verdicts: Vec<TimeVerdict>,
    pub worst_violation: f64,
    pub pass: bool,
}

impl CertificationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Checks `J(E_t) <= min { J(E) : E Δ E_t ⊆ K } + tol` for each time, with
/// `E_t = {cells with u < t}`.
pub fn certify_weak_solution(
    c: &CellComplex,
    u: &[f64],
    times: &[f64],
    k: &RegionSet,
    tolerance: f64,
) -> Result<CertificationReport> {
    if u.len() != c.len() {
        return Err(Error::InvalidInput("one u value per cell required".into()));
    }
    let mut verdicts = Vec::with_capacity(times.len());
    for &t in times {
        let et = RegionSet::from_fn(c.len(), |i| u[i] < t);
        let inner = et.difference(k);
        let outer = et.union(k);
        let best = minimize_j(c, k, &inner, &outer)?;
        let j_sublevel = j_functional(c, &et, k);
        let violation = j_sublevel - best.value;
        verdicts.push(TimeVerdict {
            t,
            j_sublevel,
            j_minimum: best.value,
            violation,
            pass: violation <= tolerance,
        });
    }
    let worst_violation = verdicts.iter().map(|v| v.violation).fold(f64::NEG_INFINITY, f64::max);
    Ok(CertificationReport {
        tolerance,
        pass: verdicts.iter().all(|v| v.pass),
        worst_violation,
        verdicts,
    })
}

/// `P(E) + P(F) - P(E ∩ F) - P(E ∪ F)`, nonnegative for cut functions.
pub fn submodularity_check(c: &CellComplex, e: &RegionSet, f: &RegionSet) -> f64 {
    perimeter(c, e) + perimeter(c, f) - perimeter(c, &e.intersection(f)) - perimeter(c, &e.union(f))
}

/// When `E` and `F` share no cut interface, returns
/// `(P(E ∩ F), [E-faces with both sides in F] + [F-faces with both sides in E])`.
pub fn decomposition_check(c: &CellComplex, e: &RegionSet, f: &RegionSet) -> Option<(f64, f64)> {
    let cut = |s: &RegionSet, face: &super::complex::Interface| s.contains(face.a) != inside(s, face.b);
    let within = |s: &RegionSet, face: &super::complex::Interface| s.contains(face.a) && inside(s, face.b);
    if c.interfaces().iter().any(|x| cut(e, x) && cut(f, x)) {
        return None;
    }
    let rhs: f64 = c
        .interfaces()
        .iter()
        .filter(|x| (cut(e, x) && within(f, x)) || (cut(f, x) && within(e, x)))
        .map(|x| x.weight)
        .sum();
    Some((perimeter(c, &e.intersection(f)), rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutwardVerdict {
    pub perimeter: f64,
    pub min_perimeter: f64,
    pub minimizing: bool,
    /// Volume of the largest superset attaining the minimum.
    pub maximal_minimizer_volume: f64,
    pub strictly: bool,
}

/// Compares `P(E)` with `min { P(F) : F ⊇ E }`.
///
/// `E` is strictly outward minimizing when, in addition, no superset of larger
/// volume attains the minimum. Only faces carrying positive weight or cells of
/// positive volume count as "larger".
pub fn outward_minimizing_check(c: &CellComplex, e: &RegionSet, tolerance: f64) -> Result<OutwardVerdict> {
    let all = RegionSet::full(c.len());
    let best = minimize(c, &all, e, &all, Energy::Perimeter, Extremal::MaximalVolume)?;
    let p = perimeter(c, e);
    let minimizing = p <= best.value + tolerance;
    let extra = best.set.volume(c) - e.volume(c);
    let strictly = minimizing && (best.value < p - tolerance || extra <= tolerance * e.volume(c).max(1.0));
    Ok(OutwardVerdict {
        perimeter: p,
        min_perimeter: best.value,
        minimizing,
        maximal_minimizer_volume: best.set.volume(c),
        strictly,
    })
}
