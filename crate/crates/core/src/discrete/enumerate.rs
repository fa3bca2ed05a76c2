//! Brute-force oracle: every admissible set, visited in Gray-code order so
//! that each step toggles one cell and updates the energy incrementally.

use super::complex::{CellComplex, RegionSet};
use super::functional::{energy, free_cells, Energy};
use crate::error::{Error, Result};

/// Largest number of free cells the oracle accepts.
pub const MAX_FREE_CELLS: usize = 26;

/// Cap on stored minimizers; the count beyond it is still reported.
const MAX_STORED: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveResult {
    pub value: f64,
    /// Every set attaining `value` within the tolerance (up to an internal cap).
    pub minimizers: Vec<RegionSet>,
    pub minimizer_count: u64,
    pub evaluated: u64,
}

impl ExhaustiveResult {
    pub fn minimal_volume(&self, c: &CellComplex) -> &RegionSet {
        self.extreme(c, |a, b| a < b)
    }

    pub fn maximal_volume(&self, c: &CellComplex) -> &RegionSet {
        self.extreme(c, |a, b| a > b)
    }

    fn extreme<F: Fn(f64, f64) -> bool>(&self, c: &CellComplex, better: F) -> &RegionSet {
        let mut best = &self.minimizers[0];
        for s in &self.minimizers[1..] {
            if better(s.volume(c), best.volume(c)) {
                best = s;
            }
        }
        best
    }
}

/// Minimum of `kind` over `inner ⊆ E ⊆ outer`, `E Δ inner ⊆ K`, by enumeration.
pub fn exhaustive_minimum(
    c: &CellComplex,
    k: &RegionSet,
    inner: &RegionSet,
    outer: &RegionSet,
    kind: Energy,
    tolerance: f64,
) -> Result<ExhaustiveResult> {
    if !inner.is_subset(outer) {
        return Err(Error::InfeasibleObstacles);
    }
    let free = free_cells(k, inner, outer);
    if free.len() > MAX_FREE_CELLS {
        return Err(Error::InvalidInput(format!(
            "{} free cells exceed the enumeration limit {MAX_FREE_CELLS}",
            free.len()
        )));
    }
    let mut set = inner.clone();
    let mut value = energy(c, &set, k, kind);
    let mut best = value;
    let mut minimizers = vec![set.clone()];
    let mut count = 1u64;
    let total = 1u64 << free.len();
    for step in 1..total {
        let cell = free[step.trailing_zeros() as usize];
        let adding = !set.contains(cell);
        let mut delta = 0.0;
        for &fi in c.incident(cell) {
            let face = c.interfaces()[fi];
            let other = if face.a == cell { face.b } else { Some(face.a) };
            let other_in = other.is_some_and(|o| set.contains(o));
            // before the toggle the face is cut iff membership differs
            let was_cut = set.contains(cell) != other_in;
            delta += if was_cut { -face.weight } else { face.weight };
        }
        if kind == Energy::J {
            let bulk = c.volumes()[cell] * c.density()[cell];
            delta += if adding { -bulk } else { bulk };
        }
        set.set(cell, adding);
        value += delta;
        if value < best - tolerance {
            best = value;
            minimizers.clear();
            minimizers.push(set.clone());
            count = 1;
        } else if (value - best).abs() <= tolerance {
            count += 1;
            if minimizers.len() < MAX_STORED {
                minimizers.push(set.clone());
            }
        }
    }
    Ok(ExhaustiveResult { value: best, minimizers, minimizer_count: count, evaluated: total })
}
