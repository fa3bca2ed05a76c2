//! Discrete variational layer: cell complexes, the `J` functional, minimum
//! cuts and brute-force oracles.

pub mod complex;
pub mod enumerate;
pub mod functional;
pub mod maxflow;

pub use complex::{CellComplex, ComplexKind, Interface, RegionSet};
pub use enumerate::{exhaustive_minimum, ExhaustiveResult};
pub use functional::{
    certify_weak_solution, decomposition_check, energy, j_functional, minimize, minimize_by_cut, minimize_j, minimize_j_maximal,
    outward_minimizing_check, perimeter, perimeter_in, submodularity_check, CertificationReport, Energy, Extremal,
    Minimizer, OutwardVerdict, TimeVerdict,
};

use crate::error::{Error, Result};
use crate::symmetric::SymmetricSolution;
use crate::warped::WarpedManifold;

/// Value assigned to cells inside the initial ball, which lie in every sublevel set.
pub const INITIAL_SET_VALUE: f64 = -1.0;

/// A radial arrival-time function restricted to a complex `[0, hi]`.
///
/// Cells inside `r0` form the initial set: their value is
/// [`INITIAL_SET_VALUE`] and their density zero. Every other cell takes the
/// value of `u` at its outer node and density `|Δu| / h`. The window `K`
/// is the set of cells outside `r0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDiscretization {
    pub complex: CellComplex,
    pub cell_values: Vec<f64>,
    pub window: RegionSet,
    pub r0: f64,
}

impl RadialDiscretization {
    /// `nodes` must contain `r0` and start at 0.
    pub fn new<U: Fn(f64) -> Result<f64>>(m: &WarpedManifold, r0: f64, nodes: &[f64], u: U) -> Result<Self> {
        if nodes.first() != Some(&0.0) || !nodes.contains(&r0) {
            return Err(Error::InvalidInput("nodes must start at 0 and contain r0".into()));
        }
        let u_nodes: Vec<f64> = nodes
            .iter()
            .map(|&r| if r < r0 { Ok(INITIAL_SET_VALUE) } else { u(r) })
            .collect::<Result<_>>()?;
        let density: Vec<f64> = nodes
            .windows(2)
            .zip(u_nodes.windows(2))
            .map(|(r, v)| if r[1] <= r0 { 0.0 } else { (v[1] - v[0]).abs() / (r[1] - r[0]) })
            .collect();
        let cell_values: Vec<f64> = nodes
            .windows(2)
            .zip(&u_nodes[1..])
            .map(|(r, &v)| if r[1] <= r0 { INITIAL_SET_VALUE } else { v })
            .collect();
        let complex = CellComplex::radial(m, nodes)?.with_density(density)?;
        let window = RegionSet::from_fn(complex.len(), |i| nodes[i] >= r0);
        Ok(Self { complex, cell_values, window, r0 })
    }

    /// Discretizes `sol` on `[0, hi]`: `inner_cells` uniform cells inside `r0`,
    /// `cells` uniform cells on `[r0, hi]`, plus the warp breakpoints.
    pub fn from_solution(sol: &SymmetricSolution, hi: f64, cells: usize, inner_cells: usize) -> Result<Self> {
        let r0 = sol.r0();
        let nodes = radial_nodes(sol.manifold(), r0, hi, cells, inner_cells)?;
        Self::new(sol.manifold(), r0, &nodes, |r| sol.u_at(r))
    }

    /// Sublevel set `{u < t}` as cells.
    pub fn sublevel(&self, t: f64) -> RegionSet {
        RegionSet::from_fn(self.cell_values.len(), |i| self.cell_values[i] < t)
    }

    pub fn certify(&self, times: &[f64], tolerance: f64) -> Result<CertificationReport> {
        certify_weak_solution(&self.complex, &self.cell_values, times, &self.window, tolerance)
    }
}

/// Nodes `0 = x_0 < ... < r0 < ... < hi`, uniform on each side, plus warp breakpoints.
pub fn radial_nodes(m: &WarpedManifold, r0: f64, hi: f64, cells: usize, inner_cells: usize) -> Result<Vec<f64>> {
    if !(r0 > 0.0 && hi > r0 && hi <= m.r_max()) || cells == 0 || inner_cells == 0 {
        return Err(Error::InvalidInput(format!("bad radial window 0 < {r0} < {hi} <= {}", m.r_max())));
    }
    let mut nodes: Vec<f64> = (0..inner_cells).map(|i| r0 * i as f64 / inner_cells as f64).collect();
    nodes.extend((0..=cells).map(|i| r0 + (hi - r0) * i as f64 / cells as f64));
    nodes.extend(m.warp().breakpoints().into_iter().filter(|&r| r > 0.0 && r < hi));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    // keep r0 and hi exact after dedup
    for target in [r0, hi] {
        if let Some(x) = nodes.iter_mut().find(|x| (**x - target).abs() <= 1e-12 * target.max(1.0)) {
            *x = target;
        }
    }
    Ok(nodes)
}
