//! Cell complexes carrying volume, perimeter and gradient-density weights.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::warped::WarpedManifold;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    Radial1D,
    Planar2D,
}

/// A face between cell `a` and cell `b`, or the exterior when `b` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interface {
    pub a: usize,
    pub b: Option<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellComplex {
    kind: ComplexKind,
    volumes: Vec<f64>,
    interfaces: Vec<Interface>,
    density: Vec<f64>,
    /// Radial complexes: the `cells + 1` node radii. Planar: empty.
    #[serde(default)]
    nodes: Vec<f64>,
    /// Planar complexes: `(nx, ny)`, cell `(i, j)` has index `j * nx + i`.
    #[serde(default)]
    shape: Option<(usize, usize)>,
    #[serde(skip)]
    incident: Vec<Vec<usize>>,
}

impl CellComplex {
    pub fn new(kind: ComplexKind, volumes: Vec<f64>, interfaces: Vec<Interface>) -> Result<Self> {
        let n = volumes.len();
        let c = Self {
            kind,
            density: vec![0.0; n],
            volumes,
            interfaces,
            nodes: Vec::new(),
            shape: None,
            incident: Vec::new(),
        };
        c.validated()
    }

    fn validated(mut self) -> Result<Self> {
        let n = self.volumes.len();
        if self.density.len() != n {
            return Err(Error::InvalidInput("density length differs from cell count".into()));
        }
        if self.volumes.iter().chain(&self.density).any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidInput("volumes and densities must be finite and nonnegative".into()));
        }
        for f in &self.interfaces {
            if f.a >= n || f.b.is_some_and(|b| b >= n || b == f.a) {
                return Err(Error::InvalidInput(format!("interface {f:?} references a missing cell")));
            }
            if !(f.weight >= 0.0) || !f.weight.is_finite() {
                return Err(Error::InvalidInput("interface weights must be finite and nonnegative".into()));
            }
        }
        let mut incident = vec![Vec::new(); n];
        for (k, f) in self.interfaces.iter().enumerate() {
            incident[f.a].push(k);
            if let Some(b) = f.b {
                incident[b].push(k);
            }
        }
        self.incident = incident;
        Ok(self)
    }

    /// Radial complex with cells `[nodes[i], nodes[i+1]]` of `m`.
    ///
    /// Interface weights are the sphere areas at the nodes. The innermost and
    /// outermost spheres face the exterior; the inner one has zero weight when
    /// the warp vanishes at the origin.
    pub fn radial(m: &WarpedManifold, nodes: &[f64]) -> Result<Self> {
        if nodes.len() < 2 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("radial nodes must be strictly increasing, at least two".into()));
        }
        let cells = nodes.len() - 1;
        let volumes: Vec<f64> = nodes.windows(2).map(|w| m.shell_volume(w[0], w[1])).collect::<Result<_>>()?;
        let areas: Vec<f64> = nodes.iter().map(|&r| m.sphere_area(r)).collect::<Result<_>>()?;
        let mut interfaces = Vec::with_capacity(cells + 1);
        interfaces.push(Interface { a: 0, b: None, weight: areas[0] });
        for i in 1..cells {
            interfaces.push(Interface { a: i - 1, b: Some(i), weight: areas[i] });
        }
        interfaces.push(Interface { a: cells - 1, b: None, weight: areas[cells] });
        let mut c = Self::new(ComplexKind::Radial1D, volumes, interfaces)?;
        c.nodes = nodes.to_vec();
        Ok(c)
    }

    /// Radial complex on `[lo, hi]` of the manifold's own grid.
    pub fn radial_window(m: &WarpedManifold, lo: f64, hi: f64) -> Result<Self> {
        let mut nodes = vec![lo];
        nodes.extend(m.grid().iter().copied().filter(|&r| r > lo && r < hi));
        nodes.push(hi);
        Self::radial(m, &nodes)
    }

    /// Uniform radial nodes on `[lo, hi]` with `cells` cells, plus any warp breakpoints inside.
    pub fn radial_uniform(m: &WarpedManifold, lo: f64, hi: f64, cells: usize) -> Result<Self> {
        let mut nodes: Vec<f64> = (0..=cells).map(|i| lo + (hi - lo) * i as f64 / cells as f64).collect();
        nodes.extend(m.warp().breakpoints().into_iter().filter(|&r| r > lo && r < hi));
        nodes.sort_by(f64::total_cmp);
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
        Self::radial(m, &nodes)
    }

    /// `nx` by `ny` grid with unit cell volumes and unit face weights; boundary faces face the exterior.
    pub fn planar(nx: usize, ny: usize) -> Result<Self> {
        Self::planar_weighted(nx, ny, |_| 1.0, |_, _, _| 1.0)
    }

    /// Planar grid with per-cell volumes and per-face weights supplied by closures.
    /// The face closure receives `(cell, Some(neighbor) | None, direction)`.
    pub fn planar_weighted<V, W>(nx: usize, ny: usize, mut volume: V, mut weight: W) -> Result<Self>
    where
        V: FnMut(usize) -> f64,
        W: FnMut(usize, Option<usize>, usize) -> f64,
    {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidInput("planar grid needs positive dimensions".into()));
        }
        let idx = |i: usize, j: usize| j * nx + i;
        let volumes: Vec<f64> = (0..nx * ny).map(&mut volume).collect();
        let mut interfaces = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let c = idx(i, j);
                if i + 1 < nx {
                    let n = idx(i + 1, j);
                    interfaces.push(Interface { a: c, b: Some(n), weight: weight(c, Some(n), 0) });
                }
                if j + 1 < ny {
                    let n = idx(i, j + 1);
                    interfaces.push(Interface { a: c, b: Some(n), weight: weight(c, Some(n), 1) });
                }
                if i == 0 {
                    interfaces.push(Interface { a: c, b: None, weight: weight(c, None, 2) });
                }
                if i + 1 == nx {
                    interfaces.push(Interface { a: c, b: None, weight: weight(c, None, 0) });
                }
                if j == 0 {
                    interfaces.push(Interface { a: c, b: None, weight: weight(c, None, 3) });
                }
                if j + 1 == ny {
                    interfaces.push(Interface { a: c, b: None, weight: weight(c, None, 1) });
                }
            }
        }
        let mut c = Self::new(ComplexKind::Planar2D, volumes, interfaces)?;
        c.shape = Some((nx, ny));
        Ok(c)
    }

    /// Planar grid with dyadic random volumes, weights and densities (multiples of 1/1024),
    /// so that sums of a few hundred terms are exact in `f64`.
    pub fn random_planar(nx: usize, ny: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dyadic = |lo: u32, hi: u32| rng.gen_range(lo..=hi) as f64 / 1024.0;
        let volumes: Vec<f64> = (0..nx * ny).map(|_| dyadic(256, 1024)).collect();
        let mut c = Self::planar_weighted(nx, ny, |k| volumes[k], |_, _, _| 0.0)?;
        for f in c.interfaces.iter_mut() {
            f.weight = dyadic(0, 1024);
        }
        let density: Vec<f64> = (0..nx * ny).map(|_| dyadic(0, 2048)).collect();
        c.density = density;
        Ok(c)
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.volumes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volumes.is_empty()
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn interfaces(&self) -> &[Interface] {
        &self.interfaces
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn shape(&self) -> Option<(usize, usize)> {
        self.shape
    }

    /// For a radial complex laid out as a path, the interface indices
    /// `[exterior-0, 0-1, ..., (n-2)-(n-1), (n-1)-exterior]`.
    pub fn chain_order(&self) -> Option<Vec<usize>> {
        if self.kind != ComplexKind::Radial1D || self.interfaces.len() != self.len() + 1 {
            return None;
        }
        let n = self.len();
        let mut order = vec![usize::MAX; n + 1];
        for (k, f) in self.interfaces.iter().enumerate() {
            let slot = match f.b {
                None if f.a == 0 && order[0] == usize::MAX => 0,
                None if f.a == n - 1 => n,
                Some(b) if b == f.a + 1 => b,
                Some(b) if f.a == b + 1 => f.a,
                _ => return None,
            };
            if order[slot] != usize::MAX {
                return None;
            }
            order[slot] = k;
        }
        Some(order)
    }

    /// Interfaces touching `cell`.
    pub fn incident(&self, cell: usize) -> &[usize] {
        &self.incident[cell]
    }

    pub fn with_density(mut self, density: Vec<f64>) -> Result<Self> {
        self.density = density;
        self.validated()
    }

    /// Radial density `|u(r_{i+1}) - u(r_i)| / (r_{i+1} - r_i)` from node values.
    pub fn with_density_from_nodes(self, u_nodes: &[f64]) -> Result<Self> {
        if self.kind != ComplexKind::Radial1D || u_nodes.len() != self.nodes.len() {
            return Err(Error::InvalidInput("node values need a radial complex with matching nodes".into()));
        }
        let density = self
            .nodes
            .windows(2)
            .zip(u_nodes.windows(2))
            .map(|(r, u)| (u[1] - u[0]).abs() / (r[1] - r[0]))
            .collect();
        self.with_density(density)
    }

    /// Planar density from per-cell values: central differences inside,
    /// one-sided at the grid edge, unit spacing.
    pub fn with_density_from_cells(self, u: &[f64]) -> Result<Self> {
        let Some((nx, ny)) = self.shape else {
            return Err(Error::InvalidInput("cell-value gradients need a planar complex".into()));
        };
        if u.len() != nx * ny {
            return Err(Error::InvalidInput("one value per cell required".into()));
        }
        let at = |i: usize, j: usize| u[j * nx + i];
        let diff = |lo: f64, hi: f64, span: usize| if span == 0 { 0.0 } else { (hi - lo) / span as f64 };
        let mut density = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let (il, ir) = (i.saturating_sub(1), (i + 1).min(nx - 1));
                let (jl, jr) = (j.saturating_sub(1), (j + 1).min(ny - 1));
                let gx = diff(at(il, j), at(ir, j), ir - il);
                let gy = diff(at(i, jl), at(i, jr), jr - jl);
                density.push(gx.hypot(gy));
            }
        }
        self.with_density(density)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.validated()
    }
}

/// Membership flag per cell of one complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionSet {
    members: Vec<bool>,
}

impl RegionSet {
    pub fn empty(n: usize) -> Self {
        Self { members: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        Self { members: vec![true; n] }
    }

    pub fn from_fn<F: FnMut(usize) -> bool>(n: usize, f: F) -> Self {
        Self { members: (0..n).map(f).collect() }
    }

    pub fn from_members(members: Vec<bool>) -> Self {
        Self { members }
    }

    /// Cells `[0, k)` of a radial complex, i.e. the ball bounded by node `k`.
    pub fn prefix(n: usize, k: usize) -> Self {
        Self::from_fn(n, |i| i < k)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.members[cell]
    }

    pub fn set(&mut self, cell: usize, value: bool) {
        self.members[cell] = value;
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_fn(self.len(), |i| self.members[i] || other.members[i])
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::from_fn(self.len(), |i| self.members[i] && other.members[i])
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self::from_fn(self.len(), |i| self.members[i] && !other.members[i])
    }

    pub fn complement(&self) -> Self {
        Self::from_fn(self.len(), |i| !self.members[i])
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    pub fn volume(&self, c: &CellComplex) -> f64 {
        self.iter().map(|i| c.volumes()[i]).sum()
    }

    /// Largest `k` with cells `[0, k)` all members (the outer node of a radial ball).
    pub fn prefix_len(&self) -> usize {
        self.members.iter().take_while(|&&b| b).count()
    }
}
