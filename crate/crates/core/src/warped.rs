//! Rotationally symmetric manifolds `g = dr^2 + f(r)^2 g_{S^{n-1}}`.
//!
//! A [`WarpedManifold`] couples a warp function with the dimension, an outer
//! radius of representation and a radius grid. The grid always contains the
//! breakpoints of the warp (sample radii of tabulated warps, collar marks of
//! conic blends), so every grid cell sees a smooth piece of `f`.

use std::f64::consts::PI;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Relative tolerance for volume quadrature.
pub const QUAD_TOL: f64 = 1e-12;

/// Default number of uniform grid cells for closed-form warps.
pub const DEFAULT_CELLS: usize = 2000;

/// Piecewise-linear warp on a strictly increasing radius grid starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledWarp {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl SampledWarp {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() < 2 || radii.len() != values.len() {
            return Err(Error::InvalidInput(
                "sampled warp needs at least two (r, f) pairs of equal length".into(),
            ));
        }
        if radii[0] != 0.0 {
            return Err(Error::InvalidInput("sampled warp grid must start at r = 0".into()));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("sampled warp radii must be strictly increasing".into()));
        }
        if values[0] < 0.0 || !values[0].is_finite() {
            return Err(Error::NonPositiveWarp { radius: 0.0, value: values[0] });
        }
        for (&r, &f) in radii.iter().zip(&values).skip(1) {
            if !(f > 0.0) || !f.is_finite() {
                return Err(Error::NonPositiveWarp { radius: r, value: f });
            }
        }
        Ok(Self { radii, values })
    }

    /// Reads a two-column `r,f` CSV; a non-numeric first row is treated as a header.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let (radii, values) = read_two_columns(reader)?;
        Self::new(radii, values)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn last_radius(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    fn cell_of(&self, r: f64) -> usize {
        // index i with radii[i] <= r < radii[i+1], clamped to the last cell
        let i = self.radii.partition_point(|&x| x <= r);
        i.saturating_sub(1).min(self.radii.len() - 2)
    }

    fn value(&self, r: f64) -> f64 {
        let i = self.cell_of(r);
        let (r0, r1) = (self.radii[i], self.radii[i + 1]);
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        if r == r0 {
            return f0;
        }
        if r == r1 {
            return f1;
        }
        f0 + (f1 - f0) * (r - r0) / (r1 - r0)
    }

    fn slopes(&self, r: f64) -> (f64, f64) {
        let slope = |i: usize| {
            (self.values[i + 1] - self.values[i]) / (self.radii[i + 1] - self.radii[i])
        };
        let last = self.radii.len() - 2;
        match self.radii.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(0) => (slope(0), slope(0)),
            Ok(i) if i > last => (slope(last), slope(last)),
            Ok(i) => (slope(i - 1), slope(i)),
            Err(_) => {
                let s = slope(self.cell_of(r));
                (s, s)
            }
        }
    }

    fn min_on(&self, a: f64, b: f64) -> f64 {
        let mut m = self.value(a).min(self.value(b));
        let lo = self.radii.partition_point(|&x| x <= a);
        let hi = self.radii.partition_point(|&x| x < b);
        for &v in &self.values[lo..hi.max(lo)] {
            m = m.min(v);
        }
        m
    }
}

pub(crate) fn read_two_columns<R: Read>(reader: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() < 2 {
            return Err(Error::Parse(format!("row {} has fewer than two columns", line + 1)));
        }
        let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
        match parsed {
            (Ok(x), Ok(y)) => {
                xs.push(x);
                ys.push(y);
            }
            _ if line == 0 => continue,
            _ => return Err(Error::Parse(format!("row {} is not numeric", line + 1))),
        }
    }
    Ok((xs, ys))
}

/// Smooth cutoff: 1 on `[0, 1/2]`, 0 on `[3/4, inf)`.
pub fn cutoff(x: f64) -> f64 {
    fn psi(y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            (-1.0 / y).exp()
        }
    }
    let a = psi(0.75 - x);
    let b = psi(x - 0.5);
    if a + b == 0.0 {
        return if x < 0.625 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

/// The warp function `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warp {
    /// `f(r) = r`, flat space.
    Euclidean,
    /// `f(r) = c`, a cylinder with a boundary sphere at `r = 0`.
    Cylinder { c: f64 },
    /// `f(r) = log(2 + r^2)`.
    LogCylinder,
    /// Piecewise linear samples.
    Sampled(SampledWarp),
    /// Base warp up to `boundary`, then with `x = (r - boundary) / delta` and the
    /// cutoff `eta(x)`: `f_k^2 = eta (1 + x^2) f^2 + (1 - eta) C x^2 f(boundary + delta)^2`,
    /// a cone for `x >= 3/4`.
    Conic {
        base: Box<Warp>,
        boundary: f64,
        delta: f64,
        slope_constant: f64,
    },
}

impl Warp {
    pub fn value(&self, r: f64) -> f64 {
        match self {
            Warp::Euclidean => r,
            Warp::Cylinder { c } => *c,
            Warp::LogCylinder => (2.0 + r * r).ln(),
            Warp::Sampled(s) => s.value(r),
            Warp::Conic { base, boundary, delta, slope_constant } => {
                let s = r - boundary;
                if s <= 0.0 {
                    return base.value(r);
                }
                let x = s / delta;
                let eta = cutoff(x);
                let outer = base.value(boundary + delta);
                let mut g2 = slope_constant * (1.0 - eta) * x * x * outer * outer;
                if eta > 0.0 {
                    let inner = base.value(r);
                    g2 += (1.0 + x * x) * eta * inner * inner;
                }
                g2.sqrt()
            }
        }
    }

    /// One-sided derivatives `(f'(r-), f'(r+))`.
    pub fn derivative(&self, r: f64) -> (f64, f64) {
        match self {
            Warp::Euclidean => (1.0, 1.0),
            Warp::Cylinder { .. } => (0.0, 0.0),
            Warp::LogCylinder => {
                let d = 2.0 * r / (2.0 + r * r);
                (d, d)
            }
            Warp::Sampled(s) => s.slopes(r),
            Warp::Conic { base, boundary, .. } => {
                if r < *boundary {
                    return base.derivative(r);
                }
                let h = 1e-6 * r.max(1.0);
                let lo = (r - h).max(*boundary);
                let d = (self.value(r + h) - self.value(lo)) / (r + h - lo);
                (d, d)
            }
        }
    }

    /// Infimum of `f` over `[a, b]`.
    pub fn min_on(&self, a: f64, b: f64) -> f64 {
        match self {
            Warp::Euclidean | Warp::LogCylinder => self.value(a.max(0.0)),
            Warp::Cylinder { c } => *c,
            Warp::Sampled(s) => s.min_on(a, b),
            Warp::Conic { base, boundary, delta, .. } => {
                if b <= *boundary {
                    return base.min_on(a, b);
                }
                let mut m = f64::INFINITY;
                if a < *boundary {
                    m = base.min_on(a, *boundary);
                }
                let lo = a.max(*boundary);
                let blend_end = boundary + 0.75 * delta;
                if lo < blend_end {
                    // the blend is smooth but not provably monotone: endpoints plus samples
                    let hi = b.min(blend_end);
                    const SAMPLES: usize = 16;
                    for i in 0..=SAMPLES {
                        let r = lo + (hi - lo) * i as f64 / SAMPLES as f64;
                        m = m.min(self.value(r));
                    }
                }
                if b > blend_end {
                    // cone part is increasing
                    m = m.min(self.value(lo.max(blend_end)));
                }
                m
            }
        }
    }

    /// Radii where the warp is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Warp::Sampled(s) => s.radii.clone(),
            Warp::Conic { base, boundary, delta, .. } => {
                let mut b: Vec<f64> = base.breakpoints().into_iter().filter(|&r| r < *boundary).collect();
                b.extend([*boundary, boundary + 0.5 * delta, boundary + 0.75 * delta, boundary + delta]);
                b
            }
            _ => Vec::new(),
        }
    }

    /// Largest radius the warp is defined on, if finite.
    pub fn domain_end(&self) -> Option<f64> {
        match self {
            Warp::Sampled(s) => Some(s.last_radius()),
            _ => None,
        }
    }
}

/// `omega_{n-1}`, area of the unit `(n-1)`-sphere: `2 pi^{n/2} / Gamma(n/2)`.
pub fn unit_sphere_area(n: usize) -> f64 {
    // Gamma at integers and half-integers by recurrence
    let half = n as f64 / 2.0;
    let (mut gamma, mut x) = if n.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while x < half {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(half) / gamma
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpedManifold {
    n: usize,
    warp: Warp,
    r_max: f64,
    cells: usize,
    grid: Vec<f64>,
}

impl WarpedManifold {
    pub fn new(n: usize, warp: Warp, r_max: f64) -> Result<Self> {
        Self::with_cells(n, warp, r_max, DEFAULT_CELLS)
    }

    pub fn with_cells(n: usize, warp: Warp, r_max: f64, cells: usize) -> Result<Self> {
        if !(2..=12).contains(&n) {
            return Err(Error::InvalidInput(format!("dimension n = {n} outside 2..=12")));
        }
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::InvalidInput(format!("r_max = {r_max} must be positive")));
        }
        if let Some(end) = warp.domain_end() {
            if r_max > end * (1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "r_max = {r_max} beyond the last warp sample {end}"
                )));
            }
        }
        if cells == 0 {
            return Err(Error::GridTooCoarse { cells, required: 1 });
        }
        if let Warp::Cylinder { c } = warp {
            if !(c > 0.0) {
                return Err(Error::NonPositiveWarp { radius: 0.0, value: c });
            }
        }
        let grid = build_grid(r_max, cells, &warp.breakpoints());
        let m = Self { n, warp, r_max, cells, grid };
        for &r in m.grid.iter().skip(1) {
            let f = m.warp.value(r);
            if !(f > 0.0) {
                return Err(Error::NonPositiveWarp { radius: r, value: f });
            }
        }
        Ok(m)
    }

    pub fn euclidean(n: usize, r_max: f64) -> Result<Self> {
        Self::new(n, Warp::Euclidean, r_max)
    }

    pub fn cylinder(n: usize, c: f64, r_max: f64) -> Result<Self> {
        Self::new(n, Warp::Cylinder { c }, r_max)
    }

    pub fn log_cylinder(n: usize, r_max: f64) -> Result<Self> {
        Self::new(n, Warp::LogCylinder, r_max)
    }

    /// `f = r` up to 1, a bump to 1.2 at r = 1.5, back to 1 at r = 2, then `f = r - 1`.
    /// The ball `{r < 1}` is outward minimizing but not strictly: `{r < 2}` has equal area.
    pub fn dip(n: usize, r_max: f64) -> Result<Self> {
        if r_max <= 2.0 {
            return Err(Error::InvalidInput("dip model needs r_max > 2".into()));
        }
        let warp = SampledWarp::new(
            vec![0.0, 1.0, 1.5, 2.0, r_max],
            vec![0.0, 1.0, 1.2, 1.0, r_max - 1.0],
        )?;
        Self::new(n, Warp::Sampled(warp), r_max)
    }

    /// The dip model followed by a genuine dip `2 -> 1.6 -> 2` on `[3, 4]`, then `f = r - 2`.
    pub fn two_dips(n: usize, r_max: f64) -> Result<Self> {
        if r_max <= 4.0 {
            return Err(Error::InvalidInput("two_dips model needs r_max > 4".into()));
        }
        let warp = SampledWarp::new(
            vec![0.0, 1.0, 1.5, 2.0, 3.0, 3.5, 4.0, r_max],
            vec![0.0, 1.0, 1.2, 1.0, 2.0, 1.6, 2.0, r_max - 2.0],
        )?;
        Self::new(n, Warp::Sampled(warp), r_max)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn warp(&self) -> &Warp {
        &self.warp
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Same manifold with the uniform cell count doubled.
    pub fn refined(&self) -> Self {
        let mut m = self.clone();
        m.cells = self.cells * 2;
        m.grid = build_grid(m.r_max, m.cells, &m.warp.breakpoints());
        m
    }

    pub fn with_grid_cells(&self, cells: usize) -> Result<Self> {
        Self::with_cells(self.n, self.warp.clone(), self.r_max, cells)
    }

    pub fn omega(&self) -> f64 {
        unit_sphere_area(self.n)
    }

    pub fn f(&self, r: f64) -> f64 {
        self.warp.value(r)
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if !(0.0..=self.r_max * (1.0 + 1e-12)).contains(&r) || r.is_nan() {
            return Err(Error::RadiusOutOfRange { radius: r, r_max: self.r_max });
        }
        Ok(())
    }

    /// Area of the sphere `{r = const}`: `omega_{n-1} f(r)^{n-1}`.
    ///
    /// `r = 0` is accepted and gives the area of the inner boundary sphere,
    /// which is zero for warps vanishing at the origin.
    pub fn sphere_area(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        let f = self.warp.value(r);
        if f < 0.0 || (r > 0.0 && f == 0.0) {
            return Err(Error::NonPositiveWarp { radius: r, value: f });
        }
        Ok(self.area_unchecked(r))
    }

    pub(crate) fn area_unchecked(&self, r: f64) -> f64 {
        self.omega() * self.warp.value(r).powi(self.n as i32 - 1)
    }

    /// `omega_{n-1} * int_a^b f^{n-1}`, integrated between warp breakpoints.
    pub fn shell_volume(&self, a: f64, b: f64) -> Result<f64> {
        self.check_radius(a)?;
        self.check_radius(b)?;
        if b <= a {
            return Ok(0.0);
        }
        let p = self.n as i32 - 1;
        let integrand = |s: f64| self.warp.value(s).powi(p);
        let mut breaks = vec![a];
        breaks.extend(self.warp.breakpoints().into_iter().filter(|&x| x > a && x < b));
        breaks.push(b);
        let total: f64 = breaks
            .windows(2)
            .map(|w| adaptive_simpson(&integrand, w[0], w[1], QUAD_TOL))
            .sum();
        Ok(self.omega() * total)
    }

    /// Volume of `{r < radius}`.
    pub fn ball_volume(&self, r: f64) -> Result<f64> {
        self.shell_volume(0.0, r)
    }

    /// Mean curvature `(n-1) f'/f` of the sphere `{r = const}`; at a kink of a
    /// sampled warp both one-sided values are returned in [`Error::Kink`].
    pub fn mean_curvature(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        let f = self.warp.value(r);
        if !(f > 0.0) {
            return Err(Error::NonPositiveWarp { radius: r, value: f });
        }
        let k = (self.n - 1) as f64;
        let (dl, dr) = self.warp.derivative(r);
        let (hl, hr) = (k * dl / f, k * dr / f);
        if (hl - hr).abs() > 1e-12 * hl.abs().max(hr.abs()).max(1.0) {
            return Err(Error::Kink { radius: r, left: hl, right: hr });
        }
        Ok(hr)
    }

    /// Grid nodes in the tail window `[(1 - fraction) r_max, r_max]`.
    pub fn tail_nodes(&self, fraction: f64) -> Vec<f64> {
        let start = (1.0 - fraction) * self.r_max;
        let mut nodes: Vec<f64> = self.grid.iter().copied().filter(|&r| r >= start).collect();
        if nodes.first().is_none_or(|&r| r > start) {
            nodes.insert(0, start);
        }
        nodes
    }

    /// Infimum of `f` over the tail window, the surrogate for `liminf f`.
    pub fn tail_infimum(&self, fraction: f64) -> f64 {
        let start = (1.0 - fraction) * self.r_max;
        self.warp.min_on(start, self.r_max)
    }

    /// `f` is declared unbounded when it is nondecreasing over the tail window
    /// and its log-log slope there exceeds `slope_threshold`.
    pub fn tail_unbounded(&self, fraction: f64, slope_threshold: f64) -> bool {
        let nodes = self.tail_nodes(fraction);
        let vals: Vec<f64> = nodes.iter().map(|&r| self.warp.value(r)).collect();
        if vals.windows(2).any(|w| w[1] < w[0]) {
            return false;
        }
        let (r0, r1) = (nodes[0], *nodes.last().unwrap());
        let (f0, f1) = (vals[0], *vals.last().unwrap());
        if !(r0 > 0.0 && f0 > 0.0 && r1 > r0) {
            return false;
        }
        let slope = (f1 / f0).ln() / (r1 / r0).ln();
        slope > slope_threshold
    }
}

pub(crate) fn build_grid(r_max: f64, cells: usize, breaks: &[f64]) -> Vec<f64> {
    let mut pts: Vec<(f64, bool)> = (0..=cells)
        .map(|i| ((i as f64 * r_max) / cells as f64, false))
        .collect();
    pts.extend(breaks.iter().filter(|&&b| b > 0.0 && b < r_max).map(|&b| (b, true)));
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let tol = 1e-9 * r_max / cells as f64;
    let mut out: Vec<(f64, bool)> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last_mut() {
            Some(last) if (p.0 - last.0).abs() <= tol => {
                // keep exact breakpoints; never move the end nodes
                if p.1 && !last.1 && last.0 != 0.0 && last.0 != r_max {
                    *last = p;
                }
            }
            _ => out.push(p),
        }
    }
    out.into_iter().map(|p| p.0).collect()
}
