//! Exact rotationally symmetric weak solutions.
//!
//! With `m(r) = inf_{s >= r} f(s)` the arrival time is
//! `u(r) = max{0, (n-1) log(m(r) / m(r0))}` for `r >= r0`. `m` is computed by
//! one right-to-left pass over the grid using the exact cell minimum of the
//! warp, so plateaus (and the jumps they encode) have sharp endpoints.
//!
//! Normalizing by `m(r0)` rather than `f(r0)` makes `E_0^+` the minimizing
//! hull of the initial ball. The two agree whenever the ball is outward
//! minimizing, which is the case for every warp that does not dip below
//! `f(r0)` outside `r0`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::warped::WarpedManifold;

const PLATEAU_RTOL: f64 = 1e-12;
const BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Fraction of `r_max` used as the tail window.
    pub tail_fraction: f64,
    /// Log-log slope above which `f` counts as unbounded on the tail.
    pub slope_threshold: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tail_fraction: 0.2, slope_threshold: 0.02 }
    }
}

/// A jump: `u` is constant `t` on `[inner, outer]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub t: f64,
    pub inner: f64,
    pub outer: f64,
}

/// Exported jump data; `t_max` is `None` when the flow is proper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpManifest {
    pub r0: f64,
    pub t_max: Option<f64>,
    pub jumps: Vec<Jump>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSolution {
    manifold: WarpedManifold,
    r0: f64,
    nodes: Vec<f64>,
    running_inf: Vec<f64>,
    u: Vec<f64>,
    m0: f64,
    jumps: Vec<Jump>,
    t_max: f64,
    proper: bool,
    options: SolveOptions,
}

pub fn solve(m: &WarpedManifold, r0: f64) -> Result<SymmetricSolution> {
    SymmetricSolution::new(m, r0, SolveOptions::default())
}

pub fn solve_with(m: &WarpedManifold, r0: f64, options: SolveOptions) -> Result<SymmetricSolution> {
    SymmetricSolution::new(m, r0, options)
}

impl SymmetricSolution {
    pub fn new(m: &WarpedManifold, r0: f64, options: SolveOptions) -> Result<Self> {
        if !(r0 > 0.0 && r0 < m.r_max()) {
            return Err(Error::RadiusOutOfRange { radius: r0, r_max: m.r_max() });
        }
        let f0 = m.f(r0);
        if !(f0 > 0.0) {
            return Err(Error::NonPositiveWarp { radius: r0, value: f0 });
        }
        let mut nodes = vec![r0];
        nodes.extend(m.grid().iter().copied().filter(|&r| r > r0 * (1.0 + 1e-14)));
        let warp = m.warp();
        let mut running_inf = vec![0.0; nodes.len()];
        let last = nodes.len() - 1;
        running_inf[last] = m.f(nodes[last]);
        for i in (0..last).rev() {
            let cell = warp.min_on(nodes[i], nodes[i + 1]);
            running_inf[i] = running_inf[i + 1].min(cell).min(m.f(nodes[i]));
        }
        let m0 = running_inf[0];
        let k = (m.n() - 1) as f64;
        let u: Vec<f64> = running_inf.iter().map(|&x| (k * (x / m0).ln()).max(0.0)).collect();

        let proper = m.tail_unbounded(options.tail_fraction, options.slope_threshold);
        let t_max = if proper {
            f64::INFINITY
        } else {
            (k * (m.tail_infimum(options.tail_fraction) / m0).ln()).max(0.0)
        };

        let mut sol = Self {
            manifold: m.clone(),
            r0,
            nodes,
            running_inf,
            u,
            m0,
            jumps: Vec::new(),
            t_max,
            proper,
            options,
        };
        sol.jumps = sol.detect_jumps();
        Ok(sol)
    }

    fn detect_jumps(&self) -> Vec<Jump> {
        let mut jumps = Vec::new();
        let n = self.nodes.len();
        let mut i = 0;
        while i + 1 < n {
            let level = self.running_inf[i];
            let mut j = i;
            while j + 1 < n && self.running_inf[j + 1] <= level * (1.0 + PLATEAU_RTOL) {
                j += 1;
            }
            if j > i {
                let t = self.u[i];
                // plateaus reaching the end of the grid are not precompact
                if j + 1 < n && t < self.t_max {
                    if let Ok((inner, outer)) = self.sublevel(t) {
                        if outer > inner {
                            jumps.push(Jump { t, inner, outer });
                        }
                    }
                }
            }
            i = j + 1;
        }
        jumps
    }

    pub fn manifold(&self) -> &WarpedManifold {
        &self.manifold
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// Radii where `u` is tabulated, starting at `r0`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn u_nodes(&self) -> &[f64] {
        &self.u
    }

    /// `inf_{s >= r0} f(s)`, the normalizing level.
    pub fn base_level(&self) -> f64 {
        self.m0
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn options(&self) -> SolveOptions {
        self.options
    }

    /// Index `j` with `nodes[j-1] < r <= nodes[j]` (or 0 at `r0`).
    fn cell_of(&self, r: f64) -> usize {
        self.nodes.partition_point(|&x| x < r)
    }

    /// Running infimum `m(r)` for `r0 <= r <= r_max`.
    pub fn running_inf(&self, r: f64) -> Result<f64> {
        if !(r >= self.r0 && r <= *self.nodes.last().unwrap()) {
            return Err(Error::RadiusOutOfRange { radius: r, r_max: self.manifold.r_max() });
        }
        Ok(self.running_inf_unchecked(r))
    }

    fn running_inf_unchecked(&self, r: f64) -> f64 {
        let j = self.cell_of(r);
        if self.nodes[j] == r {
            return self.running_inf[j];
        }
        self.manifold.warp().min_on(r, self.nodes[j]).min(self.running_inf[j])
    }

    /// `u(r)` for `r0 <= r <= r_max`; the interior of the initial ball is not represented.
    pub fn u_at(&self, r: f64) -> Result<f64> {
        let m = self.running_inf(r)?;
        Ok(self.time_of_level(m))
    }

    fn time_of_level(&self, level: f64) -> f64 {
        ((self.manifold.n() - 1) as f64 * (level / self.m0).ln()).max(0.0)
    }

    fn level_of_time(&self, t: f64) -> f64 {
        self.m0 * (t / (self.manifold.n() - 1) as f64).exp()
    }

    /// `(rho_t, rho_t^+)` with `E_t = {r < rho_t}` and `E_t^+ = {r <= rho_t^+}`.
    pub fn sublevel(&self, t: f64) -> Result<(f64, f64)> {
        if !(t >= 0.0) {
            return Err(Error::InvalidInput(format!("time {t} must be nonnegative")));
        }
        if t >= self.t_max {
            return Err(Error::NotPrecompact { t, t_max: self.t_max });
        }
        let level = self.level_of_time(t);
        let last = self.nodes.len() - 1;
        let inner = if t == 0.0 {
            self.r0
        } else {
            let j = self.running_inf.partition_point(|&x| x < level);
            if j > last {
                return Err(Error::BeyondRepresentation { t });
            }
            if j == 0 {
                self.r0
            } else {
                // m(r) >= level is monotone in r on (nodes[j-1], nodes[j]]
                self.bisect(self.nodes[j - 1], self.nodes[j], |r| self.running_inf_unchecked(r) >= level).1
            }
        };
        let k = self.running_inf.partition_point(|&x| x <= level);
        if k > last {
            return Err(Error::BeyondRepresentation { t });
        }
        let outer = if k == 0 {
            self.r0
        } else {
            // last r with m(r) <= level lies in [nodes[k-1], nodes[k])
            let (lo, _) = self.bisect(self.nodes[k - 1], self.nodes[k], |r| self.running_inf_unchecked(r) > level);
            lo.max(inner)
        };
        Ok((inner, outer))
    }

    /// Brackets the switch of a monotone predicate with `pred(hi)` true:
    /// returns the last point found false and the first point found true.
    fn bisect<P: Fn(f64) -> bool>(&self, mut lo: f64, mut hi: f64, pred: P) -> (f64, f64) {
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if pred(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }

    pub fn jump_times(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.t).collect()
    }

    /// `|A(rho_t) - e^t A(rho_0^+)| / (e^t A(rho_0^+))`.
    pub fn area_law_check(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!("area law is checked for t > 0 (got {t})")));
        }
        let (rho, _) = self.sublevel(t)?;
        let (_, outer0) = self.sublevel(0.0)?;
        let expected = t.exp() * self.manifold.sphere_area(outer0)?;
        Ok((self.manifold.sphere_area(rho)? - expected).abs() / expected)
    }

    /// `|u'(r) - (n-1) f'(r)/f(r)|` with a centered difference of step `h`.
    pub fn gradient_check_with_step(&self, r: f64, h: f64) -> Result<f64> {
        let m = self.running_inf(r)?;
        if m < self.manifold.f(r) * (1.0 - PLATEAU_RTOL) {
            return Err(Error::PlateauRegion { radius: r });
        }
        let (lo, hi) = (self.u_at(r - h)?, self.u_at(r + h)?);
        if hi - lo <= PLATEAU_RTOL * hi.abs().max(1.0) {
            return Err(Error::PlateauRegion { radius: r });
        }
        let h_curv = self.manifold.mean_curvature(r)?;
        Ok(((hi - lo) / (2.0 * h) - h_curv).abs())
    }

    pub fn gradient_check(&self, r: f64) -> Result<f64> {
        self.gradient_check_with_step(r, 1e-4)
    }

    pub fn properness_check(&self) -> bool {
        self.proper
    }

    pub fn manifest(&self) -> JumpManifest {
        JumpManifest {
            r0: self.r0,
            t_max: self.t_max.is_finite().then_some(self.t_max),
            jumps: self.jumps.clone(),
        }
    }

    /// Writes `r,u` rows for every tabulated node.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["r", "u"])?;
        for (r, u) in self.nodes.iter().zip(&self.u) {
            w.write_record([r.to_string(), u.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_manifest<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, &self.manifest())?;
        Ok(())
    }
}

pub fn jump_times(sol: &SymmetricSolution) -> Vec<f64> {
    sol.jump_times()
}

pub fn max_existence_time(sol: &SymmetricSolution) -> f64 {
    sol.t_max()
}

pub fn sublevel(sol: &SymmetricSolution, t: f64) -> Result<(f64, f64)> {
    sol.sublevel(t)
}

pub fn area_law_check(sol: &SymmetricSolution, t: f64) -> Result<f64> {
    sol.area_law_check(t)
}

pub fn gradient_check(sol: &SymmetricSolution, r: f64) -> Result<f64> {
    sol.gradient_check(r)
}

pub fn properness_check(sol: &SymmetricSolution) -> bool {
    sol.properness_check()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped::{SampledWarp, Warp};
    use std::f64::consts::E;

    #[test]
    fn euclidean_matches_classical_flow() {
        let m = WarpedManifold::euclidean(3, 20.0).unwrap();
        let s = solve(&m, 1.0).unwrap();
        for r in [1.0, 1.7, 3.0, 10.0] {
            assert!((s.u_at(r).unwrap() - 2.0 * r.ln()).abs() < 1e-14);
        }
        let (a, b) = s.sublevel(2.0).unwrap();
        assert!((a - E).abs() < 1e-14 && (b - E).abs() < 1e-14);
        assert!(s.jump_times().is_empty());
        assert!(s.is_proper() && s.t_max().is_infinite());
        assert!(s.area_law_check(1.3).unwrap() < 1e-14);
        assert!(s.gradient_check(2.0).unwrap() < 1e-8);
    }

    #[test]
    fn cylinder_has_no_flow() {
        let m = WarpedManifold::cylinder(3, 1.0, 20.0).unwrap();
        let s = solve(&m, 1.0).unwrap();
        assert!(s.u_nodes().iter().all(|&u| u == 0.0));
        assert_eq!(s.t_max(), 0.0);
        assert!(!s.properness_check());
        assert!(matches!(s.sublevel(0.0), Err(Error::NotPrecompact { .. })));
    }

    #[test]
    fn dip_jumps_at_zero() {
        let m = WarpedManifold::dip(3, 10.0).unwrap();
        let s = solve(&m, 1.0).unwrap();
        assert_eq!(s.jump_times(), vec![0.0]);
        let (a, b) = s.sublevel(0.0).unwrap();
        assert_eq!((a, b), (1.0, 2.0));
        for r in [1.0, 1.5, 2.0] {
            assert_eq!(s.u_at(r).unwrap(), 0.0);
        }
        for r in [2.5, 4.0] {
            assert!((s.u_at(r).unwrap() - 2.0 * m.f(r).ln()).abs() < 1e-14);
        }
        assert!(matches!(s.gradient_check(1.5), Err(Error::PlateauRegion { .. })));
        assert!(s.area_law_check(0.1).unwrap() < 1e-6);
    }

    #[test]
    fn two_dips_give_two_jumps() {
        let m = WarpedManifold::two_dips(3, 12.0).unwrap();
        let s = solve(&m, 1.0).unwrap();
        let times = s.jump_times();
        assert_eq!(times.len(), 2);
        assert_eq!(times[0], 0.0);
        assert!((times[1] - 2.0 * 1.6f64.ln()).abs() < 1e-12);
        let j = s.jumps()[1];
        assert!((j.inner - 2.6).abs() < 1e-12 && (j.outer - 3.5).abs() < 1e-12);
        // |dE_t| = |dE_t^+| at a positive jump time
        let (ai, ao) = (m.sphere_area(j.inner).unwrap(), m.sphere_area(j.outer).unwrap());
        assert!((ai - ao).abs() < 1e-10 * ao);
    }

    #[test]
    fn bounded_warp_existence_time() {
        let w = SampledWarp::new(vec![0.0, 1.0, 2.0, 50.0], vec![0.0, 2.5, 3.0, 3.0]).unwrap();
        let m = WarpedManifold::new(3, Warp::Sampled(w), 50.0).unwrap();
        let s = solve(&m, 1.0).unwrap();
        assert!((s.t_max() - 2.0 * 1.2f64.ln()).abs() < 1e-14);
        assert!((s.t_max() - 0.36464).abs() < 1e-5);
        assert!(s.sublevel(0.3).is_ok());
        assert!(matches!(s.sublevel(0.37), Err(Error::NotPrecompact { .. })));
    }

    #[test]
    fn log_cylinder_gradient_and_properness() {
        let m = WarpedManifold::log_cylinder(3, 100.0).unwrap();
        let s = solve(&m, 1.0).unwrap();
        assert!(s.is_proper());
        assert!(s.gradient_check(3.0).unwrap() < 1e-6);
    }

    #[test]
    fn r0_outside_grid() {
        let m = WarpedManifold::euclidean(3, 5.0).unwrap();
        assert!(matches!(solve(&m, 6.0), Err(Error::RadiusOutOfRange { .. })));
        assert!(matches!(solve(&m, 0.0), Err(Error::RadiusOutOfRange { .. })));
    }

    #[test]
    fn csv_and_manifest_export() {
        let m = WarpedManifold::dip(3, 10.0).unwrap();
        let s = solve(&m, 1.0).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r,u\n1,0\n"));
        let mut buf = Vec::new();
        s.write_manifest(&mut buf).unwrap();
        let back: JumpManifest = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back.jumps, s.jumps());
        assert_eq!(back.t_max, None);
    }
}
