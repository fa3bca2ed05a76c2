//! Exhaustion by conic cutoffs. Beyond `b = k + 1/4` the warp is blended up
//! over a collar of width `delta` and continued as a cone, so each cutoff
//! manifold carries a proper solution `u_k`. As `k` grows these agree on
//! `{u_k < log(A / a0)}` and assemble into the solution on the base manifold.

use serde::Serialize;

use crate::bounds::{barrier_radius, exhaustion_radius, horizon};
use crate::discrete::{radial_nodes, CertificationReport, RadialDiscretization};
use crate::error::{Error, Result};
use crate::profile::{check_nondegeneracy, IsoProfile};
use crate::symmetric::{solve, SymmetricSolution};
use crate::warped::{Warp, WarpedManifold};

/// Widest collar accepted by [`build_cone`].
pub const MAX_DELTA: f64 = 0.125;
/// Offset of the cutoff boundary past `k`.
pub const BOUNDARY_OFFSET: f64 = 0.25;
const SLOPE_CAP: f64 = 1e6;
const COLLAR_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ConicModel {
    pub base: WarpedManifold,
    pub k: f64,
    pub delta: f64,
    pub slope_constant: f64,
    /// The cutoff manifold with warp `f_k`.
    pub manifold: WarpedManifold,
}

impl ConicModel {
    /// Radius where `f_k` starts to differ from `f`.
    pub fn boundary(&self) -> f64 {
        self.k + BOUNDARY_OFFSET
    }

    pub fn warp_k(&self, r: f64) -> f64 {
        self.manifold.f(r)
    }

    /// Radius past which `f_k` is exactly linear.
    pub fn cone_start(&self) -> f64 {
        self.boundary() + 0.75 * self.delta
    }

    /// Interior sample points of the collar `(b, b + delta)`.
    pub fn collar_samples(&self) -> Vec<f64> {
        collar_grid(self.boundary(), self.delta)
    }

    /// `min (f_k - f)` over the collar samples; positive when the collar is strictly larger.
    pub fn collar_margin(&self) -> f64 {
        self.collar_samples()
            .into_iter()
            .map(|r| self.warp_k(r) - self.base.f(r))
            .fold(f64::INFINITY, f64::min)
    }
}

fn collar_grid(b: f64, delta: f64) -> Vec<f64> {
    (1..=COLLAR_SAMPLES).map(|i| b + delta * i as f64 / (COLLAR_SAMPLES + 1) as f64).collect()
}

fn conic_warp(base: &Warp, boundary: f64, delta: f64, c: f64) -> Warp {
    Warp::Conic { base: Box::new(base.clone()), boundary, delta, slope_constant: c }
}

/// Builds `M_k`. The cone constant `C` is doubled from 1 until `f_k > f` at
/// every collar sample. The cutoff manifold extends to `max(r_max, 4 (b + 1))`
/// so that its tail lies on the cone.
pub fn build_cone(m: &WarpedManifold, k: f64, delta: f64) -> Result<ConicModel> {
    if !(k > 0.0 && k < m.r_max() - 1.0) {
        return Err(Error::InvalidInput(format!("cutoff k = {k} must lie in (0, r_max - 1 = {})", m.r_max() - 1.0)));
    }
    if !(delta > 0.0 && delta <= MAX_DELTA) {
        return Err(Error::InvalidInput(format!("collar width {delta} must lie in (0, {MAX_DELTA}]")));
    }
    let b = k + BOUNDARY_OFFSET;
    let samples = collar_grid(b, delta);
    let base_vals: Vec<f64> = samples.iter().map(|&r| m.warp().value(r)).collect();
    let mut c = 1.0;
    let warp = loop {
        let w = conic_warp(m.warp(), b, delta, c);
        if samples.iter().zip(&base_vals).all(|(&r, &f)| w.value(r) > f) {
            break w;
        }
        c *= 2.0;
        if c > SLOPE_CAP {
            return Err(Error::Construction(format!(
                "no cone constant up to {SLOPE_CAP} lifts the collar above f at k = {k}"
            )));
        }
    };
    let r_max = m.r_max().max(4.0 * (b + 1.0));
    let cells = ((m.cells() as f64) * r_max / m.r_max()).ceil() as usize;
    let manifold = WarpedManifold::with_cells(m.n(), warp, r_max, cells)?;
    Ok(ConicModel { base: m.clone(), k, delta, slope_constant: c, manifold })
}

/// `u_k` on the cutoff manifold; it must be proper.
pub fn solve_on_cone(cm: &ConicModel, r0: f64) -> Result<SymmetricSolution> {
    if !(r0 > 0.0 && r0 < cm.k) {
        return Err(Error::InvalidInput(format!("r0 = {r0} must lie in (0, k = {})", cm.k)));
    }
    let sol = solve(&cm.manifold, r0)?;
    if !sol.properness_check() {
        return Err(Error::Construction(format!("solution on the k = {} cone is not proper", cm.k)));
    }
    Ok(sol)
}

/// `T_k = sup { t : E_t ⊆ B(k) }`. `u` is nondecreasing in `r`, so this is `u(k)`.
pub fn first_escape_time(sol: &SymmetricSolution, k: f64) -> Result<f64> {
    if k <= sol.r0() {
        return Ok(0.0);
    }
    sol.u_at(k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpingVerdict {
    pub t: f64,
    pub r: f64,
    pub rho_t: f64,
    pub rho_t_plus: f64,
    /// `r + 1 + 2 RI(Isp^{-1}(e^t a0))`, when the profile allows it.
    pub bound: Option<f64>,
    /// Unmet hypotheses; the conclusion is only asserted when this is empty.
    pub hypothesis_failures: Vec<String>,
    pub contained: Option<bool>,
}

/// If `E_t ⊆ B(r)` then `E_t^+ ⊆ B(R)`. Hypotheses that fail are listed
/// rather than raised. Violations of `rho_t^+ <= b + delta` while `E_t ⊆ B(k)`
/// are construction errors.
pub fn jumping_control_check(
    cm: &ConicModel,
    sol: &SymmetricSolution,
    p: &IsoProfile,
    a0: f64,
    area_cap: f64,
    t: f64,
    r: f64,
) -> Result<JumpingVerdict> {
    let (rho_t, rho_t_plus) = sol.sublevel(t)?;
    if rho_t <= cm.k && rho_t_plus > cm.boundary() + cm.delta {
        return Err(Error::Construction(format!(
            "E_{t}^+ reaches {rho_t_plus}, past the collar end {}",
            cm.boundary() + cm.delta
        )));
    }
    let mut failures = Vec::new();
    let cap = horizon(a0, area_cap);
    if t > cap {
        failures.push(format!("t = {t} exceeds log(A / a0) = {cap}"));
    }
    if rho_t > r {
        failures.push(format!("E_t reaches {rho_t}, outside B({r})"));
    }
    let bound = match barrier_radius(p, r, t.exp() * a0) {
        Ok(b) => {
            if cm.k <= b {
                failures.push(format!("k = {} does not exceed R = {b}", cm.k));
            }
            Some(b)
        }
        Err(e) => {
            failures.push(format!("barrier radius unavailable: {e}"));
            None
        }
    };
    let contained = match bound {
        Some(b) if failures.is_empty() => Some(rho_t_plus <= b),
        _ => None,
    };
    Ok(JumpingVerdict { t, r, rho_t, rho_t_plus, bound, hypothesis_failures: failures, contained })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExhaustionOptions {
    pub delta: f64,
    /// Sup-norm tolerance for `u_k = u_k'` on `{u_k < T~}`.
    pub agreement_tolerance: f64,
    pub certify_tolerance: f64,
    /// Target cell width of the certification complex.
    pub certify_spacing: f64,
    /// Number of equally spaced certification times in `[0, T~)`.
    pub certify_times: usize,
}

impl Default for ExhaustionOptions {
    fn default() -> Self {
        Self {
            delta: MAX_DELTA,
            agreement_tolerance: 1e-8,
            certify_tolerance: 1e-6,
            certify_spacing: 2.5e-4,
            certify_times: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationEntry {
    pub k: f64,
    pub t_k: f64,
    pub t_tilde: f64,
    pub slope_constant: f64,
    pub above_k1: bool,
    pub escapes_after_horizon: bool,
    /// Sup-norm distance to the previous `u_k` on `{u_k < T~}`.
    pub diff_with_prev: Option<f64>,
    pub agrees_with_prev: Option<bool>,
    pub certified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizationReport {
    pub r0: f64,
    pub a0: f64,
    pub area_cap: f64,
    pub t_tilde: f64,
    /// `R_2(T~)`; `k_1` is the smallest listed `k` beyond it.
    pub r2: f64,
    pub k1: Option<f64>,
    pub entries: Vec<StabilizationEntry>,
    pub t_k_monotone: bool,
    pub certification: Option<CertificationReport>,
    pub pass: bool,
    #[serde(skip)]
    pub solutions: Vec<SymmetricSolution>,
}

impl StabilizationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The solution for `k_1`.
    pub fn stable_solution(&self) -> Option<&SymmetricSolution> {
        let i = self.entries.iter().position(|e| Some(e.k) == self.k1)?;
        self.solutions.get(i)
    }
}

/// Solves on each cutoff in `k_list` (sorted ascending) and checks
/// `T_k >= T~` beyond `k_1`, pairwise agreement below `T~`, and that
/// `min(u_{k_1}, T~)` certifies on `[0, k_1]` of the base manifold.
pub fn stabilization_check(
    m: &WarpedManifold,
    r0: f64,
    p: &IsoProfile,
    area_cap: f64,
    k_list: &[f64],
    options: &ExhaustionOptions,
) -> Result<StabilizationReport> {
    let nondeg = check_nondegeneracy(p, area_cap);
    if !nondeg.passes() {
        return Err(Error::NonDegeneracyExceeded { area: area_cap, liminf: nondeg.liminf_surrogate });
    }
    if k_list.is_empty() {
        return Err(Error::InvalidInput("empty k list".into()));
    }
    let mut ks = k_list.to_vec();
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    let a0 = m.sphere_area(r0)?;
    let t_tilde = horizon(a0, area_cap);
    let r2 = exhaustion_radius(p, r0, a0, t_tilde, 2)?;
    let k1 = ks.iter().copied().find(|&k| k > r2);

    let mut entries: Vec<StabilizationEntry> = Vec::with_capacity(ks.len());
    let mut solutions: Vec<SymmetricSolution> = Vec::with_capacity(ks.len());
    for &k in &ks {
        let cm = build_cone(m, k, options.delta)?;
        let sol = solve_on_cone(&cm, r0)?;
        let t_k = first_escape_time(&sol, k)?;
        let (diff, agrees) = match solutions.last() {
            Some(prev) => {
                let d = agreement_distance(m, prev, &sol, t_tilde)?;
                (Some(d), Some(d <= options.agreement_tolerance))
            }
            None => (None, None),
        };
        entries.push(StabilizationEntry {
            k,
            t_k,
            t_tilde,
            slope_constant: cm.slope_constant,
            above_k1: k1.is_some_and(|k1| k >= k1),
            escapes_after_horizon: t_k >= t_tilde,
            diff_with_prev: diff,
            agrees_with_prev: agrees,
            certified: false,
        });
        solutions.push(sol);
    }

    let certification = match k1 {
        Some(k1) => {
            let i = ks.iter().position(|&k| k == k1).unwrap();
            let report = certify_truncated(m, &solutions[i], t_tilde, k1.min(m.r_max()), options)?;
            entries[i].certified = report.pass;
            Some(report)
        }
        None => None,
    };

    let t_k_monotone = entries.windows(2).all(|w| w[1].t_k >= w[0].t_k);
    let escapes = entries.iter().filter(|e| e.above_k1).all(|e| e.escapes_after_horizon);
    // agreement is required between consecutive entries that are both beyond k_1
    let agree = entries
        .windows(2)
        .filter(|w| w[0].above_k1)
        .all(|w| w[1].agrees_with_prev == Some(true));
    let pass = k1.is_some() && escapes && agree && certification.as_ref().is_some_and(|c| c.pass);
    Ok(StabilizationReport {
        r0,
        a0,
        area_cap,
        t_tilde,
        r2,
        k1,
        entries,
        t_k_monotone,
        certification,
        pass,
        solutions,
    })
}

/// `sup |u_a - u_b|` over base grid nodes with `u_a < level`.
fn agreement_distance(m: &WarpedManifold, a: &SymmetricSolution, b: &SymmetricSolution, level: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &r in m.grid().iter().filter(|&&r| r >= a.r0()) {
        let ua = a.u_at(r)?;
        if ua >= level {
            break;
        }
        worst = worst.max((ua - b.u_at(r)?).abs());
    }
    Ok(worst)
}

/// Certifies `min(u, cap)` on the base manifold over `[0, hi]`.
fn certify_truncated(
    m: &WarpedManifold,
    sol: &SymmetricSolution,
    cap: f64,
    hi: f64,
    options: &ExhaustionOptions,
) -> Result<CertificationReport> {
    let r0 = sol.r0();
    let cells = (((hi - r0) / options.certify_spacing).ceil() as usize).max(1);
    let inner = ((r0 / options.certify_spacing).ceil() as usize).clamp(1, 64);
    let nodes = radial_nodes(m, r0, hi, cells, inner)?;
    let d = RadialDiscretization::new(m, r0, &nodes, |r| sol.u_at(r).map(|u| u.min(cap)))?;
    let n = options.certify_times.max(1);
    let times: Vec<f64> = (0..n).map(|i| cap * i as f64 / n as f64).collect();
    d.certify(&times, options.certify_tolerance)
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitPiece {
    pub l: f64,
    pub area_cap: f64,
    pub k1: f64,
    /// Sup-norm distance to the previous piece on `{u^l < l}` of the previous piece.
    pub diff_with_prev: Option<f64>,
    pub stabilization_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitSolution {
    pub pieces: Vec<LimitPiece>,
    /// Base grid nodes from `r0` and the stitched values; `None` where no piece reaches.
    pub nodes: Vec<f64>,
    pub values: Vec<Option<f64>>,
    /// Sup-norm distance of the stitched values to the direct solution.
    pub direct_diff: f64,
    pub pass: bool,
    #[serde(skip)]
    pub direct: Option<SymmetricSolution>,
}

impl LimitSolution {
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["r", "u"])?;
        for (r, u) in self.nodes.iter().zip(&self.values) {
            if let Some(u) = u {
                w.write_record([r.to_string(), u.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs [`stabilization_check`] at `A = e^l a0` for each `l`, with `k` placed
/// just past `R_2(l)`, stitches `u^l` on `{u^l < l}` and compares with the
/// direct solve.
pub fn limit_solution(
    m: &WarpedManifold,
    r0: f64,
    p: &IsoProfile,
    l_list: &[f64],
    options: &ExhaustionOptions,
) -> Result<LimitSolution> {
    if l_list.is_empty() || l_list.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidInput("levels l must be positive and nonempty".into()));
    }
    let mut ls = l_list.to_vec();
    ls.sort_by(f64::total_cmp);
    ls.dedup();
    let a0 = m.sphere_area(r0)?;
    let nodes: Vec<f64> = std::iter::once(r0).chain(m.grid().iter().copied().filter(|&r| r > r0)).collect();
    let mut values: Vec<Option<f64>> = vec![None; nodes.len()];
    let mut pieces: Vec<LimitPiece> = Vec::new();
    let mut prev: Option<(f64, SymmetricSolution)> = None;
    let mut all_pass = true;
    for &l in &ls {
        let area_cap = l.exp() * a0;
        let r2 = exhaustion_radius(p, r0, a0, l, 2)?;
        let k = r2.floor() + 1.0;
        if k >= m.r_max() - 1.0 {
            return Err(Error::InvalidInput(format!(
                "level l = {l} needs a cutoff past R_2 = {r2}, beyond r_max - 1 = {}",
                m.r_max() - 1.0
            )));
        }
        let report = stabilization_check(m, r0, p, area_cap, &[k, k + 1.0], options)?;
        let sol = report.stable_solution().cloned().ok_or_else(|| Error::Construction(format!("no k_1 at l = {l}")))?;
        let diff = match &prev {
            Some((pl, ps)) => Some(agreement_distance(m, ps, &sol, *pl)?),
            None => None,
        };
        if diff.is_some_and(|d| d > options.agreement_tolerance) || !report.pass {
            all_pass = false;
        }
        for (r, v) in nodes.iter().zip(values.iter_mut()) {
            if v.is_none() {
                let u = sol.u_at(*r)?;
                if u < l {
                    *v = Some(u);
                }
            }
        }
        pieces.push(LimitPiece { l, area_cap, k1: k, diff_with_prev: diff, stabilization_pass: report.pass });
        prev = Some((l, sol));
    }
    let direct = solve(m, r0)?;
    let mut direct_diff: f64 = 0.0;
    for (r, v) in nodes.iter().zip(&values) {
        if let Some(v) = v {
            direct_diff = direct_diff.max((v - direct.u_at(*r)?).abs());
        }
    }
    let pass = all_pass && direct_diff <= options.agreement_tolerance;
    Ok(LimitSolution { pieces, nodes, values, direct_diff, pass, direct: Some(direct) })
}
