//! JSON scenarios and the pipelines run by the `imcf` binary.
//!
//! A scenario has sections `manifold`, `profile`, `grid`, `pipeline`,
//! `tolerances` and `seed`. Every section has defaults, so `{}` is a valid
//! scenario (the Euclidean solve). Each pipeline writes CSV/JSON artifacts to
//! an output directory and returns printable summary lines, scalar metrics
//! and an exit code.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{summarize, verify_containment, write_reports_csv};
use crate::conic::{limit_solution, stabilization_check, ExhaustionOptions};
use crate::discrete::{
    exhaustive_minimum, minimize_j, radial_nodes, CellComplex, Energy, RadialDiscretization, RegionSet,
};
use crate::error::{Error, Result};
use crate::hull::{minimizing_hull, symmetric_hull};
use crate::profile::{
    ball_volume_lower_bound, check_nondegeneracy, strong_profile, superlinear_growth_check,
    symmetric_candidate_profile, IsoProfile,
};
use crate::symmetric::{solve, SymmetricSolution};
use crate::warped::{SampledWarp, Warp, WarpedManifold};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NONDEGENERACY: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Exit code for an error raised while running a pipeline.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonDegeneracyExceeded { .. } | Error::IntegralDiverges { .. } => EXIT_NONDEGENERACY,
        Error::ContainmentViolated { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_INVALID,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    #[default]
    Solve,
    Profile,
    Hull,
    Bounds,
    Certify,
    Exhaust,
    Limit,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Solve,
        Command::Profile,
        Command::Hull,
        Command::Bounds,
        Command::Certify,
        Command::Exhaust,
        Command::Limit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Profile => "profile",
            Command::Hull => "hull",
            Command::Bounds => "bounds",
            Command::Certify => "certify",
            Command::Exhaust => "exhaust",
            Command::Limit => "limit",
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown command {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ManifoldSpec {
    /// One of `euclidean`, `cylinder`, `log_cylinder`, `dip`, `two_dips`, `sampled`.
    pub model: String,
    pub n: usize,
    pub r_max: f64,
    /// Cross-section radius of the cylinder.
    pub c: f64,
    /// Two-column `r,f` table for the `sampled` model.
    pub warp_csv: Option<PathBuf>,
}

impl Default for ManifoldSpec {
    fn default() -> Self {
        Self { model: "euclidean".into(), n: 3, r_max: 60.0, c: 1.0, warp_csv: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    /// Uniform cells of the manifold grid on `[0, r_max]`.
    pub cells: usize,
    /// Cells of the radial complex used by `hull`.
    pub hull_cells: usize,
    /// Cells per unit radius of each `certify` window.
    pub certify_density: usize,
    /// Rerun on the doubled grid and report the sensitivity of each metric.
    pub refine: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { cells: 2000, hull_cells: 2000, certify_density: 4000, refine: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineSpec {
    pub command: Command,
    pub r0: f64,
    /// Sample times; empty means a command-specific default.
    pub times: Vec<f64>,
    pub k_list: Vec<f64>,
    pub l_list: Vec<f64>,
    /// Area cap `A`; when absent `A = area_factor * |dE_0|`.
    pub area_cap: Option<f64>,
    pub area_factor: f64,
    /// Outer radii of the `certify` windows; empty means `r0 + 1.5, r0 + 3, r0 + 4.5`.
    pub windows: Vec<f64>,
    /// Size of the bump added to `u` for the negative certification control.
    pub perturbation: f64,
    /// Seeded random complexes compared against enumeration by `certify`.
    pub oracle_trials: usize,
}

impl Default for PipelineSpec {
    fn default() -> Self {
        Self {
            command: Command::Solve,
            r0: 1.0,
            times: Vec::new(),
            k_list: Vec::new(),
            l_list: Vec::new(),
            area_cap: None,
            area_factor: std::f64::consts::E,
            windows: Vec::new(),
            perturbation: 0.2,
            oracle_trials: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub area_law: f64,
    pub certify: f64,
    /// Required violation of the perturbed solution.
    pub perturbed_min_violation: f64,
    pub agreement: f64,
    /// Cell width of the exhaustion certification complex.
    pub certify_spacing: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            area_law: 1e-6,
            certify: 1e-6,
            perturbed_min_violation: 1e-2,
            agreement: 1e-8,
            certify_spacing: 2.5e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub manifold: ManifoldSpec,
    /// Profile string, see [`parse_profile`]; absent means the Euclidean profile of dimension `n`.
    pub profile: Option<String>,
    pub grid: GridSpec,
    pub pipeline: PipelineSpec,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        let p = &self.pipeline;
        if !(p.r0 > 0.0 && p.r0 < self.manifold.r_max) {
            return bad(format!("r0 = {} must lie in (0, r_max = {})", p.r0, self.manifold.r_max));
        }
        if p.times.iter().any(|t| !(*t >= 0.0)) {
            return bad("times must be nonnegative".into());
        }
        if p.area_cap.is_some_and(|a| !(a > 0.0)) || !(p.area_factor > 0.0) {
            return bad("area cap and factor must be positive".into());
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("area_law", t.area_law),
            ("certify", t.certify),
            ("agreement", t.agreement),
            ("certify_spacing", t.certify_spacing),
        ] {
            if !(v > 0.0) {
                return bad(format!("tolerance {name} must be positive"));
            }
        }
        if self.grid.cells == 0 || self.grid.hull_cells == 0 || self.grid.certify_density == 0 {
            return bad("cell counts must be positive".into());
        }
        Ok(())
    }

    pub fn build_manifold(&self) -> Result<WarpedManifold> {
        let s = &self.manifold;
        let warp = match s.model.as_str() {
            "euclidean" => Warp::Euclidean,
            "cylinder" => Warp::Cylinder { c: s.c },
            "log_cylinder" => Warp::LogCylinder,
            "dip" => return WarpedManifold::dip(s.n, s.r_max)?.with_grid_cells(self.grid.cells),
            "two_dips" => return WarpedManifold::two_dips(s.n, s.r_max)?.with_grid_cells(self.grid.cells),
            "sampled" => {
                let path = s
                    .warp_csv
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("model `sampled` needs warp_csv".into()))?;
                Warp::Sampled(SampledWarp::from_csv(fs::File::open(path)?)?)
            }
            other => return Err(Error::InvalidInput(format!("unknown model {other:?}"))),
        };
        WarpedManifold::with_cells(s.n, warp, s.r_max, self.grid.cells)
    }
}

/// Parses `power:c=..,a=..`, `piecewise:c=..,small=..,large=..,vbreak=..`,
/// `csv:PATH`, `euclidean` or `candidate` (the annulus upper-bound profile of
/// `m`). Analytic forms accept an optional `vmax=..`.
pub fn parse_profile(spec: &str, m: &WarpedManifold) -> Result<IsoProfile> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let kind = kind.trim();
    if kind == "csv" {
        return IsoProfile::from_csv(fs::File::open(rest.trim())?);
    }
    let mut params = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("profile parameter {item:?} is not key=value")))?;
        let v: f64 = value.trim().parse().map_err(|_| Error::Parse(format!("profile parameter {item:?}")))?;
        params.insert(key.trim().to_string(), v);
    }
    let get = |k: &str| params.get(k).copied().ok_or_else(|| Error::Parse(format!("profile {kind:?} needs {k}")));
    let p = match kind {
        "power" => IsoProfile::power(get("c")?, get("a")?)?,
        "piecewise" => IsoProfile::piecewise_power(get("c")?, get("small")?, get("large")?, get("vbreak")?)?,
        "euclidean" => IsoProfile::euclidean(m.n())?,
        "candidate" => {
            let steps = 4 * m.r_max().ceil() as usize;
            let grid: Vec<f64> = (0..=steps).map(|i| m.r_max() * i as f64 / steps as f64).collect();
            return symmetric_candidate_profile(m, &grid);
        }
        other => return Err(Error::Parse(format!("unknown profile kind {other:?}"))),
    };
    Ok(match params.get("vmax") {
        Some(&v) => p.with_v_max(v),
        None => p,
    })
}

/// Result of one pipeline run.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Outcome {
    pub exit: i32,
    pub summary: Vec<String>,
    pub metrics: BTreeMap<String, f64>,
}

impl Outcome {
    fn line(&mut self, s: String) {
        self.summary.push(s);
    }

    fn metric(&mut self, name: &str, v: f64) {
        self.metrics.insert(name.to_string(), v);
    }

    fn fail(&mut self, code: i32) {
        self.exit = self.exit.max(code);
    }
}

/// Runs the scenario into `out`. With `grid.refine` set, also runs on the
/// doubled grid into `out/refined` and writes `sensitivity.json`.
pub fn run(s: &Scenario, out: &Path) -> Result<Outcome> {
    s.validate()?;
    let m = s.build_manifold()?;
    let mut outcome = run_on(s, &m, out)?;
    if s.grid.refine {
        let fine = m.refined();
        let refined = run_on(s, &fine, &out.join("refined"))?;
        let mut sensitivity = BTreeMap::new();
        for (k, v) in &outcome.metrics {
            if let Some(w) = refined.metrics.get(k) {
                sensitivity.insert(k.clone(), [*v, *w, w - v]);
            }
        }
        write(out, "sensitivity.json", &serde_json::to_string_pretty(&sensitivity)?)?;
        outcome.line(format!("refined grid ({} cells):", fine.cells()));
        outcome.summary.extend(refined.summary.iter().map(|l| format!("  {l}")));
        for (k, [a, b, d]) in &sensitivity {
            outcome.line(format!("  sensitivity {k}: {a:.10e} -> {b:.10e} (delta {d:.3e})"));
        }
        outcome.fail(refined.exit);
    }
    Ok(outcome)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn write_with<F: FnOnce(&mut Vec<u8>) -> Result<()>>(dir: &Path, name: &str, f: F) -> Result<()> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), buf)?;
    Ok(())
}

/// Runs the pipeline of `s` on the given manifold.
pub fn run_on(s: &Scenario, m: &WarpedManifold, out: &Path) -> Result<Outcome> {
    let mut o = Outcome::default();
    o.line(format!(
        "{} on {} (n = {}, r_max = {}, {} cells), r0 = {}",
        s.pipeline.command.name(),
        s.manifold.model,
        m.n(),
        m.r_max(),
        m.cells(),
        s.pipeline.r0
    ));
    let result = match s.pipeline.command {
        Command::Solve => run_solve(s, m, out, &mut o),
        Command::Profile => run_profile(s, m, out, &mut o),
        Command::Hull => run_hull(s, m, out, &mut o),
        Command::Bounds => run_bounds(s, m, out, &mut o),
        Command::Certify => run_certify(s, m, out, &mut o),
        Command::Exhaust => run_exhaust(s, m, out, &mut o),
        Command::Limit => run_limit(s, m, out, &mut o),
    };
    if let Err(e) = result {
        o.line(format!("error: {e}"));
        o.fail(exit_code(&e));
    }
    Ok(o)
}

fn profile_of(s: &Scenario, m: &WarpedManifold) -> Result<IsoProfile> {
    match &s.profile {
        Some(spec) => parse_profile(spec, m),
        None => IsoProfile::euclidean(m.n()),
    }
}

fn area_cap(s: &Scenario, a0: f64) -> f64 {
    s.pipeline.area_cap.unwrap_or(s.pipeline.area_factor * a0)
}

/// Times `i T / count` below `min(t_max, 0.9 u(r_max))`.
fn default_times(sol: &SymmetricSolution, count: usize) -> Vec<f64> {
    let u_end = sol.u_nodes().last().copied().unwrap_or(0.0);
    let hi = sol.t_max().min(0.9 * u_end);
    if !(hi > 0.0) {
        return vec![0.0];
    }
    (0..count).map(|i| hi * i as f64 / count as f64).collect()
}

fn run_solve(s: &Scenario, m: &WarpedManifold, out: &Path, o: &mut Outcome) -> Result<()> {
    let sol = solve(m, s.pipeline.r0)?;
    write_with(out, "solution.csv", |b| sol.write_csv(b))?;
    write_with(out, "jumps.json", |b| sol.write_manifest(b))?;
    let t_max = sol.t_max();
    o.line(format!(
        "T_max = {}, proper = {}, base level m(r0) = {}",
        if t_max.is_finite() { t_max.to_string() } else { "inf".into() },
        sol.is_proper(),
        sol.base_level()
    ));
    for j in sol.jumps() {
        o.line(format!("jump at t = {}: {} -> {}", j.t, j.inner, j.outer));
    }
    o.metric("jumps", sol.jumps().len() as f64);
    if t_max.is_finite() {
        o.metric("t_max", t_max);
    }
    if t_max == 0.0 {
        o.line("no positive existence time: every sublevel set at t >= 0 is unbounded".into());
        return Ok(());
    }
    let times: Vec<f64> = if s.pipeline.times.is_empty() { default_times(&sol, 21) } else { s.pipeline.times.clone() };
    // the law compares against E_0^+, so it is sampled at positive times
    let times: Vec<f64> = times.into_iter().filter(|&t| t > 0.0).collect();
    let mut worst: f64 = 0.0;
    for &t in &times {
        worst = worst.max(sol.area_law_check(t)?);
    }
    o.metric("area_law_worst", worst);
    let ok = worst <= s.tolerances.area_law;
    o.line(format!(
        "area law |dE_t| = e^t |dE_0+| at {} times: worst relative error {worst:.3e} ({})",
        times.len(),
        if ok { "pass" } else { "FAIL" }
    ));
    if !ok {
        o.fail(EXIT_CHECK_FAILED);
    }
    Ok(())
}

#[derive(Serialize)]
struct ProfileArtifact<'a> {
    profile: &'a IsoProfile,
    nondegeneracy: crate::profile::NondegeneracyReport,
    ball_volume_lower_bound: Option<f64>,
    growth: Option<crate::profile::GrowthReport>,
}

fn run_profile(s: &Scenario, m: &WarpedManifold, out: &Path, o: &mut Outcome) -> Result<()> {
    let p = profile_of(s, m)?;
    let a0 = m.sphere_area(s.pipeline.r0)?;
    let a = area_cap(s, a0);
    let nondeg = check_nondegeneracy(&p, a);
    let strong = strong_profile(&p)?;
    write_with(out, "strong_profile.csv", |b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(["v", "isp"])?;
        for (v, isp) in strong.envelope() {
            w.write_record([v.to_string(), isp.to_string()])?;
        }
        w.flush()?;
        Ok(())
    })?;
    let ball = ball_volume_lower_bound(&p).ok();
    let growth = superlinear_growth_check(m, 1.0, 0.05).ok();
    write(
        out,
        "profile.json",
        &serde_json::to_string_pretty(&ProfileArtifact {
            profile: &p,
            nondegeneracy: nondeg.clone(),
            ball_volume_lower_bound: ball,
            growth: growth.clone(),
        })?,
    )?;
    o.metric("liminf_surrogate", nondeg.liminf_surrogate);
    if let Some(v) = nondeg.head_integral_value {
        o.metric("head_integral", v);
    }
    if let Some(v) = ball {
        o.metric("ball_volume_lower_bound", v);
        o.line(format!("unit balls have volume >= {v}"));
    }
    if p.is_upper_bound_only() {
        o.line("profile is an upper-bound candidate only".into());
    }
    if let Some(g) = growth {
        o.line(format!("volume growth exponent {:.4}, superlinear = {}", g.growth_exponent, g.superlinear));
    }
    o.line(format!(
        "nondegeneracy at A = {a}: liminf surrogate {} ({}), head integral finite = {}",
        nondeg.liminf_surrogate,
        if nondeg.exceeds_a { "exceeds A" } else { "does NOT exceed A" },
        nondeg.head_integral_finite
    ));
    if !nondeg.passes() {
        o.fail(EXIT_NONDEGENERACY);
    }
    Ok(())
}

#[derive(Serialize)]
struct HullArtifact {
    symmetric_hull_radius: Option<f64>,
    symmetric_hull_error: Option<String>,
    discrete: Option<crate::hull::HullResult>,
    cell_width: f64,
}

fn run_hull(s: &Scenario, m: &WarpedManifold, out: &Path, o: &mut Outcome) -> Result<()> {
    let r0 = s.pipeline.r0;
    let p = profile_of(s, m)?;
    let a0 = m.sphere_area(r0)?;
    let (formula, formula_err) = match symmetric_hull(m, r0) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    match (formula, &formula_err) {
        (Some(r), _) => {
            o.line(format!("hull of B({r0}) by formula: B({r})"));
            o.metric("hull_radius_formula", r);
        }
        (None, Some(e)) => o.line(format!("hull by formula: {e}")),
        _ => {}
    }
    let inner = (s.grid.hull_cells / 8).max(1);
    let outer = s.grid.hull_cells.saturating_sub(inner).max(1);
    let nodes = radial_nodes(m, r0, m.r_max(), outer, inner)?;
    let cell_width = (m.r_max() - r0) / outer as f64;
    let c = CellComplex::radial(m, &nodes)?;
    let k = nodes.iter().position(|&x| x == r0).unwrap();
    let result = minimizing_hull(&c, &RegionSet::prefix(c.len(), k), &p, area_cap(s, a0), r0);
    let discrete = match result {
        Ok(h) => {
            o.line(format!(
                "discrete hull: B({}) within R = {} (obstacle B({}))",
                h.hull_radius, h.bound, h.obstacle_radius
            ));
            o.metric("hull_radius_discrete", h.hull_radius);
            o.metric("hull_bound", h.bound);
            Some(h)
        }
        Err(e) => {
            o.line(format!("discrete hull: {e}"));
            o.fail(exit_code(&e));
            None
        }
    };
    write(
        out,
        "hull.json",
        &serde_json::to_string_pretty(&HullArtifact {
            symmetric_hull_radius: formula,
            symmetric_hull_error: formula_err,
            discrete,
            cell_width,
        })?,
    )?;
    Ok(())
}

fn run_bounds(s: &Scenario, m: &WarpedManifold, out: &Path, o: &mut Outcome) -> Result<()> {
    let r0 = s.pipeline.r0;
    let p = profile_of(s, m)?;
    let sol = solve(m, r0)?;
    let a0 = m.sphere_area(r0)?;
    let times = if s.pipeline.times.is_empty() {
        default_times(&sol, 9).into_iter().map(f64::floor).collect::<Vec<_>>()
    } else {
        s.pipeline.times.clone()
    };
    let mut times = times;
    times.dedup();
    let reports = verify_containment(&sol, &p, a0, &times);
    let summary = summarize(&reports);
    write_with(out, "bounds.csv", |b| write_reports_csv(&reports, b))?;
    write(out, "bounds.json", &serde_json::to_string_pretty(&(&reports, &summary))?)?;
    for r in &reports {
        match &r.error {
            None => o.line(format!("t = {}: rho_t = {:.6} <= R = {:.6}: {}", r.t, r.rho_t, r.r_main, r.contained)),
            Some(e) => o.line(format!("t = {}: {e}", r.t)),
        }
    }
    if let Some(note) = reports.first().and_then(|r| r.dimension_note.clone()) {
        o.line(note);
    }
    o.metric("min_margin", summary.min_margin);
    o.line(format!("all contained: {}", summary.all_contained));
    if !summary.all_contained {
        o.fail(EXIT_CHECK_FAILED);
    }
    Ok(())
}

#[derive(Serialize)]
struct WindowArtifact {
    hi: f64,
    report: crate::discrete::CertificationReport,
    /// `None` when `u` vanishes on the window and no positive time exists.
    perturbed_violation: Option<f64>,
}

#[derive(Serialize)]
struct OracleArtifact {
    seed: u64,
    cut_value: f64,
    enumerated_value: f64,
    equal: bool,
}

fn run_certify(s: &Scenario, m: &WarpedManifold, out: &Path, o: &mut Outcome) -> Result<()> {
    let r0 = s.pipeline.r0;
    let sol = solve(m, r0)?;
    let windows: Vec<f64> = if s.pipeline.windows.is_empty() {
        [1.5, 3.0, 4.5].iter().map(|d| (r0 + d).min(m.r_max())).collect()
    } else {
        s.pipeline.windows.clone()
    };
    let mut artifacts = Vec::new();
    let mut worst: f64 = 0.0;
    let mut weakest_negative = f64::INFINITY;
    for &hi in &windows {
        let cells = (((hi - r0) * s.grid.certify_density as f64).ceil() as usize).max(1);
        let nodes = radial_nodes(m, r0, hi, cells, 8)?;
        let d = RadialDiscretization::new(m, r0, &nodes, |r| sol.u_at(r))?;
        let u_hi = sol.u_at(hi)?.min(sol.t_max());
        let times: Vec<f64> = if s.pipeline.times.is_empty() {
            (0..4).map(|i| u_hi * i as f64 / 4.0).collect()
        } else {
            s.pipeline.times.iter().copied().filter(|&t| t < u_hi || t == 0.0).collect()
        };
        let report = d.certify(&times, s.tolerances.certify)?;
        // negative control: raise u on [60%, 80%] of the window
        let (a, b) = (r0 + 0.6 * (hi - r0), r0 + 0.8 * (hi - r0));
        let bump = s.pipeline.perturbation;
        let bumped = RadialDiscretization::new(m, r0, &nodes, |r| {
            sol.u_at(r).map(|u| if (a..=b).contains(&r) { u + bump } else { u })
        })?;
        let perturbed_times: Vec<f64> = (1..=8).map(|i| u_hi * i as f64 / 8.0).filter(|&t| t > 0.0).collect();
        let perturbed = if perturbed_times.is_empty() {
            None
        } else {
            Some(bumped.certify(&perturbed_times, s.tolerances.certify)?.worst_violation)
        };
        o.line(format!(
            "window [0, {hi}]: worst violation {:.3e} ({}), perturbed {}",
            report.worst_violation,
            if report.pass { "pass" } else { "FAIL" },
            perturbed.map_or("n/a (u = 0 on the window)".into(), |v| format!("{v:.3e}"))
        ));
        worst = worst.max(report.worst_violation);
        if let Some(v) = perturbed {
            weakest_negative = weakest_negative.min(v);
        }
        artifacts.push(WindowArtifact { hi, report, perturbed_violation: perturbed });
    }
    let mut oracle = Vec::new();
    for trial in 0..s.pipeline.oracle_trials as u64 {
        let seed = s.seed.wrapping_add(trial);
        let c = CellComplex::random_planar(3, 4, seed)?;
        let n = c.len();
        let (all, none) = (RegionSet::full(n), RegionSet::empty(n));
        let cut = minimize_j(&c, &all, &none, &all)?.value;
        let brute = exhaustive_minimum(&c, &all, &none, &all, Energy::J, 0.0)?.value;
        oracle.push(OracleArtifact { seed, cut_value: cut, enumerated_value: brute, equal: cut == brute });
    }
    let oracle_ok = oracle.iter().all(|x| x.equal);
    o.line(format!("min-cut vs enumeration on {} seeded complexes: {}", oracle.len(), if oracle_ok { "equal" } else { "MISMATCH" }));
    write(out, "certification.json", &serde_json::to_string_pretty(&(&artifacts, &oracle))?)?;
    o.metric("worst_violation", worst);
    if weakest_negative.is_finite() {
        o.metric("perturbed_violation", weakest_negative);
    }
    let windows_ok = artifacts.iter().all(|a| a.report.pass);
    let negative_ok = weakest_negative >= s.tolerances.perturbed_min_violation;
    if !negative_ok {
        o.line("perturbed solution was not rejected".into());
    }
    if !(windows_ok && negative_ok && oracle_ok) {
        o.fail(EXIT_CHECK_FAILED);
    }
    Ok(())
}

fn exhaustion_options(s: &Scenario) -> ExhaustionOptions {
    ExhaustionOptions {
        agreement_tolerance: s.tolerances.agreement,
        certify_tolerance: s.tolerances.certify,
        certify_spacing: s.tolerances.certify_spacing,
        ..Default::default()
    }
}

fn run_exhaust(s: &Scenario, m: &WarpedManifold, out: &Path, o: &mut Outcome) -> Result<()> {
    let r0 = s.pipeline.r0;
    let p = profile_of(s, m)?;
    let a0 = m.sphere_area(r0)?;
    let k_list: Vec<f64> = if s.pipeline.k_list.is_empty() {
        [4.0, 8.0, 16.0, 32.0, 48.0].into_iter().filter(|&k| k > r0 && k < m.r_max() - 1.0).collect()
    } else {
        s.pipeline.k_list.clone()
    };
    let report = stabilization_check(m, r0, &p, area_cap(s, a0), &k_list, &exhaustion_options(s))?;
    write(out, "stabilization.json", &report.to_json()?)?;
    for (e, sol) in report.entries.iter().zip(&report.solutions) {
        write_with(out, &format!("u_k_{}.csv", e.k), |b| sol.write_csv(b))?;
    }
    o.line(format!("T~ = {:.6}, R_2(T~) = {:.6}, k_1 = {:?}", report.t_tilde, report.r2, report.k1));
    for e in &report.entries {
        o.line(format!(
            "k = {}: T_k = {:.6}{}{}{}",
            e.k,
            e.t_k,
            if e.above_k1 { "" } else { " (below k_1)" },
            e.diff_with_prev.map_or(String::new(), |d| format!(", |u_k - u_prev| = {d:.3e}")),
            if e.certified { ", certified" } else { "" }
        ));
    }
    o.metric("t_tilde", report.t_tilde);
    o.metric("r2", report.r2);
    match report.k1 {
        None => o.line("no listed k exceeds R_2(T~); add larger cutoffs".into()),
        Some(k1) => {
            o.metric("k1", k1);
            o.line(format!("stabilization: {}", if report.pass { "pass" } else { "FAIL" }));
            if !report.pass {
                o.fail(EXIT_CHECK_FAILED);
            }
        }
    }
    Ok(())
}

fn run_limit(s: &Scenario, m: &WarpedManifold, out: &Path, o: &mut Outcome) -> Result<()> {
    let r0 = s.pipeline.r0;
    let p = profile_of(s, m)?;
    let l_list = if s.pipeline.l_list.is_empty() { vec![0.5, 1.0] } else { s.pipeline.l_list.clone() };
    let limit = limit_solution(m, r0, &p, &l_list, &exhaustion_options(s))?;
    write_with(out, "limit.csv", |b| limit.write_csv(b))?;
    write(out, "limit.json", &serde_json::to_string_pretty(&limit)?)?;
    for piece in &limit.pieces {
        o.line(format!(
            "l = {}: A = {:.6}, k = {}, stabilization {}{}",
            piece.l,
            piece.area_cap,
            piece.k1,
            if piece.stabilization_pass { "pass" } else { "FAIL" },
            piece.diff_with_prev.map_or(String::new(), |d| format!(", agreement {d:.3e}"))
        ));
    }
    o.metric("direct_diff", limit.direct_diff);
    o.line(format!("limit vs direct solve: {:.3e} ({})", limit.direct_diff, if limit.pass { "pass" } else { "FAIL" }));
    if !limit.pass {
        o.fail(EXIT_CHECK_FAILED);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("imcf-scenario-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn empty_config_is_the_euclidean_solve() {
        let s = Scenario::from_json("{}").unwrap();
        assert_eq!(s.pipeline.command, Command::Solve);
        assert_eq!(s.manifold.model, "euclidean");
        assert!(Scenario::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(Scenario::from_json(r#"{"pipeline": {"r0": -1}}"#).is_err());
    }

    #[test]
    fn profile_strings() {
        let m = WarpedManifold::euclidean(3, 10.0).unwrap();
        let p = parse_profile("power:c=4.836,a=0.6667", &m).unwrap();
        assert_eq!(p.value(1.0), 4.836);
        assert!(parse_profile("power:c=4.836", &m).is_err());
        assert!(parse_profile("power:c", &m).is_err());
        assert!(parse_profile("nope", &m).is_err());
        let pw = parse_profile("piecewise:c=1,small=0.5,large=0.2,vbreak=2,vmax=100", &m).unwrap();
        assert_eq!(pw.v_max(), 100.0);
        assert!(parse_profile("candidate", &m).unwrap().is_upper_bound_only());
    }

    #[test]
    fn commands_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
    }

    #[test]
    fn solve_pipeline_writes_artifacts() {
        let out = tmp("solve");
        let s = Scenario::from_json(r#"{"manifold": {"model": "dip", "r_max": 10}}"#).unwrap();
        let o = run(&s, &out).unwrap();
        assert_eq!(o.exit, EXIT_OK, "{:?}", o.summary);
        assert_eq!(o.metrics["jumps"], 1.0);
        assert!(out.join("solution.csv").exists() && out.join("jumps.json").exists());
        // byte-stable reruns
        let first = fs::read(out.join("solution.csv")).unwrap();
        run(&s, &out).unwrap();
        assert_eq!(first, fs::read(out.join("solution.csv")).unwrap());
        let _ = fs::remove_dir_all(&out);
    }

    #[test]
    fn exit_codes() {
        let out = tmp("codes");
        let s = Scenario::from_json(
            r#"{"manifold": {"model": "cylinder", "r_max": 20}, "pipeline": {"command": "profile", "area_factor": 2},
                "profile": "power:c=12.566370614359172,a=0"}"#,
        )
        .unwrap();
        assert_eq!(run(&s, &out).unwrap().exit, EXIT_NONDEGENERACY);
        let s = Scenario::from_json(r#"{"pipeline": {"command": "bounds", "times": [0, 1, 2, 3]}}"#).unwrap();
        let o = run(&s, &out).unwrap();
        assert_eq!(o.exit, EXIT_OK, "{:?}", o.summary);
        // an inflated profile puts the bound inside the flow
        let s = Scenario::from_json(
            r#"{"pipeline": {"command": "bounds", "times": [0, 1, 2, 3]}, "profile": "power:c=483.6,a=0.6667"}"#,
        )
        .unwrap();
        assert_eq!(run(&s, &out).unwrap().exit, EXIT_CHECK_FAILED);
        let _ = fs::remove_dir_all(&out);
    }

    #[test]
    fn refine_reports_sensitivity() {
        let out = tmp("refine");
        let s = Scenario::from_json(r#"{"manifold": {"model": "log_cylinder", "r_max": 20}, "grid": {"refine": true}}"#)
            .unwrap();
        let o = run(&s, &out).unwrap();
        assert_eq!(o.exit, EXIT_OK, "{:?}", o.summary);
        assert!(out.join("sensitivity.json").exists());
        assert!(out.join("refined/solution.csv").exists());
        let _ = fs::remove_dir_all(&out);
    }
}
