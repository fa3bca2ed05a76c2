//! Explicit radius bounds and containment checks.
//!
//! With `RI(v) = int_0^v dw / Ip(w)`:
//!
//! * barrier: `R = r + 1 + 2 RI(Isp^{-1}(a))`, the radius beyond which a
//!   set of perimeter `a` that is minimizing outside `B(r)` cannot reach;
//! * exhaustion radii: `R_i(t) = r0 + 2i + (2i + e^t) RI(Isp^{-1}(e^t a0))`;
//! * main bound: `R(t) = R_1(t)`, valid up to `T~ = log(A / a0)`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{IsoProfile, StrongProfile};
use crate::symmetric::SymmetricSolution;

/// Dimensions for which the existence theorem is stated.
pub const THEOREM_DIMENSIONS: std::ops::RangeInclusive<usize> = 3..=7;

pub fn dimension_note(n: usize) -> Option<String> {
    (!THEOREM_DIMENSIONS.contains(&n)).then(|| {
        format!("n = {n} is outside the theorem's stated dimension range [3, 7]")
    })
}

/// `RI(Isp^{-1}(a))`.
pub fn escape_integral(p: &IsoProfile, a: f64) -> Result<f64> {
    let sp = StrongProfile::new(p)?;
    p.reciprocal_integral(sp.inverse(a)?)
}

pub fn barrier_radius(p: &IsoProfile, r: f64, a: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidInput(format!("radius {r} must be nonnegative")));
    }
    Ok(r + 1.0 + 2.0 * escape_integral(p, a)?)
}

pub fn exhaustion_radius(p: &IsoProfile, r0: f64, a0: f64, t: f64, i: u32) -> Result<f64> {
    if !(i == 1 || i == 2) {
        return Err(Error::InvalidInput(format!("exhaustion index {i} must be 1 or 2")));
    }
    let et = t.exp();
    let k = 2.0 * i as f64;
    Ok(r0 + k + (k + et) * escape_integral(p, et * a0)?)
}

/// `T~ = log(A / a0)`.
pub fn horizon(a0: f64, area_cap: f64) -> f64 {
    (area_cap / a0).ln()
}

/// `R(t) = r0 + 2 + (2 + e^t) RI(Isp^{-1}(e^t a0))` for `0 <= t <= log(A / a0)`.
pub fn main_bound(p: &IsoProfile, r0: f64, a0: f64, t: f64, area_cap: f64) -> Result<f64> {
    let h = horizon(a0, area_cap);
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time {t} must be nonnegative")));
    }
    // allow rounding when t is computed as log(A/a0)
    if t > h * (1.0 + 1e-14) + 1e-15 {
        return Err(Error::BeyondHorizon { t, horizon: h });
    }
    let et = t.exp().min(area_cap / a0);
    Ok(r0 + 2.0 + (2.0 + et) * escape_integral(p, et * a0)?)
}

/// For `Ip = c v^{(n-1)/n}` the main bound grows like `K e^{nt/(n-1)}` with
/// `K = (n/c) (a0/c)^{1/(n-1)}`; `None` for other profiles.
pub fn asymptotic_coefficient(p: &IsoProfile, n: usize, a0: f64) -> Option<f64> {
    match *p.form() {
        crate::profile::ProfileForm::Power { c, alpha } if n >= 2 => {
            let nf = n as f64;
            ((alpha - (nf - 1.0) / nf).abs() < 1e-12).then(|| (nf / c) * (a0 / c).powf(1.0 / (nf - 1.0)))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub t: f64,
    pub r_main: f64,
    pub r1: f64,
    pub r2: f64,
    pub r_barrier: f64,
    pub rho_t: f64,
    pub contained: bool,
    pub margin: f64,
    pub error: Option<String>,
    pub dimension_note: Option<String>,
}

/// Checks `E_t = {r < rho_t} ⊆ B(R_1(t))` with `a0 = |dE_0|`.
///
/// Per-time failures (time beyond the flow, area beyond the profile tail)
/// are recorded in the report rather than aborting the batch.
pub fn verify_containment(sol: &SymmetricSolution, p: &IsoProfile, a0: f64, times: &[f64]) -> Vec<BoundReport> {
    let r0 = sol.r0();
    let note = dimension_note(sol.manifold().n());
    times
        .iter()
        .map(|&t| {
            let evaluated = (|| -> Result<(f64, f64, f64, f64)> {
                let (rho, _) = sol.sublevel(t)?;
                let r1 = exhaustion_radius(p, r0, a0, t, 1)?;
                let r2 = exhaustion_radius(p, r0, a0, t, 2)?;
                let rb = barrier_radius(p, r0, t.exp() * a0)?;
                Ok((rho, r1, r2, rb))
            })();
            match evaluated {
                Ok((rho_t, r1, r2, r_barrier)) => BoundReport {
                    t,
                    r_main: r1,
                    r1,
                    r2,
                    r_barrier,
                    rho_t,
                    contained: rho_t <= r1,
                    margin: r1 - rho_t,
                    error: None,
                    dimension_note: note.clone(),
                },
                Err(e) => BoundReport {
                    t,
                    r_main: f64::NAN,
                    r1: f64::NAN,
                    r2: f64::NAN,
                    r_barrier: f64::NAN,
                    rho_t: f64::NAN,
                    contained: false,
                    margin: f64::NAN,
                    error: Some(e.to_string()),
                    dimension_note: note.clone(),
                },
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentSummary {
    pub checks: usize,
    pub all_contained: bool,
    pub min_margin: f64,
    pub failures: Vec<f64>,
}

pub fn summarize(reports: &[BoundReport]) -> ContainmentSummary {
    ContainmentSummary {
        checks: reports.len(),
        all_contained: reports.iter().all(|r| r.contained),
        min_margin: reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min),
        failures: reports.iter().filter(|r| !r.contained).map(|r| r.t).collect(),
    }
}

/// CSV rows `t,rho_t,R1,R_main,contained,margin`.
pub fn write_reports_csv<W: Write>(reports: &[BoundReport], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "rho_t", "R1", "R_main", "contained", "margin"])?;
    for r in reports {
        w.write_record([
            r.t.to_string(),
            r.rho_t.to_string(),
            r.r1.to_string(),
            r.r_main.to_string(),
            r.contained.to_string(),
            r.margin.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Exact solution of `V' = -Ip(V) / factor`, `V(0) = V0`:
/// `V(rho) = Phi^{-1}(Phi(V0) - rho / factor)` with `Phi = RI`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeComparison {
    profile: IsoProfile,
    v0: f64,
    factor: f64,
    phi0: f64,
}

pub fn ode_comparison(p: &IsoProfile, v0: f64, factor: f64) -> Result<OdeComparison> {
    if !(v0 > 0.0) || !(factor >= 1.0) {
        return Err(Error::InvalidInput(format!("need V0 > 0 and factor >= 1 (got {v0}, {factor})")));
    }
    let phi0 = p.reciprocal_integral(v0)?;
    Ok(OdeComparison { profile: p.clone(), v0, factor, phi0 })
}

impl OdeComparison {
    /// Radius at which `V` reaches zero.
    pub fn extinction_radius(&self) -> f64 {
        self.factor * self.phi0
    }

    pub fn value(&self, rho: f64) -> Result<f64> {
        if !(rho >= 0.0) {
            return Err(Error::InvalidInput(format!("radius {rho} must be nonnegative")));
        }
        let target = self.phi0 - rho / self.factor;
        if target <= 0.0 {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (0.0, self.v0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.profile.reciprocal_integral(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `e^t S - A` with `A = |dE_t \ B(rho)|` and `S = |E_t ∩ dB(rho)|`.
pub fn excess_inequality_check(sol: &SymmetricSolution, t: f64, rho: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("time {t} must be positive")));
    }
    if !(rho >= sol.r0() && rho <= sol.manifold().r_max()) {
        return Err(Error::InvalidInput(format!("radius {rho} must lie in [r0, r_max]")));
    }
    let (rho_t, _) = sol.sublevel(t)?;
    let m = sol.manifold();
    let (a, s) = if rho < rho_t { (m.sphere_area(rho_t)?, m.sphere_area(rho)?) } else { (0.0, 0.0) };
    Ok(t.exp() * s - a)
}
