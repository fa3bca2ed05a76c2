//! Isoperimetric profiles `Ip(v)`, the strong profile `Isp(v) = inf_{w >= v} Ip(w)`,
//! its inverse, and the reciprocal integral `int_0^v dw / Ip(w)`.
//!
//! Three representations are supported: a power law `c v^alpha`, a piecewise
//! power law with one break volume, and a table of samples interpolated
//! linearly. Below the first sample a table is continued by a power law whose
//! exponent is the least-squares slope of `log Ip` against `log v` over the
//! first decade of samples, anchored at the first sample. The singular head
//! of `1/Ip` is then integrated analytically and the linear pieces exactly.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::warped::{read_two_columns, WarpedManifold};

/// Fraction of the represented range used as the tail window for `liminf` surrogates.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.2;

/// Largest represented volume for analytic profiles.
pub const DEFAULT_V_MAX: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileForm {
    /// `c v^alpha`.
    Power { c: f64, alpha: f64 },
    /// `c v^small_alpha` up to `v_break`, continued continuously as `~ v^large_alpha`.
    PiecewisePower {
        c: f64,
        small_alpha: f64,
        large_alpha: f64,
        v_break: f64,
    },
    /// Linear interpolation between `(volume, Ip)` samples.
    Tabulated { volumes: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoProfile {
    form: ProfileForm,
    v_max: f64,
    tail_fraction: f64,
    upper_bound_only: bool,
}

impl IsoProfile {
    pub fn power(c: f64, alpha: f64) -> Result<Self> {
        if !(c > 0.0) || !(alpha >= 0.0) || !c.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!("power profile needs c > 0, alpha >= 0 (got {c}, {alpha})")));
        }
        Ok(Self::from_form(ProfileForm::Power { c, alpha }, DEFAULT_V_MAX))
    }

    /// Profile of flat `R^n`: `n^{(n-1)/n} omega_{n-1}^{1/n} v^{(n-1)/n}`.
    pub fn euclidean(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("dimension n = {n} must be at least 2")));
        }
        let nf = n as f64;
        let c = nf.powf((nf - 1.0) / nf) * crate::warped::unit_sphere_area(n).powf(1.0 / nf);
        Self::power(c, (nf - 1.0) / nf)
    }

    pub fn piecewise_power(c: f64, small_alpha: f64, large_alpha: f64, v_break: f64) -> Result<Self> {
        if !(c > 0.0) || !(small_alpha >= 0.0) || !(large_alpha >= 0.0) || !(v_break > 0.0) {
            return Err(Error::InvalidInput("piecewise power profile needs c, v_break > 0 and exponents >= 0".into()));
        }
        Ok(Self::from_form(
            ProfileForm::PiecewisePower { c, small_alpha, large_alpha, v_break },
            DEFAULT_V_MAX,
        ))
    }

    pub fn tabulated(volumes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if volumes.len() < 2 || volumes.len() != values.len() {
            return Err(Error::EmptyTable("need at least two (v, Ip) samples".into()));
        }
        if !(volumes[0] > 0.0) || volumes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::EmptyTable("volumes must be positive and strictly increasing".into()));
        }
        if values.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::EmptyTable("profile values must be finite and nonnegative".into()));
        }
        let v_max = *volumes.last().unwrap();
        Ok(Self::from_form(ProfileForm::Tabulated { volumes, values }, v_max))
    }

    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let (v, ip) = read_two_columns(reader)?;
        Self::tabulated(v, ip)
    }

    fn from_form(form: ProfileForm, v_max: f64) -> Self {
        Self { form, v_max, tail_fraction: DEFAULT_TAIL_FRACTION, upper_bound_only: false }
    }

    pub fn with_v_max(mut self, v_max: f64) -> Self {
        if !matches!(self.form, ProfileForm::Tabulated { .. }) {
            self.v_max = v_max;
        }
        self
    }

    pub fn with_tail_fraction(mut self, fraction: f64) -> Self {
        self.tail_fraction = fraction.clamp(1e-6, 1.0);
        self
    }

    /// Marks the profile as an upper bound for `Ip` (e.g. from a restricted search).
    pub fn flagged_upper_bound(mut self) -> Self {
        self.upper_bound_only = true;
        self
    }

    /// Same profile with every perimeter value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let form = match &self.form {
            ProfileForm::Power { c, alpha } => ProfileForm::Power { c: c * factor, alpha: *alpha },
            ProfileForm::PiecewisePower { c, small_alpha, large_alpha, v_break } => ProfileForm::PiecewisePower {
                c: c * factor,
                small_alpha: *small_alpha,
                large_alpha: *large_alpha,
                v_break: *v_break,
            },
            ProfileForm::Tabulated { volumes, values } => ProfileForm::Tabulated {
                volumes: volumes.clone(),
                values: values.iter().map(|x| x * factor).collect(),
            },
        };
        Self { form, ..self.clone() }
    }

    pub fn form(&self) -> &ProfileForm {
        &self.form
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    pub fn tail_fraction(&self) -> f64 {
        self.tail_fraction
    }

    pub fn is_upper_bound_only(&self) -> bool {
        self.upper_bound_only
    }

    /// `Ip(v)`. Tabulated profiles are held constant beyond the last sample.
    pub fn value(&self, v: f64) -> f64 {
        match &self.form {
            ProfileForm::Power { c, alpha } => c * v.powf(*alpha),
            ProfileForm::PiecewisePower { c, small_alpha, large_alpha, v_break } => {
                if v <= *v_break {
                    c * v.powf(*small_alpha)
                } else {
                    c * v_break.powf(*small_alpha) * (v / v_break).powf(*large_alpha)
                }
            }
            ProfileForm::Tabulated { volumes, values } => {
                if v <= volumes[0] {
                    let alpha = self.head_exponent();
                    return values[0] * (v / volumes[0]).powf(alpha);
                }
                if v >= *volumes.last().unwrap() {
                    return *values.last().unwrap();
                }
                let i = volumes.partition_point(|&x| x <= v) - 1;
                let t = (v - volumes[i]) / (volumes[i + 1] - volumes[i]);
                values[i] + t * (values[i + 1] - values[i])
            }
        }
    }

    /// Exponent of the power law governing `Ip` near `v = 0`.
    pub fn head_exponent(&self) -> f64 {
        match &self.form {
            ProfileForm::Power { alpha, .. } => *alpha,
            ProfileForm::PiecewisePower { small_alpha, .. } => *small_alpha,
            ProfileForm::Tabulated { volumes, values } => fit_head_exponent(volumes, values),
        }
    }

    /// Infimum of `Ip` over the last `tail_fraction` of the represented range;
    /// analytic forms growing without bound return `+inf`.
    pub fn liminf_surrogate(&self) -> f64 {
        match &self.form {
            ProfileForm::Power { c, alpha } => {
                if *alpha > 0.0 {
                    f64::INFINITY
                } else {
                    *c
                }
            }
            ProfileForm::PiecewisePower { c, small_alpha, large_alpha, v_break } => {
                if *large_alpha > 0.0 {
                    f64::INFINITY
                } else {
                    c * v_break.powf(*small_alpha)
                }
            }
            ProfileForm::Tabulated { volumes, values } => {
                let start = (1.0 - self.tail_fraction) * self.v_max;
                let mut m = self.value(start);
                for (&v, &ip) in volumes.iter().zip(values) {
                    if v >= start {
                        m = m.min(ip);
                    }
                }
                m
            }
        }
    }

    /// `int_0^v dw / Ip(w)`.
    pub fn reciprocal_integral(&self, v: f64) -> Result<f64> {
        if !(v >= 0.0) {
            return Err(Error::InvalidInput(format!("volume {v} must be nonnegative")));
        }
        let head = self.head_exponent();
        if head >= 1.0 {
            return Err(Error::IntegralDiverges { exponent: head });
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        match &self.form {
            ProfileForm::Power { c, alpha } => Ok(v.powf(1.0 - alpha) / (c * (1.0 - alpha))),
            ProfileForm::PiecewisePower { c, small_alpha, large_alpha, v_break } => {
                let head_to = v.min(*v_break);
                let mut total = head_to.powf(1.0 - small_alpha) / (c * (1.0 - small_alpha));
                if v > *v_break {
                    let cb = c * v_break.powf(*small_alpha);
                    total += if (*large_alpha - 1.0).abs() < 1e-15 {
                        v_break / cb * (v / v_break).ln()
                    } else {
                        v_break.powf(*large_alpha) / cb * (v.powf(1.0 - large_alpha) - v_break.powf(1.0 - large_alpha))
                            / (1.0 - large_alpha)
                    };
                }
                Ok(total)
            }
            ProfileForm::Tabulated { volumes, values } => {
                if v > self.v_max * (1.0 + 1e-12) {
                    return Err(Error::VolumeOutOfRange { volume: v, v_max: self.v_max });
                }
                let (v1, i1) = (volumes[0], values[0]);
                if !(i1 > 0.0) {
                    return Err(Error::IntegralDiverges { exponent: f64::INFINITY });
                }
                let x = v.min(v1);
                let mut total = v1.powf(head) / i1 * x.powf(1.0 - head) / (1.0 - head);
                for i in 0..volumes.len() - 1 {
                    let (a, b) = (volumes[i], volumes[i + 1]);
                    if a >= v {
                        break;
                    }
                    let hi = b.min(v);
                    let (ya, yb) = (values[i], values[i + 1]);
                    let slope = (yb - ya) / (b - a);
                    let y_hi = ya + slope * (hi - a);
                    if !(ya > 0.0) || !(y_hi > 0.0) {
                        return Err(Error::IntegralDiverges { exponent: f64::INFINITY });
                    }
                    total += if slope.abs() <= 1e-14 * ya.max(y_hi) / (b - a) {
                        (hi - a) / ya
                    } else {
                        (y_hi / ya).ln() / slope
                    };
                }
                Ok(total)
            }
        }
    }
}

fn fit_head_exponent(volumes: &[f64], values: &[f64]) -> f64 {
    let decade_end = 10.0 * volumes[0];
    let mut count = volumes.iter().take_while(|&&v| v <= decade_end * (1.0 + 1e-12)).count();
    count = count.max(2);
    let pts: Vec<(f64, f64)> = volumes[..count]
        .iter()
        .zip(&values[..count])
        .map(|(&v, &ip)| (v.ln(), ip.ln()))
        .collect();
    if pts.iter().any(|p| !p.1.is_finite()) {
        return f64::INFINITY;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// `Isp(v) = inf_{w >= v} Ip(w)` with its inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongProfile {
    base: IsoProfile,
    /// Running minimum at the sample volumes (tabulated profiles only).
    envelope: Vec<(f64, f64)>,
    limit_inf: f64,
}

impl StrongProfile {
    pub fn new(base: &IsoProfile) -> Result<Self> {
        let envelope = match &base.form {
            ProfileForm::Tabulated { volumes, values } => {
                if volumes.is_empty() {
                    return Err(Error::EmptyTable("no samples".into()));
                }
                let mut env = vec![(0.0, 0.0); volumes.len()];
                let mut running = f64::INFINITY;
                for i in (0..volumes.len()).rev() {
                    running = running.min(values[i]);
                    env[i] = (volumes[i], running);
                }
                env
            }
            _ => Vec::new(),
        };
        Ok(Self { base: base.clone(), envelope, limit_inf: base.liminf_surrogate() })
    }

    pub fn base(&self) -> &IsoProfile {
        &self.base
    }

    pub fn envelope(&self) -> &[(f64, f64)] {
        &self.envelope
    }

    pub fn limit_inf(&self) -> f64 {
        self.limit_inf
    }

    /// `Isp(v)` on the represented range.
    pub fn value(&self, v: f64) -> f64 {
        match &self.base.form {
            // nondecreasing analytic forms: the envelope is the profile itself
            ProfileForm::Power { .. } | ProfileForm::PiecewisePower { .. } => self.base.value(v),
            ProfileForm::Tabulated { volumes, .. } => {
                let last = volumes.len() - 1;
                if v >= volumes[last] {
                    return self.envelope[last].1;
                }
                if v <= volumes[0] {
                    let head = self.base.value(v);
                    let alpha = self.base.head_exponent();
                    let head_inf = if alpha > 0.0 { head } else { self.base.value(volumes[0]) };
                    return head_inf.min(self.envelope[0].1);
                }
                let i = volumes.partition_point(|&x| x <= v) - 1;
                self.base.value(v).min(self.envelope[i + 1].1)
            }
        }
    }

    /// `Isp^{-1}(a) = sup { v : Isp(v) <= a }`; errors once `a` reaches the tail infimum.
    pub fn inverse(&self, a: f64) -> Result<f64> {
        if !(a > 0.0) {
            return Err(Error::InvalidInput(format!("area {a} must be positive")));
        }
        if a >= self.limit_inf {
            return Err(Error::NonDegeneracyExceeded { area: a, liminf: self.limit_inf });
        }
        match &self.base.form {
            ProfileForm::Power { c, alpha } => {
                if *alpha == 0.0 {
                    // a < c: no volume has perimeter <= a
                    Ok(0.0)
                } else {
                    Ok((a / c).powf(1.0 / alpha))
                }
            }
            ProfileForm::PiecewisePower { c, small_alpha, large_alpha, v_break } => {
                let cb = c * v_break.powf(*small_alpha);
                if a <= cb {
                    if *small_alpha == 0.0 {
                        Ok(if a >= *c { *v_break } else { 0.0 })
                    } else {
                        Ok((a / c).powf(1.0 / small_alpha))
                    }
                } else {
                    Ok(v_break * (a / cb).powf(1.0 / large_alpha))
                }
            }
            ProfileForm::Tabulated { volumes, values } => {
                let idx = self.envelope.iter().rposition(|&(_, isp)| isp <= a);
                match idx {
                    None => {
                        let alpha = self.base.head_exponent();
                        if alpha > 0.0 && values[0] > a {
                            Ok(volumes[0] * (a / values[0]).powf(1.0 / alpha))
                        } else {
                            Ok(0.0)
                        }
                    }
                    Some(i) => {
                        // a < limit_inf guarantees i is not the last sample
                        let (v0, v1) = (volumes[i], volumes[i + 1]);
                        let (y0, y1) = (values[i], values[i + 1]);
                        if y1 > y0 && y0 <= a {
                            Ok(v0 + (a - y0) / (y1 - y0) * (v1 - v0))
                        } else {
                            Ok(v0)
                        }
                    }
                }
            }
        }
    }
}

pub fn strong_profile(p: &IsoProfile) -> Result<StrongProfile> {
    StrongProfile::new(p)
}

/// Outcome of testing `liminf Ip > A` and `int_0^{v0} dv/Ip < inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub area: f64,
    pub liminf_surrogate: f64,
    pub exceeds_a: bool,
    pub head_volume: f64,
    pub head_integral_finite: bool,
    pub head_integral_value: Option<f64>,
}

impl NondegeneracyReport {
    pub fn passes(&self) -> bool {
        self.exceeds_a && self.head_integral_finite
    }
}

pub fn check_nondegeneracy(p: &IsoProfile, area: f64) -> NondegeneracyReport {
    let liminf = p.liminf_surrogate();
    let head_volume = 1.0_f64.min(p.v_max());
    let head = p.reciprocal_integral(head_volume).ok();
    NondegeneracyReport {
        area,
        liminf_surrogate: liminf,
        exceeds_a: liminf > area,
        head_volume,
        head_integral_finite: head.is_some_and(f64::is_finite),
        head_integral_value: head,
    }
}

/// The volume `V` with `int_0^V dv/Ip = 1`; every unit ball has at least this volume.
pub fn ball_volume_lower_bound(p: &IsoProfile) -> Result<f64> {
    let integral = |v: f64| p.reciprocal_integral(v);
    integral(1.0)?;
    let mut hi = 1.0;
    while integral(hi)? < 1.0 {
        hi *= 2.0;
        if hi > p.v_max() {
            return Err(Error::VolumeOutOfRange { volume: hi, v_max: p.v_max() });
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if integral(mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub window: (f64, f64),
    pub growth_exponent: f64,
    pub ratio_increasing: bool,
    pub superlinear: bool,
    /// `max V(r)/r` over the window when growth is not superlinear.
    pub linear_constant: Option<f64>,
    /// Implied bound `liminf Ip <= 2C`.
    pub liminf_bound: Option<f64>,
}

/// Fits `V(r)` over `[r_max / 10^decades, r_max]` on 32 log-spaced radii.
pub fn superlinear_growth_check(m: &WarpedManifold, decades: f64, exponent_threshold: f64) -> Result<GrowthReport> {
    let end = m.r_max();
    let start = end / 10f64.powf(decades);
    const SAMPLES: usize = 32;
    let radii: Vec<f64> = (0..SAMPLES)
        .map(|i| start * (end / start).powf(i as f64 / (SAMPLES - 1) as f64))
        .collect();
    let mut vols = Vec::with_capacity(SAMPLES);
    let mut acc = m.ball_volume(radii[0])?;
    vols.push(acc);
    for w in radii.windows(2) {
        acc += m.shell_volume(w[0], w[1])?;
        vols.push(acc);
    }
    let ratios: Vec<f64> = vols.iter().zip(&radii).map(|(v, r)| v / r).collect();
    let ratio_increasing = ratios.windows(2).all(|w| w[1] > w[0] * (1.0 + 1e-9));
    let growth_exponent = (vols[SAMPLES - 1] / vols[0]).ln() / (end / start).ln();
    let superlinear = ratio_increasing && growth_exponent > 1.0 + exponent_threshold;
    let (linear_constant, liminf_bound) = if superlinear {
        (None, None)
    } else {
        let c = ratios.iter().copied().fold(0.0, f64::max);
        (Some(c), Some(2.0 * c))
    };
    Ok(GrowthReport {
        window: (start, end),
        growth_exponent,
        ratio_increasing,
        superlinear,
        linear_constant,
        liminf_bound,
    })
}

/// Upper-bound candidate for `Ip` obtained by minimizing perimeter over unions of
/// at most three annuli with endpoints on `grid`.
///
/// Volume buckets are `[V(grid[j]), V(grid[j+1]))`; each bucket reports the least
/// perimeter among unions whose volume falls in it. The returned profile is
/// flagged upper-bound-only.
pub fn symmetric_candidate_profile(m: &WarpedManifold, grid: &[f64]) -> Result<IsoProfile> {
    const MIN_CELLS: usize = 8;
    const MAX_CELLS: usize = 48;
    if grid.len() < MIN_CELLS + 1 {
        return Err(Error::GridTooCoarse { cells: grid.len().saturating_sub(1), required: MIN_CELLS });
    }
    if grid.len() > MAX_CELLS + 1 {
        return Err(Error::InvalidInput(format!("candidate grid limited to {MAX_CELLS} cells")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid[0] < 0.0 {
        return Err(Error::InvalidInput("candidate grid must be increasing and nonnegative".into()));
    }
    let areas: Vec<f64> = grid.iter().map(|&r| m.sphere_area(r)).collect::<Result<_>>()?;
    let mut vols = vec![m.ball_volume(grid[0])?];
    for w in grid.windows(2) {
        let last = *vols.last().unwrap();
        vols.push(last + m.shell_volume(w[0], w[1])?);
    }
    let p = grid.len();
    let buckets = &vols[1..];
    let mut best = vec![f64::INFINITY; buckets.len()];
    let mut record = |vol: f64, per: f64| {
        let j = buckets.partition_point(|&b| b <= vol);
        if j > 0 {
            let slot = &mut best[j - 1];
            if per < *slot {
                *slot = per;
            }
        }
    };
    for a1 in 0..p {
        for b1 in a1 + 1..p {
            let v1 = vols[b1] - vols[a1];
            let p1 = areas[a1] + areas[b1];
            record(v1, p1);
            for a2 in b1 + 1..p {
                for b2 in a2 + 1..p {
                    let v2 = v1 + vols[b2] - vols[a2];
                    let p2 = p1 + areas[a2] + areas[b2];
                    record(v2, p2);
                    for a3 in b2 + 1..p {
                        for b3 in a3 + 1..p {
                            record(v2 + vols[b3] - vols[a3], p2 + areas[a3] + areas[b3]);
                        }
                    }
                }
            }
        }
    }
    let (vs, ips): (Vec<f64>, Vec<f64>) = buckets
        .iter()
        .zip(&best)
        .filter(|(&v, b)| v > 0.0 && b.is_finite())
        .map(|(&v, &b)| (v, b))
        .unzip();
    Ok(IsoProfile::tabulated(vs, ips)?.flagged_upper_bound())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    fn c3() -> f64 {
        (36.0 * PI).powf(1.0 / 3.0)
    }

    #[test]
    fn euclidean_profile_constants() {
        let p3 = IsoProfile::euclidean(3).unwrap();
        assert!(close(p3.value(1.0), c3(), 1e-14));
        // the unit disc: perimeter 2 pi at area pi
        let p2 = IsoProfile::euclidean(2).unwrap();
        assert!(close(p2.value(PI), 2.0 * PI, 1e-14));
        assert!(IsoProfile::euclidean(1).is_err());
    }

    #[test]
    fn strong_profile_running_minimum() {
        let p = IsoProfile::tabulated(vec![1.0, 2.0, 3.0], vec![3.0, 2.0, 4.0]).unwrap();
        let sp = strong_profile(&p).unwrap();
        assert_eq!(sp.envelope(), &[(1.0, 2.0), (2.0, 2.0), (3.0, 4.0)]);
        let dip = IsoProfile::tabulated(vec![1.0, 2.0], vec![3.0, 1.0]).unwrap();
        assert_eq!(strong_profile(&dip).unwrap().value(1.0), 1.0);
        let pow = IsoProfile::power(1.0, 2.0 / 3.0).unwrap();
        let sp = strong_profile(&pow).unwrap();
        for v in [0.1, 1.0, 8.0, 1000.0] {
            assert_eq!(sp.value(v), pow.value(v));
        }
    }

    #[test]
    fn inverse_examples() {
        let sp = strong_profile(&IsoProfile::power(1.0, 2.0 / 3.0).unwrap()).unwrap();
        assert!(close(sp.inverse(4.0).unwrap(), 8.0, 1e-12));
        assert!(close(sp.inverse(1.0).unwrap(), 1.0, 1e-12));
        let step = IsoProfile::tabulated(vec![5.0, 10.0], vec![2.0, 6.0]).unwrap();
        let sp = strong_profile(&step).unwrap();
        assert!(close(sp.inverse(2.0).unwrap(), 5.0, 1e-12));
        let flat = strong_profile(&IsoProfile::power(1.0, 0.0).unwrap()).unwrap();
        assert!(matches!(flat.inverse(2.0), Err(Error::NonDegeneracyExceeded { .. })));
    }

    #[test]
    fn reciprocal_integral_examples() {
        let p = IsoProfile::power(1.0, 2.0 / 3.0).unwrap();
        assert!(close(p.reciprocal_integral(8.0).unwrap(), 6.0, 1e-12));
        let e = IsoProfile::power(c3(), 2.0 / 3.0).unwrap();
        let got = e.reciprocal_integral(1.0).unwrap();
        assert!(close(got, 3.0 / c3(), 1e-12));
        assert!(close(got, 0.62035, 1e-5));
        let lin = IsoProfile::power(1.0, 1.0).unwrap();
        assert!(matches!(lin.reciprocal_integral(1.0), Err(Error::IntegralDiverges { .. })));
    }

    #[test]
    fn tabulated_head_fit_recovers_power_law() {
        let vols: Vec<f64> = (1..=40).map(|i| 0.1 * i as f64).collect();
        let vals: Vec<f64> = vols.iter().map(|v: &f64| v.powf(2.0 / 3.0)).collect();
        let p = IsoProfile::tabulated(vols, vals).unwrap();
        assert!(close(p.head_exponent(), 2.0 / 3.0, 1e-12));
        // exact head; chords lie below the concave power law, so 1/Ip is overestimated
        let got = p.reciprocal_integral(4.0).unwrap();
        let exact = 3.0 * 4f64.powf(1.0 / 3.0);
        assert!(got > exact && close(got, exact, 2e-3));
        let breaks: Vec<f64> = (1..=40).map(|i| 0.1 * i as f64).collect();
        let pieces = crate::quadrature::piecewise_simpson(&|v: f64| 1.0 / p.value(v), &breaks, 1e-13);
        let oracle = 3.0 * 0.1f64.powf(1.0 / 3.0) + pieces;
        assert!(close(got, oracle, 1e-11));
        let divergent = IsoProfile::tabulated(vec![1.0, 2.0, 4.0], vec![1.0, 2.0, 4.0]).unwrap();
        assert!(matches!(divergent.reciprocal_integral(2.0), Err(Error::IntegralDiverges { .. })));
    }

    #[test]
    fn nondegeneracy_examples() {
        let p = IsoProfile::power(1.0, 2.0 / 3.0).unwrap();
        let r = check_nondegeneracy(&p, 100.0);
        assert!(r.exceeds_a && r.head_integral_finite && r.passes());
        let cyl = IsoProfile::power(2.0 * PI, 0.0).unwrap();
        assert!(!check_nondegeneracy(&cyl, 4.0 * PI).exceeds_a);
        let cover = IsoProfile::piecewise_power(1.0, 2.0 / 3.0, 0.5, 10.0).unwrap();
        assert!(check_nondegeneracy(&cover, 1e9).passes());
    }

    #[test]
    fn ball_volume_lower_bound_examples() {
        let p = IsoProfile::power(1.0, 2.0 / 3.0).unwrap();
        assert!(close(ball_volume_lower_bound(&p).unwrap(), 1.0 / 27.0, 1e-10));
        let one = IsoProfile::power(1.0, 0.0).unwrap();
        assert!(close(ball_volume_lower_bound(&one).unwrap(), 1.0, 1e-10));
        let e = IsoProfile::power(c3(), 2.0 / 3.0).unwrap();
        let v = ball_volume_lower_bound(&e).unwrap();
        assert!(close(v, 36.0 * PI / 27.0, 1e-10));
        assert!(close(v, 4.18879, 1e-5));
    }

    #[test]
    fn growth_examples() {
        let e = WarpedManifold::euclidean(3, 100.0).unwrap();
        assert!(superlinear_growth_check(&e, 2.0, 0.01).unwrap().superlinear);
        let c = WarpedManifold::cylinder(3, 1.0, 100.0).unwrap();
        let r = superlinear_growth_check(&c, 2.0, 0.01).unwrap();
        assert!(!r.superlinear);
        assert!(close(r.linear_constant.unwrap(), 4.0 * PI, 1e-10));
        assert!(close(r.liminf_bound.unwrap(), 8.0 * PI, 1e-10));
        let l = WarpedManifold::log_cylinder(3, 1e4).unwrap();
        let r = superlinear_growth_check(&l, 2.0, 0.01).unwrap();
        assert!(r.superlinear, "{r:?}");
    }

    #[test]
    fn candidate_profile_examples() {
        let grid: Vec<f64> = (0..=16).map(|i| 0.25 * i as f64).collect();
        let e = WarpedManifold::euclidean(3, 10.0).unwrap();
        let cand = symmetric_candidate_profile(&e, &grid).unwrap();
        assert!(cand.is_upper_bound_only());
        assert!(close(cand.value(4.0 * PI / 3.0), 4.0 * PI, 1e-12));
        let c = WarpedManifold::cylinder(3, 1.0, 10.0).unwrap();
        let cand = symmetric_candidate_profile(&c, &grid).unwrap();
        if let ProfileForm::Tabulated { values, .. } = cand.form() {
            assert!(values.iter().all(|&x| close(x, 8.0 * PI, 1e-12)));
        }
        let d = WarpedManifold::dip(3, 10.0).unwrap();
        let cand = symmetric_candidate_profile(&d, &grid).unwrap();
        let v2 = d.ball_volume(2.0).unwrap();
        assert!(cand.value(v2) <= d.sphere_area(2.0).unwrap() + 1e-12);
        assert!(matches!(
            symmetric_candidate_profile(&e, &grid[..5]),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}
