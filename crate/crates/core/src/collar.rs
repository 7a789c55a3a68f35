//! Admissibility of the mass parameter and assembly of the collar
//! `γ = A(x)² dt² + (u(t)/r_o)² g` on `Σ × [t_o, 0]`.
//!
//! With `A = (n-1)√V(r_o) / (r_o H)` the outer slice has the prescribed mean
//! curvature, and the scalar curvature of the collar is
//!
//! ```text
//! R_γ - C = (r_o²/u²) [ X - (n-2)H² / ((n-1)V(r_o)) - K u² ],
//! K = n ε H² / ((n-1)V(r_o)) + C/r_o²,
//! ```
//!
//! with `X = R_g - 2HΔ(1/H)`. Paper mode admits `m` through the explicit
//! sufficient bounds; exact mode scans `m` against the pointwise condition
//! `X - (n-2)H²/((n-1)V(r_o)) - max(K, 0) r_o² >= 0`.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::bartnik::{area_radius, min_max, BartnikData};
use crate::error::{Error, Result};
use crate::numeric::strictly_greater;
use crate::profile::{epsilon_for, integrate, Profile, ProfileSpec, DEFAULT_SAMPLES};

pub const DEFAULT_STRICT_MARGIN: f64 = 1e-12;
const SCAN_POINTS: usize = 1024;
const CONSTANT_H_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// The explicit bounds on `m` from the existence proofs.
    Paper,
    /// Dense scan of the pointwise curvature condition.
    #[default]
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Negative lower bound `C < 0`.
    Negative,
    /// Nonnegative lower bound `C >= 0`.
    Nonnegative,
    /// Charged data with `C = 0` and the electric energy condition.
    Charged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityOptions {
    pub mode: Mode,
    /// Relative margin applied to every strict inequality.
    pub strict_margin: f64,
}

impl Default for FeasibilityOptions {
    fn default() -> Self {
        Self { mode: Mode::Exact, strict_margin: DEFAULT_STRICT_MARGIN }
    }
}

/// Charge and mass parameters of the Reissner-Nordström profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargedParameters {
    pub m: f64,
    pub q_sq: f64,
    /// `max |φ|`.
    pub phi_max: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub min_stability: f64,
    /// `max (n-2)/(n-1) H²/X`.
    pub curvature_ratio: Option<f64>,
    /// `max H² r_o²/(n-1)²`.
    pub mean_curvature_ratio: Option<f64>,
    /// `1 + ε r_o²`.
    pub threshold: f64,
    /// Largest `m` with `V(r_o) > 0` (exclusive): keeps `r_+ < r_o < r_-`.
    pub bracket_mass: Option<f64>,
    /// Coincident-horizon mass for `ε < 0`.
    pub critical_mass: Option<f64>,
    /// `√(n(n-1)/C)` for `C > 0`.
    pub radius_limit: Option<f64>,
    /// Min and max of `K` over the nodes at the selected `m_max`.
    pub k_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub regime: Regime,
    pub mode: Mode,
    pub feasible: bool,
    pub n: usize,
    pub c: f64,
    pub epsilon: f64,
    pub r_o: f64,
    /// Pointwise slack of the feasibility inequality (positive = satisfied).
    pub margins: Vec<f64>,
    pub chi: Option<f64>,
    /// Admissible masses are `(0, m_max]` in the selected mode.
    pub m_max: Option<f64>,
    pub paper_m_max: Option<f64>,
    pub exact_m_max: Option<f64>,
    /// Paper and exact modes disagree on the admissible interval.
    pub mode_discrepancy: bool,
    pub charged: Option<ChargedParameters>,
    pub diagnostics: Diagnostics,
    pub causes: Vec<String>,
}

impl FeasibilityReport {
    fn new(regime: Regime, mode: Mode, data: &BartnikData, c: f64, r_o: f64) -> Self {
        Self {
            regime,
            mode,
            feasible: false,
            n: data.n,
            c,
            epsilon: epsilon_for(data.n, c),
            r_o,
            margins: Vec::new(),
            chi: None,
            m_max: None,
            paper_m_max: None,
            exact_m_max: None,
            mode_discrepancy: false,
            charged: None,
            diagnostics: Diagnostics::default(),
            causes: Vec::new(),
        }
    }

    fn finish(mut self) -> Self {
        self.m_max = match self.mode {
            Mode::Paper => self.paper_m_max,
            Mode::Exact => self.exact_m_max,
        };
        self.mode_discrepancy = match (self.paper_m_max, self.exact_m_max) {
            (Some(a), Some(b)) => (a - b).abs() > 1e-9 * a.abs().max(b.abs()),
            (None, None) => false,
            _ => true,
        };
        if self.m_max.is_none() && self.causes.is_empty() {
            self.causes.push("no admissible mass parameter".into());
        }
        self.feasible = self.m_max.is_some_and(|m| m > 0.0);
        self
    }

    /// `0 < m <= m_max` up to the relative slack `rel`.
    pub fn admits(&self, m: f64, rel: f64) -> bool {
        self.feasible && m > 0.0 && self.m_max.is_some_and(|mx| m <= mx * (1.0 + rel))
    }
}

/// Pointwise exact-mode condition at mass `m`; `None` when `V(r_o) <= 0`.
fn exact_margin(data: &BartnikData, c: f64, r_o: f64, m: f64) -> Option<(f64, f64, f64)> {
    let n = data.n as f64;
    let eps = epsilon_for(data.n, c);
    let v_o = 1.0 + eps * r_o * r_o - 2.0 * m / r_o.powi(data.n as i32 - 2);
    if !(v_o > 0.0) {
        return None;
    }
    let mut worst = f64::INFINITY;
    let (mut k_lo, mut k_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &data.nodes {
        let h2 = p.h * p.h;
        let k = n * eps * h2 / ((n - 1.0) * v_o) + c / (r_o * r_o);
        k_lo = k_lo.min(k);
        k_hi = k_hi.max(k);
        let g = p.stability() - (n - 2.0) * h2 / ((n - 1.0) * v_o) - k.max(0.0) * r_o * r_o;
        worst = worst.min(g);
    }
    Some((worst, k_lo, k_hi))
}

/// Largest `m` such that all of `(0, m]` satisfies the exact condition
/// (and `m < m_upper`). Dense scan followed by bisection on the first
/// failing cell; monotonicity in `m` is not assumed.
fn exact_m_max(data: &BartnikData, c: f64, r_o: f64, m_upper: f64, strict: f64) -> Option<f64> {
    let ok = |m: f64| exact_margin(data, c, r_o, m).is_some_and(|(g, _, _)| g >= 0.0);
    // m -> 0+: the condition must hold strictly for some positive m to exist.
    let n = data.n as f64;
    let eps = epsilon_for(data.n, c);
    let v0 = 1.0 + eps * r_o * r_o;
    let strict_at_zero = v0 > 0.0
        && data.nodes.iter().all(|p| {
            let h2 = p.h * p.h;
            let k = n * eps * h2 / ((n - 1.0) * v0) + c / (r_o * r_o);
            strictly_greater(p.stability(), (n - 2.0) * h2 / ((n - 1.0) * v0) + k.max(0.0) * r_o * r_o, strict)
        });
    if !strict_at_zero {
        return None;
    }
    let mut lo = 0.0;
    let mut hi = m_upper;
    for j in 1..SCAN_POINTS {
        let m = m_upper * j as f64 / SCAN_POINTS as f64;
        if ok(m) {
            lo = m;
        } else {
            hi = m;
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo > 0.0).then_some(lo)
}

fn prepare(data: &BartnikData) -> Result<f64> {
    data.require_valid()?;
    area_radius(data)
}

/// Fill-ins with scalar curvature above `c < 0`.
pub fn feasibility_negative(data: &BartnikData, c: f64, opts: &FeasibilityOptions) -> Result<FeasibilityReport> {
    if !(c < 0.0) {
        return Err(Error::InvalidParameter { name: "C", reason: format!("{c} is not negative") });
    }
    let r_o = prepare(data)?;
    let mut rep = FeasibilityReport::new(Regime::Negative, opts.mode, data, c, r_o);
    let n = data.n as f64;
    let k = data.n as i32 - 2;
    let threshold = 1.0 + rep.epsilon * r_o * r_o;
    rep.diagnostics.threshold = threshold;
    rep.diagnostics.min_stability = data.min_stability();
    let bracket = 0.5 * r_o.powi(k) * threshold;
    rep.diagnostics.bracket_mass = Some(bracket);

    let x_positive = data.nodes.iter().all(|p| p.stability() > 0.0);
    if x_positive {
        let mut q1 = f64::NEG_INFINITY;
        let mut q2 = f64::NEG_INFINITY;
        for p in &data.nodes {
            let h2 = p.h * p.h;
            let a = (n - 2.0) / (n - 1.0) * h2 / p.stability();
            let b = h2 * r_o * r_o / ((n - 1.0) * (n - 1.0));
            q1 = q1.max(a);
            q2 = q2.max(b);
            rep.margins.push(threshold - a.max(b));
        }
        let worst = q1.max(q2);
        rep.diagnostics.curvature_ratio = Some(q1);
        rep.diagnostics.mean_curvature_ratio = Some(q2);
        rep.chi = Some(worst);
        if strictly_greater(threshold, worst, opts.strict_margin) {
            rep.paper_m_max = Some(0.5 * r_o.powi(k) * (threshold - worst));
        } else {
            rep.causes.push(format!(
                "max{{(n-2)/(n-1) H^2/X, H^2 r_o^2/(n-1)^2}} = {worst} is not below 1 + eps r_o^2 = {threshold}"
            ));
        }
    } else {
        rep.margins = data.nodes.iter().map(|p| p.stability()).collect();
        rep.causes.push(format!(
            "R_g - 2H Lap(1/H) is not positive (min {})",
            rep.diagnostics.min_stability
        ));
    }
    if x_positive {
        rep.exact_m_max = exact_m_max(data, c, r_o, bracket, opts.strict_margin);
    }
    record_k_range(&mut rep, data);
    Ok(rep.finish())
}

/// Fill-ins with scalar curvature at least `c >= 0`.
pub fn feasibility_nonnegative(
    data: &BartnikData,
    c: f64,
    opts: &FeasibilityOptions,
) -> Result<FeasibilityReport> {
    if !(c >= 0.0) {
        return Err(Error::InvalidParameter { name: "C", reason: format!("{c} is negative") });
    }
    let r_o = prepare(data)?;
    let mut rep = FeasibilityReport::new(Regime::Nonnegative, opts.mode, data, c, r_o);
    let n = data.n as f64;
    let k = data.n as i32 - 2;
    let threshold = 1.0 + rep.epsilon * r_o * r_o;
    rep.diagnostics.threshold = threshold;
    rep.diagnostics.min_stability = data.min_stability();

    if c > 0.0 {
        let limit = (n * (n - 1.0) / c).sqrt();
        rep.diagnostics.radius_limit = Some(limit);
        rep.diagnostics.critical_mass = ProfileSpec::for_lower_bound(data.n, c, 1.0)?.critical_mass();
        if !strictly_greater(limit, r_o, opts.strict_margin) {
            rep.causes.push(format!("radius constraint violated: r_o = {r_o} >= sqrt(n(n-1)/C) = {limit}"));
            return Ok(rep.finish());
        }
    }
    let bracket = 0.5 * r_o.powi(k) * threshold;
    rep.diagnostics.bracket_mass = Some(bracket);

    let denom = n * (n - 1.0) - c * r_o * r_o;
    let mut pointwise = true;
    let mut q1 = f64::NEG_INFINITY;
    for p in &data.nodes {
        let rhs = n * (n - 2.0) * p.h * p.h / denom;
        rep.margins.push(p.stability() - rhs);
        if !strictly_greater(p.stability(), rhs, opts.strict_margin) {
            pointwise = false;
        }
        if p.stability() > 0.0 {
            q1 = q1.max((n - 2.0) / (n - 1.0) * p.h * p.h / p.stability());
        }
    }
    if pointwise {
        rep.diagnostics.curvature_ratio = Some(q1);
        let mut m = 0.5 * r_o.powi(k) * (threshold - q1);
        if c > 0.0 {
            // r_+(m) < r_o < r_-(m) holds exactly while V(r_o) > 0, which is
            // inside the two-root regime m < m_crit.
            m = m.min(bracket);
            if let Some(mc) = rep.diagnostics.critical_mass {
                m = m.min(mc);
            }
        }
        rep.paper_m_max = (m > 0.0).then_some(m);
    } else {
        let bad = rep.margins.iter().filter(|v| !(**v > 0.0)).count();
        rep.causes.push(format!(
            "X > n(n-2)H^2/(n(n-1) - C r_o^2) fails at {bad} node(s) (min slack {})",
            rep.margins.iter().cloned().fold(f64::INFINITY, f64::min)
        ));
    }
    if data.nodes.iter().all(|p| p.stability() > 0.0) {
        let mut upper = bracket;
        if let Some(mc) = rep.diagnostics.critical_mass {
            upper = upper.min(mc);
        }
        rep.exact_m_max = exact_m_max(data, c, r_o, upper, opts.strict_margin);
    }
    record_k_range(&mut rep, data);
    Ok(rep.finish())
}

fn record_k_range(rep: &mut FeasibilityReport, data: &BartnikData) {
    let m = match rep.mode {
        Mode::Paper => rep.paper_m_max,
        Mode::Exact => rep.exact_m_max,
    };
    if let Some(m) = m {
        if let Some((_, lo, hi)) = exact_margin(data, rep.c, rep.r_o, m) {
            rep.diagnostics.k_range = Some((lo, hi));
        }
    }
}

/// Charged data with constant `H`: closed-form `(m, Q²)` and the energy
/// condition inequality. The mode does not change the closed form; it is
/// recorded in the report.
pub fn feasibility_charged(data: &BartnikData, opts: &FeasibilityOptions) -> Result<FeasibilityReport> {
    let r_o = prepare(data)?;
    if !data.is_charged() {
        return Err(Error::InvalidData("charged feasibility needs phi at every node".into()));
    }
    let mut rep = FeasibilityReport::new(Regime::Charged, opts.mode, data, 0.0, r_o);
    let n = data.n as f64;
    let k = data.n as i32 - 2;
    let rk = r_o.powi(k);
    rep.diagnostics.threshold = 1.0;
    let min_x = data.min_stability();
    rep.diagnostics.min_stability = min_x;
    let phi_max = data.nodes.iter().map(|p| p.phi.unwrap_or(0.0).abs()).fold(0.0, f64::max);
    let h = min_max(data.nodes.iter().map(|p| p.h)).1;

    if !data.has_constant_mean_curvature(CONSTANT_H_TOL) {
        rep.causes.push("H is not constant".into());
    }
    if !strictly_greater(h, (n - 1.0) * phi_max, opts.strict_margin) {
        rep.causes.push(format!("ordering H > (n-1) max|phi| violated: H = {h}, max|phi| = {phi_max}"));
    }
    let needed = (n - 2.0) / (n - 1.0) * ((n - 1.0) * phi_max + h).powi(2);
    rep.margins = data.nodes.iter().map(|p| p.stability() - needed).collect();
    if !strictly_greater(min_x, needed, opts.strict_margin) {
        rep.causes.push(format!(
            "min X = {min_x} is not above (n-2)/(n-1) ((n-1) max|phi| + H)^2 = {needed}"
        ));
    }
    if min_x > 0.0 {
        let q_sq = (n - 1.0) * (n - 2.0) * phi_max * phi_max * rk * rk / min_x;
        let m = 0.5 * rk * (1.0 - (n - 2.0) / (n - 1.0) * (h * h - (n - 1.0).powi(2) * phi_max * phi_max) / min_x);
        rep.charged = Some(ChargedParameters { m, q_sq, phi_max });
        if rep.causes.is_empty() {
            rep.paper_m_max = Some(m);
            rep.exact_m_max = Some(m);
        }
    }
    Ok(rep.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuildOptions {
    pub mode: Mode,
    /// Build even when `m` is outside the admissible interval.
    pub force: bool,
    /// Number of profile samples in `t`.
    pub samples: usize,
    pub strict_margin: f64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { mode: Mode::Exact, force: false, samples: DEFAULT_SAMPLES, strict_margin: DEFAULT_STRICT_MARGIN }
    }
}

impl BuildOptions {
    fn feasibility(&self) -> FeasibilityOptions {
        FeasibilityOptions { mode: self.mode, strict_margin: self.strict_margin }
    }
}

/// Electric field `E = r_o^{n-1} φ / (u^{n-1} A) ∂_t` on a charged collar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargedField {
    pub params: ChargedParameters,
    /// `φ` per node.
    pub phi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collar {
    pub data: BartnikData,
    /// Scalar curvature lower bound the collar was built for.
    pub c: f64,
    pub profile: Profile,
    /// Lapse `A(x)` per node.
    pub lapse: Vec<f64>,
    pub charged: Option<ChargedField>,
    /// `m` lay in the admissible interval of the feasibility report.
    pub admissible: bool,
}

impl Collar {
    pub fn n(&self) -> usize {
        self.data.n
    }

    pub fn r_o(&self) -> f64 {
        self.profile.r_o
    }

    pub fn m(&self) -> f64 {
        self.profile.spec.m
    }

    pub fn r_h(&self) -> f64 {
        self.profile.r_h
    }

    pub fn t_o(&self) -> f64 {
        self.profile.t_o
    }

    /// `V(r_o) = u'(0)²`.
    pub fn boundary_potential(&self) -> f64 {
        self.profile.spec.potential(self.r_o())
    }

    /// Mean curvature `(n-1) u' / (u A)` of the slice through `sample` at `node`.
    pub fn slice_mean_curvature(&self, sample: usize, node: usize) -> f64 {
        let s = &self.profile.samples[sample];
        (self.n() - 1) as f64 * s.uprime / (s.u * self.lapse[node])
    }

    /// `E^t` at profile radius `u` and `node`.
    pub fn electric_t_component(&self, u: f64, node: usize) -> f64 {
        match &self.charged {
            Some(f) => {
                let e = self.n() as i32 - 1;
                (self.r_o() / u).powi(e) * f.phi[node] / self.lapse[node]
            }
            None => 0.0,
        }
    }

    /// `|E|_γ = r_o^{n-1} φ / u^{n-1}`.
    pub fn electric_magnitude(&self, u: f64, node: usize) -> f64 {
        self.electric_t_component(u, node).abs() * self.lapse[node]
    }
}

fn lapse(data: &BartnikData, profile: &Profile) -> Vec<f64> {
    let v_o = profile.spec.potential(profile.r_o);
    let scale = (data.n - 1) as f64 * v_o.sqrt() / profile.r_o;
    data.nodes.iter().map(|p| scale / p.h).collect()
}

/// Builds the uncharged collar for lower bound `c` and mass `m`
/// (`None` takes `m_max` of the matching feasibility report).
pub fn build(data: &BartnikData, c: f64, m: Option<f64>, opts: &BuildOptions) -> Result<Collar> {
    let report = if c < 0.0 {
        feasibility_negative(data, c, &opts.feasibility())?
    } else {
        feasibility_nonnegative(data, c, &opts.feasibility())?
    };
    let m = match m.or(report.m_max) {
        Some(m) => m,
        None => return Err(Error::Infeasible(report.causes.join("; "))),
    };
    if !(m > 0.0) {
        return Err(Error::NoHorizon(format!(
            "m = {m}: a positive mass parameter is required for a minimal surface rather than a cusp"
        )));
    }
    let admissible = report.admits(m, 1e-12);
    if !admissible && !opts.force {
        return match report.m_max {
            Some(m_max) => Err(Error::MassOutOfRange { m, m_max }),
            None => Err(Error::Infeasible(report.causes.join("; "))),
        };
    }
    let spec = ProfileSpec::for_lower_bound(data.n, c, m)?;
    let profile = integrate(&spec, report.r_o, opts.samples)?;
    Ok(Collar { lapse: lapse(data, &profile), data: data.clone(), c, profile, charged: None, admissible })
}

/// Builds the Reissner-Nordström collar from a charged feasibility report.
pub fn build_charged(data: &BartnikData, report: &FeasibilityReport, opts: &BuildOptions) -> Result<Collar> {
    if report.regime != Regime::Charged {
        return Err(Error::InvalidParameter { name: "report", reason: "not a charged feasibility report".into() });
    }
    if !data.is_charged() {
        return Err(Error::InvalidData("charged collar needs phi at every node".into()));
    }
    data.require_valid()?;
    let r_o = area_radius(data)?;
    if (r_o - report.r_o).abs() > 1e-12 * r_o {
        return Err(Error::InvalidParameter {
            name: "report",
            reason: format!("report area radius {} does not match data {r_o}", report.r_o),
        });
    }
    if !report.feasible && !opts.force {
        return Err(Error::Infeasible(report.causes.join("; ")));
    }
    let params = report
        .charged
        .ok_or_else(|| Error::Infeasible("report carries no charge parameters".into()))?;
    let spec = ProfileSpec::new(data.n, 0.0, params.m, params.q_sq)?;
    let profile = integrate(&spec, r_o, opts.samples)?;
    Ok(Collar {
        lapse: lapse(data, &profile),
        data: data.clone(),
        c: 0.0,
        profile,
        charged: Some(ChargedField { params, phi: data.nodes.iter().map(|p| p.phi.unwrap_or(0.0)).collect() }),
        admissible: report.feasible,
    })
}
