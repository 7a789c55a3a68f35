//! Mass functionals and the mass lower bounds obtained from the fill-ins.
//!
//! With `X = R_g - 2HΔ(1/H)` and `k = n - 2`:
//!
//! ```text
//! χ          = max{ max k H²/X, max H² r_o²/(n-1) } / (n-1)
//! flat bound = r_o^k (1 - k/(n-1) max H²/X) / 2,           r_H = (2 m)^{1/k}
//! AH bound   = r_o^k (1 + ε r_o² - χ) / 2,   r_H^k (1 + ε r_H²) / 2 = bound
//! charged    = m + (Q_Σ² - Q²) / (m + √(m² - Q²)),           r_H^k = m + √(m² - Q²)
//! ```

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::bartnik::{area_radius, min_max, BartnikData};
use crate::collar::{feasibility_charged, feasibility_nonnegative, FeasibilityOptions};
use crate::error::{Error, Result};
use crate::numeric::{bisect, unit_sphere_area};
use crate::profile::epsilon_for;

const CONSTANT_TOL: f64 = 1e-10;
/// Largest dimension covered by the charged positive mass input.
pub const MAX_CHARGED_DIMENSION: usize = 7;

/// Hawking mass `r_o^{n-2}/2 (1 - r_o²/(n-1)² (H² + C(n-1)/n))` of data with
/// constant `H` and `R_g`.
pub fn hawking_mass(data: &BartnikData, c: f64) -> Result<f64> {
    data.require_valid()?;
    if !data.has_constant_mean_curvature(CONSTANT_TOL) || !data.has_constant_scalar_curvature(CONSTANT_TOL) {
        return Err(Error::Unsupported("Hawking mass needs constant H and R_g".into()));
    }
    let r_o = area_radius(data)?;
    let n = data.n as f64;
    let h = data.nodes[0].h;
    Ok(0.5 * r_o.powi(data.n as i32 - 2) * (1.0 - r_o * r_o / ((n - 1.0) * (n - 1.0)) * (h * h + c * (n - 1.0) / n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chi {
    /// `max (n-2) H²/X`.
    pub curvature_term: f64,
    /// `max H² r_o²/(n-1)`.
    pub radius_term: f64,
    pub value: f64,
}

pub fn chi(data: &BartnikData) -> Result<Chi> {
    data.require_valid()?;
    let r_o = area_radius(data)?;
    let n = data.n as f64;
    if let Some(i) = data.nodes.iter().position(|p| !(p.stability() > 0.0)) {
        return Err(Error::Infeasible(format!("X = R_g - 2H Lap(1/H) is not positive at node {i}")));
    }
    let curvature_term = min_max(data.nodes.iter().map(|p| (n - 2.0) * p.h * p.h / p.stability())).1;
    let radius_term = min_max(data.nodes.iter().map(|p| p.h * p.h * r_o * r_o / (n - 1.0))).1;
    Ok(Chi { curvature_term, radius_term, value: curvature_term.max(radius_term) / (n - 1.0) })
}

/// A mass lower bound with the area radius of the minimal surface that
/// realizes it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    pub r_h: f64,
}

/// Lower bound for the ADM mass of asymptotically flat extensions.
pub fn flat_mass_bound(data: &BartnikData) -> Result<Bound> {
    let report = feasibility_nonnegative(data, 0.0, &FeasibilityOptions::default())?;
    if report.paper_m_max.is_none() {
        return Err(Error::Infeasible(report.causes.join("; ")));
    }
    let n = data.n as f64;
    let ratio = min_max(data.nodes.iter().map(|p| p.h * p.h / p.stability())).1;
    let value = 0.5 * report.r_o.powi(data.n as i32 - 2) * (1.0 - (n - 2.0) / (n - 1.0) * ratio);
    Ok(Bound { value, r_h: (2.0 * value).powf(1.0 / (n - 2.0)) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AhBound {
    pub value: f64,
    pub r_h: f64,
    pub chi: Chi,
}

/// Lower bound for the total mass of asymptotically hyperbolic extensions
/// with scalar curvature at least `c < 0`.
pub fn ah_mass_bound(data: &BartnikData, c: f64) -> Result<AhBound> {
    if !(c < 0.0) {
        return Err(Error::InvalidParameter { name: "C", reason: format!("{c} is not negative") });
    }
    let chi = chi(data)?;
    let r_o = area_radius(data)?;
    let eps = epsilon_for(data.n, c);
    let k = data.n as i32 - 2;
    let threshold = 1.0 + eps * r_o * r_o;
    if !(chi.value < threshold) {
        return Err(Error::Infeasible(format!("chi = {} is not below 1 + eps r_o^2 = {threshold}", chi.value)));
    }
    let value = 0.5 * r_o.powi(k) * (threshold - chi.value);
    let r_h = bisect(|r| 0.5 * r.powi(k) * (1.0 + eps * r * r) - value, 0.0, r_o, 1e-16)?;
    Ok(AhBound { value, r_h, chi })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargedBound {
    pub m: f64,
    pub q: f64,
    /// `(1/ω_{n-1}) ∫ φ dμ`.
    pub q_sigma: f64,
    pub value: f64,
    pub r_h: f64,
    /// `|Q_Σ|`, the bound for divergence-free fields.
    pub divergence_free_bound: f64,
    pub warnings: Vec<String>,
}

pub fn charge(data: &BartnikData) -> Result<f64> {
    if !data.is_charged() {
        return Err(Error::InvalidData("charge needs phi at every node".into()));
    }
    let total: f64 = data.nodes.iter().map(|p| p.weight * p.phi.unwrap_or(0.0)).sum();
    Ok(total / unit_sphere_area(data.n))
}

/// Lower bound for the ADM mass of charged extensions.
pub fn charged_mass_bound(data: &BartnikData) -> Result<ChargedBound> {
    let report = feasibility_charged(data, &FeasibilityOptions::default())?;
    let params = match (report.feasible, report.charged) {
        (true, Some(p)) => p,
        _ => return Err(Error::Infeasible(report.causes.join("; "))),
    };
    let q_sigma = charge(data)?;
    let m = params.m;
    let root = (m * m - params.q_sq).max(0.0).sqrt();
    let value = m + (q_sigma * q_sigma - params.q_sq) / (m + root);
    let mut warnings = Vec::new();
    if data.n > MAX_CHARGED_DIMENSION {
        warnings.push(format!(
            "n = {} is above {MAX_CHARGED_DIMENSION}; the charged positive mass input is not available",
            data.n
        ));
    }
    Ok(ChargedBound {
        m,
        q: params.q_sq.sqrt(),
        q_sigma,
        value,
        r_h: (m + root).powf(1.0 / (data.n as f64 - 2.0)),
        divergence_free_bound: q_sigma.abs(),
        warnings,
    })
}

/// Outer entropy bound `ω_{n-1} r_H^{n-1}`.
pub fn entropy_bound(data: &BartnikData, c: f64) -> Result<f64> {
    let b = ah_mass_bound(data, c)?;
    Ok(unit_sphere_area(data.n) * b.r_h.powi(data.n as i32 - 1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassReport {
    pub n: usize,
    pub c: f64,
    pub hawking: Option<f64>,
    pub chi: Option<Chi>,
    pub flat_bound: Option<Bound>,
    pub ah_bound: Option<AhBound>,
    pub charged_bound: Option<ChargedBound>,
    pub entropy_bound: Option<f64>,
    pub notes: Vec<String>,
}

impl MassReport {
    pub fn has_bound(&self) -> bool {
        self.flat_bound.is_some() || self.ah_bound.is_some() || self.charged_bound.is_some()
    }
}

fn keep<T>(notes: &mut Vec<String>, what: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            None
        }
    }
}

/// Every bound that applies to `data` for the lower bound `c`; the reasons
/// for the missing ones are collected in `notes`.
pub fn mass_report(data: &BartnikData, c: f64) -> MassReport {
    let mut notes = Vec::new();
    let hawking = keep(&mut notes, "hawking", hawking_mass(data, c));
    let chi = keep(&mut notes, "chi", chi(data));
    let flat_bound = if c == 0.0 {
        let b = keep(&mut notes, "flat bound", flat_mass_bound(data));
        if b.is_some() {
            notes.push("flat bound: worst case max H^2/X over the surface, half of the area-radius power".into());
        }
        b
    } else {
        None
    };
    let ah_bound = if c < 0.0 { keep(&mut notes, "ah bound", ah_mass_bound(data, c)) } else { None };
    let entropy_bound = ah_bound.map(|b| unit_sphere_area(data.n) * b.r_h.powi(data.n as i32 - 1));
    let charged_bound = if data.is_charged() && c == 0.0 {
        let b = keep(&mut notes, "charged bound", charged_mass_bound(data));
        if let Some(b) = &b {
            notes.extend(b.warnings.iter().cloned());
        }
        b
    } else {
        None
    };
    MassReport { n: data.n, c, hawking, chi, flat_bound, ah_bound, charged_bound, entropy_bound, notes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collar::{feasibility_negative, Mode};
    use crate::profile::ProfileSpec;
    use crate::surface::{axisymmetric, model_boundary_data, round_sphere, AxisymmetricProfile, ModelFamily, PhiMode};
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    fn schwarzschild(n: usize, m: f64, r_o: f64) -> BartnikData {
        model_boundary_data(&ModelFamily::Schwarzschild { n, m }, r_o, PhiMode::None).unwrap()
    }

    #[test]
    fn hawking_examples() {
        assert!(close(hawking_mass(&round_sphere(3, 1.0, 1e-300, None).unwrap(), 0.0).unwrap(), 0.5, 1e-15));
        assert!(close(hawking_mass(&schwarzschild(3, 1.0, 3.0), 0.0).unwrap(), 1.0, 1e-13));
        assert!(close(hawking_mass(&round_sphere(3, 1.0, 2.0, None).unwrap(), -6.0).unwrap(), 0.5, 1e-15));
        for n in [4, 5] {
            assert!(close(hawking_mass(&schwarzschild(n, 0.7, 2.0), 0.0).unwrap(), 0.7, 1e-13));
        }
        let p = AxisymmetricProfile::from_fns(64, f64::sin, |t| 2.0 + t.cos(), None);
        assert!(hawking_mass(&axisymmetric(&p).unwrap(), 0.0).is_err());
    }

    #[test]
    fn chi_examples() {
        let c = chi(&schwarzschild(3, 1.0, 3.0)).unwrap();
        assert!(close(c.curvature_term, 2.0 / 3.0, 1e-13) && close(c.radius_term, 2.0 / 3.0, 1e-13));
        assert!(close(c.value, 1.0 / 3.0, 1e-13));
        let sads = ModelFamily::SchwarzschildAntiDeSitter { n: 3, m: 1.0, epsilon: 1.0 };
        let d = model_boundary_data(&sads, 2.0, PhiMode::None).unwrap();
        assert!(close(chi(&d).unwrap().value, 4.0, 1e-13));
        let c = chi(&round_sphere(3, 1.0, 2.0, None).unwrap()).unwrap();
        assert!(close(c.curvature_term, 2.0, 1e-15) && close(c.radius_term, 2.0, 1e-15) && close(c.value, 1.0, 1e-15));
    }

    #[test]
    fn flat_bound_examples() {
        for (n, m, r_o) in [(3, 1.0, 3.0), (4, 1.0, 2.0), (4, 0.5, 2.0), (5, 2.0, 3.0)] {
            let b = flat_mass_bound(&schwarzschild(n, m, r_o)).unwrap();
            assert!(close(b.value, m, 1e-10), "{n} {m}: {}", b.value);
            let spec = ProfileSpec::new(n, 0.0, b.value, 0.0).unwrap();
            assert!(spec.potential(b.r_h).abs() < 1e-10);
        }
        let b = flat_mass_bound(&round_sphere(3, 1.0, 1.0, None).unwrap()).unwrap();
        assert!(close(b.value, 0.375, 1e-15) && close(b.r_h, 0.75, 1e-15));
        assert!(matches!(flat_mass_bound(&round_sphere(3, 1.0, 2.0, None).unwrap()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn ah_bound_examples() {
        let sads = ModelFamily::SchwarzschildAntiDeSitter { n: 3, m: 1.0, epsilon: 1.0 };
        let d = model_boundary_data(&sads, 2.0, PhiMode::None).unwrap();
        let b = ah_mass_bound(&d, -6.0).unwrap();
        assert!(close(b.value, 1.0, 1e-10));
        assert!((1.0 + b.r_h * b.r_h - 2.0 / b.r_h).abs() < 1e-10);
        // Independent root of the cubic r³ + r - 2 = 0 by Cardano.
        let s = (1.0 + 1.0f64 / 27.0).sqrt();
        let cardano = (1.0 + s).cbrt() + (1.0 - s).cbrt();
        assert!((b.r_h - cardano).abs() < 1e-12);
        assert!(close(entropy_bound(&d, -6.0).unwrap(), 4.0 * PI * cardano * cardano, 1e-12));

        let b = ah_mass_bound(&round_sphere(3, 1.0, 2.0, None).unwrap(), -6.0).unwrap();
        assert!(close(b.chi.value, 1.0, 1e-15) && close(b.value, 0.5, 1e-15));
    }

    #[test]
    fn ah_bound_vanishes_at_feasibility_edge() {
        // Round r_o = 1, C = -6: chi = H²/4 and the threshold is 2.
        let edge = 8.0f64.sqrt();
        let mut last = f64::INFINITY;
        for h in [edge - 0.1, edge - 0.01, edge - 1e-3, edge - 1e-6] {
            let b = ah_mass_bound(&round_sphere(3, 1.0, h, None).unwrap(), -6.0).unwrap();
            assert!(b.value > 0.0 && b.r_h > 0.0 && b.r_h < last);
            last = b.r_h;
        }
        assert!(last < 1e-5, "{last}");
        let e = entropy_bound(&round_sphere(3, 1.0, edge - 1e-6, None).unwrap(), -6.0).unwrap();
        assert!(e < 1e-9, "{e}");
    }

    #[test]
    fn ah_bound_round_trips_models() {
        for (n, m, eps, r_o) in [(3, 0.5, 0.5, 1.5), (4, 1.0, 1.0, 1.7), (5, 2.0, 0.25, 3.0)] {
            let c = -eps * (n * (n - 1)) as f64;
            let d = model_boundary_data(&ModelFamily::SchwarzschildAntiDeSitter { n, m, epsilon: eps }, r_o, PhiMode::None)
                .unwrap();
            let b = ah_mass_bound(&d, c).unwrap();
            assert!(close(b.value, m, 1e-10));
            assert!(ProfileSpec::new(n, eps, b.value, 0.0).unwrap().potential(b.r_h).abs() < 1e-10);
        }
    }

    #[test]
    fn schwarzschild_de_sitter_data_is_not_overestimated() {
        // Between the black hole and cosmological horizons.
        let (n, m, eps, r_o) = (3, 0.1, -1.0, 0.5);
        let model = ModelFamily::SchwarzschildDeSitter { n, m, epsilon: eps };
        let d = model_boundary_data(&model, r_o, PhiMode::None).unwrap();
        let c = 6.0;
        let paper = feasibility_nonnegative(&d, c, &FeasibilityOptions { mode: Mode::Paper, ..Default::default() }).unwrap();
        assert!(paper.m_max.unwrap() <= m * (1.0 + 1e-10));
        let exact = feasibility_nonnegative(&d, c, &FeasibilityOptions::default()).unwrap();
        assert!(exact.m_max.unwrap() <= m * (1.0 + 1e-10));
    }

    #[test]
    fn charged_examples() {
        let rn = ModelFamily::ReissnerNordstrom { n: 3, m: 2.0, q: 1.0 };
        let b = charged_mass_bound(&model_boundary_data(&rn, 5.0, PhiMode::Model).unwrap()).unwrap();
        assert!(close(b.q_sigma, 1.0, 1e-12) && close(b.q, 1.0, 1e-10) && close(b.m, 2.0, 1e-10));
        assert!(close(b.value, 2.0, 1e-9));
        assert!((b.r_h - (2.0 + 3.0f64.sqrt())).abs() < 1e-10);
        assert!(b.warnings.is_empty());

        let b = charged_mass_bound(&round_sphere(3, 1.0, 1.0, Some(0.1)).unwrap()).unwrap();
        assert!(close(b.q_sigma, 0.1, 1e-14) && close(b.q * b.q, 0.01, 1e-14));
        assert!(close(b.value, 0.38, 1e-14) && close(b.m, 0.38, 1e-14));
        assert!(close(b.divergence_free_bound, 0.1, 1e-14));
    }

    #[test]
    fn nonconstant_charge_lowers_bound() {
        // Round sphere with φ peaking at 0.1 on the equator.
        let p = AxisymmetricProfile::from_fns(201, f64::sin, |_| 1.0, Some(&|t: f64| 0.1 * t.sin()));
        let d = axisymmetric(&p).unwrap();
        let b = charged_mass_bound(&d).unwrap();
        assert!(b.q_sigma < b.q && b.value < b.m);
        // ∫ 0.1 sin θ · sin θ dθ dφ / 4π = 0.1 π/4.
        assert!(close(b.q_sigma, 0.1 * PI / 4.0, 1e-4));
    }

    #[test]
    fn charged_dimension_warning() {
        let rn = ModelFamily::ReissnerNordstrom { n: 8, m: 2.0, q: 1.0 };
        let b = charged_mass_bound(&model_boundary_data(&rn, 3.0, PhiMode::Model).unwrap()).unwrap();
        assert!(close(b.value, 2.0, 1e-9));
        assert_eq!(b.warnings.len(), 1);
        for n in [4, 5] {
            let rn = ModelFamily::ReissnerNordstrom { n, m: 1.0, q: 0.5 };
            let b = charged_mass_bound(&model_boundary_data(&rn, 2.5, PhiMode::Model).unwrap()).unwrap();
            assert!(close(b.value, 1.0, 1e-9) && close(b.q_sigma, 0.5, 1e-10));
        }
    }

    #[test]
    fn uncharged_pipeline_reduces() {
        let d = round_sphere(3, 1.3, 0.9, Some(0.0)).unwrap();
        let charged = charged_mass_bound(&d).unwrap();
        let flat = flat_mass_bound(&round_sphere(3, 1.3, 0.9, None).unwrap()).unwrap();
        assert!(close(charged.value, flat.value, 1e-14) && close(charged.r_h, flat.r_h, 1e-14));
    }

    #[test]
    fn report_collects_notes() {
        let r = mass_report(&round_sphere(3, 1.0, 1.0, None).unwrap(), 0.0);
        assert!(r.flat_bound.is_some() && r.ah_bound.is_none() && r.hawking.is_some());
        let r = mass_report(&round_sphere(3, 1.0, 3.0, None).unwrap(), -6.0);
        assert!(!r.has_bound() && r.notes.iter().any(|n| n.starts_with("ah bound")));
        let r = mass_report(&round_sphere(3, 1.0, 2.0, None).unwrap(), -6.0);
        assert!(r.ah_bound.is_some() && r.entropy_bound.is_some());
    }

    proptest! {
        #[test]
        fn flat_and_ah_agree_as_c_vanishes(n in 3usize..6, r_o in 0.3f64..3.0, s in 0.05f64..0.95) {
            // Round data with H below its flat feasibility limit.
            let h = s * (n - 1) as f64 / r_o;
            let d = round_sphere(n, r_o, h, None).unwrap();
            let flat = flat_mass_bound(&d).unwrap();
            let ah = ah_mass_bound(&d, -1e-13).unwrap();
            prop_assert!(close(ah.value, flat.value, 1e-10));
            let neg = feasibility_negative(&d, -1e-13, &FeasibilityOptions { mode: Mode::Paper, ..Default::default() }).unwrap();
            prop_assert!(close(neg.m_max.unwrap(), flat.value, 1e-10));
        }

        #[test]
        fn entropy_decreases_with_chi(h1 in 0.2f64..1.9, dh in 0.01f64..0.09) {
            let lo = round_sphere(3, 1.0, h1, None).unwrap();
            let hi = round_sphere(3, 1.0, h1 + dh, None).unwrap();
            prop_assert!(chi(&lo).unwrap().value < chi(&hi).unwrap().value);
            prop_assert!(entropy_bound(&lo, -6.0).unwrap() > entropy_bound(&hi, -6.0).unwrap());
        }

        #[test]
        fn horizon_radii_solve_potential(r_o in 0.5f64..3.0, s in 0.05f64..0.95, eps in 0.1f64..2.0) {
            let n = 3;
            let threshold = 1.0 + eps * r_o * r_o;
            let h = s * threshold.sqrt() * 2.0 / r_o;
            let d = round_sphere(n, r_o, h, None).unwrap();
            let b = ah_mass_bound(&d, -6.0 * eps).unwrap();
            prop_assert!(ProfileSpec::new(n, eps, b.value, 0.0).unwrap().potential(b.r_h).abs() < 1e-10);
        }
    }
}
