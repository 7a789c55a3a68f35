//! Sampled boundary data `(Σ, g, H)` and `(Σ, g, H, φ)`.
//!
//! The surface is represented by quadrature nodes carrying the pointwise
//! fields the fill-in construction needs; no metric tensor is stored.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::unit_sphere_area;
use crate::surface::AxisymmetricProfile;

/// One quadrature sample of the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    /// Area element (quadrature weight) attached to the node.
    pub weight: f64,
    /// Scalar curvature of `g`.
    #[serde(rename = "Rg")]
    pub rg: f64,
    /// Mean curvature.
    #[serde(rename = "H")]
    pub h: f64,
    /// `Δ_Σ (1/H)`.
    #[serde(rename = "lapHinv")]
    pub lap_h_inv: f64,
    /// Normal component of the electric field, for charged data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
}

impl Node {
    /// `R_g - 2 H Δ(1/H)`.
    pub fn stability(&self) -> f64 {
        self.rg - 2.0 * self.h * self.lap_h_inv
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BartnikData {
    /// Ambient dimension; the boundary has dimension `n - 1`.
    pub n: usize,
    pub nodes: Vec<Node>,
    /// The axisymmetric description the nodes were sampled from, if any.
    #[serde(skip)]
    pub origin: Option<AxisymmetricProfile>,
}

impl BartnikData {
    pub fn new(n: usize, nodes: Vec<Node>) -> Self {
        Self { n, nodes, origin: None }
    }

    pub fn total_area(&self) -> f64 {
        self.nodes.iter().map(|p| p.weight).sum()
    }

    pub fn is_charged(&self) -> bool {
        self.nodes.iter().any(|p| p.phi.is_some())
    }

    pub fn min_stability(&self) -> f64 {
        self.nodes.iter().map(Node::stability).fold(f64::INFINITY, f64::min)
    }

    /// `true` when `H` agrees across nodes to `rel_tol`.
    pub fn has_constant_mean_curvature(&self, rel_tol: f64) -> bool {
        let (lo, hi) = min_max(self.nodes.iter().map(|p| p.h));
        hi - lo <= rel_tol * hi.abs()
    }

    pub fn has_constant_scalar_curvature(&self, rel_tol: f64) -> bool {
        let (lo, hi) = min_max(self.nodes.iter().map(|p| p.rg));
        hi - lo <= rel_tol * hi.abs().max(lo.abs())
    }

    /// Returns an error carrying every failed invariant.
    pub fn require_valid(&self) -> Result<()> {
        let report = validate(self);
        if report.passed() {
            Ok(())
        } else {
            Err(Error::InvalidData(report.summary()))
        }
    }

    /// Copy of the data with `H ↦ λH`. `Δ(1/H)` scales by `1/λ`, so the
    /// stability field is unchanged.
    pub fn scale_mean_curvature(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.nodes {
            p.h *= lambda;
            p.lap_h_inv /= lambda;
        }
        out
    }
}

pub(crate) fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Offending node indices (empty for whole-data checks).
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<InvariantCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in self.failed() {
            if !out.is_empty() {
                out.push_str("; ");
            }
            if c.nodes.is_empty() {
                out.push_str(c.name);
            } else {
                let shown: Vec<String> = c.nodes.iter().take(8).map(|i| format!("{i}")).collect();
                out.push_str(&format!("{} at nodes [{}]", c.name, shown.join(", ")));
                if c.nodes.len() > 8 {
                    out.push_str(&format!(" and {} more", c.nodes.len() - 8));
                }
            }
        }
        out
    }
}

fn check(name: &'static str, nodes: Vec<usize>) -> InvariantCheck {
    InvariantCheck { name, passed: nodes.is_empty(), nodes }
}

fn offending(data: &BartnikData, bad: impl Fn(&Node) -> bool) -> Vec<usize> {
    data.nodes.iter().enumerate().filter(|(_, p)| bad(p)).map(|(i, _)| i).collect()
}

/// Checks every data invariant and reports the offending nodes.
pub fn validate(data: &BartnikData) -> ValidationReport {
    let mut checks = Vec::new();
    checks.push(InvariantCheck { name: "dimension_at_least_3", passed: data.n >= 3, nodes: Vec::new() });
    checks.push(InvariantCheck { name: "nonempty", passed: !data.nodes.is_empty(), nodes: Vec::new() });
    checks.push(check(
        "finite_fields",
        offending(data, |p| {
            !(p.weight.is_finite() && p.rg.is_finite() && p.h.is_finite() && p.lap_h_inv.is_finite())
                || p.phi.is_some_and(|v| !v.is_finite())
        }),
    ));
    checks.push(check("positive_mean_curvature", offending(data, |p| !(p.h > 0.0))));
    checks.push(check("positive_weight", offending(data, |p| !(p.weight > 0.0))));
    let charged = data.is_charged();
    checks.push(check(
        "consistent_phi",
        if charged { offending(data, |p| p.phi.is_none()) } else { Vec::new() },
    ));
    ValidationReport { checks }
}

/// Area radius `r_o = (|Σ| / ω_{n-1})^{1/(n-1)}`.
pub fn area_radius(data: &BartnikData) -> Result<f64> {
    let area = data.total_area();
    if !(area > 0.0) {
        return Err(Error::DegenerateArea(area));
    }
    if data.n < 3 {
        return Err(Error::InvalidData(format!("dimension {} < 3", data.n)));
    }
    Ok((area / unit_sphere_area(data.n)).powf(1.0 / (data.n - 1) as f64))
}

/// Pointwise `X = R_g - 2 H Δ(1/H)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityField {
    pub values: Vec<f64>,
    pub min: f64,
    pub argmin: usize,
}

impl StabilityField {
    pub fn is_positive(&self) -> bool {
        self.min > 0.0
    }

    pub fn nonpositive_nodes(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, v)| !(**v > 0.0)).map(|(i, _)| i).collect()
    }
}

pub fn stability_field(data: &BartnikData) -> StabilityField {
    let values: Vec<f64> = data.nodes.iter().map(Node::stability).collect();
    let (argmin, min) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    StabilityField { values, min, argmin }
}
