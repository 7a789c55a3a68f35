//! Generators of boundary data from concrete surfaces: round spheres,
//! axisymmetric 2-spheres `dθ² + f(θ)² dφ²`, and the round boundary spheres of
//! the model manifolds.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use serde::{Deserialize, Serialize};

use crate::bartnik::{BartnikData, Node};
use crate::error::{Error, Result};
use crate::numeric::unit_sphere_area;
use crate::profile::{epsilon_for, ProfileSpec};

pub const DEFAULT_AXISYMMETRIC_NODES: usize = 400;
const MIN_AXISYMMETRIC_NODES: usize = 32;

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("{v} is not positive") })
    }
}

/// Round sphere of area radius `r_o` with constant mean curvature `h` and,
/// optionally, constant normal field `phi`.
pub fn round_sphere(n: usize, r_o: f64, h: f64, phi: Option<f64>) -> Result<BartnikData> {
    if n < 3 {
        return Err(Error::InvalidParameter { name: "n", reason: format!("{n} < 3") });
    }
    positive("r_o", r_o)?;
    positive("H", h)?;
    let k = (n - 1) as f64;
    let node = Node {
        weight: unit_sphere_area(n) * r_o.powi(n as i32 - 1),
        rg: k * (k - 1.0) / (r_o * r_o),
        h,
        lap_h_inv: 0.0,
        phi,
    };
    Ok(BartnikData::new(n, alloc::vec![node]))
}

/// An axisymmetric 2-sphere `dθ² + f(θ)² dφ²` sampled on the uniform grid
/// `θ_i = iπ/(M-1)`, with mean curvature and optional charge density on the
/// same grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisymmetricProfile {
    #[serde(rename = "M")]
    pub nodes: usize,
    pub f: Vec<f64>,
    #[serde(rename = "H")]
    pub h: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<f64>>,
}

impl AxisymmetricProfile {
    pub fn from_fns<F, G>(nodes: usize, f: F, h: G, phi: Option<&dyn Fn(f64) -> f64>) -> Self
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
    {
        let step = PI / (nodes - 1) as f64;
        let theta: Vec<f64> = (0..nodes).map(|i| i as f64 * step).collect();
        let mut fv: Vec<f64> = theta.iter().map(|&t| f(t)).collect();
        // Exact zeros at the poles.
        fv[0] = 0.0;
        fv[nodes - 1] = 0.0;
        Self {
            nodes,
            f: fv,
            h: theta.iter().map(|&t| h(t)).collect(),
            phi: phi.map(|p| theta.iter().map(|&t| p(t)).collect()),
        }
    }

    pub fn step(&self) -> f64 {
        PI / (self.nodes - 1) as f64
    }

    pub fn theta(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    fn check(&self) -> Result<()> {
        let m = self.nodes;
        if m < MIN_AXISYMMETRIC_NODES {
            return Err(Error::InvalidParameter {
                name: "M",
                reason: format!("{m} < {MIN_AXISYMMETRIC_NODES}"),
            });
        }
        if self.f.len() != m || self.h.len() != m || self.phi.as_ref().is_some_and(|p| p.len() != m) {
            return Err(Error::InvalidParameter { name: "M", reason: "field lengths differ from M".into() });
        }
        let h = self.step();
        let f = &self.f;
        let scale = f.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if f[0].abs() > 1e-12 * scale || f[m - 1].abs() > 1e-12 * scale {
            return Err(Error::InvalidParameter { name: "f", reason: "f must vanish at both poles".into() });
        }
        // Odd extension through the pole: f'(0) ≈ (8 f_1 - f_2) / (6h) to O(h⁴).
        let slope_south = (8.0 * f[1] - f[2]) / (6.0 * h);
        let slope_north = -(8.0 * f[m - 2] - f[m - 3]) / (6.0 * h);
        if (slope_south - 1.0).abs() > 1e-3 || (slope_north + 1.0).abs() > 1e-3 {
            return Err(Error::InvalidParameter {
                name: "f",
                reason: format!("pole regularity f'(0) = 1, f'(π) = -1 violated ({slope_south}, {slope_north})"),
            });
        }
        if let Some(i) = (1..m - 1).find(|&i| !(f[i] > 0.0)) {
            return Err(Error::InvalidParameter { name: "f", reason: format!("f <= 0 at interior node {i}") });
        }
        if let Some(i) = (0..m).find(|&i| !(self.h[i] > 0.0)) {
            return Err(Error::InvalidParameter { name: "H", reason: format!("H <= 0 at node {i}") });
        }
        Ok(())
    }
}

/// Samples an axisymmetric profile into `n = 3` boundary data.
///
/// `R_g = -2 f''/f` and `Δ(1/H) = (f (1/H)')' / f` use second-order central
/// differences; at the poles the odd reflection of `f` and the even
/// reflection of `1/H` give `R_g = -2 f'''(0)` and `Δ(1/H) = 2 (1/H)''(0)`.
/// Weights are `2π f_i Δθ` in the interior; each pole carries the
/// Euler-Maclaurin endpoint correction `2π Δθ²/12` that follows from
/// `f'(0) = 1, f'(π) = -1`.
pub fn axisymmetric(profile: &AxisymmetricProfile) -> Result<BartnikData> {
    profile.check()?;
    let m = profile.nodes;
    let h = profile.step();
    let f = &profile.f;
    let w: Vec<f64> = profile.h.iter().map(|v| 1.0 / v).collect();
    let pole_weight = 2.0 * PI * h * h / 12.0;

    let mut nodes = Vec::with_capacity(m);
    for i in 0..m {
        let (weight, rg, lap) = if i == 0 {
            let f3 = (f[2] - 2.0 * f[1]) / (h * h * h);
            (pole_weight, -2.0 * f3, 4.0 * (w[1] - w[0]) / (h * h))
        } else if i == m - 1 {
            let f3 = (f[m - 3] - 2.0 * f[m - 2]) / (h * h * h);
            (pole_weight, -2.0 * f3, 4.0 * (w[m - 2] - w[m - 1]) / (h * h))
        } else {
            let fpp = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
            let f_plus = 0.5 * (f[i] + f[i + 1]);
            let f_minus = 0.5 * (f[i] + f[i - 1]);
            let flux = f_plus * (w[i + 1] - w[i]) - f_minus * (w[i] - w[i - 1]);
            (2.0 * PI * f[i] * h, -2.0 * fpp / f[i], flux / (h * h * f[i]))
        };
        nodes.push(Node {
            weight,
            rg,
            h: profile.h[i],
            lap_h_inv: lap,
            phi: profile.phi.as_ref().map(|p| p[i]),
        });
    }
    let mut data = BartnikData::new(3, nodes);
    data.origin = Some(profile.clone());
    Ok(data)
}

/// Spherically symmetric model manifolds whose round spheres provide
/// reference boundary data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelFamily {
    Schwarzschild { n: usize, m: f64 },
    /// `epsilon < 0`.
    SchwarzschildDeSitter { n: usize, m: f64, epsilon: f64 },
    /// `epsilon > 0`.
    SchwarzschildAntiDeSitter { n: usize, m: f64, epsilon: f64 },
    ReissnerNordstrom { n: usize, m: f64, q: f64 },
}

impl ModelFamily {
    /// Model with scalar curvature `c` (`ε = -c/(n(n-1))`), choosing the
    /// de Sitter / anti-de Sitter family from the sign of `c`.
    pub fn with_scalar_curvature(n: usize, m: f64, c: f64) -> Self {
        let epsilon = epsilon_for(n, c);
        if c < 0.0 {
            Self::SchwarzschildAntiDeSitter { n, m, epsilon }
        } else if c > 0.0 {
            Self::SchwarzschildDeSitter { n, m, epsilon }
        } else {
            Self::Schwarzschild { n, m }
        }
    }

    pub fn spec(&self) -> Result<ProfileSpec> {
        match *self {
            Self::Schwarzschild { n, m } => ProfileSpec::new(n, 0.0, m, 0.0),
            Self::SchwarzschildDeSitter { n, m, epsilon } => {
                if !(epsilon < 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "epsilon",
                        reason: "de Sitter family needs epsilon < 0".into(),
                    });
                }
                ProfileSpec::new(n, epsilon, m, 0.0)
            }
            Self::SchwarzschildAntiDeSitter { n, m, epsilon } => {
                if !(epsilon > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "epsilon",
                        reason: "anti-de Sitter family needs epsilon > 0".into(),
                    });
                }
                ProfileSpec::new(n, epsilon, m, 0.0)
            }
            Self::ReissnerNordstrom { n, m, q } => ProfileSpec::new(n, 0.0, m, q * q),
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Self::Schwarzschild { n, .. }
            | Self::SchwarzschildDeSitter { n, .. }
            | Self::SchwarzschildAntiDeSitter { n, .. }
            | Self::ReissnerNordstrom { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiMode {
    None,
    /// `φ = Q / r_o^{n-1}`, the model's own field.
    Model,
}

/// Boundary data of the coordinate sphere `u = r_o` in a model manifold:
/// `H = ((n-1)/r_o) √V(r_o)`, `R_g = (n-1)(n-2)/r_o²`.
pub fn model_boundary_data(model: &ModelFamily, r_o: f64, phi_mode: PhiMode) -> Result<BartnikData> {
    positive("r_o", r_o)?;
    let spec = model.spec()?;
    let v = spec.potential(r_o);
    if !(v > 0.0) {
        return Err(Error::NonPositivePotential { r_o, potential: v });
    }
    let n = spec.n;
    let phi = match (phi_mode, model) {
        (PhiMode::None, _) => None,
        (PhiMode::Model, ModelFamily::ReissnerNordstrom { q, .. }) => Some(q / r_o.powi(n as i32 - 1)),
        (PhiMode::Model, _) => {
            return Err(Error::InvalidParameter {
                name: "phi_mode",
                reason: "model field requires the Reissner-Nordström family".into(),
            })
        }
    };
    round_sphere(n, r_o, (n - 1) as f64 / r_o * v.sqrt(), phi)
}
