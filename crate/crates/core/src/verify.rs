//! Numerical certification of built collars.
//!
//! The certificates evaluate the closed-form scalar curvature
//! `R_γ = (r_o/u)² [X - H² S(u) / ((n-1)V(r_o))]`, with
//! `S(u) = (n-2)V(u) + uV'(u)` taken analytically from [`ProfileSpec`](crate::ProfileSpec), on
//! every (profile sample, node) pair. The tensor oracle recomputes `R_γ` from
//! the metric components alone with finite differences.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float as _;
use serde::{Deserialize, Serialize};

use crate::collar::Collar;
use crate::error::{Error, Result};

/// Tolerance for certificates of analytically specified data.
pub const ANALYTIC_TOLERANCE: f64 = 1e-8;
/// Tolerance when the boundary fields come from finite differences.
pub const SAMPLED_TOLERANCE: f64 = 1e-5;

/// `ANALYTIC_TOLERANCE`, or `SAMPLED_TOLERANCE` for data sampled from an
/// axisymmetric surface.
pub fn default_tolerance(collar: &Collar) -> f64 {
    if collar.data.origin.is_some() {
        SAMPLED_TOLERANCE
    } else {
        ANALYTIC_TOLERANCE
    }
}

/// Values on the (profile sample × node) grid, row-major in `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t: Vec<f64>,
    pub nodes: usize,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn get(&self, sample: usize, node: usize) -> f64 {
        self.values[sample * self.nodes + node]
    }

    fn argmin(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::INFINITY);
        for (k, &v) in self.values.iter().enumerate() {
            if v < best.2 || v.is_nan() {
                best = (k / self.nodes, k % self.nodes, v);
                if v.is_nan() {
                    break;
                }
            }
        }
        best
    }
}

pub fn scalar_curvature_grid(collar: &Collar) -> Grid {
    let n = collar.n() as f64;
    let spec = &collar.profile.spec;
    let r_o = collar.r_o();
    let v_o = collar.boundary_potential();
    let nodes = collar.data.nodes.len();
    let mut values = Vec::with_capacity(collar.profile.samples.len() * nodes);
    for s in &collar.profile.samples {
        let source = spec.curvature_source(s.u);
        let scale = (r_o / s.u).powi(2);
        for p in &collar.data.nodes {
            values.push(scale * (p.stability() - p.h * p.h * source / ((n - 1.0) * v_o)));
        }
    }
    Grid { t: collar.profile.samples.iter().map(|s| s.t).collect(), nodes, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// `R_γ >= C`.
    LowerBound,
    /// `R_γ >= (n-1)(n-2)|E|²`.
    EnergyCondition,
    /// `div E = 0`; the margin is `-max |div E|`.
    DivergenceFree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// The lower bound `C` (zero for the charged certificates).
    pub bound: f64,
    pub min_margin: f64,
    pub worst_t: f64,
    pub worst_node: usize,
    /// `max |H_0 - H| / H` over the nodes.
    pub boundary_mean_curvature_error: f64,
    /// `max |H_{t_o}|` over the nodes.
    pub horizon_mean_curvature: f64,
    /// `(N_t, N_x)`.
    pub grid: (usize, usize),
    pub tolerance: f64,
    pub pass: bool,
}

fn boundary_errors(collar: &Collar) -> (f64, f64) {
    let last = collar.profile.samples.len() - 1;
    let mut outer = 0.0f64;
    let mut inner = 0.0f64;
    for (j, p) in collar.data.nodes.iter().enumerate() {
        outer = outer.max((collar.slice_mean_curvature(last, j) - p.h).abs() / p.h);
        inner = inner.max(collar.slice_mean_curvature(0, j).abs());
    }
    (outer, inner)
}

fn certificate(collar: &Collar, kind: CertificateKind, bound: f64, margins: &Grid, tol: f64) -> Certificate {
    let (i, j, min_margin) = margins.argmin();
    let (outer, inner) = boundary_errors(collar);
    let pass = min_margin >= -tol && outer <= tol && inner <= tol;
    Certificate {
        kind,
        bound,
        min_margin,
        worst_t: margins.t[i],
        worst_node: j,
        boundary_mean_curvature_error: outer,
        horizon_mean_curvature: inner,
        grid: (margins.t.len(), margins.nodes),
        tolerance: tol,
        pass,
    }
}

/// Minimum of `R_γ - C` over the grid plus the boundary reproduction checks.
pub fn certify_lower_bound(collar: &Collar, tol: f64) -> Certificate {
    let mut grid = scalar_curvature_grid(collar);
    for v in &mut grid.values {
        *v -= collar.c;
    }
    certificate(collar, CertificateKind::LowerBound, collar.c, &grid, tol)
}

/// Minimum of `R_γ - (n-1)(n-2)|E|²` over the grid.
pub fn certify_energy_condition(collar: &Collar, tol: f64) -> Result<Certificate> {
    if collar.charged.is_none() {
        return Err(Error::InvalidParameter { name: "collar", reason: "collar carries no electric field".into() });
    }
    let n = collar.n() as f64;
    let mut grid = scalar_curvature_grid(collar);
    for (i, s) in collar.profile.samples.iter().enumerate() {
        for j in 0..grid.nodes {
            let e = collar.electric_magnitude(s.u, j);
            grid.values[i * grid.nodes + j] -= (n - 1.0) * (n - 2.0) * e * e;
        }
    }
    Ok(certificate(collar, CertificateKind::EnergyCondition, 0.0, &grid, tol))
}

/// `div E = (1/√γ) ∂_t(√γ E^t)` on the grid for the field `e_t(u, node)`,
/// with second-order differences in `t` (one-sided at the ends). The
/// surface density factor of `√γ` is `t`-independent and cancels.
pub fn divergence_grid<F>(collar: &Collar, e_t: F) -> Grid
where
    F: Fn(f64, usize) -> f64,
{
    let samples = &collar.profile.samples;
    let nt = samples.len();
    let h = collar.profile.step();
    let nodes = collar.data.nodes.len();
    let e = (collar.n() - 1) as i32;
    let r_o = collar.r_o();
    let mut values = alloc::vec![0.0; nt * nodes];
    for j in 0..nodes {
        let a = collar.lapse[j];
        let density: Vec<f64> = samples.iter().map(|s| a * (s.u / r_o).powi(e)).collect();
        let flux: Vec<f64> = samples.iter().zip(&density).map(|(s, d)| d * e_t(s.u, j)).collect();
        for i in 0..nt {
            let d = if i == 0 {
                (-3.0 * flux[0] + 4.0 * flux[1] - flux[2]) / (2.0 * h)
            } else if i == nt - 1 {
                (3.0 * flux[nt - 1] - 4.0 * flux[nt - 2] + flux[nt - 3]) / (2.0 * h)
            } else {
                (flux[i + 1] - flux[i - 1]) / (2.0 * h)
            };
            values[i * nodes + j] = d / density[i];
        }
    }
    Grid { t: samples.iter().map(|s| s.t).collect(), nodes, values }
}

pub fn certify_divergence_free(collar: &Collar, tol: f64) -> Result<Certificate> {
    if collar.charged.is_none() {
        return Err(Error::InvalidParameter { name: "collar", reason: "collar carries no electric field".into() });
    }
    let mut grid = divergence_grid(collar, |u, j| collar.electric_t_component(u, j));
    for v in &mut grid.values {
        *v = -v.abs();
    }
    Ok(certificate(collar, CertificateKind::DivergenceFree, 0.0, &grid, tol))
}

/// A diagonal metric `Σ_a g_a(x⁰, x¹) (dx^a)²` sampled on a uniform grid in
/// the first two coordinates; any further coordinates are ignorable.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMetric2 {
    pub shape: (usize, usize),
    pub step: (f64, f64),
    /// `components[a][i * shape.1 + j]`.
    pub components: Vec<Vec<f64>>,
}

impl DiagonalMetric2 {
    fn at(&self, a: usize, i: usize, j: usize) -> f64 {
        self.components[a][i * self.shape.1 + j]
    }

    /// Scalar curvature at interior grid point `(i, j)` from central
    /// differences of the components (Christoffel symbols and their
    /// derivatives assembled generically).
    #[allow(clippy::needless_range_loop)]
    pub fn scalar_curvature(&self, i: usize, j: usize) -> f64 {
        let dim = self.components.len();
        let (h0, h1) = self.step;
        let mut g = [0.0; 8];
        let mut dg = [[0.0; 2]; 8];
        let mut ddg = [[[0.0; 2]; 2]; 8];
        for a in 0..dim {
            let f = |di: isize, dj: isize| self.at(a, (i as isize + di) as usize, (j as isize + dj) as usize);
            g[a] = f(0, 0);
            dg[a][0] = (f(1, 0) - f(-1, 0)) / (2.0 * h0);
            dg[a][1] = (f(0, 1) - f(0, -1)) / (2.0 * h1);
            ddg[a][0][0] = (f(1, 0) - 2.0 * f(0, 0) + f(-1, 0)) / (h0 * h0);
            ddg[a][1][1] = (f(0, 1) - 2.0 * f(0, 0) + f(0, -1)) / (h1 * h1);
            let cross = (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4.0 * h0 * h1);
            ddg[a][0][1] = cross;
            ddg[a][1][0] = cross;
        }
        // ∂_c g_ab for a diagonal metric: nonzero only when a = b and c < 2.
        let d = |a: usize, b: usize, c: usize| if a == b && c < 2 { dg[a][c] } else { 0.0 };
        let dd = |a: usize, b: usize, c: usize, e: usize| {
            if a == b && c < 2 && e < 2 {
                ddg[a][c][e]
            } else {
                0.0
            }
        };
        // Γ^a_bc and ∂_e Γ^a_bc.
        let gamma = |a: usize, b: usize, c: usize| 0.5 / g[a] * (d(a, c, b) + d(a, b, c) - d(b, c, a));
        let dgamma = |e: usize, a: usize, b: usize, c: usize| {
            if e >= 2 {
                return 0.0;
            }
            let inner = d(a, c, b) + d(a, b, c) - d(b, c, a);
            let d_inner = dd(a, c, b, e) + dd(a, b, c, e) - dd(b, c, a, e);
            -0.5 * dg[a][e] / (g[a] * g[a]) * inner + 0.5 / g[a] * d_inner
        };
        let mut scalar = 0.0;
        for b in 0..dim {
            // R_bb = ∂_a Γ^a_bb - ∂_b Γ^a_ab + Γ^a_ad Γ^d_bb - Γ^a_bd Γ^d_ab
            let mut ricci = 0.0;
            for a in 0..dim {
                ricci += dgamma(a, a, b, b) - dgamma(b, a, a, b);
                for e in 0..dim {
                    ricci += gamma(a, a, e) * gamma(e, b, b) - gamma(a, b, e) * gamma(e, a, b);
                }
            }
            scalar += ricci / g[b];
        }
        scalar
    }
}

/// Oracle values at interior grid points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleGrid {
    /// `(sample, node, R_γ)`.
    pub points: Vec<(usize, usize, f64)>,
}

impl OracleGrid {
    /// Largest `|oracle - closed form|`.
    pub fn max_discrepancy(&self, closed_form: &Grid) -> f64 {
        self.points
            .iter()
            .map(|&(i, j, v)| (v - closed_form.get(i, j)).abs())
            .fold(0.0, f64::max)
    }
}

/// Recomputes the scalar curvature of `A(θ)² dt² + (u/r_o)² (dθ² + f² dφ²)`
/// with [`DiagonalMetric2`], from `A`, the tabulated `u` and the stored
/// `f(θ)` only. Points within `polar_margin` of either pole are skipped,
/// where the coordinate singularity of `(θ, φ)` spoils the difference
/// quotients.
pub fn fd_tensor_oracle(collar: &Collar, polar_margin: f64) -> Result<OracleGrid> {
    let origin = collar.data.origin.as_ref().ok_or_else(|| Error::InvalidParameter {
        name: "collar",
        reason: "oracle needs data sampled from an axisymmetric surface".into(),
    })?;
    if collar.n() != 3 {
        return Err(Error::InvalidParameter { name: "n", reason: format!("oracle is for n = 3, got {}", collar.n()) });
    }
    let nt = collar.profile.samples.len();
    let nx = origin.nodes;
    let r_o = collar.r_o();
    let mut comps = alloc::vec![Vec::with_capacity(nt * nx); 3];
    for s in &collar.profile.samples {
        let e2 = (s.u / r_o).powi(2);
        for j in 0..nx {
            comps[0].push(collar.lapse[j] * collar.lapse[j]);
            comps[1].push(e2);
            comps[2].push(e2 * origin.f[j] * origin.f[j]);
        }
    }
    let metric = DiagonalMetric2 { shape: (nt, nx), step: (collar.profile.step(), origin.step()), components: comps };
    let mut points = Vec::new();
    for i in 1..nt - 1 {
        for j in 1..nx - 1 {
            let theta = origin.theta(j);
            if theta < polar_margin || theta > core::f64::consts::PI - polar_margin {
                continue;
            }
            points.push((i, j, metric.scalar_curvature(i, j)));
        }
    }
    Ok(OracleGrid { points })
}
