//! Model radial profiles: the potential
//! `V(u) = 1 + ε u² + Q²/u^{2(n-2)} - 2m/u^{n-2}`, its horizons, and the
//! tabulated collar profile `u(t)` with `u' = √V(u)`, `u(0) = r_o` and
//! `u(t_o) = r_H`.

#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bisect, integrate as quad};

/// Default number of profile samples.
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub n: usize,
    /// `ε = -C / (n(n-1))`.
    pub epsilon: f64,
    pub m: f64,
    /// `Q²`.
    pub q_sq: f64,
}

impl ProfileSpec {
    pub fn new(n: usize, epsilon: f64, m: f64, q_sq: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter { name: "n", reason: format!("{n} < 3") });
        }
        if !(q_sq >= 0.0) {
            return Err(Error::InvalidParameter { name: "Q^2", reason: format!("{q_sq} < 0") });
        }
        Ok(Self { n, epsilon, m, q_sq })
    }

    /// Uncharged profile for the scalar curvature lower bound `c`.
    pub fn for_lower_bound(n: usize, c: f64, m: f64) -> Result<Self> {
        Self::new(n, epsilon_for(n, c), m, 0.0)
    }

    /// `n - 2`.
    fn k(&self) -> i32 {
        self.n as i32 - 2
    }

    pub fn potential(&self, u: f64) -> f64 {
        let k = self.k();
        let uk = u.powi(k);
        let charge = if self.q_sq == 0.0 { 0.0 } else { self.q_sq / (uk * uk) };
        1.0 + self.epsilon * u * u + charge - 2.0 * self.m / uk
    }

    pub fn potential_derivative(&self, u: f64) -> f64 {
        let k = self.k();
        let kf = k as f64;
        2.0 * self.epsilon * u - 2.0 * kf * self.q_sq / u.powi(2 * k + 1)
            + 2.0 * kf * self.m / u.powi(k + 1)
    }

    /// `(n-2) V(u) + u V'(u) = (n-2) + n ε u² - (n-2) Q²/u^{2(n-2)}`.
    ///
    /// This is the combination `(n-2)u'² + 2 u u''` that enters the scalar
    /// curvature of the collar.
    pub fn curvature_source(&self, u: f64) -> f64 {
        let k = self.k() as f64;
        let u2k = u.powi(2 * self.k());
        k + self.n as f64 * self.epsilon * u * u - k * self.q_sq / u2k
    }

    /// `(V(r + y) - V(r)) / y` evaluated without cancellation.
    fn divided_difference(&self, r: f64, y: f64) -> f64 {
        let u = r + y;
        let k = self.k();
        // (u^{-j} - r^{-j}) / (u - r) = -(Σ_i u^i r^{j-1-i}) / (u r)^j
        let inv_power_slope = |j: i32| -> f64 {
            let mut s = 0.0;
            for i in 0..j {
                s += u.powi(i) * r.powi(j - 1 - i);
            }
            -s / (u * r).powi(j)
        };
        self.epsilon * (u + r) + self.q_sq * inv_power_slope(2 * k) - 2.0 * self.m * inv_power_slope(k)
    }

    /// All positive zeros of `V`, classified.
    pub fn horizon_roots(&self) -> Result<HorizonRoots> {
        if !(self.m > 0.0) {
            return Err(Error::NoHorizon(format!(
                "mass parameter m = {} must be positive (m <= 0 gives a cusp, not a minimal surface)",
                self.m
            )));
        }
        let k = self.k() as f64;
        let m = self.m;
        let eps = self.epsilon;
        if self.q_sq > 0.0 {
            if eps != 0.0 {
                return Err(Error::Unsupported(
                    "charged profiles are only supported with epsilon = 0".into(),
                ));
            }
            let disc = m * m - self.q_sq;
            if disc < -1e-14 * m * m {
                return Err(Error::NoHorizon(format!(
                    "Q^2 = {} exceeds m^2 = {}: no horizon (naked singularity regime)",
                    self.q_sq,
                    m * m
                )));
            }
            let root = disc.max(0.0).sqrt();
            if root <= 1e-7 * m {
                let r = m.powf(1.0 / k);
                return Ok(HorizonRoots {
                    roots: alloc::vec![Horizon { radius: r, kind: HorizonKind::BlackHole }],
                    fill_in: r,
                    degenerate: true,
                });
            }
            let outer = (m + root).powf(1.0 / k);
            let inner = (self.q_sq / (m + root)).powf(1.0 / k);
            return Ok(HorizonRoots {
                roots: alloc::vec![
                    Horizon { radius: inner, kind: HorizonKind::Inner },
                    Horizon { radius: outer, kind: HorizonKind::BlackHole },
                ],
                fill_in: outer,
                degenerate: false,
            });
        }
        if eps == 0.0 {
            let r = (2.0 * m).powf(1.0 / k);
            return Ok(HorizonRoots::single(r));
        }
        let v = |u: f64| self.potential(u);
        if eps > 0.0 {
            let r = bisect(v, 0.0, (2.0 * m).powf(1.0 / k), 1e-16)?;
            return Ok(HorizonRoots::single(r));
        }
        // ε < 0: V has a single stationary point u_c; two roots iff V(u_c) > 0.
        let u_c = (m * k / (-eps)).powf(1.0 / self.n as f64);
        let v_c = v(u_c);
        if v_c.abs() <= 1e-14 {
            return Ok(HorizonRoots {
                roots: alloc::vec![Horizon { radius: u_c, kind: HorizonKind::BlackHole }],
                fill_in: u_c,
                degenerate: true,
            });
        }
        if v_c < 0.0 {
            return Err(Error::NoHorizon(format!(
                "m = {m} is above the critical Schwarzschild-de Sitter mass {} for epsilon = {eps}",
                self.critical_mass().unwrap_or(f64::NAN)
            )));
        }
        let r_plus = bisect(v, 0.0, u_c, 1e-16)?;
        let r_minus = bisect(v, u_c, 1.0 / (-eps).sqrt(), 1e-16)?;
        Ok(HorizonRoots {
            roots: alloc::vec![
                Horizon { radius: r_plus, kind: HorizonKind::BlackHole },
                Horizon { radius: r_minus, kind: HorizonKind::Cosmological },
            ],
            fill_in: r_plus,
            degenerate: false,
        })
    }

    /// For `ε < 0, Q = 0`: the mass at which the black-hole and cosmological
    /// horizons coincide.
    pub fn critical_mass(&self) -> Option<f64> {
        if self.epsilon >= 0.0 || self.q_sq != 0.0 {
            return None;
        }
        // V(u_c) = 0 with V'(u_c) = 0 gives u_c² = -(n-2)/(n ε) and
        // 2m = u_c^{n-2} (1 + ε u_c²).
        let n = self.n as f64;
        let u_c2 = -(n - 2.0) / (n * self.epsilon);
        let u_c = u_c2.sqrt();
        Some(0.5 * u_c.powi(self.k()) * (1.0 + self.epsilon * u_c2))
    }
}

/// `ε = -C/(n(n-1))`.
pub fn epsilon_for(n: usize, c: f64) -> f64 {
    let n = n as f64;
    // `+ 0.0` turns the `-0.0` of `C = 0` into `0.0`.
    -c / (n * (n - 1.0)) + 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonKind {
    BlackHole,
    Cosmological,
    /// Inner (Cauchy) horizon of Reissner-Nordström.
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Horizon {
    pub radius: f64,
    pub kind: HorizonKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonRoots {
    /// Ascending by radius.
    pub roots: Vec<Horizon>,
    /// The horizon a collar closes off at: the black-hole root.
    pub fill_in: f64,
    /// Coincident roots (extremal regime).
    pub degenerate: bool,
}

impl HorizonRoots {
    fn single(r: f64) -> Self {
        Self {
            roots: alloc::vec![Horizon { radius: r, kind: HorizonKind::BlackHole }],
            fill_in: r,
            degenerate: false,
        }
    }

    pub fn radii(&self) -> Vec<f64> {
        self.roots.iter().map(|h| h.radius).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub t: f64,
    pub u: f64,
    pub uprime: f64,
}

/// A tabulated profile on a uniform `t`-grid over `[t_o, 0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub spec: ProfileSpec,
    pub r_o: f64,
    pub r_h: f64,
    pub t_o: f64,
    /// Ascending in `t`; the first sample is the horizon, the last is `t = 0`.
    pub samples: Vec<ProfileSample>,
}

impl Profile {
    pub fn step(&self) -> f64 {
        -self.t_o / (self.samples.len() - 1) as f64
    }
}

const QUAD_ABS: f64 = 1e-15;
const QUAD_REL: f64 = 1e-14;

/// Tabulates the collar profile between the fill-in horizon and `r_o`.
///
/// `t(u) = -∫_u^{r_o} dw / √V(w)` is computed with `w = r_H + x²`, which
/// turns the inverse square-root singularity at the simple root into the
/// smooth integrand `2 / √D(x²)`, `D(y) = (V(r_H + y) - V(r_H)) / y`. The
/// table is then inverted onto `samples` uniformly spaced values of `t`.
pub fn integrate(spec: &ProfileSpec, r_o: f64, samples: usize) -> Result<Profile> {
    if !(r_o > 0.0) {
        return Err(Error::InvalidParameter { name: "r_o", reason: format!("{r_o} <= 0") });
    }
    if samples < 3 {
        return Err(Error::InvalidParameter { name: "samples", reason: format!("{samples} < 3") });
    }
    let v_o = spec.potential(r_o);
    if !(v_o > 0.0) {
        return Err(Error::NonPositivePotential { r_o, potential: v_o });
    }
    let roots = spec.horizon_roots()?;
    if roots.degenerate {
        return Err(Error::DegenerateHorizon(roots.fill_in));
    }
    let r_h = roots.fill_in;
    if !(r_h < r_o) {
        return Err(Error::NonPositivePotential { r_o, potential: v_o });
    }
    let integrand = |x: f64| 2.0 / spec.divided_difference(r_h, x * x).sqrt();
    let x_o = (r_o - r_h).sqrt();
    let t_o = -quad(integrand, 0.0, x_o, QUAD_ABS, QUAD_REL)?;

    let mut table = Vec::with_capacity(samples);
    table.push(ProfileSample { t: t_o, u: r_h, uprime: 0.0 });
    // Invert τ(x) = t - t_o by safeguarded Newton, integrating incrementally.
    let (mut x_prev, mut tau_prev) = (0.0, 0.0);
    for j in 1..samples - 1 {
        let target = -t_o * j as f64 / (samples - 1) as f64;
        let (mut lo, mut hi) = (x_prev, x_o);
        let mut x = x_prev + (target - tau_prev) * 0.5 * spec.divided_difference(r_h, x_prev * x_prev).sqrt();
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let mut tau = tau_prev;
        for _ in 0..100 {
            tau = tau_prev + quad(integrand, x_prev, x, QUAD_ABS, QUAD_REL)?;
            let resid = tau - target;
            if resid > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            if resid.abs() <= 1e-15 * (-t_o) || hi - lo <= 1e-16 * x_o {
                break;
            }
            let mut next = x - resid / integrand(x);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            x = next;
        }
        let y = x * x;
        table.push(ProfileSample {
            t: t_o + target,
            u: r_h + y,
            uprime: x * spec.divided_difference(r_h, y).sqrt(),
        });
        x_prev = x;
        tau_prev = tau;
    }
    table.push(ProfileSample { t: 0.0, u: r_o, uprime: v_o.sqrt() });
    Ok(Profile { spec: *spec, r_o, r_h, t_o, samples: table })
}
