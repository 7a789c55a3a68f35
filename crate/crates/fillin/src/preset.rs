//! Closed-form boundary data selected on the command line.

use clap::ValueEnum;
use fillin_core::surface::{axisymmetric, model_boundary_data, round_sphere, AxisymmetricProfile, PhiMode};
use fillin_core::{BartnikData, ModelFamily};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Preset {
    /// Round sphere of radius `r` with constant `H` (and `φ`).
    Round,
    /// Coordinate sphere `r` in Schwarzschild of mass `model-m`.
    Schwarzschild,
    /// Schwarzschild-anti-de Sitter with `ε = -C/(n(n-1))`, `C < 0`.
    Sads,
    /// Schwarzschild-de Sitter with `ε = -C/(n(n-1))`, `C > 0`.
    Sds,
    /// Reissner-Nordström with the model field.
    Rn,
    /// Unit-area-radius axisymmetric sphere `f = sin θ (1 + f-bump sin²θ)`,
    /// `H = H + h-amp cos θ`, on `grid-x` nodes.
    Axisym,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PresetParams {
    pub n: usize,
    pub r: f64,
    pub h: f64,
    pub phi: Option<f64>,
    pub c: f64,
    pub model_m: f64,
    pub model_q: f64,
    pub h_amp: f64,
    pub f_bump: f64,
    pub grid_x: usize,
}

fn model(params: &PresetParams, family: ModelFamily, phi: PhiMode) -> Result<BartnikData> {
    Ok(model_boundary_data(&family, params.r, phi)?)
}

pub fn generate(preset: Preset, p: &PresetParams) -> Result<BartnikData> {
    let (n, m) = (p.n, p.model_m);
    match preset {
        Preset::Round => Ok(round_sphere(n, p.r, p.h, p.phi)?),
        Preset::Schwarzschild => model(p, ModelFamily::Schwarzschild { n, m }, PhiMode::None),
        Preset::Sads | Preset::Sds => {
            let wanted = if preset == Preset::Sads { p.c < 0.0 } else { p.c > 0.0 };
            if !wanted {
                return Err(CliError::Usage(format!("preset {preset:?} needs C of the matching sign, got {}", p.c)));
            }
            model(p, ModelFamily::with_scalar_curvature(n, m, p.c), PhiMode::None)
        }
        Preset::Rn => model(p, ModelFamily::ReissnerNordstrom { n, m, q: p.model_q }, PhiMode::Model),
        Preset::Axisym => {
            if n != 3 {
                return Err(CliError::Usage("preset axisym is two-dimensional (n = 3)".into()));
            }
            let (h0, amp, bump) = (p.h, p.h_amp, p.f_bump);
            let phi = p.phi;
            let phi_fn = move |_: f64| phi.unwrap_or(0.0);
            let profile = AxisymmetricProfile::from_fns(
                p.grid_x,
                |t: f64| t.sin() * (1.0 + bump * t.sin().powi(2)),
                |t: f64| h0 + amp * t.cos(),
                phi.is_some().then_some(&phi_fn as &dyn Fn(f64) -> f64),
            );
            Ok(axisymmetric(&profile)?)
        }
    }
}
