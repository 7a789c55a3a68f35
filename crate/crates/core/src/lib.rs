//! Explicit collar fill-ins of (charged) Bartnik data.
//!
//! Given sampled boundary data `(Σ, g, H)` (optionally with a normal electric
//! field `φ`), this crate builds warped collars
//! `γ = A(x)² dt² + (u(t)/r_o)² g` on `Σ × [t_o, 0]` whose outer slice
//! reproduces the data and whose inner slice is a minimal surface, checks the
//! admissibility conditions on the mass parameter, certifies the scalar
//! curvature lower bound numerically and evaluates the mass lower bounds that
//! follow from the fill-ins.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, sweeps and the
//! command line live in the `fillin` crate.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bartnik;
pub mod collar;
mod error;
pub mod mass;
pub mod numeric;
pub mod profile;
pub mod surface;
pub mod verify;

pub use bartnik::{area_radius, stability_field, validate, BartnikData, Node, StabilityField};
pub use collar::{
    build, build_charged, feasibility_charged, feasibility_negative, feasibility_nonnegative,
    BuildOptions, Collar, FeasibilityReport, Mode,
};
pub use error::{Error, Result};
pub use mass::{mass_report, MassReport};
pub use profile::{HorizonRoots, Profile, ProfileSpec};
pub use surface::{AxisymmetricProfile, ModelFamily};
pub use verify::{certify_lower_bound, scalar_curvature_grid, Certificate};
