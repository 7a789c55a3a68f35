//! JSON and CSV formats.
//!
//! Every float is written with 17 significant digits so that files round-trip
//! bit for bit and identical runs produce identical bytes.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use fillin_core::surface::axisymmetric;
use fillin_core::verify::Grid;
use fillin_core::{AxisymmetricProfile, BartnikData, Collar, Profile, ProfileSpec};
use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::Formatter;

use crate::error::{CliError, Result};

/// `serde_json` formatter writing floats as `{:.16e}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FixedFloat;

impl Formatter for FixedFloat {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat);
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.into(), source })
}

/// Reads boundary data, either as sampled nodes (`{"n", "nodes"}`) or as an
/// axisymmetric profile (`{"M", "f", "H", "phi"?}`).
pub fn read_data(path: &Path) -> Result<BartnikData> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_data(&text).map_err(|source| CliError::Parse { path: path.into(), source })?
}

fn parse_data(text: &str) -> serde_json::Result<Result<BartnikData>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("M").is_some() {
        let profile = AxisymmetricProfile::deserialize(value)?;
        Ok(axisymmetric(&profile).map_err(CliError::from))
    } else {
        Ok(Ok(BartnikData::deserialize(value)?))
    }
}

pub fn profile_csv(profile: &Profile) -> String {
    let mut out = String::from("t,u,uprime\n");
    for s in &profile.samples {
        let _ = writeln!(out, "{},{},{}", float(s.t), float(s.u), float(s.uprime));
    }
    out
}

/// Long-format grid: one row per (sample, node).
pub fn grid_csv(collar: &Collar, grid: &Grid) -> String {
    let mut out = String::from("t,node,u,R\n");
    for (i, s) in collar.profile.samples.iter().enumerate() {
        for j in 0..grid.nodes {
            let _ = writeln!(out, "{},{j},{},{}", float(s.t), float(s.u), float(grid.get(i, j)));
        }
    }
    out
}

/// Collar summary; the profile table is stored separately as CSV.
#[derive(Debug, serde::Serialize)]
pub struct CollarExport<'a> {
    pub spec: &'a ProfileSpec,
    pub c: f64,
    pub r_o: f64,
    pub r_h: f64,
    pub t_o: f64,
    pub admissible: bool,
    pub lapse: &'a [f64],
    pub profile: &'a str,
}

impl<'a> CollarExport<'a> {
    pub fn new(collar: &'a Collar, profile: &'a str) -> Self {
        Self {
            spec: &collar.profile.spec,
            c: collar.c,
            r_o: collar.r_o(),
            r_h: collar.r_h(),
            t_o: collar.t_o(),
            admissible: collar.admissible,
            lapse: &collar.lapse,
            profile,
        }
    }
}

pub const MASS_CSV_HEADER: &str = "n,C,hawking,chi,flat_bound,flat_r_h,ah_bound,ah_r_h,charged_m,charged_q,q_sigma,charged_bound,charged_r_h,entropy_bound";

pub fn mass_csv_row(r: &fillin_core::MassReport) -> String {
    let c = r.charged_bound.as_ref();
    [
        r.n.to_string(),
        float(r.c),
        opt(r.hawking),
        opt(r.chi.map(|c| c.value)),
        opt(r.flat_bound.map(|b| b.value)),
        opt(r.flat_bound.map(|b| b.r_h)),
        opt(r.ah_bound.map(|b| b.value)),
        opt(r.ah_bound.map(|b| b.r_h)),
        opt(c.map(|b| b.m)),
        opt(c.map(|b| b.q)),
        opt(c.map(|b| b.q_sigma)),
        opt(c.map(|b| b.value)),
        opt(c.map(|b| b.r_h)),
        opt(r.entropy_bound),
    ]
    .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use fillin_core::surface::round_sphere;

    #[test]
    fn floats_round_trip() {
        let d = round_sphere(3, 1.0 / 3.0, 0.1, Some(1e-300)).unwrap();
        let text = to_json(&d);
        let back = parse_data(&text).unwrap().unwrap();
        assert_eq!(back.nodes, d.nodes);
        assert!(text.contains("\"Rg\":1.8000000000000000e1"), "{text}");
        assert_eq!(float(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn reads_both_layouts() {
        let nodes = r#"{"n":3,"nodes":[{"weight":12.566370614359172,"Rg":2,"H":1,"lapHinv":0}]}"#;
        let d = parse_data(nodes).unwrap().unwrap();
        assert!(d.nodes[0].phi.is_none());
        let m = 64;
        let theta = |i: usize| i as f64 * std::f64::consts::PI / (m - 1) as f64;
        let f: Vec<f64> = (0..m).map(|i| if i == 0 || i == m - 1 { 0.0 } else { theta(i).sin() }).collect();
        let profile = serde_json::json!({ "M": m, "f": f, "H": vec![1.0; m] });
        let d = parse_data(&profile.to_string()).unwrap().unwrap();
        assert_eq!(d.nodes.len(), m);
        assert!(parse_data("{\"n\":3}").is_err());
    }
}
