//! Parameter sweeps over `m`, the mean curvature scale `λ`, `C` and `r_o`.

use std::fmt::Write as _;
use std::str::FromStr;

use fillin_core::collar::{feasibility_charged, FeasibilityOptions};
use fillin_core::verify::{certify_divergence_free, certify_energy_condition, certify_lower_bound, default_tolerance};
use fillin_core::{build, build_charged, feasibility_negative, feasibility_nonnegative, BartnikData, BuildOptions, Collar};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::io::float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepKey {
    M,
    Lambda,
    C,
    R,
}

impl SweepKey {
    pub fn name(self) -> &'static str {
        match self {
            SweepKey::M => "m",
            SweepKey::Lambda => "lambda",
            SweepKey::C => "C",
            SweepKey::R => "r",
        }
    }
}

/// `key=lo:hi:steps`, `steps` evenly spaced values including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRange {
    pub key: SweepKey,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (key, range) = s.split_once('=').ok_or("expected key=lo:hi:steps")?;
        let key = match key {
            "m" => SweepKey::M,
            "lambda" => SweepKey::Lambda,
            "C" => SweepKey::C,
            "r" => SweepKey::R,
            other => return Err(format!("unknown sweep key {other:?} (m, lambda, C, r)")),
        };
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err("expected key=lo:hi:steps".into());
        }
        let num = |p: &str| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        let steps: usize = parts[2].parse().map_err(|e| format!("{:?}: {e}", parts[2]))?;
        if steps == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo || (steps == 1 && hi != lo) {
            return Err(format!("empty or invalid range {range:?}"));
        }
        Ok(SweepRange { key, lo, hi, steps })
    }
}

impl SweepRange {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.hi } else { self.lo + i as f64 * h }).collect()
    }
}

/// One configuration to evaluate.
#[derive(Debug, Clone)]
pub struct Point {
    pub value: f64,
    pub data: std::result::Result<BartnikData, String>,
    pub c: f64,
    pub m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Row {
    pub value: f64,
    pub feasible: bool,
    pub admissible: bool,
    pub m_max: Option<f64>,
    pub m: Option<f64>,
    pub r_h: Option<f64>,
    pub t_o: Option<f64>,
    pub min_margin: Option<f64>,
    pub certified: bool,
    /// Mass of the fill-in horizon, `r_H^{n-2}(1 + ε r_H²)/2` (or the
    /// charged bound), once certified.
    pub bound: Option<f64>,
    pub flagged: bool,
    pub note: String,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub build: BuildOptions,
    pub tol: Option<f64>,
    pub exterior_mass: Option<f64>,
}

fn certify(collar: &Collar, tol: Option<f64>) -> (f64, bool) {
    let tol = tol.unwrap_or_else(|| default_tolerance(collar));
    let mut margin = f64::INFINITY;
    let mut pass = true;
    let mut certs = vec![certify_lower_bound(collar, tol)];
    if collar.charged.is_some() {
        certs.extend(certify_energy_condition(collar, tol));
        certs.extend(certify_divergence_free(collar, tol));
    }
    for c in certs {
        margin = margin.min(c.min_margin);
        pass &= c.pass;
    }
    (margin, pass)
}

pub fn evaluate(point: &Point, opts: &SweepOptions) -> Row {
    let mut row = Row { value: point.value, ..Default::default() };
    let data = match &point.data {
        Ok(d) => d,
        Err(e) => {
            row.note = e.clone();
            return row;
        }
    };
    let feas = FeasibilityOptions { mode: opts.build.mode, strict_margin: opts.build.strict_margin };
    let charged = data.is_charged() && point.c == 0.0;
    let report = if charged {
        feasibility_charged(data, &feas)
    } else if point.c < 0.0 {
        feasibility_negative(data, point.c, &feas)
    } else {
        feasibility_nonnegative(data, point.c, &feas)
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            row.note = e.to_string();
            return row;
        }
    };
    row.feasible = report.feasible;
    row.m_max = report.m_max;
    row.m = point.m.or(report.m_max);
    row.admissible = row.m.is_some_and(|m| m > 0.0 && report.admits(m, 1e-12));
    if !row.admissible {
        row.note = report.causes.join("; ");
        return row;
    }
    let built = if charged {
        build_charged(data, &report, &opts.build)
    } else {
        build(data, point.c, row.m, &opts.build)
    };
    let collar = match built {
        Ok(c) => c,
        Err(e) => {
            row.note = e.to_string();
            return row;
        }
    };
    let (margin, pass) = certify(&collar, opts.tol);
    row.r_h = Some(collar.r_h());
    row.t_o = Some(collar.t_o());
    row.min_margin = Some(margin);
    row.certified = pass;
    if pass {
        let bound = if charged {
            fillin_core::mass::charged_mass_bound(data).map(|b| b.value).ok()
        } else {
            let spec = &collar.profile.spec;
            let r = collar.r_h();
            Some(0.5 * r.powi(spec.n as i32 - 2) * (1.0 + spec.epsilon * r * r))
        };
        row.bound = bound;
        row.flagged = match (bound, opts.exterior_mass) {
            (Some(b), Some(ext)) => b > ext * (1.0 + 1e-10),
            _ => false,
        };
    }
    row
}

/// Evaluates every point on a pool of `jobs` threads (0: one per core).
/// Rows come back in input order.
pub fn run(points: &[Point], opts: &SweepOptions, jobs: usize) -> Result<Vec<Row>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    Ok(pool.install(|| points.par_iter().map(|p| evaluate(p, opts)).collect()))
}

/// Certified row with the largest horizon radius.
pub fn argmax_r_h(rows: &[Row]) -> Option<&Row> {
    rows.iter()
        .filter(|r| r.certified)
        .fold(None, |best: Option<&Row>, r| match best {
            Some(b) if b.r_h >= r.r_h => Some(b),
            _ => Some(r),
        })
}

fn opt(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_row(out: &mut String, label: &str, r: &Row) {
    let _ = writeln!(
        out,
        "{label},{},{},{},{},{},{},{},{},{},{},{},{}",
        float(r.value),
        r.feasible,
        r.admissible,
        opt(r.m_max),
        opt(r.m),
        opt(r.r_h),
        opt(r.t_o),
        opt(r.min_margin),
        r.certified,
        opt(r.bound),
        r.flagged,
        csv_field(&r.note)
    );
}

/// One row per point and a final `argmax` row (empty when nothing was
/// certified).
pub fn to_csv(key: SweepKey, rows: &[Row]) -> String {
    let mut out = format!(
        "row,{},feasible,admissible,m_max,m,r_h,t_o,min_margin,certified,bound,flagged,note\n",
        key.name()
    );
    for r in rows {
        write_row(&mut out, "point", r);
    }
    match argmax_r_h(rows) {
        Some(best) => write_row(&mut out, "argmax_r_h", best),
        None => out.push_str("argmax_r_h,,,,,,,,,,,,\n"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges() {
        let r: SweepRange = "lambda=0.1:3:30".parse().unwrap();
        assert_eq!(r.key, SweepKey::Lambda);
        let v = r.values();
        assert_eq!(v.len(), 30);
        assert_eq!((v[0], v[29]), (0.1, 3.0));
        let r: SweepRange = "C=-10:-1:4".parse().unwrap();
        assert_eq!(r.values(), vec![-10.0, -7.0, -4.0, -1.0]);
        for bad in ["m=1:0:3", "x=0:1:2", "m=0:1", "m=0:1:0", "m=a:1:2", "m=0:1:1"] {
            assert!(bad.parse::<SweepRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn argmax_prefers_first_of_ties() {
        let row = |v: f64, r: Option<f64>, certified| Row { value: v, r_h: r, certified, ..Default::default() };
        let rows = [row(0.0, Some(1.0), true), row(1.0, Some(2.0), true), row(2.0, Some(2.0), true), row(3.0, Some(9.0), false)];
        assert_eq!(argmax_r_h(&rows).unwrap().value, 1.0);
        assert!(argmax_r_h(&rows[3..]).is_none());
    }
}
