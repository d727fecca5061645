//! Comparison reports and their on-disk form.
//!
//! Norms are always derived from the profile rows, the same rows that are written to
//! `profile.csv`. Floats are printed in shortest round-trip form, so re-deriving the norms from
//! the file reproduces the stored values bit for bit.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::config::ModelKind;
use crate::reference::{radial_average, radial_l2};

pub const PROFILE_HEADER: [&str; 6] = ["model", "regime", "t", "z", "r_or_diag", "value"];
pub const CONVERGENCE_HEADER: [&str; 5] = ["study", "level", "h", "error", "order"];
/// `r_or_diag` entry of a cell-average row.
pub const AVERAGE_TAG: &str = "avg";

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub model: ModelKind,
    pub t: f64,
    pub z: f64,
    /// Radius, or `None` for the cross-sectional average.
    pub r: Option<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub h: f64,
    pub error: f64,
    /// Observed order against the previous level.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub study: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Fills in observed orders from consecutive `(h, error)` pairs.
    pub fn from_levels(study: &str, levels: &[(f64, f64)]) -> Self {
        let rows = levels
            .iter()
            .enumerate()
            .map(|(k, &(h, error))| ConvergenceRow {
                level: k,
                h,
                error,
                order: (k > 0).then(|| {
                    let (h0, e0) = levels[k - 1];
                    (e0 / error).ln() / (h0 / h).ln()
                }),
            })
            .collect();
        Self {
            study: study.to_string(),
            rows,
        }
    }

    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonReport {
    /// Run metadata in output order: parameters, sinks, grids, tolerances.
    pub meta: Vec<(String, String)>,
    pub rows: Vec<ProfileRow>,
    pub norms: Vec<(String, f64)>,
    pub flags: Vec<(String, bool)>,
    pub psi_mean: Option<f64>,
    pub convergence: Option<ConvergenceTable>,
}

impl ComparisonReport {
    pub fn norm(&self, key: &str) -> Option<f64> {
        self.norms.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        self.flags.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Rows of one model at one time, in emission order.
    pub fn rows_of(&self, model: ModelKind, t: f64) -> impl Iterator<Item = &ProfileRow> {
        self.rows
            .iter()
            .filter(move |r| r.model == model && r.t == t)
    }

    /// Cell average of a model at height `z` and time `t`, if it was emitted.
    pub fn average(&self, model: ModelKind, t: f64, z: f64) -> Option<f64> {
        self.rows_of(model, t)
            .find(|r| r.r.is_none() && r.z == z)
            .map(|r| r.value)
    }

    /// Radial profile `(r, value)` of a model on a slice.
    pub fn radial(&self, model: ModelKind, t: f64, z: f64) -> Vec<(f64, f64)> {
        self.rows_of(model, t)
            .filter(|r| r.z == z)
            .filter_map(|r| r.r.map(|rr| (rr, r.value)))
            .collect()
    }
}

/// Slice label used inside norm keys.
pub fn slice_key(z: f64) -> String {
    format!("z{z}")
}

fn trapezoid_l2(z: &[f64], d: &[f64]) -> f64 {
    if z.len() < 2 {
        return d.first().map_or(0.0, |v| v.abs());
    }
    let mut acc = 0.0;
    for k in 1..z.len() {
        acc += 0.5 * (d[k - 1] * d[k - 1] + d[k] * d[k]) * (z[k] - z[k - 1]);
    }
    (acc / (z[z.len() - 1] - z[0])).sqrt()
}

/// Norms and ordering flags of one block of rows, evaluated at the latest time of the reference.
///
/// * `norm.<m>.axial_linf`, `norm.<m>.axial_l2`: cell averages against the reference over every
///   height both carry;
/// * `norm.<m>.z<z>.radial_l2`, `.radial_linf`, `.avg_gap` on each radial slice.
pub fn derive_norms(rows: &[ProfileRow]) -> (Vec<(String, f64)>, Vec<(String, bool)>) {
    let mut norms = Vec::new();
    let mut flags = Vec::new();
    let refs: Vec<&ProfileRow> = rows
        .iter()
        .filter(|r| r.model == ModelKind::Reference)
        .collect();
    let Some(t) = refs.iter().map(|r| r.t).reduce(f64::max) else {
        return (norms, flags);
    };
    let report = ComparisonReport {
        rows: rows.to_vec(),
        ..Default::default()
    };
    let ref_avg: Vec<(f64, f64)> = refs
        .iter()
        .filter(|r| r.t == t && r.r.is_none())
        .map(|r| (r.z, r.value))
        .collect();
    let mut slices: Vec<f64> = refs
        .iter()
        .filter(|r| r.t == t && r.r.is_some())
        .map(|r| r.z)
        .collect();
    slices.dedup();

    for m in ModelKind::ALL.into_iter().skip(1) {
        if !rows.iter().any(|r| r.model == m) {
            continue;
        }
        let mut zs = Vec::new();
        let mut diff = Vec::new();
        for &(z, v) in &ref_avg {
            if let Some(w) = report.average(m, t, z) {
                zs.push(z);
                diff.push(w - v);
            }
        }
        let linf = diff.iter().fold(0.0_f64, |a, d| a.max(d.abs()));
        norms.push((format!("norm.{}.axial_linf", m.tag()), linf));
        norms.push((
            format!("norm.{}.axial_l2", m.tag()),
            trapezoid_l2(&zs, &diff),
        ));
        for &z in &slices {
            let rp = report.radial(ModelKind::Reference, t, z);
            let mp = report.radial(m, t, z);
            if rp.len() != mp.len() || rp.iter().zip(&mp).any(|(a, b)| a.0 != b.0) || rp.len() < 2 {
                continue;
            }
            let other: Vec<f64> = mp.iter().map(|p| p.1).collect();
            let key = format!("norm.{}.{}", m.tag(), slice_key(z));
            norms.push((format!("{key}.radial_l2"), radial_l2(&rp, &other)));
            let lin = rp
                .iter()
                .zip(&other)
                .fold(0.0_f64, |a, (p, v)| a.max((p.1 - v).abs()));
            norms.push((format!("{key}.radial_linf"), lin));
            if let (Some(a), Some(b)) = (
                report.average(ModelKind::Reference, t, z),
                report.average(m, t, z),
            ) {
                norms.push((format!("{key}.avg_gap"), (a - b).abs()));
            }
        }
    }

    let at0 = |m| report.average(m, t, 0.0);
    if let (Some(a), Some(r), Some(b)) = (
        at0(ModelKind::A),
        at0(ModelKind::Reference),
        at0(ModelKind::B),
    ) {
        flags.push(("A_under_B_over".into(), a < r && r < b));
    }
    let gap = |m: ModelKind| {
        norms
            .iter()
            .find(|(k, _)| *k == format!("norm.{}.z0.radial_l2", m.tag()))
            .map(|(_, v)| *v)
    };
    if let (Some(a2), Some(b2)) = (gap(ModelKind::A2), gap(ModelKind::B2)) {
        flags.push(("B2_closer_than_A2".into(), b2 < a2));
    }
    (norms, flags)
}

/// Cross-sectional average of a radial profile; a single point is its own average.
pub fn profile_average(profile: &[(f64, f64)]) -> f64 {
    if profile.len() == 1 {
        profile[0].1
    } else {
        radial_average(profile)
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

pub fn profile_record(row: &ProfileRow) -> [String; 6] {
    [
        row.model.tag().to_string(),
        row.model.regime_tag().to_string(),
        row.t.to_string(),
        row.z.to_string(),
        row.r
            .map_or_else(|| AVERAGE_TAG.to_string(), |r| r.to_string()),
        row.value.to_string(),
    ]
}

/// CSV text of a set of rows, without header.
pub fn profile_body(rows: &[ProfileRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(profile_record(row))
            .map_err(|e| csv_error(Path::new("profile.csv"), e))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io("profile.csv", std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn profile_header() -> String {
    PROFILE_HEADER.join(",") + "\n"
}

/// `key=value` lines of the summary: metadata, ⨍ψ, norms, then flags.
pub fn summary_text(report: &ComparisonReport) -> String {
    let mut s = String::new();
    for (k, v) in &report.meta {
        s.push_str(&format!("{k}={v}\n"));
    }
    if let Some(p) = report.psi_mean {
        if report.meta("psi_mean").is_none() {
            s.push_str(&format!("psi_mean={p}\n"));
        }
    }
    for (k, v) in &report.norms {
        s.push_str(&format!("{k}={v}\n"));
    }
    for (k, v) in &report.flags {
        s.push_str(&format!("{k}={v}\n"));
    }
    s
}

pub fn convergence_text(table: &ConvergenceTable) -> String {
    let mut s = CONVERGENCE_HEADER.join(",") + "\n";
    for r in &table.rows {
        let order = r.order.map_or_else(String::new, |o| o.to_string());
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            table.study, r.level, r.h, r.error, order
        ));
    }
    s
}

pub(crate) fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `profile.csv`, `summary.kv` and, when a table is present, `convergence.csv`.
pub fn emit_outputs(report: &ComparisonReport, dir: &Path) -> Result<()> {
    ensure_dir(dir)?;
    write(
        &dir.join("profile.csv"),
        &(profile_header() + &profile_body(&report.rows)?),
    )?;
    write(&dir.join("summary.kv"), &summary_text(report))?;
    if let Some(table) = &report.convergence {
        write(&dir.join("convergence.csv"), &convergence_text(table))?;
    }
    Ok(())
}
