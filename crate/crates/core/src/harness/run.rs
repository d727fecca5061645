//! Scenario execution: every requested model on the same scenario, sampled on shared heights and
//! radii so that the rows compare one to one.

use std::path::Path;

use rayon::prelude::*;

use crate::cell_psi::CellPsi;
use crate::error::{Error, Result};
use crate::harness::config::{ModelKind, RunConfig, SweepConfig, SweepParam};
use crate::harness::converge::convergence_study;
use crate::harness::report::{
    derive_norms, emit_outputs, ensure_dir, profile_average, profile_body, profile_header,
    summary_text, write, ComparisonReport, ProfileRow,
};
use crate::macro_models::{
    reconstruct_with_psi, sink_coefficient, solve_macro_with, MacroSolution,
};
use crate::numerics::{SolveOptions, TimeStepper};
use crate::reference::{
    build_axi_grid, solve_reference_with, total_uptake, AxiGrid, ReferenceSolution,
};
use crate::scenario::{MacroRegime, Mode, Regime, Scenario, TopBoundary};

fn wrap(name: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        e @ (Error::Validation(_) | Error::Scenario { .. }) => e,
        e => Error::Scenario {
            scenario: name.to_string(),
            source: Box::new(e),
        },
    }
}

/// Indices of the time levels that are written.
fn output_frames(n_frames: usize, stride: usize) -> Vec<usize> {
    (0..n_frames)
        .filter(|k| k % stride == 0 || *k + 1 == n_frames)
        .collect()
}

fn frame_count(s: &Scenario) -> Result<usize> {
    Ok(match s.mode {
        Mode::Steady => 1,
        Mode::Transient { t_end, dt } => TimeStepper::new(dt, t_end)?.n_steps() + 1,
    })
}

/// Radii sampled at height `z`: outside the hair below its tip, the whole cell above.
fn radii_at(grid: &AxiGrid, z: f64) -> &[f64] {
    if z < grid.l() {
        &grid.r_nodes[grid.hair_index..]
    } else {
        &grid.r_nodes
    }
}

struct MacroRun {
    kind: ModelKind,
    solution: MacroSolution,
}

/// Executes the configured models and derives norms and ordering flags.
pub fn run_scenario(config: &RunConfig) -> Result<ComparisonReport> {
    config.validate()?;
    run_validated(config).map_err(wrap(&config.name))
}

fn run_validated(config: &RunConfig) -> Result<ComparisonReport> {
    let s = &config.scenario;
    let g = &config.grids;
    let models = &config.outputs.models;
    let psi = CellPsi::new(g.psi_modes, g.ewald_split)?;
    let ref_s = s.with_regime(Regime::FullReference);
    let grid = build_axi_grid(&ref_s, g.n_r, g.n_z, g.grading)?;
    let mgrid = crate::numerics::Grid1D::piecewise_uniform(s.l, s.m, g.n_macro)?;

    let mut macros: Vec<MacroRun> = Vec::new();
    for mr in [MacroRegime::A, MacroRegime::B] {
        let leading = models
            .iter()
            .any(|m| m.macro_regime() == Some(mr) && !m.second_order());
        let second = models
            .iter()
            .any(|m| m.macro_regime() == Some(mr) && m.second_order());
        if !(leading || second) {
            continue;
        }
        let pm = second.then(|| psi.mean());
        let sol = solve_macro_with(s, mr, &mgrid, pm, &g.picard)?;
        for &kind in models.iter().filter(|m| m.macro_regime() == Some(mr)) {
            macros.push(MacroRun {
                kind,
                solution: sol.clone(),
            });
        }
    }
    let reference = if models.contains(&ModelKind::Reference) {
        Some(solve_reference_with(&ref_s, &grid, &g.picard)?)
    } else {
        None
    };

    let mut heights: Vec<f64> = grid.z_nodes.clone();
    heights.extend(&config.outputs.slices);
    heights.sort_by(f64::total_cmp);
    heights.dedup();
    let mut slices = config.outputs.slices.clone();
    slices.sort_by(f64::total_cmp);
    slices.dedup();

    let hair_radii = radii_at(&grid, 0.0);
    let psi_r: Vec<f64> = if models.iter().any(|m| m.second_order()) {
        hair_radii
            .iter()
            .map(|&r| psi.circle_average(r / s.epsilon))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let n_frames = frame_count(s)?;
    let mut rows = Vec::new();
    for k in output_frames(n_frames, config.outputs.stride) {
        if let Some(sol) = &reference {
            let frame = &sol.frames[k];
            let t = frame.time;
            for &z in &heights {
                rows.push(ProfileRow {
                    model: ModelKind::Reference,
                    t,
                    z,
                    r: None,
                    value: sol.cell_average_at(frame, z),
                });
            }
            for &z in &slices {
                for (r, v) in sol.slice_at(frame, z) {
                    rows.push(ProfileRow {
                        model: ModelKind::Reference,
                        t,
                        z,
                        r: Some(r),
                        value: v,
                    });
                }
            }
        }
        for run in &macros {
            let m = run.solution.frame(k);
            let t = m.final_u0().time;
            let profile = |z: f64| -> Result<Vec<(f64, f64)>> {
                let radii = radii_at(&grid, z);
                if run.kind.second_order() && z < grid.l() {
                    radii
                        .iter()
                        .zip(&psi_r)
                        .map(|(&r, &p)| Ok((r, reconstruct_with_psi(s, &m, p, z)?)))
                        .collect()
                } else {
                    let u = m.u0_at(z);
                    Ok(radii.iter().map(|&r| (r, u)).collect())
                }
            };
            for &z in &heights {
                let value = if run.kind.second_order() && z < grid.l() {
                    profile_average(&profile(z)?)
                } else {
                    m.u0_at(z)
                };
                rows.push(ProfileRow {
                    model: run.kind,
                    t,
                    z,
                    r: None,
                    value,
                });
            }
            for &z in &slices {
                for (r, v) in profile(z)? {
                    rows.push(ProfileRow {
                        model: run.kind,
                        t,
                        z,
                        r: Some(r),
                        value: v,
                    });
                }
            }
        }
    }

    let (norms, mut flags) = derive_norms(&rows);
    flags.extend(dynamic_flags(s, reference.as_ref(), &macros));

    let mut report = ComparisonReport {
        meta: metadata(config, &psi, &grid),
        rows,
        norms,
        flags,
        psi_mean: Some(psi.mean()),
        convergence: None,
    };
    if let Some(sol) = &reference {
        if sol.steady {
            let up = total_uptake(sol)?;
            let vol = s.epsilon * s.epsilon * s.l;
            let avg = sol.hair_zone_average();
            report.meta.extend([
                ("reference.uptake_hair".into(), up.hair.to_string()),
                ("reference.uptake_root".into(), up.root.to_string()),
                ("reference.influx".into(), up.influx.to_string()),
                (
                    "reference.flux_imbalance".into(),
                    format!("{:e}", up.imbalance() / up.influx.abs().max(1e-300)),
                ),
                ("reference.hair_zone_average".into(), avg.to_string()),
                (
                    "reference.sink_ratio".into(),
                    (up.hair / vol / avg).to_string(),
                ),
            ]);
        }
    }
    if let Some(levels) = config.converge.levels {
        report.convergence = Some(convergence_study(config, levels)?);
    }
    Ok(report)
}

/// Flags that need every time level or every node, not just the written rows.
fn dynamic_flags(
    s: &Scenario,
    reference: Option<&ReferenceSolution>,
    macros: &[MacroRun],
) -> Vec<(String, bool)> {
    let mut flags = Vec::new();
    let bounded = |vals: &mut dyn Iterator<Item = f64>, hi: f64| {
        vals.filter(|v| !v.is_nan())
            .all(|v| (0.0..=hi).contains(&v))
    };
    let steady_bound = match (s.mode, s.top_bc) {
        (Mode::Steady, TopBoundary::Dirichlet(v)) if s.beta >= 0.0 => Some(v),
        _ => None,
    };
    if let Some(hi) = steady_bound {
        if let Some(sol) = reference {
            let ok = bounded(&mut sol.final_field().values.iter().copied(), hi);
            flags.push(("max_principle.reference".into(), ok));
        }
        for run in macros.iter().filter(|m| !m.kind.second_order()) {
            let ok = bounded(&mut run.solution.final_u0().values.iter().copied(), hi);
            flags.push((format!("max_principle.{}", run.kind.tag()), ok));
        }
    }
    if !s.is_steady() {
        let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
        if let Some(sol) = reference {
            let surface: Vec<f64> = sol
                .frames
                .iter()
                .map(|f| sol.cell_average_at(f, 0.0))
                .collect();
            flags.push(("surface_decreasing.reference".into(), decreasing(&surface)));
        }
        for run in macros.iter().filter(|m| !m.kind.second_order()) {
            let surface: Vec<f64> = run.solution.u0.iter().map(|f| f.values[0]).collect();
            flags.push((
                format!("surface_decreasing.{}", run.kind.tag()),
                decreasing(&surface),
            ));
        }
    }
    flags
}

fn metadata(config: &RunConfig, psi: &CellPsi, grid: &AxiGrid) -> Vec<(String, String)> {
    let s = &config.scenario;
    let g = &config.grids;
    let (mode, t_end, dt) = match s.mode {
        Mode::Steady => ("steady", String::new(), String::new()),
        Mode::Transient { t_end, dt } => ("transient", t_end.to_string(), dt.to_string()),
    };
    let top = match s.top_bc {
        TopBoundary::Dirichlet(v) => format!("dirichlet:{v}"),
        TopBoundary::ZeroFlux => "zero-flux".into(),
    };
    let lam_a = s.lambda_for(MacroRegime::A);
    let lam_b = s.lambda_for(MacroRegime::B);
    let join = |v: Vec<String>| v.join(",");
    let mut m: Vec<(&str, String)> = vec![
        ("scenario", config.name.clone()),
        ("regime", s.regime.tag().into()),
        ("epsilon", s.epsilon.to_string()),
        ("a_eps", s.a_eps().to_string()),
        ("lambda", s.lambda().to_string()),
        ("lambda_A", lam_a.to_string()),
        ("lambda_B", lam_b.to_string()),
        ("L", s.l.to_string()),
        ("M", s.m.to_string()),
        ("beta", s.beta.to_string()),
        ("D_u", s.d_u.to_string()),
        ("kappa", s.kappa.to_string()),
        ("uptake", s.uptake.name().into()),
        ("top_bc", top),
        ("mode", mode.into()),
        ("t_end", t_end),
        ("dt", dt),
        ("psi_mean", psi.mean().to_string()),
        ("psi_modes", g.psi_modes.to_string()),
        ("ewald_split", g.ewald_split.to_string()),
        ("psi_error_estimate", format!("{:e}", psi.error_estimate())),
        ("rho", g.rho.to_string()),
        (
            "sink_A",
            sink_coefficient(MacroRegime::A, s.kappa, s.d_u, lam_a).to_string(),
        ),
        (
            "sink_B",
            sink_coefficient(MacroRegime::B, s.kappa, s.d_u, lam_b).to_string(),
        ),
        ("n_macro", g.n_macro.to_string()),
        ("n_r", g.n_r.to_string()),
        ("n_z", g.n_z.to_string()),
        ("grading", g.grading.name().into()),
        ("grading_stretch", grid.stretch.to_string()),
        ("cell_radius", grid.outer_radius().to_string()),
        ("picard_tol", format!("{:e}", g.picard.rel_tol)),
        ("picard_max_iter", g.picard.max_iter.to_string()),
        ("picard_relaxation", g.picard.relaxation.to_string()),
        (
            "linear_rel_tol",
            format!("{:e}", SolveOptions::default().rel_tol),
        ),
        (
            "models",
            join(
                config
                    .outputs
                    .models
                    .iter()
                    .map(|m| m.tag().to_string())
                    .collect(),
            ),
        ),
        (
            "slices",
            join(
                config
                    .outputs
                    .slices
                    .iter()
                    .map(|z| z.to_string())
                    .collect(),
            ),
        ),
        ("stride", config.outputs.stride.to_string()),
    ];
    if s.is_steady() {
        m.retain(|(k, _)| *k != "t_end" && *k != "dt");
    }
    m.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Sweep entry label, `a_eps=0.01`.
pub fn sweep_tag(param: SweepParam, value: f64) -> String {
    format!("{}={value}", param.name())
}

fn sweep_dir(param: SweepParam, value: f64) -> String {
    format!("{}_{value}", param.name())
}

/// Runs every sweep value concurrently. With an output directory each entry writes its own
/// subdirectory as soon as it finishes; the merged files are assembled afterwards in sweep order.
pub fn run_sweep(
    config: &RunConfig,
    sweep: &SweepConfig,
    out: Option<&Path>,
) -> Result<Vec<(f64, ComparisonReport)>> {
    let mut checked = config.clone();
    checked.sweep = Some(sweep.clone());
    checked.validate()?;
    if let Some(dir) = out {
        ensure_dir(dir)?;
    }
    let results: Vec<Result<(f64, ComparisonReport)>> = sweep
        .values
        .par_iter()
        .map(|&v| {
            let c = config.with_sweep_value(sweep.param, v);
            let report = run_scenario(&c)?;
            if let Some(dir) = out {
                emit_outputs(&report, &dir.join(sweep_dir(sweep.param, v)))?;
            }
            Ok((v, report))
        })
        .collect();
    let entries: Vec<(f64, ComparisonReport)> = results.into_iter().collect::<Result<_>>()?;
    if let Some(dir) = out {
        emit_sweep(&entries, sweep.param, dir)?;
    }
    Ok(entries)
}

/// Merged `profile.csv` with one `# param=value` block per entry, and a sectioned `summary.kv`.
pub fn emit_sweep(
    entries: &[(f64, ComparisonReport)],
    param: SweepParam,
    dir: &Path,
) -> Result<()> {
    ensure_dir(dir)?;
    let mut profile = profile_header();
    let mut summary = format!(
        "sweep.param={}\nsweep.values={}\n",
        param.name(),
        entries
            .iter()
            .map(|(v, _)| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    for (v, report) in entries {
        let tag = sweep_tag(param, *v);
        profile.push_str(&format!("# {tag}\n"));
        profile.push_str(&profile_body(&report.rows)?);
        summary.push_str(&format!("[{tag}]\n"));
        summary.push_str(&summary_text(report));
    }
    write(&dir.join("profile.csv"), &profile)?;
    write(&dir.join("summary.kv"), &summary)
}
