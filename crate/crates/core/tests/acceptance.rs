//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
//!
//! A criterion listed in `KNOWN_FAILURES` still runs and still prints FAIL; it does not fail the
//! binary. Any other failure does, and so does a known failure that starts passing, so the list
//! cannot go stale.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hairhom::cell_psi::fd::fd_cell_mean_default;
use hairhom::cell_psi::CellPsi;
use hairhom::correctors::{corrector_residual, per_cell_sink, w_boundary_flux, CorrectorParams};
use hairhom::harness::config::{parse_config, ModelKind, Study, SweepConfig, SweepParam};
use hairhom::harness::{convergence_study, run_scenario, run_sweep, ComparisonReport, RunConfig};
use hairhom::macro_models::{
    effective_sink_for, h_of_u0, mm_effective_sink_explicit, sink_coefficient, solve_U2, solve_u0,
    solve_u1, U0Oracle,
};
use hairhom::numerics::Grid1D;
use hairhom::{HairSize, MacroRegime, Mode, Regime, Scenario, TopBoundary, UptakeLaw};

const LAMBDA_ROUNDING: f64 = 5e-3;
const ORACLE_LINF: f64 = 1e-4;
const ORACLE_NODES: usize = 2048;
const ORDER_MACRO: (f64, f64) = (2.0, 0.1);
const ORDER_ANNULUS: (f64, f64) = (2.0, 0.3);
const CORRECTOR_RESIDUAL: f64 = 1e-13;
const CORRECTOR_SAMPLES: usize = 20;
const PSI_AGREEMENT: f64 = 1e-5;
const PSI_RATIO: (f64, f64) = (4.0, 0.5);
const CLOSURE_RESIDUAL: f64 = 1e-12;
const CLOSURE_SAMPLES: usize = 1000;
const MM_AGREEMENT: f64 = 1e-10;
const U1_ZERO: f64 = 1e-12;
const SINK_BAND: f64 = 0.05;
const FLUX_BALANCE: f64 = 1e-8;

/// Criteria expected to fail, with the reason recorded in the decisions ledger.
const KNOWN_FAILURES: &[usize] = &[9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn baseline(regime: Regime, a: f64) -> Scenario {
    Scenario::baseline(regime, HairSize::RadiusRatio(a))
}

fn c1_parameters() -> Outcome {
    let lam = |a: f64| MacroRegime::B.lambda_of(0.5, a);
    let l2 = lam(0.01);
    let l1 = lam(0.1);
    let cfg = parse_config("regime = distinguished\na_eps = 0.01\n", "c1").unwrap();
    let ok = (l2 - 1.15).abs() < LAMBDA_ROUNDING
        && (l2 - 1.151293).abs() < 5e-7
        && (l1 - 0.58).abs() < LAMBDA_ROUNDING
        && (l1 - 0.5756).abs() < 5e-5
        && cfg.scenario.lambda() == l2;
    outcome(ok, format!("lambda(1e-2)={l2:.6} lambda(1e-1)={l1:.6}"))
}

fn bits(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

fn c2_lambda_zero() -> Outcome {
    let psi_mean = -0.2;
    let s = Scenario::baseline(Regime::Distinguished, HairSize::Lambda(0.0));
    let g = Grid1D::piecewise_uniform(s.l, s.m, 256).unwrap();
    let mut checks = Vec::new();
    checks.push((
        "sink",
        sink_coefficient(MacroRegime::B, 1.0, 1.0, 0.0).to_bits()
            == sink_coefficient(MacroRegime::A, 1.0, 1.0, 0.0).to_bits(),
    ));
    let u0a = solve_u0(&s, MacroRegime::A, &g).unwrap();
    let u0b = solve_u0(&s, MacroRegime::B, &g).unwrap();
    checks.push(("u0", bits(&u0a[0].values, &u0b[0].values)));
    let u1a = solve_u1(&s, MacroRegime::A, &g, &u0a).unwrap();
    let u1b = solve_u1(&s, MacroRegime::B, &g, &u0b).unwrap();
    let u2a = solve_U2(&s, MacroRegime::A, &g, &u0a, &u1a, Some(psi_mean)).unwrap();
    let u2b = solve_U2(&s, MacroRegime::B, &g, &u0b, &u1b, Some(psi_mean)).unwrap();
    checks.push(("U2", bits(&u2a[0].values, &u2b[0].values)));
    let mut mm = s.clone();
    mm.uptake = UptakeLaw::MichaelisMenten;
    let nl: Vec<bool> = [0.0, 0.3, 1.0, 7.0]
        .iter()
        .map(|&u| {
            effective_sink_for(u, &mm, MacroRegime::A)
                .unwrap()
                .to_bits()
                == effective_sink_for(u, &mm, MacroRegime::B)
                    .unwrap()
                    .to_bits()
        })
        .collect();
    checks.push(("nonlinear sink", nl.iter().all(|b| *b)));
    let pa = CorrectorParams::from_lambda(MacroRegime::A, 0.5, 0.0, 0.25, 1.0, 1.0).unwrap();
    let pb = CorrectorParams::from_lambda(MacroRegime::B, 0.5, 0.0, 0.25, 1.0, 1.0).unwrap();
    checks.push((
        "corrector flux",
        w_boundary_flux(&pa).to_bits() == w_boundary_flux(&pb).to_bits()
            && per_cell_sink(&pa).to_bits() == per_cell_sink(&pb).to_bits(),
    ));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let detail = if failed.is_empty() {
        "sink, u0, U2, nonlinear sink, corrector flux bit-identical".to_string()
    } else {
        format!("differs: {}", failed.join(", "))
    };
    outcome(failed.is_empty(), detail)
}

fn c3_macro_oracle() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (regime, mr, expect, tol) in [
        (Regime::Standard, MacroRegime::A, 0.2558, 5e-5),
        (Regime::Distinguished, MacroRegime::B, 0.4524, 1e-4),
    ] {
        let s = baseline(regime, 0.01);
        let g = Grid1D::piecewise_uniform(s.l, s.m, ORACLE_NODES).unwrap();
        let u = solve_u0(&s, mr, &g).unwrap();
        let sink = sink_coefficient(mr, s.kappa, s.d_u, s.lambda_for(mr));
        let o = U0Oracle::new(sink, s.d_u, s.beta, s.l, s.m, 1.0);
        let err = g
            .nodes()
            .iter()
            .zip(&u[0].values)
            .fold(0.0_f64, |e, (x, v)| e.max((v - o.value(*x)).abs()));
        let mut cfg = RunConfig::from_scenario("c3", s.clone());
        cfg.converge.study = Some(Study::MacroU0);
        cfg.converge.base = Some(256);
        let orders = convergence_study(&cfg, 4).unwrap().orders();
        let ord_ok = orders
            .iter()
            .all(|o| (o - ORDER_MACRO.0).abs() <= ORDER_MACRO.1);
        let pass = err <= ORACLE_LINF && (o.value(0.0) - expect).abs() <= tol && ord_ok;
        ok &= pass;
        parts.push(format!(
            "{}: u0(0)={:.5} linf={err:.2e} orders={}",
            mr.tag(),
            o.value(0.0),
            orders
                .iter()
                .map(|o| format!("{o:.3}"))
                .collect::<Vec<_>>()
                .join("/")
        ));
    }
    outcome(ok, parts.join("; "))
}

fn c4_correctors() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for regime in [MacroRegime::A, MacroRegime::B] {
        let mut made = 0;
        while made < CORRECTOR_SAMPLES {
            let eps = rng.gen_range(0.1..0.9);
            let rho = rng.gen_range(0.1..0.45);
            let a = (rho * 0.5) * 10f64.powf(-rng.gen_range(0.0..3.0));
            let kappa = rng.gen_range(0.1..5.0);
            let d = rng.gen_range(0.2..5.0);
            let Ok(p) = CorrectorParams::new(regime, eps, a, rho, kappa, d) else {
                continue;
            };
            let (r0, r1) = (p.r_eps(), p.outer_radius());
            let radii: Vec<f64> = (1..8)
                .map(|k| r0 * (r1 / r0).powf(k as f64 / 8.0))
                .collect();
            let res = corrector_residual(&p, &radii).unwrap();
            worst = worst.max(res.interior).max(res.robin).max(res.dirichlet);
            made += 1;
            count += 1;
        }
    }
    let mut cfg = RunConfig::from_scenario("c4", baseline(Regime::Distinguished, 0.01));
    cfg.converge.study = Some(Study::Annulus);
    cfg.converge.base = Some(16);
    let orders = convergence_study(&cfg, 3).unwrap().orders();
    let ord_ok = orders
        .iter()
        .all(|o| (o - ORDER_ANNULUS.0).abs() <= ORDER_ANNULUS.1);
    outcome(
        worst <= CORRECTOR_RESIDUAL && ord_ok,
        format!(
            "{count} parameter sets, worst residual {worst:.2e}; annulus orders {}",
            orders
                .iter()
                .map(|o| format!("{o:.3}"))
                .collect::<Vec<_>>()
                .join("/")
        ),
    )
}

fn c5_cell_constant() -> Outcome {
    let psi = CellPsi::new(64, 2.0).unwrap();
    let fd = fd_cell_mean_default();
    let gap = (fd.extrapolated - psi.mean()).abs();
    let mut ratios = Vec::new();
    for r in [1e-2, 1e-3, 1e-4] {
        ratios.push(psi.matching_residual(r) / psi.matching_residual(r / 2.0));
    }
    let decades = psi.matching_residual(1e-2) / psi.matching_residual(1e-3);
    let ok = gap <= PSI_AGREEMENT
        && ratios
            .iter()
            .all(|q| (q - PSI_RATIO.0).abs() <= PSI_RATIO.1)
        && (decades - 100.0).abs() < 1.0;
    outcome(
        ok,
        format!(
            "ewald={:.10} fd={:.10} gap={gap:.1e}; halving ratios {}",
            psi.mean(),
            fd.extrapolated,
            ratios
                .iter()
                .map(|q| format!("{q:.4}"))
                .collect::<Vec<_>>()
                .join("/")
        ),
    )
}

fn c6_closure() -> Outcome {
    let mm = UptakeLaw::MichaelisMenten;
    let generic = UptakeLaw::Custom {
        g: std::sync::Arc::new(|u: f64| u / (1.0 + u)),
        dg: std::sync::Arc::new(|u: f64| 1.0 / ((1.0 + u) * (1.0 + u))),
    };
    let mut worst: f64 = 0.0;
    let mut worst_mm: f64 = 0.0;
    for kt in [0.1, 1.0, 10.0] {
        let mut s = Scenario::baseline(Regime::Distinguished, HairSize::Lambda(kt));
        s.uptake = generic.clone();
        for k in 0..CLOSURE_SAMPLES {
            let u0 = 10.0 * k as f64 / (CLOSURE_SAMPLES - 1) as f64;
            let h = h_of_u0(u0, kt, &mm).unwrap();
            worst = worst.max((h + kt * mm.g(h) - u0).abs());
            let via_closure = effective_sink_for(u0, &s, MacroRegime::B).unwrap();
            let explicit = mm_effective_sink_explicit(u0, 1.0, 1.0, kt);
            worst_mm = worst_mm.max((via_closure - explicit).abs());
        }
    }
    let spot = h_of_u0(1.0, 1.0, &mm).unwrap();
    let spot_err = (spot - (5f64.sqrt() - 1.0) / 2.0).abs();
    outcome(
        worst <= CLOSURE_RESIDUAL && worst_mm <= MM_AGREEMENT && spot_err <= 1e-15,
        format!("closure residual {worst:.1e}, explicit vs generic {worst_mm:.1e}, h(1;1) error {spot_err:.1e}"),
    )
}

fn c7_u1() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [1e-1, 1e-2, 1e-3] {
        let s = baseline(Regime::Distinguished, a);
        let g = Grid1D::piecewise_uniform(s.l, s.m, 256).unwrap();
        let u0 = solve_u0(&s, MacroRegime::B, &g).unwrap();
        let u1 = solve_u1(&s, MacroRegime::B, &g, &u0).unwrap();
        worst = worst.max(u1.iter().map(|f| f.max_abs()).fold(0.0, f64::max));
    }
    outcome(worst <= U1_ZERO, format!("max |u1| = {worst:e}"))
}

/// Steady baseline runs over the three hair sizes, reference and leading-order models.
fn sweep_runs() -> Vec<(f64, ComparisonReport)> {
    let mut cfg = RunConfig::from_scenario("baseline", baseline(Regime::Distinguished, 0.01));
    cfg.outputs.models = vec![ModelKind::Reference, ModelKind::A, ModelKind::B];
    let sweep = SweepConfig {
        param: SweepParam::AEps,
        values: vec![1e-1, 1e-2, 1e-3],
    };
    run_sweep(&cfg, &sweep, None).unwrap()
}

fn surface(r: &ComparisonReport, m: ModelKind) -> f64 {
    r.average(m, 0.0, 0.0).unwrap()
}

fn c8_ordering(runs: &[(f64, ComparisonReport)]) -> Outcome {
    let mut ok = true;
    let mut thetas = Vec::new();
    let mut gaps = Vec::new();
    let mut parts = Vec::new();
    for (a, r) in runs {
        let (ua, ur, ub) = (
            surface(r, ModelKind::A),
            surface(r, ModelKind::Reference),
            surface(r, ModelKind::B),
        );
        if *a < 0.05 {
            ok &= ua < ur && ur < ub && r.flag("A_under_B_over") == Some(true);
        }
        thetas.push((ur - ua) / (ub - ua));
        gaps.push(ub - ur);
        parts.push(format!("a={a}: A={ua:.4} ref={ur:.4} B={ub:.4}"));
    }
    ok &= thetas.windows(2).all(|w| w[1] > w[0]) && gaps.windows(2).all(|w| w[1] < w[0]);
    parts.push(format!(
        "theta {}",
        thetas
            .iter()
            .map(|t| format!("{t:.3}"))
            .collect::<Vec<_>>()
            .join("/")
    ));
    outcome(ok, parts.join("; "))
}

fn c9_sink(runs: &[(f64, ComparisonReport)]) -> Outcome {
    let (_, r) = runs.iter().find(|(a, _)| *a == 1e-3).unwrap();
    let ratio: f64 = r.meta("reference.sink_ratio").unwrap().parse().unwrap();
    let s = baseline(Regime::Distinguished, 1e-3);
    let lam = s.lambda();
    let sink_b = sink_coefficient(MacroRegime::B, 1.0, 1.0, lam);
    let dev = ratio / sink_b - 1.0;
    // Same rate with the O(ε²) cell constant kept, for the record.
    let psi = CellPsi::new(64, 2.0).unwrap();
    let corrected = 2.0 * PI / (1.0 + lam + 2.0 * PI * s.epsilon * s.epsilon * psi.mean());
    outcome(
        dev.abs() <= SINK_BAND,
        format!(
            "uptake/volume/average={ratio:.4} sink_B={sink_b:.4} deviation={:+.1}% (band {:.0}%); with the cell constant {corrected:.4}",
            100.0 * dev,
            100.0 * SINK_BAND
        ),
    )
}

fn c10_bounds(runs: &[(f64, ComparisonReport)]) -> Outcome {
    let mut ok = true;
    let mut worst_balance: f64 = 0.0;
    let mut reports: Vec<ComparisonReport> = runs.iter().map(|(_, r)| r.clone()).collect();
    let mut robin = RunConfig::from_scenario("robin", baseline(Regime::FullReference, 0.01));
    robin.scenario.beta = 0.7;
    robin.scenario.uptake = UptakeLaw::MichaelisMenten;
    robin.outputs.models = vec![ModelKind::Reference, ModelKind::A, ModelKind::B];
    reports.push(run_scenario(&robin).unwrap());
    for r in &reports {
        for (k, v) in &r.flags {
            if k.starts_with("max_principle") {
                ok &= *v;
            }
        }
        ok &= r
            .flags
            .iter()
            .filter(|(k, _)| k.starts_with("max_principle"))
            .count()
            == 3;
        let b: f64 = r.meta("reference.flux_imbalance").unwrap().parse().unwrap();
        worst_balance = worst_balance.max(b);
    }
    ok &= worst_balance <= FLUX_BALANCE;

    let mut tr = RunConfig::from_scenario("transient-mm", baseline(Regime::FullReference, 0.01));
    tr.scenario.uptake = UptakeLaw::MichaelisMenten;
    tr.scenario.top_bc = TopBoundary::ZeroFlux;
    tr.scenario.mode = Mode::Transient {
        t_end: 1.0,
        dt: 0.01,
    };
    tr.grids.n_r = 48;
    tr.grids.n_z = 96;
    tr.outputs.models = vec![ModelKind::Reference, ModelKind::A, ModelKind::B];
    let t = run_scenario(&tr).unwrap();
    let mono: Vec<&str> = ["reference", "A", "B"]
        .into_iter()
        .filter(|m| t.flag(&format!("surface_decreasing.{m}")) == Some(true))
        .collect();
    ok &= mono.len() == 3;
    outcome(
        ok,
        format!(
            "{} steady runs within [0,1]; worst flux imbalance {worst_balance:.1e}; u(z=0,t) decreasing for {}",
            reports.len(),
            mono.join(",")
        ),
    )
}

fn c11_reconstruction() -> Outcome {
    let mut cfg = RunConfig::from_scenario("c11", baseline(Regime::Distinguished, 0.01));
    cfg.outputs.models = vec![ModelKind::Reference, ModelKind::A2, ModelKind::B2];
    cfg.outputs.slices = vec![0.0];
    let r = run_scenario(&cfg).unwrap();
    let a2 = r.norm("norm.A2.z0.radial_l2").unwrap();
    let b2 = r.norm("norm.B2.z0.radial_l2").unwrap();
    outcome(b2 < a2, format!("L2 gap at z=0: B2={b2:.5} A2={a2:.5}"))
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut record = |n: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        results.push((n, name, o, t.elapsed().as_secs_f64()));
    };
    record(1, "parameter bookkeeping", &c1_parameters);
    record(2, "lambda=0 collapse", &c2_lambda_zero);
    record(3, "closed-form macro oracle", &c3_macro_oracle);
    record(4, "corrector exactness", &c4_correctors);
    record(5, "cell constant", &c5_cell_constant);
    record(6, "nonlinear closure", &c6_closure);
    record(7, "u1 degeneracy", &c7_u1);
    let t = Instant::now();
    let runs = sweep_runs();
    let sweep_time = t.elapsed().as_secs_f64();
    record(8, "ordering A < reference < B", &|| c8_ordering(&runs));
    record(9, "homogenized sink consistency", &|| c9_sink(&runs));
    record(10, "maximum principle and conservation", &|| {
        c10_bounds(&runs)
    });
    record(11, "second-order reconstruction trend", &c11_reconstruction);

    let mut unexpected = 0;
    for (n, name, o, secs) in &results {
        let secs = if (8..=10).contains(n) {
            secs + sweep_time
        } else {
            *secs
        };
        let known = KNOWN_FAILURES.contains(n);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = match (o.pass, known) {
            (false, true) => " [known failure]",
            (true, true) => " [listed as known failure but passed]",
            _ => "",
        };
        println!("{tag} {n:>2} {name}: {} ({secs:.1}s){note}", o.detail);
        if o.pass == known {
            unexpected += 1;
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!(
        "acceptance: {passed}/{} passed, {} known failure(s), {unexpected} unexpected, {:.1}s",
        results.len(),
        KNOWN_FAILURES.len(),
        start.elapsed().as_secs_f64()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
