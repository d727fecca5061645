use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::macro_models::fv1d::{diffusion_operator, hair_volumes};
use crate::macro_models::sink::{sink_coefficient, sink_secant};
use crate::numerics::{solve_linear, BackwardEuler, Field, Grid1D, SpatialOperator, TimeStepper};
use crate::scenario::{MacroRegime, Mode, Scenario, TopBoundary};

/// Picard stopping rule and safeguards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Relaxation switched on once the update norm grows.
    pub relaxation: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_iter: 200,
            relaxation: 0.8,
        }
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Fixed-point loop `u ← solve(k(u))` shared by the steady and per-step nonlinear solves.
pub(crate) fn picard<F>(mut u: Vec<f64>, opts: &PicardOptions, mut solve: F) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let mut history = Vec::new();
    let mut omega = 1.0;
    for _ in 0..opts.max_iter {
        let next = solve(&u)?;
        let diff: Vec<f64> = next.iter().zip(&u).map(|(a, b)| a - b).collect();
        let upd = inf_norm(&diff) / inf_norm(&next).max(1e-300);
        if let Some(&prev) = history.last() {
            if upd > prev {
                omega = opts.relaxation;
            }
        }
        history.push(upd);
        if upd <= opts.rel_tol {
            return Ok(next);
        }
        for (ui, d) in u.iter_mut().zip(&diff) {
            *ui += omega * d;
        }
    }
    Err(Error::Picard { history })
}

fn top_of(scenario: &Scenario) -> TopBoundary {
    scenario.top_bc
}

fn initial_values(scenario: &Scenario, grid: &Grid1D) -> Vec<f64> {
    let mut v: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&z| scenario.u_init.at(z))
        .collect();
    if let TopBoundary::Dirichlet(top) = scenario.top_bc {
        *v.last_mut().unwrap() = top;
    }
    v
}

/// Operator with the hair-zone sink frozen at the secant slopes `k`.
fn sink_operator(base: &SpatialOperator, vols: &[f64], k: &[f64]) -> SpatialOperator {
    let mut op = base.clone();
    let d: Vec<f64> = vols.iter().zip(k).map(|(v, k)| v * k).collect();
    op.stiffness.add_diagonal(&d);
    op
}

fn secants(u: &[f64], vols: &[f64], scenario: &Scenario, regime: MacroRegime) -> Result<Vec<f64>> {
    u.iter()
        .zip(vols)
        .map(|(&ui, &v)| {
            if v == 0.0 {
                Ok(0.0)
            } else {
                sink_secant(ui, scenario, regime)
            }
        })
        .collect()
}

/// Leading-order concentration on `[0, M]`. Steady runs return one frame; transient runs return
/// every time level starting from the initial data.
pub fn solve_u0(scenario: &Scenario, regime: MacroRegime, grid: &Grid1D) -> Result<Vec<Field>> {
    solve_u0_with(scenario, regime, grid, &PicardOptions::default())
}

pub fn solve_u0_with(
    scenario: &Scenario,
    regime: MacroRegime,
    grid: &Grid1D,
    opts: &PicardOptions,
) -> Result<Vec<Field>> {
    scenario.validate()?;
    let base = diffusion_operator(grid, scenario.d_u, scenario.beta, top_of(scenario));
    let vols = hair_volumes(grid);
    let linear = scenario.uptake.is_linear();
    let lambda = scenario.lambda_for(regime);
    let s_lin = sink_coefficient(regime, scenario.kappa, scenario.d_u, lambda);
    match scenario.mode {
        Mode::Steady => {
            if linear {
                let op = sink_operator(&base, &vols, &vec![s_lin; grid.len()]);
                let u = solve_linear(&op.steady_system())?.values;
                return Ok(vec![Field::new(u, 0.0)]);
            }
            let start = initial_values(scenario, grid);
            let u = picard(start, opts, |u| {
                let k = secants(u, &vols, scenario, regime)?;
                Ok(solve_linear(&sink_operator(&base, &vols, &k).steady_system())?.values)
            })?;
            Ok(vec![Field::new(u, 0.0)])
        }
        Mode::Transient { t_end, dt } => {
            let ts = TimeStepper::new(dt, t_end)?;
            let mut frames = vec![Field::new(initial_values(scenario, grid), 0.0)];
            if linear {
                let stepper =
                    BackwardEuler::new(sink_operator(&base, &vols, &vec![s_lin; grid.len()]), dt)?;
                for k in 1..=ts.n_steps() {
                    let mut next = stepper.step(frames.last().unwrap())?;
                    next.time = ts.time_at(k);
                    frames.push(next);
                }
                return Ok(frames);
            }
            for k in 1..=ts.n_steps() {
                let prev = frames.last().unwrap().values.clone();
                let u = picard(prev.clone(), opts, |u| {
                    let kk = secants(u, &vols, scenario, regime)?;
                    let op = sink_operator(&base, &vols, &kk);
                    Ok(solve_linear(&op.implicit_system(&prev, dt))?.values)
                })?;
                frames.push(Field::new(u, ts.time_at(k)));
            }
            Ok(frames)
        }
    }
}

/// Linear `u₀` operator: diffusion plus the frozen linear sink on the hair zone.
pub fn u0_linear_operator(
    scenario: &Scenario,
    regime: MacroRegime,
    grid: &Grid1D,
) -> Result<SpatialOperator> {
    require_linear(scenario)?;
    let base = diffusion_operator(grid, scenario.d_u, scenario.beta, top_of(scenario));
    let s = sink_coefficient(
        regime,
        scenario.kappa,
        scenario.d_u,
        scenario.lambda_for(regime),
    );
    Ok(sink_operator(
        &base,
        &hair_volumes(grid),
        &vec![s; grid.len()],
    ))
}

fn require_linear(scenario: &Scenario) -> Result<()> {
    if scenario.uptake.is_linear() {
        Ok(())
    } else {
        Err(Error::Config(
            "first- and second-order terms are derived for linear uptake only".into(),
        ))
    }
}

/// Marches `V du/dt = −K u + f(t)` on the hair zone, or solves the steady problem when `u0`
/// holds a single frame. `forcing(k)` is the source at the time level of `u0[k]`.
fn march_hair_zone<F>(
    op: SpatialOperator,
    u0: &[Field],
    init: Vec<f64>,
    mut forcing: F,
) -> Result<Vec<Field>>
where
    F: FnMut(usize) -> Vec<f64>,
{
    if u0.len() == 1 {
        let mut steady = op;
        steady.forcing = forcing(0);
        let u = solve_linear(&steady.steady_system())?.values;
        return Ok(vec![Field::new(u, u0[0].time)]);
    }
    let dt = u0[1].time - u0[0].time;
    let stepper = BackwardEuler::new(op, dt)?;
    let mut frames = vec![Field::new(init, u0[0].time)];
    for k in 1..u0.len() {
        let f = forcing(k);
        let mut next = stepper.step_with_forcing(frames.last().unwrap(), &f)?;
        next.time = u0[k].time;
        frames.push(next);
    }
    Ok(frames)
}

fn zero_frames(u0: &[Field], n: usize) -> Vec<Field> {
    u0.iter().map(|f| Field::constant(n, 0.0, f.time)).collect()
}

/// First-order term on the hair zone. Identically zero in the distinguished limit.
pub fn solve_u1(
    scenario: &Scenario,
    regime: MacroRegime,
    grid: &Grid1D,
    u0: &[Field],
) -> Result<Vec<Field>> {
    let hair = grid.truncated();
    let n = hair.len();
    if regime == MacroRegime::B || scenario.kappa == 0.0 {
        return Ok(zero_frames(u0, n));
    }
    require_linear(scenario)?;
    let s = sink_coefficient(
        regime,
        scenario.kappa,
        scenario.d_u,
        scenario.lambda_for(regime),
    );
    let kt = scenario.kappa_tilde(regime);
    let mut op = diffusion_operator(&hair, scenario.d_u, scenario.beta, TopBoundary::ZeroFlux);
    op.stiffness
        .add_diagonal(&op.mass.iter().map(|v| s * v).collect::<Vec<_>>());
    let mass = op.mass.clone();
    march_hair_zone(op, u0, vec![0.0; n], |k| {
        (0..n).map(|i| s * kt * u0[k].values[i] * mass[i]).collect()
    })
}

/// Coefficients of the second-order problem; one shared path for both limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U2Coefficients {
    /// Divisor `1 + κ̃` in the distinguished limit, exactly 1 in the standard one.
    pub f: f64,
    pub source: f64,
    pub sink: f64,
    pub initial: f64,
    pub flux: f64,
    /// `κ̃` entering the standard-limit coupling to `u₁`; zero in the distinguished limit.
    pub coupling: f64,
    /// Coefficient of `u₀ ψ` in the two-scale reconstruction.
    pub reconstruction: f64,
}

pub fn u2_coefficients(scenario: &Scenario, regime: MacroRegime, psi_mean: f64) -> U2Coefficients {
    let kappa = scenario.kappa;
    let d = scenario.d_u;
    let kt = scenario.kappa_tilde(regime);
    let (f, coupling) = match regime {
        MacroRegime::A => (1.0, kt),
        MacroRegime::B => (1.0 + kt, 0.0),
    };
    U2Coefficients {
        f,
        source: 4.0 * PI * PI * kappa * kappa / d * psi_mean / (f * f),
        sink: 2.0 * PI * kappa / f,
        initial: -2.0 * PI * (kappa / d) / f * psi_mean,
        flux: -2.0 * PI * kappa / f * psi_mean,
        coupling,
        reconstruction: 2.0 * PI * (kappa / d) / f,
    }
}

/// Second-order averaged term on the hair zone.
#[allow(non_snake_case)]
pub fn solve_U2(
    scenario: &Scenario,
    regime: MacroRegime,
    grid: &Grid1D,
    u0: &[Field],
    u1: &[Field],
    psi_mean: Option<f64>,
) -> Result<Vec<Field>> {
    let psi_mean = psi_mean.ok_or_else(|| {
        Error::Config("the second-order problem needs the cell mean of psi".into())
    })?;
    require_linear(scenario)?;
    let c = u2_coefficients(scenario, regime, psi_mean);
    let hair = grid.truncated();
    let n = hair.len();
    if scenario.kappa == 0.0 {
        return Ok(zero_frames(u0, n));
    }
    let mut op = diffusion_operator(&hair, scenario.d_u, scenario.beta, TopBoundary::ZeroFlux);
    op.stiffness
        .add_diagonal(&op.mass.iter().map(|v| c.sink * v).collect::<Vec<_>>());
    let mass = op.mass.clone();
    let init: Vec<f64> = hair
        .nodes()
        .iter()
        .map(|&z| c.initial * scenario.u_init.at(z))
        .collect();
    march_hair_zone(op, u0, init, |k| {
        let u0k = &u0[k].values;
        let u1k = &u1[k].values;
        let mut f: Vec<f64> = (0..n).map(|i| c.source * u0k[i] * mass[i]).collect();
        if c.coupling != 0.0 {
            for i in 0..n {
                f[i] += c.sink * c.coupling * (u1k[i] - c.coupling * u0k[i]) * mass[i];
            }
        }
        f[n - 1] += c.flux * grid.interface_derivative_below(u0k);
        f
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{HairSize, Regime, UptakeLaw};

    fn baseline(regime: Regime) -> Scenario {
        Scenario::baseline(regime, HairSize::RadiusRatio(0.01))
    }

    #[test]
    fn no_uptake_keeps_unit_concentration() {
        let mut s = baseline(Regime::Standard);
        s.kappa = 0.0;
        let g = Grid1D::piecewise_uniform(s.l, s.m, 64).unwrap();
        let u = solve_u0(&s, MacroRegime::A, &g).unwrap();
        assert!(u[0].values.iter().all(|v| (v - 1.0).abs() < 1e-14));
        let u1 = solve_u1(&s, MacroRegime::A, &g, &u).unwrap();
        let u2 = solve_U2(&s, MacroRegime::A, &g, &u, &u1, Some(-0.2)).unwrap();
        assert!(u1[0].max_abs() == 0.0 && u2[0].max_abs() == 0.0);
    }

    #[test]
    fn mm_steady_picard_converges() {
        let mut s = baseline(Regime::Distinguished);
        s.uptake = UptakeLaw::MichaelisMenten;
        let g = Grid1D::piecewise_uniform(s.l, s.m, 64).unwrap();
        let u = solve_u0(&s, MacroRegime::B, &g).unwrap();
        let lin = solve_u0(&baseline(Regime::Distinguished), MacroRegime::B, &g).unwrap();
        // Saturating uptake removes less than the linear law.
        assert!(u[0].values[0] > lin[0].values[0]);
    }

    #[test]
    fn missing_psi_mean_is_config_error() {
        let s = baseline(Regime::Distinguished);
        let g = Grid1D::piecewise_uniform(s.l, s.m, 16).unwrap();
        let u = solve_u0(&s, MacroRegime::B, &g).unwrap();
        let u1 = solve_u1(&s, MacroRegime::B, &g, &u).unwrap();
        assert!(matches!(
            solve_U2(&s, MacroRegime::B, &g, &u, &u1, None),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn transient_reaches_steady_state() {
        let mut s = baseline(Regime::Distinguished);
        let g = Grid1D::piecewise_uniform(s.l, s.m, 64).unwrap();
        let steady = solve_u0(&s, MacroRegime::B, &g).unwrap();
        s.mode = Mode::Transient {
            t_end: 50.0,
            dt: 0.05,
        };
        let frames = solve_u0(&s, MacroRegime::B, &g).unwrap();
        let last = frames.last().unwrap();
        assert!((last.time - 50.0).abs() < 1e-12);
        let err = last
            .values
            .iter()
            .zip(&steady[0].values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "err {err}");
    }
}
