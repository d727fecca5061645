//! Mesh and step refinement against closed-form oracles.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::correctors::CorrectorParams;
use crate::error::{Error, Result};
use crate::harness::config::{RunConfig, Study};
use crate::harness::report::ConvergenceTable;
use crate::macro_models::{sink_coefficient, solve_u0, u0_linear_operator, U0Oracle};
use crate::numerics::{Grid1D, SpatialOperator};
use crate::reference::solve_annulus;
use crate::scenario::{MacroRegime, Mode, Regime, Scenario, TopBoundary};

fn regime_of(s: &Scenario) -> MacroRegime {
    match s.regime {
        Regime::Standard => MacroRegime::A,
        _ => MacroRegime::B,
    }
}

/// The study a config asks for, defaulting by mode.
pub fn study_of(config: &RunConfig) -> Study {
    config
        .converge
        .study
        .unwrap_or(if config.scenario.is_steady() {
            Study::MacroU0
        } else {
            Study::Time
        })
}

/// Runs the configured study on `levels` successively halved mesh sizes (or time steps).
pub fn convergence_study(config: &RunConfig, levels: usize) -> Result<ConvergenceTable> {
    if levels < 3 {
        return Err(Error::Validation(vec![format!(
            "a convergence study needs at least 3 levels, got {levels}"
        )]));
    }
    let study = study_of(config);
    let pairs = match study {
        Study::MacroU0 => macro_levels(config, levels)?,
        Study::Annulus => annulus_levels(config, levels)?,
        Study::Time => time_levels(config, levels)?,
    };
    Ok(ConvergenceTable::from_levels(study.name(), &pairs))
}

fn macro_levels(config: &RunConfig, levels: usize) -> Result<Vec<(f64, f64)>> {
    let mut s = config.scenario.clone();
    let top = match s.top_bc {
        TopBoundary::Dirichlet(v) => v,
        TopBoundary::ZeroFlux => {
            return Err(Error::UnsupportedStudy(
                "the macro oracle needs a Dirichlet top".into(),
            ))
        }
    };
    if !s.uptake.is_linear() {
        return Err(Error::UnsupportedStudy(
            "the macro oracle covers linear uptake only".into(),
        ));
    }
    s.mode = Mode::Steady;
    let regime = regime_of(&s);
    let sink = sink_coefficient(regime, s.kappa, s.d_u, s.lambda_for(regime));
    let oracle = U0Oracle::new(sink, s.d_u, s.beta, s.l, s.m, top);
    let base = config.converge.base.unwrap_or(64);
    (0..levels)
        .map(|k| {
            let grid = Grid1D::piecewise_uniform(s.l, s.m, base << k)?;
            let u = solve_u0(&s, regime, &grid)?;
            let err = grid
                .nodes()
                .iter()
                .zip(&u[0].values)
                .fold(0.0_f64, |e, (x, v)| e.max((v - oracle.value(*x)).abs()));
            Ok((grid.h_max(), err))
        })
        .collect()
}

fn annulus_levels(config: &RunConfig, levels: usize) -> Result<Vec<(f64, f64)>> {
    let s = &config.scenario;
    let params = CorrectorParams::new(
        regime_of(s),
        s.epsilon,
        s.a_eps(),
        config.grids.rho,
        s.kappa,
        s.d_u,
    )
    .map_err(|e| Error::UnsupportedStudy(format!("no annulus corrector for this scenario: {e}")))?;
    let base = config.converge.base.unwrap_or(16);
    (0..levels)
        .map(|k| {
            let run = solve_annulus(&params, base << k, config.grids.grading)?;
            Ok((run.h_max, run.error_linf))
        })
        .collect()
}

fn time_levels(config: &RunConfig, levels: usize) -> Result<Vec<(f64, f64)>> {
    let s = &config.scenario;
    let Mode::Transient { t_end, dt } = s.mode else {
        return Err(Error::UnsupportedStudy(
            "the time study needs a transient scenario".into(),
        ));
    };
    if !s.uptake.is_linear() {
        return Err(Error::UnsupportedStudy(
            "the exact semi-discrete flow is available for linear uptake only".into(),
        ));
    }
    let regime = regime_of(s);
    let grid = Grid1D::piecewise_uniform(s.l, s.m, config.converge.base.unwrap_or(64))?;
    let op = u0_linear_operator(s, regime, &grid)?;
    (0..levels)
        .map(|k| {
            let h = dt / f64::from(1u32 << k);
            let mut sk = s.clone();
            sk.mode = Mode::Transient { t_end, dt: h };
            let frames = solve_u0(&sk, regime, &grid)?;
            let last = frames.last().unwrap();
            let exact = exact_flow(&op, &frames[0].values, last.time);
            let err = last
                .values
                .iter()
                .zip(&exact)
                .fold(0.0_f64, |e, (a, b)| e.max((a - b).abs()));
            Ok((h, err))
        })
        .collect()
}

/// Solution at time `t` of `diag(V) u' = −K u + f` with the Dirichlet rows held fixed,
/// by eigen-decomposition of the symmetrised free block.
pub fn exact_flow(op: &SpatialOperator, initial: &[f64], t: f64) -> Vec<f64> {
    let n = op.dim();
    let mut fixed = vec![None; n];
    for &(p, v) in &op.dirichlet {
        fixed[p] = Some(v);
    }
    let free: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
    let m = free.len();
    let scale: Vec<f64> = free.iter().map(|&i| op.mass[i].sqrt()).collect();
    let mut a = DMatrix::zeros(m, m);
    let mut c = DVector::zeros(m);
    for (fi, &i) in free.iter().enumerate() {
        let mut b = op.forcing[i];
        for j in op.stiffness.row_range(i) {
            let kij = op.stiffness.get(i, j);
            match fixed[j] {
                Some(v) => b -= kij * v,
                None => {
                    let fj = free.binary_search(&j).unwrap();
                    a[(fi, fj)] = kij / (scale[fi] * scale[fj]);
                }
            }
        }
        c[fi] = b / scale[fi];
    }
    // The band storage is symmetric only up to round-off.
    let a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(a);
    let w0 = DVector::from_iterator(m, free.iter().zip(&scale).map(|(&i, s)| initial[i] * s));
    let q = &eig.eigenvectors;
    let w0h = q.transpose() * w0;
    let ch = q.transpose() * c;
    let wt = DVector::from_iterator(
        m,
        (0..m).map(|k| {
            let lam = eig.eigenvalues[k];
            let decay = (-lam * t).exp();
            let growth = if (lam * t).abs() < 1e-12 {
                t
            } else {
                (1.0 - decay) / lam
            };
            decay * w0h[k] + growth * ch[k]
        }),
    );
    let w = q * wt;
    let mut out: Vec<f64> = (0..n).map(|i| fixed[i].unwrap_or(0.0)).collect();
    for (fi, &i) in free.iter().enumerate() {
        out[i] = w[fi] / scale[fi];
    }
    out
}
