use crate::correctors::{w_closed_form, CorrectorParams};
use crate::error::Result;
use crate::macro_models::PicardOptions;
use crate::reference::grid::{AxiGrid, RadialGrading};
use crate::reference::solver::{solve_assembled, AxiBoundary, ReferenceSolution};
use crate::scenario::{Mode, TopBoundary, UptakeLaw};

/// The resolved solver on `[r_ε, ερ]` with the hair over the whole height, zero flux on top and
/// bottom and `u = 1` on the outer circle.
#[derive(Debug, Clone)]
pub struct AnnulusRun {
    pub solution: ReferenceSolution,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    /// Largest nodal deviation from the closed-form corrector.
    pub error_linf: f64,
    /// Largest radial cell width.
    pub h_max: f64,
}

pub fn solve_annulus(
    params: &CorrectorParams,
    n_r: usize,
    grading: RadialGrading,
) -> Result<AnnulusRun> {
    let grid = AxiGrid::annulus(params, n_r, grading)?;
    let bc = AxiBoundary {
        d_u: params.d_u,
        hair_robin: params.epsilon * params.epsilon * params.kappa,
        beta: 0.0,
        top: TopBoundary::ZeroFlux,
        outer: Some(1.0),
    };
    let solution = solve_assembled(
        &grid,
        bc,
        &UptakeLaw::Linear,
        Mode::Steady,
        &PicardOptions::default(),
        |_| 1.0,
    )?;
    let v = &solution.final_field().values;
    let r = grid.r_nodes.clone();
    let u: Vec<f64> = (0..grid.nr()).map(|i| v[grid.index(i, 1)]).collect();
    let mut error_linf: f64 = 0.0;
    for (ri, ui) in r.iter().zip(&u) {
        error_linf = error_linf.max((ui - w_closed_form(params, *ri)?).abs());
    }
    let h_max = r.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Ok(AnnulusRun {
        solution,
        r,
        u,
        error_linf,
        h_max,
    })
}
