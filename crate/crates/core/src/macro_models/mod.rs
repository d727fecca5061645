//! Homogenized problems in x₃: leading order `u₀` on `[0,M]`, the corrections `u₁` and `U₂` on the
//! hair zone, and the two-scale reconstruction.

pub mod fv1d;
pub mod oracle;
pub mod reconstruct;
pub mod sink;
pub mod solve;

pub use oracle::{U0Oracle, U1Oracle};
pub use reconstruct::{reconstruct_radial, reconstruct_second_order, reconstruct_with_psi};
pub use sink::{
    effective_sink, effective_sink_for, h_of_u0, mm_effective_sink_explicit, sink_coefficient,
};
pub use solve::{
    solve_U2, solve_u0, solve_u0_with, solve_u1, u0_linear_operator, u2_coefficients,
    PicardOptions, U2Coefficients,
};

use crate::error::{Error, Result};
use crate::numerics::{Field, Grid1D};
use crate::scenario::{MacroRegime, Scenario};

#[derive(Debug, Clone)]
pub struct MacroSolution {
    pub regime: MacroRegime,
    pub grid: Grid1D,
    /// One frame for steady runs, every time level for transient ones.
    pub u0: Vec<Field>,
    /// On `grid.truncated()`; absent when only the leading order was requested.
    pub u1: Option<Vec<Field>>,
    /// `U₂` on `grid.truncated()`.
    pub u2: Option<Vec<Field>>,
    pub psi_mean: Option<f64>,
    pub coefficients: U2Coefficients,
}

/// Solves `u₀`, and `u₁`, `U₂` as well when the cell mean of ψ is supplied.
pub fn solve_macro(
    scenario: &Scenario,
    regime: MacroRegime,
    grid: &Grid1D,
    psi_mean: Option<f64>,
) -> Result<MacroSolution> {
    solve_macro_with(scenario, regime, grid, psi_mean, &PicardOptions::default())
}

pub fn solve_macro_with(
    scenario: &Scenario,
    regime: MacroRegime,
    grid: &Grid1D,
    psi_mean: Option<f64>,
    opts: &PicardOptions,
) -> Result<MacroSolution> {
    let u0 = solve_u0_with(scenario, regime, grid, opts)?;
    let (u1, u2) = match psi_mean {
        Some(pm) => {
            let u1 = solve_u1(scenario, regime, grid, &u0)?;
            let u2 = solve_U2(scenario, regime, grid, &u0, &u1, Some(pm))?;
            (Some(u1), Some(u2))
        }
        None => (None, None),
    };
    Ok(MacroSolution {
        regime,
        grid: grid.clone(),
        u0,
        u1,
        u2,
        psi_mean,
        coefficients: u2_coefficients(scenario, regime, psi_mean.unwrap_or(0.0)),
    })
}

impl MacroSolution {
    pub fn n_frames(&self) -> usize {
        self.u0.len()
    }

    /// The solution truncated to time level `k`, so that the `*_at` accessors read that level.
    pub fn frame(&self, k: usize) -> MacroSolution {
        let pick = |f: &Option<Vec<Field>>| f.as_ref().map(|v| vec![v[k].clone()]);
        MacroSolution {
            regime: self.regime,
            grid: self.grid.clone(),
            u0: vec![self.u0[k].clone()],
            u1: pick(&self.u1),
            u2: pick(&self.u2),
            psi_mean: self.psi_mean,
            coefficients: self.coefficients,
        }
    }

    pub fn final_u0(&self) -> &Field {
        self.u0.last().unwrap()
    }

    pub fn u0_at(&self, z: f64) -> f64 {
        self.grid.interpolate(&self.final_u0().values, z)
    }

    fn hair_value(&self, field: &Option<Vec<Field>>, z: f64) -> Result<f64> {
        let frames = field.as_ref().ok_or_else(|| {
            Error::Config("second-order terms were not computed for this solution".into())
        })?;
        let hair = self.grid.truncated();
        Ok(hair.interpolate(&frames.last().unwrap().values, z.min(hair.length())))
    }

    pub fn u1_at(&self, z: f64) -> Result<f64> {
        self.hair_value(&self.u1, z)
    }

    pub fn u2_at(&self, z: f64) -> Result<f64> {
        self.hair_value(&self.u2, z)
    }
}
