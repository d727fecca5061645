use crate::cell_psi::{reduce, CellPsi};
use crate::error::{Error, Result};
use crate::macro_models::MacroSolution;
use crate::scenario::Scenario;

/// `u₀ + εu₁ + ε²(U₂ + c u₀ ψ(x̂/ε))` at a point of the hair zone, `u₀` above it.
pub fn reconstruct_second_order(
    scenario: &Scenario,
    macro_sol: &MacroSolution,
    psi: &CellPsi,
    x: [f64; 3],
) -> Result<f64> {
    let z = x[2];
    if !(z >= 0.0 && z <= scenario.m) {
        return Err(Error::Domain(format!("x3={z} outside [0, {}]", scenario.m)));
    }
    let u0 = macro_sol.u0_at(z);
    if z > scenario.l {
        return Ok(u0);
    }
    let eps = scenario.epsilon;
    let y = reduce([x[0] / eps, x[1] / eps]);
    let dist = eps * (y[0] * y[0] + y[1] * y[1]).sqrt();
    if dist <= scenario.r_eps() {
        return Err(Error::Domain(format!(
            "point at distance {dist} from the hair axis lies inside the hair (radius {})",
            scenario.r_eps()
        )));
    }
    let psi_y = psi.eval(y)?;
    combine(scenario, macro_sol, z, u0, psi_y)
}

/// Reconstruction with ψ replaced by its average over the circle of radius `r` around the hair,
/// the quantity comparable with an axisymmetric cell.
pub fn reconstruct_radial(
    scenario: &Scenario,
    macro_sol: &MacroSolution,
    psi: &CellPsi,
    r: f64,
    z: f64,
) -> Result<f64> {
    let u0 = macro_sol.u0_at(z);
    if z > scenario.l {
        return Ok(u0);
    }
    if r <= scenario.r_eps() * (1.0 - 1e-12) {
        return Err(Error::Domain(format!("radius {r} lies inside the hair")));
    }
    let psi_r = psi.circle_average(r / scenario.epsilon)?;
    combine(scenario, macro_sol, z, u0, psi_r)
}

/// Reconstruction at height `z` for an already evaluated ψ value; `u₀` above the hair zone.
pub fn reconstruct_with_psi(
    scenario: &Scenario,
    macro_sol: &MacroSolution,
    psi_value: f64,
    z: f64,
) -> Result<f64> {
    let u0 = macro_sol.u0_at(z);
    if z > scenario.l {
        return Ok(u0);
    }
    combine(scenario, macro_sol, z, u0, psi_value)
}

fn combine(scenario: &Scenario, m: &MacroSolution, z: f64, u0: f64, psi: f64) -> Result<f64> {
    let eps = scenario.epsilon;
    let c = m.coefficients.reconstruction;
    Ok(u0 + eps * m.u1_at(z)? + eps * eps * (m.u2_at(z)? + c * u0 * psi))
}
