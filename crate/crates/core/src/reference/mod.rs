//! Resolved single-hair solver on the equal-area axisymmetric cell.
//!
//! The square periodicity cell `εY` is replaced by a disc of radius `ε/√π`. The hair is a hole of
//! radius `r_ε = ε a_ε` for `0 < z < L` whose lateral surface takes up nutrient at the rate
//! `(ε²κ/r_ε) g(u)` per unit area. Vertex-centred finite volumes on a tensor grid keep the
//! discrete fluxes conservative, so the steady balance between influx and uptake closes to
//! round-off.

pub mod annulus;
pub mod grid;
pub mod solver;

pub use annulus::{solve_annulus, AnnulusRun};
pub use grid::{build_axi_grid, equal_area_radius, AxiGrid, RadialGrading};
pub use solver::{
    cell_average_profile, radial_average, radial_l2, solve_reference, solve_reference_with,
    total_uptake, Assembly, AxiBoundary, ReferenceSolution, Uptake,
};
