//! Grids, banded linear algebra, implicit time stepping and scalar roots.

pub mod band;
pub mod grid1d;
pub mod roots;
pub mod stepper;

pub use band::{
    solve_linear, solve_linear_with, BandLu, BandMatrix, BcRow, LinearSolution, LinearSystem,
    SolveOptions,
};
pub use grid1d::Grid1D;
pub use roots::{newton_bracketed, newton_scalar};
pub use stepper::{step_backward_euler, BackwardEuler, Field, SpatialOperator, TimeStepper};
