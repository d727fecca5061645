//! Configuration, scenario execution, comparison metrics, convergence studies and report files.

pub mod compare;
pub mod config;
pub mod converge;
pub mod report;
pub mod run;

pub use compare::{compare, CompareOutcome};
pub use config::{
    default_models, load_config, parse_config, ConvergeConfig, GridConfig, ModelKind, OutputConfig,
    RunConfig, Study, SweepConfig, SweepParam,
};
pub use converge::{convergence_study, exact_flow};
pub use report::{
    derive_norms, emit_outputs, ComparisonReport, ConvergenceRow, ConvergenceTable, ProfileRow,
};
pub use run::{emit_sweep, run_scenario, run_sweep, sweep_tag};
