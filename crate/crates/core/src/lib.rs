//! Nutrient uptake by a periodic array of thin root hairs.
//!
//! The crate couples three descriptions of the same problem:
//!
//! * the resolved single-hair cell ([`reference`]), an axisymmetric finite-volume solver with the
//!   hair surface as a Robin boundary;
//! * the homogenized limits ([`macro_models`]): the standard scaling `ε ln(1/a_ε) = λ` with sink
//!   `2πκ`, and the distinguished scaling `ε² ln(1/a_ε) = λ` with sink `2πκ/(1 + λκ/D)`;
//! * the ingredients of the higher-order expansion: the unit-cell function ψ ([`cell_psi`]) and
//!   the closed-form annulus correctors ([`correctors`]).
//!
//! [`harness`] runs scenario sets, compares models and writes reports; the `hairhom` binary is a
//! thin command-line wrapper over it.

pub mod cell_psi;
pub mod correctors;
pub mod error;
pub mod harness;
pub mod macro_models;
pub mod numerics;
pub mod reference;
pub mod scenario;

pub use error::{Error, Result};
pub use scenario::{
    HairSize, InitialCondition, MacroRegime, Mode, Regime, Scenario, TopBoundary, UptakeLaw,
};
