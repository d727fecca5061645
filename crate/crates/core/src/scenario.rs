//! Physical and asymptotic parameters shared by every solver.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which problem a scenario describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `ε ln(1/a_ε)` fixed: sink `2πκ`.
    Standard,
    /// `ε² ln(1/a_ε)` fixed: sink `2πκ/(1 + λκ/D)`.
    Distinguished,
    /// The resolved single-hair cell.
    FullReference,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::Standard => "A",
            Regime::Distinguished => "B",
            Regime::FullReference => "reference",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" | "standard" | "standard-a" => Some(Regime::Standard),
            "b" | "distinguished" | "distinguished-b" => Some(Regime::Distinguished),
            "reference" | "full-reference" | "full" => Some(Regime::FullReference),
            _ => None,
        }
    }
}

/// The two homogenized limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MacroRegime {
    A,
    B,
}

impl MacroRegime {
    pub fn tag(self) -> &'static str {
        match self {
            MacroRegime::A => "A",
            MacroRegime::B => "B",
        }
    }

    pub fn regime(self) -> Regime {
        match self {
            MacroRegime::A => Regime::Standard,
            MacroRegime::B => Regime::Distinguished,
        }
    }

    /// `λ` for a given radius ratio under this scaling.
    pub fn lambda_of(self, epsilon: f64, a_eps: f64) -> f64 {
        match self {
            MacroRegime::A => epsilon * (1.0 / a_eps).ln(),
            MacroRegime::B => epsilon * epsilon * (1.0 / a_eps).ln(),
        }
    }

    /// Inverse of [`MacroRegime::lambda_of`].
    pub fn a_of(self, epsilon: f64, lambda: f64) -> f64 {
        match self {
            MacroRegime::A => (-lambda / epsilon).exp(),
            MacroRegime::B => (-lambda / (epsilon * epsilon)).exp(),
        }
    }
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Uptake kinetics `g`.
#[derive(Clone)]
pub enum UptakeLaw {
    Linear,
    /// `g(u) = u/(1+u)`.
    MichaelisMenten,
    /// A monotone `g` with its derivative.
    Custom {
        g: ScalarFn,
        dg: ScalarFn,
    },
}

impl UptakeLaw {
    pub fn g(&self, u: f64) -> f64 {
        match self {
            UptakeLaw::Linear => u,
            UptakeLaw::MichaelisMenten => u / (1.0 + u),
            UptakeLaw::Custom { g, .. } => g(u),
        }
    }

    pub fn dg(&self, u: f64) -> f64 {
        match self {
            UptakeLaw::Linear => 1.0,
            UptakeLaw::MichaelisMenten => 1.0 / ((1.0 + u) * (1.0 + u)),
            UptakeLaw::Custom { dg, .. } => dg(u),
        }
    }

    /// Secant slope `g(u)/u`, with `g'(0)` at the origin. Used to freeze `g` inside Picard sweeps.
    pub fn secant(&self, u: f64) -> f64 {
        match self {
            UptakeLaw::Linear => 1.0,
            UptakeLaw::MichaelisMenten => 1.0 / (1.0 + u),
            UptakeLaw::Custom { g, dg } => {
                if u.abs() < 1e-300 {
                    dg(0.0)
                } else {
                    g(u) / u
                }
            }
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, UptakeLaw::Linear)
    }

    pub fn name(&self) -> &'static str {
        match self {
            UptakeLaw::Linear => "linear",
            UptakeLaw::MichaelisMenten => "michaelis-menten",
            UptakeLaw::Custom { .. } => "custom",
        }
    }
}

impl fmt::Debug for UptakeLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TopBoundary {
    Dirichlet(f64),
    ZeroFlux,
}

pub type PointFn = Arc<dyn Fn([f64; 3]) -> f64 + Send + Sync>;

/// Initial concentration. The solvers are one-dimensional in `x₃` (or axisymmetric), so data that
/// varies across the cell is rejected.
#[derive(Clone)]
pub enum InitialCondition {
    Constant(f64),
    /// Pairs `(x₃, value)` interpolated linearly.
    Axial(Vec<(f64, f64)>),
    Function(PointFn),
}

impl fmt::Debug for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialCondition::Constant(c) => write!(f, "Constant({c})"),
            InitialCondition::Axial(t) => write!(f, "Axial({} points)", t.len()),
            InitialCondition::Function(_) => f.write_str("Function"),
        }
    }
}

impl InitialCondition {
    pub fn at(&self, z: f64) -> f64 {
        match self {
            InitialCondition::Constant(c) => *c,
            InitialCondition::Axial(table) => {
                if table.is_empty() {
                    return 0.0;
                }
                let k = table.partition_point(|p| p.0 <= z);
                if k == 0 {
                    table[0].1
                } else if k == table.len() {
                    table[k - 1].1
                } else {
                    let (z0, v0) = table[k - 1];
                    let (z1, v1) = table[k];
                    v0 + (z - z0) / (z1 - z0) * (v1 - v0)
                }
            }
            InitialCondition::Function(f) => f([0.0, 0.0, z]),
        }
    }

    /// Rejects data that depends on the lateral coordinates, sampled on a small stencil.
    pub fn check_symmetric(&self, epsilon: f64, m: f64) -> Result<()> {
        if let InitialCondition::Function(f) = self {
            for k in 0..=8 {
                let z = m * k as f64 / 8.0;
                let base = f([0.0, 0.0, z]);
                for (x, y) in [(0.3, 0.0), (0.0, 0.3), (0.21, 0.37), (-0.4, 0.1)] {
                    let v = f([x * epsilon, y * epsilon, z]);
                    if (v - base).abs() > 1e-12 * base.abs().max(1.0) {
                        return Err(Error::Validation(vec![format!(
                            "u_init varies laterally at x3={z}; only data depending on x3 alone is supported"
                        )]));
                    }
                }
            }
        }
        Ok(())
    }

    fn max_min(&self, m: f64) -> (f64, f64) {
        match self {
            InitialCondition::Constant(c) => (*c, *c),
            InitialCondition::Axial(t) => t
                .iter()
                .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), p| {
                    (hi.max(p.1), lo.min(p.1))
                }),
            InitialCondition::Function(f) => {
                (0..=64).fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), k| {
                    let v = f([0.0, 0.0, m * k as f64 / 64.0]);
                    (hi.max(v), lo.min(v))
                })
            }
        }
    }

    pub fn max_value(&self, m: f64) -> f64 {
        self.max_min(m).0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Steady,
    Transient { t_end: f64, dt: f64 },
}

/// Hair size given either as the radius ratio or through `λ` under the scenario's scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HairSize {
    RadiusRatio(f64),
    Lambda(f64),
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub regime: Regime,
    pub epsilon: f64,
    pub hair: HairSize,
    pub l: f64,
    pub m: f64,
    pub beta: f64,
    pub d_u: f64,
    pub kappa: f64,
    pub uptake: UptakeLaw,
    pub top_bc: TopBoundary,
    pub u_init: InitialCondition,
    pub mode: Mode,
}

impl Scenario {
    /// Default parameter set: ε=0.5, L=0.5, M=1, β=0, D=1, κ=1, linear uptake, Dirichlet-1 top, steady.
    pub fn baseline(regime: Regime, hair: HairSize) -> Self {
        Self {
            regime,
            epsilon: 0.5,
            hair,
            l: 0.5,
            m: 1.0,
            beta: 0.0,
            d_u: 1.0,
            kappa: 1.0,
            uptake: UptakeLaw::Linear,
            top_bc: TopBoundary::Dirichlet(1.0),
            u_init: InitialCondition::Constant(1.0),
            mode: Mode::Steady,
        }
    }

    /// Copy with a different regime, keeping every other field.
    pub fn with_regime(&self, regime: Regime) -> Self {
        let mut s = self.clone();
        s.regime = regime;
        if let HairSize::Lambda(_) = self.hair {
            s.hair = HairSize::RadiusRatio(self.a_eps());
        }
        s
    }

    /// The scaling used to translate between `λ` and `a_ε` for this scenario. The reference
    /// regime reads a given `λ` in the distinguished scaling.
    fn scaling(&self) -> MacroRegime {
        match self.regime {
            Regime::Standard => MacroRegime::A,
            _ => MacroRegime::B,
        }
    }

    pub fn a_eps(&self) -> f64 {
        match self.hair {
            HairSize::RadiusRatio(a) => a,
            HairSize::Lambda(l) => self.scaling().a_of(self.epsilon, l),
        }
    }

    /// `λ` under a given scaling. When the scenario was specified through `λ` in that same
    /// scaling the value is returned untouched.
    pub fn lambda_for(&self, regime: MacroRegime) -> f64 {
        match self.hair {
            HairSize::Lambda(l) if regime == self.scaling() => l,
            _ => regime.lambda_of(self.epsilon, self.a_eps()),
        }
    }

    /// `λ` of the scenario's own scaling.
    pub fn lambda(&self) -> f64 {
        self.lambda_for(self.scaling())
    }

    /// `κ̃ = λκ/D` under a given scaling.
    pub fn kappa_tilde(&self, regime: MacroRegime) -> f64 {
        self.lambda_for(regime) * self.kappa / self.d_u
    }

    pub fn r_eps(&self) -> f64 {
        self.epsilon * self.a_eps()
    }

    pub fn is_steady(&self) -> bool {
        matches!(self.mode, Mode::Steady)
    }

    /// Checks every invariant and reports all violations together.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            errs.push(format!("epsilon must be positive, got {}", self.epsilon));
        }
        match self.hair {
            HairSize::RadiusRatio(a) => {
                if !(a > 0.0 && a < 1.0) {
                    errs.push(format!("a_eps must lie in (0,1), got {a}"));
                }
            }
            HairSize::Lambda(l) => {
                if !(l >= 0.0 && l.is_finite()) {
                    errs.push(format!("lambda must be non-negative, got {l}"));
                } else if self.regime == Regime::FullReference && !(l > 0.0) {
                    errs.push("the reference solver needs lambda > 0 (a_eps < 1)".into());
                }
            }
        }
        if !(self.l > 0.0 && self.l < self.m) {
            errs.push(format!("need 0 < L < M, got L={}, M={}", self.l, self.m));
        }
        if !(self.beta >= 0.0) {
            errs.push(format!("beta must be non-negative, got {}", self.beta));
        }
        if !(self.d_u > 0.0) {
            errs.push(format!("D_u must be positive, got {}", self.d_u));
        }
        if !(self.kappa >= 0.0) {
            errs.push(format!("kappa must be non-negative, got {}", self.kappa));
        }
        if let TopBoundary::Dirichlet(v) = self.top_bc {
            if !(v >= 0.0) {
                errs.push(format!("top Dirichlet value must be non-negative, got {v}"));
            }
        }
        if let Mode::Transient { t_end, dt } = self.mode {
            if !(dt > 0.0) {
                errs.push(format!("dt must be positive, got {dt}"));
            }
            if !(t_end >= dt) {
                errs.push(format!(
                    "t_end must be at least dt, got t_end={t_end}, dt={dt}"
                ));
            }
        }
        let (hi, lo) = self.u_init.max_min(self.m);
        if !(lo >= 0.0) {
            errs.push(format!("u_init must be non-negative, minimum {lo}"));
        }
        if !hi.is_finite() {
            errs.push("u_init must be finite".into());
        }
        if let Err(Error::Validation(v)) = self.u_init.check_symmetric(self.epsilon, self.m) {
            errs.extend(v);
        }
        if self.regime == Regime::FullReference && errs.is_empty() {
            let rho_cell = self.epsilon / std::f64::consts::PI.sqrt();
            if !(self.r_eps() < rho_cell) {
                errs.push(format!(
                    "hair radius {} does not fit in the cell of radius {rho_cell}",
                    self.r_eps()
                ));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }
}
