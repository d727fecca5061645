//! Closed-form annulus correctors: `Δw = 0` for `r_ε < r < ερ`, `D ∂_r w = (ε²κ/r_ε) w` on the
//! hair, `w = 1` on the outer circle. The solution is `w = 1 + A ln(r/(ερ))` with
//! `A = κε² / (D + κ(λ_eff + ε² ln ρ))`, where `λ_eff` is `λ` in the distinguished scaling and
//! `ελ` in the standard one (both equal `ε² ln(1/a_ε)`).

use crate::error::{Error, Result};
use crate::scenario::MacroRegime;

/// Default outer radius fraction.
pub const DEFAULT_RHO: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectorParams {
    pub epsilon: f64,
    pub a_eps: f64,
    pub rho: f64,
    pub kappa: f64,
    pub d_u: f64,
    pub regime: MacroRegime,
    /// `λ` in the regime's own scaling.
    pub lambda: f64,
}

impl CorrectorParams {
    pub fn new(
        regime: MacroRegime,
        epsilon: f64,
        a_eps: f64,
        rho: f64,
        kappa: f64,
        d_u: f64,
    ) -> Result<Self> {
        let p = Self {
            epsilon,
            a_eps,
            rho,
            kappa,
            d_u,
            regime,
            lambda: regime.lambda_of(epsilon, a_eps),
        };
        p.check()?;
        p.check_annulus()?;
        Ok(p)
    }

    /// Parameters given through `λ`. `λ = 0` is allowed so that flux values can be compared in the
    /// limit where the annulus degenerates; evaluating `w` then reports a geometry error.
    pub fn from_lambda(
        regime: MacroRegime,
        epsilon: f64,
        lambda: f64,
        rho: f64,
        kappa: f64,
        d_u: f64,
    ) -> Result<Self> {
        let p = Self {
            epsilon,
            a_eps: regime.a_of(epsilon, lambda),
            rho,
            kappa,
            d_u,
            regime,
            lambda,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.epsilon > 0.0) {
            errs.push(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.rho > 0.0 && self.rho < 0.5) {
            errs.push(format!("rho must lie in (0, 1/2), got {}", self.rho));
        }
        if !(self.kappa > 0.0 && self.d_u > 0.0) {
            errs.push("kappa and D_u must be positive".into());
        }
        if !(self.lambda >= 0.0) {
            errs.push(format!("lambda must be non-negative, got {}", self.lambda));
        }
        if self.regime == MacroRegime::B
            && self.lambda > 0.0
            && !(self.lambda + self.epsilon * self.epsilon * self.rho.ln() > 0.0)
        {
            errs.push(format!(
                "admissibility lambda + eps^2 ln(rho) > 0 fails: {} + {}",
                self.lambda,
                self.epsilon * self.epsilon * self.rho.ln()
            ));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    fn check_annulus(&self) -> Result<()> {
        if !(self.r_eps() > 0.0 && self.r_eps() < self.outer_radius()) {
            return Err(Error::Geometry(format!(
                "need 0 < r_eps < eps*rho, got r_eps={}, eps*rho={}",
                self.r_eps(),
                self.outer_radius()
            )));
        }
        Ok(())
    }

    pub fn r_eps(&self) -> f64 {
        self.epsilon * self.a_eps
    }

    pub fn outer_radius(&self) -> f64 {
        self.epsilon * self.rho
    }

    /// `λ` in the distinguished normalisation: `ε² ln(1/a_ε)`.
    pub fn lambda_eff(&self) -> f64 {
        match self.regime {
            MacroRegime::A => self.epsilon * self.lambda,
            MacroRegime::B => self.lambda,
        }
    }

    fn denominator(&self) -> f64 {
        self.d_u + self.kappa * (self.lambda_eff() + self.epsilon * self.epsilon * self.rho.ln())
    }

    /// `(A, B)` in `w = A ln r + B`.
    pub fn coefficients(&self) -> (f64, f64) {
        let den = self.denominator();
        let a = self.kappa * self.epsilon * self.epsilon / den;
        let b = (self.d_u
            + self.kappa * (self.lambda_eff() - self.epsilon * self.epsilon * self.epsilon.ln()))
            / den;
        (a, b)
    }
}

pub fn w_closed_form(params: &CorrectorParams, r: f64) -> Result<f64> {
    params.check_annulus()?;
    let (lo, hi) = (params.r_eps(), params.outer_radius());
    if !(r >= lo * (1.0 - 1e-14) && r <= hi * (1.0 + 1e-14)) {
        return Err(Error::Domain(format!("radius {r} outside [{lo}, {hi}]")));
    }
    let (a, _) = params.coefficients();
    Ok(1.0 + a * (r / hi).ln())
}

/// `∂_r w`.
pub fn w_derivative(params: &CorrectorParams, r: f64) -> f64 {
    params.coefficients().0 / r
}

/// `D ∂_r w` on the outer circle.
pub fn w_boundary_flux(params: &CorrectorParams) -> f64 {
    let eps = params.epsilon;
    eps * (params.kappa / params.rho)
        / (1.0 + (params.kappa / params.d_u) * (params.lambda_eff() + eps * eps * params.rho.ln()))
}

/// Outer-circle flux times perimeter per unit cell area; tends to the effective sink as `ε → 0`.
pub fn per_cell_sink(params: &CorrectorParams) -> f64 {
    w_boundary_flux(params) * 2.0 * std::f64::consts::PI * params.rho / params.epsilon
}

/// Residuals of the closed form, each scaled to be dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectorResiduals {
    /// `max |r² w'' + r w'|` over the sample radii.
    pub interior: f64,
    /// `|D A − ε²κ w(r_ε)| / ε²`, i.e. the Robin law multiplied by `r_ε/ε²`.
    pub robin: f64,
    /// `|w(ερ) − 1|`.
    pub dirichlet: f64,
}

pub fn corrector_residual(
    params: &CorrectorParams,
    sample_radii: &[f64],
) -> Result<CorrectorResiduals> {
    params.check_annulus()?;
    let (a, _) = params.coefficients();
    let mut interior: f64 = 0.0;
    for &r in sample_radii {
        if !(r > params.r_eps() && r < params.outer_radius()) {
            return Err(Error::Domain(format!(
                "sample radius {r} outside the open annulus"
            )));
        }
        let w1 = a / r;
        let w2 = -a / (r * r);
        interior = interior.max((r * r * w2 + r * w1).abs());
    }
    let eps2 = params.epsilon * params.epsilon;
    let w_in = w_closed_form(params, params.r_eps())?;
    let robin = (params.d_u * a - eps2 * params.kappa * w_in).abs() / eps2;
    let dirichlet = (w_closed_form(params, params.outer_radius())? - 1.0).abs();
    Ok(CorrectorResiduals {
        interior,
        robin,
        dirichlet,
    })
}
