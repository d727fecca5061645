use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::newton_bracketed;
use crate::scenario::{MacroRegime, Regime, Scenario, UptakeLaw};

/// Linear effective sink rate of a homogenized limit.
pub fn sink_coefficient(regime: MacroRegime, kappa: f64, d_u: f64, lambda: f64) -> f64 {
    let s = 2.0 * PI * kappa;
    match regime {
        MacroRegime::A => s,
        MacroRegime::B => s / (1.0 + lambda * kappa / d_u),
    }
}

/// Hair-surface concentration `h` solving `h + κ̃ g(h) = u₀`.
pub fn h_of_u0(u0: f64, kappa_tilde: f64, g: &UptakeLaw) -> Result<f64> {
    if !(u0 >= 0.0) {
        return Err(Error::Domain(format!("closure needs u0 >= 0, got {u0}")));
    }
    if kappa_tilde == 0.0 || u0 == 0.0 {
        return Ok(u0);
    }
    match g {
        UptakeLaw::Linear => Ok(u0 / (1.0 + kappa_tilde)),
        UptakeLaw::MichaelisMenten => Ok(mm_root(u0, kappa_tilde)),
        UptakeLaw::Custom { .. } => {
            let f = |h: f64| h + kappa_tilde * g.g(h) - u0;
            let df = |h: f64| 1.0 + kappa_tilde * g.dg(h);
            for k in 0..=16 {
                let h = u0 * k as f64 / 16.0;
                if g.dg(h) < 0.0 {
                    return Err(Error::InvalidModel(format!(
                        "uptake law decreases at u={h} (g'={})",
                        g.dg(h)
                    )));
                }
            }
            newton_bracketed(f, df, 0.0, u0, 1e-14 * u0.max(1.0))
        }
    }
}

/// Non-negative root of `h² + (1 + κ̃ − u)h − u = 0`, evaluated without cancellation.
fn mm_root(u: f64, kappa_tilde: f64) -> f64 {
    let b = u - kappa_tilde - 1.0;
    let disc = (b * b + 4.0 * u).sqrt();
    if b >= 0.0 {
        0.5 * (disc + b)
    } else {
        2.0 * u / (disc - b)
    }
}

/// `2πκ·X/(2+X)` with `X = √((u−κ̃−1)² + 4u) + u − κ̃ − 1`, the closed Michaelis–Menten form.
pub fn mm_effective_sink_explicit(u0: f64, kappa: f64, d_u: f64, lambda: f64) -> f64 {
    let kt = lambda * kappa / d_u;
    let b = u0 - kt - 1.0;
    let x = (b * b + 4.0 * u0).sqrt() + b;
    2.0 * PI * kappa * x / (2.0 + x)
}

/// Volumetric sink of a homogenized limit at concentration `u0`.
pub fn effective_sink_for(u0: f64, scenario: &Scenario, regime: MacroRegime) -> Result<f64> {
    let lambda = scenario.lambda_for(regime);
    if scenario.uptake.is_linear() {
        return Ok(sink_coefficient(regime, scenario.kappa, scenario.d_u, lambda) * u0);
    }
    let two_pi_kappa = 2.0 * PI * scenario.kappa;
    match regime {
        MacroRegime::A => Ok(two_pi_kappa * scenario.uptake.g(u0)),
        MacroRegime::B => {
            let kt = lambda * scenario.kappa / scenario.d_u;
            let h = h_of_u0(u0, kt, &scenario.uptake)?;
            Ok(two_pi_kappa * scenario.uptake.g(h))
        }
    }
}

/// Volumetric sink using the scenario's own regime.
pub fn effective_sink(u0: f64, scenario: &Scenario) -> Result<f64> {
    match scenario.regime {
        Regime::Standard => effective_sink_for(u0, scenario, MacroRegime::A),
        Regime::Distinguished => effective_sink_for(u0, scenario, MacroRegime::B),
        Regime::FullReference => Err(Error::Config(
            "the resolved model has no effective sink; pick a homogenized regime".into(),
        )),
    }
}

/// Secant slope `sink(u)/u`, with the derivative at the origin.
pub(crate) fn sink_secant(u0: f64, scenario: &Scenario, regime: MacroRegime) -> Result<f64> {
    let lambda = scenario.lambda_for(regime);
    if scenario.uptake.is_linear() {
        return Ok(sink_coefficient(
            regime,
            scenario.kappa,
            scenario.d_u,
            lambda,
        ));
    }
    let u = u0.max(0.0);
    if u > 1e-12 {
        return Ok(effective_sink_for(u, scenario, regime)? / u);
    }
    let dg0 = scenario.uptake.dg(0.0);
    let two_pi_kappa = 2.0 * PI * scenario.kappa;
    Ok(match regime {
        MacroRegime::A => two_pi_kappa * dg0,
        MacroRegime::B => {
            let kt = lambda * scenario.kappa / scenario.d_u;
            two_pi_kappa * dg0 / (1.0 + kt * dg0)
        }
    })
}
