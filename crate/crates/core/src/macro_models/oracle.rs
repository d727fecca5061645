//! Closed-form steady solutions for linear uptake.

/// Steady `u₀` for `D u'' = S u` on `[0,L]`, `D u'' = 0` on `[L,M]`, `D u'(0) = β u(0)` and
/// `u(M) = top`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U0Oracle {
    pub m: f64,
    pub amplitude: f64,
    b: f64,
    l: f64,
}

impl U0Oracle {
    pub fn new(sink: f64, d_u: f64, beta: f64, l: f64, m_top: f64, top: f64) -> Self {
        let m = (sink / d_u).sqrt();
        let b = if m > 0.0 { beta / (d_u * m) } else { 0.0 };
        let c_l = (m * l).cosh() + b * (m * l).sinh();
        let dc_l = m * ((m * l).sinh() + b * (m * l).cosh());
        let amplitude = top / (c_l + dc_l * (m_top - l));
        Self { m, amplitude, b, l }
    }

    pub fn value(&self, x: f64) -> f64 {
        let m = self.m;
        if x <= self.l {
            self.amplitude * ((m * x).cosh() + self.b * (m * x).sinh())
        } else {
            let c_l = (m * self.l).cosh() + self.b * (m * self.l).sinh();
            let dc_l = m * ((m * self.l).sinh() + self.b * (m * self.l).cosh());
            self.amplitude * (c_l + dc_l * (x - self.l))
        }
    }
}

/// Steady standard-limit first-order term for `β = 0`:
/// `D u₁'' − S u₁ + S κ̃ u₀ = 0` on `[0,L]` with zero flux at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U1Oracle {
    m: f64,
    b: f64,
    c: f64,
}

impl U1Oracle {
    pub fn new(u0: &U0Oracle, kappa_tilde: f64, l: f64) -> Self {
        let m = u0.m;
        let c = -m * kappa_tilde * u0.amplitude / 2.0;
        let b = -c * ((m * l).sinh() + m * l * (m * l).cosh()) / (m * (m * l).sinh());
        Self { m, b, c }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.b * (self.m * x).cosh() + self.c * x * (self.m * x).sinh()
    }
}
