//! Periodic unit-cell problem `Δψ = δ − 1` on the unit torus.
//!
//! The lattice sum is split at heat-kernel time `t₀ = 1/(4α²)`: images of the source are summed
//! in real space through `E₁`, the remainder in Fourier space. ψ is normalised so that
//! `2πψ(y) − ln‖y‖ → 0` at the origin; its cell mean then equals minus the regular value of the
//! zero-mean Green function.

pub mod expint;
pub mod fd;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use expint::{e1, ein, EULER_GAMMA};

/// Exponent beyond which lattice terms are dropped (`e^{−42} ≈ 6e−19`).
const TAIL_EXPONENT: f64 = 42.0;

#[derive(Debug, Clone)]
pub struct CellPsi {
    modes: usize,
    ewald_split: f64,
    t0: f64,
    mean: f64,
    /// Real-space images `n ≠ 0` with their value `E₁(|n|²/4t₀)`.
    images: Vec<([f64; 2], f64)>,
    /// Fourier modes `k ≠ 0` with weight `e^{−4π²|k|²t₀}/(4π²|k|²)`.
    waves: Vec<([f64; 2], f64)>,
    error_estimate: f64,
}

/// Truncation half-width and split parameter used when nothing else is requested.
pub const DEFAULT_MODES: usize = 64;
pub const DEFAULT_EWALD_SPLIT: f64 = 2.0;

pub fn build_cell_psi(modes: usize, ewald_split: f64) -> Result<CellPsi> {
    CellPsi::new(modes, ewald_split)
}

impl CellPsi {
    pub fn new(modes: usize, ewald_split: f64) -> Result<Self> {
        if modes < 8 {
            return Err(Error::Config(format!(
                "need at least 8 Fourier modes, got {modes}"
            )));
        }
        if !(ewald_split > 0.0 && ewald_split.is_finite()) {
            return Err(Error::Config(format!(
                "Ewald split must be positive, got {ewald_split}"
            )));
        }
        let t0 = 1.0 / (4.0 * ewald_split * ewald_split);

        // Images: the smallest distance from the cell to n is |n| − 1/√2.
        let r_cut = (TAIL_EXPONENT * 4.0 * t0).sqrt() + std::f64::consts::FRAC_1_SQRT_2;
        let n_real = r_cut.ceil() as i64 + 1;
        let mut images = Vec::new();
        let mut real_tail: f64 = 0.0;
        for i in -n_real..=n_real {
            for j in -n_real..=n_real {
                if i == 0 && j == 0 {
                    continue;
                }
                let n2 = (i * i + j * j) as f64;
                if n2.sqrt() <= r_cut {
                    images.push(([i as f64, j as f64], e1(n2 / (4.0 * t0))));
                } else {
                    let d = n2.sqrt() - std::f64::consts::FRAC_1_SQRT_2;
                    real_tail = real_tail.max(e1(d * d / (4.0 * t0)));
                }
            }
        }

        let k_cut2 = TAIL_EXPONENT / (4.0 * PI * PI * t0);
        let k_lim = (modes as i64).min(k_cut2.sqrt().ceil() as i64 + 1);
        let mut waves = Vec::new();
        let mut wave_tail: f64 = 0.0;
        for i in -k_lim..=k_lim {
            for j in -k_lim..=k_lim {
                if i == 0 && j == 0 {
                    continue;
                }
                let k2 = (i * i + j * j) as f64;
                let w = (-4.0 * PI * PI * k2 * t0).exp() / (4.0 * PI * PI * k2);
                if k2 <= k_cut2 {
                    waves.push(([i as f64, j as f64], w));
                } else {
                    wave_tail = wave_tail.max(w);
                }
            }
        }
        // Dropped terms decay like Gaussians; a generous count of the first omitted shell.
        let error_estimate = 8.0 * n_real as f64 * real_tail / (4.0 * PI)
            + 8.0
                * k_lim as f64
                * wave_tail.max((-4.0 * PI * PI * (k_lim * k_lim) as f64 * t0).exp());

        let image_sum: f64 = images.iter().map(|(_, e)| e).sum();
        let wave_sum: f64 = waves.iter().map(|(_, w)| w).sum();
        let regular =
            t0 + (EULER_GAMMA - (4.0 * t0).ln()) / (4.0 * PI) - image_sum / (4.0 * PI) - wave_sum;
        Ok(Self {
            modes,
            ewald_split,
            t0,
            mean: -regular,
            images,
            waves,
            error_estimate,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn ewald_split(&self) -> f64 {
        self.ewald_split
    }

    pub fn split_time(&self) -> f64 {
        self.t0
    }

    /// Cell mean of ψ, i.e. its zeroth Fourier coefficient.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Bound on the truncated lattice tails.
    pub fn error_estimate(&self) -> f64 {
        self.error_estimate
    }

    /// Number of real-space images and Fourier modes actually summed.
    pub fn term_counts(&self) -> (usize, usize) {
        (self.images.len(), self.waves.len())
    }

    /// Spectral coefficient `ψ̂_k`.
    pub fn coefficient(&self, k: [i64; 2]) -> f64 {
        if k == [0, 0] {
            self.mean
        } else {
            let k2 = (k[0] * k[0] + k[1] * k[1]) as f64;
            -1.0 / (4.0 * PI * PI * k2)
        }
    }

    /// `ψ(y) − ln‖y‖/(2π)` for `y` in `[−½, ½]²`, summed as differences so that small `y` loses
    /// no digits.
    pub fn psi_regular(&self, y: [f64; 2]) -> f64 {
        let t4 = 4.0 * self.t0;
        let r2 = y[0] * y[0] + y[1] * y[1];
        let x0 = r2 / t4;
        let near = if x0 <= 4.0 {
            ein(x0)
        } else {
            e1(x0) + EULER_GAMMA + x0.ln()
        };
        let mut images = 0.0;
        for (n, en) in &self.images {
            let dx = y[0] - n[0];
            let dy = y[1] - n[1];
            images += e1((dx * dx + dy * dy) / t4) - en;
        }
        let mut waves = 0.0;
        for (k, w) in &self.waves {
            let s = (PI * (k[0] * y[0] + k[1] * y[1])).sin();
            waves += w * s * s;
        }
        -(near + images) / (4.0 * PI) + 2.0 * waves
    }

    /// ψ at any `y ≠ 0` modulo the lattice.
    pub fn eval(&self, y: [f64; 2]) -> Result<f64> {
        let y = reduce(y);
        let r2 = y[0] * y[0] + y[1] * y[1];
        if r2 == 0.0 {
            return Err(Error::SingularPoint);
        }
        Ok(r2.ln() / (4.0 * PI) + self.psi_regular(y))
    }

    /// Average of `2πψ − ln‖y‖` over the circle of the given radius centred on the source.
    pub fn matching_residual(&self, radius: f64) -> f64 {
        self.matching_residual_rotated(radius, 0.0)
    }

    /// Same average with the sampling points rotated by `phase`.
    pub fn matching_residual_rotated(&self, radius: f64, phase: f64) -> f64 {
        let n = 64;
        let sum: f64 = (0..n)
            .map(|j| {
                let th = phase + 0.1 + 2.0 * PI * j as f64 / n as f64;
                self.psi_regular([radius * th.cos(), radius * th.sin()])
            })
            .sum();
        2.0 * PI * sum / n as f64
    }

    /// Average of ψ over the circle of the given radius; the circle may leave the cell.
    pub fn circle_average(&self, radius: f64) -> Result<f64> {
        if !(radius > 0.0) {
            return Err(Error::SingularPoint);
        }
        let n = 128;
        let mut sum = 0.0;
        for j in 0..n {
            let th = 0.1 + 2.0 * PI * j as f64 / n as f64;
            sum += self.eval([radius * th.cos(), radius * th.sin()])?;
        }
        Ok(sum / n as f64)
    }
}

/// Nearest-lattice-point reduction to `[−½, ½]²`.
pub fn reduce(y: [f64; 2]) -> [f64; 2] {
    [y[0] - y[0].round(), y[1] - y[1].round()]
}
