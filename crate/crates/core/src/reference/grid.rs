use crate::correctors::CorrectorParams;
use crate::error::{Error, Result};
use crate::numerics::Grid1D;
use crate::scenario::{Regime, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialGrading {
    Uniform,
    /// Geometric spacing outward from the hair, uniform in `ln r`.
    Logarithmic,
}

impl RadialGrading {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Some(RadialGrading::Uniform),
            "log" | "logarithmic" | "geometric" => Some(RadialGrading::Logarithmic),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RadialGrading::Uniform => "uniform",
            RadialGrading::Logarithmic => "logarithmic",
        }
    }
}

/// Tensor grid in `(r, z)` for the equal-area axisymmetric cell. Nodes with `r < r_ε` and `z < L`
/// lie inside the hair and are masked.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiGrid {
    pub r_nodes: Vec<f64>,
    pub z_nodes: Vec<f64>,
    /// Radial index of `r_ε`.
    pub hair_index: usize,
    /// Axial index of the hair tip `z = L`.
    pub hair_top: usize,
    pub hole_mask: Vec<bool>,
    pub grading: RadialGrading,
    /// Ratio of consecutive radial cell widths outside the hair (1 for uniform grading).
    pub stretch: f64,
}

/// Outer radius of the circle with the area of the square cell `εY`.
pub fn equal_area_radius(epsilon: f64) -> f64 {
    epsilon / std::f64::consts::PI.sqrt()
}

fn radial_segment(r0: f64, r1: f64, n: usize, grading: RadialGrading) -> (Vec<f64>, f64) {
    match grading {
        RadialGrading::Uniform => {
            let h = (r1 - r0) / n as f64;
            let mut v: Vec<f64> = (0..n).map(|k| r0 + k as f64 * h).collect();
            v.push(r1);
            (v, 1.0)
        }
        RadialGrading::Logarithmic => {
            let q = (r1 / r0).powf(1.0 / n as f64);
            let lr = (r1 / r0).ln();
            let mut v: Vec<f64> = (0..n)
                .map(|k| r0 * (lr * k as f64 / n as f64).exp())
                .collect();
            v.push(r1);
            (v, q)
        }
    }
}

impl AxiGrid {
    pub fn nr(&self) -> usize {
        self.r_nodes.len()
    }

    pub fn nz(&self) -> usize {
        self.z_nodes.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.nr() * self.nz()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nr() + i
    }

    pub fn is_hole(&self, i: usize, j: usize) -> bool {
        self.hole_mask[self.index(i, j)]
    }

    pub fn active_nodes(&self) -> usize {
        self.hole_mask.iter().filter(|h| !**h).count()
    }

    pub fn r_eps(&self) -> f64 {
        self.r_nodes[self.hair_index]
    }

    pub fn outer_radius(&self) -> f64 {
        *self.r_nodes.last().unwrap()
    }

    pub fn l(&self) -> f64 {
        self.z_nodes[self.hair_top]
    }

    fn with_mask(
        r_nodes: Vec<f64>,
        z_nodes: Vec<f64>,
        hair_index: usize,
        hair_top: usize,
        grading: RadialGrading,
        stretch: f64,
    ) -> Self {
        let nr = r_nodes.len();
        let nz = z_nodes.len();
        let mut hole_mask = vec![false; nr * nz];
        for j in 0..hair_top {
            for i in 0..hair_index {
                hole_mask[j * nr + i] = true;
            }
        }
        Self {
            r_nodes,
            z_nodes,
            hair_index,
            hair_top,
            hole_mask,
            grading,
            stretch,
        }
    }

    /// Grid of a single `z`-independent annulus `[r_ε, ερ]` with the hair over the full height.
    pub fn annulus(params: &CorrectorParams, n_r: usize, grading: RadialGrading) -> Result<Self> {
        if n_r < 2 {
            return Err(Error::Geometry(
                "annulus grid needs at least two cells".into(),
            ));
        }
        let (r, q) = radial_segment(params.r_eps(), params.outer_radius(), n_r, grading);
        Ok(Self::with_mask(r, vec![0.0, 0.5, 1.0], 0, 2, grading, q))
    }
}

/// Radial cells: `n_r` in total, about an eighth of them uniform inside the hair radius (used
/// above the tip), the rest graded over `[r_ε, ρ_cell]`. Axial cells are uniform on each side of
/// `L`.
pub fn build_axi_grid(
    scenario: &Scenario,
    n_r: usize,
    n_z: usize,
    grading: RadialGrading,
) -> Result<AxiGrid> {
    if n_r < 16 || n_z < 16 {
        return Err(Error::Geometry(format!(
            "need n_r, n_z >= 16, got {n_r}, {n_z}"
        )));
    }
    if scenario.regime != Regime::FullReference {
        return Err(Error::Config(
            "the resolved grid needs a scenario in the reference regime".into(),
        ));
    }
    let rho_cell = equal_area_radius(scenario.epsilon);
    let r_eps = scenario.r_eps();
    if !(r_eps > 0.0 && r_eps < rho_cell) {
        return Err(Error::Geometry(format!(
            "hair radius {r_eps} does not fit in the cell of radius {rho_cell}"
        )));
    }
    let n_in = (n_r / 8).max(2);
    let n_out = n_r - n_in;
    let h_in = r_eps / n_in as f64;
    let mut r: Vec<f64> = (0..n_in).map(|k| k as f64 * h_in).collect();
    let (outer, q) = radial_segment(r_eps, rho_cell, n_out, grading);
    r.extend(outer);
    let z = Grid1D::piecewise_uniform(scenario.l, scenario.m, n_z)?;
    let hair_top = z.interface_index();
    Ok(AxiGrid::with_mask(
        r,
        z.nodes().to_vec(),
        n_in,
        hair_top,
        grading,
        q,
    ))
}
