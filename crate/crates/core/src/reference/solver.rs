use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::macro_models::solve::{picard, PicardOptions};
use crate::numerics::{
    solve_linear, BackwardEuler, BandMatrix, Field, SpatialOperator, TimeStepper,
};
use crate::reference::grid::AxiGrid;
use crate::scenario::{Mode, Scenario, TopBoundary, UptakeLaw};

/// Boundary data of the axisymmetric problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiBoundary {
    pub d_u: f64,
    /// `ε²κ`: the hair flux per unit height and radian is `ε²κ g(u)`.
    pub hair_robin: f64,
    pub beta: f64,
    pub top: TopBoundary,
    /// Dirichlet value on the outer radius (annulus test mode only).
    pub outer: Option<f64>,
}

/// Discrete pieces, all per radian.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub diffusion: BandMatrix,
    pub mass: Vec<f64>,
    pub hair: Vec<f64>,
    pub root: Vec<f64>,
    pub dirichlet: Vec<(usize, f64)>,
    /// Nodes with a prescribed physical value (hole nodes excluded).
    pub boundary_nodes: Vec<usize>,
}

pub fn assemble(grid: &AxiGrid, bc: &AxiBoundary) -> Assembly {
    let nr = grid.nr();
    let nz = grid.nz();
    let n = grid.n_nodes();
    let mut k = BandMatrix::zeros(n, nr);
    let mut mass = vec![0.0; n];
    let mut hair = vec![0.0; n];
    let mut root = vec![0.0; n];
    let d = bc.d_u;
    let couple = |k: &mut BandMatrix, a: usize, b: usize, g: f64| {
        k.add(a, a, g);
        k.add(b, b, g);
        k.add(a, b, -g);
        k.add(b, a, -g);
    };
    for j in 0..nz - 1 {
        let dz = grid.z_nodes[j + 1] - grid.z_nodes[j];
        for i in 0..nr - 1 {
            if i < grid.hair_index && j < grid.hair_top {
                continue;
            }
            let (r0, r1) = (grid.r_nodes[i], grid.r_nodes[i + 1]);
            let dr = r1 - r0;
            let rm = 0.5 * (r0 + r1);
            let a_in = 0.5 * (rm * rm - r0 * r0);
            let a_out = 0.5 * (r1 * r1 - rm * rm);
            let (p00, p10) = (grid.index(i, j), grid.index(i + 1, j));
            let (p01, p11) = (grid.index(i, j + 1), grid.index(i + 1, j + 1));
            let gr = d * rm * (0.5 * dz) / dr;
            couple(&mut k, p00, p10, gr);
            couple(&mut k, p01, p11, gr);
            couple(&mut k, p00, p01, d * a_in / dz);
            couple(&mut k, p10, p11, d * a_out / dz);
            mass[p00] += 0.5 * dz * a_in;
            mass[p01] += 0.5 * dz * a_in;
            mass[p10] += 0.5 * dz * a_out;
            mass[p11] += 0.5 * dz * a_out;
            if j == 0 {
                root[p00] += bc.beta * a_in;
                root[p10] += bc.beta * a_out;
            }
            if i == grid.hair_index && j < grid.hair_top {
                hair[p00] += 0.5 * dz * bc.hair_robin;
                hair[p01] += 0.5 * dz * bc.hair_robin;
            }
        }
    }
    let mut dirichlet = Vec::new();
    let mut boundary_nodes = Vec::new();
    for (p, hole) in grid.hole_mask.iter().enumerate() {
        if *hole {
            dirichlet.push((p, 0.0));
        }
    }
    if let TopBoundary::Dirichlet(v) = bc.top {
        for i in 0..nr {
            let p = grid.index(i, nz - 1);
            dirichlet.push((p, v));
            boundary_nodes.push(p);
        }
    }
    if let Some(v) = bc.outer {
        for j in 0..nz {
            let p = grid.index(nr - 1, j);
            if !boundary_nodes.contains(&p) {
                dirichlet.push((p, v));
                boundary_nodes.push(p);
            }
        }
    }
    Assembly {
        diffusion: k,
        mass,
        hair,
        root,
        dirichlet,
        boundary_nodes,
    }
}

impl Assembly {
    /// Operator with the hair uptake frozen at slopes `k` (one per node).
    fn operator(&self, slopes: Option<&[f64]>) -> SpatialOperator {
        let mut stiffness = self.diffusion.clone();
        let diag: Vec<f64> = (0..self.mass.len())
            .map(|p| self.root[p] + self.hair[p] * slopes.map_or(1.0, |s| s[p]))
            .collect();
        stiffness.add_diagonal(&diag);
        SpatialOperator {
            mass: self.mass.clone(),
            stiffness,
            forcing: vec![0.0; self.mass.len()],
            dirichlet: self.dirichlet.clone(),
        }
    }

    fn slopes(&self, u: &[f64], g: &UptakeLaw) -> Vec<f64> {
        u.iter()
            .zip(&self.hair)
            .map(|(&v, &h)| if h == 0.0 { 0.0 } else { g.secant(v.max(0.0)) })
            .collect()
    }
}

/// Resolved solution on the axisymmetric cell; hole nodes hold NaN.
#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub grid: AxiGrid,
    pub frames: Vec<Field>,
    pub steady: bool,
    pub assembly: Assembly,
    pub uptake: UptakeLaw,
}

/// Hair uptake, root uptake and influx through the Dirichlet boundary, integrated over the cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uptake {
    pub hair: f64,
    pub root: f64,
    pub influx: f64,
}

impl Uptake {
    pub fn imbalance(&self) -> f64 {
        (self.influx - self.hair - self.root).abs()
    }
}

fn masked(grid: &AxiGrid, mut values: Vec<f64>) -> Vec<f64> {
    for (v, hole) in values.iter_mut().zip(&grid.hole_mask) {
        if *hole {
            *v = f64::NAN;
        }
    }
    values
}

fn unmasked(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|v| if v.is_nan() { 0.0 } else { *v })
        .collect()
}

pub fn solve_reference(scenario: &Scenario, grid: &AxiGrid) -> Result<ReferenceSolution> {
    solve_reference_with(scenario, grid, &PicardOptions::default())
}

pub fn solve_reference_with(
    scenario: &Scenario,
    grid: &AxiGrid,
    opts: &PicardOptions,
) -> Result<ReferenceSolution> {
    scenario.validate()?;
    let eps = scenario.epsilon;
    let bc = AxiBoundary {
        d_u: scenario.d_u,
        hair_robin: eps * eps * scenario.kappa,
        beta: scenario.beta,
        top: scenario.top_bc,
        outer: None,
    };
    solve_assembled(grid, bc, &scenario.uptake, scenario.mode, opts, |z| {
        scenario.u_init.at(z)
    })
}

pub(crate) fn solve_assembled<F>(
    grid: &AxiGrid,
    bc: AxiBoundary,
    uptake: &UptakeLaw,
    mode: Mode,
    opts: &PicardOptions,
    u_init: F,
) -> Result<ReferenceSolution>
where
    F: Fn(f64) -> f64,
{
    let asm = assemble(grid, &bc);
    let linear = uptake.is_linear();
    let n = grid.n_nodes();
    let mut init = vec![0.0; n];
    for j in 0..grid.nz() {
        for i in 0..grid.nr() {
            let p = grid.index(i, j);
            if !grid.hole_mask[p] {
                init[p] = u_init(grid.z_nodes[j]);
            }
        }
    }
    for &(p, v) in &asm.dirichlet {
        init[p] = v;
    }
    let frames = match mode {
        Mode::Steady => {
            let u = if linear {
                solve_linear(&asm.operator(None).steady_system())?.values
            } else {
                picard(init, opts, |u| {
                    let k = asm.slopes(u, uptake);
                    Ok(solve_linear(&asm.operator(Some(&k)).steady_system())?.values)
                })?
            };
            vec![Field::new(masked(grid, u), 0.0)]
        }
        Mode::Transient { t_end, dt } => {
            let ts = TimeStepper::new(dt, t_end)?;
            let mut raw = vec![Field::new(init, 0.0)];
            if linear {
                let stepper = BackwardEuler::new(asm.operator(None), dt)?;
                for k in 1..=ts.n_steps() {
                    let mut next = stepper.step(raw.last().unwrap())?;
                    next.time = ts.time_at(k);
                    raw.push(next);
                }
            } else {
                for k in 1..=ts.n_steps() {
                    let prev = raw.last().unwrap().values.clone();
                    let u = picard(prev.clone(), opts, |u| {
                        let slopes = asm.slopes(u, uptake);
                        let op = asm.operator(Some(&slopes));
                        Ok(solve_linear(&op.implicit_system(&prev, dt))?.values)
                    })?;
                    raw.push(Field::new(u, ts.time_at(k)));
                }
            }
            raw.into_iter()
                .map(|f| Field::new(masked(grid, f.values), f.time))
                .collect()
        }
    };
    Ok(ReferenceSolution {
        grid: grid.clone(),
        frames,
        steady: matches!(mode, Mode::Steady),
        assembly: asm,
        uptake: uptake.clone(),
    })
}

impl ReferenceSolution {
    pub fn final_field(&self) -> &Field {
        self.frames.last().unwrap()
    }

    /// Values on one axial layer, from radius index `i0` outward.
    fn layer(&self, values: &[f64], j: usize, i0: usize) -> Vec<f64> {
        (i0..self.grid.nr())
            .map(|i| values[self.grid.index(i, j)])
            .collect()
    }

    fn inner_radius_index(&self, z: f64) -> usize {
        if z < self.grid.l() {
            self.grid.hair_index
        } else {
            0
        }
    }

    /// Bracketing layers and weight of the upper one.
    fn locate(&self, z: f64) -> (usize, usize, f64) {
        let zs = &self.grid.z_nodes;
        let z = z.clamp(zs[0], *zs.last().unwrap());
        let k = zs.partition_point(|&p| p <= z);
        if k >= zs.len() {
            let last = zs.len() - 1;
            return (last, last, 0.0);
        }
        let j = k - 1;
        let t = (z - zs[j]) / (zs[j + 1] - zs[j]);
        (j, j + 1, t)
    }

    /// Radial profile `(r, u)` at height `z` of a given frame, linear in `z` between layers.
    pub fn slice_at(&self, frame: &Field, z: f64) -> Vec<(f64, f64)> {
        let i0 = self.inner_radius_index(z);
        let (j0, j1, t) = self.locate(z);
        let a = self.layer(&frame.values, j0, i0);
        let b = self.layer(&frame.values, j1, i0);
        self.grid.r_nodes[i0..]
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                (
                    r,
                    if t == 0.0 {
                        a[k]
                    } else {
                        a[k] + t * (b[k] - a[k])
                    },
                )
            })
            .collect()
    }

    pub fn slice(&self, z: f64) -> Vec<(f64, f64)> {
        self.slice_at(self.final_field(), z)
    }

    /// `u(r_ε, z)` on the hair surface, `0 ≤ z ≤ L`.
    pub fn surface_profile(&self) -> Vec<(f64, f64)> {
        let v = &self.final_field().values;
        (0..=self.grid.hair_top)
            .map(|j| {
                (
                    self.grid.z_nodes[j],
                    v[self.grid.index(self.grid.hair_index, j)],
                )
            })
            .collect()
    }

    /// Area-weighted cross-section average at height `z` for a given frame.
    pub fn cell_average_at(&self, frame: &Field, z: f64) -> f64 {
        radial_average(&self.slice_at(frame, z))
    }

    /// Hair-zone volume average of the final field.
    pub fn hair_zone_average(&self) -> f64 {
        let g = &self.grid;
        let f = self.final_field();
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..g.hair_top {
            let dz = g.z_nodes[j + 1] - g.z_nodes[j];
            let lo = radial_average(&self.layer_pairs(f, j));
            let hi = radial_average(&self.layer_pairs(f, j + 1));
            num += 0.5 * dz * (lo + hi);
            den += dz;
        }
        num / den
    }

    fn layer_pairs(&self, f: &Field, j: usize) -> Vec<(f64, f64)> {
        let i0 = self.grid.hair_index;
        self.grid.r_nodes[i0..]
            .iter()
            .zip(self.layer(&f.values, j, i0))
            .map(|(r, u)| (*r, u))
            .collect()
    }

    /// Hair, root and boundary fluxes of a frame (no steadiness requirement).
    pub fn fluxes_at(&self, frame: &Field) -> Uptake {
        let u = unmasked(&frame.values);
        let a = &self.assembly;
        let hair: f64 = a
            .hair
            .iter()
            .zip(&u)
            .filter(|(h, _)| **h != 0.0)
            .map(|(h, v)| h * self.uptake.g(*v))
            .sum();
        let root: f64 = a.root.iter().zip(&u).map(|(b, v)| b * v).sum();
        let mut influx = 0.0;
        for &p in &a.boundary_nodes {
            let flux: f64 = a
                .diffusion
                .row_range(p)
                .map(|q| a.diffusion.get(p, q) * u[q])
                .sum();
            influx += flux + a.root[p] * u[p] + a.hair[p] * self.uptake.g(u[p]);
        }
        Uptake {
            hair: 2.0 * PI * hair,
            root: 2.0 * PI * root,
            influx: 2.0 * PI * influx,
        }
    }

    /// Discrete mass `∫u` of a frame over the cell.
    pub fn mass_at(&self, frame: &Field) -> f64 {
        2.0 * PI
            * unmasked(&frame.values)
                .iter()
                .zip(&self.assembly.mass)
                .map(|(u, m)| u * m)
                .sum::<f64>()
    }
}

/// Average of a radial profile over the annulus it spans, exact for `a + b r²`.
pub fn radial_average(profile: &[(f64, f64)]) -> f64 {
    let mut num = 0.0;
    for w in profile.windows(2) {
        let ds = w[1].0 * w[1].0 - w[0].0 * w[0].0;
        num += 0.5 * (w[0].1 + w[1].1) * ds;
    }
    let (r0, r1) = (profile[0].0, profile.last().unwrap().0);
    num / (r1 * r1 - r0 * r0)
}

/// Area-weighted L² distance between two profiles on the same radii, normalised by the area.
pub fn radial_l2(profile: &[(f64, f64)], other: &[f64]) -> f64 {
    let sq: Vec<(f64, f64)> = profile
        .iter()
        .zip(other)
        .map(|((r, u), v)| (*r, (u - v) * (u - v)))
        .collect();
    radial_average(&sq).max(0.0).sqrt()
}

pub fn cell_average_profile(solution: &ReferenceSolution, z: f64) -> f64 {
    solution.cell_average_at(solution.final_field(), z)
}

pub fn total_uptake(solution: &ReferenceSolution) -> Result<Uptake> {
    if !solution.steady {
        return Err(Error::Mode(
            "uptake balance is defined for steady solutions".into(),
        ));
    }
    Ok(solution.fluxes_at(solution.final_field()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::grid::{build_axi_grid, RadialGrading};
    use crate::scenario::{HairSize, Regime};

    fn scenario() -> Scenario {
        Scenario::baseline(Regime::FullReference, HairSize::RadiusRatio(0.01))
    }

    #[test]
    fn no_uptake_gives_unit_field() {
        let mut s = scenario();
        s.kappa = 0.0;
        let g = build_axi_grid(&s, 16, 16, RadialGrading::Logarithmic).unwrap();
        let sol = solve_reference(&s, &g).unwrap();
        for (v, hole) in sol.final_field().values.iter().zip(&g.hole_mask) {
            if *hole {
                assert!(v.is_nan());
            } else {
                assert!((v - 1.0).abs() < 1e-13);
            }
        }
        let up = total_uptake(&sol).unwrap();
        assert!(up.hair.abs() < 1e-12 && up.root.abs() < 1e-12 && up.influx.abs() < 1e-10);
    }

    #[test]
    fn averages_are_exact_for_quadratics() {
        let profile: Vec<(f64, f64)> = (0..=10)
            .map(|k| (0.1 * k as f64, 0.01 * (k * k) as f64))
            .collect();
        assert!((radial_average(&profile) - 0.5).abs() < 1e-15);
        let c: Vec<(f64, f64)> = (0..=10).map(|k| (0.2 + 0.05 * k as f64, 3.0)).collect();
        assert!((radial_average(&c) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn flux_balance_and_bounds() {
        let mut s = scenario();
        s.beta = 0.5;
        let g = build_axi_grid(&s, 24, 32, RadialGrading::Logarithmic).unwrap();
        let sol = solve_reference(&s, &g).unwrap();
        let up = total_uptake(&sol).unwrap();
        assert!(up.imbalance() <= 1e-10 * up.influx);
        assert!(sol
            .final_field()
            .values
            .iter()
            .filter(|v| !v.is_nan())
            .all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn doubling_kappa_increases_uptake_sublinearly() {
        let s = scenario();
        let g = build_axi_grid(&s, 24, 32, RadialGrading::Logarithmic).unwrap();
        let u1 = total_uptake(&solve_reference(&s, &g).unwrap())
            .unwrap()
            .hair;
        let mut s2 = s.clone();
        s2.kappa = 2.0;
        let u2 = total_uptake(&solve_reference(&s2, &g).unwrap())
            .unwrap()
            .hair;
        assert!(u2 > u1 && u2 < 2.0 * u1);
    }
}
