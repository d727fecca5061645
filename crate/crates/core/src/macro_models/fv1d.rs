//! Vertex-centred finite volumes in x₃.

use crate::numerics::{BandMatrix, Grid1D, SpatialOperator};
use crate::scenario::TopBoundary;

/// `−D u''` with root uptake `β u` at x₃=0. A Dirichlet top fixes the last node; otherwise the
/// last face carries no flux.
pub fn diffusion_operator(grid: &Grid1D, d_u: f64, beta: f64, top: TopBoundary) -> SpatialOperator {
    let n = grid.len();
    let mut k = BandMatrix::zeros(n, 1);
    for (i, h) in grid.spacing().iter().enumerate() {
        let c = d_u / h;
        k.add(i, i, c);
        k.add(i + 1, i + 1, c);
        k.add(i, i + 1, -c);
        k.add(i + 1, i, -c);
    }
    k.add(0, 0, beta);
    let dirichlet = match top {
        TopBoundary::Dirichlet(v) => vec![(n - 1, v)],
        TopBoundary::ZeroFlux => vec![],
    };
    SpatialOperator {
        mass: grid.dual_volumes(),
        stiffness: k,
        forcing: vec![0.0; n],
        dirichlet,
    }
}

/// Part of every control volume that lies in the hair zone `[0, L]`.
pub fn hair_volumes(grid: &Grid1D) -> Vec<f64> {
    let mut v = vec![0.0; grid.len()];
    for (i, h) in grid
        .spacing()
        .iter()
        .enumerate()
        .take(grid.interface_index())
    {
        v[i] += 0.5 * h;
        v[i + 1] += 0.5 * h;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::solve_linear;

    #[test]
    fn reproduces_quadratic_laplacian() {
        let g = Grid1D::from_nodes(vec![0.0, 0.1, 0.25, 0.3, 0.6, 1.0], 3).unwrap();
        let op = diffusion_operator(&g, 1.0, 0.0, TopBoundary::ZeroFlux);
        let u: Vec<f64> = g.nodes().iter().map(|x| x * x).collect();
        let ku = op.stiffness.matvec(&u);
        // Interior rows of −(x²)'' integrate to −2 over each control volume.
        for i in 1..g.len() - 1 {
            assert!((ku[i] + 2.0 * op.mass[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn reaction_problem_matches_cosh() {
        // u'' = u, u(0)=1 fixed through the mirrored top, u'(1)=0.
        let n = 1024;
        let g = Grid1D::uniform(1.0, n).unwrap();
        let mut op = diffusion_operator(&g, 1.0, 0.0, TopBoundary::ZeroFlux);
        let vols = g.dual_volumes();
        op.stiffness.add_diagonal(&vols);
        op.dirichlet.push((0, 1.0));
        let u = solve_linear(&op.steady_system()).unwrap().values;
        let err = g
            .nodes()
            .iter()
            .zip(&u)
            .map(|(x, v)| (v - (1.0 - x).cosh() / 1f64.cosh()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "err {err}");
    }

    #[test]
    fn hair_volumes_sum_to_l() {
        let g = Grid1D::piecewise_uniform(0.5, 1.0, 20).unwrap();
        let total: f64 = hair_volumes(&g).iter().sum();
        assert!((total - 0.5).abs() < 1e-15);
    }
}
