//! Banded storage, elimination without pivoting, and a Jacobi-preconditioned CG fallback.

use crate::error::{Error, Result};

/// Square matrix with `bw` sub- and super-diagonals, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (2 * bw + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i.abs_diff(j) > self.bw || i >= self.n || j >= self.n {
            return None;
        }
        Some(i * (2 * self.bw + 1) + self.bw + j - i)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("entry ({i},{j}) outside the band"));
        self.data[k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("entry ({i},{j}) outside the band"));
        self.data[k] += v;
    }

    /// Column range of row `i` inside the band.
    #[inline]
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.bw)..(i + self.bw + 1).min(self.n)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// `self + s·other` for matrices of equal size.
    pub fn add_scaled(&self, s: f64, other: &BandMatrix) -> BandMatrix {
        assert_eq!(self.n, other.n);
        let bw = self.bw.max(other.bw);
        let mut out = BandMatrix::zeros(self.n, bw);
        for i in 0..self.n {
            for j in self.row_range(i) {
                out.add(i, j, self.get(i, j));
            }
            for j in other.row_range(i) {
                out.add(i, j, s * other.get(i, j));
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> BandMatrix {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn add_diagonal(&mut self, d: &[f64]) {
        for (i, v) in d.iter().enumerate() {
            self.add(i, i, *v);
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}

/// Dirichlet row replacement kept for later flux recovery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcRow {
    pub row: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: BandMatrix,
    pub rhs: Vec<f64>,
    pub bc_rows: Vec<BcRow>,
}

impl LinearSystem {
    pub fn new(matrix: BandMatrix, rhs: Vec<f64>) -> Self {
        assert_eq!(matrix.dim(), rhs.len(), "matrix and rhs sizes differ");
        Self {
            matrix,
            rhs,
            bc_rows: Vec::new(),
        }
    }

    /// Fix `u[row] = value`, moving the column to the right-hand side so symmetry is kept.
    pub fn set_dirichlet(&mut self, row: usize, value: f64) {
        let range = self.matrix.row_range(row);
        for i in range.clone() {
            if i != row {
                let a = self.matrix.get(i, row);
                if a != 0.0 {
                    self.rhs[i] -= a * value;
                    self.matrix.set(i, row, 0.0);
                }
            }
        }
        for j in range {
            self.matrix.set(row, j, 0.0);
        }
        self.matrix.set(row, row, 1.0);
        self.rhs[row] = value;
        self.bc_rows.push(BcRow { row, value });
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Above this many unknowns the iterative solver is used.
    pub direct_max_unknowns: usize,
    pub rel_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            direct_max_unknowns: 400_000,
            rel_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub values: Vec<f64>,
    /// Achieved `‖Ax − b‖∞`.
    pub residual: f64,
}

pub fn residual_inf(a: &BandMatrix, x: &[f64], b: &[f64]) -> f64 {
    a.matvec(x)
        .iter()
        .zip(b)
        .map(|(ax, bi)| (ax - bi).abs())
        .fold(0.0, f64::max)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn solve_linear(system: &LinearSystem) -> Result<LinearSolution> {
    solve_linear_with(system, &SolveOptions::default())
}

pub fn solve_linear_with(system: &LinearSystem, opts: &SolveOptions) -> Result<LinearSolution> {
    let a = &system.matrix;
    let b = &system.rhs;
    let tol = opts.rel_tol * inf_norm(b);
    let values = if a.dim() <= opts.direct_max_unknowns {
        let lu = BandLu::factor(a)?;
        lu.solve_refined(a, b, tol)
    } else {
        conjugate_gradient(a, b, opts.rel_tol * 1e-2, 20 * a.dim() + 100)
    };
    let residual = residual_inf(a, &values, b);
    if !(residual <= tol) {
        return Err(Error::Solver {
            residual,
            tolerance: tol,
        });
    }
    Ok(LinearSolution { values, residual })
}

/// LU factors stored in a band of the same width (no pivoting).
#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
}

impl BandLu {
    pub fn factor(a: &BandMatrix) -> Result<Self> {
        let mut lu = a.clone();
        let n = lu.n;
        let bw = lu.bw;
        let stride = 2 * bw + 1;
        for k in 0..n {
            let piv = lu.data[k * stride + bw];
            if !(piv.abs() > 0.0) || !piv.is_finite() {
                return Err(Error::Solver {
                    residual: f64::INFINITY,
                    tolerance: 0.0,
                });
            }
            let last = (k + bw).min(n - 1);
            for i in k + 1..=last {
                let ik = i * stride + bw + k - i;
                let lik = lu.data[ik];
                if lik == 0.0 {
                    continue;
                }
                let l = lik / piv;
                lu.data[ik] = l;
                for j in k + 1..=last {
                    let kj = lu.data[k * stride + bw + j - k];
                    if kj != 0.0 {
                        lu.data[i * stride + bw + j - i] -= l * kj;
                    }
                }
            }
        }
        Ok(Self { lu })
    }

    pub fn dim(&self) -> usize {
        self.lu.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n;
        let bw = self.lu.bw;
        let stride = 2 * bw + 1;
        let d = &self.lu.data;
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for j in i.saturating_sub(bw)..i {
                s -= d[i * stride + bw + j - i] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..(i + bw + 1).min(n) {
                s -= d[i * stride + bw + j - i] * x[j];
            }
            x[i] = s / d[i * stride + bw];
        }
        x
    }

    /// Solve followed by up to three refinement sweeps against the original matrix.
    pub fn solve_refined(&self, a: &BandMatrix, b: &[f64], tol: f64) -> Vec<f64> {
        let mut x = self.solve(b);
        for _ in 0..3 {
            let r: Vec<f64> = a.matvec(&x).iter().zip(b).map(|(ax, bi)| bi - ax).collect();
            if inf_norm(&r) <= 0.01 * tol {
                break;
            }
            let dx = self.solve(&r);
            x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
        }
        x
    }
}

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite band matrices.
pub fn conjugate_gradient(a: &BandMatrix, b: &[f64], rel_tol: f64, max_iter: usize) -> Vec<f64> {
    let n = a.dim();
    let dinv: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|d| if *d != 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let bnorm = inf_norm(b);
    if bnorm == 0.0 {
        return x;
    }
    let mut z: Vec<f64> = r.iter().zip(&dinv).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    for _ in 0..max_iter {
        let ap = a.matvec(&p);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap == 0.0 {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if inf_norm(&r) <= rel_tol * bnorm {
            break;
        }
        for i in 0..n {
            z[i] = r[i] * dinv[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    x
}
