use crate::error::{Error, Result};
use crate::numerics::band::{BandLu, BandMatrix, LinearSystem, SolveOptions};

/// Discrete values with a time stamp. The grid they live on is owned by the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field {
    pub fn new(values: Vec<f64>, time: f64) -> Self {
        Self { values, time }
    }

    pub fn constant(n: usize, value: f64, time: f64) -> Self {
        Self::new(vec![value; n], time)
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| !v.is_nan())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Semi-discrete system `V du/dt = −K u + f` with Dirichlet nodes.
#[derive(Debug, Clone)]
pub struct SpatialOperator {
    /// Lumped mass (control-volume sizes).
    pub mass: Vec<f64>,
    pub stiffness: BandMatrix,
    pub forcing: Vec<f64>,
    pub dirichlet: Vec<(usize, f64)>,
}

impl SpatialOperator {
    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    /// The steady system `K u = f`.
    pub fn steady_system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.stiffness.clone(), self.forcing.clone());
        for &(row, value) in &self.dirichlet {
            sys.set_dirichlet(row, value);
        }
        sys
    }

    /// The backward Euler system `(V + dt K) u = V u_n + dt f`.
    pub fn implicit_system(&self, previous: &[f64], dt: f64) -> LinearSystem {
        self.implicit_system_with(previous, &self.forcing, dt)
    }

    pub fn implicit_system_with(&self, previous: &[f64], forcing: &[f64], dt: f64) -> LinearSystem {
        let mut a = self.stiffness.scaled(dt);
        a.add_diagonal(&self.mass);
        let rhs = self
            .mass
            .iter()
            .zip(previous)
            .zip(forcing)
            .map(|((v, u), f)| v * u + dt * f)
            .collect();
        let mut sys = LinearSystem::new(a, rhs);
        for &(row, value) in &self.dirichlet {
            sys.set_dirichlet(row, value);
        }
        sys
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStepper {
    pub dt: f64,
    pub t_end: f64,
}

impl TimeStepper {
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Mode(format!("time step must be positive, got {dt}")));
        }
        if !(t_end >= dt) {
            return Err(Error::Mode(format!(
                "horizon {t_end} shorter than the step {dt}"
            )));
        }
        Ok(Self { dt, t_end })
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Time after `k` steps, computed without accumulating round-off.
    pub fn time_at(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

pub fn step_backward_euler(state: &Field, operator: &SpatialOperator, dt: f64) -> Result<Field> {
    if !(dt > 0.0) {
        return Err(Error::Mode(format!("time step must be positive, got {dt}")));
    }
    assert_eq!(
        state.values.len(),
        operator.dim(),
        "state and operator sizes differ"
    );
    let sys = operator.implicit_system(&state.values, dt);
    let sol = crate::numerics::band::solve_linear(&sys)?;
    Ok(Field::new(sol.values, state.time + dt))
}

/// Backward Euler with the factorization reused across steps (linear operators only).
#[derive(Debug, Clone)]
pub struct BackwardEuler {
    operator: SpatialOperator,
    dt: f64,
    matrix: BandMatrix,
    lu: BandLu,
    rel_tol: f64,
}

impl BackwardEuler {
    pub fn new(operator: SpatialOperator, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Mode(format!("time step must be positive, got {dt}")));
        }
        let zero = vec![0.0; operator.dim()];
        let sys = operator.implicit_system(&zero, dt);
        let lu = BandLu::factor(&sys.matrix)?;
        Ok(Self {
            operator,
            dt,
            matrix: sys.matrix,
            lu,
            rel_tol: SolveOptions::default().rel_tol,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, state: &Field) -> Result<Field> {
        self.step_with_forcing(state, &self.operator.forcing)
    }

    /// One step with the forcing replaced by its value at the new time level.
    pub fn step_with_forcing(&self, state: &Field, forcing: &[f64]) -> Result<Field> {
        let sys = self
            .operator
            .implicit_system_with(&state.values, forcing, self.dt);
        let tol = self.rel_tol * sys.rhs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let values = self.lu.solve_refined(&self.matrix, &sys.rhs, tol);
        let residual = crate::numerics::band::residual_inf(&self.matrix, &values, &sys.rhs);
        if !(residual <= tol) {
            return Err(Error::Solver {
                residual,
                tolerance: tol,
            });
        }
        Ok(Field::new(values, state.time + self.dt))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(sigma: f64) -> SpatialOperator {
        let mut k = BandMatrix::zeros(1, 0);
        k.set(0, 0, sigma);
        SpatialOperator {
            mass: vec![1.0],
            stiffness: k,
            forcing: vec![0.0],
            dirichlet: vec![],
        }
    }

    #[test]
    fn zero_operator_keeps_state() {
        let op = scalar(0.0);
        let out = step_backward_euler(&Field::new(vec![0.7], 0.0), &op, 0.3).unwrap();
        assert_eq!(out.values, vec![0.7]);
        assert_eq!(out.time, 0.3);
    }

    #[test]
    fn scalar_decay_one_step() {
        let op = scalar(2.0);
        let out = step_backward_euler(&Field::new(vec![1.0], 0.0), &op, 0.1).unwrap();
        assert!((out.values[0] - 1.0 / 1.2).abs() < 1e-15);
        let cached = BackwardEuler::new(op, 0.1).unwrap();
        let out2 = cached.step(&Field::new(vec![1.0], 0.0)).unwrap();
        assert!((out2.values[0] - out.values[0]).abs() < 1e-15);
    }

    #[test]
    fn stepper_counts() {
        let ts = TimeStepper::new(0.01, 1.0).unwrap();
        assert_eq!(ts.n_steps(), 100);
        assert!(TimeStepper::new(0.0, 1.0).is_err());
        assert!(TimeStepper::new(0.5, 0.1).is_err());
    }
}
