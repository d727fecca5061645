use crate::error::{Error, Result};

const MAX_ITER: usize = 100;

/// Plain Newton iteration; stops when `|f(x)| ≤ tol`.
pub fn newton_scalar<F, D>(f: F, df: D, x0: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = x0;
    let mut fx = f(x);
    for _ in 0..MAX_ITER {
        if fx.abs() <= tol {
            return Ok(x);
        }
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        x -= fx / d;
        fx = f(x);
    }
    if fx.abs() <= tol {
        return Ok(x);
    }
    Err(Error::NoConvergence {
        what: "Newton iteration",
        iterations: MAX_ITER,
        last: x,
        residual: fx.abs(),
    })
}

/// Newton kept inside `[lo, hi]` with bisection whenever a step leaves the bracket.
/// `f` must change sign over the bracket and be increasing.
pub fn newton_bracketed<F, D>(f: F, df: D, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    if fa.abs() <= tol {
        return Ok(a);
    }
    let fb = f(b);
    if fb.abs() <= tol {
        return Ok(b);
    }
    if fa > 0.0 || fb < 0.0 {
        return Err(Error::InvalidModel(format!(
            "closure map is not increasing over [{lo}, {hi}]"
        )));
    }
    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    for _ in 0..4 * MAX_ITER {
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if d > 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        fx = f(x);
        if b - a <= f64::EPSILON * b.abs().max(1.0) {
            break;
        }
    }
    if fx.abs() <= tol {
        return Ok(x);
    }
    Err(Error::NoConvergence {
        what: "bracketed Newton iteration",
        iterations: 4 * MAX_ITER,
        last: x,
        residual: fx.abs(),
    })
}
