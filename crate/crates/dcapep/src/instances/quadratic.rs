//! Convex-quadratic DC instances: f_i(x) = (1/2) x' Q_i x + b_i' x with
//! exact oracles, an exact linear-solve argmin, and class parameters taken
//! from the spectra of Q1 and Q2.

use nalgebra::{DMatrix, DVector};

use super::{ArgminOracle, ConvexOracle, DcInstance, Eval};
use crate::error::{Error, Result};
use crate::params::{FunctionClassParams, Smoothness};

const SYM_TOL: f64 = 1e-12;

struct QuadraticOracle {
    q: DMatrix<f64>,
    b: DVector<f64>,
}

impl ConvexOracle for QuadraticOracle {
    fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * (&self.q * x).dot(x) + self.b.dot(x)
    }

    fn eval(&self, x: &DVector<f64>) -> Result<Eval> {
        Ok(Eval {
            value: self.value(x),
            subgradient: &self.q * x + &self.b,
        })
    }
}

/// Solves Q1 y = g2 - b1 (stationarity of the linearized subproblem).
struct QuadraticArgmin {
    q1_chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    b1: DVector<f64>,
}

impl ArgminOracle for QuadraticArgmin {
    fn solve(&self, _x: &DVector<f64>, g2: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.q1_chol.solve(&(g2 - &self.b1)))
    }
}

fn check_symmetric(q: &DMatrix<f64>, name: &str) -> Result<()> {
    if !q.is_square() {
        return Err(Error::InvalidInstance(format!("{name} must be square")));
    }
    let scale = 1.0 + q.amax();
    for i in 0..q.nrows() {
        for j in 0..i {
            if (q[(i, j)] - q[(j, i)]).abs() > SYM_TOL * scale {
                return Err(Error::InvalidInstance(format!(
                    "{name} is not symmetric at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

fn spectrum_bounds(q: &DMatrix<f64>) -> (f64, f64) {
    let eig = q.clone().symmetric_eigenvalues();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in eig.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Class parameters derived from a Hessian spectrum. A degenerate spectrum
/// (lambda_min = lambda_max = a > 0) is declared in the wider class
/// (a/2, 3a/2) because mu = L is excluded; a zero Hessian declares (0, inf).
fn params_from_spectrum(lo: f64, hi: f64) -> Result<FunctionClassParams> {
    if lo < -SYM_TOL * (1.0 + hi.abs()) {
        return Err(Error::InvalidInstance(format!(
            "Hessian is not positive semidefinite (lambda_min = {lo})"
        )));
    }
    let lo = lo.max(0.0);
    if hi <= 0.0 {
        return FunctionClassParams::nonsmooth(0.0);
    }
    if hi - lo <= SYM_TOL * hi {
        return FunctionClassParams::smooth(0.5 * lo, 1.5 * hi);
    }
    FunctionClassParams::smooth(lo, hi)
}

fn build(
    q1: DMatrix<f64>,
    b1: DVector<f64>,
    q2: DMatrix<f64>,
    b2: DVector<f64>,
    params1: FunctionClassParams,
    params2: FunctionClassParams,
    f_star: f64,
) -> Result<DcInstance> {
    let n = q1.nrows();
    if b1.len() != n || q2.nrows() != n || b2.len() != n {
        return Err(Error::InvalidInstance(
            "Q1, b1, Q2, b2 must share one dimension".into(),
        ));
    }
    let q1_chol = q1.clone().cholesky().ok_or_else(|| {
        Error::InvalidInstance("Q1 must be positive definite for an exact argmin oracle".into())
    })?;
    let f1 = Box::new(QuadraticOracle { q: q1, b: b1.clone() });
    let f2 = Box::new(QuadraticOracle { q: q2, b: b2 });
    let argmin = Box::new(QuadraticArgmin { q1_chol, b1 });
    DcInstance::new(f1, f2, argmin, params1, params2, f_star, n, "quadratic")
}

/// Quadratic DC instance with auto-derived class parameters and lower bound.
///
/// Requires lambda_min(Q1) > lambda_max(Q2) so that f is bounded below with
/// a computable minimum; otherwise the instance is rejected (supply `f_star`
/// through [`make_quadratic_instance_with`] for interleaved spectra).
///
/// The auto-derived mu1 is capped below lambda_max(Q2): the spectra-tight
/// value lambda_min(Q1) would sit above L2 and put the decomposition in
/// the regime where the difference is outright convex; declaring a smaller
/// strong-convexity modulus is still truthful.
pub fn make_quadratic_instance(
    q1: DMatrix<f64>,
    b1: DVector<f64>,
    q2: DMatrix<f64>,
    b2: DVector<f64>,
) -> Result<DcInstance> {
    check_symmetric(&q1, "Q1")?;
    check_symmetric(&q2, "Q2")?;
    let (lo1, hi1) = spectrum_bounds(&q1);
    let (lo2, hi2) = spectrum_bounds(&q2);
    if hi2 >= lo1 {
        return Err(Error::InvalidInstance(format!(
            "unbounded-below risk: lambda_max(Q2) = {hi2} >= lambda_min(Q1) = {lo1} and no f_star supplied"
        )));
    }
    let mut params1 = params_from_spectrum(lo1, hi1)?;
    let params2 = params_from_spectrum(lo2, hi2)?;
    if !params2.l.gt(params1.mu) {
        let capped = match params2.l {
            Smoothness::Finite(l2) => 0.9 * l2,
            Smoothness::Infinite => params1.mu,
        };
        params1 = FunctionClassParams::new(capped.min(params1.mu), params1.l)?;
    }
    // Q1 - Q2 is positive definite here, so the minimizer is a linear solve.
    let qd = &q1 - &q2;
    let bd = &b1 - &b2;
    let x_star = qd
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidInstance("Q1 - Q2 not positive definite".into()))?
        .solve(&(-&bd));
    let f_star = 0.5 * (&qd * &x_star).dot(&x_star) + bd.dot(&x_star);
    build(q1, b1, q2, b2, params1, params2, f_star)
}

/// Quadratic DC instance with caller-supplied class parameters and lower
/// bound. Parameters are validated against the spectra (the function must
/// genuinely belong to the declared classes).
pub fn make_quadratic_instance_with(
    q1: DMatrix<f64>,
    b1: DVector<f64>,
    q2: DMatrix<f64>,
    b2: DVector<f64>,
    params1: FunctionClassParams,
    params2: FunctionClassParams,
    f_star: f64,
) -> Result<DcInstance> {
    check_symmetric(&q1, "Q1")?;
    check_symmetric(&q2, "Q2")?;
    for (name, q, p) in [("f1", &q1, &params1), ("f2", &q2, &params2)] {
        let (lo, hi) = spectrum_bounds(q);
        let tol = SYM_TOL * (1.0 + hi.abs());
        if p.mu > lo + tol {
            return Err(Error::InvalidInstance(format!(
                "{name}: declared mu = {} exceeds lambda_min = {lo}",
                p.mu
            )));
        }
        if let Smoothness::Finite(l) = p.l {
            if l + tol < hi {
                return Err(Error::InvalidInstance(format!(
                    "{name}: declared L = {l} is below lambda_max = {hi}"
                )));
            }
        }
    }
    build(q1, b1, q2, b2, params1, params2, f_star)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_hand_solve() {
        // f1 = x^2 (Q1 = 2), f2 = x (Q2 = 0, b2 = 1): one DCA step from 0
        // solves 2x = 1.
        let inst = make_quadratic_instance(
            DMatrix::from_vec(1, 1, vec![2.0]),
            DVector::zeros(1),
            DMatrix::from_vec(1, 1, vec![0.0]),
            DVector::from_vec(vec![1.0]),
        )
        .unwrap();
        let x1 = DVector::from_vec(vec![0.0]);
        let g2 = inst.f2().eval(&x1).unwrap().subgradient;
        assert_eq!(g2[0], 1.0);
        let x2 = inst.solve_subproblem(&x1, &g2).unwrap();
        assert!((x2[0] - 0.5).abs() < 1e-15);
        // f = x^2 - x has minimum -1/4 at 1/2
        assert!((inst.f_star() - (-0.25)).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_difference() {
        let r = make_quadratic_instance(
            DMatrix::identity(2, 2),
            DVector::zeros(2),
            DMatrix::identity(2, 2),
            DVector::zeros(2),
        );
        assert!(r.is_err());
    }

    #[test]
    fn identity_hessian_gives_fixed_point_at_zero() {
        let inst = make_quadratic_instance(
            DMatrix::identity(2, 2),
            DVector::zeros(2),
            DMatrix::zeros(2, 2),
            DVector::zeros(2),
        )
        .unwrap();
        assert_eq!(inst.f_star(), 0.0);
        let x1 = DVector::zeros(2);
        let g2 = inst.f2().eval(&x1).unwrap().subgradient;
        let x2 = inst.solve_subproblem(&x1, &g2).unwrap();
        assert_eq!(x2, x1);
    }

    #[test]
    fn rejects_dishonest_declared_class() {
        let r = make_quadratic_instance_with(
            DMatrix::from_vec(1, 1, vec![2.0]),
            DVector::zeros(1),
            DMatrix::from_vec(1, 1, vec![0.0]),
            DVector::zeros(1),
            FunctionClassParams::smooth(0.0, 1.0).unwrap(), // L = 1 < lambda_max = 2
            FunctionClassParams::nonsmooth(0.0).unwrap(),
            0.0,
        );
        assert!(r.is_err());
    }
}
