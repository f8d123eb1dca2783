//! DC-instance model: a pair of convex-function oracles, an exact subproblem
//! solver, declared class parameters, and a known lower bound of f1 - f2.
//!
//! Oracles return exactly one subgradient; the selection rule at kinks is
//! owned by the instance, since the worst-case constructions depend on a
//! specific selection. The subproblem solver is likewise instance-supplied
//! and exact, so runs are not polluted by inner-solver tolerances.

mod counterexample;
mod pl_quadratic;
mod quadratic;
mod tightness;

pub use counterexample::make_nonsmooth_counterexample;
pub use pl_quadratic::{make_pl_quadratic_instance, pl_modulus_for_quadratics};
pub use quadratic::{make_quadratic_instance, make_quadratic_instance_with};
pub use tightness::{make_tightness_instance, tightness_u, TightnessExampleParams};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::params::FunctionClassParams;

/// Value and one subgradient of a convex function at a point.
#[derive(Debug, Clone)]
pub struct Eval {
    pub value: f64,
    pub subgradient: DVector<f64>,
}

/// Black-box first-order oracle for one convex component.
pub trait ConvexOracle: Send + Sync {
    /// Extended value; `+inf` outside the effective domain.
    fn value(&self, x: &DVector<f64>) -> f64;

    /// Value plus one subgradient. Errors where the subdifferential is empty
    /// or the point lies outside the domain.
    fn eval(&self, x: &DVector<f64>) -> Result<Eval>;
}

/// Exact solver of the linearized subproblem
/// `argmin_x f1(x) - <g2, x>` (constant terms dropped).
pub trait ArgminOracle: Send + Sync {
    fn solve(&self, x: &DVector<f64>, g2: &DVector<f64>) -> Result<DVector<f64>>;
}

/// A difference-of-convex instance `f = f1 - f2` with oracles, declared
/// class parameters, and a known lower bound `f_star`.
pub struct DcInstance {
    f1: Box<dyn ConvexOracle>,
    f2: Box<dyn ConvexOracle>,
    argmin: Box<dyn ArgminOracle>,
    params1: FunctionClassParams,
    params2: FunctionClassParams,
    f_star: f64,
    dimension: usize,
    label: String,
}

impl DcInstance {
    pub fn new(
        f1: Box<dyn ConvexOracle>,
        f2: Box<dyn ConvexOracle>,
        argmin: Box<dyn ArgminOracle>,
        params1: FunctionClassParams,
        params2: FunctionClassParams,
        f_star: f64,
        dimension: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInstance("dimension must be positive".into()));
        }
        if !f_star.is_finite() {
            return Err(Error::InvalidInstance(format!(
                "f_star must be finite, got {f_star}"
            )));
        }
        // Standing assumptions L1 > mu2 and L2 > mu1: outside them the
        // problem is concave (unbounded) or outright convex.
        if !params1.l.gt(params2.mu) {
            return Err(Error::InvalidInstance(format!(
                "standing assumption L1 > mu2 violated: L1 = {}, mu2 = {}",
                params1.l, params2.mu
            )));
        }
        if !params2.l.gt(params1.mu) {
            return Err(Error::InvalidInstance(format!(
                "standing assumption L2 > mu1 violated: L2 = {}, mu1 = {}",
                params2.l, params1.mu
            )));
        }
        Ok(Self {
            f1,
            f2,
            argmin,
            params1,
            params2,
            f_star,
            dimension,
            label: label.into(),
        })
    }

    pub fn f1(&self) -> &dyn ConvexOracle {
        self.f1.as_ref()
    }

    pub fn f2(&self) -> &dyn ConvexOracle {
        self.f2.as_ref()
    }

    pub fn solve_subproblem(&self, x: &DVector<f64>, g2: &DVector<f64>) -> Result<DVector<f64>> {
        self.argmin.solve(x, g2)
    }

    pub fn params1(&self) -> &FunctionClassParams {
        &self.params1
    }

    pub fn params2(&self) -> &FunctionClassParams {
        &self.params2
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Extended objective value `f1(x) - f2(x)`.
    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        let v1 = self.f1.value(x);
        if v1 == f64::INFINITY {
            return f64::INFINITY;
        }
        v1 - self.f2.value(x)
    }
}

/// Max of affine pieces `slope_i * x + intercept_i` in one dimension,
/// returning `(value, slope of the first maximizer)`.
///
/// Pieces must be ordered so that "first maximizer" implements the intended
/// subgradient selection: ascending slopes give the minimal subgradient,
/// descending slopes the maximal one.
pub(crate) fn max_affine(pieces: impl Iterator<Item = (f64, f64)>, x: f64) -> (f64, f64) {
    let mut best = f64::NEG_INFINITY;
    let mut slope = 0.0;
    for (s, c) in pieces {
        let v = s * x + c;
        if v > best {
            best = v;
            slope = s;
        }
    }
    (best, slope)
}

pub(crate) fn scalar(x: &DVector<f64>) -> Result<f64> {
    if x.len() != 1 {
        return Err(Error::OracleFailure {
            point: x.iter().copied().collect(),
            reason: format!("expected a 1-dimensional point, got dimension {}", x.len()),
        });
    }
    Ok(x[0])
}
