//! One-dimensional quadratic family for the linear-convergence experiments:
//! f1 = (l1/2) x^2, f2 = (c/2) x^2 with 0 <= c < l1. The objective
//! f = ((l1-c)/2) x^2 satisfies the gradient-domination inequality with
//! modulus eta = l1 - c, and each DCA step contracts x by exactly c/l1.

use nalgebra::DVector;

use super::{scalar, ArgminOracle, ConvexOracle, DcInstance, Eval};
use crate::error::{Error, Result};
use crate::params::FunctionClassParams;

struct ScalarQuad {
    a: f64,
}

impl ConvexOracle for ScalarQuad {
    fn value(&self, x: &DVector<f64>) -> f64 {
        match scalar(x) {
            Ok(t) => 0.5 * self.a * t * t,
            Err(_) => f64::INFINITY,
        }
    }

    fn eval(&self, x: &DVector<f64>) -> Result<Eval> {
        let t = scalar(x)?;
        Ok(Eval {
            value: 0.5 * self.a * t * t,
            subgradient: DVector::from_vec(vec![self.a * t]),
        })
    }
}

struct ScalarArgmin {
    l1: f64,
}

impl ArgminOracle for ScalarArgmin {
    fn solve(&self, _x: &DVector<f64>, g2: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(DVector::from_vec(vec![scalar(g2)? / self.l1]))
    }
}

/// The sharpest gradient-domination modulus of f = (l1/2)x^2 - (c/2)x^2.
pub fn pl_modulus_for_quadratics(l1: f64, c: f64) -> f64 {
    l1 - c
}

/// Builds the instance; `c = 0` declares f2 with an infinite smoothness
/// modulus (a constant-gradient function), otherwise L2 = c.
pub fn make_pl_quadratic_instance(l1: f64, c: f64) -> Result<DcInstance> {
    if !(l1.is_finite() && l1 > 0.0) {
        return Err(Error::InvalidInstance(format!(
            "l1 must be a positive real, got {l1}"
        )));
    }
    if !(c.is_finite() && c >= 0.0 && c < l1) {
        return Err(Error::InvalidInstance(format!(
            "need 0 <= c < l1 for a bounded objective, got c = {c}, l1 = {l1}"
        )));
    }
    let params2 = if c == 0.0 {
        FunctionClassParams::nonsmooth(0.0)?
    } else {
        FunctionClassParams::smooth(0.0, c)?
    };
    DcInstance::new(
        Box::new(ScalarQuad { a: l1 }),
        Box::new(ScalarQuad { a: c }),
        Box::new(ScalarArgmin { l1 }),
        FunctionClassParams::smooth(0.0, l1)?,
        params2,
        0.0,
        1,
        "pl-quadratic",
    )
}
