//! Nonsmooth DC decomposition on which the gradient-gap stopping rule never
//! fires: both components are countable maxima of affine pieces,
//!
//!   f1(x) = max_n { -n x + 2 - 2^{1-n} },   f2(x) = max_n { -(n+1) x + 2 - 2^{1-n} },
//!
//! restricted to x >= 0 by the extended-value convention (the max diverges
//! for x < 0). With the maximal-subgradient selection and the leftmost
//! minimizer, a run from x^1 = 1 halves the iterate each step while
//! |g1^k - g2^k| = 1 forever; the model-decrease measure is 0 at every step.
//!
//! The infinite max is truncated at `max_terms`; the truncation is exact for
//! points x >= 2^(1-max_terms), and the subgradient oracles refuse to answer
//! below that threshold rather than return inexact data.

use nalgebra::DVector;

use super::{max_affine, scalar, ArgminOracle, ConvexOracle, DcInstance, Eval};
use crate::error::{Error, Result};
use crate::params::FunctionClassParams;

fn intercept(n: i32) -> f64 {
    2.0 - 2f64.powi(1 - n)
}

struct CountFn {
    /// extra slope: 0 for f1 (pieces -n), 1 for f2 (pieces -(n+1))
    shift: i32,
    max_terms: i32,
}

impl CountFn {
    /// Pieces in descending slope order; the first maximizer is then the
    /// maximal subgradient.
    fn pieces(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..=self.max_terms).map(move |n| (-f64::from(n + self.shift), intercept(n)))
    }

    fn exactness_threshold(&self) -> f64 {
        2f64.powi(1 - self.max_terms)
    }
}

impl ConvexOracle for CountFn {
    fn value(&self, x: &DVector<f64>) -> f64 {
        let t = match scalar(x) {
            Ok(t) => t,
            Err(_) => return f64::INFINITY,
        };
        if t < 0.0 {
            return f64::INFINITY;
        }
        max_affine(self.pieces(), t).0
    }

    fn eval(&self, x: &DVector<f64>) -> Result<Eval> {
        let t = scalar(x)?;
        if t < 0.0 {
            return Err(Error::OracleFailure {
                point: vec![t],
                reason: "outside the effective domain (x < 0, extended value +inf)".into(),
            });
        }
        if t < self.exactness_threshold() {
            return Err(Error::OracleFailure {
                point: vec![t],
                reason: format!(
                    "below the truncation threshold 2^(1-max_terms) = {}; increase max_terms",
                    self.exactness_threshold()
                ),
            });
        }
        let (v, s) = max_affine(self.pieces(), t);
        Ok(Eval {
            value: v,
            subgradient: DVector::from_vec(vec![s]),
        })
    }
}

/// Leftmost minimizer of f1(x) - g x. For g = -m the minimizing set is the
/// segment [2^-m, 2^(1-m)], whose left end is returned exactly.
struct CountArgmin {
    max_terms: i32,
}

impl ArgminOracle for CountArgmin {
    fn solve(&self, _x: &DVector<f64>, g2: &DVector<f64>) -> Result<DVector<f64>> {
        let g = scalar(g2)?;
        let s = -g; // f1(x) + s x is minimized
        if s < 0.0 {
            return Err(Error::OracleFailure {
                point: vec![g],
                reason: "subproblem unbounded below for g2 > 0".into(),
            });
        }
        if s == 0.0 {
            // f1 = 0 on [1, inf); leftmost minimizer
            return Ok(DVector::from_vec(vec![1.0]));
        }
        let m = s.round();
        let idx = if (s - m).abs() <= 1e-9 * s.max(1.0) {
            m
        } else {
            s.floor()
        };
        if idx > f64::from(self.max_terms) {
            return Err(Error::OracleFailure {
                point: vec![g],
                reason: format!(
                    "argmin 2^-{idx} lies below the truncation threshold; increase max_terms"
                ),
            });
        }
        Ok(DVector::from_vec(vec![2f64.powi(-(idx as i32))]))
    }
}

/// Builds the truncated counterexample instance. f_star = 0 (the infimum,
/// approached as x -> 0+ but not attained), f(1) = 1.
pub fn make_nonsmooth_counterexample(max_terms: usize) -> Result<DcInstance> {
    if max_terms < 2 {
        return Err(Error::InvalidInstance(
            "max_terms must be at least 2".into(),
        ));
    }
    if max_terms > 1000 {
        return Err(Error::InvalidInstance(
            "max_terms beyond 1000 exceeds f64 exponent range".into(),
        ));
    }
    let m = max_terms as i32;
    let f1 = Box::new(CountFn { shift: 0, max_terms: m });
    let f2 = Box::new(CountFn { shift: 1, max_terms: m });
    let argmin = Box::new(CountArgmin { max_terms: m });
    DcInstance::new(
        f1,
        f2,
        argmin,
        FunctionClassParams::nonsmooth(0.0)?,
        FunctionClassParams::nonsmooth(0.0)?,
        0.0,
        1,
        "nonsmooth-counterexample",
    )
}
