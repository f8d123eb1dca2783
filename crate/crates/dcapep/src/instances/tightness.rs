//! The one-dimensional worst-case family on which the gradient-gap rate is
//! attained exactly: a piecewise linear/quadratic smooth f1 and a max-of-
//! affine f2, with breakpoints alpha_i = i - U, beta_i = i - 1 and
//! U = sqrt(2/(L1 (N+1))).
//!
//! Started at x^1 = N+1 with the minimal-subgradient selection for f2 and
//! the leftmost-minimizer subproblem rule, the run realizes x^k = N+2-k and
//! a constant gradient gap |g1^k - g2^k| = sqrt(2 L1/(N+1)).

use nalgebra::DVector;

use super::{scalar, ArgminOracle, ConvexOracle, DcInstance, Eval};
use crate::error::{Error, Result};
use crate::params::FunctionClassParams;

/// Breakpoint data of the construction.
#[derive(Debug, Clone)]
pub struct TightnessExampleParams {
    pub l1: f64,
    pub n: usize,
    /// U = sqrt(2/(L1(N+1))), must be < 1.
    pub u: f64,
    /// alpha_i = i - U for i in 1..=N+1.
    pub alpha: Vec<f64>,
    /// beta_i = i - 1 for i in 1..=N+1.
    pub beta: Vec<f64>,
}

/// U = sqrt(2/(L1(N+1))).
pub fn tightness_u(l1: f64, n: usize) -> f64 {
    (2.0 / (l1 * (n as f64 + 1.0))).sqrt()
}

impl TightnessExampleParams {
    pub fn new(l1: f64, n: usize) -> Result<Self> {
        if !(l1.is_finite() && l1 > 0.0) {
            return Err(Error::InvalidInstance(format!(
                "L1 must be a positive real, got {l1}"
            )));
        }
        let u = tightness_u(l1, n);
        if u >= 1.0 {
            return Err(Error::InvalidInstance(format!(
                "precondition U = sqrt(2/(L1(N+1))) < 1 violated: U = {u} for L1 = {l1}, N = {n}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInstance("N must be positive".into()));
        }
        let alpha = (1..=n + 1).map(|i| i as f64 - u).collect();
        let beta = (1..=n + 1).map(|i| i as f64 - 1.0).collect();
        Ok(Self { l1, n, u, alpha, beta })
    }
}

struct TightF1 {
    l1: f64,
    n: usize,
    u: f64,
}

impl TightF1 {
    /// (value, gradient); f1 is C^1 so the gradient is unique.
    fn value_grad(&self, x: f64) -> (f64, f64) {
        let (l1, u) = (self.l1, self.u);
        if x < 0.0 {
            return (0.5 * l1 * x * x, l1 * x);
        }
        // candidate piece index: x in [beta_i, beta_{i+1}) = [i-1, i)
        let mut i = x.floor() as i64 + 1;
        let nmax = self.n as i64 + 1;
        if i > nmax {
            i = nmax; // last quadratic branch extends to +inf
        }
        let fi = i as f64;
        if x < fi - u && i <= nmax {
            // linear branch on [beta_i, alpha_i)
            let beta = fi - 1.0;
            let v = l1 * u * beta * (x - beta) + beta * l1 * u * u / 2.0
                + beta * (beta - 1.0) * l1 * u / 2.0;
            (v, l1 * u * beta)
        } else {
            // quadratic branch on [alpha_i, beta_{i+1})
            let c = fi * (1.0 - u);
            let v = 0.5 * l1 * (x - c) * (x - c) + l1 * u * fi * (fi - 1.0) * (1.0 - u) / 2.0;
            (v, l1 * (x - c))
        }
    }
}

impl ConvexOracle for TightF1 {
    fn value(&self, x: &DVector<f64>) -> f64 {
        match scalar(x) {
            Ok(t) => self.value_grad(t).0,
            Err(_) => f64::INFINITY,
        }
    }

    fn eval(&self, x: &DVector<f64>) -> Result<Eval> {
        let t = scalar(x)?;
        let (v, g) = self.value_grad(t);
        Ok(Eval {
            value: v,
            subgradient: DVector::from_vec(vec![g]),
        })
    }
}

struct TightF2 {
    l1: f64,
    n: usize,
    u: f64,
}

impl TightF2 {
    /// Max of the affine pieces c_i(x) = L1 U (i-1)(x - i/2): piece i is
    /// active on [i-1, i], so the active index is ceil(x) (clamped), which
    /// at the integer breakpoints lands on the left piece and realizes the
    /// minimal-subgradient selection. Resolving ties structurally keeps
    /// the run's subgradient sequence exact; comparing floating-point
    /// piece values at a breakpoint can be off by one rounding.
    fn value_grad(&self, x: f64) -> (f64, f64) {
        let lu = self.l1 * self.u;
        let i = (x.ceil() as i64).clamp(1, self.n as i64 + 1) as f64;
        let s = lu * (i - 1.0);
        (s * (x - i / 2.0), s)
    }
}

impl ConvexOracle for TightF2 {
    fn value(&self, x: &DVector<f64>) -> f64 {
        match scalar(x) {
            Ok(t) => self.value_grad(t).0,
            Err(_) => f64::INFINITY,
        }
    }

    fn eval(&self, x: &DVector<f64>) -> Result<Eval> {
        let t = scalar(x)?;
        let (v, g) = self.value_grad(t);
        Ok(Eval {
            value: v,
            subgradient: DVector::from_vec(vec![g]),
        })
    }
}

/// Leftmost minimizer of f1(x) - g x, by inverting the (nondecreasing,
/// piecewise linear) gradient of f1. Multiples of L1*U map to the exact
/// integer left endpoints of the flat gradient segments.
struct TightArgmin {
    l1: f64,
    n: usize,
    u: f64,
}

impl ArgminOracle for TightArgmin {
    fn solve(&self, _x: &DVector<f64>, g2: &DVector<f64>) -> Result<DVector<f64>> {
        let g = scalar(g2)?;
        let (l1, u) = (self.l1, self.u);
        let lu = l1 * u;
        let x = if g < 0.0 {
            g / l1
        } else {
            let t = g / lu;
            let m = t.round();
            if (t - m).abs() <= 1e-9 * t.max(1.0) && m >= 0.0 && m <= self.n as f64 {
                // flat segment [beta_{m+1}, alpha_{m+1}]; leftmost point is
                // the integer m itself
                m
            } else {
                let i = (t.floor() as i64 + 1).min(self.n as i64 + 1) as f64;
                g / l1 + i * (1.0 - u)
            }
        };
        Ok(DVector::from_vec(vec![x]))
    }
}

/// Builds the tightness instance for given `L1` and `N`.
///
/// f_star = 0, the suggested start is x^1 = N+1, and f(x^1) = 1.
pub fn make_tightness_instance(l1: f64, n: usize) -> Result<DcInstance> {
    let p = TightnessExampleParams::new(l1, n)?;
    let f1 = Box::new(TightF1 { l1, n, u: p.u });
    let f2 = Box::new(TightF2 { l1, n, u: p.u });
    let argmin = Box::new(TightArgmin { l1, n, u: p.u });
    DcInstance::new(
        f1,
        f2,
        argmin,
        FunctionClassParams::smooth(0.0, l1)?,
        FunctionClassParams::nonsmooth(0.0)?,
        0.0,
        1,
        "tightness",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_u_at_least_one() {
        assert!(make_tightness_instance(1.0, 1).is_err()); // U = 1
        let err = TightnessExampleParams::new(0.5, 1).unwrap_err();
        assert!(err.to_string().contains("U = sqrt(2/(L1(N+1))) < 1"));
    }

    #[test]
    fn breakpoints_strictly_increasing() {
        let p = TightnessExampleParams::new(8.0, 3).unwrap();
        assert!((p.u - 0.25).abs() < 1e-15);
        for i in 0..p.alpha.len() {
            assert!(p.beta[i] < p.alpha[i]);
            if i + 1 < p.beta.len() {
                assert!(p.alpha[i] < p.beta[i + 1]);
            }
        }
    }

    #[test]
    fn start_value_is_one_and_fstar_zero() {
        let inst = make_tightness_instance(8.0, 3).unwrap();
        let x1 = DVector::from_vec(vec![4.0]);
        let f = inst.objective(&x1);
        assert!((f - 1.0).abs() < 1e-12, "f(x1) = {f}");
        assert_eq!(inst.f_star(), 0.0);
    }

    #[test]
    fn continuity_and_convexity_at_breakpoints() {
        let p = TightnessExampleParams::new(8.0, 3).unwrap();
        let f1 = TightF1 { l1: p.l1, n: p.n, u: p.u };
        let h = 1e-7;
        let mut pts: Vec<f64> = Vec::new();
        pts.extend(&p.alpha);
        pts.extend(&p.beta);
        pts.push(0.0);
        for &b in &pts {
            let (vl, gl) = f1.value_grad(b - h);
            let (vr, gr) = f1.value_grad(b + h);
            assert!((vl - vr).abs() < 1e-5, "value jump at {b}");
            assert!(gr >= gl - 1e-9, "slope decrease at {b}");
        }
    }

    #[test]
    fn objective_min_zero_on_flat_region() {
        let inst = make_tightness_instance(8.0, 3).unwrap();
        let p = TightnessExampleParams::new(8.0, 3).unwrap();
        let mut min_v = f64::INFINITY;
        let mut t = 0.0;
        while t <= 4.0 {
            let v = inst.objective(&DVector::from_vec(vec![t]));
            min_v = min_v.min(v);
            if t > 1.0 - p.u + 1e-4 {
                assert!(v > -1e-8, "objective dips below 0 at {t}: {v}");
            }
            t += 1e-4;
        }
        assert!(min_v.abs() < 1e-8);
        // attained on [0, 1-U]
        let v_flat = inst.objective(&DVector::from_vec(vec![0.5 * (1.0 - p.u)]));
        assert!(v_flat.abs() < 1e-12);
    }
}
