//! Feasible PEP points extracted from real algorithm runs: any trace on an
//! in-class instance yields a feasible assignment, hence a lower-bound
//! certificate on the PEP optimum.

use nalgebra::DMatrix;

use super::{build, PepKind, PepProblem, PepSpec};
use crate::dca::Trace;
use crate::error::{Error, Result};
use crate::sdpsolve::RowSense;

/// A concrete assignment of the Gram matrix and scalar variables.
#[derive(Debug, Clone)]
pub struct PepAssignment {
    pub gram: DMatrix<f64>,
    pub scalars: Vec<f64>,
}

/// Rows violated beyond `tol`, as `(label, violation)`.
pub fn assignment_violations(
    problem: &PepProblem,
    assignment: &PepAssignment,
    tol: f64,
) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for row in &problem.rows {
        let mut v = row
            .gram
            .iter()
            .zip(assignment.gram.iter())
            .map(|(a, g)| a * g)
            .sum::<f64>();
        for (c, s) in row.scalars.iter().zip(&assignment.scalars) {
            v += c * s;
        }
        let violation = match row.sense {
            RowSense::Le => v - row.rhs,
            RowSense::Eq => (v - row.rhs).abs(),
        };
        if violation > tol {
            out.push((row.label.clone(), violation));
        }
    }
    out
}

/// Maps the first `spec.n + 1` iterates of a trace into a feasible point of
/// the PEP and returns it with its objective value (a certified lower bound
/// on the PEP optimum when the instance matches the spec's classes).
pub fn feasible_point_from_trace(
    trace: &Trace,
    spec: &PepSpec,
    f_star: f64,
) -> Result<(PepAssignment, f64)> {
    let n = spec.n;
    if trace.records().len() < n + 1 {
        return Err(Error::InvalidSpec(format!(
            "trace has {} iterates, spec needs {}",
            trace.records().len(),
            n + 1
        )));
    }
    let recs = &trace.records()[..n + 1];
    let dim = recs[0].x.len();

    // lifted vectors in build order
    let mut vectors: Vec<&nalgebra::DVector<f64>> = Vec::new();
    for r in recs {
        vectors.push(&r.x);
    }
    for r in recs {
        vectors.push(&r.g1);
    }
    vectors.push(&recs[n].g2);
    let gd = vectors.len();

    let mut gram = DMatrix::zeros(gd, gd);
    for i in 0..gd {
        for j in 0..gd {
            gram[(i, j)] = vectors[i].dot(vectors[j]);
        }
    }
    let _ = dim;

    let (mut scalars, mut objective) = match spec.kind {
        PepKind::GradientGap => {
            let mut s: Vec<f64> = recs.iter().map(|r| r.f1 - f_star).collect();
            s.extend(recs.iter().map(|r| r.f2));
            // ell = min over the objective rows: consecutive multiplier gaps
            // plus the fresh final gap
            let mut ell = f64::INFINITY;
            for k in 0..n {
                let d = &recs[k].g1 - &recs[k + 1].g1;
                ell = ell.min(d.dot(&d));
            }
            let d = &recs[n].g1 - &recs[n].g2;
            ell = ell.min(d.dot(&d));
            s.push(ell);
            (s, ell)
        }
        PepKind::ModelDecrease => {
            let mut s: Vec<f64> = recs.iter().map(|r| r.f1 - f_star).collect();
            s.extend(recs.iter().map(|r| r.f2));
            let mut ell = f64::INFINITY;
            for k in 0..n {
                let dx = &recs[k].x - &recs[k + 1].x;
                ell = ell.min(recs[k].f1 - recs[k + 1].f1 - recs[k + 1].g1.dot(&dx));
            }
            s.push(ell);
            (s, ell)
        }
        PepKind::PlOneStep => {
            let s = vec![
                recs[0].f1 - f_star,
                recs[1].f1 - f_star,
                recs[0].f2,
                recs[1].f2,
            ];
            let denom = s[0] - s[2];
            if denom <= 0.0 {
                return Err(Error::InvalidSpec(
                    "trace starts at an optimal point; the normalized ratio is undefined".into(),
                ));
            }
            let ratio = (s[1] - s[3]) / denom;
            (s, ratio)
        }
    };

    // the ratio problem is normalized by scaling the whole assignment
    if spec.kind == PepKind::PlOneStep {
        let denom = scalars[0] - scalars[2];
        let c = 1.0 / denom;
        gram *= c;
        for s in scalars.iter_mut() {
            *s *= c;
        }
        objective = scalars[1] - scalars[3];
    }

    let assignment = PepAssignment { gram, scalars };
    let problem = build(spec)?;
    let violations = assignment_violations(&problem, &assignment, 1e-8);
    if let Some((label, v)) = violations.first() {
        return Err(Error::InvalidSpec(format!(
            "trace violates PEP row {label} by {v:.3e}; either the declared classes do not              cover the instance, or the row's validity region does not cover this trace"
        )));
    }
    Ok((assignment, objective))
}
