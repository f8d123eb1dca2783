//! The difference-of-convex algorithm with both stopping rules, recording a
//! complete iterate history.
//!
//! Per step: choose g2^k from the f2 oracle at x^k, solve the linearized
//! subproblem for x^{k+1}, and record the multiplier g1^{k+1} = g2^k verbatim
//! (first-order optimality of the subproblem makes it a valid subgradient of
//! f1 at x^{k+1}, and carrying it bit-exactly is what makes the PEP
//! stationarity substitution hold on traces). The gradient gap at the final
//! iterate needs one extra f2 oracle call after the last solve.

use std::io::Write;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::instances::DcInstance;

/// Which stopping measure a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopKind {
    /// Stop at the first iterate with `||g1^k - g2^k|| <= epsilon`.
    GradientGap,
    /// Stop at the first step with model decrease `T(x^{k+1}) < epsilon`.
    ModelDecrease,
}

#[derive(Debug, Clone, Copy)]
pub struct StopRule {
    pub kind: StopKind,
    pub epsilon: f64,
    pub max_iter: usize,
}

impl StopRule {
    pub fn new(kind: StopKind, epsilon: f64, max_iter: usize) -> Result<Self> {
        if epsilon <= 0.0 || epsilon.is_nan() {
            return Err(Error::InvalidInstance(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        if max_iter == 0 {
            return Err(Error::InvalidInstance("max_iter must be positive".into()));
        }
        Ok(Self { kind, epsilon, max_iter })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    GapTol,
    TTol,
    MaxIter,
}

/// One recorded iterate.
#[derive(Debug, Clone)]
pub struct IterateRecord {
    /// 1-based iterate index.
    pub k: usize,
    pub x: DVector<f64>,
    pub g1: DVector<f64>,
    pub g2: DVector<f64>,
    pub f1: f64,
    pub f2: f64,
    /// `||g1^k - g2^k||`.
    pub gap: f64,
    /// Model decrease `T(x^k)`, defined for k >= 2.
    pub t: Option<f64>,
}

/// Complete history of a DCA run.
#[derive(Debug, Clone)]
pub struct Trace {
    records: Vec<IterateRecord>,
    n_performed: usize,
    stop_reason: StopReason,
}

impl Trace {
    pub fn records(&self) -> &[IterateRecord] {
        &self.records
    }

    /// Number of completed subproblem solves.
    pub fn n_performed(&self) -> usize {
        self.n_performed
    }

    pub fn stop_reason(&self) -> StopReason {
        self.stop_reason
    }

    /// Record of iterate k (1-based).
    pub fn iterate(&self, k: usize) -> Result<&IterateRecord> {
        self.records
            .get(k - 1)
            .ok_or_else(|| Error::IndexOutOfRange(format!("iterate {k} of {}", self.records.len())))
    }

    /// `min_{1<=k<=n+1} ||g1^k - g2^k||` over the first `n` steps, the index
    /// range of the gradient-gap rate statements.
    pub fn min_gap_through(&self, n: usize) -> Result<f64> {
        if n + 1 > self.records.len() {
            return Err(Error::IndexOutOfRange(format!(
                "need {} iterates, trace has {}",
                n + 1,
                self.records.len()
            )));
        }
        Ok(self.records[..n + 1]
            .iter()
            .map(|r| r.gap)
            .fold(f64::INFINITY, f64::min))
    }

    /// Min gap over every recorded iterate.
    pub fn min_gap(&self) -> f64 {
        self.records.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min)
    }

    /// `min_{1<=k<=n} T(x^{k+1})`, the index range of the model-decrease
    /// rate statements.
    pub fn min_termination_measure_through(&self, n: usize) -> Result<f64> {
        if n > self.n_performed {
            return Err(Error::IndexOutOfRange(format!(
                "need {n} steps, trace has {}",
                self.n_performed
            )));
        }
        Ok(self.records[1..n + 1]
            .iter()
            .map(|r| r.t.expect("records past the first carry T"))
            .fold(f64::INFINITY, f64::min))
    }

    /// Objective values f1^k - f2^k along the trace.
    pub fn objective_values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.f1 - r.f2).collect()
    }

    /// CSV export: columns `k,x_0..x_{d-1},gap,T,f1,f2,f` at 17 significant
    /// digits. T is empty on the first row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let dim = self.records.first().map_or(0, |r| r.x.len());
        let mut header = String::from("k");
        for i in 0..dim {
            header.push_str(&format!(",x_{i}"));
        }
        header.push_str(",gap,T,f1,f2,f");
        writeln!(w, "{header}")?;
        for r in &self.records {
            let mut line = format!("{}", r.k);
            for v in r.x.iter() {
                line.push_str(&format!(",{v:.16e}"));
            }
            line.push_str(&format!(",{:.16e}", r.gap));
            match r.t {
                Some(t) => line.push_str(&format!(",{t:.16e}")),
                None => line.push(','),
            }
            line.push_str(&format!(",{:.16e},{:.16e},{:.16e}", r.f1, r.f2, r.f1 - r.f2));
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Model decrease over step k: `f1(x^k) - f1(x^{k+1}) - <g2^k, x^k - x^{k+1}>`,
/// recomputed from the recorded quantities. `1 <= k <= n_performed`.
pub fn termination_measure(trace: &Trace, k: usize) -> Result<f64> {
    if k < 1 || k > trace.n_performed() {
        return Err(Error::IndexOutOfRange(format!(
            "step {k} of {}",
            trace.n_performed()
        )));
    }
    let cur = trace.iterate(k)?;
    let next = trace.iterate(k + 1)?;
    let dx = &cur.x - &next.x;
    Ok(cur.f1 - next.f1 - cur.g2.dot(&dx))
}

/// Runs the algorithm from `x1` under `rule`.
pub fn run(instance: &DcInstance, x1: &DVector<f64>, rule: &StopRule) -> Result<Trace> {
    if x1.len() != instance.dimension() {
        return Err(Error::InvalidInstance(format!(
            "start point has dimension {}, instance expects {}",
            x1.len(),
            instance.dimension()
        )));
    }
    let e1 = instance.f1().eval(x1)?;
    let e2 = instance.f2().eval(x1)?;
    let gap1 = (&e1.subgradient - &e2.subgradient).norm();
    let mut records = vec![IterateRecord {
        k: 1,
        x: x1.clone(),
        g1: e1.subgradient,
        g2: e2.subgradient,
        f1: e1.value,
        f2: e2.value,
        gap: gap1,
        t: None,
    }];

    if rule.kind == StopKind::GradientGap && gap1 <= rule.epsilon {
        return Ok(Trace {
            records,
            n_performed: 0,
            stop_reason: StopReason::GapTol,
        });
    }

    let mut steps = 0;
    loop {
        let prev = records.last().expect("at least the start record");
        let x_next = instance.solve_subproblem(&prev.x, &prev.g2)?;
        // multiplier of the subproblem, recorded bit-exactly
        let g1_next = prev.g2.clone();
        let f1_next = instance.f1().eval(&x_next)?.value;
        let e2_next = instance.f2().eval(&x_next)?;
        let gap = (&g1_next - &e2_next.subgradient).norm();
        let t = prev.f1 - f1_next - prev.g2.dot(&(&prev.x - &x_next));
        records.push(IterateRecord {
            k: prev.k + 1,
            x: x_next,
            g1: g1_next,
            g2: e2_next.subgradient,
            f1: f1_next,
            f2: e2_next.value,
            gap,
            t: Some(t),
        });
        steps += 1;

        let stop = match rule.kind {
            StopKind::GradientGap => {
                if gap <= rule.epsilon {
                    Some(StopReason::GapTol)
                } else {
                    None
                }
            }
            StopKind::ModelDecrease => {
                if t < rule.epsilon {
                    Some(StopReason::TTol)
                } else {
                    None
                }
            }
        };
        let stop = stop.or(if steps >= rule.max_iter {
            Some(StopReason::MaxIter)
        } else {
            None
        });
        if let Some(reason) = stop {
            return Ok(Trace {
                records,
                n_performed: steps,
                stop_reason: reason,
            });
        }
    }
}
