//! Finite-dimensional performance-estimation problems over a Gram matrix.
//!
//! Build routine conventions, applied to all three kinds:
//!
//! * the lower bound f_star is eliminated by translation (set to 0), since
//!   every constraint touches f-values only through differences with it;
//! * the stationarity substitution g2^k = g1^{k+1} for k <= N is applied at
//!   build time, so the lifted vectors are x^1..x^{N+1}, g1^1..g1^{N+1} and
//!   the one genuinely fresh subgradient g2^{N+1} (2N+3 vectors);
//! * interpolation rows are emitted for ordered pairs in both directions
//!   (the conditions are asymmetric);
//! * rows with an infinite smoothness modulus drop their 1/L and mu/L terms
//!   symbolically at build time;
//! * every inequality is normalized to "<= rhs".

mod feasible;
mod sdpa;

pub use feasible::{assignment_violations, feasible_point_from_trace, PepAssignment};
pub use sdpa::{export_sdpa, import_sdpa};

use nalgebra::DMatrix;

use crate::analysis::{descent_modulus, interp_quadratic_coefficients};
use crate::error::{Error, Result};
use crate::params::FunctionClassParams;
use crate::sdpsolve::{
    solve_sdp, RowSense, SdpObjective, SdpRow, SdpStandardForm, SolveOptions, SolveStatus,
};

/// Which performance-estimation problem to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PepKind {
    /// Worst case of `min_k ||g1^k - g2^k||^2` (gradient-gap criterion).
    GradientGap,
    /// Worst case of `min_k T(x^{k+1})` (model-decrease criterion).
    ModelDecrease,
    /// Worst one-step ratio of objective excesses under gradient domination.
    PlOneStep,
}

impl PepKind {
    pub fn tag(&self) -> &'static str {
        match self {
            PepKind::GradientGap => "p3",
            PepKind::ModelDecrease => "p3a2",
            PepKind::PlOneStep => "p33",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        match s {
            "p3" => Ok(PepKind::GradientGap),
            "p3a2" => Ok(PepKind::ModelDecrease),
            "p33" => Ok(PepKind::PlOneStep),
            _ => Err(Error::Parse(format!("unknown PEP kind {s:?}"))),
        }
    }
}

/// Parameters of a performance-estimation problem.
#[derive(Debug, Clone, PartialEq)]
pub struct PepSpec {
    pub kind: PepKind,
    pub params1: FunctionClassParams,
    pub params2: FunctionClassParams,
    /// Number of steps; forced to 1 for the one-step ratio problem.
    pub n: usize,
    pub delta: f64,
    /// Gradient-domination modulus (one-step ratio problem only).
    pub eta: Option<f64>,
}

impl PepSpec {
    pub fn new(
        kind: PepKind,
        params1: FunctionClassParams,
        params2: FunctionClassParams,
        n: usize,
        delta: f64,
    ) -> Result<Self> {
        let spec = Self {
            kind,
            params1,
            params2,
            n,
            delta,
            eta: None,
        };
        spec.validate_base()?;
        Ok(spec)
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.eta = Some(eta);
        self.validate()?;
        Ok(self)
    }

    /// Full validation, including the eta requirement of the ratio problem.
    fn validate(&self) -> Result<()> {
        self.validate_base()?;
        if self.kind == PepKind::PlOneStep {
            match self.eta {
                Some(e) if e > 0.0 && e.is_finite() => {}
                Some(e) => {
                    return Err(Error::InvalidSpec(format!(
                        "eta must be a positive real, got {e}"
                    )))
                }
                None => {
                    return Err(Error::InvalidSpec(
                        "the one-step ratio problem requires eta".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    fn validate_base(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("N must be positive".into()));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "Delta must be a positive real, got {}",
                self.delta
            )));
        }
        if !self.params1.l.gt(self.params2.mu) || !self.params2.l.gt(self.params1.mu) {
            return Err(Error::InvalidSpec(
                "standing assumptions L1 > mu2 and L2 > mu1 must hold".into(),
            ));
        }
        match self.kind {
            PepKind::GradientGap => {
                let s = descent_modulus(&self.params1, &self.params2);
                if s.is_none() {
                    return Err(Error::InvalidSpec(
                        "gradient-gap PEP needs min(L1 - mu2, L2) finite".into(),
                    ));
                }
            }
            PepKind::ModelDecrease => {}
            PepKind::PlOneStep => {
                if self.n != 1 {
                    return Err(Error::InvalidSpec(
                        "the one-step ratio problem has N = 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Row sense after normalization.
pub use crate::sdpsolve::RowSense as PepRowSense;

/// One linear constraint on (Gram, scalars).
#[derive(Debug, Clone, PartialEq)]
pub struct PepRow {
    pub label: String,
    /// Symmetric coefficient matrix on the Gram block.
    pub gram: DMatrix<f64>,
    /// Coefficients on the scalar variables.
    pub scalars: Vec<f64>,
    pub sense: RowSense,
    pub rhs: f64,
}

/// A built performance-estimation SDP.
#[derive(Debug, Clone, PartialEq)]
pub struct PepProblem {
    pub spec: PepSpec,
    pub gram_dim: usize,
    /// Names of the lifted vectors, for reports and file metadata.
    pub vector_names: Vec<String>,
    pub scalar_names: Vec<String>,
    pub rows: Vec<PepRow>,
    /// Maximized linear form on the scalar variables.
    pub objective: Vec<f64>,
    /// Anomalies observed while transcribing the constraint families.
    pub build_notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PepStatus {
    Optimal,
    NearOptimal,
    Infeasible,
    NumericalFailure,
}

impl PepStatus {
    /// True for statuses whose reported point is trustworthy (residuals at
    /// worst 1e3 times the requested tolerances). Degenerate optima without
    /// strict complementarity routinely land on `NearOptimal`.
    pub fn converged(self) -> bool {
        matches!(self, PepStatus::Optimal | PepStatus::NearOptimal)
    }
}

/// Solver output mapped back to PEP terms.
#[derive(Debug, Clone)]
pub struct PepSolution {
    pub objective_value: f64,
    pub gram: DMatrix<f64>,
    pub scalars: Vec<f64>,
    /// One multiplier per row, nonnegative on inequality rows.
    pub dual_multipliers: Vec<f64>,
    pub status: PepStatus,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub rel_gap: f64,
}

impl PepProblem {
    pub fn scalar_index(&self, name: &str) -> Option<usize> {
        self.scalar_names.iter().position(|s| s == name)
    }

    /// Number of inequality rows.
    pub fn n_inequalities(&self) -> usize {
        self.rows.iter().filter(|r| r.sense == RowSense::Le).count()
    }

    /// Lowers the problem to the solver's standard form (maximization).
    ///
    /// All three formulations are invariant under shifting every f1 and f2
    /// value by one common constant (the lower bound was eliminated by
    /// translation, and only differences remain), so `f2_1` is pinned to 0
    /// by substitution; for the ratio problem the normalization row then
    /// reads `f1_1 = 1` and is substituted as well. Any feasible point can
    /// be translated onto these values, so the optimum is untouched, every
    /// remaining row is an inequality, and the solver's Schur system is
    /// nonsingular. [`solve`] undoes the substitution in the reported
    /// scalars and assigns the dropped normalization row a zero multiplier.
    pub fn to_standard_form(&self) -> SdpStandardForm {
        self.lowering().form
    }

    fn lowering(&self) -> Lowering {
        let mut fixed: Vec<(usize, f64)> = Vec::new();
        if let Some(idx) = self.scalar_index("f2_1") {
            fixed.push((idx, 0.0));
        }
        let mut dropped_rows: Vec<usize> = Vec::new();
        if self.spec.kind == PepKind::PlOneStep {
            if let Some(idx) = self.scalar_index("f1_1") {
                fixed.push((idx, 1.0));
            }
            dropped_rows.extend(
                self.rows
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.label == "normalization")
                    .map(|(i, _)| i),
            );
        }
        fixed.sort_unstable_by_key(|&(j, _)| j);
        let kept: Vec<usize> = (0..self.scalar_names.len())
            .filter(|i| !fixed.iter().any(|(j, _)| j == i))
            .collect();

        let mut rows = Vec::new();
        let mut kept_rows = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            if dropped_rows.contains(&i) {
                continue;
            }
            kept_rows.push(i);
            let mut rhs = r.rhs;
            for &(j, v) in &fixed {
                rhs -= r.scalars[j] * v;
            }
            rows.push(SdpRow {
                a: r.gram.clone(),
                free: kept.iter().map(|&j| r.scalars[j]).collect(),
                sense: r.sense,
                rhs,
            });
        }
        let mut objective_shift = 0.0;
        for &(j, v) in &fixed {
            objective_shift += self.objective[j] * v;
        }
        Lowering {
            form: SdpStandardForm {
                psd_dim: self.gram_dim,
                num_free: kept.len(),
                rows,
                objective: SdpObjective {
                    c_psd: DMatrix::zeros(self.gram_dim, self.gram_dim),
                    c_free: kept.iter().map(|&j| self.objective[j]).collect(),
                },
            },
            kept,
            fixed,
            kept_rows,
            objective_shift,
        }
    }
}

/// Bookkeeping for the scalar substitutions done while lowering.
struct Lowering {
    form: SdpStandardForm,
    kept: Vec<usize>,
    fixed: Vec<(usize, f64)>,
    kept_rows: Vec<usize>,
    objective_shift: f64,
}

type RowParts<'a> = (&'a mut DMatrix<f64>, &'a mut Vec<f64>);

/// Sparse combination of lifted vectors.
#[derive(Debug, Clone, Default)]
struct VecExpr(Vec<(usize, f64)>);

impl VecExpr {
    fn unit(i: usize) -> Self {
        VecExpr(vec![(i, 1.0)])
    }

    fn minus(&self, other: &VecExpr) -> VecExpr {
        let mut v = self.0.clone();
        for &(i, c) in &other.0 {
            v.push((i, -c));
        }
        VecExpr(v)
    }
}

/// Adds `coef * sym(u v')` into `m`.
fn add_sym_outer(m: &mut DMatrix<f64>, coef: f64, u: &VecExpr, v: &VecExpr) {
    if coef == 0.0 {
        return;
    }
    for &(i, a) in &u.0 {
        for &(j, b) in &v.0 {
            let w = 0.5 * coef * a * b;
            m[(i, j)] += w;
            m[(j, i)] += w;
        }
    }
}

struct Builder {
    gram_dim: usize,
    n_scalars: usize,
    rows: Vec<PepRow>,
}

impl Builder {
    fn new(gram_dim: usize, n_scalars: usize) -> Self {
        Self {
            gram_dim,
            n_scalars,
            rows: Vec::new(),
        }
    }

    fn row(&mut self, label: String, sense: RowSense, rhs: f64) -> RowParts<'_> {
        self.rows.push(PepRow {
            label,
            gram: DMatrix::zeros(self.gram_dim, self.gram_dim),
            scalars: vec![0.0; self.n_scalars],
            sense,
            rhs,
        });
        let r = self.rows.last_mut().expect("just pushed");
        (&mut r.gram, &mut r.scalars)
    }

    /// Interpolation row `Q(i,j) - f_i + f_j + <g_j, x_i - x_j> <= 0`.
    fn interp_row(
        &mut self,
        label: String,
        params: &FunctionClassParams,
        xi: &VecExpr,
        xj: &VecExpr,
        gi: &VecExpr,
        gj: &VecExpr,
        fi: usize,
        fj: usize,
    ) {
        let (cg, cx, cgx) = interp_quadratic_coefficients(params);
        let dg = gi.minus(gj);
        let dx = xi.minus(xj);
        let (gram, scalars) = self.row(label, RowSense::Le, 0.0);
        add_sym_outer(gram, cg, &dg, &dg);
        add_sym_outer(gram, cx, &dx, &dx);
        add_sym_outer(gram, cgx, &dg, &dx);
        add_sym_outer(gram, 1.0, gj, &dx);
        scalars[fi] -= 1.0;
        scalars[fj] += 1.0;
    }
}

/// Builds the SDP for a spec. Constraint families and index ranges follow
/// the formulations exactly; see the module docs for the conventions.
pub fn build(spec: &PepSpec) -> Result<PepProblem> {
    spec.validate()?;
    match spec.kind {
        PepKind::GradientGap | PepKind::ModelDecrease => build_multistep(spec),
        PepKind::PlOneStep => build_one_step(spec),
    }
}

fn build_multistep(spec: &PepSpec) -> Result<PepProblem> {
    let n = spec.n;
    let gram_dim = 2 * n + 3;
    // lifted vectors: x^1..x^{N+1} | g1^1..g1^{N+1} | g2^{N+1}
    let x = |k: usize| VecExpr::unit(k - 1);
    let g1 = |k: usize| VecExpr::unit(n + k);
    let g2 = |k: usize| {
        if k <= n {
            VecExpr::unit(n + k + 1) // g2^k = g1^{k+1}
        } else {
            VecExpr::unit(2 * n + 2)
        }
    };
    let mut vector_names: Vec<String> = (1..=n + 1).map(|k| format!("x_{k}")).collect();
    vector_names.extend((1..=n + 1).map(|k| format!("g1_{k}")));
    vector_names.push(format!("g2_{}", n + 1));

    let mut scalar_names: Vec<String> = (1..=n + 1).map(|k| format!("f1_{k}")).collect();
    scalar_names.extend((1..=n + 1).map(|k| format!("f2_{k}")));
    scalar_names.push("ell".into());
    let f1 = |k: usize| k - 1;
    let f2 = |k: usize| n + k;
    let ell = 2 * n + 2;

    let mut b = Builder::new(gram_dim, scalar_names.len());
    let mut notes = Vec::new();

    // objective rows
    match spec.kind {
        PepKind::GradientGap => {
            for k in 1..=n + 1 {
                let dg = g1(k).minus(&g2(k));
                let (gram, scalars) = b.row(format!("obj_gap_{k}"), RowSense::Le, 0.0);
                add_sym_outer(gram, -1.0, &dg, &dg);
                scalars[ell] += 1.0;
            }
        }
        PepKind::ModelDecrease => {
            for k in 1..=n {
                let dx = x(k).minus(&x(k + 1));
                let (gram, scalars) = b.row(format!("obj_decrease_{k}"), RowSense::Le, 0.0);
                add_sym_outer(gram, 1.0, &g1(k + 1), &dx);
                scalars[f1(k)] -= 1.0;
                scalars[f1(k + 1)] += 1.0;
                scalars[ell] += 1.0;
            }
        }
        PepKind::PlOneStep => unreachable!(),
    }

    // f1 interpolation over ordered pairs in {1..N+1}
    for i in 1..=n + 1 {
        for j in 1..=n + 1 {
            if i != j {
                b.interp_row(
                    format!("interp_f1_{i}_{j}"),
                    &spec.params1,
                    &x(i),
                    &x(j),
                    &g1(i),
                    &g1(j),
                    f1(i),
                    f1(j),
                );
            }
        }
    }
    // f2 interpolation over ordered pairs in {1..N}
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                b.interp_row(
                    format!("interp_f2_{i}_{j}"),
                    &spec.params2,
                    &x(i),
                    &x(j),
                    &g2(i),
                    &g2(j),
                    f2(i),
                    f2(j),
                );
            }
        }
    }
    // f2 rows involving index N+1 (the fresh subgradient g2^{N+1})
    for j in 1..=n {
        b.interp_row(
            format!("interp_f2_{}_{j}", n + 1),
            &spec.params2,
            &x(n + 1),
            &x(j),
            &g2(n + 1),
            &g2(j),
            f2(n + 1),
            f2(j),
        );
    }
    for i in 1..=n {
        // the transcription of this family contains "<g2^{N+1}, x^i - x^j>"
        // with no j in scope; the pattern-consistent row uses x^i - x^{N+1}
        b.interp_row(
            format!("interp_f2_{i}_{}", n + 1),
            &spec.params2,
            &x(i),
            &x(n + 1),
            &g2(i),
            &g2(n + 1),
            f2(i),
            f2(n + 1),
        );
    }
    if spec.kind == PepKind::ModelDecrease {
        notes.push(format!(
            "rows interp_f2_i_{}: emitted with x^i - x^{} (pattern-consistent reading of a printed x^i - x^j with no j in scope)",
            n + 1,
            n + 1
        ));
    }

    // lower-bound rows (f_star translated to 0)
    match spec.kind {
        PepKind::GradientGap => {
            let s = descent_modulus(&spec.params1, &spec.params2)
                .expect("validated: one modulus finite");
            for k in 1..=n + 1 {
                let dg = g1(k).minus(&g2(k));
                let (gram, scalars) = b.row(format!("lemma_lower_{k}"), RowSense::Le, 0.0);
                add_sym_outer(gram, 1.0 / (2.0 * s), &dg, &dg);
                scalars[f1(k)] -= 1.0;
                scalars[f2(k)] += 1.0;
            }
        }
        PepKind::ModelDecrease => {
            for k in 1..=n + 1 {
                let (_, scalars) = b.row(format!("plain_lower_{k}"), RowSense::Le, 0.0);
                scalars[f1(k)] -= 1.0;
                scalars[f2(k)] += 1.0;
            }
        }
        PepKind::PlOneStep => unreachable!(),
    }

    // initial-excess row
    {
        let (_, scalars) = b.row("delta".into(), RowSense::Le, spec.delta);
        scalars[f1(1)] += 1.0;
        scalars[f2(1)] -= 1.0;
    }

    let mut objective = vec![0.0; scalar_names.len()];
    objective[ell] = 1.0;

    Ok(PepProblem {
        spec: spec.clone(),
        gram_dim,
        vector_names,
        scalar_names,
        rows: b.rows,
        objective,
        build_notes: notes,
    })
}

fn build_one_step(spec: &PepSpec) -> Result<PepProblem> {
    let eta = spec.eta.expect("validated");
    let gram_dim = 5;
    // lifted vectors: x^1, x^2 | g1^1, g1^2 | g2^2 (g2^1 = g1^2 substituted)
    let x = |k: usize| VecExpr::unit(k - 1);
    let g1 = |k: usize| VecExpr::unit(1 + k);
    let g2 = |k: usize| if k == 1 { VecExpr::unit(3) } else { VecExpr::unit(4) };
    let vector_names = vec![
        "x_1".into(),
        "x_2".into(),
        "g1_1".into(),
        "g1_2".into(),
        "g2_2".into(),
    ];
    let scalar_names: Vec<String> =
        vec!["f1_1".into(), "f1_2".into(), "f2_1".into(), "f2_2".into()];
    let f1 = |k: usize| k - 1;
    let f2 = |k: usize| 1 + k;

    let mut b = Builder::new(gram_dim, scalar_names.len());

    for i in 1..=2usize {
        for j in 1..=2usize {
            if i != j {
                b.interp_row(
                    format!("interp_f1_{i}_{j}"),
                    &spec.params1,
                    &x(i),
                    &x(j),
                    &g1(i),
                    &g1(j),
                    f1(i),
                    f1(j),
                );
            }
        }
    }
    for i in 1..=2usize {
        for j in 1..=2usize {
            if i != j {
                b.interp_row(
                    format!("interp_f2_{i}_{j}"),
                    &spec.params2,
                    &x(i),
                    &x(j),
                    &g2(i),
                    &g2(j),
                    f2(i),
                    f2(j),
                );
            }
        }
    }
    for k in 1..=2usize {
        let (_, scalars) = b.row(format!("plain_lower_{k}"), RowSense::Le, 0.0);
        scalars[f1(k)] -= 1.0;
        scalars[f2(k)] += 1.0;
    }
    // gradient-domination rows
    for k in 1..=2usize {
        let dg = g1(k).minus(&g2(k));
        let (gram, scalars) = b.row(format!("pl_{k}"), RowSense::Le, 0.0);
        add_sym_outer(gram, -1.0 / (2.0 * eta), &dg, &dg);
        scalars[f1(k)] += 1.0;
        scalars[f2(k)] -= 1.0;
    }
    // fractional objective linearized by normalizing the denominator; exact
    // because the constraint system is positively homogeneous
    {
        let (_, scalars) = b.row("normalization".into(), RowSense::Eq, 1.0);
        scalars[f1(1)] += 1.0;
        scalars[f2(1)] -= 1.0;
    }

    let mut objective = vec![0.0; scalar_names.len()];
    objective[f1(2)] = 1.0;
    objective[f2(2)] = -1.0;

    Ok(PepProblem {
        spec: spec.clone(),
        gram_dim,
        vector_names,
        scalar_names,
        rows: b.rows,
        objective,
        build_notes: Vec::new(),
    })
}

/// Builds and solves the SDP; default tolerances are 1e-8 feasibility and
/// 1e-7 relative gap.
pub fn solve(problem: &PepProblem, tol: f64) -> Result<PepSolution> {
    let lowering = problem.lowering();
    let opts = SolveOptions {
        max_iter: 200,
        feas_tol: tol,
        gap_tol: 10.0 * tol,
    };
    let r = solve_sdp(&lowering.form, &opts)?;
    let status = match r.status {
        SolveStatus::Optimal => PepStatus::Optimal,
        SolveStatus::NearOptimal => PepStatus::NearOptimal,
        SolveStatus::Infeasible => PepStatus::Infeasible,
        SolveStatus::NumericalFailure => PepStatus::NumericalFailure,
    };
    // undo the scalar substitution
    let mut scalars = vec![0.0; problem.scalar_names.len()];
    for (&j, &v) in lowering.kept.iter().zip(r.free.iter()) {
        scalars[j] = v;
    }
    for &(j, v) in &lowering.fixed {
        scalars[j] = v;
    }
    // dropped rows (the substituted normalization) get a zero multiplier
    let mut duals = vec![0.0; problem.rows.len()];
    for (&orig, &d) in lowering.kept_rows.iter().zip(r.duals.iter()) {
        duals[orig] = d;
    }
    Ok(PepSolution {
        objective_value: r.objective + lowering.objective_shift,
        gram: r.x_psd,
        scalars,
        dual_multipliers: duals,
        status,
        iterations: r.iterations,
        primal_residual: r.primal_residual,
        dual_residual: r.dual_residual,
        rel_gap: r.rel_gap,
    })
}

/// Solves with the default tolerances.
pub fn solve_default(problem: &PepProblem) -> Result<PepSolution> {
    solve(problem, 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Smoothness;

    fn sm(mu: f64, l: f64) -> FunctionClassParams {
        FunctionClassParams::smooth(mu, l).unwrap()
    }

    fn ns(mu: f64) -> FunctionClassParams {
        FunctionClassParams::nonsmooth(mu).unwrap()
    }

    #[test]
    fn p3_n1_dimensions() {
        let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 1.0), ns(0.0), 1, 1.0).unwrap();
        let p = build(&spec).unwrap();
        assert_eq!(p.gram_dim, 5);
        assert_eq!(p.vector_names, vec!["x_1", "x_2", "g1_1", "g1_2", "g2_2"]);
        assert_eq!(p.scalar_names, vec!["f1_1", "f1_2", "f2_1", "f2_2", "ell"]);
        // rows: 2 objective + 2 f1-interp + 0 f2-pairs + 2 f2 rows with N+1
        //       + 2 lemma + 1 delta
        assert_eq!(p.rows.len(), 9);
        assert_eq!(p.n_inequalities(), 9);
    }

    #[test]
    fn p3_row_counts_general() {
        for n in 1..=4 {
            let spec =
                PepSpec::new(PepKind::GradientGap, sm(0.3, 2.0), sm(0.9, 1.5), n, 1.0).unwrap();
            let p = build(&spec).unwrap();
            assert_eq!(p.gram_dim, 2 * n + 3);
            let expected =
                (n + 1) + (n + 1) * n + n * (n - 1) + 2 * n + (n + 1) + 1;
            assert_eq!(p.rows.len(), expected, "N = {n}");
        }
    }

    #[test]
    fn p3a2_has_no_lemma_rows() {
        let spec = PepSpec::new(PepKind::ModelDecrease, sm(0.0, 2.0), ns(1.0), 2, 1.0).unwrap();
        let p = build(&spec).unwrap();
        let objective_rows = p
            .rows
            .iter()
            .filter(|r| r.label.starts_with("obj_decrease"))
            .count();
        assert_eq!(objective_rows, 2);
        assert!(p.rows.iter().all(|r| !r.label.starts_with("lemma")));
        assert!(p.rows.iter().any(|r| r.label.starts_with("plain_lower")));
    }

    #[test]
    fn p33_structure() {
        let spec = PepSpec::new(PepKind::PlOneStep, sm(0.0, 2.0), ns(0.0), 1, 1.0)
            .unwrap()
            .with_eta(1.0)
            .unwrap();
        let p = build(&spec).unwrap();
        assert_eq!(p.gram_dim, 5);
        let pl_rows = p.rows.iter().filter(|r| r.label.starts_with("pl_")).count();
        assert_eq!(pl_rows, 2);
        let eq_rows = p.rows.iter().filter(|r| r.sense == RowSense::Eq).count();
        assert_eq!(eq_rows, 1);
    }

    #[test]
    fn p33_requires_eta_and_n1() {
        let s = PepSpec::new(PepKind::PlOneStep, sm(0.0, 2.0), ns(0.0), 1, 1.0).unwrap();
        assert!(build(&s).is_err());
        assert!(PepSpec::new(PepKind::PlOneStep, sm(0.0, 2.0), ns(0.0), 2, 1.0).is_err());
    }

    #[test]
    fn gradient_gap_needs_finite_modulus() {
        let r = PepSpec::new(PepKind::GradientGap, ns(0.0), ns(0.0), 1, 1.0);
        assert!(r.is_err());
        // model-decrease is fine with both infinite
        assert!(PepSpec::new(PepKind::ModelDecrease, ns(0.0), ns(0.0), 1, 1.0).is_ok());
    }

    #[test]
    fn infinite_modulus_rows_have_no_gradient_terms() {
        // with L2 = inf and mu2 = 0 the f2 rows are plain convexity rows
        let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 8.0), ns(0.0), 2, 1.0).unwrap();
        let p = build(&spec).unwrap();
        let row = p
            .rows
            .iter()
            .find(|r| r.label == "interp_f2_1_2")
            .expect("row exists");
        // gram part should involve only <g2^1, x_1 - x_2> = <g1^2, x_1 - x_2>
        let g1_2 = 2 + 2; // n=2: x block 0..2, g1 block 3..5 -> g1^2 at 4
        assert!(row.gram[(g1_2, g1_2)].abs() < 1e-15);
        assert_eq!(row.scalars[p.scalar_index("f2_1").unwrap()], -1.0);
        assert_eq!(row.scalars[p.scalar_index("f2_2").unwrap()], 1.0);
    }

    #[test]
    fn smoothness_rows_match_class_coefficients() {
        let spec = PepSpec::new(
            PepKind::GradientGap,
            FunctionClassParams::new(0.4, Smoothness::Finite(1.0)).unwrap(),
            FunctionClassParams::new(0.2, Smoothness::Finite(2.0)).unwrap(),
            1,
            1.0,
        )
        .unwrap();
        let p = build(&spec).unwrap();
        let row = p.rows.iter().find(|r| r.label == "interp_f1_1_2").unwrap();
        // coefficient of ||g1_1||^2 is cg = (1/L1) / (2(1-mu1/L1))
        let cg = (1.0f64 / 1.0) / (2.0 * (1.0 - 0.4));
        assert!((row.gram[(2, 2)] - cg).abs() < 1e-15);
    }
}
