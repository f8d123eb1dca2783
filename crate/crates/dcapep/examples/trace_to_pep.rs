//! Any real run on an in-class instance is a feasible point of the
//! performance-estimation problem, hence a lower-bound certificate on its
//! optimum. On the exact worst-case family the two coincide.
//!
//! ```sh
//! cargo run --release --example trace_to_pep
//! ```

use dcapep::dca::{run, StopKind, StopRule};
use dcapep::instances::{make_quadratic_instance, make_tightness_instance};
use dcapep::params::FunctionClassParams;
use dcapep::pep::{build, feasible_point_from_trace, solve_default, PepKind, PepSpec};
use nalgebra::{DMatrix, DVector};

fn main() -> dcapep::Result<()> {
    let sm = FunctionClassParams::smooth;
    let ns = FunctionClassParams::nonsmooth;

    // worst-case family: the trace certificate meets the SDP optimum
    let inst = make_tightness_instance(8.0, 3)?;
    let rule = StopRule::new(StopKind::GradientGap, 1e-14, 3)?;
    let trace = run(&inst, &DVector::from_vec(vec![4.0]), &rule)?;
    let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 8.0)?, ns(0.0)?, 3, 1.0)?;
    let (_, lower) = feasible_point_from_trace(&trace, &spec, inst.f_star())?;
    let sol = solve_default(&build(&spec)?)?;
    println!(
        "worst-case family: trace certificate {lower:.9} vs SDP optimum {:.9}",
        sol.objective_value
    );

    // a benign quadratic stays strictly below the worst case
    // spectra chosen so that L1 - mu2 <= L2 (the lower-bound rows of the
    // program are valid on this side of the case split)
    let q1 = DMatrix::from_diagonal(&DVector::from_vec(vec![1.5, 2.0]));
    let q2 = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.2]));
    let inst = make_quadratic_instance(q1, DVector::zeros(2), q2, DVector::from_vec(vec![1.0, 1.0]))?;
    let x1 = DVector::from_vec(vec![1.0, -1.0]);
    let delta = inst.objective(&x1) - inst.f_star();
    let rule = StopRule::new(StopKind::GradientGap, 1e-300, 2)?;
    let trace = run(&inst, &x1, &rule)?;
    let spec = PepSpec::new(
        PepKind::GradientGap,
        *inst.params1(),
        *inst.params2(),
        2,
        delta,
    )?;
    let (_, lower) = feasible_point_from_trace(&trace, &spec, inst.f_star())?;
    let sol = solve_default(&build(&spec)?)?;
    println!(
        "benign quadratic:  trace certificate {lower:.9} vs SDP optimum {:.9} (strictly below)",
        sol.objective_value
    );
    Ok(())
}
