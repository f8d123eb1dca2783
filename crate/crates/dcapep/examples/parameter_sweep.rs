//! Mini parameter sweep: closed-form bound vs SDP optimum vs the best
//! empirical run across a grid, as one CSV. The binary's `sweep`
//! subcommand produces the same layout from a grid file.
//!
//! ```sh
//! cargo run --release --example parameter_sweep
//! ```

use dcapep::bounds::{self, BoundRequest, Theorem};
use dcapep::dca::{run, StopKind, StopRule};
use dcapep::instances::{make_tightness_instance, tightness_u};
use dcapep::params::FunctionClassParams;
use dcapep::pep::{build, solve_default, PepKind, PepSpec};
use nalgebra::DVector;

fn main() -> dcapep::Result<()> {
    println!("l1,n,bound_sq,pep_value,empirical_gap_sq");
    for l1 in [1.0, 2.0, 4.0, 8.0] {
        for n in [1usize, 2, 3] {
            let p1 = FunctionClassParams::smooth(0.0, l1)?;
            let p2 = FunctionClassParams::nonsmooth(0.0)?;
            let b = bounds::gradient_gap_bound(&BoundRequest::new(
                Theorem::Cor31ii,
                p1,
                p2,
                n,
                1.0,
            )?)?
            .value;
            let spec = PepSpec::new(PepKind::GradientGap, p1, p2, n, 1.0)?;
            let sol = solve_default(&build(&spec)?)?;
            let empirical = if tightness_u(l1, n) < 1.0 {
                let inst = make_tightness_instance(l1, n)?;
                let rule = StopRule::new(StopKind::GradientGap, 1e-14, n)?;
                let trace = run(&inst, &DVector::from_vec(vec![n as f64 + 1.0]), &rule)?;
                let g = trace.min_gap_through(n)?;
                format!("{:.9}", g * g)
            } else {
                String::new()
            };
            println!("{l1},{n},{:.9},{:.9},{empirical}", b * b, sol.objective_value);
        }
    }
    Ok(())
}
