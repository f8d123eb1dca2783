//! A fully nonsmooth decomposition on which the gradient-gap stopping rule
//! is useless: the gap stays exactly 1 forever while the iterates halve
//! toward the infimum. The model-decrease rule stops immediately.
//!
//! ```sh
//! cargo run --example nonsmooth_termination
//! ```

use dcapep::dca::{run, StopKind, StopRule};
use dcapep::instances::make_nonsmooth_counterexample;
use nalgebra::DVector;

fn main() -> dcapep::Result<()> {
    let instance = make_nonsmooth_counterexample(64)?;
    let x1 = DVector::from_vec(vec![1.0]);

    let gap_rule = StopRule::new(StopKind::GradientGap, 0.5, 30)?;
    let trace = run(&instance, &x1, &gap_rule)?;
    println!("gradient-gap rule, eps = 0.5:");
    println!(
        "  {} steps, stop reason {:?} (the rule never fires)",
        trace.n_performed(),
        trace.stop_reason()
    );
    println!("   k        x^k            f(x^k)      |g1-g2|     T(x^k)");
    for r in trace.records().iter().take(8) {
        println!(
            "  {:2}  {:>13.6e}  {:>13.6e}  {:>8.3}  {:>9}",
            r.k,
            r.x[0],
            r.f1 - r.f2,
            r.gap,
            r.t.map(|t| format!("{t:.1e}")).unwrap_or_else(|| "-".into())
        );
    }
    println!("  ... (gap = 1 at every iterate; f(x^k) = 2^(1-k) -> 0)");

    let t_rule = StopRule::new(StopKind::ModelDecrease, 1e-3, 30)?;
    let trace_t = run(&instance, &x1, &t_rule)?;
    println!("\nmodel-decrease rule, eps = 1e-3:");
    println!(
        "  stops after {} step(s) with reason {:?}: the measure is exactly 0\n  \
         (each step moves along an affine piece of the first component)",
        trace_t.n_performed(),
        trace_t.stop_reason()
    );
    Ok(())
}
