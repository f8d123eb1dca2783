//! Run the algorithm on a small convex-quadratic DC instance and print the
//! per-iterate trace.
//!
//! ```sh
//! cargo run --example run_dca
//! ```

use dcapep::dca::{run, termination_measure, StopKind, StopRule};
use dcapep::instances::make_quadratic_instance;
use nalgebra::{DMatrix, DVector};

fn main() -> dcapep::Result<()> {
    // f1(x) = x' diag(2, 3) x / 2,  f2(x) = x' diag(0.5, 1) x / 2 + <(1, -1), x>
    let q1 = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0]));
    let q2 = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 1.0]));
    let b1 = DVector::zeros(2);
    let b2 = DVector::from_vec(vec![1.0, -1.0]);
    let instance = make_quadratic_instance(q1, b1, q2, b2)?;
    println!(
        "instance: {} in dimension {}, classes {} / {}, f_star = {:.6}",
        instance.label(),
        instance.dimension(),
        instance.params1(),
        instance.params2(),
        instance.f_star()
    );

    let x1 = DVector::from_vec(vec![2.0, -1.5]);
    let rule = StopRule::new(StopKind::GradientGap, 1e-10, 50)?;
    let trace = run(&instance, &x1, &rule)?;

    println!("\n k       f(x^k)        ||g1-g2||         T(x^k)");
    for r in trace.records() {
        match r.t {
            Some(t) => println!("{:2}  {:>13.6e}  {:>13.6e}  {:>13.6e}", r.k, r.f1 - r.f2, r.gap, t),
            None => println!("{:2}  {:>13.6e}  {:>13.6e}              -", r.k, r.f1 - r.f2, r.gap),
        }
    }
    println!(
        "\nstopped after {} steps ({:?}); model decrease over step 1 = {:.6e}",
        trace.n_performed(),
        trace.stop_reason(),
        termination_measure(&trace, 1)?
    );
    println!("\ntrace as CSV:\n{}", trace.to_csv_string());
    Ok(())
}
