//! The one-dimensional family on which the gradient-gap rate is attained:
//! the observed minimal gap after N steps equals the closed-form bound to
//! machine precision, for every admissible (L1, N).
//!
//! ```sh
//! cargo run --example tightness_exactness
//! ```

use dcapep::bounds::{gradient_gap_bound, BoundRequest, Theorem};
use dcapep::dca::{run, StopKind, StopRule};
use dcapep::instances::{make_tightness_instance, tightness_u};
use dcapep::params::FunctionClassParams;
use nalgebra::DVector;

fn main() -> dcapep::Result<()> {
    println!("  L1    N      U        observed min gap   closed-form bound      |diff|");
    for l1 in [0.5, 2.0, 8.0] {
        for n in [1usize, 3, 7, 10] {
            let u = tightness_u(l1, n);
            if u >= 1.0 {
                println!("{l1:5}  {n:3}  {u:7.4}   (skipped: requires U < 1)");
                continue;
            }
            let instance = make_tightness_instance(l1, n)?;
            let start = DVector::from_vec(vec![n as f64 + 1.0]);
            let rule = StopRule::new(StopKind::GradientGap, 1e-14, n)?;
            let trace = run(&instance, &start, &rule)?;
            let observed = trace.min_gap_through(n)?;

            let req = BoundRequest::new(
                Theorem::Cor31ii,
                FunctionClassParams::smooth(0.0, l1)?,
                FunctionClassParams::nonsmooth(0.0)?,
                n,
                1.0, // the family starts with objective excess exactly 1
            )?;
            let bound = gradient_gap_bound(&req)?.value;
            println!(
                "{l1:5}  {n:3}  {u:7.4}   {observed:>17.12}  {bound:>17.12}  {:>10.2e}",
                (observed - bound).abs()
            );
        }
    }
    Ok(())
}
