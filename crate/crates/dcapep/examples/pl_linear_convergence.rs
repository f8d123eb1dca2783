//! Linear convergence of objective values under gradient domination: on
//! quadratic instances the per-step contraction factor is met with
//! equality.
//!
//! ```sh
//! cargo run --example pl_linear_convergence
//! ```

use dcapep::bounds::pl_contraction_factor;
use dcapep::dca::{run, StopKind, StopRule};
use dcapep::instances::{make_pl_quadratic_instance, pl_modulus_for_quadratics};
use nalgebra::DVector;

fn main() -> dcapep::Result<()> {
    for (l1, c) in [(2.0, 0.0), (2.0, 0.5), (1.0, 0.9)] {
        let instance = make_pl_quadratic_instance(l1, c)?;
        let eta = pl_modulus_for_quadratics(l1, c);
        let factor = pl_contraction_factor(instance.params1(), instance.params2(), eta)?;
        println!(
            "f1 = ({l1}/2) x^2, f2 = ({c}/2) x^2: modulus eta = {eta}, factor = {factor:.6}"
        );

        let rule = StopRule::new(StopKind::GradientGap, 1e-300, 8)?;
        let trace = run(&instance, &DVector::from_vec(vec![1.0]), &rule)?;
        let f = trace.objective_values();
        println!("   k     excess f(x^k)     ratio to previous");
        for k in 0..f.len() {
            if k == 0 {
                println!("  {:2}  {:>16.9e}                 -", k + 1, f[k]);
            } else if f[k - 1] > 0.0 {
                println!("  {:2}  {:>16.9e}  {:>16.9}", k + 1, f[k], f[k] / f[k - 1]);
            } else {
                println!("  {:2}  {:>16.9e}            (done)", k + 1, f[k]);
                break;
            }
        }
        println!();
    }
    Ok(())
}
