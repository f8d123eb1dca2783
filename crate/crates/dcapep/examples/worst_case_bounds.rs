//! Evaluate every closed-form worst-case bound on a table of parameter
//! points, demonstrating the exact infinity handling and the case splits.
//!
//! ```sh
//! cargo run --example worst_case_bounds
//! ```

use dcapep::bounds::{evaluate, BoundRequest, Theorem};
use dcapep::params::{FunctionClassParams, Smoothness};

fn main() -> dcapep::Result<()> {
    let inf = Smoothness::Infinite;
    let fin = Smoothness::Finite;
    // (theorem, mu1, L1, mu2, L2, N, delta, eta)
    let rows = [
        (Theorem::Cor31i, 0.0, inf, 0.0, fin(1.0), 1, 1.0, None),
        (Theorem::Cor31ii, 0.0, fin(8.0), 0.0, inf, 3, 1.0, None),
        (Theorem::Cor31iii, 0.0, fin(1.0), 0.0, fin(1.0), 1, 1.0, None),
        (Theorem::Thm31i, 0.3, fin(2.0), 0.9, fin(1.5), 2, 1.0, None),
        (Theorem::Thm31ii, 0.5, fin(3.0), 0.0, fin(1.0), 2, 1.0, None),
        (Theorem::Prop31i, 1.0, inf, 1.0, inf, 1, 1.0, None),
        (Theorem::Prop31ii, 1.0, inf, 0.5, fin(5.0), 3, 1.0, None),
        (Theorem::Thm41, 0.0, fin(1.0), 1.0, inf, 1, 1.0, None),
        (Theorem::Cor41, 0.0, inf, 0.0, inf, 4, 1.0, None),
        (Theorem::Thm51, 0.0, fin(2.0), 0.0, inf, 1, 1.0, Some(1.0)),
        (Theorem::Thm51, 0.0, inf, 0.0, fin(1.0), 1, 1.0, Some(1.0)),
    ];
    println!("theorem    mu1   L1    mu2   L2    N  delta  eta      value  case");
    for (thm, mu1, l1, mu2, l2, n, delta, eta) in rows {
        let p1 = FunctionClassParams::new(mu1, l1)?;
        let p2 = FunctionClassParams::new(mu2, l2)?;
        let mut req = BoundRequest::new(thm, p1, p2, n, delta)?;
        if let Some(e) = eta {
            req = req.with_eta(e);
        }
        let r = evaluate(&req)?;
        println!(
            "{:9} {:5} {:5} {:5} {:5} {:2}  {:5} {:4}  {:>9.6}  {}",
            thm.tag(),
            mu1,
            l1.to_string(),
            mu2,
            l2.to_string(),
            n,
            delta,
            eta.map(|e| e.to_string()).unwrap_or_else(|| "-".into()),
            r.value,
            r.case_taken
        );
        if !r.constants.is_empty() {
            let consts: Vec<String> =
                r.constants.iter().map(|(k, v)| format!("{k} = {v:.6}")).collect();
            println!("           constants: {}", consts.join(", "));
        }
    }

    // a case-gate rejection, reported rather than silently reinterpreted
    let p1 = FunctionClassParams::smooth(0.0, 3.0)?;
    let p2 = FunctionClassParams::smooth(0.0, 1.0)?;
    let bad = BoundRequest::new(Theorem::Thm31i, p1, p2, 1, 1.0)?;
    println!("\nrequesting the wrong case: {}", evaluate(&bad).unwrap_err());
    Ok(())
}
