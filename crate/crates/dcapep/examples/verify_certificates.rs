//! Machine-check the dual certificates behind the bounds: multiplier
//! nonnegativity on a grid and the completion-of-squares identity by
//! randomized evaluation. Two certificates need a minimal repair before
//! the identity verifies; both variants are shown.
//!
//! ```sh
//! cargo run --example verify_certificates
//! ```

use dcapep::certify::{multipliers_for, verify_identity, CertParams, TheoremCase};
use dcapep::params::FunctionClassParams;

fn main() -> dcapep::Result<()> {
    let sm = FunctionClassParams::smooth;
    let ns = FunctionClassParams::nonsmooth;
    let cases: Vec<(TheoremCase, CertParams)> = vec![
        (
            TheoremCase::GapCaseIL1GeL2,
            CertParams::new(sm(0.5, 2.0)?, sm(0.9, 1.5)?, 3),
        ),
        (
            TheoremCase::GapCaseIL1LtL2,
            CertParams::new(sm(0.0, 1.0)?, sm(0.4, 2.0)?, 3),
        ),
        (
            TheoremCase::GapCaseII,
            CertParams::new(sm(0.5, 3.0)?, sm(0.0, 1.0)?, 3),
        ),
        (
            TheoremCase::DecreaseBoundB1,
            CertParams::new(sm(0.0, 1.0)?, ns(1.0)?, 3),
        ),
        (
            TheoremCase::DecreaseBoundB2,
            CertParams::new(ns(0.5)?, sm(0.0, 1.0)?, 3),
        ),
        (
            TheoremCase::PlContraction,
            CertParams::new(sm(0.0, 2.0)?, sm(0.0, 3.0)?, 1).with_eta(1.0),
        ),
    ];

    for (case, params) in cases {
        let printed = multipliers_for(case, &params)?;
        let report = verify_identity(&printed, 200, 42);
        println!(
            "{:24} printed:  max residual {:10.3e}  -> {}",
            case.tag(),
            report.max_residual,
            if report.passed() { "identity verified" } else { "NOT an identity" }
        );
        if let Some(repaired) = printed.repaired() {
            let report = verify_identity(&repaired, 200, 42);
            println!(
                "{:24} repaired: max residual {:10.3e}  -> {}",
                "",
                report.max_residual,
                if report.passed() { "identity verified" } else { "NOT an identity" }
            );
        }
        let signs = printed.sign_violations();
        if !signs.is_empty() {
            println!("{:24} sign violations: {signs:?}", "");
        }
        let named: Vec<String> = printed
            .multipliers
            .iter()
            .map(|(k, v)| format!("{k} = {v:.6}"))
            .collect();
        println!("{:24} multipliers: {}", "", named.join(", "));
    }
    Ok(())
}
