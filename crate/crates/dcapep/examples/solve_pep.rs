//! Build and solve the three performance-estimation SDPs, comparing each
//! optimum with its closed-form bound (the bound is squared where it
//! controls a norm).
//!
//! ```sh
//! cargo run --release --example solve_pep
//! ```

use dcapep::bounds::{self, BoundRequest, Theorem};
use dcapep::params::FunctionClassParams;
use dcapep::pep::{build, solve_default, PepKind, PepSpec};

fn main() -> dcapep::Result<()> {
    let sm = FunctionClassParams::smooth;
    let ns = FunctionClassParams::nonsmooth;

    // worst case of min_k ||g1^k - g2^k||^2
    let spec = PepSpec::new(PepKind::GradientGap, sm(0.0, 8.0)?, ns(0.0)?, 3, 1.0)?;
    let problem = build(&spec)?;
    println!(
        "gradient-gap problem: Gram dim {}, {} scalars, {} rows",
        problem.gram_dim,
        problem.scalar_names.len(),
        problem.rows.len()
    );
    let sol = solve_default(&problem)?;
    let bound = bounds::gradient_gap_bound(&BoundRequest::new(
        Theorem::Cor31ii,
        sm(0.0, 8.0)?,
        ns(0.0)?,
        3,
        1.0,
    )?)?
    .value;
    println!(
        "  optimum {:.9} in {} iterations ({:?}); bound^2 = {:.9}",
        sol.objective_value,
        sol.iterations,
        sol.status,
        bound * bound
    );
    println!("  objective-row multipliers: {:?}", &sol.dual_multipliers[..4]);

    // worst case of min_k T(x^{k+1})
    let spec = PepSpec::new(PepKind::ModelDecrease, sm(0.0, 2.0)?, ns(1.0)?, 2, 1.0)?;
    let sol = solve_default(&build(&spec)?)?;
    let bound = bounds::model_decrease_bound(&sm(0.0, 2.0)?, &ns(1.0)?, 2, 1.0)?;
    println!(
        "model-decrease optimum {:.9} ({:?}); bound = {:.9}",
        sol.objective_value, sol.status, bound
    );

    // worst one-step ratio under gradient domination
    let spec = PepSpec::new(PepKind::PlOneStep, sm(0.0, 2.0)?, sm(0.0, 3.0)?, 1, 1.0)?
        .with_eta(1.0)?;
    let sol = solve_default(&build(&spec)?)?;
    let factor = bounds::pl_contraction_factor(&sm(0.0, 2.0)?, &sm(0.0, 3.0)?, 1.0)?;
    println!(
        "one-step ratio optimum {:.9} ({:?}); factor = {:.9}",
        sol.objective_value, sol.status, factor
    );
    Ok(())
}
