//! Interpolation conditions as a standalone predicate: accept samples of a
//! genuine class member, reject a fabricated set, and use the extended
//! descent lemma as a lower-bound improver.
//!
//! ```sh
//! cargo run --example interpolation_check
//! ```

use dcapep::analysis::{check_interpolable, descent_gap, SamplePoint};
use dcapep::params::FunctionClassParams;
use nalgebra::DVector;

fn main() -> dcapep::Result<()> {
    let v = |x: f64| DVector::from_vec(vec![x]);

    // samples of f(x) = (L/2) x^2 are interpolable in class (0, L), with
    // every pairwise inequality tight
    let l = 3.0;
    let samples: Vec<SamplePoint> = [-1.0, 0.0, 1.0]
        .iter()
        .map(|&x| SamplePoint::new(v(x), v(l * x), 0.5 * l * x * x))
        .collect();
    let params = FunctionClassParams::smooth(0.0, l)?;
    let r = check_interpolable(&samples, &params)?;
    println!(
        "quadratic samples, class (0, {l}): interpolable = {}, worst violation = {:.3e}",
        r.interpolable, r.worst_violation
    );

    // a fabricated pair that no member of (0, 1) can interpolate
    let bad = vec![
        SamplePoint::new(v(0.0), v(0.0), 0.0),
        SamplePoint::new(v(1.0), v(2.0), 1.0),
    ];
    let params = FunctionClassParams::smooth(0.0, 1.0)?;
    let r = check_interpolable(&bad, &params)?;
    println!(
        "fabricated pair, class (0, 1):   interpolable = {}, worst violation = {:.3} at pair {:?}",
        r.interpolable, r.worst_violation, r.witness
    );

    // descent lemma: from one point of f = x^2/2 - 0 the certified lower
    // bound already equals the true minimum
    let p1 = FunctionClassParams::smooth(0.0, 1.0)?;
    let p2 = FunctionClassParams::nonsmooth(0.0)?;
    let improved = descent_gap(0.5, &v(1.0), &v(0.0), &p1, &p2)?;
    println!("descent lemma at x = 1 for f = x^2/2: certified lower bound = {improved}");
    Ok(())
}
