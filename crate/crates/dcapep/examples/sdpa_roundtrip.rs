//! Export a performance-estimation SDP to the sparse SDPA text format and
//! read it back: the round trip is exact and byte-deterministic.
//!
//! ```sh
//! cargo run --example sdpa_roundtrip
//! ```

use dcapep::params::FunctionClassParams;
use dcapep::pep::{build, export_sdpa, import_sdpa, solve_default, PepKind, PepSpec};

fn main() -> dcapep::Result<()> {
    let spec = PepSpec::new(
        PepKind::GradientGap,
        FunctionClassParams::smooth(0.0, 1.0)?,
        FunctionClassParams::nonsmooth(0.0)?,
        1,
        1.0,
    )?;
    let problem = build(&spec)?;
    let text = export_sdpa(&problem);
    println!("--- exported .dat-s ({} bytes) ---", text.len());
    for line in text.lines().take(24) {
        println!("{line}");
    }
    println!("...");

    let back = import_sdpa(&text)?;
    assert_eq!(problem, back, "round trip reproduces the problem exactly");
    assert_eq!(text, export_sdpa(&back), "re-export is byte-identical");
    println!("\nround trip: exact; re-export byte-identical");

    let a = solve_default(&problem)?;
    let b = solve_default(&back)?;
    println!(
        "solve original = {:.12}, solve re-import = {:.12} (bitwise equal: {})",
        a.objective_value,
        b.objective_value,
        a.objective_value.to_bits() == b.objective_value.to_bits()
    );
    Ok(())
}
