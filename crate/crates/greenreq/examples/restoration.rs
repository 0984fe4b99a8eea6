//! Operations-reduction requests compose multiplicatively, and the positive
//! codewords are the only way back up. This example composes a few requests,
//! checks which single steps are exactly invertible, and plans multi-step
//! restorations back to full operations.
//!
//! Run with: cargo run --example restoration

use greenreq::adaptation::{
    cumulative_ops_factor, restoration_plan, single_request_invertible, AdaptationError, OpsRange,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Each request scales the sender's operations budget by (1 + c/100).
    // A -50% request followed by a +100% request lands exactly back at 1.0.
    let factor = cumulative_ops_factor(&[-50.0, 100.0], OpsRange::Legacy)?;
    println!("-50% then +100% -> cumulative factor {factor}");

    // The 6-bit codebook holds even percentages only. Undoing step c in one
    // request needs (100 + c)(100 + c') = 10000 with c' also in the
    // codebook, and the only even factor pair is 100 x 100: every actual
    // reduction is a one-way street.
    let invertible: Vec<i32> = (-62..=64)
        .step_by(2)
        .filter(|&c| single_request_invertible(c).unwrap())
        .collect();
    println!("\nsingle steps with an exact one-request inverse: {invertible:?}");
    for c in [-20, -36] {
        assert!(!single_request_invertible(c)?);
        println!("  {c}% has no exact one-step inverse; restoration takes a plan");
    }

    // Multi-step restoration: repeatedly apply the largest positive step
    // that does not overshoot 1 + tolerance.
    println!("\nrestoration plans:");
    for (factor, tolerance) in [(0.38, 0.05), (0.5, 0.001), (0.9, 0.05)] {
        match restoration_plan(factor, tolerance) {
            Ok(steps) => {
                let achieved = steps
                    .iter()
                    .fold(factor, |f, &c| f * (1.0 + f64::from(c) / 100.0));
                println!(
                    "  from {factor} within {tolerance}: steps {steps:?} -> factor {achieved:.6}"
                );
            }
            Err(AdaptationError::Unreachable { best_factor, residual }) => {
                println!(
                    "  from {factor} within {tolerance}: unreachable (best {best_factor:.6}, residual {residual:.6})"
                );
            }
            Err(other) => return Err(other.into()),
        }
    }

    // Tight tolerances can be genuinely unreachable: from 0.99 the smallest
    // positive step (+2%) already overshoots a 0.1% band, and doing nothing
    // leaves a 1% gap.
    match restoration_plan(0.99, 0.001) {
        Err(AdaptationError::Unreachable { best_factor, residual }) => {
            println!(
                "\nfrom 0.99 within 0.001: unreachable, best stays at {best_factor} (residual {residual:.2})"
            );
        }
        other => println!("\nfrom 0.99 within 0.001: {other:?}"),
    }
    Ok(())
}
