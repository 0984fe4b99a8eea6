//! Pick the right power-reduction request from a measured device profile:
//! meet a savings target at the smallest rate cost, or report the best
//! achievable shortfall.
//!
//! Run with: cargo run --example request_planning

use greenreq::adaptation::{plan_request, PowerTarget};
use greenreq::tables;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A software HEVC decoder playing conversational content. Each profile
    // entry is one adaptation with its measured dynamic-energy savings and
    // the rate overhead it costs.
    let profile = tables::hevc_software_class_e();
    println!(
        "profile: {} decoder, content class {}, {} actions",
        profile.decoder_backend,
        profile.content_class,
        profile.entries.len()
    );
    for entry in &profile.entries {
        println!(
            "  {:<24} saves {:>6.2}%   rate cost {}",
            entry.action.to_string(),
            entry.savings_pct,
            entry.bdr_pct
        );
    }

    // Climb through increasingly aggressive targets. The planner returns the
    // cheapest qualifying action (smallest rate overhead); when nothing
    // reaches the target it falls back to the biggest saver and flags the
    // shortfall.
    println!("\nplanning (no rate cap):");
    for target_pct in [5.0, 25.0, 40.0, 95.0] {
        let target = PowerTarget {
            required_savings_pct: target_pct,
            max_bdr_pct: None,
        };
        let plan = plan_request(&profile, &target)?;
        println!(
            "  want {target_pct:>4.0}% -> {:<24} saves {:>6.2}%  rate cost {:<12} shortfall: {}",
            plan.action.to_string(),
            plan.expected_savings_pct,
            plan.expected_bdr.to_string(),
            plan.shortfall
        );
        println!("             wire message: {}", plan.request.to_hex()?);
    }

    // A rate cap changes the answer: actions with unknown rate cost count as
    // unbounded, and expensive ones are excluded.
    println!("\nplanning 25% savings with a 15% rate-cost cap:");
    let capped = PowerTarget {
        required_savings_pct: 25.0,
        max_bdr_pct: Some(15.0),
    };
    let plan = plan_request(&profile, &capped)?;
    println!(
        "  -> {:<24} saves {:>6.2}%  rate cost {}  shortfall: {}",
        plan.action.to_string(),
        plan.expected_savings_pct,
        plan.expected_bdr,
        plan.shortfall
    );

    // Hardware decoders respond very differently: bitstream simplifications
    // do little, while resolution and frame-rate cuts still help.
    let hw = tables::hevc_hardware_class_b();
    let plan = plan_request(
        &hw,
        &PowerTarget {
            required_savings_pct: 30.0,
            max_bdr_pct: None,
        },
    )?;
    println!(
        "\nsame 30% target on the hardware decoder -> {} (saves {:.2}%)",
        plan.action,
        plan.expected_savings_pct
    );
    Ok(())
}
