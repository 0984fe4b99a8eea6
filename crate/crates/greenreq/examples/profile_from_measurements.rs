//! Turn raw per-sequence measurements into a device profile: reference and
//! test encodes per adaptation, energy readings per rate point, and out
//! comes the savings/rate-cost table the request planner consumes.
//!
//! Run with: cargo run --example profile_from_measurements

use greenreq::adaptation::{plan_request, PowerTarget};
use greenreq::analysis::{build_profile, read_measurements_csv};
use greenreq::profile::DecoderBackend;

// One row per (action, sequence, rate point). The "reference" action names
// the anchor both sides are compared against; energy_ref repeats the
// anchor's energy so every row carries its own baseline.
const MEASUREMENTS: &str = "\
action,sequence,quality_metric,rate,quality,energy_ref,energy_test
reference,Johnny,psnr,600,38.2,52.0,52.0
reference,Johnny,psnr,1200,40.1,60.0,60.0
reference,Johnny,psnr,2400,41.8,71.0,71.0
reference,KristenAndSara,psnr,700,37.9,55.0,55.0
reference,KristenAndSara,psnr,1400,39.8,64.0,64.0
reference,KristenAndSara,psnr,2800,41.5,75.0,75.0
disable_loop_filters,Johnny,psnr,655,38.2,52.0,39.8
disable_loop_filters,Johnny,psnr,1310,40.1,60.0,45.9
disable_loop_filters,Johnny,psnr,2620,41.8,71.0,54.3
disable_loop_filters,KristenAndSara,psnr,762,37.9,55.0,41.8
disable_loop_filters,KristenAndSara,psnr,1524,39.8,64.0,48.6
disable_loop_filters,KristenAndSara,psnr,3050,41.5,75.0,57.0
set_fps=30,Johnny,psnr,830,38.2,52.0,29.2
set_fps=30,Johnny,psnr,1660,40.1,60.0,33.7
set_fps=30,Johnny,psnr,3320,41.8,71.0,39.9
set_fps=30,KristenAndSara,psnr,960,37.9,55.0,30.9
set_fps=30,KristenAndSara,psnr,1930,39.8,64.0,36.0
set_fps=30,KristenAndSara,psnr,3860,41.5,75.0,42.1
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = read_measurements_csv(MEASUREMENTS.as_bytes())?;
    println!(
        "{} measurement rows, {} sequences",
        rows.len(),
        ["Johnny", "KristenAndSara"].len()
    );

    // Savings per action = mean over every (sequence, rate point) pair; the
    // rate cost is the per-sequence curve delta averaged across sequences.
    let profile = build_profile(&rows, DecoderBackend::Software, "ClassE")?;
    println!("\nderived profile:\n{}", profile.to_json_string());

    // The derived profile plugs straight into the planner.
    let plan = plan_request(
        &profile,
        &PowerTarget {
            required_savings_pct: 20.0,
            max_bdr_pct: Some(20.0),
        },
    )?;
    println!(
        "\nplan for 20% savings under a 20% rate cap: {} (saves {:.2}%, rate cost {})",
        plan.action,
        plan.expected_savings_pct,
        plan.expected_bdr
    );
    println!("wire message: {}", plan.request.to_hex()?);
    Ok(())
}
