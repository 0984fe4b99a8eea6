//! Simulate a two-party video call: the receiver sends power-reduction
//! requests mid-session, the sender adapts its encoding, and an energy
//! ledger tracks what the requests actually saved.
//!
//! Run with: cargo run --example session_simulation

use greenreq::codec::{DorRequest, OpsReductionCode};
use greenreq::profile::DeviceProfile;
use greenreq::session::{run_session, EncoderConfig, Scenario, SessionState};

const PROFILE_JSON: &str = r#"{
  "decoder_backend": "software",
  "content_class": "ClassE",
  "entries": [
    {"action": {"kind": "disable_loop_filters"}, "savings_pct": 23.89, "bdr_pct": 9.52},
    {"action": {"kind": "disable_fracpel"}, "savings_pct": 19.74, "bdr_pct": 130.74},
    {"action": {"kind": "set_fps", "fps": 30}, "savings_pct": 43.76, "bdr_pct": 38.06}
  ]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let profile = DeviceProfile::from_json(PROFILE_JSON)?;

    // A phone on battery: 2 W of decode-dependent power, 0.5 W that no
    // request can touch, and 540 J left in the battery (= 3.6 minutes at
    // full drain).
    let state = SessionState::new(
        EncoderConfig::new(1920, 1080, 60)?,
        profile.clone(),
        2.0,
        0.5,
        540.0,
    )?;

    // Two requests: drop the loop filters early, then halve the frame rate.
    let loop_filters_off = DorRequest {
        disable_loop_filters: true,
        ..DorRequest::no_change()
    };
    let half_rate = DorRequest {
        ops_reduction: OpsReductionCode::from_percent(0)?,
        frames_per_second: 30,
        ..DorRequest::no_change()
    };

    let report = run_session(state, &[(30.0, loop_filters_off), (60.0, half_rate)], 300.0)?;
    print!("{}", report.render_text());
    println!(
        "battery after 300 s without the requests would be empty at t = {:.1} s",
        540.0 / 2.5
    );

    // The same session described as a scenario file (the format the
    // `greenreq simulate` subcommand reads). A 2-second uplink latency
    // shifts when each request takes effect.
    let scenario_json = format!(
        r#"{{
          "duration_s": 300.0,
          "baseline_watts": 2.0,
          "static_watts": 0.5,
          "latency_s": 2.0,
          "battery_joules": 540.0,
          "native_width": 1920,
          "native_height": 1080,
          "native_fps": 60,
          "profile": {PROFILE_JSON},
          "events": [
            {{"t_s": 30.0, "request_hex": "{}"}},
            {{"t_s": 60.0, "request_hex": "{}"}}
          ]
        }}"#,
        loop_filters_off.to_hex()?,
        half_rate.to_hex()?
    );
    let report = Scenario::from_json(&scenario_json)?.run()?;
    println!("\nsame scenario with 2 s of request latency:");
    println!("  realized savings {:.3}%", report.realized_savings_pct);
    match report.battery_exhausted_at_s {
        Some(t) => println!("  battery still empties at t = {t:.1} s"),
        None => println!("  battery lasts the whole session"),
    }
    Ok(())
}
