//! Build decoding-operation reduction requests, encode them to the 48-bit
//! wire format, and decode them back.
//!
//! Run with: cargo run --example encode_decode

use greenreq::codec::{
    legacy_ops_reduction_percent, representable_percents, DorRequest, OpsReductionCode,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A receiver that wants the sender to drop the in-loop filters and
    // fractional-sample interpolation, and to switch to 1280x720 at 30 fps.
    let req = DorRequest {
        ops_reduction: OpsReductionCode::from_percent(0)?,
        disable_loop_filters: true,
        disable_bi_prediction: false,
        disable_intra_in_b: false,
        disable_fracpel_filtering: true,
        pic_width: 1280,
        pic_height: 720,
        frames_per_second: 30,
    };
    let hex = req.to_hex()?;
    println!("request:  {hex}  ({} bytes on the wire)", req.encode()?.len());

    // Decoding returns exactly what was encoded.
    let back = DorRequest::from_hex(&hex)?;
    assert_eq!(back, req);
    println!("decoded:  {}", serde_json::to_string(&back.to_json())?);

    // The all-neutral message: ops code 31 means "0% change", zeros in the
    // width/height/fps fields mean "no change", and cleared flags leave the
    // corresponding tools alone.
    let neutral = DorRequest::no_change();
    println!("\nno-change message: {}", neutral.to_hex()?);

    // The 6-bit operations field covers every even percentage from -62
    // (largest reduction) to +64 (restoring step).
    let percents: Vec<i32> = representable_percents().collect();
    println!(
        "\nrepresentable ops changes: {} values, {}..{} in steps of 2",
        percents.len(),
        percents.first().unwrap(),
        percents.last().unwrap()
    );
    for pct in [-62, -36, 0, 2, 64] {
        let code = OpsReductionCode::from_percent(pct)?;
        println!("  {pct:>4}% -> codeword {:>2}", code.code());
    }

    // Odd percentages have no codeword; the constructor refuses them.
    let err = OpsReductionCode::from_percent(-35).unwrap_err();
    println!("  -35% -> {err}");

    // The first edition of the signaling used a signed 7.7 fixed-point
    // fraction of 128 instead; those values are mostly non-integer.
    println!("\nfirst-edition ops mapping (x -> 100*x/128):");
    for x in [-128i8, -64, 1, 127] {
        println!("  x = {x:>4} -> {}%", legacy_ops_reduction_percent(x));
    }
    Ok(())
}
