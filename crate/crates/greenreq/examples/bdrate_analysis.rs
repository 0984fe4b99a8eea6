//! Measure the rate cost of a decoder-friendly encoding: fit monotone
//! rate-quality curves, then compute the Bjontegaard-Delta rate between the
//! anchor and the constrained encoding.
//!
//! Run with: cargo run --example bdrate_analysis

use greenreq::akima::AkimaSpline;
use greenreq::analysis::{bd_rate, relative_savings, EnergyMeasurement, RdCurve, RdPoint};

fn curve(points: &[(f64, f64)]) -> Result<RdCurve, Box<dyn std::error::Error>> {
    Ok(RdCurve::new(
        points
            .iter()
            .map(|&(rate, quality)| RdPoint { rate, quality })
            .collect(),
    )?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Four rate points per curve, PSNR in dB vs kbit/s. The test encoding
    // needs more rate for the same quality.
    let anchor = curve(&[
        (1000.0, 34.10),
        (2000.0, 36.80),
        (4000.0, 39.45),
        (8000.0, 41.90),
    ])?;
    let constrained = curve(&[
        (1150.0, 34.05),
        (2310.0, 36.90),
        (4580.0, 39.50),
        (9100.0, 41.95),
    ])?;

    // Interpolation happens on (quality, log10 rate); the average vertical
    // gap between the two splines over the shared quality range, mapped back
    // out of log space, is the average rate overhead.
    println!("anchor quality span:      {:?}", anchor.quality_span());
    println!("constrained quality span: {:?}", constrained.quality_span());
    println!("rate overhead: {}", bd_rate(&anchor, &constrained));
    println!("flipped sides: {}", bd_rate(&constrained, &anchor));

    // The splines behind the metric are shape-preserving cubics; local and
    // without the ringing a global polynomial fit would add.
    let spline = anchor.log_rate_spline();
    println!("\nlog10(rate) along the anchor curve:");
    for q in [34.5, 36.0, 38.0, 41.0] {
        println!("  {q:.1} dB -> {:.1} kbit/s", 10f64.powf(spline.evaluate(q)));
    }

    // A plain spline over arbitrary knots, for comparison with the curve
    // helpers above.
    let s = AkimaSpline::new(&[(0.0, 0.0), (1.0, 1.0), (2.0, 4.0), (3.0, 9.0), (4.0, 16.0)])?;
    println!("\nspline through y = x^2 samples: s(2.5) = {}", s.evaluate(2.5));

    // Curves that share no quality range have no meaningful delta.
    let low = curve(&[(100.0, 20.0), (200.0, 24.0)])?;
    let high = curve(&[(5000.0, 40.0), (9000.0, 44.0)])?;
    println!("\ndisjoint quality ranges: {}", bd_rate(&low, &high));

    // Energy side of the same comparison: savings relative to the anchor
    // decode.
    let reference = EnergyMeasurement::new("anchor decode", 412.0);
    let test = EnergyMeasurement::new("constrained decode", 341.0);
    println!(
        "\ndecode energy: {:.0} J vs {:.0} J -> {:.2}% saved",
        reference.energy_joules,
        test.energy_joules,
        relative_savings(&reference, &test)?
    );
    Ok(())
}
