//! Energy-aware mode selection at the encoder: extend the usual
//! rate-distortion cost with a decoding-energy term and watch the chosen
//! coding mode change as the energy weight grows.
//!
//! Run with: cargo run --example derdo_selection

use greenreq::energy::{
    cost, derdo_select, estimate_energy, CodingCandidate, EnergyModel, FeatureCounts,
    LagrangeWeights,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A feature-count energy model: decoding energy is a weighted sum of how
    // often each tool runs. Units are arbitrary but consistent.
    let model = EnergyModel::new(
        vec!["dbf".into(), "sao".into(), "fracpel".into()],
        vec![40.0, 25.0, 300.0],
    )?;

    // Three ways to code the same block. The fractional-pel candidate has the
    // best distortion but decodes expensively.
    let candidates = vec![
        CodingCandidate {
            id: "inter-fracpel".into(),
            distortion: 100.0,
            rate: 110.0,
            counts: FeatureCounts(vec![2, 2, 6]),
        },
        CodingCandidate {
            id: "inter-intpel".into(),
            distortion: 118.0,
            rate: 112.0,
            counts: FeatureCounts(vec![2, 2, 0]),
        },
        CodingCandidate {
            id: "intra".into(),
            distortion: 125.0,
            rate: 140.0,
            counts: FeatureCounts(vec![2, 2, 0]),
        },
    ];

    for c in &candidates {
        println!(
            "{:<14} D = {:>5.1}  R = {:>5.1}  E = {:>6.1}",
            c.id,
            c.distortion,
            c.rate,
            estimate_energy(&model, &c.counts)?
        );
    }

    // Sweep the energy weight. With lambda_energy = 0 this is plain
    // rate-distortion optimization; as the weight grows, the selector trades
    // distortion for decode energy.
    println!("\nlambda_energy sweep (lambda_rate = 1):");
    for lambda_energy in [0.0, 0.005, 0.02, 0.1] {
        let weights = LagrangeWeights::new(1.0, lambda_energy)?;
        let chosen = derdo_select(&candidates, weights, &model)?;
        println!(
            "  lambda_energy = {lambda_energy:<6} -> {:<14} (J = {:.2})",
            chosen.id,
            cost(chosen, weights, &model)?
        );
    }

    // A decoder that asked for integer-pel-only motion compensation is
    // modeled by a huge penalty on the fracpel tool and zero elsewhere: the
    // encoder then avoids fractional-pel candidates whenever any
    // integer-pel alternative exists.
    let avoiding = model.fracpel_avoiding()?;
    let weights = LagrangeWeights::new(1.0, 1.0)?;
    let chosen = derdo_select(&candidates, weights, &avoiding)?;
    println!("\nwith the fracpel-avoidance model the selector picks: {}", chosen.id);
    Ok(())
}
