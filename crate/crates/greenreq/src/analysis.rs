//! Measurement analytics: relative dynamic-energy savings, Bjontegaard-
//! Delta rate over Akima-interpolated rate-distortion curves, and device-
//! profile extraction from raw measurement tables.

use crate::akima::AkimaSpline;
use crate::profile::{
    AdaptationAction, Bdr, DecoderBackend, DeviceProfile, ProfileError, SavingsEntry,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("reference energy must be positive, got {0} J")]
    NonPositiveReference(f64),
    #[error("energy measurement {label:?} has invalid value {value} J")]
    BadMeasurement { label: String, value: f64 },
    #[error("malformed rate-distortion curve: {0}")]
    MalformedCurve(String),
    #[error("CSV ingestion failed: {0}")]
    Csv(String),
    #[error("misaligned measurements: {0}")]
    MisalignedMeasurements(String),
    #[error(transparent)]
    BadAction(#[from] ProfileError),
}

/// One rate-distortion operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RdPoint {
    pub rate: f64,
    pub quality: f64,
}

/// Rate-distortion curve: at least two points, strictly increasing in
/// quality, positive rates. Valid by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RdCurve {
    points: Vec<RdPoint>,
}

impl RdCurve {
    pub fn new(points: Vec<RdPoint>) -> Result<Self, AnalysisError> {
        if points.len() < 2 {
            return Err(AnalysisError::MalformedCurve(format!(
                "need at least 2 rate points, got {}",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.rate.is_finite() || p.rate <= 0.0 || !p.quality.is_finite() {
                return Err(AnalysisError::MalformedCurve(format!(
                    "point {i} (rate {}, quality {}) is not a positive-rate finite point",
                    p.rate, p.quality
                )));
            }
            if i > 0 && p.quality <= points[i - 1].quality {
                return Err(AnalysisError::MalformedCurve(format!(
                    "quality must be strictly increasing: point {i} has quality {}",
                    p.quality
                )));
            }
        }
        Ok(RdCurve { points })
    }

    pub fn points(&self) -> &[RdPoint] {
        &self.points
    }

    pub fn quality_span(&self) -> (f64, f64) {
        (
            self.points[0].quality,
            self.points[self.points.len() - 1].quality,
        )
    }

    /// The interpolant the rate-overhead metric integrates: quality on the
    /// x axis, log10 of rate on the y axis.
    pub fn log_rate_spline(&self) -> AkimaSpline {
        let knots: Vec<(f64, f64)> = self
            .points
            .iter()
            .map(|p| (p.quality, p.rate.log10()))
            .collect();
        AkimaSpline::new(&knots).expect("curve validated at construction")
    }
}

/// A labeled energy reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyMeasurement {
    pub label: String,
    pub energy_joules: f64,
}

impl EnergyMeasurement {
    pub fn new(label: impl Into<String>, energy_joules: f64) -> Self {
        EnergyMeasurement {
            label: label.into(),
            energy_joules,
        }
    }
}

/// Energy saved by `test` relative to `reference`, as
/// `100 * (1 - test/reference)` percent: positive means the test run
/// consumed less.
pub fn relative_savings(
    reference: &EnergyMeasurement,
    test: &EnergyMeasurement,
) -> Result<f64, AnalysisError> {
    if !reference.energy_joules.is_finite() || reference.energy_joules <= 0.0 {
        return Err(AnalysisError::NonPositiveReference(reference.energy_joules));
    }
    if !test.energy_joules.is_finite() || test.energy_joules < 0.0 {
        return Err(AnalysisError::BadMeasurement {
            label: test.label.clone(),
            value: test.energy_joules,
        });
    }
    Ok(100.0 * (1.0 - test.energy_joules / reference.energy_joules))
}

/// Trapezoid sample count for the BD-rate integral; the integrand is a
/// piecewise cubic, so this is far more than needed for 0.01% accuracy.
const BD_SAMPLES: usize = 1024;

/// Bjontegaard-Delta rate of `test` against `reference`: the average
/// bitrate change (percent) at equal quality.
///
/// Interpolates `log10(rate)` over quality with an Akima spline per curve
/// and integrates the difference across the overlapping quality interval.
/// Returns `NotAvailable` when the curves' quality spans do not overlap in
/// more than a single point.
pub fn bd_rate(reference: &RdCurve, test: &RdCurve) -> Bdr {
    let (ref_lo, ref_hi) = reference.quality_span();
    let (test_lo, test_hi) = test.quality_span();
    let lo = ref_lo.max(test_lo);
    let hi = ref_hi.min(test_hi);
    if !(hi > lo) {
        return Bdr::NotAvailable;
    }
    let ref_spline = reference.log_rate_spline();
    let test_spline = test.log_rate_spline();
    let h = (hi - lo) / BD_SAMPLES as f64;
    let mut sum = 0.0;
    for i in 0..=BD_SAMPLES {
        let q = lo + h * i as f64;
        let diff = test_spline.evaluate(q) - ref_spline.evaluate(q);
        let weight = if i == 0 || i == BD_SAMPLES { 0.5 } else { 1.0 };
        sum += weight * diff;
    }
    let mean_log_diff = sum / BD_SAMPLES as f64;
    Bdr::Percent(100.0 * (10f64.powf(mean_log_diff) - 1.0))
}

/// Reserved action label whose rows carry the unadapted encoder's
/// rate-distortion curve, the anchor every BDR is measured against.
pub const REFERENCE_ACTION: &str = "reference";

/// One measurement row: an action evaluated on one sequence at one rate
/// point, with the paired baseline/adapted energy readings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRow {
    pub action: String,
    pub sequence: String,
    pub quality_metric: String,
    pub rate: f64,
    pub quality: f64,
    pub energy_ref: f64,
    pub energy_test: f64,
}

/// Reads measurement rows from CSV with the header
/// `action,sequence,quality_metric,rate,quality,energy_ref,energy_test`.
pub fn read_measurements_csv<R: io::Read>(reader: R) -> Result<Vec<MeasurementRow>, AnalysisError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in csv_reader.deserialize() {
        let row: MeasurementRow = record.map_err(|e| AnalysisError::Csv(e.to_string()))?;
        rows.push(row);
    }
    Ok(rows)
}

fn curve_from_rows(rows: &[&MeasurementRow]) -> Result<RdCurve, AnalysisError> {
    let mut points: Vec<RdPoint> = rows
        .iter()
        .map(|r| RdPoint {
            rate: r.rate,
            quality: r.quality,
        })
        .collect();
    points.sort_by(|a, b| a.quality.total_cmp(&b.quality));
    RdCurve::new(points)
}

/// Builds a device profile from raw measurements.
///
/// Per action: savings is the mean of the per-row relative savings over
/// every sequence and rate point; BDR is the per-sequence `bd_rate`
/// against that sequence's `reference` rows, averaged — and `NotAvailable`
/// as soon as any sequence lacks a computable BDR (missing or too-short
/// reference curve, too few test points, or non-overlapping quality spans).
pub fn build_profile(
    rows: &[MeasurementRow],
    decoder_backend: DecoderBackend,
    content_class: impl Into<String>,
) -> Result<DeviceProfile, AnalysisError> {
    if rows.is_empty() {
        return Err(AnalysisError::MisalignedMeasurements(
            "no measurement rows".into(),
        ));
    }
    for row in rows {
        let metric_mismatch = rows
            .iter()
            .find(|r| r.sequence == row.sequence && r.quality_metric != row.quality_metric);
        if let Some(other) = metric_mismatch {
            return Err(AnalysisError::MisalignedMeasurements(format!(
                "sequence {:?} mixes quality metrics {:?} and {:?}",
                row.sequence, row.quality_metric, other.quality_metric
            )));
        }
    }

    // Reference curve per sequence; sequences whose reference has fewer
    // than two points cannot anchor a BDR.
    let mut reference_curves: BTreeMap<&str, Option<RdCurve>> = BTreeMap::new();
    let mut by_sequence: BTreeMap<&str, Vec<&MeasurementRow>> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.action == REFERENCE_ACTION) {
        by_sequence.entry(&row.sequence).or_default().push(row);
    }
    for (sequence, seq_rows) in by_sequence {
        let curve = if seq_rows.len() >= 2 {
            Some(curve_from_rows(&seq_rows).map_err(|e| {
                AnalysisError::MalformedCurve(format!("reference curve for {sequence:?}: {e}"))
            })?)
        } else {
            None
        };
        reference_curves.insert(sequence, curve);
    }

    let mut actions_in_order: Vec<&str> = Vec::new();
    for row in rows.iter().filter(|r| r.action != REFERENCE_ACTION) {
        if !actions_in_order.contains(&row.action.as_str()) {
            actions_in_order.push(&row.action);
        }
    }
    if actions_in_order.is_empty() {
        return Err(AnalysisError::MisalignedMeasurements(
            "only reference rows present, no actions to profile".into(),
        ));
    }

    let mut entries = Vec::with_capacity(actions_in_order.len());
    for label in actions_in_order {
        let action: AdaptationAction = label.parse()?;
        let action_rows: Vec<&MeasurementRow> =
            rows.iter().filter(|r| r.action == label).collect();

        let mut savings_sum = 0.0;
        for row in &action_rows {
            let reference = EnergyMeasurement::new(format!("{label}/{}", row.sequence), row.energy_ref);
            let test = EnergyMeasurement::new(format!("{label}/{}", row.sequence), row.energy_test);
            savings_sum += relative_savings(&reference, &test)?;
        }
        let savings_pct = savings_sum / action_rows.len() as f64;

        let mut sequences: Vec<&str> = Vec::new();
        for row in &action_rows {
            if !sequences.contains(&row.sequence.as_str()) {
                sequences.push(&row.sequence);
            }
        }
        let mut bdr_sum = 0.0;
        let mut bdr = Bdr::Percent(0.0);
        for sequence in &sequences {
            let seq_rows: Vec<&MeasurementRow> = action_rows
                .iter()
                .filter(|r| r.sequence == *sequence)
                .copied()
                .collect();
            let per_sequence = match reference_curves.get(sequence) {
                Some(Some(reference)) if seq_rows.len() >= 2 => {
                    let test = curve_from_rows(&seq_rows).map_err(|e| {
                        AnalysisError::MalformedCurve(format!(
                            "curve for action {label:?} on {sequence:?}: {e}"
                        ))
                    })?;
                    bd_rate(reference, &test)
                }
                _ => Bdr::NotAvailable,
            };
            match per_sequence {
                Bdr::Percent(p) => bdr_sum += p,
                Bdr::NotAvailable => {
                    bdr = Bdr::NotAvailable;
                    break;
                }
            }
        }
        if let Bdr::Percent(_) = bdr {
            bdr = Bdr::Percent(bdr_sum / sequences.len() as f64);
        }

        entries.push(SavingsEntry {
            action,
            savings_pct,
            bdr_pct: bdr,
        });
    }

    let profile = DeviceProfile {
        decoder_backend,
        content_class: content_class.into(),
        entries,
    };
    profile.validate()?;
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn curve(points: &[(f64, f64)]) -> RdCurve {
        RdCurve::new(
            points
                .iter()
                .map(|&(rate, quality)| RdPoint { rate, quality })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn savings_sign_convention() {
        let reference = EnergyMeasurement::new("baseline", 100.0);
        assert!(close(
            relative_savings(&reference, &EnergyMeasurement::new("t", 21.79)).unwrap(),
            78.21,
            1e-12
        ));
        assert_eq!(
            relative_savings(&reference, &reference.clone()).unwrap(),
            0.0
        );
        assert!(close(
            relative_savings(&reference, &EnergyMeasurement::new("t", 100.91)).unwrap(),
            -0.91,
            1e-12
        ));
    }

    #[test]
    fn savings_round_trip_to_ratio() {
        let reference = EnergyMeasurement::new("ref", 137.5);
        for test_energy in [0.5, 13.0, 137.5, 200.0] {
            let test = EnergyMeasurement::new("test", test_energy);
            let s = relative_savings(&reference, &test).unwrap();
            let ratio = 1.0 - s / 100.0;
            assert!(close(ratio, test_energy / 137.5, 1e-12));
        }
    }

    #[test]
    fn savings_validation() {
        let zero = EnergyMeasurement::new("z", 0.0);
        let ok = EnergyMeasurement::new("ok", 1.0);
        assert_eq!(
            relative_savings(&zero, &ok).unwrap_err(),
            AnalysisError::NonPositiveReference(0.0)
        );
        assert!(relative_savings(&ok, &EnergyMeasurement::new("n", -1.0)).is_err());
        // Zero test energy is a valid 100% saving.
        assert_eq!(relative_savings(&ok, &zero).unwrap(), 100.0);
    }

    #[test]
    fn bd_rate_of_identical_curves_is_zero() {
        let a = curve(&[(1000.0, 30.0), (2000.0, 33.0), (4000.0, 36.0), (8000.0, 39.0)]);
        match bd_rate(&a, &a) {
            Bdr::Percent(p) => assert!(p.abs() <= 1e-9, "{p}"),
            Bdr::NotAvailable => panic!("identical curves must have a BDR"),
        }
    }

    #[test]
    fn doubled_rates_cost_one_hundred_percent() {
        let reference = curve(&[(1000.0, 30.0), (2000.0, 33.0), (4000.0, 36.0), (8000.0, 39.0)]);
        let test = curve(&[(2000.0, 30.0), (4000.0, 33.0), (8000.0, 36.0), (16000.0, 39.0)]);
        match bd_rate(&reference, &test) {
            Bdr::Percent(p) => assert!(close(p, 100.0, 0.05), "{p}"),
            Bdr::NotAvailable => panic!("overlapping curves must have a BDR"),
        }
    }

    #[test]
    fn no_quality_overlap_means_not_available() {
        let reference = curve(&[(1000.0, 30.0), (2000.0, 34.0), (4000.0, 38.0)]);
        let test = curve(&[(500.0, 40.0), (900.0, 42.5), (1500.0, 45.0)]);
        assert_eq!(bd_rate(&reference, &test), Bdr::NotAvailable);
        // Touching in a single point is still degenerate.
        let touching = curve(&[(500.0, 38.0), (900.0, 42.5), (1500.0, 45.0)]);
        assert_eq!(bd_rate(&reference, &touching), Bdr::NotAvailable);
    }

    #[test]
    fn bd_rate_reciprocity() {
        let a = curve(&[(800.0, 29.5), (1700.0, 32.8), (3600.0, 36.2), (7000.0, 38.9)]);
        let b = curve(&[(1000.0, 30.0), (2100.0, 33.1), (4500.0, 36.0), (9000.0, 39.5)]);
        let (Bdr::Percent(ab), Bdr::Percent(ba)) = (bd_rate(&a, &b), bd_rate(&b, &a)) else {
            panic!("overlapping curves must have BDRs");
        };
        let product = (1.0 + ab / 100.0) * (1.0 + ba / 100.0);
        assert!(close(product, 1.0, 1e-9), "{product}");
    }

    #[test]
    fn rejects_malformed_curves() {
        assert!(RdCurve::new(vec![RdPoint { rate: 1.0, quality: 30.0 }]).is_err());
        assert!(RdCurve::new(vec![
            RdPoint { rate: 1.0, quality: 30.0 },
            RdPoint { rate: 2.0, quality: 30.0 },
        ])
        .is_err());
        assert!(RdCurve::new(vec![
            RdPoint { rate: -1.0, quality: 30.0 },
            RdPoint { rate: 2.0, quality: 33.0 },
        ])
        .is_err());
    }

    fn reference_rows(sequence: &str, scale: f64) -> Vec<MeasurementRow> {
        [(1000.0, 30.0), (2000.0, 33.0), (4000.0, 36.0), (8000.0, 39.0)]
            .iter()
            .map(|&(rate, quality)| MeasurementRow {
                action: REFERENCE_ACTION.into(),
                sequence: sequence.into(),
                quality_metric: "psnr".into(),
                rate: rate * scale,
                quality,
                energy_ref: 100.0,
                energy_test: 100.0,
            })
            .collect()
    }

    fn action_rows(
        action: &str,
        sequence: &str,
        rate_scale: f64,
        energy_test: f64,
    ) -> Vec<MeasurementRow> {
        [(1000.0, 30.0), (2000.0, 33.0), (4000.0, 36.0), (8000.0, 39.0)]
            .iter()
            .map(|&(rate, quality)| MeasurementRow {
                action: action.into(),
                sequence: sequence.into(),
                quality_metric: "psnr".into(),
                rate: rate * rate_scale,
                quality,
                energy_ref: 100.0,
                energy_test,
            })
            .collect()
    }

    #[test]
    fn build_profile_averages_savings_and_bdr() {
        let mut rows = reference_rows("seq-a", 1.0);
        rows.extend(reference_rows("seq-b", 1.0));
        // 40% savings on one sequence, 60% on the other; rates doubled on
        // both, so BDR should land near +100 on each.
        rows.extend(action_rows("set_fps=30", "seq-a", 2.0, 60.0));
        rows.extend(action_rows("set_fps=30", "seq-b", 2.0, 40.0));
        let profile = build_profile(&rows, DecoderBackend::Software, "ClassE").unwrap();
        assert_eq!(profile.entries.len(), 1);
        let entry = &profile.entries[0];
        assert_eq!(entry.action, AdaptationAction::SetFps { fps: 30 });
        assert!(close(entry.savings_pct, 50.0, 1e-9));
        match entry.bdr_pct {
            Bdr::Percent(p) => assert!(close(p, 100.0, 0.1), "{p}"),
            Bdr::NotAvailable => panic!("both sequences have references"),
        }
    }

    #[test]
    fn missing_reference_poisons_bdr_not_savings() {
        let mut rows = reference_rows("seq-a", 1.0);
        rows.extend(action_rows("disable_loop_filters", "seq-a", 1.1, 80.0));
        rows.extend(action_rows("disable_loop_filters", "seq-b", 1.1, 60.0));
        let profile = build_profile(&rows, DecoderBackend::Software, "ClassB").unwrap();
        let entry = &profile.entries[0];
        assert_eq!(entry.bdr_pct, Bdr::NotAvailable);
        assert!(close(entry.savings_pct, 30.0, 1e-9));
    }

    #[test]
    fn non_overlapping_sequence_poisons_bdr() {
        let mut rows = reference_rows("seq-a", 1.0);
        // Test curve sits entirely above the reference quality span.
        let shifted: Vec<MeasurementRow> = action_rows("disable_fracpel", "seq-a", 1.0, 50.0)
            .into_iter()
            .map(|mut r| {
                r.quality += 20.0;
                r
            })
            .collect();
        rows.extend(shifted);
        let profile = build_profile(&rows, DecoderBackend::Software, "ClassE").unwrap();
        assert_eq!(profile.entries[0].bdr_pct, Bdr::NotAvailable);
    }

    #[test]
    fn build_profile_rejects_bad_tables() {
        assert!(matches!(
            build_profile(&[], DecoderBackend::Software, "x").unwrap_err(),
            AnalysisError::MisalignedMeasurements(_)
        ));
        let only_reference = reference_rows("seq-a", 1.0);
        assert!(matches!(
            build_profile(&only_reference, DecoderBackend::Software, "x").unwrap_err(),
            AnalysisError::MisalignedMeasurements(_)
        ));
        let mut mixed_metric = reference_rows("seq-a", 1.0);
        mixed_metric[1].quality_metric = "ssim".into();
        assert!(matches!(
            build_profile(&mixed_metric, DecoderBackend::Software, "x").unwrap_err(),
            AnalysisError::MisalignedMeasurements(_)
        ));
        let mut bad_action = reference_rows("seq-a", 1.0);
        bad_action.extend(action_rows("warp_drive", "seq-a", 1.0, 50.0));
        assert!(matches!(
            build_profile(&bad_action, DecoderBackend::Software, "x").unwrap_err(),
            AnalysisError::BadAction(_)
        ));
    }

    #[test]
    fn csv_round_trip() {
        let csv_text = "\
action,sequence,quality_metric,rate,quality,energy_ref,energy_test
reference,seq-a,psnr,1000,30,100,100
reference,seq-a,psnr,2000,33,100,100
reference,seq-a,psnr,4000,36,100,100
reference,seq-a,psnr,8000,39,100,100
set_fps=30,seq-a,psnr,950,29.8,100,56.93
set_fps=30,seq-a,psnr,1900,32.9,100,56.93
set_fps=30,seq-a,psnr,3800,35.7,100,56.93
set_fps=30,seq-a,psnr,7600,38.8,100,56.93
";
        let rows = read_measurements_csv(csv_text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 8);
        let profile = build_profile(&rows, DecoderBackend::Software, "ClassB").unwrap();
        assert!(close(profile.entries[0].savings_pct, 43.07, 1e-9));
        assert!(matches!(profile.entries[0].bdr_pct, Bdr::Percent(_)));

        let bad = read_measurements_csv("action,sequence\nreference,x\n".as_bytes());
        assert!(matches!(bad.unwrap_err(), AnalysisError::Csv(_)));
    }
}
