//! Decoding-energy estimation and decoder-energy-aware rate-distortion
//! optimization (DERDO).
//!
//! The energy of decoding a coding candidate is modeled as a weighted sum of
//! per-tool feature counts, `E = sum(n_i * e_i)`. An encoder minimizes the
//! extended Lagrangian cost `J = D + lambda_R * R + lambda_E * E` over its
//! candidates; steering the energy coefficients steers which candidate wins.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Conventional tool name for fractional-sample interpolation filtering.
pub const FRACPEL_TOOL: &str = "fracpel";

/// Coefficient that makes any fracpel use dominate the cost, effectively
/// forbidding candidates that interpolate between samples.
pub const FRACPEL_AVOIDANCE_ENERGY: f64 = 65536.0;

#[derive(Debug, Error, PartialEq)]
pub enum EnergyError {
    #[error("model needs at least one tool")]
    EmptyModel,
    #[error("model has {tools} tools but {coefficients} coefficients")]
    LengthMismatch { tools: usize, coefficients: usize },
    #[error("duplicate tool name {0:?}")]
    DuplicateTool(String),
    #[error("coefficient for tool {tool:?} is {value}, must be finite and non-negative")]
    BadCoefficient { tool: String, value: f64 },
    #[error("model has no tool named {0:?}")]
    UnknownTool(String),
    #[error("candidate {id:?} has {got} feature counts, model expects {expected}")]
    CountArityMismatch {
        id: String,
        got: usize,
        expected: usize,
    },
    #[error("candidate {id:?} has a non-finite distortion or rate")]
    NonFiniteCandidate { id: String },
    #[error("lambda weights must be finite and non-negative, got rate={lambda_rate}, energy={lambda_energy}")]
    BadWeights { lambda_rate: f64, lambda_energy: f64 },
    #[error("no candidates to select from")]
    NoCandidates,
    #[error("invalid energy model JSON: {0}")]
    Json(String),
}

/// Per-tool energy cost model: parallel `tools` / `coefficients` arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyModel {
    pub tools: Vec<String>,
    pub coefficients: Vec<f64>,
}

impl EnergyModel {
    pub fn new(tools: Vec<String>, coefficients: Vec<f64>) -> Result<Self, EnergyError> {
        let model = EnergyModel {
            tools,
            coefficients,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), EnergyError> {
        if self.tools.is_empty() {
            return Err(EnergyError::EmptyModel);
        }
        if self.tools.len() != self.coefficients.len() {
            return Err(EnergyError::LengthMismatch {
                tools: self.tools.len(),
                coefficients: self.coefficients.len(),
            });
        }
        for (i, tool) in self.tools.iter().enumerate() {
            if self.tools[..i].contains(tool) {
                return Err(EnergyError::DuplicateTool(tool.clone()));
            }
            let value = self.coefficients[i];
            if !value.is_finite() || value < 0.0 {
                return Err(EnergyError::BadCoefficient {
                    tool: tool.clone(),
                    value,
                });
            }
        }
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<Self, EnergyError> {
        let model: EnergyModel =
            serde_json::from_str(json).map_err(|e| EnergyError::Json(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn tool_count(&self) -> usize {
        self.tools.len()
    }

    pub fn tool_index(&self, name: &str) -> Option<usize> {
        self.tools.iter().position(|t| t == name)
    }

    /// Derived model that forbids fractional-sample interpolation: the
    /// `fracpel` coefficient becomes overwhelming, every other one zero.
    pub fn fracpel_avoiding(&self) -> Result<EnergyModel, EnergyError> {
        self.validate()?;
        let idx = self
            .tool_index(FRACPEL_TOOL)
            .ok_or_else(|| EnergyError::UnknownTool(FRACPEL_TOOL.to_string()))?;
        let mut coefficients = vec![0.0; self.tools.len()];
        coefficients[idx] = FRACPEL_AVOIDANCE_ENERGY;
        Ok(EnergyModel {
            tools: self.tools.clone(),
            coefficients,
        })
    }
}

/// Per-tool feature counts of one coding candidate, parallel to the model's
/// tool list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureCounts(pub Vec<u64>);

/// One encoding option under evaluation: its fidelity cost, bit cost, and
/// how often it exercises each modeled tool.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodingCandidate {
    pub id: String,
    pub distortion: f64,
    pub rate: f64,
    pub counts: FeatureCounts,
}

/// Multipliers weighing rate and energy against distortion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeWeights {
    pub lambda_rate: f64,
    pub lambda_energy: f64,
}

impl LagrangeWeights {
    pub fn new(lambda_rate: f64, lambda_energy: f64) -> Result<Self, EnergyError> {
        if !lambda_rate.is_finite()
            || !lambda_energy.is_finite()
            || lambda_rate < 0.0
            || lambda_energy < 0.0
        {
            return Err(EnergyError::BadWeights {
                lambda_rate,
                lambda_energy,
            });
        }
        Ok(LagrangeWeights {
            lambda_rate,
            lambda_energy,
        })
    }
}

/// Estimated decoding energy `sum(n_i * e_i)` of one candidate.
pub fn estimate_energy(model: &EnergyModel, counts: &FeatureCounts) -> Result<f64, EnergyError> {
    model.validate()?;
    if counts.0.len() != model.tool_count() {
        return Err(EnergyError::CountArityMismatch {
            id: String::new(),
            got: counts.0.len(),
            expected: model.tool_count(),
        });
    }
    Ok(counts
        .0
        .iter()
        .zip(&model.coefficients)
        .map(|(&n, &e)| n as f64 * e)
        .sum())
}

/// Extended Lagrangian cost `J = D + lambda_R * R + lambda_E * E`.
pub fn cost(
    candidate: &CodingCandidate,
    weights: LagrangeWeights,
    model: &EnergyModel,
) -> Result<f64, EnergyError> {
    if !candidate.distortion.is_finite() || !candidate.rate.is_finite() {
        return Err(EnergyError::NonFiniteCandidate {
            id: candidate.id.clone(),
        });
    }
    let energy = estimate_energy(model, &candidate.counts).map_err(|e| match e {
        EnergyError::CountArityMismatch { got, expected, .. } => EnergyError::CountArityMismatch {
            id: candidate.id.clone(),
            got,
            expected,
        },
        other => other,
    })?;
    Ok(candidate.distortion + weights.lambda_rate * candidate.rate + weights.lambda_energy * energy)
}

/// Selects the candidate of minimum cost. Exact cost ties break toward
/// lower distortion, then lower rate, then earlier list position, so the
/// selection is deterministic.
pub fn derdo_select<'a>(
    candidates: &'a [CodingCandidate],
    weights: LagrangeWeights,
    model: &EnergyModel,
) -> Result<&'a CodingCandidate, EnergyError> {
    let mut best: Option<(&CodingCandidate, f64)> = None;
    for candidate in candidates {
        let j = cost(candidate, weights, model)?;
        best = Some(match best {
            None => (candidate, j),
            Some((incumbent, best_j)) => {
                let challenger_wins = j < best_j
                    || (j == best_j
                        && (candidate.distortion < incumbent.distortion
                            || (candidate.distortion == incumbent.distortion
                                && candidate.rate < incumbent.rate)));
                if challenger_wins {
                    (candidate, j)
                } else {
                    (incumbent, best_j)
                }
            }
        });
    }
    best.map(|(c, _)| c).ok_or(EnergyError::NoCandidates)
}

/// Parses a JSON array of coding candidates.
pub fn candidates_from_json(json: &str) -> Result<Vec<CodingCandidate>, serde_json::Error> {
    serde_json::from_str(json)
}
