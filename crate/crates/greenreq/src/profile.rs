//! Calibrated device profiles: measured energy savings and rate overhead of
//! each adaptation a receiver can request from the sender.
//!
//! A profile is plain data (JSON on disk), keyed by decoder backend and
//! content class. Each entry records one requestable action, the dynamic
//! energy it saves on that device, and the Bjontegaard rate overhead (BDR)
//! the sender pays for it, when known.

use crate::codec::{CodecError, DorRequest, OpsReductionCode};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProfileError {
    #[error("invalid profile JSON: {0}")]
    Json(String),
    #[error("profile lists action {0} more than once")]
    DuplicateAction(String),
    #[error("savings of {0}% for action {1} is outside (-100, 100)")]
    SavingsOutOfRange(f64, String),
    #[error("BDR for action {0} is not finite")]
    BadBdr(String),
    #[error("action {action} has an out-of-range parameter: {source}")]
    BadActionParameter {
        action: String,
        source: CodecError,
    },
    #[error("action {0} uses parameter 0, which is the wire format's no-change sentinel")]
    ZeroParameter(String),
    #[error("unknown action label {0:?}")]
    UnknownActionLabel(String),
}

/// Whether decoding runs on the CPU or on a dedicated hardware block; the
/// two regimes save very different amounts of energy for the same request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderBackend {
    Software,
    Hardware,
}

impl fmt::Display for DecoderBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderBackend::Software => "software",
            DecoderBackend::Hardware => "hardware",
        })
    }
}

impl FromStr for DecoderBackend {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, ProfileError> {
        match s {
            "software" => Ok(DecoderBackend::Software),
            "hardware" => Ok(DecoderBackend::Hardware),
            other => Err(ProfileError::UnknownActionLabel(other.to_string())),
        }
    }
}

/// One adaptation a receiver can request, mirroring the request message's
/// syntax elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdaptationAction {
    OpsReduction { percent: i32 },
    DisableLoopFilters,
    DisableBiPrediction,
    DisableIntraInB,
    DisableFracpel,
    SetResolution { width: u16, height: u16 },
    SetFps { fps: u16 },
}

impl AdaptationAction {
    /// Renders the action as a request message, leaving every other field
    /// at its no-change value.
    pub fn to_request(&self) -> Result<DorRequest, CodecError> {
        let mut req = DorRequest::no_change();
        match *self {
            AdaptationAction::OpsReduction { percent } => {
                req.ops_reduction = OpsReductionCode::from_percent(percent)?;
            }
            AdaptationAction::DisableLoopFilters => req.disable_loop_filters = true,
            AdaptationAction::DisableBiPrediction => req.disable_bi_prediction = true,
            AdaptationAction::DisableIntraInB => req.disable_intra_in_b = true,
            AdaptationAction::DisableFracpel => req.disable_fracpel_filtering = true,
            AdaptationAction::SetResolution { width, height } => {
                req.pic_width = width;
                req.pic_height = height;
            }
            AdaptationAction::SetFps { fps } => req.frames_per_second = fps,
        }
        req.validate()?;
        Ok(req)
    }

    fn validate(&self) -> Result<(), ProfileError> {
        // Resolution and frame-rate parameters of zero would collide with
        // the wire format's "no change" sentinel, so actions require them
        // to be positive.
        let zero = match *self {
            AdaptationAction::SetResolution { width, height } => width == 0 || height == 0,
            AdaptationAction::SetFps { fps } => fps == 0,
            _ => false,
        };
        if zero {
            return Err(ProfileError::ZeroParameter(self.to_string()));
        }
        self.to_request()
            .map(|_| ())
            .map_err(|source| ProfileError::BadActionParameter {
                action: self.to_string(),
                source,
            })
    }
}

impl fmt::Display for AdaptationAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AdaptationAction::OpsReduction { percent } => write!(f, "ops_reduction={percent}"),
            AdaptationAction::DisableLoopFilters => f.write_str("disable_loop_filters"),
            AdaptationAction::DisableBiPrediction => f.write_str("disable_bi_prediction"),
            AdaptationAction::DisableIntraInB => f.write_str("disable_intra_in_b"),
            AdaptationAction::DisableFracpel => f.write_str("disable_fracpel"),
            AdaptationAction::SetResolution { width, height } => {
                write!(f, "set_resolution={width}x{height}")
            }
            AdaptationAction::SetFps { fps } => write!(f, "set_fps={fps}"),
        }
    }
}

impl FromStr for AdaptationAction {
    type Err = ProfileError;

    /// Parses the compact label grammar used in CSV files and CLI output:
    /// a bare kind for flags (`disable_loop_filters`), `ops_reduction=-36`,
    /// `set_resolution=960x540`, `set_fps=30`.
    fn from_str(s: &str) -> Result<Self, ProfileError> {
        let unknown = || ProfileError::UnknownActionLabel(s.to_string());
        let (kind, param) = match s.split_once('=') {
            Some((k, p)) => (k, Some(p)),
            None => (s, None),
        };
        let action = match (kind, param) {
            ("disable_loop_filters", None) => AdaptationAction::DisableLoopFilters,
            ("disable_bi_prediction", None) => AdaptationAction::DisableBiPrediction,
            ("disable_intra_in_b", None) => AdaptationAction::DisableIntraInB,
            ("disable_fracpel", None) => AdaptationAction::DisableFracpel,
            ("ops_reduction", Some(p)) => AdaptationAction::OpsReduction {
                percent: p.parse().map_err(|_| unknown())?,
            },
            ("set_resolution", Some(p)) => {
                let (w, h) = p.split_once('x').ok_or_else(unknown)?;
                AdaptationAction::SetResolution {
                    width: w.parse().map_err(|_| unknown())?,
                    height: h.parse().map_err(|_| unknown())?,
                }
            }
            ("set_fps", Some(p)) => AdaptationAction::SetFps {
                fps: p.parse().map_err(|_| unknown())?,
            },
            _ => return Err(unknown()),
        };
        action.validate()?;
        Ok(action)
    }
}

/// Bjontegaard rate overhead of an action: the bitrate increase (percent)
/// needed to keep quality once the tool is off. `NotAvailable` marks
/// measurements where the rate-distortion curves did not overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "Option<f64>", into = "Option<f64>")]
pub enum Bdr {
    Percent(f64),
    NotAvailable,
}

impl Bdr {
    /// Ordering key: unknown BDR ranks worse than any measured value.
    pub fn rank(self) -> f64 {
        match self {
            Bdr::Percent(p) => p,
            Bdr::NotAvailable => f64::INFINITY,
        }
    }

    pub fn percent(self) -> Option<f64> {
        self.into()
    }
}

impl From<Option<f64>> for Bdr {
    fn from(v: Option<f64>) -> Self {
        match v {
            Some(p) => Bdr::Percent(p),
            None => Bdr::NotAvailable,
        }
    }
}

impl From<Bdr> for Option<f64> {
    fn from(b: Bdr) -> Self {
        match b {
            Bdr::Percent(p) => Some(p),
            Bdr::NotAvailable => None,
        }
    }
}

impl fmt::Display for Bdr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bdr::Percent(p) => write!(f, "{p:.2}%"),
            Bdr::NotAvailable => f.write_str("n/a"),
        }
    }
}

/// Measured effect of one action on one device/content pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavingsEntry {
    pub action: AdaptationAction,
    /// Dynamic decoding-energy savings in percent; negative means the
    /// action costs energy on this device.
    pub savings_pct: f64,
    pub bdr_pct: Bdr,
}

/// Savings table for one (decoder backend, content class) pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    pub decoder_backend: DecoderBackend,
    pub content_class: String,
    pub entries: Vec<SavingsEntry>,
}

impl DeviceProfile {
    pub fn from_json(json: &str) -> Result<Self, ProfileError> {
        let profile: DeviceProfile =
            serde_json::from_str(json).map_err(|e| ProfileError::Json(e.to_string()))?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        for (i, entry) in self.entries.iter().enumerate() {
            entry.action.validate()?;
            if !entry.savings_pct.is_finite()
                || entry.savings_pct <= -100.0
                || entry.savings_pct >= 100.0
            {
                return Err(ProfileError::SavingsOutOfRange(
                    entry.savings_pct,
                    entry.action.to_string(),
                ));
            }
            if let Bdr::Percent(p) = entry.bdr_pct {
                if !p.is_finite() {
                    return Err(ProfileError::BadBdr(entry.action.to_string()));
                }
            }
            if self.entries[..i].iter().any(|e| e.action == entry.action) {
                return Err(ProfileError::DuplicateAction(entry.action.to_string()));
            }
        }
        Ok(())
    }

    pub fn lookup(&self, action: &AdaptationAction) -> Option<&SavingsEntry> {
        self.entries.iter().find(|e| e.action == *action)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
