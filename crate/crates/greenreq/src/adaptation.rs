//! Receiver-side adaptation logic: how successive operations-reduction
//! requests compose, when they can be undone, and how a power-reduction
//! target turns into a concrete request via a calibrated device profile.

use crate::codec::{representable_percents, DorRequest};
use crate::profile::{AdaptationAction, Bdr, DeviceProfile, SavingsEntry};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AdaptationError {
    #[error("{what} of {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error(
        "no codeword sequence reaches 1.0 within the tolerance; best achievable factor {best_factor} (residual {residual})"
    )]
    Unreachable { best_factor: f64, residual: f64 },
    #[error("device profile has no entries to plan with")]
    EmptyProfile,
    #[error("profile entry cannot be rendered as a request: {0}")]
    UnrenderableEntry(String),
}

/// Which operations-reduction codebook bounds the composable percentages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpsRange {
    /// Current 6-bit codebook: even integers in [-62, +64].
    V3,
    /// Legacy signed 8-bit codebook: [-100, +100].
    Legacy,
}

impl OpsRange {
    fn bounds(self) -> (f64, f64) {
        match self {
            OpsRange::V3 => (-62.0, 64.0),
            OpsRange::Legacy => (-100.0, 100.0),
        }
    }
}

/// Cumulative effect of successive requests on the operations count:
/// each request scales the remaining operations by `1 + c/100`.
///
/// The product is commutative, and concatenating request lists multiplies
/// their factors. An empty list is the identity (factor 1.0).
pub fn cumulative_ops_factor(
    percents: &[f64],
    range: OpsRange,
) -> Result<f64, AdaptationError> {
    let (lo, hi) = range.bounds();
    let mut factor = 1.0;
    for &c in percents {
        if !c.is_finite() || c < lo || c > hi {
            return Err(AdaptationError::OutOfRange {
                what: "ops reduction percentage",
                value: c,
                lo,
                hi,
            });
        }
        factor *= 1.0 + c / 100.0;
    }
    Ok(factor)
}

/// Whether a single follow-up request can exactly undo a request of `c`
/// percent: true iff some codeword `c'` satisfies
/// `(1 + c/100)(1 + c'/100) = 1`.
///
/// Checked in exact integer arithmetic, `(100 + c)(100 + c') = 10000`;
/// within the even-integer codebook only `c = 0` has a partner.
pub fn single_request_invertible(c: i32) -> Result<bool, AdaptationError> {
    if !(-62..=64).contains(&c) {
        return Err(AdaptationError::OutOfRange {
            what: "ops reduction percentage",
            value: f64::from(c),
            lo: -62.0,
            hi: 64.0,
        });
    }
    Ok(representable_percents().any(|c_prime| (100 + c) * (100 + c_prime) == 10_000))
}

/// Plans requests that restore a reduced operations level back to normal.
///
/// Greedy largest-step-first over the codebook: each step picks the biggest
/// positive percentage that keeps the cumulative factor at or below
/// `1 + tolerance`. Succeeds once the factor is within `tolerance` of 1.0;
/// the plan never overshoots past `1 + tolerance`.
pub fn restoration_plan(
    current_factor: f64,
    tolerance: f64,
) -> Result<Vec<i32>, AdaptationError> {
    if !current_factor.is_finite() || current_factor <= 0.0 || current_factor > 1.0 {
        return Err(AdaptationError::OutOfRange {
            what: "operations factor",
            value: current_factor,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(AdaptationError::BadTolerance(tolerance));
    }

    let mut factor = current_factor;
    let mut steps = Vec::new();
    while (factor - 1.0).abs() > tolerance {
        let step = representable_percents()
            .rev()
            .find(|&c| c > 0 && factor * (1.0 + f64::from(c) / 100.0) <= 1.0 + tolerance);
        match step {
            Some(c) => {
                factor *= 1.0 + f64::from(c) / 100.0;
                steps.push(c);
            }
            None => {
                // Even the smallest positive step (+2%) would overshoot:
                // the codebook cannot land inside the tolerance band.
                return Err(AdaptationError::Unreachable {
                    best_factor: factor,
                    residual: (factor - 1.0).abs(),
                });
            }
        }
    }
    Ok(steps)
}

/// Receiver's power-reduction goal and how much rate overhead it tolerates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTarget {
    /// Dynamic-energy savings the receiver needs, in (0, 100) percent.
    pub required_savings_pct: f64,
    /// Cap on acceptable rate overhead; `None` accepts any overhead.
    pub max_bdr_pct: Option<f64>,
}

/// A planned adaptation: the chosen action, its expected effect, and the
/// wire message that requests it.
#[derive(Debug, Clone, PartialEq)]
pub struct RequestPlan {
    pub action: AdaptationAction,
    pub expected_savings_pct: f64,
    pub expected_bdr: Bdr,
    /// True when no single action meets the target and the plan falls back
    /// to the largest available saving.
    pub shortfall: bool,
    pub request: DorRequest,
}

/// Chooses the single profile action that meets the target at the least
/// rate overhead.
///
/// Among entries with savings at or above the target (and BDR within the
/// cap, unknown BDR ranking worst), the minimal-BDR entry wins; ties break
/// toward higher savings, then profile order. If nothing meets the target,
/// the maximal-savings entry is returned with `shortfall` set.
pub fn plan_request(
    profile: &DeviceProfile,
    target: &PowerTarget,
) -> Result<RequestPlan, AdaptationError> {
    if profile.is_empty() {
        return Err(AdaptationError::EmptyProfile);
    }
    if !target.required_savings_pct.is_finite()
        || target.required_savings_pct <= 0.0
        || target.required_savings_pct >= 100.0
    {
        return Err(AdaptationError::OutOfRange {
            what: "required savings percentage",
            value: target.required_savings_pct,
            lo: 0.0,
            hi: 100.0,
        });
    }

    let meets = |e: &SavingsEntry| {
        e.savings_pct >= target.required_savings_pct
            && target.max_bdr_pct.map_or(true, |cap| e.bdr_pct.rank() <= cap)
    };
    let candidate = profile
        .entries
        .iter()
        .filter(|e| meets(e))
        .min_by(|a, b| {
            a.bdr_pct
                .rank()
                .total_cmp(&b.bdr_pct.rank())
                .then(b.savings_pct.total_cmp(&a.savings_pct))
        });

    let (entry, shortfall) = match candidate {
        Some(entry) => (entry, false),
        None => {
            let fallback = profile
                .entries
                .iter()
                .max_by(|a, b| {
                    a.savings_pct
                        .total_cmp(&b.savings_pct)
                        .then(b.bdr_pct.rank().total_cmp(&a.bdr_pct.rank()))
                })
                .expect("profile is non-empty");
            (fallback, true)
        }
    };

    let request = entry
        .action
        .to_request()
        .map_err(|e| AdaptationError::UnrenderableEntry(e.to_string()))?;
    Ok(RequestPlan {
        action: entry.action,
        expected_savings_pct: entry.savings_pct,
        expected_bdr: entry.bdr_pct,
        shortfall,
        request,
    })
}
