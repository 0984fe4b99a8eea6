//! Interactive signaling for remote decoder-power reduction: the receiver
//! of a P2P video session asks the sender for a stream that is cheaper to
//! decode, trading bitrate for battery life.
//!
//! The crate implements the DOR-req (decoder operations reduction request)
//! message of the Green Metadata standard (ISO/IEC 23001-11) end to end:
//!
//! - [`codec`] — bit-exact 48-bit message encoder/decoder with the 6-bit
//!   operations-reduction codebook and the legacy 8-bit percentage scale.
//! - [`energy`] — decoding-energy model `E = Σ nᵢ·eᵢ` and energy-aware
//!   rate-distortion candidate selection (`J = D + λR·R + λE·E`).
//! - [`profile`] — calibrated per-device savings/BDR tables (JSON).
//! - [`adaptation`] — request composition algebra, restoration planning,
//!   and the savings-target-to-request planner.
//! - [`session`] — deterministic sender/receiver session simulator with an
//!   exact energy ledger and battery accounting.
//! - [`analysis`] — relative savings, Akima-interpolated Bjontegaard-Delta
//!   rate, and device-profile extraction from measurement CSVs.
//! - [`akima`] — the piecewise-cubic interpolation used by the analysis.
//! - [`tables`] — bundled calibration profiles for several real decoders.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example encode_decode          # wire format round trips
//! cargo run --example derdo_selection        # energy-aware encoder decisions
//! cargo run --example request_planning       # savings target -> DOR-req
//! cargo run --example restoration            # undoing operations reductions
//! cargo run --example session_simulation     # battery life over a session
//! cargo run --example bdrate_analysis        # BD-rate between RD curves
//! cargo run --example profile_from_measurements  # CSV -> device profile
//! ```
//!
//! The same functionality is scriptable through the `greenreq` binary; see
//! `greenreq --help`.
//!
//! # Quick start
//!
//! ```
//! use greenreq::adaptation::{plan_request, PowerTarget};
//! use greenreq::tables;
//!
//! // A receiver on battery needs 40% less decoding energy.
//! let profile = tables::hevc_software_class_e();
//! let plan = plan_request(
//!     &profile,
//!     &PowerTarget { required_savings_pct: 40.0, max_bdr_pct: None },
//! )
//! .unwrap();
//!
//! // The planner picks the cheapest adequate action and renders the
//! // 6-byte request message to send.
//! assert_eq!(plan.expected_savings_pct, 43.76);
//! assert_eq!(plan.request.to_hex().unwrap().len(), 12);
//! ```

pub mod adaptation;
pub mod akima;
pub mod analysis;
pub mod codec;
pub mod energy;
pub mod profile;
pub mod session;
pub mod tables;
