//! Deterministic P2P session simulator: a receiver sends DOR-req messages,
//! the sender maps them onto its encoder configuration, and the receiver's
//! dynamic decoding power scales by the calibrated savings of every active
//! adaptation.
//!
//! Time is event-driven — power is constant between requests, so energy
//! accrues in exact closed form per segment and identical scenarios produce
//! bit-identical ledgers.

use crate::codec::{CodecError, DorRequest, OpsReductionCode};
use crate::profile::{AdaptationAction, DeviceProfile, ProfileError};
use serde::Deserialize;
use serde_json::json;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SessionError {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("battery level must be non-negative, got {0}")]
    NegativeBattery(f64),
    #[error("session has ended: the battery is exhausted")]
    SessionEnded,
    #[error("invalid scenario: {0}")]
    BadScenario(String),
    #[error("scenario JSON did not parse: {0}")]
    Json(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Abstract sender-side encoder configuration, one field per knob the
/// request message can steer (tool switches, operations-reduction target,
/// output scaling, output frame rate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderConfig {
    pub no_dbf: bool,
    pub no_sao: bool,
    pub bframes_zero: bool,
    pub no_b_intra: bool,
    pub forbid_fracpel: bool,
    pub derdo_percent: Option<i32>,
    pub out_width: u16,
    pub out_height: u16,
    pub out_fps: u16,
}

impl EncoderConfig {
    pub fn new(width: u16, height: u16, fps: u16) -> Result<Self, SessionError> {
        for (what, value) in [
            ("output width", width),
            ("output height", height),
            ("output fps", fps),
        ] {
            if value == 0 {
                return Err(SessionError::NonPositive {
                    what,
                    value: 0.0,
                });
            }
        }
        Ok(EncoderConfig {
            no_dbf: false,
            no_sao: false,
            bframes_zero: false,
            no_b_intra: false,
            forbid_fracpel: false,
            derdo_percent: None,
            out_width: width,
            out_height: height,
            out_fps: fps,
        })
    }

    /// Applies one request: set flags stay set (the wire format has no
    /// re-enable bit), nonzero resolution/fps fields overwrite the output
    /// scaling, a non-neutral ops code (re)targets the encoder's
    /// energy-aware mode, and sentinel fields leave the config untouched.
    pub fn apply_request(&self, req: &DorRequest) -> EncoderConfig {
        let mut next = *self;
        if req.disable_loop_filters {
            next.no_dbf = true;
            next.no_sao = true;
        }
        if req.disable_bi_prediction {
            next.bframes_zero = true;
        }
        if req.disable_intra_in_b {
            next.no_b_intra = true;
        }
        if req.disable_fracpel_filtering {
            next.forbid_fracpel = true;
        }
        if req.ops_reduction != OpsReductionCode::ZERO_PERCENT {
            next.derdo_percent = Some(req.ops_reduction.percent());
        }
        if req.pic_width != 0 {
            next.out_width = req.pic_width;
        }
        if req.pic_height != 0 {
            next.out_height = req.pic_height;
        }
        if req.frames_per_second != 0 {
            next.out_fps = req.frames_per_second;
        }
        next
    }
}

/// Receiver-side state: its calibrated profile and battery budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverState {
    pub profile: DeviceProfile,
    /// Remaining battery; `f64::INFINITY` models mains power.
    pub battery_joules: f64,
    /// Dynamic decoding power before any adaptation.
    pub drain_watts_baseline: f64,
}

/// One applied request and the dynamic power that resulted.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEvent {
    pub t_s: f64,
    pub request: DorRequest,
    pub dynamic_watts_after: f64,
}

/// Running energy account: what the session consumed versus what it would
/// have consumed with no requests, over the same wall-clock interval.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyLedger {
    pub baseline_energy_joules: f64,
    pub actual_energy_joules: f64,
    pub events: Vec<LedgerEvent>,
}

impl EnergyLedger {
    pub fn saved_joules(&self) -> f64 {
        self.baseline_energy_joules - self.actual_energy_joules
    }

    /// Savings realized so far: `100 * (1 - actual/baseline)`; zero while
    /// nothing has been consumed.
    pub fn realized_savings_pct(&self) -> f64 {
        if self.baseline_energy_joules == 0.0 {
            0.0
        } else {
            100.0 * (1.0 - self.actual_energy_joules / self.baseline_energy_joules)
        }
    }
}

/// Full state of one simulated sender/receiver session.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionState {
    baseline_config: EncoderConfig,
    pub sender: EncoderConfig,
    pub receiver: ReceiverState,
    /// Idle floor the adaptations cannot touch.
    pub static_watts: f64,
    pub clock_s: f64,
    pub ledger: EnergyLedger,
    exhausted_at_s: Option<f64>,
}

impl SessionState {
    pub fn new(
        config: EncoderConfig,
        profile: DeviceProfile,
        drain_watts_baseline: f64,
        static_watts: f64,
        battery_joules: f64,
    ) -> Result<Self, SessionError> {
        if !(drain_watts_baseline > 0.0) || !drain_watts_baseline.is_finite() {
            return Err(SessionError::NonPositive {
                what: "baseline dynamic power",
                value: drain_watts_baseline,
            });
        }
        if !(static_watts >= 0.0) || !static_watts.is_finite() {
            return Err(SessionError::NonPositive {
                what: "static power",
                value: static_watts,
            });
        }
        if !(battery_joules >= 0.0) {
            return Err(SessionError::NegativeBattery(battery_joules));
        }
        profile.validate()?;
        Ok(SessionState {
            baseline_config: config,
            sender: config,
            receiver: ReceiverState {
                profile,
                battery_joules,
                drain_watts_baseline,
            },
            static_watts,
            clock_s: 0.0,
            ledger: EnergyLedger::default(),
            exhausted_at_s: None,
        })
    }

    /// When the battery ran out, if it has.
    pub fn battery_exhausted_at_s(&self) -> Option<f64> {
        self.exhausted_at_s
    }

    /// Adaptations currently in force: sender configuration diffed against
    /// the session's baseline configuration.
    pub fn active_actions(&self) -> Vec<AdaptationAction> {
        let (cfg, base) = (&self.sender, &self.baseline_config);
        let mut active = Vec::new();
        if let Some(percent) = cfg.derdo_percent {
            active.push(AdaptationAction::OpsReduction { percent });
        }
        if cfg.no_dbf && cfg.no_sao {
            active.push(AdaptationAction::DisableLoopFilters);
        }
        if cfg.bframes_zero {
            active.push(AdaptationAction::DisableBiPrediction);
        }
        if cfg.no_b_intra {
            active.push(AdaptationAction::DisableIntraInB);
        }
        if cfg.forbid_fracpel {
            active.push(AdaptationAction::DisableFracpel);
        }
        if (cfg.out_width, cfg.out_height) != (base.out_width, base.out_height) {
            active.push(AdaptationAction::SetResolution {
                width: cfg.out_width,
                height: cfg.out_height,
            });
        }
        if cfg.out_fps != base.out_fps {
            active.push(AdaptationAction::SetFps { fps: cfg.out_fps });
        }
        active
    }

    /// Receiver dynamic power right now: the baseline drain scaled by
    /// `1 - s/100` for each active action's measured savings. Active
    /// actions the profile never measured contribute no change.
    pub fn dynamic_power_watts(&self) -> f64 {
        let mut power = self.receiver.drain_watts_baseline;
        for action in self.active_actions() {
            if let Some(entry) = self.receiver.profile.lookup(&action) {
                power *= 1.0 - entry.savings_pct / 100.0;
            }
        }
        power
    }

    pub fn total_power_watts(&self) -> f64 {
        self.static_watts + self.dynamic_power_watts()
    }

    /// Applies a request at the current clock and records it.
    pub fn apply_request(&mut self, req: &DorRequest) {
        self.sender = self.sender.apply_request(req);
        self.ledger.events.push(LedgerEvent {
            t_s: self.clock_s,
            request: *req,
            dynamic_watts_after: self.dynamic_power_watts(),
        });
    }

    /// Advances the session by `dt` seconds, applying `pending` first (so
    /// it takes effect at the start of the interval). Power is constant
    /// across the interval; if the battery dies inside it, the clock stops
    /// at the exhaustion instant.
    pub fn step(&mut self, dt: f64, pending: Option<&DorRequest>) -> Result<(), SessionError> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(SessionError::NonPositive {
                what: "time step",
                value: dt,
            });
        }
        if self.exhausted_at_s.is_some() || self.receiver.battery_joules <= 0.0 {
            self.exhausted_at_s.get_or_insert(self.clock_s);
            return Err(SessionError::SessionEnded);
        }
        if let Some(req) = pending {
            self.apply_request(req);
        }
        let actual_watts = self.total_power_watts();
        let baseline_watts = self.static_watts + self.receiver.drain_watts_baseline;
        let run_s = if self.receiver.battery_joules.is_finite() {
            dt.min(self.receiver.battery_joules / actual_watts)
        } else {
            dt
        };
        self.ledger.actual_energy_joules += actual_watts * run_s;
        self.ledger.baseline_energy_joules += baseline_watts * run_s;
        self.clock_s += run_s;
        if run_s < dt {
            self.receiver.battery_joules = 0.0;
            self.exhausted_at_s = Some(self.clock_s);
        } else if self.receiver.battery_joules.is_finite() {
            self.receiver.battery_joules =
                (self.receiver.battery_joules - actual_watts * run_s).max(0.0);
            if self.receiver.battery_joules == 0.0 {
                self.exhausted_at_s = Some(self.clock_s);
            }
        }
        Ok(())
    }
}

/// Outcome of a completed session run.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionReport {
    pub ledger: EnergyLedger,
    pub realized_savings_pct: f64,
    pub clock_s: f64,
    pub battery_exhausted_at_s: Option<f64>,
    pub remaining_battery_joules: f64,
}

impl SessionReport {
    fn from_state(state: SessionState) -> SessionReport {
        let realized_savings_pct = state.ledger.realized_savings_pct();
        SessionReport {
            realized_savings_pct,
            clock_s: state.clock_s,
            battery_exhausted_at_s: state.exhausted_at_s,
            remaining_battery_joules: state.receiver.battery_joules,
            ledger: state.ledger,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let events: Vec<serde_json::Value> = self
            .ledger
            .events
            .iter()
            .map(|e| {
                json!({
                    "t_s": e.t_s,
                    "request_hex": e.request.to_hex().expect("applied requests are valid"),
                    "dynamic_watts_after": e.dynamic_watts_after,
                })
            })
            .collect();
        json!({
            "realized_savings_pct": self.realized_savings_pct,
            "baseline_energy_joules": self.ledger.baseline_energy_joules,
            "actual_energy_joules": self.ledger.actual_energy_joules,
            "saved_joules": self.ledger.saved_joules(),
            "simulated_s": self.clock_s,
            "battery_exhausted_at_s": self.battery_exhausted_at_s,
            "remaining_battery_joules": if self.remaining_battery_joules.is_finite() {
                json!(self.remaining_battery_joules)
            } else {
                serde_json::Value::Null
            },
            "events": events,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "simulated time      {:>12.3} s", self.clock_s);
        let _ = writeln!(
            out,
            "baseline energy     {:>12.3} J",
            self.ledger.baseline_energy_joules
        );
        let _ = writeln!(
            out,
            "actual energy       {:>12.3} J",
            self.ledger.actual_energy_joules
        );
        let _ = writeln!(out, "saved               {:>12.3} J", self.ledger.saved_joules());
        let _ = writeln!(
            out,
            "realized savings    {:>12.3} %",
            self.realized_savings_pct
        );
        match self.battery_exhausted_at_s {
            Some(t) => {
                let _ = writeln!(out, "battery exhausted at {t:.3} s");
            }
            None if self.remaining_battery_joules.is_finite() => {
                let _ = writeln!(
                    out,
                    "battery remaining   {:>12.3} J",
                    self.remaining_battery_joules
                );
            }
            None => {}
        }
        if self.ledger.events.is_empty() {
            let _ = writeln!(out, "no requests applied");
        } else {
            let _ = writeln!(out, "events:");
            let _ = writeln!(out, "  {:>10}  {:<12}  {:>14}", "t [s]", "request", "dyn power [W]");
            for e in &self.ledger.events {
                let _ = writeln!(
                    out,
                    "  {:>10.3}  {:<12}  {:>14.4}",
                    e.t_s,
                    e.request.to_hex().expect("applied requests are valid"),
                    e.dynamic_watts_after
                );
            }
        }
        out
    }
}

/// Replays timestamped requests against an initial session state.
///
/// Event times must be strictly increasing and lie within `[0, duration]`;
/// each request takes effect at its own timestamp. If the battery dies,
/// later events are never applied and the report says when it happened.
pub fn run_session(
    mut state: SessionState,
    events: &[(f64, DorRequest)],
    duration_s: f64,
) -> Result<SessionReport, SessionError> {
    if !(duration_s >= 0.0) || !duration_s.is_finite() {
        return Err(SessionError::NonPositive {
            what: "session duration",
            value: duration_s,
        });
    }
    let mut last = -1.0f64;
    for &(t, _) in events {
        if !t.is_finite() || t < 0.0 || t > duration_s {
            return Err(SessionError::BadScenario(format!(
                "event time {t} is outside [0, {duration_s}]"
            )));
        }
        if t <= last {
            return Err(SessionError::BadScenario(format!(
                "event times must be strictly increasing ({t} after {last})"
            )));
        }
        last = t;
    }

    let mut pending: Option<&DorRequest> = None;
    for (t, req) in events {
        if state.battery_exhausted_at_s().is_some() {
            pending = None;
            break;
        }
        if *t > state.clock_s {
            state.step(*t - state.clock_s, pending.take())?;
            if state.battery_exhausted_at_s().is_some() {
                break;
            }
        } else if let Some(p) = pending.take() {
            state.apply_request(p);
        }
        pending = Some(req);
    }
    if state.battery_exhausted_at_s().is_none() {
        if duration_s > state.clock_s {
            state.step(duration_s - state.clock_s, pending.take())?;
        } else if let Some(p) = pending.take() {
            state.apply_request(p);
        }
    }
    Ok(SessionReport::from_state(state))
}

fn default_native_width() -> u16 {
    1920
}
fn default_native_height() -> u16 {
    1080
}
fn default_native_fps() -> u16 {
    30
}

#[derive(Debug, Clone, Deserialize)]
struct ScenarioEventFile {
    t_s: f64,
    request_hex: String,
}

/// Scenario file: session parameters plus timestamped request messages.
#[derive(Debug, Clone, Deserialize)]
pub struct Scenario {
    pub duration_s: f64,
    pub baseline_watts: f64,
    #[serde(default)]
    pub static_watts: f64,
    /// One-way request latency; requests take effect this much later.
    #[serde(default)]
    pub latency_s: f64,
    /// Absent means mains power.
    #[serde(default)]
    pub battery_joules: Option<f64>,
    #[serde(default = "default_native_width")]
    pub native_width: u16,
    #[serde(default = "default_native_height")]
    pub native_height: u16,
    #[serde(default = "default_native_fps")]
    pub native_fps: u16,
    pub profile: DeviceProfile,
    #[serde(default)]
    events: Vec<ScenarioEventFile>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, SessionError> {
        let scenario: Scenario =
            serde_json::from_str(text).map_err(|e| SessionError::Json(e.to_string()))?;
        scenario.profile.validate()?;
        if !(scenario.latency_s >= 0.0) || !scenario.latency_s.is_finite() {
            return Err(SessionError::BadScenario(format!(
                "latency_s must be non-negative, got {}",
                scenario.latency_s
            )));
        }
        Ok(scenario)
    }

    pub fn run(&self) -> Result<SessionReport, SessionError> {
        let config = EncoderConfig::new(self.native_width, self.native_height, self.native_fps)?;
        let state = SessionState::new(
            config,
            self.profile.clone(),
            self.baseline_watts,
            self.static_watts,
            self.battery_joules.unwrap_or(f64::INFINITY),
        )?;
        let mut events = Vec::with_capacity(self.events.len());
        for ev in &self.events {
            if !ev.t_s.is_finite() || ev.t_s < 0.0 || ev.t_s > self.duration_s {
                return Err(SessionError::BadScenario(format!(
                    "event time {} is outside [0, {}]",
                    ev.t_s, self.duration_s
                )));
            }
            let effective = ev.t_s + self.latency_s;
            if effective <= self.duration_s {
                events.push((effective, DorRequest::from_hex(&ev.request_hex)?));
            }
        }
        run_session(state, &events, self.duration_s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{Bdr, DecoderBackend, SavingsEntry};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn hw_class_b_profile() -> DeviceProfile {
        DeviceProfile {
            decoder_backend: DecoderBackend::Hardware,
            content_class: "ClassB".into(),
            entries: vec![
                SavingsEntry {
                    action: AdaptationAction::SetResolution {
                        width: 640,
                        height: 360,
                    },
                    savings_pct: 78.21,
                    bdr_pct: Bdr::NotAvailable,
                },
                SavingsEntry {
                    action: AdaptationAction::DisableBiPrediction,
                    savings_pct: 6.88,
                    bdr_pct: Bdr::Percent(78.97),
                },
            ],
        }
    }

    fn fresh_state(profile: DeviceProfile, battery: f64) -> SessionState {
        SessionState::new(
            EncoderConfig::new(1920, 1080, 60).unwrap(),
            profile,
            2.0,
            0.0,
            battery,
        )
        .unwrap()
    }

    #[test]
    fn requests_map_onto_encoder_flags() {
        let cfg = EncoderConfig::new(1920, 1080, 60).unwrap();

        let mut req = DorRequest::no_change();
        req.disable_loop_filters = true;
        let next = cfg.apply_request(&req);
        assert!(next.no_dbf && next.no_sao);
        assert_eq!(
            EncoderConfig {
                no_dbf: false,
                no_sao: false,
                ..next
            },
            cfg,
            "only the loop-filter flags may change"
        );

        // The identity request changes nothing.
        assert_eq!(cfg.apply_request(&DorRequest::no_change()), cfg);

        let mut req = DorRequest::no_change();
        req.pic_width = 640;
        req.pic_height = 360;
        let next = cfg.apply_request(&req);
        assert_eq!((next.out_width, next.out_height), (640, 360));
        assert_eq!(next.out_fps, 60);

        let mut req = DorRequest::no_change();
        req.ops_reduction = OpsReductionCode::from_percent(-36).unwrap();
        assert_eq!(cfg.apply_request(&req).derdo_percent, Some(-36));
    }

    #[test]
    fn flags_are_one_way_and_scaling_is_last_writer_wins() {
        let cfg = EncoderConfig::new(1920, 1080, 60).unwrap();
        let mut req = DorRequest::no_change();
        req.disable_bi_prediction = true;
        req.frames_per_second = 30;
        let mid = cfg.apply_request(&req);
        // A later neutral request cannot re-enable bi-prediction, but a
        // later fps request overwrites the earlier one.
        let mut req2 = DorRequest::no_change();
        req2.frames_per_second = 20;
        let end = mid.apply_request(&req2);
        assert!(end.bframes_zero);
        assert_eq!(end.out_fps, 20);
    }

    #[test]
    fn baseline_step_accrues_equal_energy() {
        let mut s = fresh_state(hw_class_b_profile(), f64::INFINITY);
        s.step(10.0, None).unwrap();
        assert_eq!(s.ledger.actual_energy_joules, 20.0);
        assert_eq!(s.ledger.baseline_energy_joules, 20.0);
        assert_eq!(s.ledger.realized_savings_pct(), 0.0);
        assert_eq!(s.clock_s, 10.0);
    }

    #[test]
    fn active_resolution_scales_dynamic_power() {
        let mut s = fresh_state(hw_class_b_profile(), f64::INFINITY);
        let mut req = DorRequest::no_change();
        req.pic_width = 640;
        req.pic_height = 360;
        s.step(10.0, Some(&req)).unwrap();
        assert!(close(s.ledger.actual_energy_joules, 4.358, 1e-9));
        assert_eq!(s.ledger.baseline_energy_joules, 20.0);
        assert_eq!(
            s.active_actions(),
            vec![AdaptationAction::SetResolution {
                width: 640,
                height: 360
            }]
        );
    }

    #[test]
    fn savings_stack_multiplicatively() {
        let mut s = fresh_state(hw_class_b_profile(), f64::INFINITY);
        let mut req = DorRequest::no_change();
        req.pic_width = 640;
        req.pic_height = 360;
        req.disable_bi_prediction = true;
        s.apply_request(&req);
        let expected = 2.0 * (1.0 - 0.7821) * (1.0 - 0.0688);
        assert!(close(s.dynamic_power_watts(), expected, 1e-12));
    }

    #[test]
    fn unmeasured_actions_change_nothing() {
        let mut s = fresh_state(hw_class_b_profile(), f64::INFINITY);
        let mut req = DorRequest::no_change();
        req.disable_loop_filters = true; // not in this profile
        s.apply_request(&req);
        assert_eq!(s.dynamic_power_watts(), 2.0);
    }

    #[test]
    fn battery_exhaustion_ends_the_session() {
        let mut s = fresh_state(hw_class_b_profile(), 30.0);
        // 2 W drain: 30 J last exactly 15 s.
        s.step(10.0, None).unwrap();
        assert_eq!(s.battery_exhausted_at_s(), None);
        s.step(10.0, None).unwrap();
        assert_eq!(s.clock_s, 15.0);
        assert_eq!(s.battery_exhausted_at_s(), Some(15.0));
        assert_eq!(s.receiver.battery_joules, 0.0);
        assert_eq!(s.step(1.0, None).unwrap_err(), SessionError::SessionEnded);
        // Ledger stopped at the exhaustion instant.
        assert_eq!(s.ledger.actual_energy_joules, 30.0);
        assert_eq!(s.ledger.baseline_energy_joules, 30.0);
    }

    #[test]
    fn savings_extend_battery_lifetime_by_the_closed_form() {
        // All-dynamic drain, one action with savings s at t=0: lifetime
        // must be baseline_lifetime / (1 - s/100).
        let mut s = fresh_state(hw_class_b_profile(), 100.0);
        let mut req = DorRequest::no_change();
        req.pic_width = 640;
        req.pic_height = 360;
        s.apply_request(&req);
        let expected = (100.0 / 2.0) / (1.0 - 0.7821);
        while s.battery_exhausted_at_s().is_none() {
            s.step(60.0, None).unwrap();
        }
        assert!(close(s.battery_exhausted_at_s().unwrap(), expected, 1e-9));
    }

    #[test]
    fn run_session_full_and_half_duration_requests() {
        let mut req = DorRequest::no_change();
        req.pic_width = 640;
        req.pic_height = 360;

        let report = run_session(
            fresh_state(hw_class_b_profile(), f64::INFINITY),
            &[(0.0, req)],
            100.0,
        )
        .unwrap();
        assert!(close(report.realized_savings_pct, 78.21, 1e-9));
        assert_eq!(report.ledger.events.len(), 1);

        let report = run_session(
            fresh_state(hw_class_b_profile(), f64::INFINITY),
            &[(50.0, req)],
            100.0,
        )
        .unwrap();
        assert!(close(report.realized_savings_pct, 39.105, 1e-9));
        assert_eq!(report.ledger.events[0].t_s, 50.0);
    }

    #[test]
    fn empty_scenario_saves_nothing() {
        let report = run_session(
            fresh_state(hw_class_b_profile(), f64::INFINITY),
            &[],
            100.0,
        )
        .unwrap();
        assert_eq!(report.realized_savings_pct, 0.0);
        assert!(report.ledger.events.is_empty());
    }

    #[test]
    fn energy_is_conserved_every_step() {
        let mut s = fresh_state(hw_class_b_profile(), f64::INFINITY);
        let mut req = DorRequest::no_change();
        req.pic_width = 640;
        req.pic_height = 360;
        s.step(7.0, None).unwrap();
        s.step(13.0, Some(&req)).unwrap();
        s.step(5.0, None).unwrap();
        let l = &s.ledger;
        assert!(close(
            l.actual_energy_joules + l.saved_joules(),
            l.baseline_energy_joules,
            1e-12
        ));
    }

    #[test]
    fn rejects_bad_scenarios() {
        let req = DorRequest::no_change();
        let s = || fresh_state(hw_class_b_profile(), f64::INFINITY);
        assert!(matches!(
            run_session(s(), &[(5.0, req), (5.0, req)], 10.0).unwrap_err(),
            SessionError::BadScenario(_)
        ));
        assert!(matches!(
            run_session(s(), &[(11.0, req)], 10.0).unwrap_err(),
            SessionError::BadScenario(_)
        ));
        assert!(matches!(
            run_session(s(), &[(-1.0, req)], 10.0).unwrap_err(),
            SessionError::BadScenario(_)
        ));
        assert!(EncoderConfig::new(0, 1080, 60).is_err());
        assert!(SessionState::new(
            EncoderConfig::new(1920, 1080, 60).unwrap(),
            hw_class_b_profile(),
            0.0,
            0.0,
            f64::INFINITY
        )
        .is_err());
    }

    #[test]
    fn events_after_exhaustion_never_apply() {
        let mut req_a = DorRequest::no_change();
        req_a.pic_width = 640;
        req_a.pic_height = 360;
        let req_b = {
            let mut r = DorRequest::no_change();
            r.disable_bi_prediction = true;
            r
        };
        // 2 W for 10 s = 20 J battery: dies at t=10, before the t=50 event.
        let report = run_session(
            fresh_state(hw_class_b_profile(), 20.0),
            &[(50.0, req_a), (60.0, req_b)],
            100.0,
        )
        .unwrap();
        assert_eq!(report.battery_exhausted_at_s, Some(10.0));
        assert!(report.ledger.events.is_empty());
        assert_eq!(report.clock_s, 10.0);
    }

    #[test]
    fn scenario_json_round_trip_and_latency() {
        let text = r#"{
            "duration_s": 100.0,
            "baseline_watts": 2.0,
            "latency_s": 10.0,
            "native_fps": 60,
            "profile": {
                "decoder_backend": "hardware",
                "content_class": "ClassB",
                "entries": [
                    {"action": {"kind": "set_resolution", "width": 640, "height": 360},
                     "savings_pct": 78.21, "bdr_pct": null}
                ]
            },
            "events": [{"t_s": 40.0, "request_hex": "7C028005A000"}]
        }"#;
        let scenario = Scenario::from_json(text).unwrap();
        assert_eq!(scenario.native_width, 1920);
        assert_eq!(scenario.native_fps, 60);
        assert_eq!(scenario.battery_joules, None);
        let report = scenario.run().unwrap();
        // Applied at 40 + 10 = 50 s: half the session saves 78.21%.
        assert_eq!(report.ledger.events[0].t_s, 50.0);
        assert!(close(report.realized_savings_pct, 39.105, 1e-9));
    }

    #[test]
    fn identical_scenarios_produce_identical_reports() {
        let mut req = DorRequest::no_change();
        req.pic_width = 640;
        req.pic_height = 360;
        let run = || {
            run_session(
                fresh_state(hw_class_b_profile(), 500.0),
                &[(13.37, req)],
                200.0,
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a, b);
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    }
}
