//! Command-line surface over the greenreq library: encode/decode request
//! messages, plan adaptations, simulate sessions, and run the analytics.
//! All subcommands print JSON (or hex/text where noted) to standard output;
//! `--out` redirects the output to a file.

use clap::{Args, Parser, Subcommand, ValueEnum};
use greenreq::adaptation::{plan_request, restoration_plan, PowerTarget};
use greenreq::analysis::{
    bd_rate, build_profile, read_measurements_csv, relative_savings, EnergyMeasurement, RdCurve,
    RdPoint,
};
use greenreq::codec::{DorRequest, OpsReductionCode};
use greenreq::energy::{candidates_from_json, cost, derdo_select, EnergyModel, LagrangeWeights};
use greenreq::profile::{Bdr, DecoderBackend, DeviceProfile};
use greenreq::session::Scenario;
use greenreq::tables;
use serde_json::json;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "greenreq",
    version,
    about = "Green Metadata decoder-power reduction: DOR-req messages, planning, and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a DOR-req message; prints 12 uppercase hex digits
    EncodeReq(EncodeReq),
    /// Decode a 12-hex-digit DOR-req message
    DecodeReq(DecodeReq),
    /// Pick the profile action that meets a savings target
    Plan(Plan),
    /// Plan requests that restore reduced operations back to normal
    RestorePlan(RestorePlan),
    /// Run a scenario file through the session simulator
    Simulate(Simulate),
    /// Select the cheapest coding candidate under an energy-aware cost
    DerdoSelect(DerdoSelect),
    /// Relative dynamic-energy savings of a test run vs a reference
    Savings(Savings),
    /// Bjontegaard-Delta rate between two rate-distortion curves
    Bdrate(Bdrate),
    /// Build a device profile from a measurement CSV
    BuildProfile(BuildProfile),
}

fn parse_even_percent(s: &str) -> Result<i32, String> {
    let percent: i32 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    OpsReductionCode::from_percent(percent)
        .map(|_| percent)
        .map_err(|e| e.to_string())
}

#[derive(Args)]
struct EncodeReq {
    /// Operations change in percent (even integer in [-62, 64])
    #[arg(
        long,
        value_parser = parse_even_percent,
        conflicts_with = "ops_code",
        default_value_t = 0,
        allow_negative_numbers = true
    )]
    ops_pct: i32,
    /// Raw 6-bit operations codeword (code 31 = 0%)
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=63))]
    ops_code: Option<u8>,
    /// Ask the sender to disable deblocking and SAO
    #[arg(long)]
    loop_filters_off: bool,
    /// Ask the sender to stop using bi-prediction (no B-frame averaging)
    #[arg(long)]
    bi_prediction_off: bool,
    /// Ask the sender to avoid intra blocks in B frames
    #[arg(long)]
    intra_in_b_off: bool,
    /// Ask the sender to avoid fractional-sample interpolation
    #[arg(long)]
    fracpel_off: bool,
    /// Requested output width in luma samples (0 = no change)
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u16).range(0..=16383))]
    width: u16,
    /// Requested output height in luma samples (0 = no change)
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u16).range(0..=16383))]
    height: u16,
    /// Requested frame rate (0 = no change)
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u16).range(0..=1023))]
    fps: u16,
    /// hex prints only the message; json adds the decoded fields
    #[arg(long, value_enum, default_value = "hex")]
    format: EncodeFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodeFormat {
    Hex,
    Json,
}

#[derive(Args)]
struct DecodeReq {
    /// 12 hex digits, e.g. 7E45000B401E
    hex: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Plan {
    /// Device profile JSON file
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    profile: Option<PathBuf>,
    /// Bundled profile name
    #[arg(long, value_parser = [
        "hevc-software-class-b", "hevc-software-class-e",
        "hevc-hardware-class-b", "hevc-hardware-class-e",
        "vvc-vvdec-st", "vvc-vvdec-mt", "vvc-vtm-st",
        "conferencing-1080p",
    ])]
    builtin: Option<String>,
    /// Required dynamic-energy savings in percent
    #[arg(long)]
    target_savings: f64,
    /// Maximum acceptable rate overhead in percent
    #[arg(long)]
    max_bdr: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RestorePlan {
    /// Current cumulative operations factor, in (0, 1]
    #[arg(long)]
    factor: f64,
    /// How close to 1.0 the plan must land
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Simulate {
    /// Scenario JSON file
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DerdoSelect {
    /// Energy model JSON file ({"tools": [...], "coefficients": [...]})
    #[arg(long)]
    model: PathBuf,
    /// Candidate list JSON file ([{"id", "distortion", "rate", "counts"}])
    #[arg(long)]
    candidates: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    lambda_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda_energy: f64,
    /// Replace the model by its fracpel-avoidance variant before selecting
    #[arg(long)]
    fracpel_avoiding: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Savings {
    /// Reference energy in joules
    #[arg(long)]
    reference: f64,
    /// Test energy in joules
    #[arg(long)]
    test: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Bdrate {
    /// Reference curve: JSON array of {"rate", "quality"}
    #[arg(long)]
    reference: PathBuf,
    /// Test curve: JSON array of {"rate", "quality"}
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildProfile {
    /// Measurement CSV (action,sequence,quality_metric,rate,quality,energy_ref,energy_test)
    #[arg(long)]
    measurements: PathBuf,
    #[arg(long, value_parser = ["software", "hardware"])]
    backend: String,
    #[arg(long)]
    content_class: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::EncodeReq(args) => encode_req(args),
        Command::DecodeReq(args) => decode_req(args),
        Command::Plan(args) => plan(args),
        Command::RestorePlan(args) => restore_plan(args),
        Command::Simulate(args) => simulate(args),
        Command::DerdoSelect(args) => derdo_select_cmd(args),
        Command::Savings(args) => savings(args),
        Command::Bdrate(args) => bdrate(args),
        Command::BuildProfile(args) => build_profile_cmd(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

type CmdResult = Result<(), String>;

fn emit(out: Option<PathBuf>, content: String) -> CmdResult {
    match out {
        Some(path) => fs::write(&path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn encode_req(args: EncodeReq) -> CmdResult {
    let ops_reduction = match args.ops_code {
        Some(code) => OpsReductionCode::new(code).map_err(|e| e.to_string())?,
        None => OpsReductionCode::from_percent(args.ops_pct).map_err(|e| e.to_string())?,
    };
    let req = DorRequest {
        ops_reduction,
        disable_loop_filters: args.loop_filters_off,
        disable_bi_prediction: args.bi_prediction_off,
        disable_intra_in_b: args.intra_in_b_off,
        disable_fracpel_filtering: args.fracpel_off,
        pic_width: args.width,
        pic_height: args.height,
        frames_per_second: args.fps,
    };
    let hex = req.to_hex().map_err(|e| e.to_string())?;
    let content = match args.format {
        EncodeFormat::Hex => format!("{hex}\n"),
        EncodeFormat::Json => {
            let mut v = req.to_json();
            v["hex"] = json!(hex);
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
    };
    emit(args.out, content)
}

fn decode_req(args: DecodeReq) -> CmdResult {
    let req = DorRequest::from_hex(&args.hex).map_err(|e| e.to_string())?;
    let content = format!("{}\n", serde_json::to_string_pretty(&req.to_json()).unwrap());
    emit(args.out, content)
}

fn load_profile(profile: Option<&PathBuf>, builtin: Option<&str>) -> Result<DeviceProfile, String> {
    match (profile, builtin) {
        (Some(path), None) => DeviceProfile::from_json(&read(path)?).map_err(|e| e.to_string()),
        (None, Some(name)) => {
            tables::builtin(name).ok_or_else(|| format!("unknown bundled profile {name:?}"))
        }
        _ => Err("pass exactly one of --profile or --builtin".into()),
    }
}

fn plan(args: Plan) -> CmdResult {
    let profile = load_profile(args.profile.as_ref(), args.builtin.as_deref())?;
    let target = PowerTarget {
        required_savings_pct: args.target_savings,
        max_bdr_pct: args.max_bdr,
    };
    let plan = plan_request(&profile, &target).map_err(|e| e.to_string())?;
    let request_hex = plan.request.to_hex().map_err(|e| e.to_string())?;
    let content = match args.format {
        Format::Json => {
            let v = json!({
                "action": plan.action,
                "expected_savings_pct": plan.expected_savings_pct,
                "expected_bdr_pct": plan.expected_bdr.percent(),
                "shortfall": plan.shortfall,
                "request_hex": request_hex,
                "request": plan.request.to_json(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "action            {}", plan.action);
            let _ = writeln!(s, "expected savings  {:.2}%", plan.expected_savings_pct);
            let _ = writeln!(s, "expected BDR      {}", plan.expected_bdr);
            let _ = writeln!(s, "shortfall         {}", plan.shortfall);
            let _ = writeln!(s, "request           {request_hex}");
            s
        }
    };
    emit(args.out, content)
}

fn restore_plan(args: RestorePlan) -> CmdResult {
    let steps = restoration_plan(args.factor, args.tolerance).map_err(|e| e.to_string())?;
    let achieved = steps
        .iter()
        .fold(args.factor, |f, &c| f * (1.0 + f64::from(c) / 100.0));
    let v = json!({
        "steps_pct": steps,
        "achieved_factor": achieved,
        "residual": (achieved - 1.0).abs(),
    });
    emit(args.out, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
}

fn simulate(args: Simulate) -> CmdResult {
    let scenario = Scenario::from_json(&read(&args.scenario)?).map_err(|e| e.to_string())?;
    let report = scenario.run().map_err(|e| e.to_string())?;
    let content = match args.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.to_json()).unwrap()),
        Format::Text => report.render_text(),
    };
    emit(args.out, content)
}

fn derdo_select_cmd(args: DerdoSelect) -> CmdResult {
    let mut model = EnergyModel::from_json(&read(&args.model)?).map_err(|e| e.to_string())?;
    if args.fracpel_avoiding {
        model = model.fracpel_avoiding().map_err(|e| e.to_string())?;
    }
    let candidates = candidates_from_json(&read(&args.candidates)?).map_err(|e| e.to_string())?;
    let weights =
        LagrangeWeights::new(args.lambda_rate, args.lambda_energy).map_err(|e| e.to_string())?;
    let selected = derdo_select(&candidates, weights, &model).map_err(|e| e.to_string())?;
    let index = candidates
        .iter()
        .position(|c| std::ptr::eq(c, selected))
        .expect("selected candidate comes from the list");
    let selected_cost = cost(selected, weights, &model).map_err(|e| e.to_string())?;
    let v = json!({
        "selected": selected,
        "index": index,
        "cost": selected_cost,
    });
    emit(args.out, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
}

fn savings(args: Savings) -> CmdResult {
    let reference = EnergyMeasurement::new("reference", args.reference);
    let test = EnergyMeasurement::new("test", args.test);
    let pct = relative_savings(&reference, &test).map_err(|e| e.to_string())?;
    let v = json!({ "savings_pct": pct });
    emit(args.out, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
}

fn load_curve(path: &PathBuf) -> Result<RdCurve, String> {
    let points: Vec<RdPoint> =
        serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    RdCurve::new(points).map_err(|e| e.to_string())
}

fn bdrate(args: Bdrate) -> CmdResult {
    let reference = load_curve(&args.reference)?;
    let test = load_curve(&args.test)?;
    let bdr = bd_rate(&reference, &test);
    let v = json!({ "bdr_pct": match bdr { Bdr::Percent(p) => json!(p), Bdr::NotAvailable => json!(null) } });
    emit(args.out, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
}

fn build_profile_cmd(args: BuildProfile) -> CmdResult {
    let rows = read_measurements_csv(read(&args.measurements)?.as_bytes())
        .map_err(|e| e.to_string())?;
    let backend = match args.backend.as_str() {
        "software" => DecoderBackend::Software,
        _ => DecoderBackend::Hardware,
    };
    let profile =
        build_profile(&rows, backend, args.content_class.clone()).map_err(|e| e.to_string())?;
    emit(args.out, format!("{}\n", profile.to_json_string()))
}
