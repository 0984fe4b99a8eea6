//! Bit-exact codec for the DOR-req (decoder operations reduction request)
//! message of the Green Metadata interactive-signaling extension.
//!
//! A message is exactly 48 bits (6 bytes), packed MSB-first in field order:
//! `dec_ops_reduction_req` (6), `disable_loop_filters` (1),
//! `disable_bi_iprediction` (1), `disable_intra_in_B` (1),
//! `disable_fracpel_filtering` (1), `pic_width_in_luma_samples` (14),
//! `pic_height_in_luma_samples` (14), `frames_per_second` (10).

use num_rational::Rational32;
use serde_json::json;
use thiserror::Error;

/// Wire size of a DOR-req message in bytes.
pub const MESSAGE_LEN: usize = 6;

/// Maximum encodable picture dimension (14-bit field).
pub const MAX_PIC_DIMENSION: u16 = (1 << 14) - 1;

/// Maximum encodable frame rate (10-bit field).
pub const MAX_FRAMES_PER_SECOND: u16 = (1 << 10) - 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("ops reduction code {0} exceeds the 6-bit maximum of 63")]
    InvalidCode(u8),
    #[error("ops reduction of {0}% is not representable: must be an even integer")]
    OddPercent(i32),
    #[error("ops reduction of {0}% is outside the representable range [-62, 64]")]
    PercentOutOfRange(i32),
    #[error("{field} value {value} exceeds the field maximum of {max}")]
    FieldOutOfRange {
        field: &'static str,
        value: u16,
        max: u16,
    },
    #[error("message is {0} bytes, expected exactly {MESSAGE_LEN}")]
    WrongLength(usize),
    #[error("invalid hex message {0:?}: expected 12 hex digits")]
    InvalidHex(String),
}

/// 6-bit operations-reduction codeword carried by `dec_ops_reduction_req`.
///
/// The codeword maps affinely onto the even percentages `[-62, +64]`:
/// `percent = 2*code - 62`, so code 31 is the neutral 0% request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpsReductionCode(u8);

impl OpsReductionCode {
    /// The neutral codeword requesting no complexity change (0%).
    pub const ZERO_PERCENT: OpsReductionCode = OpsReductionCode(31);

    pub fn new(code: u8) -> Result<Self, CodecError> {
        if code > 63 {
            return Err(CodecError::InvalidCode(code));
        }
        Ok(OpsReductionCode(code))
    }

    /// Codeword for an even percentage in `[-62, +64]`.
    pub fn from_percent(percent: i32) -> Result<Self, CodecError> {
        if !(-62..=64).contains(&percent) {
            return Err(CodecError::PercentOutOfRange(percent));
        }
        if percent.rem_euclid(2) != 0 {
            return Err(CodecError::OddPercent(percent));
        }
        Ok(OpsReductionCode(((percent + 62) / 2) as u8))
    }

    pub fn code(self) -> u8 {
        self.0
    }

    /// Requested operations change in percent (negative = reduce).
    pub fn percent(self) -> i32 {
        2 * i32::from(self.0) - 62
    }
}

/// All representable operations-reduction percentages, ascending.
pub fn representable_percents() -> impl DoubleEndedIterator<Item = i32> {
    (0u8..=63).map(|code| OpsReductionCode(code).percent())
}

/// Operations-reduction percentage of a legacy signed 8-bit codeword:
/// `c = 100*x/128`, exact.
///
/// Every `i8` is valid; the image spans [-100, 78.125/128*...] — precisely
/// [-100, +99.21875] in steps of 100/128.
pub fn legacy_ops_reduction_percent(x: i8) -> Rational32 {
    Rational32::new(100 * i32::from(x), 128)
}

/// One DOR-req message: the receiver's requested decoder-complexity change.
///
/// Zero values of `pic_width`, `pic_height`, and `frames_per_second` mean
/// "no change requested"; the four `disable_*` flags are one-way switch-off
/// requests for individual coding tools.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DorRequest {
    pub ops_reduction: OpsReductionCode,
    pub disable_loop_filters: bool,
    pub disable_bi_prediction: bool,
    pub disable_intra_in_b: bool,
    pub disable_fracpel_filtering: bool,
    pub pic_width: u16,
    pub pic_height: u16,
    pub frames_per_second: u16,
}

impl Default for DorRequest {
    fn default() -> Self {
        Self::no_change()
    }
}

impl DorRequest {
    /// The neutral message: 0% ops change, no flags, all sentinels zero.
    pub fn no_change() -> Self {
        DorRequest {
            ops_reduction: OpsReductionCode::ZERO_PERCENT,
            disable_loop_filters: false,
            disable_bi_prediction: false,
            disable_intra_in_b: false,
            disable_fracpel_filtering: false,
            pic_width: 0,
            pic_height: 0,
            frames_per_second: 0,
        }
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        if self.pic_width > MAX_PIC_DIMENSION {
            return Err(CodecError::FieldOutOfRange {
                field: "pic_width_in_luma_samples",
                value: self.pic_width,
                max: MAX_PIC_DIMENSION,
            });
        }
        if self.pic_height > MAX_PIC_DIMENSION {
            return Err(CodecError::FieldOutOfRange {
                field: "pic_height_in_luma_samples",
                value: self.pic_height,
                max: MAX_PIC_DIMENSION,
            });
        }
        if self.frames_per_second > MAX_FRAMES_PER_SECOND {
            return Err(CodecError::FieldOutOfRange {
                field: "frames_per_second",
                value: self.frames_per_second,
                max: MAX_FRAMES_PER_SECOND,
            });
        }
        Ok(())
    }

    /// Packs the message into its 6-byte wire form.
    pub fn encode(&self) -> Result<[u8; MESSAGE_LEN], CodecError> {
        self.validate()?;
        let mut acc: u64 = 0;
        acc = (acc << 6) | u64::from(self.ops_reduction.code());
        acc = (acc << 1) | u64::from(self.disable_loop_filters);
        acc = (acc << 1) | u64::from(self.disable_bi_prediction);
        acc = (acc << 1) | u64::from(self.disable_intra_in_b);
        acc = (acc << 1) | u64::from(self.disable_fracpel_filtering);
        acc = (acc << 14) | u64::from(self.pic_width);
        acc = (acc << 14) | u64::from(self.pic_height);
        acc = (acc << 10) | u64::from(self.frames_per_second);
        let bytes = acc.to_be_bytes();
        Ok(bytes[2..8].try_into().expect("6 bytes"))
    }

    /// Unpacks a 6-byte wire message; rejects any other length.
    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() != MESSAGE_LEN {
            return Err(CodecError::WrongLength(bytes.len()));
        }
        let mut acc: u64 = 0;
        for &b in bytes {
            acc = (acc << 8) | u64::from(b);
        }
        let frames_per_second = (acc & 0x3FF) as u16;
        acc >>= 10;
        let pic_height = (acc & 0x3FFF) as u16;
        acc >>= 14;
        let pic_width = (acc & 0x3FFF) as u16;
        acc >>= 14;
        let disable_fracpel_filtering = acc & 1 != 0;
        acc >>= 1;
        let disable_intra_in_b = acc & 1 != 0;
        acc >>= 1;
        let disable_bi_prediction = acc & 1 != 0;
        acc >>= 1;
        let disable_loop_filters = acc & 1 != 0;
        acc >>= 1;
        let ops_reduction = OpsReductionCode::new((acc & 0x3F) as u8)?;
        Ok(DorRequest {
            ops_reduction,
            disable_loop_filters,
            disable_bi_prediction,
            disable_intra_in_b,
            disable_fracpel_filtering,
            pic_width,
            pic_height,
            frames_per_second,
        })
    }

    /// Wire form as 12 uppercase hex digits.
    pub fn to_hex(&self) -> Result<String, CodecError> {
        let bytes = self.encode()?;
        let mut s = String::with_capacity(2 * MESSAGE_LEN);
        for b in bytes {
            s.push_str(&format!("{b:02X}"));
        }
        Ok(s)
    }

    /// Parses a 12-hex-digit message (either case).
    pub fn from_hex(hex: &str) -> Result<Self, CodecError> {
        let invalid = || CodecError::InvalidHex(hex.to_string());
        if hex.len() != 2 * MESSAGE_LEN || !hex.is_char_boundary(2) {
            return Err(invalid());
        }
        let mut bytes = [0u8; MESSAGE_LEN];
        for (i, byte) in bytes.iter_mut().enumerate() {
            let pair = hex.get(2 * i..2 * i + 2).ok_or_else(invalid)?;
            *byte = u8::from_str_radix(pair, 16).map_err(|_| invalid())?;
        }
        Self::decode(&bytes)
    }

    /// Human-readable rendering with the standard's syntax-element names.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "dec_ops_reduction_req": self.ops_reduction.code(),
            "ops_reduction_percent": self.ops_reduction.percent(),
            "disable_loop_filters": self.disable_loop_filters,
            "disable_bi_iprediction": self.disable_bi_prediction,
            "disable_intra_in_B": self.disable_intra_in_b,
            "disable_fracpel_filtering": self.disable_fracpel_filtering,
            "pic_width_in_luma_samples": self.pic_width,
            "pic_height_in_luma_samples": self.pic_height,
            "frames_per_second": self.frames_per_second,
        })
    }
}
