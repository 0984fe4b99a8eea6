//! Bundled calibration profiles.
//!
//! The HEVC profiles were measured on an ARM SoC evaluation board decoding
//! JVET common-test-condition content (Class B at HD, Class E at 720p) in
//! both a software decoder and the SoC's hardware decoder. The VVC profiles
//! cover three software decoder configurations on a desktop CPU at HD. The
//! conferencing profile covers a laptop hardware-decoding a 1080p30 video
//! call.
//!
//! Entries carry the measured values verbatim, with two normalizations:
//! per-filter measurements (DBF/SAO, plus ALF for VVC) are composed into
//! the single loop-filter switch the request message exposes, and relative
//! frame rates are anchored at a 60 fps native (half/third/quarter map to
//! 30/20/15 fps). Savings apply to dynamic decoding energy only.

use crate::profile::DeviceProfile;

macro_rules! bundled {
    ($(#[$doc:meta] $fn_name:ident => $file:literal),+ $(,)?) => {
        $(
            #[$doc]
            pub fn $fn_name() -> DeviceProfile {
                DeviceProfile::from_json(include_str!(concat!(
                    "../data/profiles/",
                    $file
                )))
                .expect(concat!("bundled profile ", $file, " is valid"))
            }
        )+

        /// Name/constructor pairs of every bundled profile, for listings.
        pub fn bundled_profiles() -> Vec<(&'static str, DeviceProfile)> {
            vec![$((stringify!($fn_name).trim_start_matches("r#"), $fn_name())),+]
        }
    };
}

bundled! {
    /// HEVC software decoding, Class B (HD) content.
    hevc_software_class_b => "hevc_software_class_b.json",
    /// HEVC software decoding, Class E (720p conferencing-like) content.
    hevc_software_class_e => "hevc_software_class_e.json",
    /// HEVC hardware decoding, Class B (HD) content.
    hevc_hardware_class_b => "hevc_hardware_class_b.json",
    /// HEVC hardware decoding, Class E (720p conferencing-like) content.
    hevc_hardware_class_e => "hevc_hardware_class_e.json",
    /// VVdeC single-threaded VVC software decoding, HD content.
    vvc_vvdec_st => "vvc_vvdec_st.json",
    /// VVdeC multi-threaded VVC software decoding, HD content.
    vvc_vvdec_mt => "vvc_vvdec_mt.json",
    /// VTM reference VVC software decoding, HD content.
    vvc_vtm_st => "vvc_vtm_st.json",
    /// Laptop hardware decoding of a 1080p30 conferencing stream.
    conferencing_1080p => "conferencing_1080p.json",
}

/// Looks a bundled profile up by its snake_case or kebab-case name.
pub fn builtin(name: &str) -> Option<DeviceProfile> {
    let normalized = name.replace('-', "_");
    bundled_profiles()
        .into_iter()
        .find(|(n, _)| *n == normalized)
        .map(|(_, p)| p)
}
