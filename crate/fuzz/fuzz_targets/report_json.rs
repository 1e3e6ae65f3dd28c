#![no_main]

use guinand::formulas::VerificationReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(report) = serde_json::from_slice::<VerificationReport>(data) else { return };
    let text = serde_json::to_string(&report).expect("report serializes");
    let _: VerificationReport = serde_json::from_str(&text).expect("serialized report decodes");
});
