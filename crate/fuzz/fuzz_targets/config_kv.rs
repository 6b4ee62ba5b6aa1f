#![no_main]

use libfuzzer_sys::fuzz_target;
use qsmote::io::parse_kv;
use qsmote::ResamplePlan;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(pairs) = parse_kv(text) {
        if let Ok(plan) = ResamplePlan::from_pairs(&pairs) {
            assert!(plan.validate().is_ok());
        }
    }
});
