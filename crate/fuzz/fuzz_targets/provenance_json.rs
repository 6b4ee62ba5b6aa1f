#![no_main]

use libfuzzer_sys::fuzz_target;
use qsmote::ResampleReport;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<ResampleReport>(data) {
        let text = serde_json::to_vec(&r).expect("serialize report");
        let back: ResampleReport = serde_json::from_slice(&text).expect("re-read report");
        assert_eq!(back.provenance, r.provenance);
        assert_eq!(back.generated_rows(), r.generated_rows());
    }
});
