#![no_main]

use libfuzzer_sys::fuzz_target;
use qsmote::io::read_score_columns;
use qsmote::metrics::wilcoxon_signed_rank;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = read_score_columns(data) else { return };
    if s.columns.len() >= 2 {
        if let Ok(out) = wilcoxon_signed_rank(&s.columns[0], &s.columns[1]) {
            if let Some(r) = out.result() {
                assert!(r.p_approx >= 0.0 && r.p_approx <= 1.0);
                assert!(r.p_exact.map_or(true, |p| p > 0.0 && p <= 1.0));
            }
        }
    }
});
