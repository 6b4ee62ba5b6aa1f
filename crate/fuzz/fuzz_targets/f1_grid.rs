#![no_main]

use libfuzzer_sys::fuzz_target;
use qsmote::io::read_f1_grid;
use qsmote::metrics::improvement_pct;

fuzz_target!(|data: &[u8]| {
    let Ok(g) = read_f1_grid(data) else { return };
    let base = &g.rows[0].1;
    for (_, row) in &g.rows {
        for (t, o) in row.iter().zip(base) {
            let _ = improvement_pct(*t, *o);
        }
    }
});
