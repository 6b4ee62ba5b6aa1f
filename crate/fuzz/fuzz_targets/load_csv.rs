#![no_main]

use libfuzzer_sys::fuzz_target;
use qsmote::io::{read_csv, write_csv, CsvSchema};

fuzz_target!(|data: &[u8]| {
    let headed = CsvSchema::default();
    let bare = CsvSchema { label_column: String::new(), has_header: false, ..CsvSchema::default() };
    for schema in [headed, bare] {
        if let Ok(d) = read_csv(data, &schema) {
            // whatever parses must survive a write/read cycle unchanged
            let mut buf = Vec::new();
            write_csv(&d, &mut buf, &schema).expect("write parsed data");
            let back = read_csv(buf.as_slice(), &schema).expect("re-read written data");
            assert_eq!(back.features(), d.features());
            assert_eq!(back.labels(), d.labels());
        }
    }
});
