#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(table) = citenorm::BaselineTable::from_csv(text, 2008) {
            let _ = citenorm::BaselineTable::from_csv(&table.to_csv(), 2008).expect("re-parse");
        }
    }
});
