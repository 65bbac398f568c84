#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(config) = citenorm::SimulationConfig::from_json(text) else {
        return;
    };
    // keep generation cheap; parsing and validation are the targets here
    let span = i64::from(config.census_year) - i64::from(config.first_year);
    if config.total_publications() <= 200 && span <= 20 {
        let _ = citenorm::generate_corpus(&config);
    }
});
