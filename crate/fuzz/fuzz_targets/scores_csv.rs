#![no_main]

use libfuzzer_sys::fuzz_target;

use citenorm::report::{render_ranking, render_scatter, scores_from_csv, scores_to_csv, ScatterSpec};
use citenorm::Indicator;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(scores) = scores_from_csv(text) else {
        return;
    };
    let _ = scores_from_csv(&scores_to_csv(&scores)).expect("re-parse");
    let _ = citenorm::stats::correlate_indicators(&scores);
    let _ = render_ranking(&scores, Indicator::Mncs2, 10);
    let _ = render_scatter(&scores, &ScatterSpec::new(Indicator::CppFcsm, Indicator::Mncs1));
});
