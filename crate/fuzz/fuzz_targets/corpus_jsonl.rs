#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = citenorm::corpus::infer_year_span(text);
    // A parsed corpus must survive a round trip through its own writer.
    if let Ok(corpus) = citenorm::parse_corpus_str(text, 2010, 1990) {
        let again = citenorm::parse_corpus_str(&corpus.to_jsonl(), 2010, 1990).expect("re-parse");
        assert_eq!(again, corpus);
        if let Ok(table) = citenorm::compute_baselines(&corpus) {
            for unit in corpus.units() {
                let _ = citenorm::score_unit(&corpus, &table, &unit.id);
            }
        }
    }
});
