//! Field- and year-normalized citation indicators.
//!
//! The crate computes two families of normalized citation scores for units
//! (research groups, institutions, countries, journals) that own sets of
//! publications:
//!
//! * **CPP/FCSm**, a ratio of averages: total actual citations divided by
//!   total expected citations.
//! * **MNCS**, an average of ratios: the mean of per-publication
//!   actual/expected citation ratios, in two variants. `mncs1` uses every
//!   publication, `mncs2` leaves out publications from the census year.
//!
//! Expected citations come from a [`BaselineTable`] holding the mean
//! citation count of each (field, publication year) cell of a reference
//! corpus. The [`stats`] module compares indicators via Pearson and
//! Spearman correlations, [`simulate`] generates seeded synthetic corpora,
//! and [`report`] renders rankings and scatter plots.
//!
//! Publications are always processed in ascending id order, so every
//! floating-point sum in the crate is reproducible bit for bit.

pub mod baseline;
pub mod corpus;
mod error;
pub mod indicators;
pub mod report;
pub mod simulate;
pub mod stats;

pub use baseline::{compute_baselines, expected_citations, BaselineCell, BaselineTable};
pub use corpus::{parse_corpus, parse_corpus_str, Corpus, Publication, Unit};
pub use error::{Error, Result};
pub use indicators::{
    cpp_fcsm, mncs, normalized_score, rank_units, score_unit, Indicator, MncsOutcome,
    ScoredPublication, UnitScore,
};
pub use report::{render_ranking, render_scatter, ScatterPlot, ScatterSpec};
pub use simulate::{generate_corpus, SimulationConfig};
pub use stats::{pearson, spearman, CorrelationReport};

/// Formats an optional real with a fixed number of decimals, `NA` when undefined.
pub fn format_score(value: Option<f64>, decimals: usize) -> String {
    match value {
        Some(v) => format!("{v:.decimals$}"),
        None => "NA".to_string(),
    }
}

/// Quotes a CSV cell when it contains a delimiter, quote or line break.
pub(crate) fn csv_field(value: &str) -> std::borrow::Cow<'_, str> {
    if value.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", value.replace('"', "\"\"")).into()
    } else {
        value.into()
    }
}
