//! Publication corpus model and JSON Lines ingestion.
//!
//! One publication per line:
//!
//! ```text
//! {"id":"P1","unit_ids":["G1"],"field_ids":["F1"],"pub_year":1999,"doc_type":"article","citations_total":5,"citations_by_year":{"1999":0,"2000":5}}
//! ```
//!
//! Citation counts are taken as given. Self-citation filtering and any other
//! cleaning has to happen before ingestion. A publication listing several
//! units or fields counts fully for each of them (whole counting).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publication {
    pub id: String,
    pub unit_ids: Vec<String>,
    pub field_ids: Vec<String>,
    pub pub_year: i32,
    /// Carried through, never used for normalization.
    pub doc_type: String,
    pub citations_total: u64,
    /// Cumulative citations by the end of each calendar year.
    pub citations_by_year: Option<BTreeMap<i32, u64>>,
}

impl Publication {
    pub fn has_unit(&self, unit_id: &str) -> bool {
        self.unit_ids.iter().any(|u| u == unit_id)
    }

    pub fn has_field(&self, field_id: &str) -> bool {
        self.field_ids.iter().any(|f| f == field_id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub id: String,
    pub label: String,
    pub pub_count: usize,
}

/// Validated, immutable set of publications sorted ascending by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    publications: Vec<Publication>,
    census_year: i32,
    first_year: i32,
}

impl Corpus {
    /// Validates publications against the year window and sorts them by id.
    ///
    /// Line numbers in errors are 1-based positions in `publications`.
    pub fn new(publications: Vec<Publication>, census_year: i32, first_year: i32) -> Result<Self> {
        if first_year > census_year {
            return Err(Error::InvalidArgument(format!(
                "first year {first_year} is after census year {census_year}"
            )));
        }
        let mut seen = HashSet::with_capacity(publications.len());
        for (idx, publication) in publications.iter().enumerate() {
            let line = idx + 1;
            validate_publication(publication, line, census_year, first_year)?;
            if !seen.insert(publication.id.as_str()) {
                return Err(Error::DuplicateId {
                    id: publication.id.clone(),
                    line,
                });
            }
        }
        let mut publications = publications;
        publications.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Corpus {
            publications,
            census_year,
            first_year,
        })
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn census_year(&self) -> i32 {
        self.census_year
    }

    pub fn first_year(&self) -> i32 {
        self.first_year
    }

    pub fn len(&self) -> usize {
        self.publications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
    }

    /// Publications listing `unit_id`, ascending by id. Empty when the unit is unknown.
    pub fn select_unit(&self, unit_id: &str) -> Vec<&Publication> {
        self.publications
            .iter()
            .filter(|p| p.has_unit(unit_id))
            .collect()
    }

    /// Every unit mentioned in the corpus, ascending by id.
    pub fn units(&self) -> Vec<Unit> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for publication in &self.publications {
            for unit in &publication.unit_ids {
                *counts.entry(unit.as_str()).or_default() += 1;
            }
        }
        counts
            .into_iter()
            .map(|(id, pub_count)| Unit {
                id: id.to_string(),
                label: id.to_string(),
                pub_count,
            })
            .collect()
    }

    /// Serializes to JSON Lines in canonical order; parses back to an equal corpus.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for publication in &self.publications {
            let record = RecordOut {
                id: &publication.id,
                unit_ids: &publication.unit_ids,
                field_ids: &publication.field_ids,
                pub_year: publication.pub_year,
                doc_type: &publication.doc_type,
                citations_total: publication.citations_total,
                citations_by_year: publication.citations_by_year.as_ref().map(|m| {
                    m.iter()
                        .map(|(year, count)| (year.to_string(), *count))
                        .collect::<Vec<_>>()
                }),
            };
            // Serializing plain strings and integers cannot fail.
            out.push_str(&serde_json::to_string(&record).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

fn validate_publication(p: &Publication, line: usize, census_year: i32, first_year: i32) -> Result<()> {
    if p.id.is_empty() {
        return Err(Error::malformed(line, "empty publication id"));
    }
    if p.field_ids.is_empty() {
        return Err(Error::malformed(line, format!("publication {} has no field_ids", p.id)));
    }
    if p.field_ids.iter().any(String::is_empty) {
        return Err(Error::malformed(line, format!("publication {} has an empty field id", p.id)));
    }
    if p.unit_ids.iter().any(String::is_empty) {
        return Err(Error::malformed(line, format!("publication {} has an empty unit id", p.id)));
    }
    if p.pub_year < first_year || p.pub_year > census_year {
        return Err(Error::YearOutOfRange {
            line,
            id: p.id.clone(),
            year: p.pub_year,
            first_year,
            census_year,
        });
    }
    if let Some(by_year) = &p.citations_by_year {
        let by_year_err = |message: String| Error::CitationsByYear {
            line,
            id: p.id.clone(),
            message,
        };
        let span = (i64::from(census_year) - i64::from(p.pub_year)) as usize + 1;
        if by_year.len() != span
            || by_year.keys().next() != Some(&p.pub_year)
            || by_year.keys().next_back() != Some(&census_year)
        {
            return Err(by_year_err(format!(
                "citations_by_year must cover every year from {} to {}",
                p.pub_year, census_year
            )));
        }
        let mut previous = 0;
        for (year, &count) in by_year {
            if count < previous {
                return Err(by_year_err(format!("citations_by_year decreases at {year}")));
            }
            previous = count;
        }
        if previous != p.citations_total {
            return Err(by_year_err(format!(
                "citations_by_year ends at {previous} but citations_total is {}",
                p.citations_total
            )));
        }
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordIn {
    id: String,
    unit_ids: Vec<String>,
    field_ids: Vec<String>,
    pub_year: i32,
    doc_type: String,
    citations_total: i64,
    #[serde(default)]
    citations_by_year: Option<HashMap<String, i64>>,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    id: &'a str,
    unit_ids: &'a [String],
    field_ids: &'a [String],
    pub_year: i32,
    doc_type: &'a str,
    citations_total: u64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_pairs")]
    citations_by_year: Option<Vec<(String, u64)>>,
}

fn ser_pairs<S: serde::Serializer>(
    pairs: &Option<Vec<(String, u64)>>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let pairs = pairs.as_deref().unwrap_or_default();
    let mut map = serializer.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        map.serialize_entry(k, v)?;
    }
    map.end()
}

fn publication_from_record(record: RecordIn, line: usize) -> Result<Publication> {
    if record.citations_total < 0 {
        return Err(Error::NegativeCount { line });
    }
    let citations_by_year = match record.citations_by_year {
        None => None,
        Some(raw) => {
            let mut by_year = BTreeMap::new();
            for (key, count) in raw {
                let year: i32 = key.trim().parse().map_err(|_| {
                    Error::malformed(line, format!("citations_by_year key {key:?} is not a year"))
                })?;
                if count < 0 {
                    return Err(Error::NegativeCount { line });
                }
                if by_year.insert(year, count as u64).is_some() {
                    return Err(Error::malformed(line, format!("citations_by_year repeats year {year}")));
                }
            }
            Some(by_year)
        }
    };
    Ok(Publication {
        id: record.id,
        unit_ids: record.unit_ids,
        field_ids: record.field_ids,
        pub_year: record.pub_year,
        doc_type: record.doc_type,
        citations_total: record.citations_total as u64,
        citations_by_year,
    })
}

/// Parses JSON Lines text into a validated corpus.
///
/// Blank lines are skipped. Errors carry the 1-based line number of the
/// offending record; for duplicate ids that is the second occurrence.
pub fn parse_corpus_str(text: &str, census_year: i32, first_year: i32) -> Result<Corpus> {
    if first_year > census_year {
        return Err(Error::InvalidArgument(format!(
            "first year {first_year} is after census year {census_year}"
        )));
    }
    let mut publications = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let record: RecordIn =
            serde_json::from_str(raw).map_err(|e| Error::malformed(line, e.to_string()))?;
        let publication = publication_from_record(record, line)?;
        validate_publication(&publication, line, census_year, first_year)?;
        if seen.insert(publication.id.clone(), line).is_some() {
            return Err(Error::DuplicateId {
                id: publication.id,
                line,
            });
        }
        publications.push(publication);
    }
    publications.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(Corpus {
        publications,
        census_year,
        first_year,
    })
}

pub fn parse_corpus(path: impl AsRef<Path>, census_year: i32, first_year: i32) -> Result<Corpus> {
    let text = fs::read_to_string(path)?;
    parse_corpus_str(&text, census_year, first_year)
}

/// Latest year mentioned anywhere in the file (publication years and
/// `citations_by_year` keys), for callers that do not know the census year.
/// Lines that fail to parse are ignored here and reported by [`parse_corpus_str`].
pub fn infer_year_span(text: &str) -> Option<(i32, i32)> {
    let mut span: Option<(i32, i32)> = None;
    let mut widen = |y: i32| {
        span = Some(match span {
            None => (y, y),
            Some((lo, hi)) => (lo.min(y), hi.max(y)),
        });
    };
    for raw in text.lines() {
        let Ok(record) = serde_json::from_str::<RecordIn>(raw) else {
            continue;
        };
        widen(record.pub_year);
        if let Some(by_year) = &record.citations_by_year {
            for key in by_year.keys() {
                if let Ok(y) = key.trim().parse::<i32>() {
                    widen(y);
                }
            }
        }
    }
    span
}
