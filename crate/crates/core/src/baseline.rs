//! Expected citations per (field, publication year) cell.
//!
//! A cell's mean is computed from an integer citation sum divided once by
//! the cell size, so the result does not depend on summation order or on
//! how the corpus was split across workers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::thread;

use crate::corpus::{Corpus, Publication};
use crate::{csv_field, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineCell {
    pub mean_citations: f64,
    pub cell_size: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineTable {
    cells: BTreeMap<(String, i32), BaselineCell>,
    census_year: i32,
}

impl BaselineTable {
    pub fn census_year(&self) -> i32 {
        self.census_year
    }

    pub fn cells(&self) -> &BTreeMap<(String, i32), BaselineCell> {
        &self.cells
    }

    pub fn get(&self, field_id: &str, year: i32) -> Option<&BaselineCell> {
        // BTreeMap lookups need an owned key for tuple keys.
        self.cells.get(&(field_id.to_string(), year))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// CSV with header `field_id,pub_year,mean_citations,cell_size`, rows
    /// sorted by (field_id, pub_year), means with 6 decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("field_id,pub_year,mean_citations,cell_size\n");
        for ((field, year), cell) in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{:.6},{}",
                csv_field(field),
                year,
                cell.mean_citations,
                cell.cell_size
            );
        }
        out
    }

    /// Loads a table previously written by [`BaselineTable::to_csv`] or
    /// produced elsewhere in the same layout.
    pub fn from_csv(text: &str, census_year: i32) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| Error::malformed(1, e.to_string()))?
            .clone();
        let expected = ["field_id", "pub_year", "mean_citations", "cell_size"];
        if header.iter().ne(expected) {
            return Err(Error::malformed(
                1,
                format!("expected header {}", expected.join(",")),
            ));
        }
        let mut cells = BTreeMap::new();
        for (idx, record) in reader.records().enumerate() {
            let line = idx + 2;
            let record = record.map_err(|e| Error::malformed(line, e.to_string()))?;
            let field = record[0].to_string();
            if field.is_empty() {
                return Err(Error::malformed(line, "empty field_id"));
            }
            let year: i32 = record[1]
                .trim()
                .parse()
                .map_err(|_| Error::malformed(line, format!("bad pub_year {:?}", &record[1])))?;
            let mean: f64 = record[2]
                .trim()
                .parse()
                .map_err(|_| Error::malformed(line, format!("bad mean_citations {:?}", &record[2])))?;
            if !mean.is_finite() || mean < 0.0 {
                return Err(Error::malformed(line, "mean_citations must be a non-negative number"));
            }
            let size: u64 = record[3]
                .trim()
                .parse()
                .map_err(|_| Error::malformed(line, format!("bad cell_size {:?}", &record[3])))?;
            if size == 0 {
                return Err(Error::malformed(line, "cell_size must be at least 1"));
            }
            let cell = BaselineCell {
                mean_citations: mean,
                cell_size: size,
            };
            if cells.insert((field.clone(), year), cell).is_some() {
                return Err(Error::malformed(line, format!("duplicate cell ({field}, {year})")));
            }
        }
        Ok(BaselineTable { cells, census_year })
    }
}

type CellSums = BTreeMap<(String, i32), (u64, u64)>;

fn accumulate(publications: &[Publication]) -> CellSums {
    let mut sums = CellSums::new();
    for publication in publications {
        for field in &publication.field_ids {
            let entry = sums
                .entry((field.clone(), publication.pub_year))
                .or_insert((0, 0));
            entry.0 += publication.citations_total;
            entry.1 += 1;
        }
    }
    sums
}

fn finish(sums: CellSums, census_year: i32) -> BaselineTable {
    let cells = sums
        .into_iter()
        .map(|(key, (sum, size))| {
            (
                key,
                BaselineCell {
                    mean_citations: sum as f64 / size as f64,
                    cell_size: size,
                },
            )
        })
        .collect();
    BaselineTable { cells, census_year }
}

/// One cell per (field, year) present in the corpus. Multi-field
/// publications contribute their full count to each of their fields.
pub fn compute_baselines(corpus: &Corpus) -> Result<BaselineTable> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(finish(accumulate(corpus.publications()), corpus.census_year()))
}

/// Same table as [`compute_baselines`], built from `workers` chunks whose
/// integer sums are merged before the single division per cell.
pub fn compute_baselines_parallel(corpus: &Corpus, workers: usize) -> Result<BaselineTable> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let workers = workers.max(1);
    let chunk = corpus.len().div_ceil(workers);
    let partials: Vec<CellSums> = thread::scope(|scope| {
        let handles: Vec<_> = corpus
            .publications()
            .chunks(chunk)
            .map(|part| scope.spawn(move || accumulate(part)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("baseline worker panicked"))
            .collect()
    });
    let mut merged = CellSums::new();
    for partial in partials {
        for (key, (sum, size)) in partial {
            let entry = merged.entry(key).or_insert((0, 0));
            entry.0 += sum;
            entry.1 += size;
        }
    }
    Ok(finish(merged, corpus.census_year()))
}

/// Expected citations of `publication`: the mean of its field-year cell
/// means. For a single-field publication this is exactly the cell mean.
pub fn expected_citations(table: &BaselineTable, publication: &Publication) -> Result<f64> {
    let mut total = 0.0;
    for field in &publication.field_ids {
        let cell = table
            .get(field, publication.pub_year)
            .ok_or_else(|| Error::MissingBaseline {
                field: field.clone(),
                year: publication.pub_year,
            })?;
        total += cell.mean_citations;
    }
    if publication.field_ids.len() == 1 {
        return Ok(total);
    }
    Ok(total / publication.field_ids.len() as f64)
}
