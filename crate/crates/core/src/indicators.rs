//! Normalized citation indicators per unit.
//!
//! CPP/FCSm divides the summed actual citations by the summed expected
//! citations (a ratio of averages). MNCS averages the per-publication
//! ratios c/e (an average of ratios); it comes in two variants, `mncs1`
//! over all publications and `mncs2` without census-year publications.
//!
//! An expected count of zero makes the ratio undefined. Such publications
//! are left out of MNCS means and tallied in `n_excluded_zero_e`; they stay
//! in the CPP/FCSm sums, where they contribute nothing to the denominator.
//! Undefined indicator values are `None` and print as `NA`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::baseline::{expected_citations, BaselineTable};
use crate::corpus::{Corpus, Publication};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPublication {
    pub id: String,
    pub pub_year: i32,
    pub c: u64,
    pub e: f64,
    /// `c / e`, `None` when `e == 0`.
    pub ratio: Option<f64>,
}

impl ScoredPublication {
    pub fn new(id: impl Into<String>, pub_year: i32, c: u64, e: f64) -> Self {
        ScoredPublication {
            id: id.into(),
            pub_year,
            c,
            e,
            ratio: normalized_score(c, e),
        }
    }
}

/// `c / e`, or `None` for a zero (or non-positive) baseline.
pub fn normalized_score(c: u64, e: f64) -> Option<f64> {
    (e > 0.0).then(|| c as f64 / e)
}

/// Scores publications against a baseline table, sorted ascending by id.
pub fn score_publications<'a, I>(table: &BaselineTable, publications: I) -> Result<Vec<ScoredPublication>>
where
    I: IntoIterator<Item = &'a Publication>,
{
    let mut scored = publications
        .into_iter()
        .map(|p| {
            let e = expected_citations(table, p)?;
            Ok(ScoredPublication::new(p.id.clone(), p.pub_year, p.citations_total, e))
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(scored)
}

/// Sums in the order given. Callers pass canonical (id-sorted) lists.
pub fn cpp_fcsm(pubs: &[ScoredPublication]) -> Result<Option<f64>> {
    if pubs.is_empty() {
        return Err(Error::EmptyPublications);
    }
    let actual: u64 = pubs.iter().map(|p| p.c).sum();
    let expected: f64 = pubs.iter().map(|p| p.e).sum();
    Ok((expected > 0.0).then(|| actual as f64 / expected))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MncsOutcome {
    pub value: Option<f64>,
    pub n_used: usize,
    pub n_excluded_zero_e: usize,
}

/// Mean of the defined ratios. With `exclude_recent`, publications from
/// `census_year` itself (less than a full year of citations) are dropped
/// first, so `n_excluded_zero_e` only counts among the remaining ones.
pub fn mncs(pubs: &[ScoredPublication], census_year: i32, exclude_recent: bool) -> Result<MncsOutcome> {
    if pubs.is_empty() {
        return Err(Error::EmptyPublications);
    }
    let mut sum = 0.0;
    let mut n_used = 0;
    let mut n_excluded_zero_e = 0;
    for p in pubs {
        if exclude_recent && p.pub_year >= census_year {
            continue;
        }
        match p.ratio {
            Some(r) => {
                sum += r;
                n_used += 1;
            }
            None => n_excluded_zero_e += 1,
        }
    }
    Ok(MncsOutcome {
        value: (n_used > 0).then(|| sum / n_used as f64),
        n_used,
        n_excluded_zero_e,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Indicator {
    CppFcsm,
    Mncs1,
    Mncs2,
}

impl Indicator {
    pub const ALL: [Indicator; 3] = [Indicator::CppFcsm, Indicator::Mncs1, Indicator::Mncs2];

    pub fn as_str(self) -> &'static str {
        match self {
            Indicator::CppFcsm => "cpp_fcsm",
            Indicator::Mncs1 => "mncs1",
            Indicator::Mncs2 => "mncs2",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Indicator::CppFcsm => "CPP/FCSm",
            Indicator::Mncs1 => "MNCS1",
            Indicator::Mncs2 => "MNCS2",
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cpp_fcsm" => Ok(Indicator::CppFcsm),
            "mncs1" => Ok(Indicator::Mncs1),
            "mncs2" => Ok(Indicator::Mncs2),
            other => Err(Error::InvalidArgument(format!(
                "unknown indicator {other:?} (expected cpp_fcsm, mncs1 or mncs2)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitScore {
    pub unit_id: String,
    pub n_total: usize,
    /// Publications with at least one full citation year.
    pub n_mncs2: usize,
    pub n_excluded_zero_e: usize,
    pub cpp_fcsm: Option<f64>,
    pub mncs1: Option<f64>,
    pub mncs2: Option<f64>,
}

impl UnitScore {
    pub fn get(&self, indicator: Indicator) -> Option<f64> {
        match indicator {
            Indicator::CppFcsm => self.cpp_fcsm,
            Indicator::Mncs1 => self.mncs1,
            Indicator::Mncs2 => self.mncs2,
        }
    }
}

pub const SCORES_HEADER: &str = "unit_id,n_total,n_mncs2,n_excluded_zero_e,cpp_fcsm,mncs1,mncs2";

/// Bundles all three indicators for one unit's scored publications.
pub fn score_scored_unit(unit_id: &str, pubs: &[ScoredPublication], census_year: i32) -> Result<UnitScore> {
    if pubs.is_empty() {
        return Err(Error::UnknownUnit(unit_id.to_string()));
    }
    let all = mncs(pubs, census_year, false)?;
    let recent_excluded = mncs(pubs, census_year, true)?;
    Ok(UnitScore {
        unit_id: unit_id.to_string(),
        n_total: pubs.len(),
        n_mncs2: pubs.iter().filter(|p| p.pub_year < census_year).count(),
        n_excluded_zero_e: all.n_excluded_zero_e,
        cpp_fcsm: cpp_fcsm(pubs)?,
        mncs1: all.value,
        mncs2: recent_excluded.value,
    })
}

pub fn score_unit(corpus: &Corpus, baselines: &BaselineTable, unit_id: &str) -> Result<UnitScore> {
    let pubs = score_publications(baselines, corpus.select_unit(unit_id))?;
    score_scored_unit(unit_id, &pubs, corpus.census_year())
}

/// Scores every unit in the corpus, ascending by unit id.
pub fn score_all_units(corpus: &Corpus, baselines: &BaselineTable) -> Result<Vec<UnitScore>> {
    corpus
        .units()
        .iter()
        .map(|u| score_unit(corpus, baselines, &u.id))
        .collect()
}

/// Descending by the selected score, undefined last, ties by ascending unit id.
pub fn rank_units(scores: &[UnitScore], by: Indicator, top: usize) -> Vec<&UnitScore> {
    let mut ranked: Vec<&UnitScore> = scores.iter().collect();
    ranked.sort_by(|a, b| {
        let order = match (a.get(by), b.get(by)) {
            (Some(x), Some(y)) => y.total_cmp(&x),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        order.then_with(|| a.unit_id.cmp(&b.unit_id))
    });
    ranked.truncate(top);
    ranked
}

/// How a unit's publications are aggregated in a consistency search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    /// Ratio of sums (CPP/FCSm).
    RatioOfSums,
    /// Mean of ratios (MNCS).
    MeanOfRatios,
}

impl Aggregation {
    /// Exact value over integer (c, e) pairs with e > 0.
    pub fn exact(self, pubs: &[(u64, u64)]) -> Ratio<i128> {
        match self {
            Aggregation::RatioOfSums => {
                let c: i128 = pubs.iter().map(|&(c, _)| i128::from(c)).sum();
                let e: i128 = pubs.iter().map(|&(_, e)| i128::from(e)).sum();
                Ratio::new(c, e)
            }
            Aggregation::MeanOfRatios => {
                let sum = pubs
                    .iter()
                    .fold(Ratio::from_integer(0), |acc, &(c, e)| {
                        acc + Ratio::new(i128::from(c), i128::from(e))
                    });
                sum / Ratio::from_integer(pubs.len() as i128)
            }
        }
    }
}

/// Two equal-size units and a common added publication such that A
/// strictly outranks B before the addition and B strictly outranks A after.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyWitness {
    pub unit_a: Vec<(u64, u64)>,
    pub unit_b: Vec<(u64, u64)>,
    pub added: (u64, u64),
}

impl ConsistencyWitness {
    /// Re-checks the reversal with exact rational arithmetic.
    pub fn verify(&self, aggregation: Aggregation) -> bool {
        if self.unit_a.len() != self.unit_b.len()
            || self.unit_a.is_empty()
            || self
                .unit_a
                .iter()
                .chain(&self.unit_b)
                .chain(std::iter::once(&self.added))
                .any(|&(_, e)| e == 0)
        {
            return false;
        }
        let before_a = aggregation.exact(&self.unit_a);
        let before_b = aggregation.exact(&self.unit_b);
        let mut after_a = self.unit_a.clone();
        after_a.push(self.added);
        let mut after_b = self.unit_b.clone();
        after_b.push(self.added);
        before_a > before_b && aggregation.exact(&after_b) > aggregation.exact(&after_a)
    }
}

/// Exhaustive search over single-publication units A = (c_a, e_a),
/// B = (c_b, e_b) and an added publication (c*, e*), with citation counts
/// in `0..=bound` and expected counts in `1..=bound`. Candidates are
/// visited in lexicographic order of (c_a, e_a, c_b, e_b, c*, e*) and the
/// first reversal is returned.
pub fn find_consistency_counterexample(aggregation: Aggregation, search_bound: u64) -> Option<ConsistencyWitness> {
    if search_bound == 0 {
        return None;
    }
    let grid: Vec<(u64, u64)> = (0..=search_bound)
        .flat_map(|c| (1..=search_bound).map(move |e| (c, e)))
        .collect();
    for &a in &grid {
        let score_a = aggregation.exact(&[a]);
        for &b in &grid {
            if aggregation.exact(&[b]) >= score_a {
                continue;
            }
            for &added in &grid {
                if aggregation.exact(&[b, added]) > aggregation.exact(&[a, added]) {
                    return Some(ConsistencyWitness {
                        unit_a: vec![a],
                        unit_b: vec![b],
                        added,
                    });
                }
            }
        }
    }
    None
}

pub fn find_cpp_fcsm_consistency_counterexample(search_bound: u64) -> Option<ConsistencyWitness> {
    find_consistency_counterexample(Aggregation::RatioOfSums, search_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(id: &str, year: i32, c: u64, e: f64) -> ScoredPublication {
        ScoredPublication::new(id, year, c, e)
    }

    fn unit_score(id: &str, cpp: Option<f64>) -> UnitScore {
        UnitScore {
            unit_id: id.into(),
            n_total: 1,
            n_mncs2: 1,
            n_excluded_zero_e: 0,
            cpp_fcsm: cpp,
            mncs1: cpp,
            mncs2: cpp,
        }
    }

    #[test]
    fn normalized_score_examples() {
        assert!((normalized_score(21, 3.57).unwrap() - 5.882).abs() < 5e-4);
        let r = normalized_score(16, 1.52).unwrap();
        assert!((r - 10.526).abs() < 5e-4);
        assert!((10.49..=10.56).contains(&r));
        assert_eq!(normalized_score(0, 0.0), None);
        assert_eq!(normalized_score(3, 0.0), None);
    }

    #[test]
    fn cpp_fcsm_trivial_cases() {
        assert_eq!(cpp_fcsm(&[sp("a", 1999, 10, 5.0)]).unwrap(), Some(2.0));
        let equal = [sp("a", 1999, 3, 3.0), sp("b", 1999, 7, 7.0)];
        assert_eq!(cpp_fcsm(&equal).unwrap(), Some(1.0));
        assert!(matches!(cpp_fcsm(&[]), Err(Error::EmptyPublications)));
        assert_eq!(cpp_fcsm(&[sp("a", 1999, 0, 0.0)]).unwrap(), None);
    }

    #[test]
    fn mncs_constant_ratio() {
        let pubs = [sp("a", 1999, 4, 2.0), sp("b", 2000, 6, 3.0), sp("c", 1998, 1, 0.5)];
        for exclude in [false, true] {
            assert_eq!(mncs(&pubs, 2000, exclude).unwrap().value, Some(2.0));
        }
        assert_eq!(mncs(&pubs, 2000, true).unwrap().n_used, 2);
        assert!(mncs(&[], 2000, false).is_err());
    }

    #[test]
    fn zero_baseline_unit_is_undefined_and_tallied() {
        let pubs = [sp("a", 1999, 0, 0.0)];
        let score = score_scored_unit("U", &pubs, 2000).unwrap();
        assert_eq!(score.mncs1, None);
        assert_eq!(score.mncs2, None);
        assert_eq!(score.cpp_fcsm, None);
        assert_eq!(score.n_excluded_zero_e, 1);
    }

    #[test]
    fn n_mncs2_counts_non_census_years() {
        let pubs = [sp("a", 1999, 1, 1.0), sp("b", 2000, 1, 1.0), sp("c", 2000, 1, 1.0)];
        let score = score_scored_unit("U", &pubs, 2000).unwrap();
        assert_eq!(score.n_total, 3);
        assert_eq!(score.n_mncs2, 1);
    }

    #[test]
    fn ranking_order_ties_and_truncation() {
        let scores = [
            unit_score("A", Some(1.5)),
            unit_score("B", Some(2.0)),
            unit_score("C", Some(1.5)),
        ];
        let ids = |v: Vec<&UnitScore>| v.iter().map(|s| s.unit_id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(rank_units(&scores, Indicator::CppFcsm, 10)), ["B", "A", "C"]);
        assert_eq!(ids(rank_units(&scores, Indicator::CppFcsm, 1)), ["B"]);

        let with_na = [unit_score("A", None), unit_score("B", Some(0.1)), unit_score("C", Some(3.0))];
        assert_eq!(ids(rank_units(&with_na, Indicator::Mncs2, 10)), ["C", "B", "A"]);
    }

    #[test]
    fn indicator_names_round_trip() {
        for ind in Indicator::ALL {
            assert_eq!(ind.as_str().parse::<Indicator>().unwrap(), ind);
        }
        assert!("mncs3".parse::<Indicator>().is_err());
    }

    #[test]
    fn hand_witness_is_valid() {
        let witness = ConsistencyWitness {
            unit_a: vec![(2, 1)],
            unit_b: vec![(10, 6)],
            added: (0, 10),
        };
        assert!(witness.verify(Aggregation::RatioOfSums));
        assert!(!witness.verify(Aggregation::MeanOfRatios));
    }

    #[test]
    fn cpp_search_finds_witness_and_mncs_search_does_not() {
        let witness = find_cpp_fcsm_consistency_counterexample(10).unwrap();
        assert!(witness.verify(Aggregation::RatioOfSums));
        let key = |w: &ConsistencyWitness| (w.unit_a[0], w.unit_b[0], w.added);
        assert!(key(&witness) <= ((2, 1), (10, 6), (0, 10)));
        assert_eq!(find_consistency_counterexample(Aggregation::MeanOfRatios, 6), None);
        assert_eq!(find_cpp_fcsm_consistency_counterexample(0), None);
    }
}
