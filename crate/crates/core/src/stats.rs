//! Correlations between indicators and between citation windows, plus
//! mean citation trajectories.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::corpus::Publication;
use crate::indicators::{Indicator, UnitScore};
use crate::{format_score, Error, Result};

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewValues(x.len()));
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample Pearson correlation; `Ok(None)` when either vector is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    check_lengths(x, y)?;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0)))
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && v[order[end]] == v[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation of the average-rank transforms.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    check_lengths(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationPair {
    pub label_x: String,
    pub label_y: String,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    /// Units with both values defined.
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub pairs: Vec<CorrelationPair>,
}

impl CorrelationReport {
    pub fn pair(&self, x: &str, y: &str) -> Option<&CorrelationPair> {
        self.pairs.iter().find(|p| p.label_x == x && p.label_y == y)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,n,pearson,spearman\n");
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                p.label_x,
                p.label_y,
                p.n,
                format_score(p.pearson, 4),
                format_score(p.spearman, 4)
            );
        }
        out
    }
}

/// Correlates two indicators over the units where both are defined
/// (pairwise deletion). Fewer than two such units leaves the pair undefined.
pub fn correlate_pair(scores: &[UnitScore], x: Indicator, y: Indicator) -> CorrelationPair {
    let (xs, ys): (Vec<f64>, Vec<f64>) = scores
        .iter()
        .filter_map(|s| Some((s.get(x)?, s.get(y)?)))
        .unzip();
    let n = xs.len();
    let (pearson, spearman) = if n >= 2 {
        // lengths are equal and >= 2, so only the constant case yields None
        (
            pearson(&xs, &ys).ok().flatten(),
            spearman(&xs, &ys).ok().flatten(),
        )
    } else {
        (None, None)
    };
    CorrelationPair {
        label_x: x.as_str().into(),
        label_y: y.as_str().into(),
        pearson,
        spearman,
        n,
    }
}

pub fn correlate_indicators(scores: &[UnitScore]) -> Result<CorrelationReport> {
    if scores.len() < 2 {
        return Err(Error::TooFewValues(scores.len()));
    }
    use Indicator::*;
    Ok(CorrelationReport {
        pairs: vec![
            correlate_pair(scores, CppFcsm, Mncs1),
            correlate_pair(scores, CppFcsm, Mncs2),
            correlate_pair(scores, Mncs1, Mncs2),
        ],
    })
}

/// Pearson correlations between cumulative citation counts at pairs of years.
#[derive(Debug, Clone, PartialEq)]
pub struct AgeCorrelationMatrix {
    pub years: Vec<i32>,
    /// Row-major, symmetric; diagonal is 1.
    pub entries: Vec<Vec<Option<f64>>>,
}

impl AgeCorrelationMatrix {
    pub fn get(&self, y1: i32, y2: i32) -> Option<f64> {
        let i = self.years.iter().position(|&y| y == y1)?;
        let j = self.years.iter().position(|&y| y == y2)?;
        self.entries[i][j]
    }

    /// Year labels on the first row and column, blank diagonal, 2 decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for y in &self.years {
            let _ = write!(out, ",{y}");
        }
        out.push('\n');
        for (i, y) in self.years.iter().enumerate() {
            let _ = write!(out, "{y}");
            for (j, value) in self.entries[i].iter().enumerate() {
                out.push(',');
                if i != j {
                    out.push_str(&format_score(*value, 2));
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn age_correlation_matrix(pubs: &[&Publication]) -> Result<AgeCorrelationMatrix> {
    let first = pubs.first().ok_or(Error::EmptyPublications)?;
    let years: Vec<i32> = first
        .citations_by_year
        .as_ref()
        .ok_or_else(|| missing_by_year(first))?
        .keys()
        .copied()
        .collect();
    let mut columns = vec![Vec::with_capacity(pubs.len()); years.len()];
    for p in pubs {
        if p.pub_year != first.pub_year {
            return Err(Error::InvalidArgument(format!(
                "publications span several years ({} and {})",
                first.pub_year, p.pub_year
            )));
        }
        let by_year = p.citations_by_year.as_ref().ok_or_else(|| missing_by_year(p))?;
        if by_year.len() != years.len() || by_year.keys().zip(&years).any(|(a, b)| a != b) {
            return Err(Error::CitationsByYear {
                line: 0,
                id: p.id.clone(),
                message: "citations_by_year covers different years than the rest".into(),
            });
        }
        for (col, &count) in columns.iter_mut().zip(by_year.values()) {
            col.push(count as f64);
        }
    }
    if pubs.len() < 2 {
        return Err(Error::TooFewValues(pubs.len()));
    }
    let k = years.len();
    let mut entries = vec![vec![None; k]; k];
    for i in 0..k {
        entries[i][i] = Some(1.0);
        for j in (i + 1)..k {
            let r = pearson(&columns[i], &columns[j])?;
            entries[i][j] = r;
            entries[j][i] = r;
        }
    }
    Ok(AgeCorrelationMatrix { years, entries })
}

fn missing_by_year(p: &Publication) -> Error {
    Error::CitationsByYear {
        line: 0,
        id: p.id.clone(),
        message: "missing citations_by_year".into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub field_id: String,
    pub pub_year: i32,
    pub n_pubs: usize,
    /// (year, mean cumulative citations by the end of that year).
    pub means: Vec<(i32, f64)>,
}

impl Trajectory {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("year,n_pubs,mean_citations\n");
        for (year, m) in &self.means {
            let _ = writeln!(out, "{year},{},{m:.4}", self.n_pubs);
        }
        out
    }
}

/// Mean cumulative citations per year over publications of `field_id`
/// published in `pub_year`.
pub fn trajectory<'a, I>(pubs: I, field_id: &str, pub_year: i32) -> Result<Trajectory>
where
    I: IntoIterator<Item = &'a Publication>,
{
    let mut sums: BTreeMap<i32, u64> = BTreeMap::new();
    let mut n_pubs = 0usize;
    for p in pubs {
        if p.pub_year != pub_year || !p.has_field(field_id) {
            continue;
        }
        let by_year = p.citations_by_year.as_ref().ok_or_else(|| missing_by_year(p))?;
        if n_pubs > 0 && (by_year.len() != sums.len() || by_year.keys().zip(sums.keys()).any(|(a, b)| a != b)) {
            return Err(Error::CitationsByYear {
                line: 0,
                id: p.id.clone(),
                message: "citations_by_year covers different years than the rest".into(),
            });
        }
        for (&year, &count) in by_year {
            *sums.entry(year).or_default() += count;
        }
        n_pubs += 1;
    }
    if n_pubs == 0 {
        return Err(Error::InvalidArgument(format!(
            "no publications in field {field_id} published in {pub_year}"
        )));
    }
    Ok(Trajectory {
        field_id: field_id.to_string(),
        pub_year,
        n_pubs,
        means: sums
            .into_iter()
            .map(|(year, sum)| (year, sum as f64 / n_pubs as f64))
            .collect(),
    })
}
