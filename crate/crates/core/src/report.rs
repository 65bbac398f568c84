//! Scatter plots, rankings and score tables.

use std::fmt::Write as _;

use crate::indicators::{rank_units, Indicator, UnitScore, SCORES_HEADER};
use crate::{csv_field, format_score, Error, Result};

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 40.0;
const PLOT: f64 = CANVAS - 2.0 * MARGIN;
const MARKER: f64 = 5.0;
const RED: &str = "#CC0000";
const BLUE: &str = "#0033CC";

pub const DEFAULT_THRESHOLD: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSpec {
    pub x: Indicator,
    pub y: Indicator,
    /// Units with `n_mncs2 <= threshold` are drawn as red squares.
    pub threshold: usize,
    /// Clip both axes at this value; units beyond it are left out.
    pub axis_max: Option<f64>,
}

impl ScatterSpec {
    pub fn new(x: Indicator, y: Indicator) -> Self {
        ScatterSpec {
            x,
            y,
            threshold: DEFAULT_THRESHOLD,
            axis_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPlot {
    pub svg: String,
    pub plotted: usize,
    pub clipped: usize,
    pub undefined: usize,
}

fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // not representable in XML 1.0
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => out.push('?'),
            c => out.push(c),
        }
    }
    out
}

/// Square scatter plot of two indicators with equal linear axes from 0 to
/// `axis_max` and the identity line through the origin.
pub fn render_scatter(scores: &[UnitScore], spec: &ScatterSpec) -> Result<ScatterPlot> {
    if let Some(max) = spec.axis_max {
        if !(max.is_finite() && max > 0.0) {
            return Err(Error::InvalidArgument(format!("axis_max must be positive, got {max}")));
        }
    }
    let mut sorted: Vec<&UnitScore> = scores.iter().collect();
    sorted.sort_by(|a, b| a.unit_id.cmp(&b.unit_id));

    let mut defined = Vec::new();
    let mut undefined = 0;
    for s in sorted {
        match (s.get(spec.x), s.get(spec.y)) {
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() => defined.push((s, x, y)),
            _ => undefined += 1,
        }
    }
    if defined.is_empty() {
        return Err(Error::NoPlottableUnits);
    }
    let axis_max = spec.axis_max.unwrap_or_else(|| {
        let max = defined
            .iter()
            .fold(0.0_f64, |acc, &(_, x, y)| acc.max(x).max(y));
        if max > 0.0 {
            1.05 * max
        } else {
            1.0
        }
    });
    let (visible, clipped): (Vec<_>, Vec<_>) = defined
        .into_iter()
        .partition(|&(_, x, y)| x <= axis_max && y <= axis_max);
    if visible.is_empty() {
        return Err(Error::NoPlottableUnits);
    }

    let px = |v: f64| MARGIN + v / axis_max * PLOT;
    let py = |v: f64| CANVAS - MARGIN - v / axis_max * PLOT;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(
        svg,
        "<!-- units={} plotted={} clipped={} undefined={} axis_max={axis_max:.6} threshold={} -->",
        scores.len(),
        visible.len(),
        clipped.len(),
        undefined,
        spec.threshold
    );
    let _ = writeln!(svg, "<title>{} vs {}</title>", spec.y.label(), spec.x.label());
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{CANVAS}" height="{CANVAS}" fill="white"/>"#);

    // axes and identity line
    let (lo, hi) = (MARGIN, CANVAS - MARGIN);
    let _ = writeln!(
        svg,
        r#"<g stroke="black" stroke-width="1"><line x1="{lo}" y1="{hi}" x2="{hi}" y2="{hi}"/><line x1="{lo}" y1="{hi}" x2="{lo}" y2="{lo}"/></g>"#
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#777777" stroke-width="1"/>"##,
        px(0.0),
        py(0.0),
        px(axis_max),
        py(axis_max)
    );
    let _ = writeln!(svg, r#"<g font-family="sans-serif" font-size="10" fill="black">"#);
    for i in 0..=4 {
        let v = axis_max * f64::from(i) / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{v:.2}</text>"#,
            px(v),
            hi + 14.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{v:.2}</text>"#,
            lo - 4.0,
            py(v) + 3.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
        CANVAS / 2.0,
        CANVAS - 8.0,
        spec.x.label()
    );
    let _ = writeln!(
        svg,
        r#"<text x="12" y="{:.3}" text-anchor="middle" transform="rotate(-90 12 {:.3})">{}</text>"#,
        CANVAS / 2.0,
        CANVAS / 2.0,
        spec.y.label()
    );
    let _ = writeln!(svg, "</g>");

    for &(s, x, y) in &visible {
        let (cx, cy) = (px(x), py(y));
        let title = escape_xml(&s.unit_id);
        if s.n_mncs2 <= spec.threshold {
            let _ = writeln!(
                svg,
                r#"<rect x="{:.3}" y="{:.3}" width="{}" height="{}" fill="{RED}"><title>{title}</title></rect>"#,
                cx - MARKER,
                cy - MARKER,
                2.0 * MARKER,
                2.0 * MARKER
            );
        } else {
            let _ = writeln!(
                svg,
                r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{MARKER}" fill="{BLUE}"><title>{title}</title></circle>"#
            );
        }
    }
    svg.push_str("</svg>\n");

    Ok(ScatterPlot {
        svg,
        plotted: visible.len(),
        clipped: clipped.len(),
        undefined,
    })
}

/// `rank,unit_id,score` rows, score with 2 decimals or `NA`.
pub fn render_ranking(scores: &[UnitScore], by: Indicator, top: usize) -> String {
    let mut out = String::from("rank,unit_id,score\n");
    for (i, s) in rank_units(scores, by, top).into_iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", i + 1, csv_field(&s.unit_id), format_score(s.get(by), 2));
    }
    out
}

/// Score table sorted by unit id, reals with 4 decimals.
pub fn scores_to_csv(scores: &[UnitScore]) -> String {
    let mut sorted: Vec<&UnitScore> = scores.iter().collect();
    sorted.sort_by(|a, b| a.unit_id.cmp(&b.unit_id));
    let mut out = String::from(SCORES_HEADER);
    out.push('\n');
    for s in sorted {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(&s.unit_id),
            s.n_total,
            s.n_mncs2,
            s.n_excluded_zero_e,
            format_score(s.cpp_fcsm, 4),
            format_score(s.mncs1, 4),
            format_score(s.mncs2, 4)
        );
    }
    out
}

pub fn scores_from_csv(text: &str) -> Result<Vec<UnitScore>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::malformed(1, e.to_string()))?
        .clone();
    if header.iter().ne(SCORES_HEADER.split(',')) {
        return Err(Error::malformed(1, format!("expected header {SCORES_HEADER}")));
    }
    let mut scores = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| Error::malformed(line, e.to_string()))?;
        let count = |i: usize| -> Result<usize> {
            record[i]
                .trim()
                .parse()
                .map_err(|_| Error::malformed(line, format!("bad count {:?}", &record[i])))
        };
        let real = |i: usize| -> Result<Option<f64>> {
            let raw = record[i].trim();
            if raw == "NA" {
                return Ok(None);
            }
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some(v)),
                _ => Err(Error::malformed(line, format!("bad score {raw:?}"))),
            }
        };
        let unit_id = record[0].to_string();
        if unit_id.is_empty() {
            return Err(Error::malformed(line, "empty unit_id"));
        }
        scores.push(UnitScore {
            unit_id,
            n_total: count(1)?,
            n_mncs2: count(2)?,
            n_excluded_zero_e: count(3)?,
            cpp_fcsm: real(4)?,
            mncs1: real(5)?,
            mncs2: real(6)?,
        });
    }
    Ok(scores)
}
