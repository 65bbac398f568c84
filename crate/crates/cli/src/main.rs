use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use citenorm::baseline::{compute_baselines, BaselineTable};
use citenorm::corpus::{infer_year_span, parse_corpus_str, Corpus};
use citenorm::indicators::{score_all_units, score_unit, Indicator};
use citenorm::report::{render_ranking, render_scatter, scores_from_csv, scores_to_csv, ScatterSpec};
use citenorm::simulate::{generate_corpus, SimulationConfig};
use citenorm::stats::{age_correlation_matrix, correlate_indicators, trajectory};
use citenorm::{Error, Result};

/// Field- and year-normalized citation indicators.
#[derive(Parser)]
#[command(name = "citenorm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected-citation table per (field, publication year).
    Baselines {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        census: i32,
        /// Earliest admitted publication year (default: earliest in the file).
        #[arg(long)]
        first: Option<i32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// CPP/FCSm, MNCS1 and MNCS2 per unit.
    Score {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        census: i32,
        #[arg(long)]
        first: Option<i32>,
        /// `all` or a comma-separated list of unit ids.
        #[arg(long, default_value = "all")]
        units: String,
        /// Precomputed baseline table; defaults to baselines of the corpus itself.
        #[arg(long)]
        baselines: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pearson and Spearman correlations between the three indicators.
    Correlate {
        #[arg(long)]
        scores: PathBuf,
        /// Only units with at least this many publications.
        #[arg(long, default_value_t = 0)]
        min_pubs: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mean cumulative citations per year for one field and publication year.
    Trajectory {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        field: String,
        #[arg(long)]
        pub_year: i32,
        /// Defaults to the latest year in the file.
        #[arg(long)]
        census: Option<i32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Correlations between cumulative counts at every pair of years.
    AgeCorr {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        field: String,
        #[arg(long)]
        pub_year: i32,
        #[arg(long)]
        census: Option<i32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic corpus from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Scatter plot of two indicators as SVG.
    Plot {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 50)]
        threshold: usize,
        #[arg(long)]
        axis_max: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Top units by one indicator, CSV on standard output.
    Rank {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        by: String,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    Ok(fs::write(path, contents)?)
}

fn load_corpus(path: &Path, census: Option<i32>, first: Option<i32>) -> Result<Corpus> {
    let text = read(path)?;
    let span = infer_year_span(&text);
    let census = census
        .or(span.map(|s| s.1))
        .ok_or_else(|| Error::InvalidArgument("cannot infer census year from an empty corpus".into()))?;
    let first = first.or(span.map(|s| s.0)).unwrap_or(census).min(census);
    parse_corpus_str(&text, census, first)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Baselines {
            corpus,
            census,
            first,
            out,
        } => {
            let corpus = load_corpus(&corpus, Some(census), first)?;
            write(&out, &compute_baselines(&corpus)?.to_csv())
        }
        Command::Score {
            corpus,
            census,
            first,
            units,
            baselines,
            out,
        } => {
            let corpus = load_corpus(&corpus, Some(census), first)?;
            let table = match baselines {
                Some(path) => BaselineTable::from_csv(&read(&path)?, census)?,
                None => compute_baselines(&corpus)?,
            };
            let scores = if units.trim() == "all" {
                score_all_units(&corpus, &table)?
            } else {
                units
                    .split(',')
                    .map(str::trim)
                    .filter(|u| !u.is_empty())
                    .map(|u| score_unit(&corpus, &table, u))
                    .collect::<Result<Vec<_>>>()?
            };
            write(&out, &scores_to_csv(&scores))
        }
        Command::Correlate { scores, min_pubs, out } => {
            let scores: Vec<_> = scores_from_csv(&read(&scores)?)?
                .into_iter()
                .filter(|s| s.n_total >= min_pubs)
                .collect();
            write(&out, &correlate_indicators(&scores)?.to_csv())
        }
        Command::Trajectory {
            corpus,
            field,
            pub_year,
            census,
            out,
        } => {
            let corpus = load_corpus(&corpus, census, None)?;
            write(&out, &trajectory(corpus.publications(), &field, pub_year)?.to_csv())
        }
        Command::AgeCorr {
            corpus,
            field,
            pub_year,
            census,
            out,
        } => {
            let corpus = load_corpus(&corpus, census, None)?;
            let cohort: Vec<_> = corpus
                .publications()
                .iter()
                .filter(|p| p.pub_year == pub_year && p.has_field(&field))
                .collect();
            write(&out, &age_correlation_matrix(&cohort)?.to_csv())
        }
        Command::Simulate { config, out } => {
            let config = SimulationConfig::from_json(&read(&config)?)?;
            write(&out, &generate_corpus(&config)?.to_jsonl())
        }
        Command::Plot {
            scores,
            x,
            y,
            threshold,
            axis_max,
            out,
        } => {
            let scores = scores_from_csv(&read(&scores)?)?;
            let spec = ScatterSpec {
                x: x.parse()?,
                y: y.parse()?,
                threshold,
                axis_max,
            };
            write(&out, &render_scatter(&scores, &spec)?.svg)
        }
        Command::Rank { scores, by, top } => {
            let by: Indicator = by.parse()?;
            let scores = scores_from_csv(&read(&scores)?)?;
            io::stdout().write_all(render_ranking(&scores, by, top).as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return if usage_error { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
