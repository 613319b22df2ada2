//! Command-line front end for the staged corpus-mining pipeline. Every verb
//! accepts the same flags; flags override config-file keys, which override
//! built-in defaults. Cache rebuild notices go to stderr so stdout and the
//! written artifacts stay deterministic.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use keybasket::pipeline::{
    self, ConfigOverlay, Pipeline, ReportBundle, SegmentSpec, CACHE_ENV_VAR,
};
use keybasket::{Error, Result};

#[derive(Parser)]
#[command(
    name = "keybasket",
    version,
    about = "Keyword extraction and association-rule mining over lemmatized corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the reference and segment corpora into the cache
    Ingest(StageArgs),
    /// Extract per-document keyword lists for every segment
    Keywords(StageArgs),
    /// Mine association rules and write rules_<segment>.csv/json
    Mine(StageArgs),
    /// Compute distribution statistics and write boxplot/outlier tables
    Stats(StageArgs),
    /// Write all per-segment artifacts plus summary.json
    Report(StageArgs),
    /// Contrast segments pairwise and write comparison.json
    Compare(StageArgs),
    /// Run the whole pipeline end to end
    Run(StageArgs),
}

impl Command {
    fn args(&self) -> &StageArgs {
        match self {
            Command::Ingest(a)
            | Command::Keywords(a)
            | Command::Mine(a)
            | Command::Stats(a)
            | Command::Report(a)
            | Command::Compare(a)
            | Command::Run(a) => a,
        }
    }
}

#[derive(Args)]
struct StageArgs {
    /// Config file (flat key = value lines, dotted section keys)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Corpus file format: vertical or jsonl
    #[arg(long, value_name = "FORMAT")]
    format: Option<String>,

    /// Reference corpus path
    #[arg(long, value_name = "PATH")]
    reference: Option<PathBuf>,

    /// Target segment as NAME=PATH (repeatable)
    #[arg(long = "segment", value_name = "NAME=PATH")]
    segment: Vec<String>,

    /// Minimum in-document frequency for keyword candidates
    #[arg(long, value_name = "N")]
    min_freq: Option<u64>,

    /// Log-likelihood significance threshold (inclusive)
    #[arg(long, value_name = "X")]
    ll_threshold: Option<f64>,

    /// DIN effect-size threshold (exclusive)
    #[arg(long, value_name = "X")]
    din_threshold: Option<f64>,

    /// Minimum keywords per document for it to enter mining
    #[arg(long, value_name = "N")]
    min_keywords: Option<usize>,

    /// Minimum rule support
    #[arg(long, value_name = "X")]
    min_support: Option<f64>,

    /// Minimum rule confidence
    #[arg(long, value_name = "X")]
    min_confidence: Option<f64>,

    /// Maximum rule length (antecedent plus consequent)
    #[arg(long, value_name = "N")]
    max_len: Option<usize>,

    /// Lemma whose rules the report statistics focus on
    #[arg(long, value_name = "LEMMA")]
    seed_keyword: Option<String>,

    /// Function-word stoplist (one lemma per line) for thematic concentration
    #[arg(long, value_name = "FILE")]
    stoplist: Option<PathBuf>,

    /// Comma-separated content-word tag prefixes (default N,A,V,D)
    #[arg(long, value_name = "PREFIXES")]
    tag_prefixes: Option<String>,

    /// Output directory (default keybasket-out)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Cache directory (default $KEYBASKET_CACHE, else <out>/cache)
    #[arg(long, value_name = "DIR")]
    cache: Option<PathBuf>,
}

impl StageArgs {
    fn flag_overlay(&self) -> Result<ConfigOverlay> {
        let mut overlay = ConfigOverlay {
            reference: self.reference.clone(),
            min_freq: self.min_freq,
            ll_threshold: self.ll_threshold,
            din_threshold: self.din_threshold,
            min_keywords: self.min_keywords,
            min_support: self.min_support,
            min_confidence: self.min_confidence,
            max_len: self.max_len,
            seed_keyword: self.seed_keyword.clone(),
            stoplist: self.stoplist.clone(),
            out: self.out.clone(),
            cache: self.cache.clone(),
            ..ConfigOverlay::default()
        };
        if let Some(format) = &self.format {
            overlay.format = Some(format.parse()?);
        }
        for spec in &self.segment {
            let (name, path) = spec.split_once('=').ok_or_else(|| {
                Error::Config(format!("--segment expects NAME=PATH, got {spec:?}"))
            })?;
            overlay.segments.push(SegmentSpec {
                name: name.to_string(),
                path: PathBuf::from(path),
            });
        }
        if let Some(prefixes) = &self.tag_prefixes {
            overlay.tag_prefixes = Some(
                prefixes
                    .split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(str::to_string)
                    .collect(),
            );
        }
        Ok(overlay)
    }
}

fn bundle_lines(bundle: &ReportBundle) -> Vec<String> {
    let mut lines = Vec::new();
    for s in &bundle.segments {
        let mut line = format!(
            "segment {}: {}/{} documents retained, {} rules",
            s.segment, s.docs_retained, s.docs_total, s.rule_count
        );
        if let Some(n) = s.filtered_rule_count {
            line.push_str(&format!(", {n} mentioning the seed"));
        }
        if let Some(b) = &s.boxplot_lift {
            line.push_str(&format!(", median lift {:.3}", b.median));
        }
        if s.degenerate {
            line.push_str(" (degenerate: no document cleared the keyword minimum)");
        }
        lines.push(line);
    }
    for c in &bundle.comparisons {
        let p = match &c.lift_rank_sum {
            Some(r) => format!("{:.6}", r.p),
            None => "n/a".to_string(),
        };
        lines.push(format!(
            "compare {} vs {}: lift rank-sum p = {p}, {} vs {} unique outlier items",
            c.segment_a,
            c.segment_b,
            c.unique_outlier_items_a.len(),
            c.unique_outlier_items_b.len()
        ));
    }
    lines
}

fn execute(command: &Command) -> Result<()> {
    let args = command.args();
    let file = match &args.config {
        Some(path) => Some(pipeline::load_config_file(path)?),
        None => None,
    };
    let env_cache = std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from);
    let cfg = pipeline::resolve(file, args.flag_overlay()?, env_cache)?;
    let out_dir = cfg.out_dir.clone();
    let mut pipeline = Pipeline::new(cfg)?;

    let lines = match command {
        Command::Ingest(_) => pipeline.ingest()?,
        Command::Keywords(_) => pipeline.keywords()?,
        Command::Mine(_) => {
            let mut lines = pipeline.mine()?;
            lines.push(format!("wrote rule files to {}", out_dir.display()));
            lines
        }
        Command::Stats(_) => {
            let bundle = pipeline.stats()?;
            let mut lines = bundle_lines(&bundle);
            lines.push(format!("wrote boxplot.csv and outlier tables to {}", out_dir.display()));
            lines
        }
        Command::Report(_) => {
            let bundle = pipeline.report()?;
            let mut lines = bundle_lines(&bundle);
            lines.push(format!("wrote report to {}", out_dir.display()));
            lines
        }
        Command::Compare(_) => {
            let bundle = pipeline.compare()?;
            let mut lines = bundle_lines(&bundle);
            lines.push(format!("wrote comparison.json to {}", out_dir.display()));
            lines
        }
        Command::Run(_) => {
            let bundle = pipeline.run()?;
            let mut lines = bundle_lines(&bundle);
            lines.push(format!("wrote all artifacts to {}", out_dir.display()));
            lines
        }
    };

    for event in pipeline.cache_events() {
        eprintln!("{event}");
    }
    for line in lines {
        println!("{line}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
