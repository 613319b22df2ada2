//! End-to-end orchestration: parse corpora, extract keywords, mine rules,
//! compute statistics, and write report artifacts. Every stage result is
//! cached under a content fingerprint, so reruns and stage-wise invocation
//! reuse intermediates; all emitted files are deterministic byte for byte.

pub mod cache;
pub mod config;

pub use cache::Cache;
pub use config::{
    default_tag_prefixes, load_config_file, parse_config_text, resolve, ConfigOverlay,
    InputFormat, PipelineConfig, SegmentSpec, CACHE_ENV_VAR,
};

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::corpus::{self, Corpus, FrequencyProfile};
use crate::error::{Error, Result};
use crate::keyness::{self, KeynessConfig, KeywordList};
use crate::miner::{self, AssociationRule, MiningConfig, RuleFilter, TransactionSet};
use crate::stats::{self, BoxplotSummary, RankSumResult, ThematicConcentration};

fn open_reader(path: &Path) -> Result<BufReader<fs::File>> {
    Ok(BufReader::new(
        fs::File::open(path).map_err(|e| Error::file(path, e))?,
    ))
}

fn create_writer(path: &Path) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(
        fs::File::create(path).map_err(|e| Error::file(path, e))?,
    ))
}

fn parse_corpus(path: &Path, format: InputFormat) -> Result<Corpus> {
    let reader = open_reader(path)?;
    match format {
        InputFormat::Vertical => corpus::parse_vertical(reader),
        InputFormat::Jsonl => corpus::parse_jsonl(reader),
    }
}

/// One lemma per line, `#` comments; lemmas listed here are treated as
/// function words by the thematic-concentration classifier.
fn load_stoplist(path: &Path) -> Result<BTreeSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}

/// How content words are recognized for thematic concentration: by
/// part-of-speech tag prefix when the corpus carries tags, else by absence
/// from a function-word stoplist.
enum ContentWordRule {
    TagPrefixes(Vec<String>),
    Stoplist(BTreeSet<String>),
}

impl ContentWordRule {
    fn is_content(&self, profile: &FrequencyProfile, lemma: &str) -> bool {
        match self {
            ContentWordRule::TagPrefixes(prefixes) => profile
                .tag(lemma)
                .is_some_and(|tag| prefixes.iter().any(|p| tag.starts_with(p.as_str()))),
            ContentWordRule::Stoplist(stop) => !stop.contains(lemma),
        }
    }
}

/// Per-segment computed state carried between stages.
struct SegmentData {
    name: String,
    docs_total: usize,
    profile: FrequencyProfile,
    lists: Vec<KeywordList>,
    rules: Vec<AssociationRule>,
}

/// Everything the report states about one segment. Rule vectors and the
/// configs they were produced under ride along unserialized; the JSON
/// summary carries only the aggregate numbers.
#[derive(Debug, Clone, Serialize)]
pub struct SegmentReport {
    pub segment: String,
    pub docs_total: usize,
    pub docs_retained: usize,
    pub docs_dropped: usize,
    pub retention_ratio: f64,
    /// True when no document cleared the keyword minimum; rule and
    /// distribution statistics are omitted rather than computed on nothing.
    pub degenerate: bool,
    pub rule_count: usize,
    pub seed_doc_count: Option<usize>,
    pub seed_doc_pct_of_all: Option<f64>,
    pub seed_doc_pct_of_retained: Option<f64>,
    pub filtered_rule_count: Option<usize>,
    pub outlier_rule_count: usize,
    pub boxplot_lift: Option<BoxplotSummary>,
    pub boxplot_support: Option<BoxplotSummary>,
    pub h_point: Option<f64>,
    pub thematic_concentration: Option<ThematicConcentration>,
    #[serde(skip)]
    pub rules: Vec<AssociationRule>,
    #[serde(skip)]
    pub filtered_rules: Vec<AssociationRule>,
    #[serde(skip)]
    pub outlier_rules: Vec<AssociationRule>,
    #[serde(skip)]
    pub keyness: KeynessConfig,
    #[serde(skip)]
    pub mining: MiningConfig,
}

/// Side-by-side counts and medians for one half of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentSide {
    pub segment: String,
    pub docs_total: usize,
    pub docs_retained: usize,
    pub seed_doc_count: Option<usize>,
    pub rule_count: usize,
    pub filtered_rule_count: Option<usize>,
    pub outlier_rule_count: usize,
    pub median_lift: Option<f64>,
    pub median_support: Option<f64>,
}

impl SegmentSide {
    fn of(report: &SegmentReport) -> Self {
        SegmentSide {
            segment: report.segment.clone(),
            docs_total: report.docs_total,
            docs_retained: report.docs_retained,
            seed_doc_count: report.seed_doc_count,
            rule_count: report.rule_count,
            filtered_rule_count: report.filtered_rule_count,
            outlier_rule_count: report.outlier_rule_count,
            median_lift: report.boxplot_lift.as_ref().map(|b| b.median),
            median_support: report.boxplot_support.as_ref().map(|b| b.median),
        }
    }
}

/// One row of a ranked rule table (1-based ranking, antecedent items joined
/// with ", ").
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedRule {
    pub ranking: usize,
    pub lhs: String,
    pub rhs: String,
    pub count: u64,
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
}

/// Number rules 1.. in their given (already sorted) order.
pub fn ranked_rows(rules: &[AssociationRule]) -> Vec<RankedRule> {
    rules
        .iter()
        .enumerate()
        .map(|(i, r)| RankedRule {
            ranking: i + 1,
            lhs: r.lhs.join(", "),
            rhs: r.rhs.clone(),
            count: r.count,
            support: r.support,
            confidence: r.confidence,
            lift: r.lift,
        })
        .collect()
}

/// Rule-table file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Write a ranked rule table. Expects rules already in [`miner::sort_rules`]
/// order; an empty list yields a header-only CSV or an empty JSON array.
pub fn emit_rule_table(rules: &[AssociationRule], format: TableFormat, path: &Path) -> Result<()> {
    let rows = ranked_rows(rules);
    let mut writer = create_writer(path)?;
    match format {
        TableFormat::Csv => {
            let mut csv = csv::Writer::from_writer(writer);
            csv.write_record([
                "ranking",
                "lhs",
                "rhs",
                "count",
                "support",
                "confidence",
                "lift",
            ])?;
            for row in &rows {
                csv.write_record([
                    row.ranking.to_string(),
                    row.lhs.clone(),
                    row.rhs.clone(),
                    row.count.to_string(),
                    miner::format_real(row.support),
                    miner::format_real(row.confidence),
                    miner::format_real(row.lift),
                ])?;
            }
            csv.flush()?;
        }
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut writer, &rows)?;
            writer.write_all(b"\n")?;
            writer.flush()?;
        }
    }
    Ok(())
}

/// Cross-segment contrast: rank-sum tests over the filtered rules' lift and
/// support distributions, items unique to either side's outlier table, and
/// both outlier tables themselves.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub segment_a: String,
    pub segment_b: String,
    pub side_a: SegmentSide,
    pub side_b: SegmentSide,
    pub lift_rank_sum: Option<RankSumResult>,
    pub support_rank_sum: Option<RankSumResult>,
    pub unique_outlier_items_a: Vec<String>,
    pub unique_outlier_items_b: Vec<String>,
    pub outlier_table_a: Vec<RankedRule>,
    pub outlier_table_b: Vec<RankedRule>,
}

/// Contrast two segment reports. Fails when the reports were produced under
/// different extraction or mining settings, since the comparison would be
/// meaningless.
pub fn compare_segments(a: &SegmentReport, b: &SegmentReport) -> Result<Comparison> {
    if a.keyness != b.keyness || a.mining != b.mining {
        return Err(Error::ConfigMismatch(format!(
            "segments {:?} and {:?} were built under different settings",
            a.segment, b.segment
        )));
    }
    let rank_sum = |pick: fn(&AssociationRule) -> f64| -> Result<Option<RankSumResult>> {
        let xs: Vec<f64> = a.filtered_rules.iter().map(pick).collect();
        let ys: Vec<f64> = b.filtered_rules.iter().map(pick).collect();
        if xs.is_empty() || ys.is_empty() {
            Ok(None)
        } else {
            stats::wilcoxon_rank_sum(&xs, &ys).map(Some)
        }
    };
    let (unique_a, unique_b) = miner::unique_items(&a.outlier_rules, &b.outlier_rules);
    Ok(Comparison {
        segment_a: a.segment.clone(),
        segment_b: b.segment.clone(),
        side_a: SegmentSide::of(a),
        side_b: SegmentSide::of(b),
        lift_rank_sum: rank_sum(|r| r.lift)?,
        support_rank_sum: rank_sum(|r| r.support)?,
        unique_outlier_items_a: unique_a.into_iter().collect(),
        unique_outlier_items_b: unique_b.into_iter().collect(),
        outlier_table_a: ranked_rows(&a.outlier_rules),
        outlier_table_b: ranked_rows(&b.outlier_rules),
    })
}

/// The full report: configuration echo, one report per segment, and all
/// pairwise comparisons. Serializing the bundle yields the summary document;
/// comparisons are written separately.
#[derive(Debug, Serialize)]
pub struct ReportBundle {
    pub config: PipelineConfig,
    pub segments: Vec<SegmentReport>,
    #[serde(skip)]
    pub comparisons: Vec<Comparison>,
    /// Cache rebuild notices accumulated while building this bundle. Kept
    /// out of serialized artifacts so reruns stay byte-identical.
    #[serde(skip)]
    pub cache_events: Vec<String>,
}

impl ReportBundle {
    pub fn segment(&self, name: &str) -> Option<&SegmentReport> {
        self.segments.iter().find(|s| s.segment == name)
    }
}

#[derive(Serialize)]
struct ComparisonDoc<'a> {
    comparisons: &'a [Comparison],
}

/// The staged pipeline over one configuration. Verbs run their prerequisite
/// chain through the cache, so each is independently invocable and cheap
/// when intermediates are fresh.
pub struct Pipeline {
    cfg: PipelineConfig,
    cache: Cache,
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        let cache = Cache::open(&cfg.cache_dir)?;
        Ok(Pipeline { cfg, cache })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    /// Cache rebuild notices so far (reuse is silent).
    pub fn cache_events(&self) -> &[String] {
        self.cache.events()
    }

    // ----- stage: reference profile -----

    fn reference_profile(&mut self) -> Result<(FrequencyProfile, String)> {
        let fp = cache::combine_fingerprints(&[
            ("kind", "reference-profile"),
            ("format", &self.cfg.format.to_string()),
            ("input", &cache::file_fingerprint(&self.cfg.reference)?),
        ]);
        let path = self.cfg.reference.clone();
        let format = self.cfg.format;
        let profile = self.cache.load_or_build(
            "reference_profile.json",
            &fp,
            |p| {
                let reader = open_reader(p)?;
                Ok(serde_json::from_reader(reader)?)
            },
            || {
                let corpus = parse_corpus(&path, format)?;
                let profile = corpus.frequency_profile();
                if profile.total_tokens() == 0 {
                    return Err(Error::domain(format!(
                        "reference corpus {} has no tokens",
                        path.display()
                    )));
                }
                Ok(profile)
            },
            |profile, p| {
                let mut writer = create_writer(p)?;
                serde_json::to_writer(&mut writer, profile)?;
                writer.write_all(b"\n")?;
                writer.flush()?;
                Ok(())
            },
        )?;
        Ok((profile, fp))
    }

    // ----- stage: per-segment corpus (normalized to JSONL) -----

    fn segment_corpus(&mut self, spec: &SegmentSpec) -> Result<(Corpus, String)> {
        let fp = cache::combine_fingerprints(&[
            ("kind", "corpus"),
            ("format", &self.cfg.format.to_string()),
            ("input", &cache::file_fingerprint(&spec.path)?),
        ]);
        let path = spec.path.clone();
        let format = self.cfg.format;
        let corpus = self.cache.load_or_build(
            &format!("corpus_{}.jsonl", spec.name),
            &fp,
            |p| corpus::parse_jsonl(open_reader(p)?),
            || parse_corpus(&path, format),
            |c, p| {
                let mut writer = create_writer(p)?;
                corpus::write_jsonl(c, &mut writer)?;
                writer.flush()?;
                Ok(())
            },
        )?;
        Ok((corpus, fp))
    }

    // ----- stage: per-segment keyword lists -----

    fn segment_keywords(
        &mut self,
        spec: &SegmentSpec,
        corpus: &Corpus,
        corpus_fp: &str,
        reference: &FrequencyProfile,
        reference_fp: &str,
    ) -> Result<(Vec<KeywordList>, String)> {
        let fp = cache::combine_fingerprints(&[
            ("kind", "keywords"),
            ("corpus", corpus_fp),
            ("reference", reference_fp),
            ("config", &cache::config_fingerprint(&self.cfg.keyness)?),
        ]);
        let keyness_cfg = self.cfg.keyness.clone();
        let lists = self.cache.load_or_build(
            &format!("keywords_{}.jsonl", spec.name),
            &fp,
            |p| keyness::read_keyword_lists(open_reader(p)?),
            || Ok(keyness::build_transactions(corpus, reference, &keyness_cfg)?.lists),
            |lists, p| {
                let mut writer = create_writer(p)?;
                keyness::write_keyword_lists(lists, &mut writer)?;
                writer.flush()?;
                Ok(())
            },
        )?;
        Ok((lists, fp))
    }

    // ----- stage: per-segment rules -----

    fn segment_rules(
        &mut self,
        spec: &SegmentSpec,
        lists: &[KeywordList],
        keywords_fp: &str,
    ) -> Result<Vec<AssociationRule>> {
        let fp = cache::combine_fingerprints(&[
            ("kind", "rules"),
            ("keywords", keywords_fp),
            ("config", &cache::config_fingerprint(&self.cfg.mining)?),
        ]);
        let mining_cfg = self.cfg.mining.clone();
        self.cache.load_or_build(
            &format!("rules_{}.json", spec.name),
            &fp,
            |p| miner::read_rules_json(open_reader(p)?),
            || {
                if lists.is_empty() {
                    // degenerate segment: nothing survived the keyword
                    // minimum, which the report states rather than fails on
                    return Ok(Vec::new());
                }
                let ts = TransactionSet::from_keyword_lists(lists);
                miner::mine(&ts, &mining_cfg)
            },
            |rules, p| {
                let mut writer = create_writer(p)?;
                miner::write_rules_json(rules, &mut writer)?;
                writer.flush()?;
                Ok(())
            },
        )
    }

    fn ensure_segment(
        &mut self,
        spec: &SegmentSpec,
        reference: &FrequencyProfile,
        reference_fp: &str,
    ) -> Result<SegmentData> {
        let (corpus, corpus_fp) = self.segment_corpus(spec)?;
        let (lists, keywords_fp) =
            self.segment_keywords(spec, &corpus, &corpus_fp, reference, reference_fp)?;
        let rules = self.segment_rules(spec, &lists, &keywords_fp)?;
        Ok(SegmentData {
            name: spec.name.clone(),
            docs_total: corpus.len(),
            profile: corpus.frequency_profile(),
            lists,
            rules,
        })
    }

    fn ensure_segments(&mut self) -> Result<Vec<SegmentData>> {
        let (reference, reference_fp) = self.reference_profile()?;
        let specs = self.cfg.segments.clone();
        specs
            .iter()
            .map(|spec| self.ensure_segment(spec, &reference, &reference_fp))
            .collect()
    }

    // ----- reporting -----

    fn content_word_rule(&self, profile: &FrequencyProfile) -> Result<Option<ContentWordRule>> {
        if profile.has_tags() && !self.cfg.tag_prefixes.is_empty() {
            return Ok(Some(ContentWordRule::TagPrefixes(self.cfg.tag_prefixes.clone())));
        }
        if let Some(path) = &self.cfg.stoplist {
            return Ok(Some(ContentWordRule::Stoplist(load_stoplist(path)?)));
        }
        Ok(None)
    }

    fn segment_report(&self, data: SegmentData) -> Result<SegmentReport> {
        let SegmentData { name, docs_total, profile, lists, rules } = data;
        let docs_retained = lists.len();
        let docs_dropped = docs_total - docs_retained;
        let degenerate = docs_retained == 0;
        let seed = self.cfg.seed_keyword.as_deref();

        let (seed_doc_count, seed_doc_pct_of_all, seed_doc_pct_of_retained) = match seed {
            Some(s) => {
                let count = lists.iter().filter(|l| l.contains(s)).count();
                (
                    Some(count),
                    (docs_total > 0).then(|| 100.0 * count as f64 / docs_total as f64),
                    (docs_retained > 0).then(|| 100.0 * count as f64 / docs_retained as f64),
                )
            }
            None => (None, None, None),
        };

        let filtered_rules = match seed {
            Some(s) => miner::filter_rules(&rules, &RuleFilter::ContainsItem(s.to_string())),
            None => rules.clone(),
        };

        let (boxplot_lift, boxplot_support, outlier_rules) = if filtered_rules.is_empty() {
            (None, None, Vec::new())
        } else {
            let lifts: Vec<f64> = filtered_rules.iter().map(|r| r.lift).collect();
            let supports: Vec<f64> = filtered_rules.iter().map(|r| r.support).collect();
            let lift_box = stats::boxplot_summary(&lifts)?;
            let support_box = stats::boxplot_summary(&supports)?;
            let outliers: Vec<AssociationRule> = filtered_rules
                .iter()
                .filter(|r| r.lift > lift_box.upper_fence)
                .cloned()
                .collect();
            (Some(lift_box), Some(support_box), outliers)
        };

        let (h_point, thematic_concentration) = if profile.is_empty() {
            (None, None)
        } else {
            let freqs: Vec<u64> = profile.ranked().iter().map(|&(_, f)| f).collect();
            let h = stats::h_point(&freqs)?;
            let tc = match self.content_word_rule(&profile)? {
                Some(rule) => Some(stats::thematic_concentration(&profile, |lemma| {
                    rule.is_content(&profile, lemma)
                })?),
                None => None,
            };
            (Some(h), tc)
        };

        Ok(SegmentReport {
            segment: name,
            docs_total,
            docs_retained,
            docs_dropped,
            retention_ratio: if docs_total == 0 {
                0.0
            } else {
                docs_retained as f64 / docs_total as f64
            },
            degenerate,
            rule_count: rules.len(),
            seed_doc_count,
            seed_doc_pct_of_all,
            seed_doc_pct_of_retained,
            filtered_rule_count: seed.map(|_| filtered_rules.len()),
            outlier_rule_count: outlier_rules.len(),
            boxplot_lift,
            boxplot_support,
            h_point,
            thematic_concentration,
            rules,
            filtered_rules,
            outlier_rules,
            keyness: self.cfg.keyness.clone(),
            mining: self.cfg.mining.clone(),
        })
    }

    /// Build the full in-memory report (all stages, all pairwise
    /// comparisons) without writing artifacts.
    pub fn build_report(&mut self) -> Result<ReportBundle> {
        let data = self.ensure_segments()?;
        let mut segments = Vec::with_capacity(data.len());
        for d in data {
            segments.push(self.segment_report(d)?);
        }
        let mut comparisons = Vec::new();
        for i in 0..segments.len() {
            for j in i + 1..segments.len() {
                comparisons.push(compare_segments(&segments[i], &segments[j])?);
            }
        }
        Ok(ReportBundle {
            config: self.cfg.clone(),
            segments,
            comparisons,
            cache_events: self.cache.events().to_vec(),
        })
    }

    // ----- artifact writing -----

    fn ensure_out_dir(&self) -> Result<&Path> {
        fs::create_dir_all(&self.cfg.out_dir).map_err(|e| Error::file(&self.cfg.out_dir, e))?;
        Ok(&self.cfg.out_dir)
    }

    fn write_rule_outputs<'a>(
        &self,
        segments: impl IntoIterator<Item = (&'a str, &'a [AssociationRule])>,
    ) -> Result<Vec<PathBuf>> {
        let out = self.ensure_out_dir()?;
        let mut written = Vec::new();
        for (name, rules) in segments {
            let csv_path = out.join(format!("rules_{name}.csv"));
            miner::write_rules_csv(rules, create_writer(&csv_path)?)?;
            let json_path = out.join(format!("rules_{name}.json"));
            let mut writer = create_writer(&json_path)?;
            miner::write_rules_json(rules, &mut writer)?;
            writer.flush()?;
            written.push(csv_path);
            written.push(json_path);
        }
        Ok(written)
    }

    fn bundle_rule_outputs(&self, bundle: &ReportBundle) -> Result<Vec<PathBuf>> {
        self.write_rule_outputs(
            bundle
                .segments
                .iter()
                .map(|s| (s.segment.as_str(), s.rules.as_slice())),
        )
    }

    fn write_stats_outputs(&self, bundle: &ReportBundle) -> Result<Vec<PathBuf>> {
        let out = self.ensure_out_dir()?;
        let mut written = Vec::new();

        let boxplot_path = out.join("boxplot.csv");
        let mut csv = csv::Writer::from_writer(create_writer(&boxplot_path)?);
        csv.write_record([
            "segment",
            "metric",
            "min",
            "q1",
            "median",
            "q3",
            "max",
            "upper_fence",
            "n_outliers",
        ])?;
        for report in &bundle.segments {
            let metrics = [
                ("lift", &report.boxplot_lift),
                ("support", &report.boxplot_support),
            ];
            for (metric, summary) in metrics {
                if let Some(s) = summary {
                    csv.write_record([
                        report.segment.clone(),
                        metric.to_string(),
                        miner::format_real(s.min),
                        miner::format_real(s.q1),
                        miner::format_real(s.median),
                        miner::format_real(s.q3),
                        miner::format_real(s.max),
                        miner::format_real(s.upper_fence),
                        s.n_outliers_high.to_string(),
                    ])?;
                }
            }
        }
        csv.flush()?;
        written.push(boxplot_path);

        for report in &bundle.segments {
            let path = out.join(format!("outliers_{}.csv", report.segment));
            emit_rule_table(&report.outlier_rules, TableFormat::Csv, &path)?;
            written.push(path);
        }
        Ok(written)
    }

    fn write_summary(&self, bundle: &ReportBundle) -> Result<PathBuf> {
        let path = self.ensure_out_dir()?.join("summary.json");
        let mut writer = create_writer(&path)?;
        serde_json::to_writer_pretty(&mut writer, bundle)?;
        writer.write_all(b"\n")?;
        writer.flush()?;
        Ok(path)
    }

    fn write_comparison(&self, bundle: &ReportBundle) -> Result<PathBuf> {
        let path = self.ensure_out_dir()?.join("comparison.json");
        let mut writer = create_writer(&path)?;
        serde_json::to_writer_pretty(
            &mut writer,
            &ComparisonDoc { comparisons: &bundle.comparisons },
        )?;
        writer.write_all(b"\n")?;
        writer.flush()?;
        Ok(path)
    }

    // ----- verbs -----

    /// Parse the reference and every segment into the cache. Returns one
    /// status line per input.
    pub fn ingest(&mut self) -> Result<Vec<String>> {
        let (reference, _) = self.reference_profile()?;
        let mut lines = vec![format!(
            "reference: {} tokens, {} distinct lemmas",
            reference.total_tokens(),
            reference.distinct_lemmas()
        )];
        for spec in self.cfg.segments.clone() {
            let (corpus, _) = self.segment_corpus(&spec)?;
            lines.push(format!("segment {}: {} documents", spec.name, corpus.len()));
        }
        Ok(lines)
    }

    /// Extract (and cache) keyword lists for every segment.
    pub fn keywords(&mut self) -> Result<Vec<String>> {
        let (reference, reference_fp) = self.reference_profile()?;
        let min = self.cfg.keyness.min_keywords_per_text;
        let mut lines = Vec::new();
        for spec in self.cfg.segments.clone() {
            let (corpus, corpus_fp) = self.segment_corpus(&spec)?;
            let (lists, _) =
                self.segment_keywords(&spec, &corpus, &corpus_fp, &reference, &reference_fp)?;
            lines.push(format!(
                "segment {}: {} of {} documents kept >= {} keywords",
                spec.name,
                lists.len(),
                corpus.len(),
                min
            ));
        }
        Ok(lines)
    }

    /// Mine (and cache) rules for every segment and write `rules_<segment>`
    /// outputs.
    pub fn mine(&mut self) -> Result<Vec<String>> {
        let data = self.ensure_segments()?;
        self.write_rule_outputs(data.iter().map(|d| (d.name.as_str(), d.rules.as_slice())))?;
        Ok(data
            .iter()
            .map(|d| format!("segment {}: {} rules", d.name, d.rules.len()))
            .collect())
    }

    /// Compute per-segment statistics and write `boxplot.csv` and the
    /// outlier tables.
    pub fn stats(&mut self) -> Result<ReportBundle> {
        let bundle = self.build_report()?;
        self.write_stats_outputs(&bundle)?;
        Ok(bundle)
    }

    /// Write the per-segment report artifacts: rules, statistics, and
    /// `summary.json`.
    pub fn report(&mut self) -> Result<ReportBundle> {
        let bundle = self.build_report()?;
        self.bundle_rule_outputs(&bundle)?;
        self.write_stats_outputs(&bundle)?;
        self.write_summary(&bundle)?;
        Ok(bundle)
    }

    /// Write `comparison.json` contrasting every segment pair. Requires at
    /// least two segments.
    pub fn compare(&mut self) -> Result<ReportBundle> {
        if self.cfg.segments.len() < 2 {
            return Err(Error::Config(
                "compare needs at least two segments".into(),
            ));
        }
        let bundle = self.build_report()?;
        self.write_comparison(&bundle)?;
        Ok(bundle)
    }

    /// The whole pipeline: every per-segment artifact plus the comparison
    /// document (empty comparison list for a single segment).
    pub fn run(&mut self) -> Result<ReportBundle> {
        let bundle = self.build_report()?;
        self.bundle_rule_outputs(&bundle)?;
        self.write_stats_outputs(&bundle)?;
        self.write_summary(&bundle)?;
        self.write_comparison(&bundle)?;
        Ok(bundle)
    }
}
