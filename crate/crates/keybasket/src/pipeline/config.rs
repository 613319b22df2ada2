//! Pipeline configuration: built-in defaults, a flat key=value config file,
//! and command-line overrides, resolved with flags winning over file keys
//! and the cache environment variable filling in last.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::keyness::KeynessConfig;
use crate::miner::MiningConfig;

/// Consulted for the cache directory when neither a flag nor a config key
/// names one.
pub const CACHE_ENV_VAR: &str = "KEYBASKET_CACHE";

/// Corpus file format, shared by the reference and every segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Vertical,
    Jsonl,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertical" => Ok(InputFormat::Vertical),
            "jsonl" => Ok(InputFormat::Jsonl),
            other => Err(Error::Config(format!(
                "unknown format {other:?}; expected \"vertical\" or \"jsonl\""
            ))),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Vertical => "vertical",
            InputFormat::Jsonl => "jsonl",
        })
    }
}

/// One named target subcorpus. The name ends up in artifact file names
/// (`rules_<name>.csv`), hence the restricted character set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentSpec {
    pub name: String,
    pub path: PathBuf,
}

fn valid_segment_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

/// Fully resolved pipeline settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub format: InputFormat,
    pub reference: PathBuf,
    pub segments: Vec<SegmentSpec>,
    pub keyness: KeynessConfig,
    pub mining: MiningConfig,
    pub seed_keyword: Option<String>,
    pub stoplist: Option<PathBuf>,
    pub tag_prefixes: Vec<String>,
    pub out_dir: PathBuf,
    pub cache_dir: PathBuf,
}

/// Content-word tag prefixes for tagsets whose first letter encodes the
/// part of speech: nouns, adjectives, verbs, adverbs.
pub fn default_tag_prefixes() -> Vec<String> {
    ["N", "A", "V", "D"].map(String::from).to_vec()
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.keyness.validate()?;
        self.mining.validate()?;
        if self.segments.is_empty() {
            return Err(Error::Config(
                "at least one segment is required (use --segment NAME=PATH)".into(),
            ));
        }
        for (i, spec) in self.segments.iter().enumerate() {
            if !valid_segment_name(&spec.name) {
                return Err(Error::Config(format!(
                    "invalid segment name {:?}: use letters, digits, '-' or '_'",
                    spec.name
                )));
            }
            if self.segments[..i].iter().any(|s| s.name == spec.name) {
                return Err(Error::Config(format!(
                    "segment {:?} is declared twice",
                    spec.name
                )));
            }
        }
        if self.reference.as_os_str().is_empty() {
            return Err(Error::Config("reference corpus path is empty".into()));
        }
        Ok(())
    }
}

/// A partial configuration: one layer of the file/flag stack. Unset fields
/// fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverlay {
    pub format: Option<InputFormat>,
    pub reference: Option<PathBuf>,
    pub segments: Vec<SegmentSpec>,
    pub min_freq: Option<u64>,
    pub ll_threshold: Option<f64>,
    pub din_threshold: Option<f64>,
    pub min_keywords: Option<usize>,
    pub alphabetic_only: Option<bool>,
    pub min_support: Option<f64>,
    pub min_confidence: Option<f64>,
    pub max_len: Option<usize>,
    pub seed_keyword: Option<String>,
    pub stoplist: Option<PathBuf>,
    pub tag_prefixes: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

impl ConfigOverlay {
    /// Field-wise combination where `self` wins. A non-empty segment list
    /// replaces the base list outright rather than appending to it.
    pub fn merged_over(self, base: ConfigOverlay) -> ConfigOverlay {
        ConfigOverlay {
            format: self.format.or(base.format),
            reference: self.reference.or(base.reference),
            segments: if self.segments.is_empty() { base.segments } else { self.segments },
            min_freq: self.min_freq.or(base.min_freq),
            ll_threshold: self.ll_threshold.or(base.ll_threshold),
            din_threshold: self.din_threshold.or(base.din_threshold),
            min_keywords: self.min_keywords.or(base.min_keywords),
            alphabetic_only: self.alphabetic_only.or(base.alphabetic_only),
            min_support: self.min_support.or(base.min_support),
            min_confidence: self.min_confidence.or(base.min_confidence),
            max_len: self.max_len.or(base.max_len),
            seed_keyword: self.seed_keyword.or(base.seed_keyword),
            stoplist: self.stoplist.or(base.stoplist),
            tag_prefixes: self.tag_prefixes.or(base.tag_prefixes),
            out: self.out.or(base.out),
            cache: self.cache.or(base.cache),
        }
    }
}

fn config_err(line: usize, message: impl fmt::Display) -> Error {
    Error::Config(format!("line {line}: {message}"))
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| config_err(line, format!("invalid value for {key}: {e}")))
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(config_err(
            line,
            format!("invalid value for {key}: expected true or false, got {other:?}"),
        )),
    }
}

fn parse_prefix_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::to_string)
        .collect()
}

/// Parse the flat config-file format: one `key = value` per line, `#`
/// comments, dotted section keys (`keyness.min-freq`), and repeatable
/// `segment.NAME = PATH` entries. Unknown keys are errors so typos cannot
/// silently fall back to defaults.
pub fn parse_config_text(text: &str) -> Result<ConfigOverlay> {
    let mut overlay = ConfigOverlay::default();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(lineno, "expected key = value"))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "format" => overlay.format = Some(value.parse().map_err(|e| config_err(lineno, e))?),
            "reference" => overlay.reference = Some(PathBuf::from(value)),
            "keyness.min-freq" => overlay.min_freq = Some(parse_value(lineno, key, value)?),
            "keyness.ll-threshold" => {
                overlay.ll_threshold = Some(parse_value(lineno, key, value)?)
            }
            "keyness.din-threshold" => {
                overlay.din_threshold = Some(parse_value(lineno, key, value)?)
            }
            "keyness.min-keywords" => overlay.min_keywords = Some(parse_value(lineno, key, value)?),
            "keyness.alphabetic-only" => {
                overlay.alphabetic_only = Some(parse_bool(lineno, key, value)?)
            }
            "mining.min-support" => overlay.min_support = Some(parse_value(lineno, key, value)?),
            "mining.min-confidence" => {
                overlay.min_confidence = Some(parse_value(lineno, key, value)?)
            }
            "mining.max-len" => overlay.max_len = Some(parse_value(lineno, key, value)?),
            "report.seed-keyword" => overlay.seed_keyword = Some(value.to_string()),
            "report.stoplist" => overlay.stoplist = Some(PathBuf::from(value)),
            "report.tag-prefixes" => overlay.tag_prefixes = Some(parse_prefix_list(value)),
            "report.out" => overlay.out = Some(PathBuf::from(value)),
            "report.cache" => overlay.cache = Some(PathBuf::from(value)),
            _ => {
                if let Some(name) = key.strip_prefix("segment.") {
                    if !valid_segment_name(name) {
                        return Err(config_err(
                            lineno,
                            format!("invalid segment name {name:?}"),
                        ));
                    }
                    if overlay.segments.iter().any(|s| s.name == name) {
                        return Err(config_err(
                            lineno,
                            format!("segment {name:?} is declared twice"),
                        ));
                    }
                    overlay.segments.push(SegmentSpec {
                        name: name.to_string(),
                        path: PathBuf::from(value),
                    });
                } else {
                    return Err(config_err(lineno, format!("unknown key {key:?}")));
                }
            }
        }
    }
    Ok(overlay)
}

/// Load and parse a config file.
pub fn load_config_file(path: &Path) -> Result<ConfigOverlay> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    parse_config_text(&text)
}

/// Resolve the layered configuration into a validated [`PipelineConfig`].
/// Precedence: `flags` over `file` over defaults; `env_cache` (the value
/// of [`CACHE_ENV_VAR`]) fills the cache directory when no layer set one,
/// and the final fallback is `<out>/cache`.
pub fn resolve(
    file: Option<ConfigOverlay>,
    flags: ConfigOverlay,
    env_cache: Option<PathBuf>,
) -> Result<PipelineConfig> {
    let merged = flags.merged_over(file.unwrap_or_default());
    let reference = merged.reference.ok_or_else(|| {
        Error::Config("a reference corpus is required (--reference or the reference key)".into())
    })?;

    let mut keyness = KeynessConfig::default();
    if let Some(v) = merged.min_freq {
        keyness.min_target_freq = v;
    }
    if let Some(v) = merged.ll_threshold {
        keyness.ll_threshold = v;
    }
    if let Some(v) = merged.din_threshold {
        keyness.din_threshold = v;
    }
    if let Some(v) = merged.min_keywords {
        keyness.min_keywords_per_text = v;
    }
    if let Some(v) = merged.alphabetic_only {
        keyness.alphabetic_only = v;
    }

    let mut mining = MiningConfig::default();
    if let Some(v) = merged.min_support {
        mining.min_support = v;
    }
    if let Some(v) = merged.min_confidence {
        mining.min_confidence = v;
    }
    if let Some(v) = merged.max_len {
        mining.max_rule_len = v;
    }

    let out_dir = merged.out.unwrap_or_else(|| PathBuf::from("keybasket-out"));
    let cache_dir = merged
        .cache
        .or(env_cache)
        .unwrap_or_else(|| out_dir.join("cache"));

    let cfg = PipelineConfig {
        format: merged.format.unwrap_or(InputFormat::Vertical),
        reference,
        segments: merged.segments,
        keyness,
        mining,
        seed_keyword: merged.seed_keyword,
        stoplist: merged.stoplist,
        tag_prefixes: merged.tag_prefixes.unwrap_or_else(default_tag_prefixes),
        out_dir,
        cache_dir,
    };
    cfg.validate()?;
    Ok(cfg)
}
