//! Keyword extraction by corpus comparison: the G² log-likelihood keyness
//! statistic plus the DIN effect size, applied per document against a
//! reference profile.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::corpus::{is_alphabetic, Corpus, Document, FrequencyProfile};
use crate::error::{Error, Result};

/// Extraction thresholds. Defaults: candidates must occur at least 3 times
/// in the target text, clear G² >= 10.83 (the chi-square(1) critical value
/// at alpha = 0.001) and DIN > 70, and lists shorter than 15 keywords are
/// dropped from transaction building.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeynessConfig {
    pub min_target_freq: u64,
    pub ll_threshold: f64,
    pub din_threshold: f64,
    pub min_keywords_per_text: usize,
    pub alphabetic_only: bool,
}

impl Default for KeynessConfig {
    fn default() -> Self {
        KeynessConfig {
            min_target_freq: 3,
            ll_threshold: 10.83,
            din_threshold: 70.0,
            min_keywords_per_text: 15,
            alphabetic_only: true,
        }
    }
}

impl KeynessConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_target_freq == 0 {
            return Err(Error::domain("min_target_freq must be at least 1"));
        }
        if !self.ll_threshold.is_finite() || self.ll_threshold < 0.0 {
            return Err(Error::domain("ll_threshold must be finite and non-negative"));
        }
        if !self.din_threshold.is_finite()
            || !(-100.0..=100.0).contains(&self.din_threshold)
        {
            return Err(Error::domain("din_threshold must lie in [-100, 100]"));
        }
        Ok(())
    }
}

/// One scored keyword. Relative frequencies are instances per million.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordRecord {
    pub lemma: String,
    pub freq_target: u64,
    pub freq_ref: u64,
    pub rel_freq_target: f64,
    pub rel_freq_ref: f64,
    pub ll: f64,
    pub din: f64,
}

/// Keywords of one document, sorted by lemma. The lemma set is duplicate-free
/// by construction (one record per distinct lemma).
#[derive(Debug, Clone, PartialEq)]
pub struct KeywordList {
    pub doc_id: String,
    pub segment: String,
    pub records: Vec<KeywordRecord>,
}

impl KeywordList {
    pub fn keywords(&self) -> impl Iterator<Item = &str> {
        self.records.iter().map(|r| r.lemma.as_str())
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.records
            .binary_search_by(|r| r.lemma.as_str().cmp(lemma))
            .is_ok()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// G² log-likelihood for the 2x2 contingency of a term's frequency in a
/// target corpus (k_target of n_target tokens) versus a reference corpus
/// (k_ref of n_ref). Zero observed cells contribute zero. The result is
/// non-negative and exactly 0 when the two proportions are equal.
pub fn log_likelihood(k_target: u64, n_target: u64, k_ref: u64, n_ref: u64) -> Result<f64> {
    if n_target == 0 || n_ref == 0 {
        return Err(Error::domain("corpus totals must be positive"));
    }
    if k_target > n_target || k_ref > n_ref {
        return Err(Error::domain(format!(
            "observed frequency exceeds its corpus total ({k_target}/{n_target}, {k_ref}/{n_ref})"
        )));
    }
    if k_target == 0 && k_ref == 0 {
        return Err(Error::domain("term is absent from both corpora"));
    }
    let a = k_target as f64;
    let b = (n_target - k_target) as f64;
    let c = k_ref as f64;
    let d = (n_ref - k_ref) as f64;
    let nt = n_target as f64;
    let nr = n_ref as f64;
    let n = nt + nr;
    let col_k = a + c;
    let col_rest = b + d;
    let cells = [
        (a, nt * col_k / n),
        (b, nt * col_rest / n),
        (c, nr * col_k / n),
        (d, nr * col_rest / n),
    ];
    let mut sum = 0.0;
    for (observed, expected) in cells {
        if observed > 0.0 {
            sum += observed * (observed / expected).ln();
        }
    }
    // rounding can leave a tiny negative residue when proportions are close
    Ok((2.0 * sum).max(0.0))
}

/// DIN effect size: 100 * (t - r) / (t + r) over relative frequencies.
/// Ranges over [-100, 100]; exactly 100 iff the reference frequency is 0.
pub fn din(rel_target: f64, rel_ref: f64) -> Result<f64> {
    if !rel_target.is_finite() || !rel_ref.is_finite() || rel_target < 0.0 || rel_ref < 0.0 {
        return Err(Error::domain(
            "relative frequencies must be finite and non-negative",
        ));
    }
    if rel_target + rel_ref == 0.0 {
        return Err(Error::domain("both relative frequencies are zero"));
    }
    // divide before scaling: the quotient's magnitude cannot exceed 1, so
    // the result stays inside [-100, 100] and hits the endpoints exactly
    // when one side is zero
    Ok(100.0 * ((rel_target - rel_ref) / (rel_target + rel_ref)))
}

fn ipm(count: u64, total: u64) -> f64 {
    1e6 * count as f64 / total as f64
}

/// Score every candidate lemma of `doc` against the reference profile and
/// keep those clearing all thresholds. Filtering (minimum frequency,
/// alphabetic-only) narrows the candidate set but never alters the token
/// totals the statistics are computed from.
pub fn extract_keywords(
    doc: &Document,
    reference: &FrequencyProfile,
    cfg: &KeynessConfig,
) -> Result<KeywordList> {
    cfg.validate()?;
    if doc.lemmas.is_empty() {
        return Err(Error::domain(format!("document {:?} has no tokens", doc.id)));
    }
    if reference.total_tokens() == 0 {
        return Err(Error::domain("reference profile is empty"));
    }
    let n_target = doc.token_count() as u64;
    let n_ref = reference.total_tokens();

    // BTreeMap keeps records sorted by lemma
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for lemma in &doc.lemmas {
        *counts.entry(lemma.as_str()).or_insert(0) += 1;
    }

    let mut records = Vec::new();
    for (lemma, k_target) in counts {
        if k_target < cfg.min_target_freq {
            continue;
        }
        if cfg.alphabetic_only && !is_alphabetic(lemma) {
            continue;
        }
        let k_ref = reference.count(lemma);
        let rel_target = ipm(k_target, n_target);
        let rel_ref = ipm(k_ref, n_ref);
        let ll = log_likelihood(k_target, n_target, k_ref, n_ref)?;
        let din_value = din(rel_target, rel_ref)?;
        if ll >= cfg.ll_threshold && din_value > cfg.din_threshold {
            records.push(KeywordRecord {
                lemma: lemma.to_string(),
                freq_target: k_target,
                freq_ref: k_ref,
                rel_freq_target: rel_target,
                rel_freq_ref: rel_ref,
                ll,
                din: din_value,
            });
        }
    }
    Ok(KeywordList {
        doc_id: doc.id.clone(),
        segment: doc.segment.clone(),
        records,
    })
}

/// Keyword lists retained for mining plus how many documents were dropped
/// for falling short of the keyword minimum.
#[derive(Debug, Clone)]
pub struct TransactionBuild {
    /// Retained lists, sorted by document id.
    pub lists: Vec<KeywordList>,
    pub retained_count: usize,
    pub dropped_count: usize,
}

impl TransactionBuild {
    pub fn retention_ratio(&self) -> f64 {
        let total = self.retained_count + self.dropped_count;
        if total == 0 {
            0.0
        } else {
            self.retained_count as f64 / total as f64
        }
    }
}

/// Extract keywords for every document and keep the lists long enough to
/// serve as transactions. Output order is normalized by document id, so the
/// result does not depend on corpus order.
pub fn build_transactions(
    corpus: &Corpus,
    reference: &FrequencyProfile,
    cfg: &KeynessConfig,
) -> Result<TransactionBuild> {
    if corpus.is_empty() {
        return Err(Error::domain("corpus has no documents"));
    }
    let mut lists = Vec::new();
    let mut dropped = 0usize;
    for doc in corpus.documents() {
        let list = extract_keywords(doc, reference, cfg)?;
        if list.len() >= cfg.min_keywords_per_text {
            lists.push(list);
        } else {
            dropped += 1;
        }
    }
    lists.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    Ok(TransactionBuild {
        retained_count: lists.len(),
        dropped_count: dropped,
        lists,
    })
}

// ---------- keyword-list serialization ----------

#[derive(Serialize, Deserialize)]
struct KeywordListWire {
    doc_id: String,
    segment: String,
    keywords: Vec<String>,
    records: Vec<KeywordRecord>,
}

/// Write keyword lists as JSONL, one document per line, with the plain
/// keyword array alongside the full records.
pub fn write_keyword_lists<W: Write>(lists: &[KeywordList], mut writer: W) -> Result<()> {
    for list in lists {
        let wire = KeywordListWire {
            doc_id: list.doc_id.clone(),
            segment: list.segment.clone(),
            keywords: list.keywords().map(str::to_string).collect(),
            records: list.records.clone(),
        };
        serde_json::to_writer(&mut writer, &wire)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Read keyword lists written by [`write_keyword_lists`], verifying that the
/// keyword array matches the records.
pub fn read_keyword_lists<R: BufRead>(reader: R) -> Result<Vec<KeywordList>> {
    let mut lists = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx as u64 + 1;
        let wire: KeywordListWire =
            serde_json::from_str(&line).map_err(|e| Error::parse(lineno, e.to_string()))?;
        let lemmas: Vec<&str> = wire.records.iter().map(|r| r.lemma.as_str()).collect();
        if wire.keywords != lemmas {
            return Err(Error::parse(
                lineno,
                "keyword array does not match the record lemmas",
            ));
        }
        if lemmas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(lineno, "keyword records are not sorted by lemma"));
        }
        lists.push(KeywordList {
            doc_id: wire.doc_id,
            segment: wire.segment,
            records: wire.records,
        });
    }
    Ok(lists)
}
