//! Lemmatized corpora: documents, frequency profiles, and the two input
//! formats (tab-separated vertical files and JSONL).

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Segment label assigned to documents that do not declare one.
pub const DEFAULT_SEGMENT: &str = "default";

fn default_segment() -> String {
    DEFAULT_SEGMENT.to_string()
}

/// One document as a lemma sequence. `tags` maps lemma to part-of-speech
/// tag when the source had a tag column (first occurrence wins); it is
/// empty otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    #[serde(default = "default_segment")]
    pub segment: String,
    pub lemmas: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tags: BTreeMap<String, String>,
}

impl Document {
    pub fn new(id: impl Into<String>, segment: impl Into<String>, lemmas: Vec<String>) -> Self {
        Document {
            id: id.into(),
            segment: segment.into(),
            lemmas,
            tags: BTreeMap::new(),
        }
    }

    /// Token count is by definition the lemma sequence length.
    pub fn token_count(&self) -> usize {
        self.lemmas.len()
    }
}

/// An ordered collection of documents with unique, non-empty ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::new();
        for doc in &documents {
            if doc.id.is_empty() {
                return Err(Error::domain("document id must be non-empty"));
            }
            if !seen.insert(doc.id.clone()) {
                return Err(Error::DuplicateDocId(doc.id.clone()));
            }
        }
        Ok(Corpus { documents })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Frequency profile over every document, with part-of-speech tags
    /// merged in where the source provided them.
    pub fn frequency_profile(&self) -> FrequencyProfile {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut pos: BTreeMap<String, String> = BTreeMap::new();
        let mut total = 0u64;
        for doc in &self.documents {
            total += doc.lemmas.len() as u64;
            for lemma in &doc.lemmas {
                *counts.entry(lemma.clone()).or_insert(0) += 1;
            }
            for (lemma, tag) in &doc.tags {
                pos.entry(lemma.clone()).or_insert_with(|| tag.clone());
            }
        }
        FrequencyProfile { counts, total_tokens: total, pos }
    }
}

/// Lemma frequencies over a token stream. Invariants: every stored count is
/// at least 1 and the counts sum to `total_tokens` when built from full
/// sequences (callers constructing profiles directly may reserve headroom,
/// so the checked invariant is sum <= total).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyProfile {
    counts: BTreeMap<String, u64>,
    total_tokens: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pos: BTreeMap<String, String>,
}

impl FrequencyProfile {
    /// Build a profile from explicit counts. `total_tokens` may exceed the
    /// count sum (e.g. when counts cover only part of the vocabulary) but
    /// never fall short of it.
    pub fn from_counts(counts: BTreeMap<String, u64>, total_tokens: u64) -> Result<Self> {
        let mut sum = 0u64;
        for (lemma, &count) in &counts {
            if lemma.is_empty() {
                return Err(Error::domain("profile lemma must be non-empty"));
            }
            if count == 0 {
                return Err(Error::domain(format!("zero count for lemma {lemma:?}")));
            }
            sum += count;
        }
        if sum > total_tokens {
            return Err(Error::domain(format!(
                "counts sum to {sum} but total_tokens is {total_tokens}"
            )));
        }
        Ok(FrequencyProfile { counts, total_tokens, pos: BTreeMap::new() })
    }

    pub fn count(&self, lemma: &str) -> u64 {
        self.counts.get(lemma).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Relative frequency in instances per million tokens.
    pub fn ipm(&self, lemma: &str) -> f64 {
        if self.total_tokens == 0 {
            return 0.0;
        }
        1e6 * self.count(lemma) as f64 / self.total_tokens as f64
    }

    pub fn distinct_lemmas(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(l, &c)| (l.as_str(), c))
    }

    pub fn tag(&self, lemma: &str) -> Option<&str> {
        self.pos.get(lemma).map(String::as_str)
    }

    pub fn has_tags(&self) -> bool {
        !self.pos.is_empty()
    }

    /// Lemmas ordered by descending frequency; ties break lexicographically
    /// so the ranking is total.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        let mut ranked: Vec<(&str, u64)> = self.iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked
    }
}

/// Count lemmas across any set of sequences, e.g. all documents of a
/// reference corpus.
pub fn build_profile<S: AsRef<str>, T: AsRef<[S]>>(sequences: &[T]) -> FrequencyProfile {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut total = 0u64;
    for seq in sequences {
        for lemma in seq.as_ref() {
            total += 1;
            *counts.entry(lemma.as_ref().to_string()).or_insert(0) += 1;
        }
    }
    FrequencyProfile { counts, total_tokens: total, pos: BTreeMap::new() }
}

/// True when every character is a Unicode letter. Hyphenated or digit-bearing
/// forms ("e-mail", "g20") are rejected; the empty string is not alphabetic.
pub fn is_alphabetic(lemma: &str) -> bool {
    !lemma.is_empty() && lemma.chars().all(char::is_alphabetic)
}

// ---------- vertical format ----------

/// Parse the tab-separated vertical format: documents are delimited by
/// `<doc id="..." segment="...">` ... `</doc>`, token lines carry
/// `form<TAB>lemma[<TAB>tag[<TAB>...]]`, and any other `<`-prefixed line is
/// structural markup and is skipped.
pub fn parse_vertical<R: BufRead>(reader: R) -> Result<Corpus> {
    let mut documents = Vec::new();
    let mut open: Option<(Document, u64)> = None;
    let mut last_line = 0u64;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx as u64 + 1;
        last_line = lineno;
        let text = line.trim_end_matches('\r');
        if text.is_empty() {
            continue;
        }
        if text.starts_with("</doc") {
            let (doc, _) = open
                .take()
                .ok_or_else(|| Error::parse(lineno, "</doc> without a matching <doc>"))?;
            documents.push(doc);
        } else if text.starts_with("<doc>")
            || text.starts_with("<doc ")
            || text.starts_with("<doc\t")
        {
            if let Some((_, at)) = &open {
                return Err(Error::parse(
                    lineno,
                    format!("<doc> nested inside the <doc> opened at line {at}"),
                ));
            }
            let attrs = parse_doc_attrs(text, lineno)?;
            let id = attrs
                .get("id")
                .ok_or_else(|| Error::parse(lineno, "<doc> tag is missing the id attribute"))?
                .clone();
            let segment = attrs
                .get("segment")
                .cloned()
                .unwrap_or_else(default_segment);
            open = Some((Document::new(id, segment, Vec::new()), lineno));
        } else if text.starts_with('<') {
            // structural markup such as <s> or <p>
        } else {
            let (doc, _) = open
                .as_mut()
                .ok_or_else(|| Error::parse(lineno, "token line outside any <doc> block"))?;
            let mut fields = text.split('\t');
            let _form = fields.next();
            let lemma = fields.next().ok_or_else(|| {
                Error::parse(lineno, "token line must have at least form<TAB>lemma")
            })?;
            if lemma.is_empty() {
                return Err(Error::parse(lineno, "empty lemma field"));
            }
            if let Some(tag) = fields.next() {
                if !tag.is_empty() && !doc.tags.contains_key(lemma) {
                    doc.tags.insert(lemma.to_string(), tag.to_string());
                }
            }
            doc.lemmas.push(lemma.to_string());
        }
    }

    if let Some((doc, at)) = open {
        return Err(Error::parse(
            last_line,
            format!("<doc id={:?}> opened at line {at} is never closed", doc.id),
        ));
    }
    Corpus::new(documents)
}

/// Parse `key="value"` attribute pairs from a `<doc ...>` tag.
fn parse_doc_attrs(line: &str, lineno: u64) -> Result<BTreeMap<String, String>> {
    let inner = line
        .strip_prefix("<doc")
        .and_then(|s| s.strip_suffix('>'))
        .ok_or_else(|| Error::parse(lineno, "malformed <doc> tag"))?;
    let mut attrs = BTreeMap::new();
    let mut rest = inner.trim_start();
    while !rest.is_empty() {
        let eq = rest
            .find('=')
            .ok_or_else(|| Error::parse(lineno, "attribute without '=' in <doc> tag"))?;
        let key = rest[..eq].trim();
        if key.is_empty() {
            return Err(Error::parse(lineno, "empty attribute name in <doc> tag"));
        }
        let after = rest[eq + 1..]
            .strip_prefix('"')
            .ok_or_else(|| Error::parse(lineno, "attribute value must be double-quoted"))?;
        let end = after
            .find('"')
            .ok_or_else(|| Error::parse(lineno, "unterminated attribute value"))?;
        attrs.insert(key.to_string(), after[..end].to_string());
        rest = after[end + 1..].trim_start();
    }
    Ok(attrs)
}

// ---------- JSONL format ----------

/// Parse one JSON document per line: `{"id": ..., "lemmas": [...]}` with
/// optional `segment` (defaults to "default") and optional `tags`.
pub fn parse_jsonl<R: BufRead>(reader: R) -> Result<Corpus> {
    let mut documents = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line)
            .map_err(|e| Error::parse(idx as u64 + 1, e.to_string()))?;
        documents.push(doc);
    }
    Corpus::new(documents)
}

/// Serialize a corpus as JSONL. Reparsing the output reproduces the corpus
/// exactly, so this doubles as the normalized cache representation.
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut writer: W) -> Result<()> {
    for doc in corpus.documents() {
        serde_json::to_writer(&mut writer, doc)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
