//! Keyword extraction and association-rule mining over lemmatized corpora.
//!
//! The pipeline, end to end: parse corpora ([`corpus`]), score each
//! document's lemmas against a reference corpus and keep the statistically
//! key ones ([`keyness`]), treat the per-document keyword lists as
//! transactions and mine association rules with support, confidence, and
//! lift ([`miner`]), then summarize rule distributions and compare corpus
//! segments ([`stats`], [`pipeline`]).
//!
//! Each capability has a runnable demo under `examples/`:
//!
//! ```text
//! cargo run -p keybasket --example parse_corpora     corpus formats, profiles
//! cargo run -p keybasket --example score_keywords    keyness scoring
//! cargo run -p keybasket --example mine_rules        transaction mining
//! cargo run -p keybasket --example corpus_stats      boxplots, h-point, rank-sum
//! cargo run -p keybasket --example full_pipeline     two-segment comparison run
//! ```

#![forbid(unsafe_code)]

pub mod corpus;
pub mod error;
pub mod keyness;
pub mod miner;
pub mod pipeline;
pub mod stats;

pub use error::{Error, Result};
