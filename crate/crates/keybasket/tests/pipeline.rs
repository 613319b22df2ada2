//! End-to-end pipeline tests over small generated corpora: artifact layout,
//! rerun byte-identity, cache behavior, degenerate segments, and comparisons.

use std::fs;
use std::path::{Path, PathBuf};

use keybasket::miner::{AssociationRule, MiningConfig};
use keybasket::pipeline::{
    compare_segments, emit_rule_table, InputFormat, Pipeline, PipelineConfig, SegmentSpec,
    TableFormat,
};
use keybasket::Error;

const TOPIC_A: [&str; 15] = [
    "migrant", "boat", "sea", "port", "rescue", "crisis", "border", "asylum", "refugee", "camp",
    "aid", "ship", "crew", "wave", "storm",
];
const TOPIC_B: [&str; 15] = [
    "cake", "egg", "flour", "sugar", "bake", "oven", "cream", "spoon", "bowl", "mix", "dough",
    "salt", "whisk", "pan", "tray",
];
const FILLER: [&str; 8] = ["the", "of", "and", "to", "in", "be", "have", "that"];

fn write_reference(path: &Path) {
    let mut text = String::from("<doc id=\"ref\">\n");
    for i in 0..4000 {
        let w = FILLER[i % FILLER.len()];
        text.push_str(&format!("{w}\t{w}\tX@\n"));
    }
    text.push_str("</doc>\n");
    fs::write(path, text).unwrap();
}

/// One document per entry; each planted word appears three times, padded with
/// filler so every doc has the same length.
fn write_segment(path: &Path, prefix: &str, docs: &[&[&str]]) {
    let mut text = String::new();
    for (i, planted) in docs.iter().enumerate() {
        text.push_str(&format!("<doc id=\"{prefix}{i:03}\">\n"));
        for w in *planted {
            for _ in 0..3 {
                text.push_str(&format!("{w}\t{w}\tNN\n"));
            }
        }
        for j in 0..60 {
            let w = FILLER[(i + j) % FILLER.len()];
            text.push_str(&format!("{w}\t{w}\tX@\n"));
        }
        text.push_str("</doc>\n");
    }
    fs::write(path, text).unwrap();
}

fn base_config(dir: &Path, segments: Vec<SegmentSpec>) -> PipelineConfig {
    PipelineConfig {
        format: InputFormat::Vertical,
        reference: dir.join("ref.vert"),
        segments,
        keyness: Default::default(),
        mining: MiningConfig {
            max_rule_len: 2,
            ..Default::default()
        },
        seed_keyword: Some("migrant".to_string()),
        stoplist: None,
        tag_prefixes: vec!["N".to_string()],
        out_dir: dir.join("out"),
        cache_dir: dir.join("cache"),
    }
}

/// Two 12-document segments over the same vocabulary with different topic
/// proportions: segment one is mostly maritime, segment two mostly baking.
fn two_segment_config(dir: &Path) -> PipelineConfig {
    write_reference(&dir.join("ref.vert"));
    let a: &[&str] = &TOPIC_A;
    let b: &[&str] = &TOPIC_B;
    write_segment(
        &dir.join("one.vert"),
        "one",
        &[a, a, a, a, a, a, a, a, a, b, b, b],
    );
    write_segment(
        &dir.join("two.vert"),
        "two",
        &[b, b, b, b, b, b, b, b, b, a, a, a],
    );
    base_config(
        dir,
        vec![
            SegmentSpec {
                name: "one".to_string(),
                path: dir.join("one.vert"),
            },
            SegmentSpec {
                name: "two".to_string(),
                path: dir.join("two.vert"),
            },
        ],
    )
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn full_run_writes_every_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());
    let out = cfg.out_dir.clone();
    let bundle = Pipeline::new(cfg).unwrap().run().unwrap();

    for name in [
        "rules_one.csv",
        "rules_one.json",
        "rules_two.csv",
        "rules_two.json",
        "boxplot.csv",
        "outliers_one.csv",
        "outliers_two.csv",
        "summary.json",
        "comparison.json",
    ] {
        assert!(out.join(name).exists(), "missing {name}");
    }

    assert_eq!(bundle.segments.len(), 2);
    assert_eq!(bundle.comparisons.len(), 1);
    let one = bundle.segment("one").unwrap();
    assert_eq!(one.docs_total, 12);
    assert_eq!(one.docs_retained, 12);
    assert!(!one.degenerate);
    assert!(one.rule_count > 0);
    // 9 of 12 docs mention the seed keyword in segment one, 3 in segment two.
    assert_eq!(one.seed_doc_count, Some(9));
    assert_eq!(bundle.segment("two").unwrap().seed_doc_count, Some(3));
    assert!(one.boxplot_lift.is_some());
    assert!(one.h_point.is_some());
    assert!(one.thematic_concentration.is_some());

    let summary = read(&out.join("summary.json"));
    let json: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(json["segments"].as_array().unwrap().len(), 2);
    assert!(summary.ends_with('\n'));

    let comparison = read(&out.join("comparison.json"));
    let json: serde_json::Value = serde_json::from_str(&comparison).unwrap();
    let pairs = json["comparisons"].as_array().unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0]["segment_a"], "one");
    assert_eq!(pairs[0]["segment_b"], "two");
}

#[test]
fn rerun_with_warm_cache_is_byte_identical_and_silent() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());
    let out = cfg.out_dir.clone();

    let bundle = Pipeline::new(cfg.clone()).unwrap().run().unwrap();
    assert!(
        !bundle.cache_events.is_empty(),
        "cold run should rebuild stages"
    );
    let artifacts = [
        "rules_one.csv",
        "rules_two.csv",
        "boxplot.csv",
        "outliers_one.csv",
        "summary.json",
        "comparison.json",
    ];
    let cold: Vec<String> = artifacts.iter().map(|n| read(&out.join(n))).collect();

    let bundle = Pipeline::new(cfg).unwrap().run().unwrap();
    assert!(
        bundle.cache_events.is_empty(),
        "warm run rebuilt: {:?}",
        bundle.cache_events
    );
    let warm: Vec<String> = artifacts.iter().map(|n| read(&out.join(n))).collect();
    assert_eq!(cold, warm);
}

#[test]
fn stale_cache_entries_are_rebuilt_when_inputs_change() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());
    Pipeline::new(cfg.clone()).unwrap().run().unwrap();

    // Appending a document to segment one must invalidate its chain but
    // leave segment two cached.
    let seg_one = tmp.path().join("one.vert");
    let mut text = read(&seg_one);
    text.push_str("<doc id=\"extra\">\nmigrant\tmigrant\tNN\n</doc>\n");
    fs::write(&seg_one, text).unwrap();

    let bundle = Pipeline::new(cfg).unwrap().run().unwrap();
    assert!(bundle
        .cache_events
        .iter()
        .any(|e| e.contains("corpus_one.jsonl")));
    assert!(!bundle.cache_events.iter().any(|e| e.contains("_two.")));
    assert_eq!(bundle.segment("one").unwrap().docs_total, 13);
    // The one-token document cannot clear the keyword minimum.
    assert_eq!(bundle.segment("one").unwrap().docs_retained, 12);
}

#[test]
fn corrupt_cache_artifact_triggers_rebuild_not_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());
    let out = cfg.out_dir.clone();
    Pipeline::new(cfg.clone()).unwrap().run().unwrap();
    let cold = read(&out.join("rules_one.csv"));

    fs::write(cfg.cache_dir.join("rules_one.json"), "not json").unwrap();

    let bundle = Pipeline::new(cfg).unwrap().run().unwrap();
    assert!(bundle
        .cache_events
        .iter()
        .any(|e| e.contains("rules_one.json")));
    assert_eq!(read(&out.join("rules_one.csv")), cold);
}

#[test]
fn degenerate_segment_reports_without_statistics() {
    let tmp = tempfile::tempdir().unwrap();
    write_reference(&tmp.path().join("ref.vert"));
    // Documents made of reference-distribution filler only: no keywords, so
    // nothing clears the per-document minimum.
    write_segment(&tmp.path().join("flat.vert"), "flat", &[&[], &[], &[]]);
    let a: &[&str] = &TOPIC_A;
    write_segment(&tmp.path().join("rich.vert"), "rich", &[a, a, a]);
    let cfg = base_config(
        tmp.path(),
        vec![
            SegmentSpec {
                name: "flat".to_string(),
                path: tmp.path().join("flat.vert"),
            },
            SegmentSpec {
                name: "rich".to_string(),
                path: tmp.path().join("rich.vert"),
            },
        ],
    );
    let out = cfg.out_dir.clone();
    let bundle = Pipeline::new(cfg).unwrap().run().unwrap();

    let flat = bundle.segment("flat").unwrap();
    assert!(flat.degenerate);
    assert_eq!(flat.docs_retained, 0);
    assert_eq!(flat.rule_count, 0);
    assert!(flat.boxplot_lift.is_none());
    assert!(flat.boxplot_support.is_none());

    // Empty rule tables still get written, and the boxplot carries rows only
    // for the segment that has distributions.
    let rules = read(&out.join("rules_flat.csv"));
    assert_eq!(rules, "lhs,rhs,count,support,confidence,lift\n");
    let boxplot = read(&out.join("boxplot.csv"));
    assert!(!boxplot.contains("flat,"));
    assert!(boxplot.contains("rich,lift,"));

    // Rank-sum comparison against an empty side is omitted, not an error.
    let cmp = &bundle.comparisons[0];
    assert!(cmp.lift_rank_sum.is_none());
    assert!(cmp.support_rank_sum.is_none());
}

#[test]
fn comparing_a_segment_with_itself_is_a_null_result() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());
    let bundle = Pipeline::new(cfg).unwrap().stats().unwrap();
    let one = bundle.segment("one").unwrap();

    let cmp = compare_segments(one, one).unwrap();
    let lift = cmp.lift_rank_sum.unwrap();
    assert_eq!(lift.p, 1.0, "identical samples must not look different");
    assert!(cmp.unique_outlier_items_a.is_empty());
    assert!(cmp.unique_outlier_items_b.is_empty());
}

#[test]
fn comparison_requires_matching_settings() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());
    let bundle = Pipeline::new(cfg).unwrap().stats().unwrap();
    let one = bundle.segment("one").unwrap();
    let mut two = bundle.segment("two").unwrap().clone();
    two.mining.min_confidence = 0.9;

    match compare_segments(one, &two) {
        Err(Error::ConfigMismatch(_)) => {}
        other => panic!("expected config mismatch, got {other:?}"),
    }
}

#[test]
fn mine_writes_rule_files_only() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());
    let out = cfg.out_dir.clone();
    Pipeline::new(cfg).unwrap().mine().unwrap();

    assert!(out.join("rules_one.csv").exists());
    assert!(out.join("rules_one.json").exists());
    assert!(!out.join("boxplot.csv").exists());
    assert!(!out.join("summary.json").exists());
    assert!(!out.join("comparison.json").exists());
}

#[test]
fn stage_verbs_reuse_each_other_through_the_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());

    let mut pipeline = Pipeline::new(cfg.clone()).unwrap();
    pipeline.keywords().unwrap();
    assert!(pipeline
        .cache_events()
        .iter()
        .any(|e| e.contains("keywords_one.jsonl")));

    // Mining after the keywords verb only rebuilds the rule stage.
    let mut pipeline = Pipeline::new(cfg).unwrap();
    pipeline.mine().unwrap();
    let events = pipeline.cache_events();
    assert!(events.iter().any(|e| e.contains("rules_one.json")));
    assert!(!events.iter().any(|e| e.contains("keywords")));
    assert!(!events.iter().any(|e| e.contains("corpus")));
}

#[test]
fn compare_needs_two_segments() {
    let tmp = tempfile::tempdir().unwrap();
    write_reference(&tmp.path().join("ref.vert"));
    let a: &[&str] = &TOPIC_A;
    write_segment(&tmp.path().join("one.vert"), "one", &[a, a]);
    let cfg = base_config(
        tmp.path(),
        vec![SegmentSpec {
            name: "one".to_string(),
            path: tmp.path().join("one.vert"),
        }],
    );
    let err = Pipeline::new(cfg).unwrap().compare().unwrap_err();
    assert!(matches!(err, Error::Config(_)), "got {err:?}");
}

#[test]
fn stoplist_supplies_the_content_word_rule_when_no_tags_match() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = two_segment_config(tmp.path());
    cfg.tag_prefixes.clear();
    let stoplist = tmp.path().join("stop.txt");
    fs::write(&stoplist, "# function words\nthe\nof\nand\nto\nin\nbe\nhave\nthat\n").unwrap();
    cfg.stoplist = Some(stoplist);
    let bundle = Pipeline::new(cfg).unwrap().stats().unwrap();
    let one = bundle.segment("one").unwrap();
    assert!(one.thematic_concentration.is_some());
    assert!(one.h_point.is_some());
}

#[test]
fn without_tags_or_stoplist_concentration_is_omitted() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = two_segment_config(tmp.path());
    cfg.tag_prefixes.clear();
    cfg.stoplist = None;
    let bundle = Pipeline::new(cfg).unwrap().stats().unwrap();
    let one = bundle.segment("one").unwrap();
    assert!(one.thematic_concentration.is_none());
    assert!(one.h_point.is_some(), "the h-point needs no content rule");
}

fn worked_rule() -> AssociationRule {
    AssociationRule {
        lhs: vec!["migrant".to_string()],
        rhs: "EU".to_string(),
        count: 110,
        support: 110.0 / 12110.0,
        confidence: 110.0 / 259.0,
        lift: (110.0 * 12110.0) / (259.0 * 568.0),
    }
}

#[test]
fn ranked_csv_table_has_exact_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("table.csv");
    emit_rule_table(&[worked_rule()], TableFormat::Csv, &path).unwrap();
    assert_eq!(
        read(&path),
        "ranking,lhs,rhs,count,support,confidence,lift\n\
         1,migrant,EU,110,0.009083,0.424710,9.055006\n"
    );

    emit_rule_table(&[], TableFormat::Csv, &path).unwrap();
    assert_eq!(read(&path), "ranking,lhs,rhs,count,support,confidence,lift\n");
}

#[test]
fn ranked_json_table_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("table.json");
    let mut rule = worked_rule();
    rule.lhs = vec!["migrant".to_string(), "sea".to_string()];
    emit_rule_table(&[rule], TableFormat::Json, &path).unwrap();
    let text = read(&path);
    assert!(text.ends_with('\n'));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["ranking"], 1);
    assert_eq!(rows[0]["lhs"], "migrant, sea");
    assert_eq!(rows[0]["rhs"], "EU");
    assert_eq!(rows[0]["count"], 110);
}

#[test]
fn jsonl_input_format_is_equivalent_to_vertical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());
    let out_vertical = cfg.out_dir.clone();
    Pipeline::new(cfg.clone()).unwrap().run().unwrap();

    // Re-express the same corpora in the line-JSON format and run again.
    let convert = |name: &str| {
        let docs =
            keybasket::corpus::parse_vertical(read(&tmp.path().join(name)).as_bytes()).unwrap();
        let mut buf = Vec::new();
        keybasket::corpus::write_jsonl(&docs, &mut buf).unwrap();
        fs::write(tmp.path().join(name).with_extension("jsonl"), buf).unwrap();
    };
    convert("ref.vert");
    convert("one.vert");
    convert("two.vert");

    let mut cfg2 = two_segment_config(tmp.path());
    cfg2.format = InputFormat::Jsonl;
    cfg2.reference = tmp.path().join("ref.jsonl");
    cfg2.segments[0].path = tmp.path().join("one.jsonl");
    cfg2.segments[1].path = tmp.path().join("two.jsonl");
    cfg2.out_dir = tmp.path().join("out-jsonl");
    cfg2.cache_dir = tmp.path().join("cache-jsonl");
    let out_jsonl = cfg2.out_dir.clone();
    Pipeline::new(cfg2).unwrap().run().unwrap();

    for name in ["rules_one.csv", "rules_two.csv", "boxplot.csv"] {
        assert_eq!(
            read(&out_vertical.join(name)),
            read(&out_jsonl.join(name)),
            "{name} differs between input formats"
        );
    }
}

#[test]
fn out_dir_summary_reflects_segment_order_from_config() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = two_segment_config(tmp.path());
    cfg.segments.reverse();
    let bundle = Pipeline::new(cfg).unwrap().run().unwrap();
    let names: Vec<&str> = bundle.segments.iter().map(|s| s.segment.as_str()).collect();
    assert_eq!(names, ["two", "one"]);
    assert_eq!(bundle.comparisons[0].segment_a, "two");
    assert_eq!(bundle.comparisons[0].segment_b, "one");
}

fn fingerprint_sidecars(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "fp"))
        .collect();
    v.sort();
    v
}

#[test]
fn every_cached_artifact_has_a_fingerprint_sidecar() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = two_segment_config(tmp.path());
    let cache = cfg.cache_dir.clone();
    Pipeline::new(cfg).unwrap().run().unwrap();
    let sidecars = fingerprint_sidecars(&cache);
    assert_eq!(sidecars.len(), 7); // reference + (corpus, keywords, rules) x 2
    for sidecar in sidecars {
        let artifact = sidecar.with_extension("");
        assert!(artifact.exists(), "orphan sidecar {}", sidecar.display());
        let fp = read(&sidecar);
        assert_eq!(fp.trim().len(), 64, "fingerprints are sha-256 hex");
    }
}
