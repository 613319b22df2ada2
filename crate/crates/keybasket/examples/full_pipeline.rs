//! Run the staged pipeline end to end on a generated two-segment corpus
//! and walk through the report it produces.

use std::fs;
use std::path::Path;

use keybasket::miner::MiningConfig;
use keybasket::pipeline::{InputFormat, Pipeline, PipelineConfig, SegmentSpec};

const MARITIME: [&str; 15] = [
    "migrant", "boat", "sea", "port", "rescue", "crisis", "border", "asylum", "refugee", "camp",
    "aid", "ship", "crew", "wave", "storm",
];
const BAKING: [&str; 15] = [
    "cake", "egg", "flour", "sugar", "bake", "oven", "cream", "spoon", "bowl", "mix", "dough",
    "salt", "whisk", "pan", "tray",
];
const FILLER: [&str; 8] = ["the", "of", "and", "to", "in", "be", "have", "that"];

fn write_corpus(path: &Path, prefix: &str, maritime_share: usize, docs: usize) {
    let mut text = String::new();
    for d in 0..docs {
        text.push_str(&format!("<doc id=\"{prefix}{d:03}\">\n"));
        let theme = if d * 10 < maritime_share * docs {
            MARITIME
        } else {
            BAKING
        };
        for w in theme {
            for _ in 0..3 {
                text.push_str(&format!("{w}\t{w}\tNN\n"));
            }
        }
        for j in 0..50 {
            let w = FILLER[(d + j) % FILLER.len()];
            text.push_str(&format!("{w}\t{w}\tX@\n"));
        }
        text.push_str("</doc>\n");
    }
    fs::write(path, text).unwrap();
}

fn main() -> keybasket::Result<()> {
    let dir = tempfile::tempdir().unwrap();

    let mut reference = String::from("<doc id=\"ref\">\n");
    for i in 0..5000 {
        let w = FILLER[i % FILLER.len()];
        reference.push_str(&format!("{w}\t{w}\tX@\n"));
    }
    reference.push_str("</doc>\n");
    fs::write(dir.path().join("ref.vert"), reference).unwrap();

    // press leans maritime 8:2, forums the other way around
    write_corpus(&dir.path().join("press.vert"), "pr", 8, 20);
    write_corpus(&dir.path().join("forums.vert"), "fo", 2, 20);

    let cfg = PipelineConfig {
        format: InputFormat::Vertical,
        reference: dir.path().join("ref.vert"),
        segments: vec![
            SegmentSpec {
                name: "press".to_string(),
                path: dir.path().join("press.vert"),
            },
            SegmentSpec {
                name: "forums".to_string(),
                path: dir.path().join("forums.vert"),
            },
        ],
        keyness: Default::default(),
        mining: MiningConfig {
            max_rule_len: 2,
            ..Default::default()
        },
        seed_keyword: Some("migrant".to_string()),
        stoplist: None,
        tag_prefixes: vec!["N".to_string()],
        out_dir: dir.path().join("out"),
        cache_dir: dir.path().join("cache"),
    };

    let mut pipeline = Pipeline::new(cfg)?;
    let bundle = pipeline.run()?;

    for event in bundle.cache_events.iter().take(3) {
        println!("{event}");
    }
    println!("  ... every stage is fingerprinted; a rerun rebuilds nothing\n");

    for segment in &bundle.segments {
        println!(
            "segment {}: {}/{} documents retained, {} rules, {} mentioning \"migrant\"",
            segment.segment,
            segment.docs_retained,
            segment.docs_total,
            segment.rule_count,
            segment.filtered_rule_count.unwrap_or(0),
        );
        if let Some(boxplot) = &segment.boxplot_lift {
            println!(
                "  lift median {:.2}, upper fence {:.2}, {} outlier rules",
                boxplot.median, boxplot.upper_fence, segment.outlier_rule_count
            );
        }
        if let (Some(h), Some(tc)) = (&segment.h_point, &segment.thematic_concentration) {
            println!("  h-point {h:.2}, thematic concentration {:.4}", tc.tc);
        }
    }

    for cmp in &bundle.comparisons {
        println!("\ncomparing {} vs {}:", cmp.segment_a, cmp.segment_b);
        if let Some(test) = &cmp.lift_rank_sum {
            println!("  lift distributions: U = {}, p = {:.3e}", test.u, test.p);
        }
        println!(
            "  outlier items only in {}: {:?}",
            cmp.segment_a, cmp.unique_outlier_items_a
        );
        println!(
            "  outlier items only in {}: {:?}",
            cmp.segment_b, cmp.unique_outlier_items_b
        );
    }

    println!("\nartifacts written:");
    let mut names: Vec<String> = fs::read_dir(pipeline.config().out_dir.clone())
        .unwrap()
        .filter_map(|e| {
            let e = e.unwrap();
            e.file_type().unwrap().is_file().then(|| e.file_name().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
    Ok(())
}
