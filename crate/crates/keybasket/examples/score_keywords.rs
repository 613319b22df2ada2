//! Score one document against a reference corpus and see which lemmas
//! clear the keyword thresholds.

use std::collections::BTreeMap;

use keybasket::corpus::{Document, FrequencyProfile};
use keybasket::keyness::{extract_keywords, KeynessConfig};

fn main() -> keybasket::Result<()> {
    // a 100k-token reference: mostly function words, some general vocabulary
    let mut counts = BTreeMap::new();
    for (lemma, count) in [
        ("the", 40_000u64),
        ("of", 25_000),
        ("and", 20_000),
        ("sea", 8_000),
        ("boat", 4_000),
        ("port", 2_990),
        ("migrant", 10),
    ] {
        counts.insert(lemma.to_string(), count);
    }
    let reference = FrequencyProfile::from_counts(counts, 100_000)?;

    // a 60-token article where a few lemmas are far denser than the
    // reference predicts
    let mut lemmas = Vec::new();
    for (lemma, count) in [
        ("migrant", 6),
        ("rescue", 5),
        ("boat", 4),
        ("sea", 3),
        ("port", 2),
        ("the", 25),
        ("of", 10),
        ("and", 5),
    ] {
        for _ in 0..count {
            lemmas.push(lemma.to_string());
        }
    }
    let doc = Document::new("article-1", "press", lemmas);

    let cfg = KeynessConfig::default();
    println!(
        "thresholds: freq >= {}, log-likelihood >= {}, effect size > {}\n",
        cfg.min_target_freq, cfg.ll_threshold, cfg.din_threshold
    );

    let list = extract_keywords(&doc, &reference, &cfg)?;
    println!("{:<10} {:>4} {:>10} {:>8}", "keyword", "freq", "log-lik", "din");
    for record in &list.records {
        println!(
            "{:<10} {:>4} {:>10.2} {:>8.2}",
            record.lemma, record.freq_target, record.ll, record.din
        );
    }

    // "boat" is denser here than in the reference, but not by enough to
    // clear the effect-size cutoff; "sea" is denser in the reference;
    // "port" falls under the frequency minimum
    assert!(list.contains("migrant") && list.contains("rescue"));
    for absent in ["boat", "sea", "port", "the"] {
        assert!(!list.contains(absent));
    }
    println!(
        "\nnot keywords: boat (din 25), sea (denser in reference), \
         port (freq < 3), the (function word)"
    );
    Ok(())
}
