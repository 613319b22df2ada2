//! Mine association rules from per-document keyword lists.

use keybasket::miner::{filter_rules, mine, MiningConfig, RuleFilter, TransactionSet};

fn main() -> keybasket::Result<()> {
    // each entry is one document's keyword list; co-occurrence across
    // documents is what the miner counts
    let entries = vec![
        ("d01", vec!["migrant", "boat", "sea", "rescue"]),
        ("d02", vec!["migrant", "boat", "sea"]),
        ("d03", vec!["migrant", "boat", "crossing"]),
        ("d04", vec!["migrant", "sea", "rescue"]),
        ("d05", vec!["migrant", "boat", "sea", "crossing"]),
        ("d06", vec!["election", "vote", "poll"]),
        ("d07", vec!["election", "vote", "campaign"]),
        ("d08", vec!["election", "poll", "campaign"]),
        ("d09", vec!["boat", "harbor"]),
        ("d10", vec!["sea", "storm"]),
    ];
    let ts = TransactionSet::new(
        entries
            .into_iter()
            .map(|(id, items)| (id.to_string(), items))
            .collect(),
    );
    println!("{} transactions over {} distinct items", ts.n_docs(), ts.n_items());

    let cfg = MiningConfig {
        min_support: 0.2,
        min_confidence: 0.6,
        max_rule_len: 3,
    };
    let rules = mine(&ts, &cfg)?;

    // strongest associations first: lift, then support breaks ties
    println!("\n{:<25} {:>5} {:>8} {:>6} {:>6}", "rule", "count", "support", "conf", "lift");
    for rule in &rules {
        println!(
            "{:<25} {:>5} {:>8.3} {:>6.2} {:>6.2}",
            format!("{} -> {}", rule.lhs_joined(), rule.rhs),
            rule.count,
            rule.support,
            rule.confidence,
            rule.lift
        );
    }

    // narrow the table to one topic
    let migrant_rules = filter_rules(&rules, &RuleFilter::ContainsItem("migrant".into()));
    println!("\n{} of {} rules mention \"migrant\"", migrant_rules.len(), rules.len());

    let strong = filter_rules(
        &filter_rules(&rules, &RuleFilter::MinLift(2.0)),
        &RuleFilter::MinCount(3),
    );
    println!("rules with lift >= 2 and at least 3 supporting documents: {}", strong.len());
    Ok(())
}
