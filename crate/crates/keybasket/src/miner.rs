//! Market-basket mining over keyword transactions: level-wise frequent
//! itemset search with exact counts from sorted posting-list intersection,
//! followed by rule generation with support, confidence, and lift.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::keyness::KeywordList;

pub type ItemId = u32;

/// Mining thresholds. `max_rule_len` bounds the total rule length
/// (antecedent plus the single-item consequent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningConfig {
    pub min_support: f64,
    pub min_confidence: f64,
    pub max_rule_len: usize,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_support: 0.003,
            min_confidence: 0.4,
            max_rule_len: 4,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_support > 0.0 && self.min_support <= 1.0) {
            return Err(Error::domain("min_support must lie in (0, 1]"));
        }
        if !(self.min_confidence > 0.0 && self.min_confidence <= 1.0) {
            return Err(Error::domain("min_confidence must lie in (0, 1]"));
        }
        if self.max_rule_len < 2 {
            return Err(Error::domain("max_rule_len must be at least 2"));
        }
        Ok(())
    }
}

/// Transactions as deduplicated item-id sets plus an inverted index. Item
/// ids are assigned in lexicographic item order, so id order and name order
/// agree everywhere downstream.
#[derive(Debug, Clone)]
pub struct TransactionSet {
    doc_ids: Vec<String>,
    transactions: Vec<Vec<ItemId>>,
    items: Vec<String>,
    index: Vec<Vec<u32>>,
}

impl TransactionSet {
    pub fn new<S: AsRef<str>>(entries: Vec<(String, Vec<S>)>) -> Self {
        let mut names: BTreeSet<&str> = BTreeSet::new();
        for (_, items) in &entries {
            names.extend(items.iter().map(|s| s.as_ref()));
        }
        let items: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let id_of: HashMap<&str, ItemId> = names
            .iter()
            .enumerate()
            .map(|(i, &name)| (name, i as ItemId))
            .collect();

        let mut doc_ids = Vec::with_capacity(entries.len());
        let mut transactions = Vec::with_capacity(entries.len());
        let mut index = vec![Vec::new(); items.len()];
        for (tid, (doc_id, entry_items)) in entries.iter().enumerate() {
            let ids: BTreeSet<ItemId> =
                entry_items.iter().map(|s| id_of[s.as_ref()]).collect();
            for &id in &ids {
                index[id as usize].push(tid as u32);
            }
            doc_ids.push(doc_id.clone());
            transactions.push(ids.into_iter().collect());
        }
        TransactionSet { doc_ids, transactions, items, index }
    }

    pub fn from_keyword_lists(lists: &[KeywordList]) -> Self {
        TransactionSet::new(
            lists
                .iter()
                .map(|l| (l.doc_id.clone(), l.keywords().collect::<Vec<_>>()))
                .collect(),
        )
    }

    pub fn n_docs(&self) -> usize {
        self.transactions.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn item_name(&self, id: ItemId) -> &str {
        &self.items[id as usize]
    }

    pub fn item_id(&self, name: &str) -> Option<ItemId> {
        self.items
            .binary_search_by(|probe| probe.as_str().cmp(name))
            .ok()
            .map(|i| i as ItemId)
    }

    /// Sorted ids of the transactions containing `id`.
    pub fn postings(&self, id: ItemId) -> &[u32] {
        &self.index[id as usize]
    }

    pub fn transactions(&self) -> &[Vec<ItemId>] {
        &self.transactions
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// Number of transactions containing the item, 0 for unknown items.
    pub fn containing(&self, name: &str) -> usize {
        self.item_id(name).map_or(0, |id| self.postings(id).len())
    }
}

/// Frequent itemsets with their exact transaction counts. Itemset keys are
/// sorted id vectors; anti-monotonicity holds by construction (every subset
/// of a stored itemset is stored too).
#[derive(Debug, Clone)]
pub struct FrequentItemsets {
    counts: HashMap<Vec<ItemId>, u32>,
    n_docs: u32,
}

impl FrequentItemsets {
    pub fn count(&self, itemset: &[ItemId]) -> Option<u32> {
        self.counts.get(itemset).copied()
    }

    pub fn n_docs(&self) -> u32 {
        self.n_docs
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[ItemId], u32)> {
        self.counts.iter().map(|(set, &c)| (set.as_slice(), c))
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Smallest count whose support clears `min_support` under the same
/// floating-point comparison used everywhere else.
fn min_count_for(min_support: f64, n: usize) -> u32 {
    let nf = n as f64;
    let mut c = (min_support * nf).ceil().max(1.0) as u32;
    while c > 1 && (c - 1) as f64 / nf >= min_support {
        c -= 1;
    }
    while (c as f64) / nf < min_support {
        c += 1;
    }
    c
}

/// All itemsets of size 1..=max_len with support >= min_support, counted
/// exactly. Level-wise search: level 2 is counted per transaction, deeper
/// levels intersect the posting lists of their two generating subsets, and
/// candidates with any infrequent subset are pruned before counting.
pub fn frequent_itemsets(
    ts: &TransactionSet,
    min_support: f64,
    max_len: usize,
) -> Result<FrequentItemsets> {
    let n = ts.n_docs();
    if n == 0 {
        return Err(Error::domain("transaction set is empty"));
    }
    if !(min_support > 0.0 && min_support <= 1.0) {
        return Err(Error::domain("min_support must lie in (0, 1]"));
    }
    if max_len == 0 {
        return Err(Error::domain("max_len must be at least 1"));
    }
    let min_count = min_count_for(min_support, n);
    let mut counts: HashMap<Vec<ItemId>, u32> = HashMap::new();

    // level 1 straight off the inverted index
    let mut frequent_items: Vec<ItemId> = Vec::new();
    for id in 0..ts.n_items() as ItemId {
        let count = ts.postings(id).len() as u32;
        if count >= min_count {
            counts.insert(vec![id], count);
            frequent_items.push(id);
        }
    }
    let result = |counts| {
        Ok(FrequentItemsets { counts, n_docs: n as u32 })
    };
    if max_len == 1 || frequent_items.len() < 2 {
        return result(counts);
    }

    // level 2: enumerate co-occurring pairs of frequent items per
    // transaction, then sort-and-count; this touches each pair occurrence
    // once instead of intersecting postings for every candidate pair
    let is_frequent: Vec<bool> = {
        let mut flags = vec![false; ts.n_items()];
        for &id in &frequent_items {
            flags[id as usize] = true;
        }
        flags
    };
    let mut pair_keys: Vec<u64> = Vec::new();
    for transaction in ts.transactions() {
        let present: Vec<ItemId> = transaction
            .iter()
            .copied()
            .filter(|&id| is_frequent[id as usize])
            .collect();
        for i in 0..present.len() {
            for j in i + 1..present.len() {
                pair_keys.push((present[i] as u64) << 32 | present[j] as u64);
            }
        }
    }
    pair_keys.sort_unstable();
    let mut level: Vec<(Vec<ItemId>, Vec<u32>)> = Vec::new();
    let mut i = 0;
    while i < pair_keys.len() {
        let key = pair_keys[i];
        let mut j = i;
        while j < pair_keys.len() && pair_keys[j] == key {
            j += 1;
        }
        if (j - i) as u32 >= min_count {
            let pair = vec![(key >> 32) as ItemId, key as ItemId];
            counts.insert(pair.clone(), (j - i) as u32);
            if max_len > 2 {
                let tids = intersect(ts.postings(pair[0]), ts.postings(pair[1]));
                debug_assert_eq!(tids.len(), j - i);
                level.push((pair, tids));
            }
        }
        i = j;
    }

    // levels 3..=max_len: join sorted (k-1)-itemsets sharing a (k-2)-prefix
    for depth in 3..=max_len {
        if level.len() < 2 {
            break;
        }
        level.sort_by(|a, b| a.0.cmp(&b.0));
        let mut next: Vec<(Vec<ItemId>, Vec<u32>)> = Vec::new();
        let prefix_len = depth - 2;
        let mut start = 0;
        while start < level.len() {
            let mut end = start;
            while end < level.len() && level[end].0[..prefix_len] == level[start].0[..prefix_len]
            {
                end += 1;
            }
            for a in start..end {
                for b in a + 1..end {
                    let mut candidate = level[a].0.clone();
                    candidate.push(level[b].0[prefix_len]);
                    if !all_proper_subsets_frequent(&candidate, &counts) {
                        continue;
                    }
                    let tids = intersect(&level[a].1, &level[b].1);
                    if tids.len() as u32 >= min_count {
                        counts.insert(candidate.clone(), tids.len() as u32);
                        next.push((candidate, tids));
                    }
                }
            }
            start = end;
        }
        level = next;
    }

    result(counts)
}

/// The two subsets obtained by dropping one of the last two positions are
/// the join parents and known frequent; check the rest.
fn all_proper_subsets_frequent(candidate: &[ItemId], counts: &HashMap<Vec<ItemId>, u32>) -> bool {
    let mut subset = Vec::with_capacity(candidate.len() - 1);
    for skip in 0..candidate.len() - 2 {
        subset.clear();
        subset.extend(
            candidate
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &id)| id),
        );
        if !counts.contains_key(subset.as_slice()) {
            return false;
        }
    }
    true
}

/// An association rule lhs -> rhs with its exact transaction count and the
/// three standard measures. `lhs` is sorted lexicographically; `support <=
/// confidence` always holds since the antecedent count cannot exceed the
/// transaction total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationRule {
    pub lhs: Vec<String>,
    pub rhs: String,
    pub count: u64,
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
}

impl AssociationRule {
    pub fn lhs_joined(&self) -> String {
        self.lhs.join("+")
    }

    pub fn mentions(&self, item: &str) -> bool {
        self.rhs == item || self.lhs.iter().any(|l| l == item)
    }
}

/// Support, confidence, and lift from raw counts: the joint count of the
/// whole itemset, the antecedent and consequent counts, and the transaction
/// total. Fails on count combinations no transaction set can produce.
pub fn rule_measures(
    joint_count: u64,
    lhs_count: u64,
    rhs_count: u64,
    n_transactions: u64,
) -> Result<(f64, f64, f64)> {
    if n_transactions == 0 {
        return Err(Error::domain("transaction total must be positive"));
    }
    if lhs_count == 0 || rhs_count == 0 {
        return Err(Error::domain("antecedent and consequent counts must be positive"));
    }
    if joint_count > lhs_count || joint_count > rhs_count {
        return Err(Error::domain(format!(
            "joint count {joint_count} exceeds a marginal ({lhs_count}, {rhs_count})"
        )));
    }
    if lhs_count > n_transactions || rhs_count > n_transactions {
        return Err(Error::domain("marginal count exceeds the transaction total"));
    }
    let n = n_transactions as f64;
    let support = joint_count as f64 / n;
    let confidence = joint_count as f64 / lhs_count as f64;
    let lift = joint_count as f64 * n / (lhs_count as f64 * rhs_count as f64);
    Ok((support, confidence, lift))
}

/// Emit every rule `itemset \ {item} -> item` over the frequent itemsets
/// whose confidence clears the threshold. Rules from different itemsets are
/// deliberately kept even when one projects onto another. The result is in
/// the total order of [`sort_rules`].
pub fn generate_rules(
    frequent: &FrequentItemsets,
    ts: &TransactionSet,
    cfg: &MiningConfig,
) -> Result<Vec<AssociationRule>> {
    cfg.validate()?;
    let n = frequent.n_docs() as u64;
    let mut rules = Vec::new();
    let mut lhs_ids: Vec<ItemId> = Vec::new();
    for (itemset, joint) in frequent.iter() {
        if itemset.len() < 2 || itemset.len() > cfg.max_rule_len {
            continue;
        }
        for pos in 0..itemset.len() {
            lhs_ids.clear();
            lhs_ids.extend_from_slice(&itemset[..pos]);
            lhs_ids.extend_from_slice(&itemset[pos + 1..]);
            let rhs = itemset[pos];
            let lhs_count = frequent.count(&lhs_ids).ok_or_else(|| {
                Error::Inconsistency(format!(
                    "antecedent of frequent itemset {itemset:?} is not stored"
                ))
            })? as u64;
            let rhs_count = frequent.count(&[rhs]).ok_or_else(|| {
                Error::Inconsistency(format!(
                    "item {rhs} of frequent itemset {itemset:?} is not stored"
                ))
            })? as u64;
            let (support, confidence, lift) =
                rule_measures(joint as u64, lhs_count, rhs_count, n)?;
            if confidence >= cfg.min_confidence {
                rules.push(AssociationRule {
                    lhs: lhs_ids.iter().map(|&id| ts.item_name(id).to_string()).collect(),
                    rhs: ts.item_name(rhs).to_string(),
                    count: joint as u64,
                    support,
                    confidence,
                    lift,
                });
            }
        }
    }
    sort_rules(&mut rules);
    Ok(rules)
}

/// Frequent-itemset search plus rule generation in one call.
pub fn mine(ts: &TransactionSet, cfg: &MiningConfig) -> Result<Vec<AssociationRule>> {
    cfg.validate()?;
    let frequent = frequent_itemsets(ts, cfg.min_support, cfg.max_rule_len)?;
    generate_rules(&frequent, ts, cfg)
}

/// Total order on rules: lift descending, then support descending, then
/// count descending, then ("+"-joined antecedent, consequent) ascending.
pub fn sort_rules(rules: &mut [AssociationRule]) {
    rules.sort_unstable_by(|a, b| {
        b.lift
            .total_cmp(&a.lift)
            .then_with(|| b.support.total_cmp(&a.support))
            .then_with(|| b.count.cmp(&a.count))
            .then_with(|| a.lhs_joined().cmp(&b.lhs_joined()))
            .then_with(|| a.rhs.cmp(&b.rhs))
    });
}

/// Rule predicates used for report filtering.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleFilter {
    /// Keep rules mentioning the item on either side.
    ContainsItem(String),
    MinLift(f64),
    MinSupport(f64),
    MinCount(u64),
}

impl RuleFilter {
    pub fn matches(&self, rule: &AssociationRule) -> bool {
        match self {
            RuleFilter::ContainsItem(item) => rule.mentions(item),
            RuleFilter::MinLift(x) => rule.lift >= *x,
            RuleFilter::MinSupport(x) => rule.support >= *x,
            RuleFilter::MinCount(x) => rule.count >= *x,
        }
    }
}

/// Order-preserving filter.
pub fn filter_rules(rules: &[AssociationRule], filter: &RuleFilter) -> Vec<AssociationRule> {
    rules.iter().filter(|r| filter.matches(r)).cloned().collect()
}

/// Items appearing in some rule of `a` but no rule of `b`, and vice versa.
pub fn unique_items(
    a: &[AssociationRule],
    b: &[AssociationRule],
) -> (BTreeSet<String>, BTreeSet<String>) {
    let items = |rules: &[AssociationRule]| -> BTreeSet<String> {
        rules
            .iter()
            .flat_map(|r| r.lhs.iter().chain(std::iter::once(&r.rhs)))
            .cloned()
            .collect()
    };
    let items_a = items(a);
    let items_b = items(b);
    let only_a = items_a.difference(&items_b).cloned().collect();
    let only_b = items_b.difference(&items_a).cloned().collect();
    (only_a, only_b)
}

pub(crate) fn format_real(x: f64) -> String {
    format!("{x:.6}")
}

/// CSV with header `lhs,rhs,count,support,confidence,lift`; antecedent items
/// joined by "+" (already in lexicographic order), reals with six digits
/// after the point.
pub fn write_rules_csv<W: Write>(rules: &[AssociationRule], writer: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["lhs", "rhs", "count", "support", "confidence", "lift"])?;
    for rule in rules {
        csv.write_record([
            rule.lhs_joined(),
            rule.rhs.clone(),
            rule.count.to_string(),
            format_real(rule.support),
            format_real(rule.confidence),
            format_real(rule.lift),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// JSON array of rules with exact integer counts and full-precision reals;
/// the inverse of [`read_rules_json`].
pub fn write_rules_json<W: Write>(rules: &[AssociationRule], mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, rules)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_rules_json<R: std::io::Read>(reader: R) -> Result<Vec<AssociationRule>> {
    Ok(serde_json::from_reader(reader)?)
}
