//! Descendant-set assessment of inferred networks.
//!
//! A network (or an ensemble of networks) predicts which nodes lie
//! downstream of an intervention node. The prediction is compared with a
//! gold-standard labelling by AUROC, and methods are aggregated across
//! contexts by their mean rank.

use std::collections::{BTreeMap, BTreeSet};

use crate::dag::{Dag, NodeId};
use crate::error::{Error, Result};

/// Which nodes respond to the intervention. The intervention node itself is
/// never labelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldStandard {
    pub intervention: String,
    /// `true` marks a descendant.
    pub labels: BTreeMap<String, bool>,
}

impl GoldStandard {
    pub fn new(intervention: impl Into<String>, labels: BTreeMap<String, bool>) -> Result<Self> {
        let intervention = intervention.into();
        if labels.contains_key(&intervention) {
            return Err(Error::InvalidArgument(format!(
                "gold standard labels its own intervention node `{intervention}`"
            )));
        }
        let gold = GoldStandard {
            intervention,
            labels,
        };
        if gold.positives() == 0 || gold.negatives() == 0 {
            return Err(Error::DegenerateGold);
        }
        Ok(gold)
    }

    /// Gold standard given by the true descendants of `intervention`; every
    /// other node is a negative.
    pub fn from_dag(dag: &Dag, intervention: NodeId) -> Result<Self> {
        let desc = dag.descendants(intervention);
        let labels = (0..dag.n())
            .filter(|&v| v != intervention)
            .map(|v| (dag.label(v).to_string(), desc.contains(&v)))
            .collect();
        GoldStandard::new(dag.label(intervention), labels)
    }

    pub fn positives(&self) -> usize {
        self.labels.values().filter(|&&p| p).count()
    }

    pub fn negatives(&self) -> usize {
        self.labels.values().filter(|&&p| !p).count()
    }
}

/// Per-node confidence of being a descendant of the intervention node.
pub type NodeConfidence = BTreeMap<String, f64>;

/// Fraction of `networks` in which each node is a descendant of
/// `intervention`. All networks must share labels.
pub fn node_confidence(networks: &[Dag], intervention: NodeId) -> Result<NodeConfidence> {
    let first = networks.first().ok_or(Error::EmptyEnsemble)?;
    if intervention >= first.n() {
        return Err(Error::InvalidArgument(format!(
            "intervention node {intervention} out of range"
        )));
    }
    let mut counts = vec![0usize; first.n()];
    for dag in networks {
        if dag.labels() != first.labels() {
            return Err(Error::InvalidArgument(
                "networks in an ensemble must share labels".to_string(),
            ));
        }
        for v in dag.descendants(intervention) {
            counts[v] += 1;
        }
    }
    let total = networks.len() as f64;
    Ok((0..first.n())
        .filter(|&v| v != intervention)
        .map(|v| (first.label(v).to_string(), counts[v] as f64 / total))
        .collect())
}

/// Mid-ranks (1-based) of `values`, ties sharing the mean of their ranks.
fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Rank-based AUROC: the Mann–Whitney U of positives over negatives divided
/// by `P·N`, ties counting one half.
pub fn auroc_scores(scores: &[f64], positive: &[bool]) -> Result<f64> {
    if scores.len() != positive.len() {
        return Err(Error::Shape(format!(
            "{} scores for {} labels",
            scores.len(),
            positive.len()
        )));
    }
    let p = positive.iter().filter(|&&b| b).count();
    let n = positive.len() - p;
    if p == 0 || n == 0 {
        return Err(Error::DegenerateGold);
    }
    let ranks = midranks(scores);
    let rank_sum: f64 = ranks
        .iter()
        .zip(positive)
        .filter(|(_, &b)| b)
        .map(|(r, _)| r)
        .sum();
    let u = rank_sum - (p * (p + 1)) as f64 / 2.0;
    Ok(u / (p * n) as f64)
}

/// AUROC of `confidence` against the gold labels. Every labelled node needs
/// a confidence.
pub fn auroc(confidence: &NodeConfidence, gold: &GoldStandard) -> Result<f64> {
    let mut scores = Vec::with_capacity(gold.labels.len());
    let mut positive = Vec::with_capacity(gold.labels.len());
    for (label, &is_pos) in &gold.labels {
        let c = confidence
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        scores.push(*c);
        positive.push(is_pos);
    }
    auroc_scores(&scores, &positive)
}

/// AUROC of one method in one context.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextResult {
    pub context: String,
    pub method: String,
    pub auroc: f64,
}

/// Scores an ensemble against a gold standard whose intervention label must
/// name a node of the networks.
pub fn evaluate_context(
    networks: &[Dag],
    gold: &GoldStandard,
    context: &str,
    method: &str,
) -> Result<ContextResult> {
    let first = networks.first().ok_or(Error::EmptyEnsemble)?;
    let intervention = first
        .node_of(&gold.intervention)
        .ok_or_else(|| Error::UnknownLabel(gold.intervention.clone()))?;
    let confidence = node_confidence(networks, intervention)?;
    Ok(ContextResult {
        context: context.to_string(),
        method: method.to_string(),
        auroc: auroc(&confidence, gold)?,
    })
}

/// Mean over contexts of each method's rank by AUROC (1 = best, ties share
/// the mean rank). Every method must appear exactly once in every context.
pub fn mean_rank(results: &[ContextResult]) -> Result<BTreeMap<String, f64>> {
    let methods: BTreeSet<&str> = results.iter().map(|r| r.method.as_str()).collect();
    let mut by_context: BTreeMap<&str, BTreeMap<&str, f64>> = BTreeMap::new();
    for r in results {
        let cell = by_context.entry(r.context.as_str()).or_default();
        if cell.insert(r.method.as_str(), r.auroc).is_some() {
            return Err(Error::InvalidArgument(format!(
                "method `{}` appears twice in context `{}`",
                r.method, r.context
            )));
        }
    }
    let mut sums: BTreeMap<String, f64> = methods.iter().map(|m| (m.to_string(), 0.0)).collect();
    for (context, cells) in &by_context {
        if let Some(missing) = methods.iter().find(|m| !cells.contains_key(*m)) {
            return Err(Error::MissingCell {
                context: context.to_string(),
                method: missing.to_string(),
            });
        }
        let names: Vec<&str> = cells.keys().copied().collect();
        // Descending AUROC: rank the negated values.
        let negated: Vec<f64> = names.iter().map(|m| -cells[m]).collect();
        for (m, r) in names.iter().zip(midranks(&negated)) {
            *sums.get_mut(*m).expect("method registered") += r;
        }
    }
    let contexts = by_context.len() as f64;
    Ok(sums.into_iter().map(|(m, s)| (m, s / contexts)).collect())
}
