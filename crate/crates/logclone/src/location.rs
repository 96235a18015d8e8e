//! Predict whether a method needs a logging statement from its clones,
//! and evaluate location prediction.
//!
//! The positive rule follows the clone hypothesis: a method is predicted
//! to need a log when at least one of its clones above the threshold is
//! logged. A majority-vote rule is available as a config option. Targets
//! whose token bag is too small to detect abstain; abstentions are
//! reported separately and never folded into the negative class.

use crate::clone::{find_clones, ClonePair, CloneType, CloneIndex};
use crate::corpus::{Corpus, MethodDefinition, Mode};
use crate::error::{Error, Result};
use crate::level::Level;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NeedsLog,
    NoLog,
    Abstain,
}

/// Positive-prediction rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LocationRule {
    /// Any logged clone predicts needs-log.
    #[default]
    AnyLogged,
    /// Logged clones must outnumber unlogged ones.
    Majority,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub method_id: String,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationVerdict {
    pub target: String,
    pub verdict: Verdict,
    pub evidence: Option<Evidence>,
    pub logged_clone_count: usize,
    pub unlogged_clone_count: usize,
}

/// Predict from the clones of `target` in the index. The target's own
/// logging statements are always masked: the query bag is the log-aware
/// one regardless of the index mode.
pub fn predict_location(
    target: &MethodDefinition,
    index: &CloneIndex,
    rule: LocationRule,
) -> LocationVerdict {
    let bag = target.bag(Mode::LogAware);
    match find_clones(&target.method_id, &bag, index) {
        Ok(matches) => verdict_from_matches(&target.method_id, &matches, rule),
        Err(_) => LocationVerdict {
            target: target.method_id.clone(),
            verdict: Verdict::Abstain,
            evidence: None,
            logged_clone_count: 0,
            unlogged_clone_count: 0,
        },
    }
}

/// Derive the verdict from an already-computed match list.
pub fn verdict_from_matches(
    target_id: &str,
    matches: &[crate::clone::CloneMatch],
    rule: LocationRule,
) -> LocationVerdict {
    let logged_clone_count = matches.iter().filter(|m| m.logged).count();
    let unlogged_clone_count = matches.len() - logged_clone_count;
    let positive = match rule {
        LocationRule::AnyLogged => logged_clone_count >= 1,
        LocationRule::Majority => logged_clone_count > unlogged_clone_count,
    };
    // Matches are sorted by similarity then id, so the first logged one is
    // the strongest evidence.
    let evidence = if positive {
        matches.iter().find(|m| m.logged).map(|m| Evidence {
            method_id: m.method_id.clone(),
            similarity: m.similarity,
        })
    } else {
        None
    };
    LocationVerdict {
        target: target_id.to_string(),
        verdict: if positive {
            Verdict::NeedsLog
        } else {
            Verdict::NoLog
        },
        evidence,
        logged_clone_count,
        unlogged_clone_count,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    #[serde(rename = "tp")]
    pub true_pos: u64,
    #[serde(rename = "fp")]
    pub false_pos: u64,
    #[serde(rename = "tn")]
    pub true_neg: u64,
    #[serde(rename = "fn")]
    pub false_neg: u64,
    pub abstained: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocationMetrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub balanced_accuracy: Option<f64>,
}

impl ConfusionCounts {
    pub fn record(&mut self, truth: bool, verdict: Verdict) {
        match (verdict, truth) {
            (Verdict::Abstain, _) => self.abstained += 1,
            (Verdict::NeedsLog, true) => self.true_pos += 1,
            (Verdict::NeedsLog, false) => self.false_pos += 1,
            (Verdict::NoLog, true) => self.false_neg += 1,
            (Verdict::NoLog, false) => self.true_neg += 1,
        }
    }

    /// Divisions with a zero denominator yield `None`, never 0.
    pub fn metrics(&self) -> LocationMetrics {
        let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
        let precision = ratio(self.true_pos, self.true_pos + self.false_pos);
        let recall = ratio(self.true_pos, self.true_pos + self.false_neg);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            _ => None,
        };
        let tnr = ratio(self.true_neg, self.true_neg + self.false_pos);
        let balanced_accuracy = match (recall, tnr) {
            (Some(tpr), Some(tnr)) => Some((tpr + tnr) / 2.0),
            _ => None,
        };
        LocationMetrics {
            precision,
            recall,
            f1,
            balanced_accuracy,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocationEval {
    pub counts: ConfusionCounts,
    pub metrics: LocationMetrics,
    pub verdicts: Vec<LocationVerdict>,
}

/// Evaluate location prediction for an explicit train/test partition.
/// The index is built over the train side only; a test id found in the
/// index is a leak and aborts.
pub fn evaluate_with_partition(
    train: &Corpus,
    test: &Corpus,
    index: &CloneIndex,
    rule: LocationRule,
) -> Result<LocationEval> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let train_ids: HashSet<&str> = train.methods.iter().map(|m| m.method_id.as_str()).collect();
    for t in &test.methods {
        if index.contains(&t.method_id) && !train_ids.contains(t.method_id.as_str()) {
            return Err(Error::SplitLeak(t.method_id.clone()));
        }
        if train_ids.contains(t.method_id.as_str()) {
            return Err(Error::SplitLeak(t.method_id.clone()));
        }
    }

    let mut counts = ConfusionCounts::default();
    let mut verdicts = Vec::with_capacity(test.len());
    for target in &test.methods {
        let verdict = predict_location(target, index, rule);
        counts.record(target.is_logged(), verdict.verdict);
        verdicts.push(verdict);
    }
    Ok(LocationEval {
        counts,
        metrics: counts.metrics(),
        verdicts,
    })
}

/// Split the corpus with the given spec, index the train side, and
/// evaluate location prediction on the test side.
pub fn evaluate_location(
    corpus: &Corpus,
    spec: crate::split::SplitSpec,
    params: crate::clone::CloneParams,
    rule: LocationRule,
) -> Result<LocationEval> {
    let (train, test) = crate::split::split_corpus(corpus, spec)?;
    let index = crate::clone::build_index(&train, params)?;
    evaluate_with_partition(&train, &test, &index, rule)
}

/// Logging-consistency statistics over a set of clone pairs: how often both
/// sides agree on log presence, how often both-logged pairs use the same
/// level set, and how the pairs distribute over clone-type bands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub pair_count: usize,
    pub zero_pairs: bool,
    pub presence_consistency: Option<f64>,
    pub both_logged_pairs: usize,
    pub level_match_rate: Option<f64>,
    pub clone_type_counts: BTreeMap<CloneType, usize>,
    pub clone_type_shares: BTreeMap<CloneType, f64>,
}

pub fn consistency_report(corpus: &Corpus, pairs: &[ClonePair]) -> ConsistencyReport {
    let mut clone_type_counts: BTreeMap<CloneType, usize> = BTreeMap::new();
    if pairs.is_empty() {
        return ConsistencyReport {
            pair_count: 0,
            zero_pairs: true,
            presence_consistency: None,
            both_logged_pairs: 0,
            level_match_rate: None,
            clone_type_counts,
            clone_type_shares: BTreeMap::new(),
        };
    }

    let levels = |id: &str| -> Option<(bool, BTreeSet<Level>)> {
        corpus.get(id).map(|m| {
            (
                m.is_logged(),
                m.lps.iter().map(|l| l.level).collect::<BTreeSet<_>>(),
            )
        })
    };

    let mut agree = 0usize;
    let mut both_logged = 0usize;
    let mut level_match = 0usize;
    for pair in pairs {
        *clone_type_counts.entry(pair.clone_type).or_insert(0) += 1;
        let (Some((l_logged, l_levels)), Some((r_logged, r_levels))) =
            (levels(&pair.left), levels(&pair.right))
        else {
            continue;
        };
        if l_logged == r_logged {
            agree += 1;
        }
        if l_logged && r_logged {
            both_logged += 1;
            if l_levels == r_levels {
                level_match += 1;
            }
        }
    }

    let clone_type_shares = clone_type_counts
        .iter()
        .map(|(&t, &c)| (t, c as f64 / pairs.len() as f64))
        .collect();
    ConsistencyReport {
        pair_count: pairs.len(),
        zero_pairs: false,
        presence_consistency: Some(agree as f64 / pairs.len() as f64),
        both_logged_pairs: both_logged,
        level_match_rate: (both_logged > 0).then(|| level_match as f64 / both_logged as f64),
        clone_type_counts,
        clone_type_shares,
    }
}
