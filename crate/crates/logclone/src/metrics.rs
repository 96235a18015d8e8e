//! Text-similarity metrics for scoring suggested descriptions.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Precision/recall/F1 triple used by the ROUGE metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    fn from_pr(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        RougeScore {
            precision,
            recall,
            f1,
        }
    }
}

/// Smoothing value substituted for zero higher-order precisions.
const BLEU_EPSILON: f64 = 1e-9;

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n && n > 0 {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

fn clipped_overlap(candidate: &[String], reference: &[String], n: usize) -> (usize, usize, usize) {
    let cand = ngram_counts(candidate, n);
    let refs = ngram_counts(reference, n);
    let overlap = cand
        .iter()
        .map(|(g, &c)| c.min(refs.get(g).copied().unwrap_or(0)))
        .sum();
    let cand_total = cand.values().sum();
    let ref_total = refs.values().sum();
    (overlap, cand_total, ref_total)
}

/// Sentence BLEU: geometric mean of clipped n-gram precisions times a
/// brevity penalty.
///
/// Uniform 1/max_n weights. Orders the candidate is too short to produce
/// are skipped, so an exact match scores 1 at any length. A zero unigram
/// precision short-circuits to 0; zero precision at higher orders is
/// replaced by a 1e-9 epsilon.
pub fn bleu(candidate: &[String], reference: &[String], max_n: usize) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    if max_n == 0 {
        return Err(Error::InvalidParam("bleu max_n must be positive".into()));
    }
    if candidate.is_empty() {
        return Ok(0.0);
    }

    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let (overlap, cand_total, _) = clipped_overlap(candidate, reference, n);
        if cand_total == 0 {
            continue;
        }
        let p = overlap as f64 / cand_total as f64;
        if p == 0.0 {
            if n == 1 {
                return Ok(0.0);
            }
            log_sum += BLEU_EPSILON.ln() / max_n as f64;
        } else {
            log_sum += p.ln() / max_n as f64;
        }
    }

    let c = candidate.len() as f64;
    let r = reference.len() as f64;
    let bp = if c >= r { 1.0 } else { (1.0 - r / c).exp() };
    Ok(bp * log_sum.exp())
}

/// ROUGE-N: clipped n-gram overlap as recall against the reference and
/// precision against the candidate.
pub fn rouge_n(candidate: &[String], reference: &[String], n: usize) -> Result<RougeScore> {
    if n == 0 {
        return Err(Error::InvalidParam("rouge n must be positive".into()));
    }
    if reference.len() < n {
        return Err(Error::ReferenceTooShort {
            len: reference.len(),
            n,
        });
    }
    let (overlap, cand_total, ref_total) = clipped_overlap(candidate, reference, n);
    let precision = if cand_total == 0 {
        0.0
    } else {
        overlap as f64 / cand_total as f64
    };
    let recall = overlap as f64 / ref_total as f64;
    Ok(RougeScore::from_pr(precision, recall))
}

/// ROUGE-L: longest common subsequence as recall against the reference and
/// precision against the candidate.
pub fn rouge_l(candidate: &[String], reference: &[String]) -> Result<RougeScore> {
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    if candidate.is_empty() {
        return Err(Error::EmptyCandidate);
    }
    let l = lcs_length(candidate, reference) as f64;
    Ok(RougeScore::from_pr(
        l / candidate.len() as f64,
        l / reference.len() as f64,
    ))
}

fn lcs_length(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
