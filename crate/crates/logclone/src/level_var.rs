//! Verbosity-level and variable prediction from the evidence clone.

use crate::corpus::{LogPrintStatement, MethodDefinition};
use crate::error::{Error, Result};
use crate::level::Level;
use crate::token::{classify, tokenize, TokenKind};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelRule {
    SingleClone,
    Majority,
    SeverityTiebreak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelPrediction {
    pub target: String,
    pub level: Level,
    pub rule: LevelRule,
    /// Weight of the chosen level over the total vote weight.
    pub support: f64,
}

/// Vote with the levels of the logged clones, weighted by pair similarity.
/// A single vote is passed through; ties pick the more severe level.
pub fn predict_level(target: &str, votes: &[(f64, Level)]) -> Result<LevelPrediction> {
    if votes.is_empty() {
        return Err(Error::EmptyVote);
    }
    if votes.len() == 1 {
        return Ok(LevelPrediction {
            target: target.to_string(),
            level: votes[0].1,
            rule: LevelRule::SingleClone,
            support: 1.0,
        });
    }
    let mut weights: BTreeMap<Level, f64> = BTreeMap::new();
    let mut total = 0.0;
    for &(sim, level) in votes {
        *weights.entry(level).or_insert(0.0) += sim;
        total += sim;
    }
    let best = weights.values().cloned().fold(f64::MIN, f64::max);
    let winners: Vec<Level> = weights
        .iter()
        .filter(|(_, &w)| w == best)
        .map(|(&l, _)| l)
        .collect();
    let tie = winners.len() > 1;
    let level = *winners.iter().max().expect("nonempty winners");
    Ok(LevelPrediction {
        target: target.to_string(),
        level,
        rule: if tie {
            LevelRule::SeverityTiebreak
        } else {
            LevelRule::Majority
        },
        support: best / total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    MatchedInTarget,
    CloneOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedVariable {
    pub name: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariablePrediction {
    pub target: String,
    pub variables: Vec<PredictedVariable>,
}

/// Map each variable of the evidence LPS onto the target: exact identifier
/// occurrence first, then the closest identifier by normalized edit
/// distance (at most 0.34), otherwise the clone's own identifier.
pub fn predict_variables(
    target: &MethodDefinition,
    evidence_lps: &LogPrintStatement,
) -> VariablePrediction {
    let idents: BTreeSet<&str> = target
        .tokens_full
        .iter()
        .filter(|t| classify(t) == TokenKind::Ident)
        .map(String::as_str)
        .collect();

    let mut variables = Vec::new();
    for expr in &evidence_lps.variables {
        let base = base_identifier(expr);
        let Some(base) = base else {
            variables.push(PredictedVariable {
                name: expr.clone(),
                provenance: Provenance::CloneOnly,
            });
            continue;
        };
        if idents.contains(base.as_str()) {
            variables.push(PredictedVariable {
                name: base,
                provenance: Provenance::MatchedInTarget,
            });
            continue;
        }
        let fuzzy = idents
            .iter()
            .map(|id| (normalized_edit_distance(&base, id), *id))
            .filter(|(d, _)| *d <= 0.34)
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.cmp(b.1)));
        match fuzzy {
            Some((_, id)) => variables.push(PredictedVariable {
                name: id.to_string(),
                provenance: Provenance::MatchedInTarget,
            }),
            None => variables.push(PredictedVariable {
                name: base,
                provenance: Provenance::CloneOnly,
            }),
        }
    }
    VariablePrediction {
        target: target.method_id.clone(),
        variables,
    }
}

/// First identifier token of a variable expression (`user.getId()` → user).
fn base_identifier(expr: &str) -> Option<String> {
    tokenize(expr)
        .into_iter()
        .find(|t| t.kind == TokenKind::Ident)
        .map(|t| t.text)
}

fn normalized_edit_distance(a: &str, b: &str) -> f64 {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()] as f64 / a.len().max(b.len()) as f64
}
