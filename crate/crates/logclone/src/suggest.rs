//! Description suggestion: clone text verbatim, or blended per position
//! with the description model's next-token distribution.

use crate::corpus::MethodDefinition;
use crate::error::{Error, Result};
use crate::lm::{LsdLanguageModel, BOS, EOS};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BlendParams {
    /// Weight of the clone token at each position; 1 reproduces the clone
    /// text, 0 is pure model generation.
    pub lambda: f64,
    /// Model candidates considered per position.
    pub top_k: usize,
    /// Past the clone text, stop once the model's best probability drops
    /// below this.
    pub tau: f64,
    pub max_len: usize,
}

impl Default for BlendParams {
    fn default() -> Self {
        BlendParams {
            lambda: 0.5,
            top_k: 5,
            tau: 0.0,
            max_len: 32,
        }
    }
}

impl BlendParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::InvalidParam(format!(
                "lambda must be in [0, 1], got {}",
                self.lambda
            )));
        }
        if self.top_k == 0 || self.max_len == 0 {
            return Err(Error::InvalidParam(
                "top_k and max_len must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuggestionSource {
    CloneOnly,
    Hybrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsdSuggestion {
    pub target: String,
    pub tokens: Vec<String>,
    pub source: SuggestionSource,
    pub seed_clone: String,
    pub per_token_scores: Vec<f64>,
}

/// The evidence clone's description(s), verbatim: one suggestion per LPS in
/// line order. This is the clone-only baseline.
pub fn suggest_lsd_clone_only(evidence: &MethodDefinition) -> Result<Vec<Vec<String>>> {
    if !evidence.is_logged() {
        return Err(Error::NoLoggedClone);
    }
    let mut lps: Vec<_> = evidence.lps.iter().collect();
    lps.sort_by_key(|l| l.line);
    Ok(lps.into_iter().map(|l| l.lsd_tokens.clone()).collect())
}

/// Blend one clone description with the model, left to right.
///
/// At position t the candidates are the clone's token at t, the model's
/// top-k continuations, and (past the clone text) the end marker. Each
/// scores `lambda·[is clone token] + (1−lambda)·P`. Ties go to the clone
/// token, then lexicographically. Generation ends on the end marker, past
/// clone exhaustion when the model's best probability falls under tau, or
/// at max_len.
pub fn suggest_lsd_hybrid_one(
    target_id: &str,
    evidence_id: &str,
    clone_lsd: &[String],
    model: &LsdLanguageModel,
    params: BlendParams,
) -> LsdSuggestion {
    let order = model.params().order;
    let mut context: Vec<String> = vec![BOS.to_string(); order.saturating_sub(1)];
    let mut tokens = Vec::new();
    let mut per_token_scores = Vec::new();

    for t in 0..params.max_len {
        let dist = model.full_distribution(&context);
        let lookup = |tok: &str| {
            dist.iter()
                .find(|(w, _)| w == tok)
                .map(|(_, p)| *p)
                .unwrap_or(0.0)
        };

        if t >= clone_lsd.len() {
            let best = dist.first().map(|(_, p)| *p).unwrap_or(0.0);
            if best < params.tau {
                break;
            }
        }

        let mut candidates: Vec<String> =
            dist.iter().take(params.top_k).map(|(w, _)| w.clone()).collect();
        let clone_token = clone_lsd.get(t);
        if let Some(ct) = clone_token {
            if !candidates.contains(ct) {
                candidates.push(ct.clone());
            }
        } else if !candidates.iter().any(|c| c == EOS) {
            candidates.push(EOS.to_string());
        }
        if t == 0 {
            candidates.retain(|c| c != EOS);
        }

        let score = |c: &String| {
            let is_clone = clone_token == Some(c);
            params.lambda * (is_clone as u8 as f64) + (1.0 - params.lambda) * lookup(c)
        };
        let best = candidates
            .iter()
            .max_by(|a, b| {
                score(a)
                    .partial_cmp(&score(b))
                    .unwrap()
                    .then_with(|| {
                        // On a tie prefer the clone token, then the
                        // lexicographically smaller one.
                        let a_clone = clone_token == Some(*a);
                        let b_clone = clone_token == Some(*b);
                        a_clone.cmp(&b_clone).then_with(|| b.cmp(a))
                    })
            })
            .cloned();

        let Some(best) = best else { break };
        if best == EOS {
            break;
        }
        per_token_scores.push(score(&best));
        context.push(best.clone());
        tokens.push(best);
    }

    LsdSuggestion {
        target: target_id.to_string(),
        tokens,
        source: SuggestionSource::Hybrid,
        seed_clone: evidence_id.to_string(),
        per_token_scores,
    }
}

/// One hybrid suggestion per LPS of the evidence clone, in line order.
pub fn suggest_lsd_hybrid(
    target_id: &str,
    evidence: &MethodDefinition,
    model: &LsdLanguageModel,
    params: BlendParams,
) -> Result<Vec<LsdSuggestion>> {
    params.validate()?;
    if !evidence.is_logged() {
        return Err(Error::NoLoggedClone);
    }
    let mut lps: Vec<_> = evidence.lps.iter().collect();
    lps.sort_by_key(|l| l.line);
    Ok(lps
        .into_iter()
        .map(|l| {
            suggest_lsd_hybrid_one(
                target_id,
                &evidence.method_id,
                &l.lsd_tokens,
                model,
                params,
            )
        })
        .collect())
}
