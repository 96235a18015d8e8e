//! N-gram model over log statement descriptions.
//!
//! Counts are collected for orders 1..=order with `<s>`/`</s>` padding.
//! Contexts are stored twice when they differ: verbatim, and with singleton
//! tokens (corpus frequency 1) collapsed to `<unk>`. Lookup walks suffixes
//! from the longest, preferring the verbatim form at each length, so exact
//! history always beats the generalized one while rare-token contexts still
//! back into `<unk>`. Scores use stupid backoff (a fixed weight per level
//! stepped down) ending at an add-k unigram, and the final distribution is
//! normalized over the vocabulary.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LmParams {
    pub order: usize,
    pub add_k: f64,
    pub backoff_weight: f64,
}

impl Default for LmParams {
    fn default() -> Self {
        LmParams {
            order: 3,
            add_k: 0.01,
            backoff_weight: 0.4,
        }
    }
}

impl LmParams {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidParam("lm order must be positive".into()));
        }
        if self.add_k <= 0.0 {
            return Err(Error::InvalidParam("lm add_k must be positive".into()));
        }
        if !(self.backoff_weight > 0.0 && self.backoff_weight <= 1.0) {
            return Err(Error::InvalidParam(
                "lm backoff_weight must be in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
struct NextCounts {
    counts: HashMap<String, u64>,
    total: u64,
}

#[derive(Debug, Clone)]
pub struct LsdLanguageModel {
    params: LmParams,
    unigrams: HashMap<String, u64>,
    unigram_total: u64,
    contexts: HashMap<Vec<String>, NextCounts>,
    token_freq: HashMap<String, u64>,
    vocab: BTreeSet<String>,
    trained_on_nothing: bool,
}

impl LsdLanguageModel {
    pub fn params(&self) -> &LmParams {
        &self.params
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocab
    }

    /// True when the model was trained on an empty set and only ever
    /// predicts `</s>`.
    pub fn trained_on_nothing(&self) -> bool {
        self.trained_on_nothing
    }

    fn unk_context(&self, context: &[String]) -> Vec<String> {
        context
            .iter()
            .map(|t| {
                if t == BOS || t == EOS {
                    t.clone()
                } else if self.token_freq.get(t).copied().unwrap_or(0) <= 1 {
                    UNK.to_string()
                } else {
                    t.clone()
                }
            })
            .collect()
    }

    fn unigram_score(&self, token: &str) -> f64 {
        let count = self.unigrams.get(token).copied().unwrap_or(0) as f64;
        (count + self.params.add_k)
            / (self.unigram_total as f64 + self.params.add_k * self.vocab.len() as f64)
    }

    /// Unnormalized backoff score of `token` given the chain of observed
    /// context keys (longest first).
    fn backoff_score(&self, chain: &[&Vec<String>], token: &str) -> f64 {
        match chain.first() {
            None => self.unigram_score(token),
            Some(key) => {
                let next = &self.contexts[*key];
                match next.counts.get(token) {
                    Some(&c) => c as f64 / next.total as f64,
                    None => self.params.backoff_weight * self.backoff_score(&chain[1..], token),
                }
            }
        }
    }

    /// The observed-context chain for a query context: suffixes from the
    /// longest observed one down, verbatim preferred over `<unk>`-collapsed.
    fn context_chain<'m>(&'m self, context: &[String]) -> Vec<&'m Vec<String>> {
        let start = context.len().saturating_sub(self.params.order - 1);
        let trimmed = &context[start..];
        let mut chain = Vec::new();
        let mut len = trimmed.len();
        // Find the longest observed suffix first; below it every shorter
        // suffix of an observed key is itself observed.
        while len > 0 {
            let suffix = trimmed[trimmed.len() - len..].to_vec();
            if let Some((key, _)) = self.contexts.get_key_value(&suffix) {
                chain.push(key);
            } else {
                let unk = self.unk_context(&suffix);
                if let Some((key, _)) = self.contexts.get_key_value(&unk) {
                    chain.push(key);
                } else if chain.is_empty() {
                    len -= 1;
                    continue;
                }
            }
            len -= 1;
        }
        chain
    }

    /// Full normalized distribution over the vocabulary, sorted by
    /// probability descending then token ascending.
    pub fn full_distribution(&self, context: &[String]) -> Vec<(String, f64)> {
        if self.trained_on_nothing {
            return vec![(EOS.to_string(), 1.0)];
        }
        let chain = self.context_chain(context);
        let mut scored: Vec<(String, f64)> = self
            .vocab
            .iter()
            .map(|w| (w.clone(), self.backoff_score(&chain, w)))
            .collect();
        let total: f64 = scored.iter().map(|(_, s)| s).sum();
        for (_, s) in scored.iter_mut() {
            *s /= total;
        }
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        scored
    }

    /// Top-k next tokens. `k` larger than the vocabulary returns it all.
    pub fn next_token_distribution(&self, context: &[String], k: usize) -> Vec<(String, f64)> {
        let mut dist = self.full_distribution(context);
        dist.truncate(k);
        dist
    }

    pub fn to_json(&self) -> String {
        let file = LmFile {
            format: LM_FORMAT.to_string(),
            params: self.params,
            unigrams: self.unigrams.iter().map(|(t, &c)| (t.clone(), c)).collect(),
            token_freq: self
                .token_freq
                .iter()
                .map(|(t, &c)| (t.clone(), c))
                .collect(),
            contexts: {
                let mut entries: Vec<ContextEntry> = self
                    .contexts
                    .iter()
                    .map(|(ctx, next)| ContextEntry {
                        context: ctx.clone(),
                        next: next.counts.iter().map(|(t, &c)| (t.clone(), c)).collect(),
                    })
                    .collect();
                entries.sort_by(|a, b| a.context.cmp(&b.context));
                entries
            },
            trained_on_nothing: self.trained_on_nothing,
        };
        serde_json::to_string_pretty(&file).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LmFile = serde_json::from_str(text).map_err(|e| Error::CorpusFormat {
            line: 0,
            msg: format!("model file: {e}"),
        })?;
        if file.format != LM_FORMAT {
            return Err(Error::InvalidParam(format!(
                "unsupported model format {:?}",
                file.format
            )));
        }
        let unigram_total = file.unigrams.values().sum();
        let mut vocab: BTreeSet<String> = file.token_freq.keys().cloned().collect();
        for s in [BOS, EOS, crate::corpus::VAR_TOKEN, UNK] {
            vocab.insert(s.to_string());
        }
        Ok(LsdLanguageModel {
            params: file.params,
            unigrams: file.unigrams.into_iter().collect(),
            unigram_total,
            contexts: file
                .contexts
                .into_iter()
                .map(|e| {
                    let total = e.next.values().sum();
                    (
                        e.context,
                        NextCounts {
                            counts: e.next.into_iter().collect(),
                            total,
                        },
                    )
                })
                .collect(),
            token_freq: file.token_freq.into_iter().collect(),
            vocab,
            trained_on_nothing: file.trained_on_nothing,
        })
    }
}

const LM_FORMAT: &str = "logclone-lm/1";

#[derive(Serialize, Deserialize)]
struct ContextEntry {
    context: Vec<String>,
    next: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
struct LmFile {
    format: String,
    params: LmParams,
    unigrams: BTreeMap<String, u64>,
    token_freq: BTreeMap<String, u64>,
    contexts: Vec<ContextEntry>,
    trained_on_nothing: bool,
}

/// Train on description token sequences (one per LPS in the train split).
pub fn train_lsd_lm(sequences: &[Vec<String>], params: LmParams) -> Result<LsdLanguageModel> {
    params.validate()?;
    let mut token_freq: HashMap<String, u64> = HashMap::new();
    for seq in sequences {
        for t in seq {
            *token_freq.entry(t.clone()).or_insert(0) += 1;
        }
    }

    let mut vocab: BTreeSet<String> = token_freq.keys().cloned().collect();
    for s in [BOS, EOS, crate::corpus::VAR_TOKEN, UNK] {
        vocab.insert(s.to_string());
    }

    let mut model = LsdLanguageModel {
        params,
        unigrams: HashMap::new(),
        unigram_total: 0,
        contexts: HashMap::new(),
        token_freq,
        vocab,
        trained_on_nothing: sequences.is_empty(),
    };
    if model.trained_on_nothing {
        model.vocab = BTreeSet::from([EOS.to_string()]);
        return Ok(model);
    }

    for seq in sequences {
        let mut padded: Vec<String> = vec![BOS.to_string(); params.order - 1];
        padded.extend(seq.iter().cloned());
        padded.push(EOS.to_string());

        for pos in params.order - 1..padded.len() {
            let next = &padded[pos];
            *model.unigrams.entry(next.clone()).or_insert(0) += 1;
            model.unigram_total += 1;
            for ctx_len in 1..params.order {
                if ctx_len > pos {
                    break;
                }
                let raw: Vec<String> = padded[pos - ctx_len..pos].to_vec();
                let unk = model.unk_context(&raw);
                let bump = |contexts: &mut HashMap<Vec<String>, NextCounts>, key: Vec<String>| {
                    let entry = contexts.entry(key).or_default();
                    *entry.counts.entry(next.clone()).or_insert(0) += 1;
                    entry.total += 1;
                };
                if unk != raw {
                    bump(&mut model.contexts, unk);
                }
                bump(&mut model.contexts, raw);
            }
        }
    }
    Ok(model)
}
