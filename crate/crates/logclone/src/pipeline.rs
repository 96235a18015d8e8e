//! End-to-end experiment driver: split, index the train side, train the
//! description model, predict over the test side, score suggestions, and
//! emit a versioned report.

use crate::clone::{build_index, find_clones, CloneParams};
use crate::corpus::{Corpus, MethodDefinition, Mode};
use crate::error::{Error, Result};
use crate::level_var::{predict_level, predict_variables};
use crate::lm::{train_lsd_lm, LmParams, LsdLanguageModel};
use crate::location::{
    verdict_from_matches, ConfusionCounts, LocationMetrics, LocationRule, LocationVerdict, Verdict,
};
use crate::metrics::{bleu, rouge_l, rouge_n, RougeScore};
use crate::split::{split_corpus, SplitSpec};
use crate::suggest::{
    suggest_lsd_clone_only, suggest_lsd_hybrid, BlendParams, SuggestionSource,
};
use serde::Serialize;
use std::collections::HashSet;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

pub const REPORT_SCHEMA: &str = "logclone-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct PipelineConfig {
    pub corpus: String,
    pub split: SplitSpec,
    pub clone: CloneParams,
    pub rule: LocationRule,
    pub lm: LmParams,
    pub blend: BlendParams,
}

impl PipelineConfig {
    pub fn new(corpus: impl Into<String>) -> Self {
        PipelineConfig {
            corpus: corpus.into(),
            split: SplitSpec::default(),
            clone: CloneParams::default(),
            rule: LocationRule::default(),
            lm: LmParams::default(),
            blend: BlendParams::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocationSection {
    pub counts: ConfusionCounts,
    pub metrics: LocationMetrics,
}

/// Aggregate description scores: macro averages of the per-item records.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct DescriptionAggregates {
    pub bleu1: f64,
    pub bleu2: f64,
    pub bleu3: f64,
    pub bleu4: f64,
    pub rouge1: RougeScore,
    pub rouge_l: RougeScore,
    pub items: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DescriptionItem {
    pub target: String,
    pub mode: SuggestionSource,
    pub seed_clone: String,
    pub suggestion: Vec<String>,
    pub reference: Vec<String>,
    pub bleu1: f64,
    pub bleu2: f64,
    pub bleu3: f64,
    pub bleu4: f64,
    pub rouge1: RougeScore,
    pub rouge_l: RougeScore,
}

#[derive(Debug, Clone, Serialize)]
pub struct DescriptionSection {
    /// Set when no suggestion could be scored (for example when no logged
    /// test method was predicted to need a log).
    pub empty_marker: Option<String>,
    pub clone_only: Option<DescriptionAggregates>,
    pub hybrid: Option<DescriptionAggregates>,
    pub items: Vec<DescriptionItem>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelSection {
    pub predicted: usize,
    pub matched: usize,
    pub match_rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub schema: String,
    /// Unix seconds; the only field allowed to differ between identical runs.
    pub generated_at: u64,
    pub config: PipelineConfig,
    pub location: LocationSection,
    pub description: DescriptionSection,
    pub levels: LevelSection,
    pub verdicts: Vec<LocationVerdict>,
}

/// A full per-target answer, as printed by the suggest command.
#[derive(Debug, Clone, Serialize)]
pub struct Suggestion {
    pub target: String,
    pub verdict: Verdict,
    pub evidence: Option<crate::location::Evidence>,
    pub confidence: Option<f64>,
    pub clone_only: Vec<Vec<String>>,
    pub hybrid: Vec<Vec<String>>,
    pub level: Option<crate::level::Level>,
    pub level_support: Option<f64>,
    pub level_rule: Option<crate::level_var::LevelRule>,
    pub variables: Vec<crate::level_var::PredictedVariable>,
}

pub fn run_pipeline<P: AsRef<Path>>(corpus_path: P, config: &PipelineConfig) -> Result<EvalReport> {
    let corpus = Corpus::read_jsonl(corpus_path)?;
    run_pipeline_on(&corpus, config)
}

/// Run the pipeline on an already-loaded corpus with a seeded random split.
pub fn run_pipeline_on(corpus: &Corpus, config: &PipelineConfig) -> Result<EvalReport> {
    let (train, test) = split_corpus(corpus, config.split)?;
    run_pipeline_partitioned(&train, &test, config)
}

/// Run the pipeline on an explicit train/test partition.
pub fn run_pipeline_partitioned(
    train: &Corpus,
    test: &Corpus,
    config: &PipelineConfig,
) -> Result<EvalReport> {
    config.clone.validate()?;
    config.blend.validate()?;
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }

    let index = build_index(train, config.clone)?;
    // Train/test hygiene: a test id in the index is a leak.
    let train_ids: HashSet<&str> = train.methods.iter().map(|m| m.method_id.as_str()).collect();
    for t in &test.methods {
        if train_ids.contains(t.method_id.as_str()) || index.contains(&t.method_id) {
            return Err(Error::SplitLeak(t.method_id.clone()));
        }
    }

    let model = train_lm_on(train, config.lm)?;

    let mut counts = ConfusionCounts::default();
    let mut verdicts = Vec::with_capacity(test.len());
    let mut items: Vec<DescriptionItem> = Vec::new();
    let mut level_predicted = 0usize;
    let mut level_matched = 0usize;

    for target in &test.methods {
        let bag = target.bag(Mode::LogAware);
        let matches = find_clones(&target.method_id, &bag, &index).ok();
        let verdict = match &matches {
            Some(m) => verdict_from_matches(&target.method_id, m, config.rule),
            None => LocationVerdict {
                target: target.method_id.clone(),
                verdict: Verdict::Abstain,
                evidence: None,
                logged_clone_count: 0,
                unlogged_clone_count: 0,
            },
        };
        counts.record(target.is_logged(), verdict.verdict);

        if target.is_logged() && verdict.verdict == Verdict::NeedsLog {
            let evidence_id = verdict
                .evidence
                .as_ref()
                .expect("needs-log verdicts carry evidence")
                .method_id
                .clone();
            let evidence = train
                .get(&evidence_id)
                .ok_or_else(|| Error::UnknownMethod(evidence_id.clone()))?;

            let references: Vec<&Vec<String>> = target
                .lps
                .iter()
                .filter(|l| !l.lsd_tokens.is_empty())
                .map(|l| &l.lsd_tokens)
                .collect();
            if !references.is_empty() {
                for tokens in suggest_lsd_clone_only(evidence)? {
                    items.push(score_item(
                        &target.method_id,
                        SuggestionSource::CloneOnly,
                        &evidence_id,
                        tokens,
                        &references,
                    )?);
                }
                for s in suggest_lsd_hybrid(&target.method_id, evidence, &model, config.blend)? {
                    items.push(score_item(
                        &target.method_id,
                        SuggestionSource::Hybrid,
                        &evidence_id,
                        s.tokens,
                        &references,
                    )?);
                }
            }

            // Level vote over every logged clone's statements.
            let mut votes = Vec::new();
            if let Some(matches) = &matches {
                for m in matches.iter().filter(|m| m.logged) {
                    if let Some(method) = train.get(&m.method_id) {
                        for lps in &method.lps {
                            votes.push((m.similarity, lps.level));
                        }
                    }
                }
            }
            if let Ok(pred) = predict_level(&target.method_id, &votes) {
                level_predicted += 1;
                if target.lps.iter().any(|l| l.level == pred.level) {
                    level_matched += 1;
                }
            }
        }

        verdicts.push(verdict);
    }

    let section_for = |mode: SuggestionSource| -> Option<DescriptionAggregates> {
        let selected: Vec<&DescriptionItem> = items.iter().filter(|i| i.mode == mode).collect();
        if selected.is_empty() {
            return None;
        }
        let n = selected.len() as f64;
        let mean = |f: &dyn Fn(&DescriptionItem) -> f64| selected.iter().map(|i| f(i)).sum::<f64>() / n;
        Some(DescriptionAggregates {
            bleu1: mean(&|i| i.bleu1),
            bleu2: mean(&|i| i.bleu2),
            bleu3: mean(&|i| i.bleu3),
            bleu4: mean(&|i| i.bleu4),
            rouge1: RougeScore {
                precision: mean(&|i| i.rouge1.precision),
                recall: mean(&|i| i.rouge1.recall),
                f1: mean(&|i| i.rouge1.f1),
            },
            rouge_l: RougeScore {
                precision: mean(&|i| i.rouge_l.precision),
                recall: mean(&|i| i.rouge_l.recall),
                f1: mean(&|i| i.rouge_l.f1),
            },
            items: selected.len(),
        })
    };

    Ok(EvalReport {
        schema: REPORT_SCHEMA.to_string(),
        generated_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config: config.clone(),
        location: LocationSection {
            metrics: counts.metrics(),
            counts,
        },
        description: DescriptionSection {
            empty_marker: items
                .is_empty()
                .then(|| "no_scored_suggestions".to_string()),
            clone_only: section_for(SuggestionSource::CloneOnly),
            hybrid: section_for(SuggestionSource::Hybrid),
            items,
        },
        levels: LevelSection {
            predicted: level_predicted,
            matched: level_matched,
            match_rate: (level_predicted > 0)
                .then(|| level_matched as f64 / level_predicted as f64),
        },
        verdicts,
    })
}

/// Train the description model on the train split's LSD sequences.
pub fn train_lm_on(train: &Corpus, params: LmParams) -> Result<LsdLanguageModel> {
    let sequences: Vec<Vec<String>> = train
        .methods
        .iter()
        .flat_map(|m| m.lps.iter().map(|l| l.lsd_tokens.clone()))
        .collect();
    train_lsd_lm(&sequences, params)
}

/// Score one suggestion against the best-matching reference (the one
/// maximizing 4-gram BLEU; ties go to the earliest statement).
fn score_item(
    target: &str,
    mode: SuggestionSource,
    seed_clone: &str,
    suggestion: Vec<String>,
    references: &[&Vec<String>],
) -> Result<DescriptionItem> {
    let mut best: Option<(f64, &Vec<String>)> = None;
    for r in references {
        let score = bleu(&suggestion, r, 4)?;
        if best.map(|(b, _)| score > b).unwrap_or(true) {
            best = Some((score, r));
        }
    }
    let reference = best.expect("references are nonempty").1.clone();

    let zeros = RougeScore {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    };
    let (rouge1, rl) = if suggestion.is_empty() {
        (zeros, zeros)
    } else {
        (
            rouge_n(&suggestion, &reference, 1)?,
            rouge_l(&suggestion, &reference)?,
        )
    };
    Ok(DescriptionItem {
        target: target.to_string(),
        mode,
        seed_clone: seed_clone.to_string(),
        bleu1: bleu(&suggestion, &reference, 1)?,
        bleu2: bleu(&suggestion, &reference, 2)?,
        bleu3: bleu(&suggestion, &reference, 3)?,
        bleu4: bleu(&suggestion, &reference, 4)?,
        rouge1,
        rouge_l: rl,
        suggestion,
        reference,
    })
}

/// Full suggestion for one target against a knowledge-base corpus: verdict,
/// descriptions from both modes, level, and variables.
pub fn suggest_for_target(
    target: &MethodDefinition,
    knowledge: &Corpus,
    index: &crate::clone::CloneIndex,
    model: &LsdLanguageModel,
    rule: LocationRule,
    blend: BlendParams,
) -> Result<Suggestion> {
    let bag = target.bag(Mode::LogAware);
    let matches = find_clones(&target.method_id, &bag, index).ok();
    let verdict = match &matches {
        Some(m) => verdict_from_matches(&target.method_id, m, rule),
        None => LocationVerdict {
            target: target.method_id.clone(),
            verdict: Verdict::Abstain,
            evidence: None,
            logged_clone_count: 0,
            unlogged_clone_count: 0,
        },
    };

    let mut suggestion = Suggestion {
        target: target.method_id.clone(),
        verdict: verdict.verdict,
        confidence: verdict.evidence.as_ref().map(|e| e.similarity),
        evidence: verdict.evidence.clone(),
        clone_only: Vec::new(),
        hybrid: Vec::new(),
        level: None,
        level_support: None,
        level_rule: None,
        variables: Vec::new(),
    };

    if let Some(ev) = &verdict.evidence {
        let evidence = knowledge
            .get(&ev.method_id)
            .ok_or_else(|| Error::UnknownMethod(ev.method_id.clone()))?;
        suggestion.clone_only = suggest_lsd_clone_only(evidence)?;
        suggestion.hybrid = suggest_lsd_hybrid(&target.method_id, evidence, model, blend)?
            .into_iter()
            .map(|s| s.tokens)
            .collect();

        let mut votes = Vec::new();
        if let Some(matches) = &matches {
            for m in matches.iter().filter(|m| m.logged) {
                if let Some(method) = knowledge.get(&m.method_id) {
                    for lps in &method.lps {
                        votes.push((m.similarity, lps.level));
                    }
                }
            }
        }
        if let Ok(pred) = predict_level(&target.method_id, &votes) {
            suggestion.level = Some(pred.level);
            suggestion.level_support = Some(pred.support);
            suggestion.level_rule = Some(pred.rule);
        }
        if let Some(first_lps) = evidence.lps.iter().min_by_key(|l| l.line) {
            suggestion.variables = predict_variables(target, first_lps).variables;
        }
    }
    Ok(suggestion)
}
