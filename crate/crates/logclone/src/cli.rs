//! Command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 corpus error, 3 evaluation
//! impossible (empty split side, empty test set).

use crate::clone::{build_index, detect_all_pairs, CloneParams};
use crate::corpus::{Corpus, Mode};
use crate::error::{Error, Result};
use crate::ingest::{corpus_from_sources, scan_corpus, IngestConfig};
use crate::location::{consistency_report, evaluate_location, LocationRule};
use crate::pipeline::{
    run_pipeline_on, suggest_for_target, train_lm_on, EvalReport, PipelineConfig, REPORT_SCHEMA,
};
use crate::split::SplitSpec;
use crate::suggest::BlendParams;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "logclone",
    version,
    about = "Suggest logging statements for Java methods from their code clones"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliMode {
    LogAware,
    LogUnaware,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::LogAware => Mode::LogAware,
            CliMode::LogUnaware => Mode::LogUnaware,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliRule {
    AnyLogged,
    Majority,
}

impl From<CliRule> for LocationRule {
    fn from(r: CliRule) -> LocationRule {
        match r {
            CliRule::AnyLogged => LocationRule::AnyLogged,
            CliRule::Majority => LocationRule::Majority,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct CloneArgs {
    /// Similarity threshold in (0, 1].
    #[arg(long, default_value_t = 0.7)]
    theta: f64,
    #[arg(long, value_enum, default_value_t = CliMode::LogAware)]
    mode: CliMode,
    /// Methods with fewer tokens are neither indexed nor queried.
    #[arg(long, default_value_t = 10)]
    min_bag_size: usize,
}

impl CloneArgs {
    fn params(&self) -> Result<CloneParams> {
        let params = CloneParams {
            theta: self.theta,
            mode: self.mode.into(),
            min_bag_size: self.min_bag_size,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Args, Debug, Clone)]
struct BlendArgs {
    /// Clone-token weight in the per-position blend.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Model candidates per position.
    #[arg(short = 'k', long = "k", default_value_t = 5)]
    top_k: usize,
    /// Stop threshold past the clone text.
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    #[arg(long, default_value_t = 32)]
    max_len: usize,
}

impl BlendArgs {
    fn params(&self) -> Result<BlendParams> {
        let params = BlendParams {
            lambda: self.lambda,
            top_k: self.top_k,
            tau: self.tau,
            max_len: self.max_len,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Scan a Java tree and write the method corpus as JSON Lines.
    Ingest {
        #[arg(long)]
        root: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        min_method_lines: u32,
        /// Regex for logger receiver identifiers (repeatable).
        #[arg(long = "logger-pattern")]
        logger_patterns: Vec<String>,
        /// Glob of files to skip (repeatable).
        #[arg(long = "exclude")]
        exclude: Vec<String>,
        /// Also split description words on camelCase boundaries.
        #[arg(long, default_value_t = false)]
        split_camel_case: bool,
    },
    /// Detect clone pairs in a corpus and write them as JSON Lines.
    Clones {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        clone: CloneArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict whether each method of a file needs a logging statement.
    Predict {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        target_file: PathBuf,
        #[command(flatten)]
        clone: CloneArgs,
        #[arg(long, value_enum, default_value_t = CliRule::AnyLogged)]
        rule: CliRule,
    },
    /// Suggest description, level and variables for each method of a file.
    Suggest {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        target_file: PathBuf,
        #[command(flatten)]
        clone: CloneArgs,
        #[command(flatten)]
        blend: BlendArgs,
        #[arg(long, value_enum, default_value_t = CliRule::AnyLogged)]
        rule: CliRule,
        /// Write the trained description model (JSON count tables) here.
        #[arg(long)]
        save_model: Option<PathBuf>,
    },
    /// Run an evaluation over a seeded train/test split.
    Evaluate {
        #[command(subcommand)]
        what: EvaluateCommand,
    },
    /// Logging-consistency statistics over the clone pairs of a corpus or
    /// a Java tree.
    Consistency {
        #[arg(long, conflicts_with = "corpus")]
        root: Option<PathBuf>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        clone: CloneArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EvaluateCommand {
    /// Location prediction only: confusion counts and P/R/F1/BA.
    Location {
        #[arg(long)]
        corpus: PathBuf,
        /// Train fraction in (0, 1).
        #[arg(long, default_value_t = 0.8)]
        split: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        clone: CloneArgs,
        #[arg(long, value_enum, default_value_t = CliRule::AnyLogged)]
        rule: CliRule,
        #[arg(long)]
        out: PathBuf,
    },
    /// Location, description and level evaluation in one run.
    All {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 0.8)]
        split: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        clone: CloneArgs,
        #[command(flatten)]
        blend: BlendArgs,
        #[arg(long, value_enum, default_value_t = CliRule::AnyLogged)]
        rule: CliRule,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest {
            root,
            out,
            min_method_lines,
            logger_patterns,
            exclude,
            split_camel_case,
        } => {
            let mut config = IngestConfig {
                min_method_lines,
                exclude,
                split_camel_case,
                ..IngestConfig::default()
            };
            if !logger_patterns.is_empty() {
                config.logger_patterns = logger_patterns;
            }
            let (corpus, report) = scan_corpus(&root, &config)?;
            corpus.write_jsonl(&out)?;
            println!(
                "ingested {} methods from {} files into {} ({} skipped)",
                corpus.len(),
                report.files.len(),
                out.display(),
                report.skipped.len()
            );
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(())
        }

        Command::Clones { corpus, clone, out } => {
            let params = clone.params()?;
            let corpus = Corpus::read_jsonl(&corpus)?;
            let pairs = detect_all_pairs(&corpus, params)?;
            write_pairs(&out, &pairs)?;
            println!("{} clone pairs written to {}", pairs.len(), out.display());
            Ok(())
        }

        Command::Predict {
            corpus,
            target_file,
            clone,
            rule,
        } => {
            let params = clone.params()?;
            let knowledge = Corpus::read_jsonl(&corpus)?;
            let targets = ingest_target_file(&target_file)?;
            let index = build_index(&knowledge, params)?;
            for target in &targets.methods {
                let verdict = crate::location::predict_location(target, &index, rule.into());
                println!(
                    "{} {}: {}",
                    target.method_id,
                    target.qualified_name,
                    describe_verdict(&verdict)
                );
                println!("{}", serde_json::to_string(&verdict).expect("serializes"));
            }
            Ok(())
        }

        Command::Suggest {
            corpus,
            target_file,
            clone,
            blend,
            rule,
            save_model,
        } => {
            let params = clone.params()?;
            let blend = blend.params()?;
            let knowledge = Corpus::read_jsonl(&corpus)?;
            let targets = ingest_target_file(&target_file)?;
            let index = build_index(&knowledge, params)?;
            let model = train_lm_on(&knowledge, Default::default())?;
            if let Some(path) = &save_model {
                fs::write(path, model.to_json()).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            for target in &targets.methods {
                let suggestion =
                    suggest_for_target(target, &knowledge, &index, &model, rule.into(), blend)?;
                print_suggestion(&target.qualified_name, &suggestion);
                println!("{}", serde_json::to_string(&suggestion).expect("serializes"));
            }
            Ok(())
        }

        Command::Evaluate { what } => match what {
            EvaluateCommand::Location {
                corpus,
                split,
                seed,
                clone,
                rule,
                out,
            } => {
                let params = clone.params()?;
                let loaded = Corpus::read_jsonl(&corpus)?;
                let spec = SplitSpec {
                    train_fraction: split,
                    seed,
                };
                let eval = evaluate_location(&loaded, spec, params, rule.into())?;
                let report = LocationReport {
                    schema: REPORT_SCHEMA.to_string(),
                    generated_at: unix_now(),
                    corpus: corpus.display().to_string(),
                    split: spec,
                    clone: params,
                    rule: rule.into(),
                    counts: eval.counts,
                    metrics: eval.metrics,
                    verdicts: eval.verdicts,
                };
                write_json(&out, &report)?;
                println!("{}", location_summary(&eval.counts, &eval.metrics));
                println!("report written to {}", out.display());
                Ok(())
            }
            EvaluateCommand::All {
                corpus,
                split,
                seed,
                clone,
                blend,
                rule,
                out,
            } => {
                let config = PipelineConfig {
                    corpus: corpus.display().to_string(),
                    split: SplitSpec {
                        train_fraction: split,
                        seed,
                    },
                    clone: clone.params()?,
                    rule: rule.into(),
                    lm: Default::default(),
                    blend: blend.params()?,
                };
                let loaded = Corpus::read_jsonl(&corpus)?;
                let report = run_pipeline_on(&loaded, &config)?;
                write_json(&out, &report)?;
                print_report_summary(&report);
                println!("report written to {}", out.display());
                Ok(())
            }
        },

        Command::Consistency {
            root,
            corpus,
            clone,
            out,
        } => {
            let params = clone.params()?;
            let loaded = match (root, corpus) {
                (Some(root), None) => scan_corpus(&root, &IngestConfig::default())?.0,
                (None, Some(path)) => Corpus::read_jsonl(&path)?,
                _ => {
                    return Err(Error::InvalidParam(
                        "provide exactly one of --root or --corpus".into(),
                    ))
                }
            };
            let pairs = detect_all_pairs(&loaded, params)?;
            let report = consistency_report(&loaded, &pairs);
            let text = serde_json::to_string_pretty(&report).expect("serializes");
            if let Some(out) = out {
                fs::write(&out, format!("{text}\n")).map_err(|source| Error::Io {
                    path: out.clone(),
                    source,
                })?;
            }
            println!("{text}");
            Ok(())
        }
    }
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[derive(Serialize)]
struct LocationReport {
    schema: String,
    generated_at: u64,
    corpus: String,
    split: SplitSpec,
    clone: CloneParams,
    rule: LocationRule,
    counts: crate::location::ConfusionCounts,
    metrics: crate::location::LocationMetrics,
    verdicts: Vec<crate::location::LocationVerdict>,
}

/// Read one Java file as the prediction target; ids get a `t` prefix so
/// they can never collide with corpus ids.
fn ingest_target_file(path: &Path) -> Result<Corpus> {
    let content = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_else(|| path.display().to_string());
    let (mut corpus, _) =
        corpus_from_sources(&[(name, content)], &IngestConfig::default())?;
    for (i, m) in corpus.methods.iter_mut().enumerate() {
        m.method_id = format!("t{i:06}");
    }
    Ok(corpus)
}

fn describe_verdict(v: &crate::location::LocationVerdict) -> String {
    match (&v.verdict, &v.evidence) {
        (crate::location::Verdict::NeedsLog, Some(e)) => format!(
            "needs_log (evidence {}, similarity {:.3}, {} logged / {} unlogged clones)",
            e.method_id, e.similarity, v.logged_clone_count, v.unlogged_clone_count
        ),
        (crate::location::Verdict::NoLog, _) => format!(
            "no_log ({} clones, none logged)",
            v.logged_clone_count + v.unlogged_clone_count
        ),
        (crate::location::Verdict::Abstain, _) => "abstain (method too small)".to_string(),
        _ => "needs_log".to_string(),
    }
}

fn print_suggestion(name: &str, s: &crate::pipeline::Suggestion) {
    println!("{} {}: {:?}", s.target, name, s.verdict);
    if let (Some(level), Some(support)) = (s.level, s.level_support) {
        println!("  level: {level} (support {support:.2})");
    }
    for (i, lsd) in s.clone_only.iter().enumerate() {
        println!("  clone-only [{}]: {}", i + 1, lsd.join(" "));
    }
    for (i, lsd) in s.hybrid.iter().enumerate() {
        println!("  hybrid     [{}]: {}", i + 1, lsd.join(" "));
    }
    if !s.variables.is_empty() {
        let rendered: Vec<String> = s
            .variables
            .iter()
            .map(|v| format!("{} ({:?})", v.name, v.provenance))
            .collect();
        println!("  variables: {}", rendered.join(", "));
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "undefined".into())
}

fn location_summary(
    counts: &crate::location::ConfusionCounts,
    metrics: &crate::location::LocationMetrics,
) -> String {
    format!(
        "location: tp={} fp={} tn={} fn={} abstained={}\n  precision={} recall={} f1={} balanced_accuracy={}",
        counts.true_pos,
        counts.false_pos,
        counts.true_neg,
        counts.false_neg,
        counts.abstained,
        fmt_opt(metrics.precision),
        fmt_opt(metrics.recall),
        fmt_opt(metrics.f1),
        fmt_opt(metrics.balanced_accuracy),
    )
}

fn print_report_summary(report: &EvalReport) {
    println!(
        "{}",
        location_summary(&report.location.counts, &report.location.metrics)
    );
    match (&report.description.clone_only, &report.description.hybrid) {
        (Some(c), Some(h)) => {
            println!(
                "description (clone_only, {} items): BLEU-1 {:.4} BLEU-4 {:.4} ROUGE-1 F1 {:.4} ROUGE-L F1 {:.4}",
                c.items, c.bleu1, c.bleu4, c.rouge1.f1, c.rouge_l.f1
            );
            println!(
                "description (hybrid,     {} items): BLEU-1 {:.4} BLEU-4 {:.4} ROUGE-1 F1 {:.4} ROUGE-L F1 {:.4}",
                h.items, h.bleu1, h.bleu4, h.rouge1.f1, h.rouge_l.f1
            );
        }
        _ => println!(
            "description: {}",
            report
                .description
                .empty_marker
                .as_deref()
                .unwrap_or("empty")
        ),
    }
    println!(
        "levels: {}/{} matched ({})",
        report.levels.matched,
        report.levels.predicted,
        report
            .levels
            .match_rate
            .map(|r| format!("{r:.4}"))
            .unwrap_or_else(|| "undefined".into())
    );
}

/// Pair records go out with the similarity printed to six decimal places.
fn write_pairs(path: &Path, pairs: &[crate::clone::ClonePair]) -> Result<()> {
    use std::io::Write;
    let file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = std::io::BufWriter::new(file);
    for p in pairs {
        writeln!(
            w,
            "{{\"left\":{},\"right\":{},\"similarity\":{:.6},\"clone_type\":\"{:?}\"}}",
            serde_json::to_string(&p.left).expect("string serializes"),
            serde_json::to_string(&p.right).expect("string serializes"),
            p.similarity,
            p.clone_type,
        )
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    fs::write(path, format!("{text}\n")).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
