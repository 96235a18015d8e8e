//! Corpus records and the JSON Lines corpus file format.
//!
//! One record per method. Field names are part of the file contract:
//! `{method_id, file, qualified_name, start_line, end_line, tokens_full,
//! tokens_log_aware, lps: [{line, level, lsd_tokens, variables}]}`.

use crate::error::{Error, Result};
use crate::level::Level;
use crate::token::TokenBag;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// Token placeholder that stands in for a variable inside an LSD.
pub const VAR_TOKEN: &str = "<var>";

/// Which token bag a consumer wants: with or without logging-statement tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    LogAware,
    LogUnaware,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::LogAware => "log_aware",
            Mode::LogUnaware => "log_unaware",
        }
    }
}

/// One logging call as recorded in the corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogPrintStatement {
    /// 1-based line in the source file.
    pub line: u32,
    pub level: Level,
    /// Normalized description tokens: lowercase words and `<var>`.
    pub lsd_tokens: Vec<String>,
    /// Variable expression texts, in order of appearance.
    pub variables: Vec<String>,
}

impl LogPrintStatement {
    /// Number of `<var>` tokens in the description.
    pub fn placeholder_count(&self) -> usize {
        self.lsd_tokens.iter().filter(|t| *t == VAR_TOKEN).count()
    }
}

/// An extracted method: spans, token sequences in both modes, and its
/// logging statements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodDefinition {
    pub method_id: String,
    /// Source file path, relative to the ingest root where possible.
    pub file: String,
    pub qualified_name: String,
    pub start_line: u32,
    pub end_line: u32,
    /// All lexical tokens of the method, in order.
    pub tokens_full: Vec<String>,
    /// Same sequence with every logging-statement span removed.
    pub tokens_log_aware: Vec<String>,
    pub lps: Vec<LogPrintStatement>,
}

impl MethodDefinition {
    pub fn bag(&self, mode: Mode) -> TokenBag {
        match mode {
            Mode::LogAware => TokenBag::from_tokens(&self.tokens_log_aware),
            Mode::LogUnaware => TokenBag::from_tokens(&self.tokens_full),
        }
    }

    /// Ground-truth label: does the method contain at least one LPS?
    pub fn is_logged(&self) -> bool {
        !self.lps.is_empty()
    }
}

/// An ordered collection of method records. Order is canonical: ingestion
/// sorts by (file, start_line) and the JSONL format preserves it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    pub methods: Vec<MethodDefinition>,
}

impl Corpus {
    pub fn new(methods: Vec<MethodDefinition>) -> Self {
        Corpus { methods }
    }

    pub fn len(&self) -> usize {
        self.methods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.methods.is_empty()
    }

    /// Map from method_id to position in canonical order.
    pub fn id_positions(&self) -> HashMap<&str, usize> {
        self.methods
            .iter()
            .enumerate()
            .map(|(i, m)| (m.method_id.as_str(), i))
            .collect()
    }

    pub fn get(&self, method_id: &str) -> Option<&MethodDefinition> {
        self.methods.iter().find(|m| m.method_id == method_id)
    }

    pub fn write_jsonl<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut w = BufWriter::new(file);
        for m in &self.methods {
            let line = serde_json::to_string(m).expect("method record serializes");
            writeln!(w, "{line}").map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
        }
        w.flush().map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read_jsonl<P: AsRef<Path>>(path: P) -> Result<Corpus> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let reader = BufReader::new(file);
        let mut methods = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let m: MethodDefinition =
                serde_json::from_str(&line).map_err(|e| Error::CorpusFormat {
                    line: idx + 1,
                    msg: e.to_string(),
                })?;
            methods.push(m);
        }
        Ok(Corpus { methods })
    }
}
