//! Directory scanning and method extraction.
//!
//! Methods are found without a full Java grammar: source is masked so that
//! comments and string/char literal contents cannot confuse the scanner,
//! then every `{` at paren depth zero is classified by the declaration
//! header preceding it (the text since the last top-level `;`, `{` or `}`).
//! Headers shaped like `... name ( params ) [throws ...]` open a method
//! body, whose span runs to the matching closing brace. Bodies nested
//! inside a method (local and anonymous classes) stay part of it.

use crate::corpus::{Corpus, MethodDefinition, Mode};
use crate::error::{Error, Result};
use crate::lps::{detect_lps, ParsedLps};
use crate::token::{tokenize, Token, TokenKind};
use regex::Regex;
use serde::Serialize;
use std::path::{Path, PathBuf};
use walkdir::WalkDir;

/// Ingestion parameters. Logger patterns are regular expressions matched
/// against the receiver identifier of a call.
#[derive(Debug, Clone)]
pub struct IngestConfig {
    pub extensions: Vec<String>,
    pub exclude: Vec<String>,
    pub min_method_lines: u32,
    pub logger_patterns: Vec<String>,
    pub split_camel_case: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            extensions: vec!["java".to_string()],
            exclude: Vec::new(),
            min_method_lines: 3,
            logger_patterns: vec!["(?i)log(ger)?$".to_string()],
            split_camel_case: false,
        }
    }
}

impl IngestConfig {
    pub fn compiled_logger_patterns(&self) -> Result<Vec<Regex>> {
        self.logger_patterns
            .iter()
            .map(|p| {
                Regex::new(p).map_err(|e| Error::InvalidParam(format!("logger pattern {p:?}: {e}")))
            })
            .collect()
    }
}

/// One source file loaded for extraction.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub file_id: u32,
    pub path: String,
    pub content: String,
    /// Byte offset of each line start; strictly increasing, starts at 0.
    pub line_index: Vec<usize>,
}

impl SourceFile {
    pub fn new(file_id: u32, path: String, content: String) -> Self {
        let mut line_index = vec![0];
        for (i, b) in content.bytes().enumerate() {
            if b == b'\n' {
                line_index.push(i + 1);
            }
        }
        SourceFile {
            file_id,
            path,
            content,
            line_index,
        }
    }

    /// 1-based line containing the byte offset.
    pub fn line_of(&self, byte: usize) -> u32 {
        self.line_index.partition_point(|&off| off <= byte) as u32
    }

    fn line_start(&self, line: u32) -> usize {
        self.line_index[line as usize - 1]
    }

    /// Slice covering whole lines `start..=end`, line terminator excluded.
    pub fn line_span_text(&self, start: u32, end: u32) -> &str {
        let from = self.line_start(start);
        let to = if (end as usize) < self.line_index.len() {
            let next = self.line_index[end as usize];
            let mut t = next - 1; // drop '\n'
            if t > from && self.content.as_bytes()[t - 1] == b'\r' {
                t -= 1;
            }
            t
        } else {
            self.content.len()
        };
        &self.content[from..to]
    }
}

/// A method as found in one file, before corpus assembly.
#[derive(Debug, Clone)]
pub struct ExtractedMethod {
    pub name: String,
    pub qualified_name: String,
    pub start_line: u32,
    pub end_line: u32,
    /// Whole-line slice for (start_line, end_line).
    pub raw_text: String,
    /// Tokens of the exact method span; spans are relative to `span_text`.
    pub tokens: Vec<Token>,
    /// Token index range strictly inside the outer braces. Corpus token
    /// sequences cover the body only: the signature is metadata, and a
    /// method whose sole statement is a logging call has an empty
    /// log-aware sequence.
    pub body_range: (usize, usize),
    pub span_text: String,
    pub lps: Vec<ParsedLps>,
}

/// A file that was seen but not ingested.
#[derive(Debug, Clone, Serialize)]
pub struct SkipRecord {
    pub path: String,
    pub reason: String,
}

/// What a scan produced besides the corpus itself.
#[derive(Debug, Clone, Default, Serialize)]
pub struct IngestReport {
    pub files: Vec<String>,
    pub skipped: Vec<SkipRecord>,
    pub warnings: Vec<String>,
}

/// Replace comments and string/char literal contents with spaces, keeping
/// newlines, so brace and header scanning only ever sees code structure.
fn mask_source(src: &str) -> Vec<u8> {
    let bytes = src.as_bytes();
    let n = bytes.len();
    let mut out = bytes.to_vec();
    let mut i = 0;

    let blank = |out: &mut Vec<u8>, from: usize, to: usize| {
        for b in out[from..to].iter_mut() {
            if *b != b'\n' {
                *b = b' ';
            }
        }
    };

    while i < n {
        match bytes[i] {
            b'/' if i + 1 < n && bytes[i + 1] == b'/' => {
                let mut j = i;
                while j < n && bytes[j] != b'\n' {
                    j += 1;
                }
                blank(&mut out, i, j);
                i = j;
            }
            b'/' if i + 1 < n && bytes[i + 1] == b'*' => {
                let mut j = i + 2;
                while j + 1 < n && !(bytes[j] == b'*' && bytes[j + 1] == b'/') {
                    j += 1;
                }
                let end = if j + 1 < n { j + 2 } else { n };
                blank(&mut out, i, end);
                i = end;
            }
            b'"' => {
                let start = i;
                if i + 2 < n && bytes[i + 1] == b'"' && bytes[i + 2] == b'"' {
                    let mut j = i + 3;
                    while j + 2 < n
                        && !(bytes[j] == b'"' && bytes[j + 1] == b'"' && bytes[j + 2] == b'"')
                    {
                        if bytes[j] == b'\\' {
                            j += 1;
                        }
                        j += 1;
                    }
                    i = if j + 2 < n { j + 3 } else { n };
                } else {
                    let mut j = i + 1;
                    while j < n && bytes[j] != b'"' && bytes[j] != b'\n' {
                        if bytes[j] == b'\\' {
                            j += 1;
                        }
                        j += 1;
                    }
                    i = if j < n && bytes[j] == b'"' { j + 1 } else { j };
                }
                blank(&mut out, start, i.min(n));
            }
            b'\'' => {
                let start = i;
                let mut j = i + 1;
                while j < n && bytes[j] != b'\'' && bytes[j] != b'\n' {
                    if bytes[j] == b'\\' {
                        j += 1;
                    }
                    j += 1;
                }
                i = if j < n && bytes[j] == b'\'' { j + 1 } else { j };
                blank(&mut out, start, i.min(n));
            }
            _ => i += 1,
        }
    }
    out
}

enum Frame {
    Type,
    Block,
}

/// Header classification for a `{` at paren depth zero.
enum HeaderKind {
    Method { name: String },
    Type { name: String },
    Other,
}

fn classify_header(header: &str) -> HeaderKind {
    let tokens = strip_annotations(tokenize(header));

    // Type declarations (class/interface/enum and `record Name(...)`).
    for (i, t) in tokens.iter().enumerate() {
        let is_type_kw = matches!(t.text.as_str(), "class" | "interface" | "enum")
            || (t.text == "record"
                && tokens.get(i + 1).map(|n| n.kind) == Some(TokenKind::Ident)
                && tokens.get(i + 2).map(|n| n.text.as_str()) == Some("("));
        if is_type_kw {
            if let Some(name_tok) = tokens.get(i + 1) {
                if name_tok.kind == TokenKind::Ident {
                    return HeaderKind::Type {
                        name: name_tok.text.clone(),
                    };
                }
            }
            return HeaderKind::Other;
        }
    }

    // Statements and initializers can never be method headers.
    for t in &tokens {
        match t.text.as_str() {
            "=" | "->" | ";" | "new" | "return" | "throw" | "case" | "assert" => {
                return HeaderKind::Other
            }
            _ => {}
        }
    }

    // Method/constructor shape: `... name ( ... ) [throws A, B]`.
    let open = match tokens.iter().position(|t| t.text == "(") {
        Some(p) if p > 0 => p,
        _ => return HeaderKind::Other,
    };
    if tokens[open - 1].kind != TokenKind::Ident {
        return HeaderKind::Other;
    }
    let mut depth = 0i32;
    let mut close = None;
    for (j, t) in tokens.iter().enumerate().skip(open) {
        match t.text.as_str() {
            "(" => depth += 1,
            ")" => {
                depth -= 1;
                if depth == 0 {
                    close = Some(j);
                    break;
                }
            }
            _ => {}
        }
    }
    let close = match close {
        Some(c) => c,
        None => return HeaderKind::Other,
    };
    // Only a throws clause may follow the parameter list.
    let tail = &tokens[close + 1..];
    let tail_ok = tail.is_empty()
        || (tail[0].text == "throws"
            && tail[1..]
                .iter()
                .all(|t| t.kind == TokenKind::Ident || t.text == "," || t.text == "."));
    if !tail_ok {
        return HeaderKind::Other;
    }
    HeaderKind::Method {
        name: tokens[open - 1].text.clone(),
    }
}

/// Drop `@Name`, `@a.b.Name` and `@Name(...)` token runs.
fn strip_annotations(tokens: Vec<Token>) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if tokens[i].text == "@" && i + 1 < tokens.len() && tokens[i + 1].kind == TokenKind::Ident
        {
            i += 2;
            while i + 1 < tokens.len()
                && tokens[i].text == "."
                && tokens[i + 1].kind == TokenKind::Ident
            {
                i += 2;
            }
            if i < tokens.len() && tokens[i].text == "(" {
                let mut depth = 0i32;
                while i < tokens.len() {
                    match tokens[i].text.as_str() {
                        "(" => depth += 1,
                        ")" => {
                            depth -= 1;
                            if depth == 0 {
                                i += 1;
                                break;
                            }
                        }
                        _ => {}
                    }
                    i += 1;
                }
            }
            continue;
        }
        out.push(tokens[i].clone());
        i += 1;
    }
    out
}

/// Extract method definitions from one source file.
///
/// Returns the methods found plus any malformed-file warnings. Methods whose
/// closing brace is missing at end of file are dropped; methods found before
/// the imbalance are kept.
pub fn extract_methods(
    file: &SourceFile,
    config: &IngestConfig,
    logger_patterns: &[Regex],
) -> (Vec<ExtractedMethod>, Vec<String>) {
    let masked = mask_source(&file.content);
    let masked_str = std::str::from_utf8(&masked).unwrap_or(&file.content);
    let n = masked.len();

    let mut methods = Vec::new();
    let mut warnings = Vec::new();
    let mut frames: Vec<Frame> = Vec::new();
    let mut type_stack: Vec<String> = Vec::new();
    let mut hdr_start = 0usize;
    let mut paren_depth = 0i32;
    let mut underflow_warned = false;
    let mut i = 0;

    while i < n {
        match masked[i] {
            b'(' => paren_depth += 1,
            b')' => paren_depth = (paren_depth - 1).max(0),
            b';' if paren_depth == 0 => hdr_start = i + 1,
            b'}' if paren_depth == 0 => {
                if let Some(Frame::Type) = frames.last() {
                    type_stack.pop();
                }
                if frames.pop().is_none() && !underflow_warned {
                    warnings.push(format!("{}: unbalanced closing brace", file.path));
                    underflow_warned = true;
                }
                hdr_start = i + 1;
            }
            b'{' if paren_depth == 0 => {
                let header = &masked_str[hdr_start..i];
                match classify_header(header) {
                    HeaderKind::Type { name } => {
                        type_stack.push(name);
                        frames.push(Frame::Type);
                        hdr_start = i + 1;
                    }
                    HeaderKind::Other => {
                        frames.push(Frame::Block);
                        hdr_start = i + 1;
                    }
                    HeaderKind::Method { name } => {
                        match find_matching_brace(&masked, i) {
                            Some(close) => {
                                let sig_start = hdr_start
                                    + header.len()
                                    - header.trim_start().len();
                                let qualified_name = if type_stack.is_empty() {
                                    name.clone()
                                } else {
                                    format!("{}.{}", type_stack.join("."), name)
                                };
                                methods.push(build_method(
                                    file,
                                    name,
                                    qualified_name,
                                    sig_start,
                                    close,
                                    config,
                                    logger_patterns,
                                ));
                                i = close + 1;
                                hdr_start = i;
                                paren_depth = 0;
                                continue;
                            }
                            None => {
                                warnings.push(format!(
                                    "{}: unbalanced braces at end of file",
                                    file.path
                                ));
                                i = n;
                                continue;
                            }
                        }
                    }
                }
            }
            _ => {}
        }
        i += 1;
    }

    methods.retain(|m| m.end_line - m.start_line + 1 >= config.min_method_lines);
    (methods, warnings)
}

fn find_matching_brace(masked: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (j, &b) in masked.iter().enumerate().skip(open) {
        if b == b'{' {
            depth += 1;
        } else if b == b'}' {
            depth -= 1;
            if depth == 0 {
                return Some(j);
            }
        }
    }
    None
}

fn build_method(
    file: &SourceFile,
    name: String,
    qualified_name: String,
    sig_start: usize,
    close: usize,
    config: &IngestConfig,
    logger_patterns: &[Regex],
) -> ExtractedMethod {
    let start_line = file.line_of(sig_start);
    let end_line = file.line_of(close);
    let span_text = file.content[sig_start..=close].to_string();
    let tokens = tokenize(&span_text);
    let lps = detect_lps(
        &tokens,
        &span_text,
        start_line,
        logger_patterns,
        config.split_camel_case,
    );
    let body_range = body_token_range(&tokens);
    ExtractedMethod {
        name,
        qualified_name,
        start_line,
        end_line,
        raw_text: file.line_span_text(start_line, end_line).to_string(),
        tokens,
        body_range,
        span_text,
        lps,
    }
}

/// Indexes of the tokens strictly inside the method's outer braces. The
/// opening brace is the first `{` at paren depth zero (annotation
/// arguments in the header can contain braces inside parens).
fn body_token_range(tokens: &[Token]) -> (usize, usize) {
    let mut depth = 0i32;
    let mut open = None;
    for (i, t) in tokens.iter().enumerate() {
        match t.text.as_str() {
            "(" => depth += 1,
            ")" => depth -= 1,
            "{" if depth == 0 => {
                open = Some(i);
                break;
            }
            _ => {}
        }
    }
    match open {
        Some(i) if i + 1 < tokens.len() => (i + 1, tokens.len() - 1),
        _ => (0, tokens.len()),
    }
}

impl ExtractedMethod {
    fn body_tokens(&self) -> &[Token] {
        &self.tokens[self.body_range.0..self.body_range.1]
    }

    /// Body token texts with every LPS span removed (the log-aware
    /// sequence).
    pub fn log_aware_token_texts(&self) -> Vec<String> {
        self.body_tokens()
            .iter()
            .filter(|t| {
                !self
                    .lps
                    .iter()
                    .any(|l| t.start >= l.span.0 && t.end <= l.span.1)
            })
            .map(|t| t.text.clone())
            .collect()
    }

    pub fn full_token_texts(&self) -> Vec<String> {
        self.body_tokens().iter().map(|t| t.text.clone()).collect()
    }
}

/// Scan a directory tree and build a corpus plus an ingest report.
///
/// Files are visited in sorted path order and methods inherit that order,
/// so ingestion is deterministic: identical trees yield identical corpora.
pub fn scan_corpus<P: AsRef<Path>>(root: P, config: &IngestConfig) -> Result<(Corpus, IngestReport)> {
    let root = root.as_ref();
    let meta = std::fs::metadata(root).map_err(|source| Error::Io {
        path: root.to_path_buf(),
        source,
    })?;
    if !meta.is_dir() {
        return Err(Error::InvalidParam(format!(
            "{} is not a directory",
            root.display()
        )));
    }
    config.compiled_logger_patterns()?;
    let exclude: Vec<Regex> = config
        .exclude
        .iter()
        .map(|g| glob_to_regex(g))
        .collect::<Result<_>>()?;

    let mut paths: Vec<PathBuf> = Vec::new();
    let mut report = IngestReport::default();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                report.skipped.push(SkipRecord {
                    path: e
                        .path()
                        .map(|p| p.display().to_string())
                        .unwrap_or_else(|| root.display().to_string()),
                    reason: format!("unreadable: {e}"),
                });
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .to_string_lossy()
            .replace('\\', "/");
        let ext_ok = entry
            .path()
            .extension()
            .map(|e| {
                let e = e.to_string_lossy().to_lowercase();
                config.extensions.iter().any(|want| want.trim_start_matches('.') == e)
            })
            .unwrap_or(false);
        if !ext_ok {
            report.skipped.push(SkipRecord {
                path: rel,
                reason: "extension filter".to_string(),
            });
            continue;
        }
        let name = entry.file_name().to_string_lossy().to_string();
        if exclude
            .iter()
            .zip(&config.exclude)
            .any(|(re, g)| re.is_match(if g.contains('/') { &rel } else { &name }))
        {
            report.skipped.push(SkipRecord {
                path: rel,
                reason: "excluded".to_string(),
            });
            continue;
        }
        paths.push(entry.into_path());
    }
    paths.sort();

    let mut sources = Vec::new();
    for path in &paths {
        let rel = path
            .strip_prefix(root)
            .unwrap_or(path)
            .to_string_lossy()
            .replace('\\', "/");
        let bytes = match std::fs::read(path) {
            Ok(b) => b,
            Err(e) => {
                report.skipped.push(SkipRecord {
                    path: rel,
                    reason: format!("unreadable: {e}"),
                });
                continue;
            }
        };
        let content = match String::from_utf8(bytes) {
            Ok(c) => c,
            Err(_) => {
                report.skipped.push(SkipRecord {
                    path: rel,
                    reason: "not valid UTF-8".to_string(),
                });
                continue;
            }
        };
        sources.push((rel, content));
    }

    let (corpus, mut inner) = corpus_from_sources(&sources, config)?;
    report.files = std::mem::take(&mut inner.files);
    report.warnings.extend(inner.warnings);
    Ok((corpus, report))
}

/// Build a corpus from in-memory (path, content) pairs. Methods are sorted
/// by (path, start_line) and ids are assigned in that canonical order.
pub fn corpus_from_sources(
    sources: &[(String, String)],
    config: &IngestConfig,
) -> Result<(Corpus, IngestReport)> {
    let logger_patterns = config.compiled_logger_patterns()?;
    let mut report = IngestReport::default();
    let mut methods = Vec::new();
    for (idx, (path, content)) in sources.iter().enumerate() {
        let file = SourceFile::new(idx as u32, path.clone(), content.clone());
        let (extracted, warnings) = extract_methods(&file, config, &logger_patterns);
        report.warnings.extend(warnings);
        report.files.push(path.clone());
        for m in extracted {
            methods.push((path.clone(), m));
        }
    }

    methods.sort_by(|a, b| (a.0.as_str(), a.1.start_line).cmp(&(b.0.as_str(), b.1.start_line)));
    let records = methods
        .into_iter()
        .enumerate()
        .map(|(i, (file, m))| MethodDefinition {
            method_id: format!("m{i:06}"),
            file,
            qualified_name: m.qualified_name.clone(),
            start_line: m.start_line,
            end_line: m.end_line,
            tokens_full: m.full_token_texts(),
            tokens_log_aware: m.log_aware_token_texts(),
            lps: m.lps.iter().map(|l| l.record.clone()).collect(),
        })
        .collect();

    Ok((Corpus::new(records), report))
}

/// Tokenize an already-extracted method in the requested mode.
pub fn tokenize_method(method: &MethodDefinition, mode: Mode) -> crate::token::TokenBag {
    method.bag(mode)
}

fn glob_to_regex(glob: &str) -> Result<Regex> {
    let mut re = String::from("^");
    let mut chars = glob.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '*' => {
                if chars.peek() == Some(&'*') {
                    chars.next();
                    re.push_str(".*");
                } else {
                    re.push_str("[^/]*");
                }
            }
            '?' => re.push_str("[^/]"),
            c if "\\.[]{}()+-^$|".contains(c) => {
                re.push('\\');
                re.push(c);
            }
            c => re.push(c),
        }
    }
    re.push('$');
    Regex::new(&re).map_err(|e| Error::InvalidParam(format!("exclude glob {glob:?}: {e}")))
}
