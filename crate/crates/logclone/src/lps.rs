//! Detection and parsing of log print statements inside extracted methods.
//!
//! A logging call is an identifier matching one of the configured logger
//! patterns, followed by `.` and one of the six level method names. The
//! first argument is split on `+` concatenation: quoted fragments become
//! normalized description tokens, everything else becomes a `<var>`
//! placeholder plus a captured variable expression. `{}`-style format
//! placeholders inside quoted text also become `<var>` tokens, and the
//! call's remaining arguments are captured as variables.

use crate::corpus::{LogPrintStatement, VAR_TOKEN};
use crate::level::Level;
use crate::token::{Token, TokenKind};
use regex::Regex;

/// A parsed logging statement plus extraction-time context: the byte span
/// it covers inside the method slice (trailing `;` included) and the raw
/// call text.
#[derive(Debug, Clone)]
pub struct ParsedLps {
    pub record: LogPrintStatement,
    pub span: (usize, usize),
    pub raw_call: String,
}

/// Scan a method's token stream for logging calls at any nesting depth.
///
/// `slice` is the method source the tokens were lexed from;
/// `start_line` is the 1-based file line of the method's first token.
pub fn detect_lps(
    tokens: &[Token],
    slice: &str,
    start_line: u32,
    logger_patterns: &[Regex],
    split_camel_case: bool,
) -> Vec<ParsedLps> {
    let mut found = Vec::new();
    let mut i = 0;
    while i + 3 < tokens.len() {
        if tokens[i].kind == TokenKind::Ident
            && is_logger_name(&tokens[i].text, logger_patterns)
            && tokens[i + 1].text == "."
            && tokens[i + 2].kind == TokenKind::Ident
            && tokens[i + 3].text == "("
        {
            if let Ok(level) = tokens[i + 2].text.parse::<Level>() {
                if let Some(close) = matching_paren(tokens, i + 3) {
                    // Include a leading qualifier chain (`this.log`, `Foo.LOG`).
                    let mut recv = i;
                    while recv >= 2
                        && tokens[recv - 1].text == "."
                        && (tokens[recv - 2].kind == TokenKind::Ident
                            || tokens[recv - 2].text == "this"
                            || tokens[recv - 2].text == "super")
                    {
                        recv -= 2;
                    }
                    let end_tok = if close + 1 < tokens.len() && tokens[close + 1].text == ";" {
                        close + 1
                    } else {
                        close
                    };
                    let span = (tokens[recv].start, tokens[end_tok].end);
                    let args = &tokens[i + 4..close];
                    let (lsd_tokens, variables) = parse_arguments(args, slice, split_camel_case);
                    let line = start_line
                        + slice[..tokens[recv].start].matches('\n').count() as u32;
                    found.push(ParsedLps {
                        record: LogPrintStatement {
                            line,
                            level,
                            lsd_tokens,
                            variables,
                        },
                        span,
                        raw_call: slice[tokens[recv].start..tokens[close].end].to_string(),
                    });
                    i = end_tok + 1;
                    continue;
                }
            }
        }
        i += 1;
    }
    found
}

fn is_logger_name(name: &str, patterns: &[Regex]) -> bool {
    patterns.iter().any(|re| re.is_match(name))
}

/// Index of the `)` matching the `(` at `open`, by paren depth.
fn matching_paren(tokens: &[Token], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (j, t) in tokens.iter().enumerate().skip(open) {
        match t.text.as_str() {
            "(" => depth += 1,
            ")" => {
                depth -= 1;
                if depth == 0 {
                    return Some(j);
                }
            }
            _ => {}
        }
    }
    None
}

/// Split the argument token list of a logging call into description tokens
/// and variable expressions.
fn parse_arguments(args: &[Token], slice: &str, split_camel_case: bool) -> (Vec<String>, Vec<String>) {
    let mut lsd_tokens = Vec::new();
    let mut variables = Vec::new();

    let arg_groups = split_top_level(args, ",");
    if arg_groups.is_empty() {
        return (lsd_tokens, variables);
    }

    for fragment in split_top_level(arg_groups[0], "+") {
        if fragment.len() == 1 && fragment[0].kind == TokenKind::Str {
            let content = literal_content(&slice[fragment[0].start..fragment[0].end]);
            normalize_lsd(&content, split_camel_case, &mut lsd_tokens);
        } else if !fragment.is_empty() {
            let text = slice[fragment[0].start..fragment[fragment.len() - 1].end].trim();
            if !text.is_empty() {
                variables.push(text.to_string());
                lsd_tokens.push(VAR_TOKEN.to_string());
            }
        }
    }

    // Remaining arguments are the logged values (format-placeholder
    // arguments, trailing exceptions). Pure literals are not variables.
    for group in arg_groups.iter().skip(1) {
        if group.len() == 1 && matches!(group[0].kind, TokenKind::Str | TokenKind::Char) {
            continue;
        }
        if let (Some(first), Some(last)) = (group.first(), group.last()) {
            let text = slice[first.start..last.end].trim();
            if !text.is_empty() {
                variables.push(text.to_string());
            }
        }
    }

    (lsd_tokens, variables)
}

/// Split a token run on a separator at paren/bracket depth zero.
fn split_top_level<'t>(tokens: &'t [Token], sep: &str) -> Vec<&'t [Token]> {
    let mut groups = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (j, t) in tokens.iter().enumerate() {
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            s if s == sep && depth == 0 => {
                groups.push(&tokens[start..j]);
                start = j + 1;
            }
            _ => {}
        }
    }
    if start < tokens.len() {
        groups.push(&tokens[start..]);
    } else if start > 0 && start == tokens.len() {
        groups.push(&tokens[tokens.len()..]);
    }
    groups
}

/// Strip quotes from a string literal's source text and decode escapes.
fn literal_content(raw: &str) -> String {
    let inner = if let Some(stripped) = raw.strip_prefix("\"\"\"") {
        stripped.strip_suffix("\"\"\"").unwrap_or(stripped)
    } else {
        let s = raw.strip_prefix('"').unwrap_or(raw);
        s.strip_suffix('"').unwrap_or(s)
    };
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') | Some('t') | Some('r') | Some('f') | Some('b') => out.push(' '),
            Some('u') => {
                for _ in 0..4 {
                    chars.next();
                }
                out.push(' ');
            }
            Some(other) => out.push(other),
            None => {}
        }
    }
    out
}

/// Normalize quoted description text into LSD tokens: `{}`-style
/// placeholders become `<var>`, the rest is lowercased, punctuation is
/// stripped, and words are split on whitespace (and camelCase boundaries
/// when enabled).
pub fn normalize_lsd(content: &str, split_camel_case: bool, out: &mut Vec<String>) {
    let bytes = content.as_bytes();
    let mut chunk_start = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'{' {
            let mut j = i + 1;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'}' {
                push_words(&content[chunk_start..i], split_camel_case, out);
                out.push(VAR_TOKEN.to_string());
                i = j + 1;
                chunk_start = i;
                continue;
            }
        }
        i += 1;
    }
    push_words(&content[chunk_start..], split_camel_case, out);
}

fn push_words(text: &str, split_camel_case: bool, out: &mut Vec<String>) {
    let mut word = String::new();
    let mut prev_lower = false;
    for c in text.chars() {
        if c.is_alphanumeric() {
            if split_camel_case && c.is_uppercase() && prev_lower && !word.is_empty() {
                out.push(std::mem::take(&mut word));
            }
            prev_lower = c.is_lowercase() || c.is_ascii_digit();
            for lc in c.to_lowercase() {
                word.push(lc);
            }
        } else {
            prev_lower = false;
            if !word.is_empty() {
                out.push(std::mem::take(&mut word));
            }
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
}
