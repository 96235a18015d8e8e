//! Lexical tokenization of Java source and multiset token bags.
//!
//! The lexer keeps identifiers whole, emits operators with maximal munch,
//! drops comments, and collapses every string literal to the single token
//! `<str>` (char literals to `<char>`). Byte spans are preserved so callers
//! can slice the original text, e.g. to recover a literal's content.

use std::collections::BTreeMap;

/// Token used in place of any string literal.
pub const STR_TOKEN: &str = "<str>";
/// Token used in place of any character literal.
pub const CHAR_TOKEN: &str = "<char>";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Keyword,
    Number,
    Str,
    Char,
    /// `true`, `false`, `null`.
    Literal,
    Punct,
}

/// One lexical token with its byte span in the lexed text.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
}

const KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.binary_search(&s).is_ok()
}

/// Multi-character operators, longest first for maximal munch.
const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++",
    "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
];

/// Classify a token by its text alone. Used where only token texts survive
/// (e.g. corpus records reloaded from disk).
pub fn classify(text: &str) -> TokenKind {
    if text == STR_TOKEN {
        return TokenKind::Str;
    }
    if text == CHAR_TOKEN {
        return TokenKind::Char;
    }
    if text == "true" || text == "false" || text == "null" {
        return TokenKind::Literal;
    }
    if is_keyword(text) {
        return TokenKind::Keyword;
    }
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_digit() => TokenKind::Number,
        Some('.') if text.len() > 1 && text.as_bytes()[1].is_ascii_digit() => TokenKind::Number,
        Some(c) if c.is_alphabetic() || c == '_' || c == '$' => TokenKind::Ident,
        _ => TokenKind::Punct,
    }
}

/// Tokenize Java source. Comments and whitespace are dropped; string and
/// char literals keep their spans but are emitted as `<str>` / `<char>`.
pub fn tokenize(src: &str) -> Vec<Token> {
    let bytes = src.as_bytes();
    let n = bytes.len();
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < n {
        let c = bytes[i];

        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }

        // Line comment.
        if c == b'/' && i + 1 < n && bytes[i + 1] == b'/' {
            while i < n && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }

        // Block comment (unterminated runs to end of input).
        if c == b'/' && i + 1 < n && bytes[i + 1] == b'*' {
            let mut j = i + 2;
            while j + 1 < n && !(bytes[j] == b'*' && bytes[j + 1] == b'/') {
                j += 1;
            }
            i = if j + 1 < n { j + 2 } else { n };
            continue;
        }

        // Text block or string literal.
        if c == b'"' {
            let start = i;
            if i + 2 < n && bytes[i + 1] == b'"' && bytes[i + 2] == b'"' {
                let mut j = i + 3;
                while j + 2 < n && !(bytes[j] == b'"' && bytes[j + 1] == b'"' && bytes[j + 2] == b'"')
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
            tokens.push(Token {
                text: STR_TOKEN.to_string(),
                kind: TokenKind::Str,
                start,
                end: i,
            });
            continue;
        }

        // Char literal.
        if c == b'\'' {
            let start = i;
            let mut j = i + 1;
            while j < n && bytes[j] != b'\'' && bytes[j] != b'\n' {
                if bytes[j] == b'\\' {
                    j += 1;
                }
                j += 1;
            }
            i = if j < n && bytes[j] == b'\'' { j + 1 } else { j };
            tokens.push(Token {
                text: CHAR_TOKEN.to_string(),
                kind: TokenKind::Char,
                start,
                end: i,
            });
            continue;
        }

        // Identifier or keyword.
        if c.is_ascii_alphabetic() || c == b'_' || c == b'$' || c >= 0x80 {
            let start = i;
            while i < n
                && (bytes[i].is_ascii_alphanumeric()
                    || bytes[i] == b'_'
                    || bytes[i] == b'$'
                    || bytes[i] >= 0x80)
            {
                i += 1;
            }
            let text = &src[start..i];
            let kind = if text == "true" || text == "false" || text == "null" {
                TokenKind::Literal
            } else if is_keyword(text) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            tokens.push(Token {
                text: text.to_string(),
                kind,
                start,
                end: i,
            });
            continue;
        }

        // Number (integer, float, hex, suffixes; underscores allowed).
        if c.is_ascii_digit() || (c == b'.' && i + 1 < n && bytes[i + 1].is_ascii_digit()) {
            let start = i;
            let hex = c == b'0' && i + 1 < n && (bytes[i + 1] | 0x20) == b'x';
            while i < n
                && (bytes[i].is_ascii_alphanumeric()
                    || bytes[i] == b'.'
                    || bytes[i] == b'_'
                    || ((bytes[i] == b'+' || bytes[i] == b'-')
                        && !hex
                        && i > start
                        && (bytes[i - 1] | 0x20) == b'e'))
            {
                i += 1;
            }
            tokens.push(Token {
                text: src[start..i].to_string(),
                kind: TokenKind::Number,
                start,
                end: i,
            });
            continue;
        }

        // Operator or single punctuation.
        let rest = &src[i..];
        let mut matched = None;
        for op in OPERATORS {
            if rest.starts_with(op) {
                matched = Some(*op);
                break;
            }
        }
        let text = matched.map(str::to_string).unwrap_or_else(|| {
            let ch_len = src[i..].chars().next().map(char::len_utf8).unwrap_or(1);
            src[i..i + ch_len].to_string()
        });
        let len = text.len();
        tokens.push(Token {
            text,
            kind: TokenKind::Punct,
            start: i,
            end: i + len,
        });
        i += len;
    }

    tokens
}

/// A multiset of tokens. Counts are kept sorted so serialized forms and
/// iteration order are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenBag {
    counts: BTreeMap<String, u32>,
    total: usize,
}

impl TokenBag {
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut counts: BTreeMap<String, u32> = BTreeMap::new();
        let mut total = 0;
        for t in tokens {
            *counts.entry(t.as_ref().to_string()).or_insert(0) += 1;
            total += 1;
        }
        TokenBag { counts, total }
    }

    /// Total token count, multiplicities included.
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn count(&self, token: &str) -> u32 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    pub fn distinct_tokens(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    /// Multiset intersection size: sum over tokens of min(count_a, count_b).
    pub fn intersection_size(&self, other: &TokenBag) -> usize {
        let (small, large) = if self.counts.len() <= other.counts.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .counts
            .iter()
            .map(|(t, &c)| c.min(large.count(t)) as usize)
            .sum()
    }

    /// Multiset inclusion: every token of `self` occurs in `other` at least
    /// as many times.
    pub fn is_subset_of(&self, other: &TokenBag) -> bool {
        self.counts.iter().all(|(t, &c)| c <= other.count(t))
    }
}
