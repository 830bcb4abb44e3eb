//! Lexer for the `.hott` surface language.
//!
//! ASCII-only: identifiers are `[A-Za-z_][A-Za-z0-9_']*`, comments run from
//! `--` to end of line, and any character outside the grammar (including all
//! non-ASCII input) is an `E-LEX` error with its position. A lone `_` lexes
//! as the hole symbol rather than an identifier.

use crate::diag::{Diagnostic, ErrorCode, Result, SourceSpan};
use std::rc::Rc;

/// Keywords of the surface language; everything else alphabetic is an
/// identifier.
pub const KEYWORDS: &[&str] = &[
    "def", "axiom", "fun", "Pi", "Sigma", "fst", "snd", "Id", "refl", "J", "Nat", "zero", "succ",
    "natrec", "Unit", "star", "unitrec", "Empty", "emptyrec", "Bool", "true", "false", "boolrec",
    "Type", "let", "in",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Keyword,
    Symbol,
    NatLit,
}

/// One lexeme with its kind and source position.
#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: SourceSpan,
}

impl Token {
    /// True if this token is the given keyword.
    pub fn is_kw(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.lexeme == kw
    }

    /// True if this token is the given symbol.
    pub fn is_sym(&self, sym: &str) -> bool {
        self.kind == TokenKind::Symbol && self.lexeme == sym
    }
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokenize `source`, discarding whitespace and `--` comments.
///
/// `file` names the input in spans and diagnostics.
pub fn tokenize(file: &str, source: &str) -> Result<Vec<Token>> {
    let file: Rc<str> = Rc::from(file);
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, col);
        if c == '\n' || c == ' ' || c == '\t' || c == '\r' {
            bump!();
            continue;
        }
        if c == '-' {
            // Either a comment `--` or an arrow `->`; a bare `-` is illegal.
            bump!();
            match chars.peek() {
                Some('-') => {
                    while let Some(&c2) = chars.peek() {
                        if c2 == '\n' {
                            break;
                        }
                        bump!();
                    }
                    continue;
                }
                Some('>') => {
                    bump!();
                    tokens.push(Token {
                        kind: TokenKind::Symbol,
                        lexeme: "->".to_string(),
                        span: SourceSpan::new(file.clone(), start_line, start_col, line, col),
                    });
                    continue;
                }
                _ => {
                    return Err(Diagnostic::at(
                        ErrorCode::Lex,
                        SourceSpan::point(file, start_line, start_col),
                        "illegal character `-` (expected `--` comment or `->`)",
                    ));
                }
            }
        }
        if ident_start(c) {
            let mut s = String::new();
            while let Some(&c2) = chars.peek() {
                if ident_continue(c2) {
                    s.push(c2);
                    bump!();
                } else {
                    break;
                }
            }
            let span = SourceSpan::new(file.clone(), start_line, start_col, line, col);
            let kind = if s == "_" {
                TokenKind::Symbol
            } else if KEYWORDS.contains(&s.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            tokens.push(Token { kind, lexeme: s, span });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_digit() {
                    s.push(c2);
                    bump!();
                } else {
                    break;
                }
            }
            let span = SourceSpan::new(file.clone(), start_line, start_col, line, col);
            tokens.push(Token { kind: TokenKind::NatLit, lexeme: s, span });
            continue;
        }
        match c {
            '(' | ')' | '{' | '}' | ',' | '*' | '@' => {
                bump!();
                tokens.push(Token {
                    kind: TokenKind::Symbol,
                    lexeme: c.to_string(),
                    span: SourceSpan::new(file.clone(), start_line, start_col, line, col),
                });
            }
            ':' => {
                bump!();
                let lexeme = if matches!(chars.peek(), Some('=')) {
                    bump!();
                    ":="
                } else {
                    ":"
                };
                tokens.push(Token {
                    kind: TokenKind::Symbol,
                    lexeme: lexeme.to_string(),
                    span: SourceSpan::new(file.clone(), start_line, start_col, line, col),
                });
            }
            '=' => {
                bump!();
                if matches!(chars.peek(), Some('>')) {
                    bump!();
                    tokens.push(Token {
                        kind: TokenKind::Symbol,
                        lexeme: "=>".to_string(),
                        span: SourceSpan::new(file.clone(), start_line, start_col, line, col),
                    });
                } else {
                    return Err(Diagnostic::at(
                        ErrorCode::Lex,
                        SourceSpan::point(file, start_line, start_col),
                        "illegal character `=` (expected `=>`)",
                    ));
                }
            }
            _ => {
                return Err(Diagnostic::at(
                    ErrorCode::Lex,
                    SourceSpan::point(file, start_line, start_col),
                    format!("illegal character `{}`", c),
                ));
            }
        }
    }
    Ok(tokens)
}
