//! Positioned diagnostics shared by the lexer, parser, elaborator, and kernel.
//!
//! Every failure in the pipeline is a [`Diagnostic`]: an error code from the
//! closed set below, a human-readable message, and (when one is known) a
//! source span. Diagnostics render as `file:line:col: error[CODE]: message`.

use std::fmt;
use std::rc::Rc;

/// The closed set of error codes emitted by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCode {
    /// Illegal character in the input text.
    Lex,
    /// Malformed syntax at the token level.
    Parse,
    /// Type mismatch or an otherwise ill-typed term.
    Type,
    /// Application of a term whose type is not a Pi.
    NotFn,
    /// Universe level out of range, or a failed cumulativity check.
    Universe,
    /// Evaluation of an ill-formed term got stuck (internal invariant breach).
    Stuck,
    /// A declaration name was defined twice.
    Duplicate,
    /// A surface name resolves to neither a binder nor a global.
    Unresolved,
    /// Unification failure while solving implicit arguments.
    Unify,
    /// A metavariable was never solved.
    Unsolved,
    /// A metavariable solution would mention itself.
    Occurs,
    /// A requested declaration does not exist.
    Missing,
}

impl ErrorCode {
    /// The stable wire name of this code, as it appears in rendered
    /// diagnostics and JSON reports.
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Lex => "E-LEX",
            ErrorCode::Parse => "E-PARSE",
            ErrorCode::Type => "E-TYPE",
            ErrorCode::NotFn => "E-NOTFN",
            ErrorCode::Universe => "E-UNIVERSE",
            ErrorCode::Stuck => "E-STUCK",
            ErrorCode::Duplicate => "E-DUPLICATE",
            ErrorCode::Unresolved => "E-UNRESOLVED",
            ErrorCode::Unify => "E-UNIFY",
            ErrorCode::Unsolved => "E-UNSOLVED",
            ErrorCode::Occurs => "E-OCCURS",
            ErrorCode::Missing => "E-MISSING",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A half-open region of source text, 1-based lines and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Rc<str>,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(file: Rc<str>, start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        debug_assert!((start_line, start_col) <= (end_line, end_col));
        SourceSpan { file, start_line, start_col, end_line, end_col }
    }

    /// A one-position span, for errors at a point.
    pub fn point(file: Rc<str>, line: u32, col: u32) -> Self {
        SourceSpan::new(file, line, col, line, col)
    }

    /// The smallest span covering both `self` and `other`.
    pub fn join(&self, other: &SourceSpan) -> SourceSpan {
        let (sl, sc) = std::cmp::min(
            (self.start_line, self.start_col),
            (other.start_line, other.start_col),
        );
        let (el, ec) =
            std::cmp::max((self.end_line, self.end_col), (other.end_line, other.end_col));
        SourceSpan::new(self.file.clone(), sl, sc, el, ec)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

/// A positioned error record; the only error type in the pipeline.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub code: ErrorCode,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Diagnostic { code, message: message.into(), span: None }
    }

    pub fn at(code: ErrorCode, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic { code, message: message.into(), span: Some(span) }
    }

    /// Attach `span` if the diagnostic does not already carry one.
    pub fn with_span(mut self, span: &SourceSpan) -> Self {
        if self.span.is_none() {
            self.span = Some(span.clone());
        }
        self
    }

    /// Prefix the message with context (e.g. the enclosing declaration).
    pub fn in_context(mut self, what: &str) -> Self {
        self.message = format!("{}: {}", what, self.message);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.span {
            Some(span) => write!(f, "{}: error[{}]: {}", span, self.code, self.message),
            None => write!(f, "error[{}]: {}", self.code, self.message),
        }
    }
}

impl std::error::Error for Diagnostic {}

/// Pipeline-wide result alias.
pub type Result<T> = std::result::Result<T, Diagnostic>;
