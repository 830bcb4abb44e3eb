//! Batch checking of a library of source files against a manifest.
//!
//! The manifest (`MANIFEST.tsv`) lists the declarations the library promises
//! to provide: one `name<TAB>file<TAB>kind` line per entry. Files may contain
//! additional helper declarations; those are checked too but make no promise.
//!
//! Checking is two-stage — parse first, then elaborate and kernel-check the
//! parsed declarations — so callers can inspect or transform the parsed trees
//! in between. A declaration that fails is reported and skipped; checking
//! continues, so one broken proof surfaces as its own failure plus whatever
//! downstream breakage it causes, in order.

use crate::check;
use crate::diag::{Diagnostic, ErrorCode, Result, SourceSpan};
use crate::elab;
use crate::eval::quote;
use crate::lexer;
use crate::parser;
use crate::surface::SurfaceDecl;
use crate::syntax::{Name, Term};
use crate::value::GlobalEnv;
use std::rc::Rc;
use std::time::Instant;

/// What a manifest entry claims its declaration is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaKind {
    Definition,
    Axiom,
    Theorem,
}

impl LemmaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LemmaKind::Definition => "definition",
            LemmaKind::Axiom => "axiom",
            LemmaKind::Theorem => "theorem",
        }
    }

    pub fn parse(s: &str) -> Option<LemmaKind> {
        match s {
            "definition" => Some(LemmaKind::Definition),
            "axiom" => Some(LemmaKind::Axiom),
            "theorem" => Some(LemmaKind::Theorem),
            _ => None,
        }
    }
}

/// One promised declaration: its name, the file that provides it, its kind.
#[derive(Debug, Clone)]
pub struct LemmaSpec {
    pub name: Name,
    pub file: String,
    pub kind: LemmaKind,
}

/// The parsed manifest: entries in manifest order, plus the file list in
/// first-appearance order (which is the checking order).
#[derive(Debug, Clone)]
pub struct CorpusManifest {
    pub entries: Vec<LemmaSpec>,
    pub files: Vec<String>,
}

/// Parse `MANIFEST.tsv` content. `label` names the manifest in diagnostics.
pub fn parse_manifest(label: &str, content: &str) -> Result<CorpusManifest> {
    let label_rc: Rc<str> = Rc::from(label);
    let mut entries: Vec<LemmaSpec> = Vec::new();
    let mut files: Vec<String> = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let here = SourceSpan::point(label_rc.clone(), (i + 1) as u32, 1);
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('\t').collect();
        if parts.len() != 3 {
            return Err(Diagnostic::at(
                ErrorCode::Parse,
                here,
                "each manifest line must be `name<TAB>file<TAB>kind`".to_string(),
            ));
        }
        let (name, file, kind_s) = (parts[0], parts[1], parts[2]);
        if entries.iter().any(|e| e.name.as_ref() == name) {
            return Err(Diagnostic::at(
                ErrorCode::Parse,
                here,
                format!("duplicate manifest entry `{}`", name),
            ));
        }
        let Some(kind) = LemmaKind::parse(kind_s) else {
            return Err(Diagnostic::at(
                ErrorCode::Parse,
                here,
                format!(
                    "unknown kind `{}`; expected `definition`, `axiom`, or `theorem`",
                    kind_s
                ),
            ));
        };
        if !files.iter().any(|f| f == file) {
            files.push(file.to_string());
        }
        entries.push(LemmaSpec { name: Rc::from(name), file: file.to_string(), kind });
    }
    Ok(CorpusManifest { entries, files })
}

/// A source file handed to the checker: its display path and its content.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub content: String,
}

/// Parse each file to its surface declarations. Parse errors abort: nothing
/// downstream is meaningful with an unparseable file.
pub fn parse_files(files: &[SourceFile]) -> Result<Vec<(String, Vec<SurfaceDecl>)>> {
    files
        .iter()
        .map(|f| {
            let tokens = lexer::tokenize(&f.path, &f.content)?;
            let decls = parser::parse(&f.path, &tokens)?;
            Ok((f.path.clone(), decls))
        })
        .collect()
}

/// The outcome for one declaration (or one missing manifest promise).
#[derive(Debug, Clone)]
pub struct DeclStatus {
    pub name: Name,
    pub file: String,
    pub diagnostic: Option<Diagnostic>,
}

impl DeclStatus {
    pub fn ok(&self) -> bool {
        self.diagnostic.is_none()
    }
}

/// Wall time and declaration count for one file.
#[derive(Debug, Clone)]
pub struct FileTime {
    pub file: String,
    pub declarations: usize,
    pub millis: u128,
}

/// Everything the checker observed: per-declaration status in checking
/// order, per-file times, and the totals.
#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub decls: Vec<DeclStatus>,
    pub file_times: Vec<FileTime>,
    pub total_declarations: usize,
    pub total_failures: usize,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.total_failures == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &DeclStatus> {
        self.decls.iter().filter(|d| !d.ok())
    }
}

/// Elaborate and kernel-check parsed files in order. With a manifest, also
/// verify every promised declaration actually appeared (E-MISSING).
pub fn check_parsed(
    parsed: &[(String, Vec<SurfaceDecl>)],
    manifest: Option<&CorpusManifest>,
    max_universe: u32,
) -> (CheckReport, GlobalEnv) {
    let mut genv = GlobalEnv::new(max_universe);
    let mut report = CheckReport::default();
    for (file, decls) in parsed {
        let start = Instant::now();
        for sd in decls {
            let result = elab::elab_decl(&genv, sd)
                .and_then(|decl| check::check_decl(&mut genv, &decl));
            report.total_declarations += 1;
            if result.is_err() {
                report.total_failures += 1;
            }
            report.decls.push(DeclStatus {
                name: sd.name.clone(),
                file: file.clone(),
                diagnostic: result.err(),
            });
        }
        report.file_times.push(FileTime {
            file: file.clone(),
            declarations: decls.len(),
            millis: start.elapsed().as_millis(),
        });
    }
    if let Some(manifest) = manifest {
        for spec in &manifest.entries {
            if !genv.contains(&spec.name)
                && !report.decls.iter().any(|d| d.name == spec.name)
            {
                report.total_failures += 1;
                report.decls.push(DeclStatus {
                    name: spec.name.clone(),
                    file: spec.file.clone(),
                    diagnostic: Some(Diagnostic::new(
                        ErrorCode::Missing,
                        format!(
                            "declaration `{}` required by the manifest is missing from the corpus",
                            spec.name
                        ),
                    )),
                });
            }
        }
    }
    (report, genv)
}

/// Parse and check a manifest-described corpus in one step.
pub fn check_corpus(
    manifest: &CorpusManifest,
    files: &[SourceFile],
    max_universe: u32,
) -> Result<(CheckReport, GlobalEnv)> {
    let parsed = parse_files(files)?;
    Ok(check_parsed(&parsed, Some(manifest), max_universe))
}

fn missing(name: &str) -> Diagnostic {
    Diagnostic::new(
        ErrorCode::Missing,
        format!("no declaration named `{}` has been checked", name),
    )
}

/// The β-normal form of a checked declaration's body. An axiom has no body
/// and is its own normal form: a neutral head.
pub fn nf_of(genv: &GlobalEnv, name: &str) -> Result<Term> {
    let entry = genv.lookup(name).ok_or_else(|| missing(name))?;
    match &entry.value {
        Some(v) => quote(genv, v, 0),
        None => Ok(Term::Global(entry.name.clone())),
    }
}

/// The β-normal form of a checked declaration's type.
pub fn type_of(genv: &GlobalEnv, name: &str) -> Result<Term> {
    let entry = genv.lookup(name).ok_or_else(|| missing(name))?;
    quote(genv, &entry.ty, 0)
}
