//! Surface abstract syntax (named variables, implicit-binder markers, holes)
//! and the deterministic precedence-aware printer.
//!
//! Equality on surface terms ignores spans, so "structurally equal up to
//! span erasure" is plain `==`. Printing then re-parsing any surface term
//! yields an equal term; the printer emits no redundant parentheses.

use crate::diag::SourceSpan;
use crate::syntax::Name;
use std::fmt::Write as _;

/// Built-in type formers, constructors, and eliminators. They parse as
/// atoms and are applied through the ordinary application form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prim {
    Nat,
    Zero,
    Succ,
    NatRec,
    Unit,
    Star,
    UnitRec,
    Empty,
    EmptyRec,
    Bool,
    True,
    False,
    BoolRec,
    Id,
    Refl,
    J,
    Fst,
    Snd,
}

impl Prim {
    /// Number of arguments the primitive's core form takes.
    pub fn arity(self) -> usize {
        use Prim::*;
        match self {
            Nat | Zero | Unit | Star | Empty | Bool | True | False => 0,
            Succ | Fst | Snd => 1,
            EmptyRec | Refl => 2,
            UnitRec | Id => 3,
            NatRec | BoolRec => 4,
            J => 5,
        }
    }

    /// The surface keyword for this primitive.
    pub fn keyword(self) -> &'static str {
        use Prim::*;
        match self {
            Nat => "Nat",
            Zero => "zero",
            Succ => "succ",
            NatRec => "natrec",
            Unit => "Unit",
            Star => "star",
            UnitRec => "unitrec",
            Empty => "Empty",
            EmptyRec => "emptyrec",
            Bool => "Bool",
            True => "true",
            False => "false",
            BoolRec => "boolrec",
            Id => "Id",
            Refl => "refl",
            J => "J",
            Fst => "fst",
            Snd => "snd",
        }
    }

    /// Map a keyword back to its primitive, if it names one.
    pub fn from_keyword(kw: &str) -> Option<Prim> {
        use Prim::*;
        Some(match kw {
            "Nat" => Nat,
            "zero" => Zero,
            "succ" => Succ,
            "natrec" => NatRec,
            "Unit" => Unit,
            "star" => Star,
            "unitrec" => UnitRec,
            "Empty" => Empty,
            "emptyrec" => EmptyRec,
            "Bool" => Bool,
            "true" => True,
            "false" => False,
            "boolrec" => BoolRec,
            "Id" => Id,
            "refl" => Refl,
            "J" => J,
            "fst" => Fst,
            "snd" => Snd,
            _ => return None,
        })
    }
}

/// A surface term: a [`SurfaceKind`] with its source span.
#[derive(Debug, Clone)]
pub struct Surface {
    pub kind: SurfaceKind,
    pub span: SourceSpan,
}

impl PartialEq for Surface {
    /// Structural equality up to span erasure.
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Surface {}

/// The shape of a surface term. Binder names with the reserved spelling `"_"`
/// arise only from the `A -> B` / `A * B` sugar (binders cannot be named `_`
/// in the grammar), which is what lets the printer reproduce the sugar.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceKind {
    /// Named reference; `explicit` is true for `@name`, which disables all
    /// implicit-argument insertion at this head.
    Ref { name: Name, explicit: bool },
    /// `Type n`.
    Universe(u32),
    /// `_`: elaborates to a fresh metavariable.
    Hole,
    /// Built-in former/constructor/eliminator keyword.
    Prim(Prim),
    App(Box<Surface>, Box<Surface>),
    Lambda { name: Name, implicit: bool, ann: Option<Box<Surface>>, body: Box<Surface> },
    Pi { name: Name, implicit: bool, domain: Box<Surface>, codomain: Box<Surface> },
    Sigma { name: Name, first: Box<Surface>, second: Box<Surface> },
    /// `(a , b)` or `(a , b : S)`; the annotation makes the pair inferable.
    Pair { first: Box<Surface>, second: Box<Surface>, ann: Option<Box<Surface>> },
}

/// One parsed top-level declaration.
#[derive(Debug, Clone)]
pub struct SurfaceDecl {
    pub name: Name,
    pub is_axiom: bool,
    pub ty: Surface,
    /// Always present for `def`, always absent for `axiom`.
    pub body: Option<Surface>,
    pub name_span: SourceSpan,
    pub span: SourceSpan,
}

/// Precedence levels, loosest to tightest.
#[derive(PartialEq, PartialOrd, Clone, Copy)]
enum Level {
    Term = 0,
    Arrow = 1,
    App = 2,
    Atom = 3,
}

/// Render a surface term; `parse(tokenize(print(t)))` equals `t` up to spans.
pub fn print(t: &Surface) -> String {
    let mut out = String::new();
    go(t, Level::Term, &mut out);
    out
}

/// Render a declaration in the concrete syntax the parser accepts.
pub fn print_decl(d: &SurfaceDecl) -> String {
    match &d.body {
        Some(body) => format!("def {} : {} :=\n  {}\n", d.name, print(&d.ty), print(body)),
        None => format!("axiom {} : {}\n", d.name, print(&d.ty)),
    }
}

/// Render a whole file of declarations, blank-line separated.
pub fn print_file(decls: &[SurfaceDecl]) -> String {
    let mut out = String::new();
    for d in decls {
        out.push_str(&print_decl(d));
        out.push('\n');
    }
    out
}

fn go(t: &Surface, at: Level, out: &mut String) {
    let lvl = natural_level(t);
    if (lvl as i32) < (at as i32) {
        out.push('(');
        go(t, Level::Term, out);
        out.push(')');
        return;
    }
    match &t.kind {
        SurfaceKind::Ref { name, explicit } => {
            if *explicit {
                let _ = write!(out, "@{}", name);
            } else {
                out.push_str(name);
            }
        }
        SurfaceKind::Universe(n) => {
            let _ = write!(out, "Type {}", n);
        }
        SurfaceKind::Hole => out.push('_'),
        SurfaceKind::Prim(p) => out.push_str(p.keyword()),
        SurfaceKind::App(f, a) => {
            go(f, Level::App, out);
            out.push(' ');
            go(a, Level::Atom, out);
        }
        SurfaceKind::Lambda { name, implicit, ann, body } => {
            out.push_str("fun ");
            match (implicit, ann) {
                (false, None) => out.push_str(name),
                (false, Some(a)) => {
                    let _ = write!(out, "({} : ", name);
                    go(a, Level::Term, out);
                    out.push(')');
                }
                (true, None) => {
                    let _ = write!(out, "{{{}}}", name);
                }
                (true, Some(a)) => {
                    let _ = write!(out, "{{{} : ", name);
                    go(a, Level::Term, out);
                    out.push('}');
                }
            }
            out.push_str(" => ");
            go(body, Level::Term, out);
        }
        SurfaceKind::Pi { name, implicit, domain, codomain } => {
            if name.as_ref() == "_" {
                // Non-dependent sugar: `A -> B`.
                go(domain, Level::App, out);
                out.push_str(" -> ");
                go(codomain, Level::Arrow, out);
            } else {
                let (open, close) = if *implicit { ('{', '}') } else { ('(', ')') };
                let _ = write!(out, "Pi {}{} : ", open, name);
                go(domain, Level::Term, out);
                let _ = write!(out, "{} -> ", close);
                go(codomain, Level::Term, out);
            }
        }
        SurfaceKind::Sigma { name, first, second } => {
            if name.as_ref() == "_" {
                // Non-dependent sugar: `A * B`.
                go(first, Level::App, out);
                out.push_str(" * ");
                go(second, Level::Arrow, out);
            } else {
                let _ = write!(out, "Sigma ({} : ", name);
                go(first, Level::Term, out);
                out.push_str(") , ");
                go(second, Level::Term, out);
            }
        }
        SurfaceKind::Pair { first, second, ann } => {
            out.push('(');
            go(first, Level::Term, out);
            out.push_str(" , ");
            go(second, Level::Term, out);
            if let Some(a) = ann {
                out.push_str(" : ");
                go(a, Level::Term, out);
            }
            out.push(')');
        }
    }
}

fn natural_level(t: &Surface) -> Level {
    match &t.kind {
        SurfaceKind::Ref { explicit, .. } => {
            if *explicit {
                // `@f` is an application-head form, not an atom.
                Level::App
            } else {
                Level::Atom
            }
        }
        SurfaceKind::Hole | SurfaceKind::Prim(_) | SurfaceKind::Pair { .. } => Level::Atom,
        // `Type n` is an atom in the grammar.
        SurfaceKind::Universe(_) => Level::Atom,
        SurfaceKind::App(..) => Level::App,
        SurfaceKind::Pi { name, .. } | SurfaceKind::Sigma { name, .. } => {
            if name.as_ref() == "_" {
                Level::Arrow
            } else {
                Level::Term
            }
        }
        SurfaceKind::Lambda { .. } => Level::Term,
    }
}
