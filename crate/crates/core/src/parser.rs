//! Recursive-descent parser from tokens to surface declarations.
//!
//! Grammar (application binds tighter than `->` / `*`, both of which are
//! right-associative at the same level; application is left-associative):
//!
//! ```text
//! file    := decl*
//! decl    := "def" ident ":" term ":=" term | "axiom" ident ":" term
//! term    := "fun" binder+ "=>" term
//!          | "Pi" tele "->" term
//!          | "Sigma" tele "," term
//!          | "let" ident ":" term ":=" term "in" term
//!          | arrow
//! arrow   := app ("->" arrow | "*" arrow)?
//! app     := "@" ident atom* | atom+
//! atom    := ident | "_" | primitive-keyword | "Type" natlit
//!          | "(" term ")" | "(" term "," term (":" term)? ")"
//! binder  := ident | "(" ident+ ":" term ")" | "{" ident+ (":" term)? "}"
//! tele    := ("(" ident+ ":" term ")" | "{" ident+ ":" term "}")+
//! ```
//!
//! `let x : T := e in b` desugars here to `(fun (x : T) => b) e`; there is no
//! let node downstream. Implicit binder groups (`{...}`) are allowed in `Pi`
//! telescopes and `fun` binders, not in `Sigma`.

use crate::diag::{Diagnostic, ErrorCode, Result, SourceSpan};
use crate::lexer::{Token, TokenKind};
use crate::surface::{Prim, Surface, SurfaceDecl, SurfaceKind};
use crate::syntax::Name;
use std::rc::Rc;

/// Parse a token stream (from one file) into declarations in file order.
pub fn parse(file: &str, tokens: &[Token]) -> Result<Vec<SurfaceDecl>> {
    let mut p = Parser { file: Rc::from(file), tokens, pos: 0 };
    let mut decls = Vec::new();
    while !p.at_end() {
        decls.push(p.decl()?);
    }
    Ok(decls)
}

/// Parse a single term from a complete token stream (used by tests/tools).
pub fn parse_term(file: &str, tokens: &[Token]) -> Result<Surface> {
    let mut p = Parser { file: Rc::from(file), tokens, pos: 0 };
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.err_here("expected end of input"));
    }
    Ok(t)
}

struct Parser<'a> {
    file: Rc<str>,
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Span to attach to an error at the current position.
    fn here(&self) -> SourceSpan {
        match self.peek() {
            Some(t) => t.span.clone(),
            None => match self.tokens.last() {
                Some(t) => t.span.clone(),
                None => SourceSpan::point(self.file.clone(), 1, 1),
            },
        }
    }

    fn err_here(&self, msg: impl Into<String>) -> Diagnostic {
        let msg = msg.into();
        let found = match self.peek() {
            Some(t) => format!("{}, found `{}`", msg, t.lexeme),
            None => format!("{}, found end of input", msg),
        };
        Diagnostic::at(ErrorCode::Parse, self.here(), found)
    }

    fn expect_sym(&mut self, sym: &str) -> Result<&'a Token> {
        match self.peek() {
            Some(t) if t.is_sym(sym) => Ok(self.next().unwrap()),
            _ => Err(self.err_here(format!("expected `{}`", sym))),
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<&'a Token> {
        match self.peek() {
            Some(t) if t.is_kw(kw) => Ok(self.next().unwrap()),
            _ => Err(self.err_here(format!("expected `{}`", kw))),
        }
    }

    fn expect_ident(&mut self) -> Result<(Name, SourceSpan)> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                let t = self.next().unwrap();
                Ok((Rc::from(t.lexeme.as_str()), t.span.clone()))
            }
            _ => Err(self.err_here("expected an identifier")),
        }
    }

    fn decl(&mut self) -> Result<SurfaceDecl> {
        let kw = match self.peek() {
            Some(t) if t.is_kw("def") || t.is_kw("axiom") => self.next().unwrap(),
            _ => return Err(self.err_here("expected `def` or `axiom`")),
        };
        let is_axiom = kw.lexeme == "axiom";
        let (name, name_span) = self.expect_ident()?;
        self.expect_sym(":")?;
        let ty = self.term()?;
        let body = if is_axiom {
            if matches!(self.peek(), Some(t) if t.is_sym(":=")) {
                return Err(self.err_here("axioms do not take a body"));
            }
            None
        } else {
            self.expect_sym(":=")?;
            Some(self.term()?)
        };
        let end_span = body.as_ref().map(|b| b.span.clone()).unwrap_or_else(|| ty.span.clone());
        let span = kw.span.join(&end_span);
        Ok(SurfaceDecl { name, is_axiom, ty, body, name_span, span })
    }

    fn term(&mut self) -> Result<Surface> {
        match self.peek() {
            Some(t) if t.is_kw("fun") => self.fun_term(),
            Some(t) if t.is_kw("Pi") => self.pi_term(),
            Some(t) if t.is_kw("Sigma") => self.sigma_term(),
            Some(t) if t.is_kw("let") => self.let_term(),
            _ => self.arrow(),
        }
    }

    /// One `fun` binder group; returns (names, annotation, implicit).
    fn fun_binder(&mut self) -> Result<(Vec<(Name, SourceSpan)>, Option<Surface>, bool)> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                let (n, sp) = self.expect_ident()?;
                Ok((vec![(n, sp)], None, false))
            }
            Some(t) if t.is_sym("(") => {
                self.next();
                let names = self.ident_list()?;
                self.expect_sym(":")?;
                let ann = self.term()?;
                self.expect_sym(")")?;
                Ok((names, Some(ann), false))
            }
            Some(t) if t.is_sym("{") => {
                self.next();
                let names = self.ident_list()?;
                let ann = if matches!(self.peek(), Some(t) if t.is_sym(":")) {
                    self.next();
                    Some(self.term()?)
                } else {
                    None
                };
                self.expect_sym("}")?;
                Ok((names, ann, true))
            }
            _ => Err(self.err_here("expected a binder")),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<(Name, SourceSpan)>> {
        let mut names = vec![self.expect_ident()?];
        while matches!(self.peek(), Some(t) if t.kind == TokenKind::Ident) {
            names.push(self.expect_ident()?);
        }
        Ok(names)
    }

    fn fun_term(&mut self) -> Result<Surface> {
        let start = self.expect_kw("fun")?.span.clone();
        let mut groups = vec![self.fun_binder()?];
        while !matches!(self.peek(), Some(t) if t.is_sym("=>")) {
            groups.push(self.fun_binder()?);
        }
        self.expect_sym("=>")?;
        let body = self.term()?;
        let span = start.join(&body.span);
        let mut result = body;
        for (names, ann, implicit) in groups.into_iter().rev() {
            for (name, _) in names.into_iter().rev() {
                result = Surface {
                    kind: SurfaceKind::Lambda {
                        name,
                        implicit,
                        ann: ann.clone().map(Box::new),
                        body: Box::new(result),
                    },
                    span: span.clone(),
                };
            }
        }
        Ok(result)
    }

    /// A telescope: one or more `(x y : T)` / `{x y : T}` groups.
    fn tele(&mut self, allow_implicit: bool) -> Result<Vec<(Name, Surface, bool)>> {
        let mut binders = Vec::new();
        loop {
            let implicit = match self.peek() {
                Some(t) if t.is_sym("(") => false,
                Some(t) if t.is_sym("{") => {
                    if !allow_implicit {
                        return Err(self.err_here("binders here cannot be implicit"));
                    }
                    true
                }
                _ => break,
            };
            self.next();
            let names = self.ident_list()?;
            self.expect_sym(":")?;
            let ty = self.term()?;
            self.expect_sym(if implicit { "}" } else { ")" })?;
            for (name, _) in names {
                binders.push((name, ty.clone(), implicit));
            }
        }
        if binders.is_empty() {
            return Err(self.err_here("expected a binder group `(x : T)`"));
        }
        Ok(binders)
    }

    fn pi_term(&mut self) -> Result<Surface> {
        let start = self.expect_kw("Pi")?.span.clone();
        let binders = self.tele(true)?;
        self.expect_sym("->")?;
        let body = self.term()?;
        let span = start.join(&body.span);
        let mut result = body;
        for (name, dom, implicit) in binders.into_iter().rev() {
            result = Surface {
                kind: SurfaceKind::Pi {
                    name,
                    implicit,
                    domain: Box::new(dom),
                    codomain: Box::new(result),
                },
                span: span.clone(),
            };
        }
        Ok(result)
    }

    fn sigma_term(&mut self) -> Result<Surface> {
        let start = self.expect_kw("Sigma")?.span.clone();
        let binders = self.tele(false)?;
        self.expect_sym(",")?;
        let body = self.term()?;
        let span = start.join(&body.span);
        let mut result = body;
        for (name, first, _) in binders.into_iter().rev() {
            result = Surface {
                kind: SurfaceKind::Sigma { name, first: Box::new(first), second: Box::new(result) },
                span: span.clone(),
            };
        }
        Ok(result)
    }

    fn let_term(&mut self) -> Result<Surface> {
        let start = self.expect_kw("let")?.span.clone();
        let (name, _) = self.expect_ident()?;
        self.expect_sym(":")?;
        let ann = self.term()?;
        self.expect_sym(":=")?;
        let value = self.term()?;
        self.expect_kw("in")?;
        let body = self.term()?;
        let span = start.join(&body.span);
        // Desugar: `let x : T := e in b` becomes `(fun (x : T) => b) e`.
        let lam = Surface {
            kind: SurfaceKind::Lambda {
                name,
                implicit: false,
                ann: Some(Box::new(ann)),
                body: Box::new(body),
            },
            span: span.clone(),
        };
        Ok(Surface { kind: SurfaceKind::App(Box::new(lam), Box::new(value)), span })
    }

    fn arrow(&mut self) -> Result<Surface> {
        let lhs = self.app()?;
        let (is_arrow, is_star) = match self.peek() {
            Some(t) if t.is_sym("->") => (true, false),
            Some(t) if t.is_sym("*") => (false, true),
            _ => (false, false),
        };
        if !is_arrow && !is_star {
            return Ok(lhs);
        }
        self.next();
        let rhs = self.arrow()?;
        let span = lhs.span.join(&rhs.span);
        let name: Name = Rc::from("_");
        let kind = if is_arrow {
            SurfaceKind::Pi {
                name,
                implicit: false,
                domain: Box::new(lhs),
                codomain: Box::new(rhs),
            }
        } else {
            SurfaceKind::Sigma { name, first: Box::new(lhs), second: Box::new(rhs) }
        };
        Ok(Surface { kind, span })
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(t) => match t.kind {
                TokenKind::Ident => true,
                TokenKind::Keyword => {
                    Prim::from_keyword(&t.lexeme).is_some() || t.lexeme == "Type"
                }
                TokenKind::Symbol => t.lexeme == "(" || t.lexeme == "_",
                TokenKind::NatLit => false,
            },
            None => false,
        }
    }

    fn app(&mut self) -> Result<Surface> {
        let head = if matches!(self.peek(), Some(t) if t.is_sym("@")) {
            let at = self.next().unwrap();
            let (name, sp) = self.expect_ident()?;
            Surface { kind: SurfaceKind::Ref { name, explicit: true }, span: at.span.join(&sp) }
        } else if self.starts_atom() {
            self.atom()?
        } else {
            return Err(self.err_here("expected a term"));
        };
        let mut result = head;
        while self.starts_atom() {
            let arg = self.atom()?;
            let span = result.span.join(&arg.span);
            result =
                Surface { kind: SurfaceKind::App(Box::new(result), Box::new(arg)), span };
        }
        Ok(result)
    }

    fn atom(&mut self) -> Result<Surface> {
        let t = self.peek().ok_or_else(|| self.err_here("expected a term"))?;
        match t.kind {
            TokenKind::Ident => {
                let t = self.next().unwrap();
                Ok(Surface {
                    kind: SurfaceKind::Ref { name: Rc::from(t.lexeme.as_str()), explicit: false },
                    span: t.span.clone(),
                })
            }
            TokenKind::Keyword if t.lexeme == "Type" => {
                let t = self.next().unwrap();
                let lit = match self.peek() {
                    Some(l) if l.kind == TokenKind::NatLit => self.next().unwrap(),
                    _ => return Err(self.err_here("expected a universe level after `Type`")),
                };
                let n: u32 = lit
                    .lexeme
                    .parse()
                    .map_err(|_| Diagnostic::at(
                        ErrorCode::Parse,
                        lit.span.clone(),
                        "universe level out of range",
                    ))?;
                Ok(Surface { kind: SurfaceKind::Universe(n), span: t.span.join(&lit.span) })
            }
            TokenKind::Keyword => {
                let t = self.next().unwrap();
                match Prim::from_keyword(&t.lexeme) {
                    Some(p) => Ok(Surface { kind: SurfaceKind::Prim(p), span: t.span.clone() }),
                    None => {
                        self.pos -= 1;
                        Err(self.err_here("expected a term"))
                    }
                }
            }
            TokenKind::Symbol if t.lexeme == "_" => {
                let t = self.next().unwrap();
                Ok(Surface { kind: SurfaceKind::Hole, span: t.span.clone() })
            }
            TokenKind::Symbol if t.lexeme == "(" => {
                let open = self.next().unwrap();
                let first = self.term()?;
                if matches!(self.peek(), Some(t) if t.is_sym(",")) {
                    self.next();
                    let second = self.term()?;
                    let ann = if matches!(self.peek(), Some(t) if t.is_sym(":")) {
                        self.next();
                        Some(Box::new(self.term()?))
                    } else {
                        None
                    };
                    let close = self.expect_sym(")")?;
                    Ok(Surface {
                        kind: SurfaceKind::Pair {
                            first: Box::new(first),
                            second: Box::new(second),
                            ann,
                        },
                        span: open.span.join(&close.span),
                    })
                } else {
                    let close = self.expect_sym(")")?;
                    Ok(Surface { kind: first.kind, span: open.span.join(&close.span) })
                }
            }
            _ => Err(self.err_here("expected a term")),
        }
    }
}
