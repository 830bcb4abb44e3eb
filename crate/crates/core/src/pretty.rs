//! Rendering core terms back to surface syntax, for `nf`/`type` output and
//! for the types quoted into diagnostics.
//!
//! De Bruijn indices become the binder names carried by the term, freshened
//! with primes when shadowed. Deterministic: the same term always renders to
//! the same text.

use crate::check::Context;
use crate::diag::SourceSpan;
use crate::eval::quote;
use crate::surface::{self, Prim, Surface, SurfaceKind};
use crate::syntax::{Name, Term};
use crate::value::{GlobalEnv, Value};
use std::rc::Rc;

fn dummy_span() -> SourceSpan {
    SourceSpan::point(Rc::from("<printer>"), 1, 1)
}

fn s(kind: SurfaceKind) -> Surface {
    Surface { kind, span: dummy_span() }
}

fn prim(p: Prim) -> Surface {
    s(SurfaceKind::Prim(p))
}

fn app(f: Surface, a: Surface) -> Surface {
    s(SurfaceKind::App(Box::new(f), Box::new(a)))
}

fn apps(head: Surface, args: Vec<Surface>) -> Surface {
    args.into_iter().fold(head, app)
}

/// Does `Var(ix)` occur free in `t`?
fn uses_var(t: &Term, ix: usize) -> bool {
    use Term::*;
    match t {
        Var(i) => *i == ix,
        Universe(_) | Nat | Zero | Unit | Star | Empty | Bool | True | False | Global(_)
        | Meta(_) => false,
        Pi(_, d, c, _) | Sigma(_, d, c) => uses_var(d, ix) || uses_var(c, ix + 1),
        Lambda(_, b) => uses_var(b, ix + 1),
        App(f, a) | Pair(f, a) => uses_var(f, ix) || uses_var(a, ix),
        Fst(a) | Snd(a) | Succ(a) => uses_var(a, ix),
        Id(ty, l, r) => uses_var(ty, ix) || uses_var(l, ix) || uses_var(r, ix),
        Refl(ty, p) => uses_var(ty, ix) || uses_var(p, ix),
        J(m, b, l, r, p) => {
            uses_var(m, ix) || uses_var(b, ix) || uses_var(l, ix) || uses_var(r, ix)
                || uses_var(p, ix)
        }
        NatRec(m, z, sc, n) => {
            uses_var(m, ix) || uses_var(z, ix) || uses_var(sc, ix) || uses_var(n, ix)
        }
        UnitRec(m, c, u) => uses_var(m, ix) || uses_var(c, ix) || uses_var(u, ix),
        EmptyRec(m, e) => uses_var(m, ix) || uses_var(e, ix),
        BoolRec(m, tc, fc, b) => {
            uses_var(m, ix) || uses_var(tc, ix) || uses_var(fc, ix) || uses_var(b, ix)
        }
    }
}

/// Pick a display name not already on the stack, priming until fresh.
fn freshen(stack: &[Name], base: &str) -> Name {
    let base = if base.is_empty() || base == "_" { "x" } else { base };
    let mut candidate = base.to_string();
    while stack.iter().any(|n| n.as_ref() == candidate) {
        candidate.push('\'');
    }
    Rc::from(candidate.as_str())
}

/// Convert a core term at the given binder-name stack (outermost first) into
/// surface syntax.
pub fn term_to_surface(stack: &mut Vec<Name>, t: &Term) -> Surface {
    match t {
        Term::Var(ix) => {
            let name = stack
                .get(stack.len().wrapping_sub(1 + ix))
                .cloned()
                .unwrap_or_else(|| Rc::from(format!("#{}", ix).as_str()));
            s(SurfaceKind::Ref { name, explicit: false })
        }
        Term::Universe(l) => s(SurfaceKind::Universe(*l)),
        Term::Pi(name, dom, cod, implicit) => {
            let domain = Box::new(term_to_surface(stack, dom));
            let display: Name = if name.as_ref() == "_" && !uses_var(cod, 0) {
                Rc::from("_")
            } else {
                freshen(stack, name)
            };
            stack.push(display.clone());
            let codomain = Box::new(term_to_surface(stack, cod));
            stack.pop();
            s(SurfaceKind::Pi { name: display, implicit: *implicit, domain, codomain })
        }
        Term::Lambda(name, body) => {
            let display = freshen(stack, name);
            stack.push(display.clone());
            let body = Box::new(term_to_surface(stack, body));
            stack.pop();
            s(SurfaceKind::Lambda { name: display, implicit: false, ann: None, body })
        }
        Term::App(f, a) => app(term_to_surface(stack, f), term_to_surface(stack, a)),
        Term::Sigma(name, first, second) => {
            let first_s = Box::new(term_to_surface(stack, first));
            let display: Name = if name.as_ref() == "_" && !uses_var(second, 0) {
                Rc::from("_")
            } else {
                freshen(stack, name)
            };
            stack.push(display.clone());
            let second_s = Box::new(term_to_surface(stack, second));
            stack.pop();
            s(SurfaceKind::Sigma { name: display, first: first_s, second: second_s })
        }
        Term::Pair(a, b) => s(SurfaceKind::Pair {
            first: Box::new(term_to_surface(stack, a)),
            second: Box::new(term_to_surface(stack, b)),
            ann: None,
        }),
        Term::Fst(p) => app(prim(Prim::Fst), term_to_surface(stack, p)),
        Term::Snd(p) => app(prim(Prim::Snd), term_to_surface(stack, p)),
        Term::Id(ty, l, r) => apps(
            prim(Prim::Id),
            vec![
                term_to_surface(stack, ty),
                term_to_surface(stack, l),
                term_to_surface(stack, r),
            ],
        ),
        Term::Refl(ty, p) => apps(
            prim(Prim::Refl),
            vec![term_to_surface(stack, ty), term_to_surface(stack, p)],
        ),
        Term::J(m, b, l, r, p) => apps(
            prim(Prim::J),
            vec![
                term_to_surface(stack, m),
                term_to_surface(stack, b),
                term_to_surface(stack, l),
                term_to_surface(stack, r),
                term_to_surface(stack, p),
            ],
        ),
        Term::Nat => prim(Prim::Nat),
        Term::Zero => prim(Prim::Zero),
        Term::Succ(n) => app(prim(Prim::Succ), term_to_surface(stack, n)),
        Term::NatRec(m, z, sc, n) => apps(
            prim(Prim::NatRec),
            vec![
                term_to_surface(stack, m),
                term_to_surface(stack, z),
                term_to_surface(stack, sc),
                term_to_surface(stack, n),
            ],
        ),
        Term::Unit => prim(Prim::Unit),
        Term::Star => prim(Prim::Star),
        Term::UnitRec(m, c, u) => apps(
            prim(Prim::UnitRec),
            vec![
                term_to_surface(stack, m),
                term_to_surface(stack, c),
                term_to_surface(stack, u),
            ],
        ),
        Term::Empty => prim(Prim::Empty),
        Term::EmptyRec(m, e) => apps(
            prim(Prim::EmptyRec),
            vec![term_to_surface(stack, m), term_to_surface(stack, e)],
        ),
        Term::Bool => prim(Prim::Bool),
        Term::True => prim(Prim::True),
        Term::False => prim(Prim::False),
        Term::BoolRec(m, tc, fc, b) => apps(
            prim(Prim::BoolRec),
            vec![
                term_to_surface(stack, m),
                term_to_surface(stack, tc),
                term_to_surface(stack, fc),
                term_to_surface(stack, b),
            ],
        ),
        Term::Global(name) => s(SurfaceKind::Ref { name: name.clone(), explicit: false }),
        Term::Meta(id) => {
            s(SurfaceKind::Ref { name: Rc::from(format!("?{}", id).as_str()), explicit: false })
        }
    }
}

/// Render a core term under the given binder names (outermost first).
pub fn render_term(names: &[Name], t: &Term) -> String {
    let mut stack = names.to_vec();
    surface::print(&term_to_surface(&mut stack, t))
}

/// Render a closed core term.
pub fn render_closed(t: &Term) -> String {
    render_term(&[], t)
}

/// Quote a value in a context and render it; used in diagnostics, where a
/// broken value must not mask the original error.
pub fn render_value(genv: &GlobalEnv, ctx: &Context, v: &Value) -> String {
    match quote(genv, v, ctx.depth()) {
        Ok(t) => render_term(&ctx.names(), &t),
        Err(_) => "<unprintable>".to_string(),
    }
}
