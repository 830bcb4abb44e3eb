//! First-order unification against the metavariable store.
//!
//! `force` resolves solved-meta heads so values can be matched on; `unify`
//! solves bare metas and recurses structurally, deferring to definitional
//! conversion when nothing flexible remains; `zonk` splices the solutions
//! back into an elaborated term, rejecting anything left unsolved.
//!
//! A meta's solution may mention only the variables below the meta's creation
//! depth. `quote_forcing` — the solution validator and the splicing engine —
//! enforces that, together with the occurs-check. Solutions are not re-typed
//! here: both sides of every unification problem already share a type, and the
//! kernel re-checks every elaborated declaration from scratch anyway.

use crate::check::Context;
use crate::convert::convert;
use crate::diag::{Diagnostic, ErrorCode, Result};
use crate::eval::{apply, apply_closure, apply_frame, do_fst, do_snd};
use crate::meta::MetaContext;
use crate::pretty::render_term;
use crate::syntax::{Name, Term};
use crate::value::{Frame, GlobalEnv, Head, Value};
use std::rc::Rc;

/// Resolve the head of `v` against the current solutions: while it is a
/// neutral whose head is a solved meta, splice the solution in and replay the
/// spine. Leaves every other value untouched.
pub fn force(genv: &GlobalEnv, metas: &MetaContext, v: Value) -> Result<Value> {
    let mut v = v;
    loop {
        match &v {
            Value::Neutral(Head::Meta(id), spine) => match metas.solution(*id) {
                Some(solution) => {
                    let mut current = solution.clone();
                    for frame in spine.iter() {
                        current = apply_frame(genv, &current, frame)?;
                    }
                    v = current;
                }
                None => return Ok(v),
            },
            _ => return Ok(v),
        }
    }
}

fn scope_error(id: u32) -> Diagnostic {
    Diagnostic::new(
        ErrorCode::Unify,
        format!(
            "cannot solve metavariable ?{}: the candidate solution mentions a variable bound inside the metavariable's scope",
            id
        ),
    )
}

fn occurs_error(id: u32) -> Diagnostic {
    Diagnostic::new(
        ErrorCode::Occurs,
        format!("cannot solve metavariable ?{}: the candidate solution contains ?{} itself", id, id),
    )
}

/// Quote `v` at `depth` while forcing every node against the solutions.
///
/// `occurs` is the meta currently being solved: meeting it is a cyclic
/// solution (E-OCCURS). Locals at or above `depth` are out of scope for that
/// solution (E-UNIFY). Unsolved metas other than `occurs` quote to `Meta`
/// nodes. With `occurs = None` this is the zonk engine: solved metas are
/// expanded transitively, so the result contains `Meta` only for unsolved ids.
pub fn quote_forcing(
    genv: &GlobalEnv,
    metas: &MetaContext,
    v: &Value,
    depth: usize,
    occurs: Option<u32>,
) -> Result<Term> {
    let v = force(genv, metas, v.clone())?;
    match &v {
        Value::Universe(l) => Ok(Term::Universe(*l)),
        Value::Pi(dom, cod, implicit) => {
            let dom_t = quote_forcing(genv, metas, dom, depth, occurs)?;
            let body = apply_closure(genv, cod, Value::local(depth))?;
            let cod_t = quote_forcing(genv, metas, &body, depth + 1, occurs)?;
            Ok(Term::Pi(cod.name.clone(), Rc::new(dom_t), Rc::new(cod_t), *implicit))
        }
        Value::Lambda(cl) => {
            let body = apply_closure(genv, cl, Value::local(depth))?;
            let body_t = quote_forcing(genv, metas, &body, depth + 1, occurs)?;
            Ok(Term::Lambda(cl.name.clone(), Rc::new(body_t)))
        }
        Value::Sigma(first, second) => {
            let first_t = quote_forcing(genv, metas, first, depth, occurs)?;
            let body = apply_closure(genv, second, Value::local(depth))?;
            let second_t = quote_forcing(genv, metas, &body, depth + 1, occurs)?;
            Ok(Term::Sigma(second.name.clone(), Rc::new(first_t), Rc::new(second_t)))
        }
        Value::Pair(a, b) => Ok(Term::Pair(
            Rc::new(quote_forcing(genv, metas, a, depth, occurs)?),
            Rc::new(quote_forcing(genv, metas, b, depth, occurs)?),
        )),
        Value::Id(ty, l, r) => Ok(Term::Id(
            Rc::new(quote_forcing(genv, metas, ty, depth, occurs)?),
            Rc::new(quote_forcing(genv, metas, l, depth, occurs)?),
            Rc::new(quote_forcing(genv, metas, r, depth, occurs)?),
        )),
        Value::Refl(ty, p) => Ok(Term::Refl(
            Rc::new(quote_forcing(genv, metas, ty, depth, occurs)?),
            Rc::new(quote_forcing(genv, metas, p, depth, occurs)?),
        )),
        Value::Nat => Ok(Term::Nat),
        Value::Zero => Ok(Term::Zero),
        Value::Succ(n) => Ok(Term::Succ(Rc::new(quote_forcing(genv, metas, n, depth, occurs)?))),
        Value::Unit => Ok(Term::Unit),
        Value::Star => Ok(Term::Star),
        Value::Empty => Ok(Term::Empty),
        Value::Bool => Ok(Term::Bool),
        Value::True => Ok(Term::True),
        Value::False => Ok(Term::False),
        Value::Neutral(head, spine) => {
            let mut t = match head {
                Head::Local(level) => {
                    if *level >= depth {
                        return Err(match occurs {
                            Some(id) => scope_error(id),
                            None => Diagnostic::new(
                                ErrorCode::Unify,
                                "metavariable solution mentions a variable that is not in scope at its use site"
                                    .to_string(),
                            ),
                        });
                    }
                    Term::Var(depth - 1 - level)
                }
                Head::Global(name) => Term::Global(name.clone()),
                Head::Meta(id) => {
                    if occurs == Some(*id) {
                        return Err(occurs_error(*id));
                    }
                    Term::Meta(*id)
                }
            };
            for frame in spine.iter() {
                t = quote_frame(genv, metas, t, frame, depth, occurs)?;
            }
            Ok(t)
        }
    }
}

fn quote_frame(
    genv: &GlobalEnv,
    metas: &MetaContext,
    head: Term,
    frame: &Frame,
    depth: usize,
    occurs: Option<u32>,
) -> Result<Term> {
    let q = |v: &Value| quote_forcing(genv, metas, v, depth, occurs);
    Ok(match frame {
        Frame::App(a) => Term::App(Rc::new(head), Rc::new(q(a)?)),
        Frame::Fst => Term::Fst(Rc::new(head)),
        Frame::Snd => Term::Snd(Rc::new(head)),
        Frame::J { motive, base, lhs, rhs } => Term::J(
            Rc::new(q(motive)?),
            Rc::new(q(base)?),
            Rc::new(q(lhs)?),
            Rc::new(q(rhs)?),
            Rc::new(head),
        ),
        Frame::NatRec { motive, zero, succ } => Term::NatRec(
            Rc::new(q(motive)?),
            Rc::new(q(zero)?),
            Rc::new(q(succ)?),
            Rc::new(head),
        ),
        Frame::BoolRec { motive, tcase, fcase } => Term::BoolRec(
            Rc::new(q(motive)?),
            Rc::new(q(tcase)?),
            Rc::new(q(fcase)?),
            Rc::new(head),
        ),
        Frame::UnitRec { motive, case } => {
            Term::UnitRec(Rc::new(q(motive)?), Rc::new(q(case)?), Rc::new(head))
        }
        Frame::EmptyRec { motive } => Term::EmptyRec(Rc::new(q(motive)?), Rc::new(head)),
    })
}

/// Unification state: the global environment, the mutable meta store, and the
/// binder names currently in scope (whose length is the de Bruijn depth).
pub struct Unifier<'g, 'm> {
    genv: &'g GlobalEnv,
    metas: &'m mut MetaContext,
    names: Vec<Name>,
}

impl<'g, 'm> Unifier<'g, 'm> {
    pub fn new(genv: &'g GlobalEnv, metas: &'m mut MetaContext, names: Vec<Name>) -> Self {
        Unifier { genv, metas, names }
    }

    fn depth(&self) -> usize {
        self.names.len()
    }

    fn render(&self, v: &Value) -> String {
        match quote_forcing(self.genv, self.metas, v, self.depth(), None) {
            Ok(t) => render_term(&self.names, &t),
            Err(_) => "<unprintable>".to_string(),
        }
    }

    fn mismatch(&self, l: &Value, r: &Value) -> Diagnostic {
        Diagnostic::new(
            ErrorCode::Unify,
            format!("cannot unify `{}` with `{}`", self.render(l), self.render(r)),
        )
    }

    /// Solve `?id := v` after validating scope and the occurs-check.
    fn solve(&mut self, id: u32, v: &Value) -> Result<()> {
        let meta_depth = self.metas.entry(id).depth;
        quote_forcing(self.genv, self.metas, v, meta_depth, Some(id))?;
        self.metas.solve(id, v.clone());
        Ok(())
    }

    /// Make `l` and `r` definitionally equal, solving metas where needed.
    pub fn unify(&mut self, l: &Value, r: &Value) -> Result<()> {
        let l = force(self.genv, self.metas, l.clone())?;
        let r = force(self.genv, self.metas, r.clone())?;
        match (&l, &r) {
            (Value::Neutral(Head::Meta(a), sl), Value::Neutral(Head::Meta(b), sr))
                if sl.is_empty() && sr.is_empty() =>
            {
                if a == b {
                    Ok(())
                } else {
                    self.solve(*a, &r)
                }
            }
            (Value::Neutral(Head::Meta(id), spine), _) if spine.is_empty() => self.solve(*id, &r),
            (_, Value::Neutral(Head::Meta(id), spine)) if spine.is_empty() => self.solve(*id, &l),
            (Value::Pi(d1, c1, i1), Value::Pi(d2, c2, i2)) if i1 == i2 => {
                self.unify(d1, d2)?;
                self.under(&c1.name.clone(), |u, fresh| {
                    let b1 = apply_closure(u.genv, c1, fresh.clone())?;
                    let b2 = apply_closure(u.genv, c2, fresh)?;
                    u.unify(&b1, &b2)
                })
            }
            (Value::Sigma(f1, s1), Value::Sigma(f2, s2)) => {
                self.unify(f1, f2)?;
                self.under(&s1.name.clone(), |u, fresh| {
                    let b1 = apply_closure(u.genv, s1, fresh.clone())?;
                    let b2 = apply_closure(u.genv, s2, fresh)?;
                    u.unify(&b1, &b2)
                })
            }
            (Value::Lambda(c1), Value::Lambda(c2)) => self.under(&c1.name.clone(), |u, fresh| {
                let b1 = apply_closure(u.genv, c1, fresh.clone())?;
                let b2 = apply_closure(u.genv, c2, fresh)?;
                u.unify(&b1, &b2)
            }),
            (Value::Lambda(cl), _) => self.under(&cl.name.clone(), |u, fresh| {
                let b1 = apply_closure(u.genv, cl, fresh.clone())?;
                let b2 = apply(u.genv, &r, fresh)?;
                u.unify(&b1, &b2)
            }),
            (_, Value::Lambda(cl)) => self.under(&cl.name.clone(), |u, fresh| {
                let b1 = apply(u.genv, &l, fresh.clone())?;
                let b2 = apply_closure(u.genv, cl, fresh)?;
                u.unify(&b1, &b2)
            }),
            (Value::Pair(a1, b1), Value::Pair(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            (Value::Pair(a1, b1), _) => {
                self.unify(a1, &do_fst(&r)?)?;
                self.unify(b1, &do_snd(&r)?)
            }
            (_, Value::Pair(a2, b2)) => {
                self.unify(&do_fst(&l)?, a2)?;
                self.unify(&do_snd(&l)?, b2)
            }
            (Value::Id(t1, l1, r1), Value::Id(t2, l2, r2)) => {
                self.unify(t1, t2)?;
                self.unify(l1, l2)?;
                self.unify(r1, r2)
            }
            (Value::Refl(_, p1), Value::Refl(_, p2)) => self.unify(p1, p2),
            (Value::Succ(a), Value::Succ(b)) => self.unify(a, b),
            (Value::Neutral(h1, s1), Value::Neutral(h2, s2))
                if h1 == h2 && s1.len() == s2.len() =>
            {
                for (f1, f2) in s1.iter().zip(s2.iter()) {
                    self.unify_frame(f1, f2, &l, &r)?;
                }
                Ok(())
            }
            _ => {
                if convert(self.genv, self.depth(), &l, &r)? {
                    Ok(())
                } else {
                    Err(self.mismatch(&l, &r))
                }
            }
        }
    }

    fn unify_frame(&mut self, f1: &Frame, f2: &Frame, l: &Value, r: &Value) -> Result<()> {
        match (f1, f2) {
            (Frame::App(a), Frame::App(b)) => self.unify(a, b),
            (Frame::Fst, Frame::Fst) | (Frame::Snd, Frame::Snd) => Ok(()),
            (
                Frame::J { motive: m1, base: b1, lhs: l1, rhs: r1 },
                Frame::J { motive: m2, base: b2, lhs: l2, rhs: r2 },
            ) => {
                self.unify(m1, m2)?;
                self.unify(b1, b2)?;
                self.unify(l1, l2)?;
                self.unify(r1, r2)
            }
            (
                Frame::NatRec { motive: m1, zero: z1, succ: s1 },
                Frame::NatRec { motive: m2, zero: z2, succ: s2 },
            ) => {
                self.unify(m1, m2)?;
                self.unify(z1, z2)?;
                self.unify(s1, s2)
            }
            (
                Frame::BoolRec { motive: m1, tcase: t1, fcase: fc1 },
                Frame::BoolRec { motive: m2, tcase: t2, fcase: fc2 },
            ) => {
                self.unify(m1, m2)?;
                self.unify(t1, t2)?;
                self.unify(fc1, fc2)
            }
            (
                Frame::UnitRec { motive: m1, case: c1 },
                Frame::UnitRec { motive: m2, case: c2 },
            ) => {
                self.unify(m1, m2)?;
                self.unify(c1, c2)
            }
            (Frame::EmptyRec { motive: m1 }, Frame::EmptyRec { motive: m2 }) => {
                self.unify(m1, m2)
            }
            _ => Err(self.mismatch(l, r)),
        }
    }

    /// Run `f` one binder deeper, handing it the fresh local for that level.
    fn under<F>(&mut self, name: &Name, f: F) -> Result<()>
    where
        F: FnOnce(&mut Self, Value) -> Result<()>,
    {
        let fresh = Value::local(self.depth());
        self.names.push(name.clone());
        let result = f(self, fresh);
        self.names.pop();
        result
    }
}

/// Unify two values in a checking context.
pub fn unify_in(
    genv: &GlobalEnv,
    metas: &mut MetaContext,
    ctx: &Context,
    l: &Value,
    r: &Value,
) -> Result<()> {
    Unifier::new(genv, metas, ctx.names()).unify(l, r)
}

/// Accept `inferred` where `expected` is wanted: a universe fits any larger
/// universe; everything else must unify.
pub fn subsume(
    genv: &GlobalEnv,
    metas: &mut MetaContext,
    ctx: &Context,
    inferred: &Value,
    expected: &Value,
) -> Result<()> {
    let inferred = force(genv, metas, inferred.clone())?;
    let expected = force(genv, metas, expected.clone())?;
    match (&inferred, &expected) {
        (Value::Universe(i), Value::Universe(j)) => {
            if i <= j {
                Ok(())
            } else {
                Err(Diagnostic::new(
                    ErrorCode::Universe,
                    format!("Type {} does not fit in Type {}", i, j),
                ))
            }
        }
        _ => unify_in(genv, metas, ctx, &inferred, &expected),
    }
}

/// Replace every `Meta` node in `t` (which sits under `depth` binders) by the
/// quote of its solution; solutions are spliced transitively. Any meta still
/// unsolved is reported as E-UNSOLVED at its origin span, with its type.
pub fn zonk(genv: &GlobalEnv, metas: &MetaContext, t: &Term, depth: usize) -> Result<Term> {
    splice(genv, metas, t, depth, true)
}

/// Like `zonk`, but tolerant: unsolved metas stay behind as `Meta` nodes.
///
/// A solution may mention variables bound *inside* `t`, and a `Meta` node
/// evaluates without consulting the store — so a term that will be
/// instantiated under its binders (an eliminator motive) must have its
/// solutions spliced in first, or they would keep pointing at the original
/// binder levels after the substitution.
pub fn splice_solved(
    genv: &GlobalEnv,
    metas: &MetaContext,
    t: &Term,
    depth: usize,
) -> Result<Term> {
    splice(genv, metas, t, depth, false)
}

fn splice(
    genv: &GlobalEnv,
    metas: &MetaContext,
    t: &Term,
    depth: usize,
    strict: bool,
) -> Result<Term> {
    use Term::*;
    let rc = |t: Result<Term>| t.map(Rc::new);
    match t {
        Meta(id) => match metas.solution(*id) {
            None if !strict => Ok(t.clone()),
            None => {
                let entry = metas.entry(*id);
                let shown = match quote_forcing(genv, metas, &entry.ty, entry.depth, None) {
                    Ok(ty_t) => render_term(&entry.names, &ty_t),
                    Err(_) => "<unprintable>".to_string(),
                };
                Err(Diagnostic::at(
                    ErrorCode::Unsolved,
                    entry.span.clone(),
                    format!("unsolved metavariable ?{}: could not infer a value of type `{}`", id, shown),
                ))
            }
            Some(solution) => {
                let spliced = quote_forcing(genv, metas, solution, depth, None)?;
                splice(genv, metas, &spliced, depth, strict)
            }
        },
        Var(_) | Universe(_) | Nat | Zero | Unit | Star | Empty | Bool | True | False
        | Global(_) => Ok(t.clone()),
        Pi(n, d, c, i) => Ok(Pi(
            n.clone(),
            rc(splice(genv, metas, d, depth, strict))?,
            rc(splice(genv, metas, c, depth + 1, strict))?,
            *i,
        )),
        Lambda(n, b) => Ok(Lambda(n.clone(), rc(splice(genv, metas, b, depth + 1, strict))?)),
        App(f, a) => Ok(App(
            rc(splice(genv, metas, f, depth, strict))?,
            rc(splice(genv, metas, a, depth, strict))?,
        )),
        Sigma(n, f, s) => Ok(Sigma(
            n.clone(),
            rc(splice(genv, metas, f, depth, strict))?,
            rc(splice(genv, metas, s, depth + 1, strict))?,
        )),
        Pair(a, b) => Ok(Pair(
            rc(splice(genv, metas, a, depth, strict))?,
            rc(splice(genv, metas, b, depth, strict))?,
        )),
        Fst(p) => Ok(Fst(rc(splice(genv, metas, p, depth, strict))?)),
        Snd(p) => Ok(Snd(rc(splice(genv, metas, p, depth, strict))?)),
        Id(ty, a, b) => Ok(Id(
            rc(splice(genv, metas, ty, depth, strict))?,
            rc(splice(genv, metas, a, depth, strict))?,
            rc(splice(genv, metas, b, depth, strict))?,
        )),
        Refl(ty, p) => Ok(Refl(
            rc(splice(genv, metas, ty, depth, strict))?,
            rc(splice(genv, metas, p, depth, strict))?,
        )),
        J(m, b, lh, rh, p) => Ok(J(
            rc(splice(genv, metas, m, depth, strict))?,
            rc(splice(genv, metas, b, depth, strict))?,
            rc(splice(genv, metas, lh, depth, strict))?,
            rc(splice(genv, metas, rh, depth, strict))?,
            rc(splice(genv, metas, p, depth, strict))?,
        )),
        Succ(n) => Ok(Succ(rc(splice(genv, metas, n, depth, strict))?)),
        NatRec(m, z, s, n) => Ok(NatRec(
            rc(splice(genv, metas, m, depth, strict))?,
            rc(splice(genv, metas, z, depth, strict))?,
            rc(splice(genv, metas, s, depth, strict))?,
            rc(splice(genv, metas, n, depth, strict))?,
        )),
        UnitRec(m, c, u) => Ok(UnitRec(
            rc(splice(genv, metas, m, depth, strict))?,
            rc(splice(genv, metas, c, depth, strict))?,
            rc(splice(genv, metas, u, depth, strict))?,
        )),
        EmptyRec(m, e) => Ok(EmptyRec(
            rc(splice(genv, metas, m, depth, strict))?,
            rc(splice(genv, metas, e, depth, strict))?,
        )),
        BoolRec(m, tc, fc, b) => Ok(BoolRec(
            rc(splice(genv, metas, m, depth, strict))?,
            rc(splice(genv, metas, tc, depth, strict))?,
            rc(splice(genv, metas, fc, depth, strict))?,
            rc(splice(genv, metas, b, depth, strict))?,
        )),
    }
}
