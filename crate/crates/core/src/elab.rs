//! Elaboration: turning surface syntax into core terms.
//!
//! This is bidirectional like the kernel, but where the kernel demands every
//! piece of information, the elaborator may stand in a metavariable and let
//! unification find the value: implicit arguments are inserted as metas at
//! application heads (unless the head is `@`-marked), a term checked against
//! an implicit function type grows an implicit binder, and `_` holes become
//! metas outright.
//!
//! Applications are elaborated in two phases. First the head's type is walked
//! over the argument list, inserting implicit metas and one placeholder meta
//! per explicit argument, producing the result type before any argument is
//! itself elaborated; that result type is matched against the expected type
//! early, so information flows from the goal into the argument types. Then
//! arguments are elaborated left to right against the (by now partially
//! solved) domains, and each placeholder is unified with its argument's
//! value. Placeholders are finally replaced by the elaborated argument terms
//! themselves, so the output preserves the code as written; only genuinely
//! inferred implicits are spliced from solutions.
//!
//! The elaborator is untrusted: the kernel re-checks every declaration it
//! produces from scratch.

use crate::check::{self, Context};
use crate::diag::{Diagnostic, ErrorCode, Result, SourceSpan};
use crate::eval::{apply, apply_closure, apply_many, do_fst, eval};
use crate::meta::MetaContext;
use crate::pretty::render_term;
use crate::surface::{Prim, Surface, SurfaceDecl, SurfaceKind};
use crate::syntax::{shift, Declaration, Name, Term};
use crate::unify::{force, quote_forcing, splice_solved, subsume, unify_in, zonk};
use crate::value::{Closure, Env, GlobalEnv, Head, Value};
use std::collections::HashMap;
use std::rc::Rc;

/// Is this term an `@`-marked reference (or an application of one)? Such a
/// head asks for its type to be taken literally: no implicit insertion.
fn explicit_head(s: &Surface) -> bool {
    match &s.kind {
        SurfaceKind::Ref { explicit, .. } => *explicit,
        SurfaceKind::App(f, _) => explicit_head(f),
        _ => false,
    }
}

/// Elaboration state for one declaration: the (immutable) global environment
/// and the declaration's metavariable store.
pub struct Elaborator<'g> {
    genv: &'g GlobalEnv,
    pub metas: MetaContext,
}

impl<'g> Elaborator<'g> {
    pub fn new(genv: &'g GlobalEnv) -> Self {
        Elaborator { genv, metas: MetaContext::new() }
    }

    fn fresh_meta(&mut self, ctx: &Context, ty: Value, span: &SourceSpan) -> (Term, Value) {
        let id = self.metas.fresh(ty, ctx.depth(), ctx.names(), span.clone());
        (Term::Meta(id), Value::neutral(Head::Meta(id)))
    }

    fn force(&self, v: Value) -> Result<Value> {
        force(self.genv, &self.metas, v)
    }

    fn unify(&mut self, ctx: &Context, l: &Value, r: &Value) -> Result<()> {
        unify_in(self.genv, &mut self.metas, ctx, l, r)
    }

    fn eval_in(&self, ctx: &Context, t: &Term) -> Result<Value> {
        eval(self.genv, &ctx.env, t)
    }

    fn render(&self, ctx: &Context, v: &Value) -> String {
        match quote_forcing(self.genv, &self.metas, v, ctx.depth(), None) {
            Ok(t) => render_term(&ctx.names(), &t),
            Err(_) => "<unprintable>".to_string(),
        }
    }

    /// Subsume against the expected type, if there is one, then return.
    fn finish(
        &mut self,
        ctx: &Context,
        term: Term,
        vty: Value,
        expected: Option<&Value>,
    ) -> Result<(Term, Value)> {
        if let Some(exp) = expected {
            subsume(self.genv, &mut self.metas, ctx, &vty, exp)?;
        }
        Ok((term, vty))
    }

    /// Elaborate `s`, checking against `expected` when given, inferring
    /// otherwise. Errors bubbling out without a span get this node's.
    pub fn elaborate(
        &mut self,
        ctx: &Context,
        s: &Surface,
        expected: Option<&Value>,
    ) -> Result<(Term, Value)> {
        self.elab_inner(ctx, s, expected).map_err(|d| d.with_span(&s.span))
    }

    fn elab_inner(
        &mut self,
        ctx: &Context,
        s: &Surface,
        expected: Option<&Value>,
    ) -> Result<(Term, Value)> {
        // Checking anything but an implicit lambda (or an `@`-marked head)
        // against an implicit function type inserts the binder silently.
        if let Some(exp) = expected {
            let exp_f = self.force(exp.clone())?;
            if let Value::Pi(dom, cod, true) = &exp_f {
                let implicit_lambda =
                    matches!(&s.kind, SurfaceKind::Lambda { implicit: true, .. });
                if !implicit_lambda && !explicit_head(s) {
                    let name = cod.name.clone();
                    let body_exp = apply_closure(self.genv, cod, Value::local(ctx.depth()))?;
                    let inner = ctx.bind_param(name.clone(), (**dom).clone());
                    let (body_t, _) = self.elaborate(&inner, s, Some(&body_exp))?;
                    return Ok((Term::Lambda(name, Rc::new(body_t)), exp.clone()));
                }
            }
        }
        match &s.kind {
            SurfaceKind::Ref { .. } | SurfaceKind::App(..) | SurfaceKind::Prim(_) => {
                self.elab_spine(ctx, s, expected)
            }
            SurfaceKind::Universe(l) => {
                if l + 1 > self.genv.max_universe {
                    return Err(Diagnostic::at(
                        ErrorCode::Universe,
                        s.span.clone(),
                        format!(
                            "Type {} exceeds the universe hierarchy (largest classifier is Type {})",
                            l, self.genv.max_universe
                        ),
                    ));
                }
                self.finish(ctx, Term::Universe(*l), Value::Universe(l + 1), expected)
            }
            SurfaceKind::Hole => match expected {
                Some(exp) => {
                    let (t, _) = self.fresh_meta(ctx, exp.clone(), &s.span);
                    Ok((t, exp.clone()))
                }
                None => {
                    let ty_id = self.metas.fresh(
                        Value::Universe(self.genv.max_universe),
                        ctx.depth(),
                        ctx.names(),
                        s.span.clone(),
                    );
                    let ty_v = Value::neutral(Head::Meta(ty_id));
                    let (t, _) = self.fresh_meta(ctx, ty_v.clone(), &s.span);
                    Ok((t, ty_v))
                }
            },
            SurfaceKind::Lambda { name, implicit, ann, body } => {
                self.elab_lambda(ctx, s, name, *implicit, ann.as_deref(), body, expected)
            }
            SurfaceKind::Pi { name, implicit, domain, codomain } => {
                let (d_t, d_lvl) = self.elab_type(ctx, domain)?;
                let d_v = self.eval_in(ctx, &d_t)?;
                let inner = ctx.bind_param(name.clone(), d_v);
                let (c_t, c_lvl) = self.elab_type(&inner, codomain)?;
                let term = Term::Pi(name.clone(), Rc::new(d_t), Rc::new(c_t), *implicit);
                self.finish(ctx, term, Value::Universe(d_lvl.max(c_lvl)), expected)
            }
            SurfaceKind::Sigma { name, first, second } => {
                let (f_t, f_lvl) = self.elab_type(ctx, first)?;
                let f_v = self.eval_in(ctx, &f_t)?;
                let inner = ctx.bind_param(name.clone(), f_v);
                let (s_t, s_lvl) = self.elab_type(&inner, second)?;
                let term = Term::Sigma(name.clone(), Rc::new(f_t), Rc::new(s_t));
                self.finish(ctx, term, Value::Universe(f_lvl.max(s_lvl)), expected)
            }
            SurfaceKind::Pair { first, second, ann } => {
                self.elab_pair(ctx, s, first, second, ann.as_deref(), expected)
            }
        }
    }

    /// Elaborate a term that must be a type; returns it with its level.
    fn elab_type(&mut self, ctx: &Context, s: &Surface) -> Result<(Term, u32)> {
        let (t, ty) = self.elaborate(ctx, s, None)?;
        match self.force(ty)? {
            Value::Universe(l) => Ok((t, l)),
            other => Err(Diagnostic::at(
                ErrorCode::Type,
                s.span.clone(),
                format!(
                    "expected a type, found a term of type `{}`",
                    self.render(ctx, &other)
                ),
            )),
        }
    }

    fn check_at(&mut self, ctx: &Context, s: &Surface, expected: &Value) -> Result<Term> {
        Ok(self.elaborate(ctx, s, Some(expected))?.0)
    }

    fn elab_lambda(
        &mut self,
        ctx: &Context,
        s: &Surface,
        name: &Name,
        implicit: bool,
        ann: Option<&Surface>,
        body: &Surface,
        expected: Option<&Value>,
    ) -> Result<(Term, Value)> {
        if let Some(exp) = expected {
            let exp_f = self.force(exp.clone())?;
            if let Value::Pi(dom, cod, exp_imp) = &exp_f {
                if implicit && !exp_imp {
                    return Err(Diagnostic::at(
                        ErrorCode::Type,
                        s.span.clone(),
                        format!(
                            "an implicit function was given, but `{}` takes its argument explicitly",
                            self.render(ctx, &exp_f)
                        ),
                    ));
                }
                if let Some(ann_s) = ann {
                    let (ann_t, _) = self.elab_type(ctx, ann_s)?;
                    let ann_v = self.eval_in(ctx, &ann_t)?;
                    self.unify(ctx, &ann_v, dom)
                        .map_err(|d| d.with_span(&ann_s.span))?;
                }
                let body_exp = apply_closure(self.genv, cod, Value::local(ctx.depth()))?;
                let inner = ctx.bind_param(name.clone(), (**dom).clone());
                let (b_t, _) = self.elaborate(&inner, body, Some(&body_exp))?;
                return Ok((Term::Lambda(name.clone(), Rc::new(b_t)), exp.clone()));
            }
            if !matches!(exp_f, Value::Neutral(Head::Meta(_), _)) {
                return Err(Diagnostic::at(
                    ErrorCode::Type,
                    s.span.clone(),
                    format!(
                        "found a function literal where `{}` was expected",
                        self.render(ctx, &exp_f)
                    ),
                ));
            }
            // expected is an undetermined meta: fall through to inference.
        }
        let Some(ann_s) = ann else {
            return Err(Diagnostic::at(
                ErrorCode::Type,
                s.span.clone(),
                "cannot infer the type of this function; annotate its binder".to_string(),
            ));
        };
        let (ann_t, _) = self.elab_type(ctx, ann_s)?;
        let ann_v = self.eval_in(ctx, &ann_t)?;
        let inner = ctx.bind_param(name.clone(), ann_v.clone());
        let (b_t, b_ty) = self.elaborate(&inner, body, None)?;
        let cod_term = quote_forcing(self.genv, &self.metas, &b_ty, ctx.depth() + 1, None)?;
        let pi_v = Value::Pi(
            Rc::new(ann_v),
            Closure { name: name.clone(), env: ctx.env.clone(), body: Rc::new(cod_term) },
            implicit,
        );
        self.finish(ctx, Term::Lambda(name.clone(), Rc::new(b_t)), pi_v, expected)
    }

    fn elab_pair(
        &mut self,
        ctx: &Context,
        s: &Surface,
        first: &Surface,
        second: &Surface,
        ann: Option<&Surface>,
        expected: Option<&Value>,
    ) -> Result<(Term, Value)> {
        let cannot_infer = || {
            Diagnostic::at(
                ErrorCode::Type,
                s.span.clone(),
                "cannot infer the type of a pair; annotate it as `(a , b : T)`".to_string(),
            )
        };
        if let Some(ann_s) = ann {
            let (ann_t, _) = self.elab_type(ctx, ann_s)?;
            let ann_v = self.eval_in(ctx, &ann_t)?;
            let forced = self.force(ann_v.clone())?;
            let Value::Sigma(f, snd_cl) = &forced else {
                return Err(Diagnostic::at(
                    ErrorCode::Type,
                    ann_s.span.clone(),
                    format!(
                        "a pair annotation must be a Sigma type, found `{}`",
                        self.render(ctx, &forced)
                    ),
                ));
            };
            let a_t = self.check_at(ctx, first, f)?;
            let a_v = self.eval_in(ctx, &a_t)?;
            let b_exp = apply_closure(self.genv, snd_cl, a_v)?;
            let b_t = self.check_at(ctx, second, &b_exp)?;
            return self.finish(ctx, Term::Pair(Rc::new(a_t), Rc::new(b_t)), ann_v, expected);
        }
        let Some(exp) = expected else { return Err(cannot_infer()) };
        let exp_f = self.force(exp.clone())?;
        match &exp_f {
            Value::Sigma(f, snd_cl) => {
                let a_t = self.check_at(ctx, first, f)?;
                let a_v = self.eval_in(ctx, &a_t)?;
                let b_exp = apply_closure(self.genv, snd_cl, a_v)?;
                let b_t = self.check_at(ctx, second, &b_exp)?;
                Ok((Term::Pair(Rc::new(a_t), Rc::new(b_t)), exp.clone()))
            }
            Value::Neutral(Head::Meta(_), _) => Err(cannot_infer()),
            other => Err(Diagnostic::at(
                ErrorCode::Type,
                s.span.clone(),
                format!("found a pair where `{}` was expected", self.render(ctx, other)),
            )),
        }
    }

    /// Elaborate an application spine (possibly with zero arguments).
    fn elab_spine(
        &mut self,
        ctx: &Context,
        s: &Surface,
        expected: Option<&Value>,
    ) -> Result<(Term, Value)> {
        let mut args: Vec<&Surface> = Vec::new();
        let mut head = s;
        while let SurfaceKind::App(f, a) = &head.kind {
            args.push(a);
            head = f;
        }
        args.reverse();
        match &head.kind {
            SurfaceKind::Prim(p) => self.elab_prim(ctx, *p, &args, s, expected),
            SurfaceKind::Lambda { .. } if !args.is_empty() => {
                self.elab_redex(ctx, head, &args, s, expected)
            }
            SurfaceKind::Ref { name, .. } => {
                let (h_t, h_ty) = self.resolve(ctx, name, &head.span)?;
                self.apply_spine(ctx, h_t, h_ty, &args, explicit_head(head), expected, &s.span)
            }
            _ => {
                let (h_t, h_ty) = self.elaborate(ctx, head, None)?;
                self.apply_spine(ctx, h_t, h_ty, &args, false, expected, &s.span)
            }
        }
    }

    fn resolve(&self, ctx: &Context, name: &Name, span: &SourceSpan) -> Result<(Term, Value)> {
        if let Some((ix, ty)) = ctx.lookup_name(name) {
            return Ok((Term::Var(ix), ty.clone()));
        }
        if let Some(entry) = self.genv.lookup(name) {
            return Ok((Term::Global(entry.name.clone()), entry.ty.clone()));
        }
        Err(Diagnostic::at(
            ErrorCode::Unresolved,
            span.clone(),
            format!("unresolved name `{}`", name),
        ))
    }

    /// The two-phase application engine; see the module docs.
    fn apply_spine(
        &mut self,
        ctx: &Context,
        head_term: Term,
        head_ty: Value,
        args: &[&Surface],
        explicit: bool,
        expected: Option<&Value>,
        app_span: &SourceSpan,
    ) -> Result<(Term, Value)> {
        let mut term = head_term;
        let mut vty = head_ty;
        let mut pending: Vec<(&Surface, u32, Value)> = Vec::new();
        let mut replacements: HashMap<u32, Term> = HashMap::new();
        for arg in args {
            loop {
                vty = self.force(vty)?;
                let Value::Pi(dom, cod, implicit) = &vty else {
                    // The result type may be a placeholder application that
                    // only becomes a Pi once earlier arguments are known
                    // (e.g. a head returning `P x` for a not-yet-elaborated
                    // family `P`). Elaborate the pending arguments to solve
                    // their placeholders and retry; with nothing pending the
                    // type really is not a function.
                    if pending.is_empty() {
                        return Err(Diagnostic::at(
                            ErrorCode::NotFn,
                            arg.span.clone(),
                            format!(
                                "this argument is applied to a term of type `{}`, which is not a function",
                                self.render(ctx, &vty)
                            ),
                        ));
                    }
                    self.flush_pending(ctx, &mut pending, &mut replacements)?;
                    continue;
                };
                if *implicit && !explicit {
                    let (m_t, m_v) = self.fresh_meta(ctx, (**dom).clone(), &arg.span);
                    term = Term::App(Rc::new(term), Rc::new(m_t));
                    vty = apply_closure(self.genv, cod, m_v)?;
                    continue;
                }
                let dom_v = (**dom).clone();
                let id = self.metas.fresh(
                    dom_v.clone(),
                    ctx.depth(),
                    ctx.names(),
                    arg.span.clone(),
                );
                pending.push((arg, id, dom_v));
                term = Term::App(Rc::new(term), Rc::new(Term::Meta(id)));
                vty = apply_closure(self.genv, cod, Value::neutral(Head::Meta(id)))?;
                break;
            }
        }
        if !explicit {
            loop {
                vty = self.force(vty)?;
                let Value::Pi(dom, cod, true) = &vty else { break };
                let (m_t, m_v) = self.fresh_meta(ctx, (**dom).clone(), app_span);
                term = Term::App(Rc::new(term), Rc::new(m_t));
                vty = apply_closure(self.genv, cod, m_v)?;
            }
        }
        // Try to match the result type against the expectation before the
        // arguments are elaborated, so that what the expectation determines
        // (typically the head's implicit arguments) is already known while
        // checking each argument. The attempt can fail spuriously when a
        // placeholder heads an application that only reduces once its
        // argument is known, so a failure here is retried after the
        // arguments, when the placeholders are solved.
        let mut retry_subsume = false;
        if let Some(exp) = expected {
            retry_subsume = subsume(self.genv, &mut self.metas, ctx, &vty, exp).is_err();
        }
        self.flush_pending(ctx, &mut pending, &mut replacements)?;
        if retry_subsume {
            if let Some(exp) = expected {
                subsume(self.genv, &mut self.metas, ctx, &vty, exp)
                    .map_err(|d| d.with_span(app_span))?;
            }
        }
        Ok((replace_metas(&term, &replacements), vty))
    }

    /// Elaborate the queued explicit arguments against their recorded
    /// domains, solving each one's placeholder meta and remembering the term
    /// to write back in its place.
    fn flush_pending(
        &mut self,
        ctx: &Context,
        pending: &mut Vec<(&Surface, u32, Value)>,
        replacements: &mut HashMap<u32, Term>,
    ) -> Result<()> {
        for (arg, id, dom) in pending.drain(..) {
            let (a_t, _) = self.elaborate(ctx, arg, Some(&dom))?;
            // The placeholder's solution value may be applied under other
            // binders later (a dependent family argument), so metas solved
            // inside the argument must be spliced in first — a `Meta` node
            // evaluates without consulting the store.
            let a_t = splice_solved(self.genv, &self.metas, &a_t, ctx.depth())?;
            let a_v = self.eval_in(ctx, &a_t)?;
            if self.metas.solution(id).is_some() {
                // The early subsumption already determined this argument from
                // the expectation; the written argument must agree with it.
                self.unify(ctx, &Value::neutral(Head::Meta(id)), &a_v)
                    .map_err(|d| d.with_span(&arg.span))?;
            } else {
                // The placeholder was created at this very depth and the
                // argument was elaborated right here, so the solution is in
                // scope by construction; evaluation never consults the meta
                // store and the solved metas were just spliced out, so a
                // syntactic scan of the term is an exact occurs-check. The
                // general validator would instead quote the argument's full
                // normal form, whose size is unbounded for proof terms.
                if occurs_in_term(&a_t, id) {
                    return Err(Diagnostic::at(
                        ErrorCode::Unify,
                        arg.span.clone(),
                        "this argument mentions the placeholder standing for itself".to_string(),
                    ));
                }
                self.metas.solve(id, a_v);
            }
            replacements.insert(id, a_t);
        }
        Ok(())
    }

    /// A lambda applied to arguments: a local definition. The bound variable
    /// is a transparent abbreviation for the argument's value, so the body is
    /// elaborated with the value in scope — this is what lets later parts of
    /// the body compute with it.
    fn elab_redex(
        &mut self,
        ctx: &Context,
        head: &Surface,
        args: &[&Surface],
        whole: &Surface,
        expected: Option<&Value>,
    ) -> Result<(Term, Value)> {
        let SurfaceKind::Lambda { name, ann, body, .. } = &head.kind else { unreachable!() };
        let first = args[0];
        let (val_t, val_ty) = match ann {
            Some(ann_s) => {
                let (ann_t, _) = self.elab_type(ctx, ann_s)?;
                let ann_v = self.eval_in(ctx, &ann_t)?;
                let v_t = self.check_at(ctx, first, &ann_v)?;
                (v_t, ann_v)
            }
            None => self.elaborate(ctx, first, None)?,
        };
        // The kernel re-checks a redex by inferring the argument's type,
        // which fails on literal functions and pairs; reject them here with
        // a pointed message instead of letting the kernel trip later.
        if matches!(val_t, Term::Lambda(..) | Term::Pair(..)) {
            return Err(Diagnostic::at(
                ErrorCode::Type,
                first.span.clone(),
                "a locally bound value must have an inferable shape; \
                 function and pair literals cannot be bound this way"
                    .to_string(),
            ));
        }
        // The bound value computes inside the body at arbitrary depths, so
        // metas solved while elaborating it must be spliced in (see
        // `flush_pending`).
        let val_t = splice_solved(self.genv, &self.metas, &val_t, ctx.depth())?;
        let val_v = self.eval_in(ctx, &val_t)?;
        let inner = ctx.bind_def(name.clone(), val_ty, val_v);
        if args.len() == 1 {
            let (b_t, b_ty) = self.elaborate(&inner, body, expected)?;
            let term =
                Term::App(Rc::new(Term::Lambda(name.clone(), Rc::new(b_t))), Rc::new(val_t));
            Ok((term, b_ty))
        } else {
            let (b_t, b_ty) = self.elaborate(&inner, body, None)?;
            let redex =
                Term::App(Rc::new(Term::Lambda(name.clone(), Rc::new(b_t))), Rc::new(val_t));
            self.apply_spine(ctx, redex, b_ty, &args[1..], false, expected, &whole.span)
        }
    }

    /// Build `Pi (binders…) -> ?C` as the expected type of an eliminator
    /// motive: the domains are known, the target universe is a fresh meta
    /// that the motive's own body will determine.
    fn motive_type(
        &mut self,
        ctx: &Context,
        binders: &[(&str, Term)],
        span: &SourceSpan,
    ) -> Result<Value> {
        let mut names = ctx.names();
        for (n, _) in binders {
            names.push(Rc::from(*n));
        }
        let c_id = self.metas.fresh(
            Value::Universe(self.genv.max_universe),
            ctx.depth() + binders.len(),
            names,
            span.clone(),
        );
        let mut ty = Term::Meta(c_id);
        for (n, dom) in binders.iter().rev() {
            ty = Term::Pi(Rc::from(*n), Rc::new(dom.clone()), Rc::new(ty), false);
        }
        self.eval_in(ctx, &ty)
    }

    fn elab_prim(
        &mut self,
        ctx: &Context,
        p: Prim,
        args: &[&Surface],
        whole: &Surface,
        expected: Option<&Value>,
    ) -> Result<(Term, Value)> {
        let arity = p.arity();
        if args.len() < arity {
            if p == Prim::Succ && args.is_empty() {
                let term = Term::Lambda(Rc::from("n"), Rc::new(Term::Succ(Rc::new(Term::Var(0)))));
                let vty = Value::Pi(
                    Rc::new(Value::Nat),
                    Closure { name: Rc::from("n"), env: Env::empty(), body: Rc::new(Term::Nat) },
                    false,
                );
                return self.finish(ctx, term, vty, expected);
            }
            return Err(Diagnostic::at(
                ErrorCode::Type,
                whole.span.clone(),
                format!(
                    "`{}` expects {} argument(s), but only {} were given",
                    p.keyword(),
                    arity,
                    args.len()
                ),
            ));
        }
        let (prim_args, rest) = args.split_at(arity);
        let (term, vty) = self.elab_prim_exact(ctx, p, prim_args)?;
        if rest.is_empty() {
            self.finish(ctx, term, vty, expected)
        } else {
            self.apply_spine(ctx, term, vty, rest, false, expected, &whole.span)
        }
    }

    fn elab_prim_exact(
        &mut self,
        ctx: &Context,
        p: Prim,
        a: &[&Surface],
    ) -> Result<(Term, Value)> {
        match p {
            Prim::Nat => Ok((Term::Nat, Value::Universe(0))),
            Prim::Unit => Ok((Term::Unit, Value::Universe(0))),
            Prim::Empty => Ok((Term::Empty, Value::Universe(0))),
            Prim::Bool => Ok((Term::Bool, Value::Universe(0))),
            Prim::Zero => Ok((Term::Zero, Value::Nat)),
            Prim::Star => Ok((Term::Star, Value::Unit)),
            Prim::True => Ok((Term::True, Value::Bool)),
            Prim::False => Ok((Term::False, Value::Bool)),
            Prim::Succ => {
                let n_t = self.check_at(ctx, a[0], &Value::Nat)?;
                Ok((Term::Succ(Rc::new(n_t)), Value::Nat))
            }
            Prim::Fst => {
                let (p_t, p_ty) = self.elaborate(ctx, a[0], None)?;
                match self.force(p_ty)? {
                    // A literal pair is projected on the spot: the kernel
                    // deliberately cannot infer a bare pair, so `fst (a , b)`
                    // must not reach it in that shape.
                    Value::Sigma(f, _) => match &p_t {
                        Term::Pair(a, _) => Ok(((**a).clone(), (*f).clone())),
                        _ => Ok((Term::Fst(Rc::new(p_t)), (*f).clone())),
                    },
                    other => Err(Diagnostic::at(
                        ErrorCode::Type,
                        a[0].span.clone(),
                        format!(
                            "`fst` expects a pair, found a term of type `{}`",
                            self.render(ctx, &other)
                        ),
                    )),
                }
            }
            Prim::Snd => {
                let (p_t, p_ty) = self.elaborate(ctx, a[0], None)?;
                match self.force(p_ty)? {
                    Value::Sigma(_, snd_cl) => {
                        let p_v = self.eval_in(ctx, &p_t)?;
                        let fst_v = do_fst(&p_v)?;
                        let ty = apply_closure(self.genv, &snd_cl, fst_v)?;
                        match &p_t {
                            Term::Pair(_, b) => Ok(((**b).clone(), ty)),
                            _ => Ok((Term::Snd(Rc::new(p_t)), ty)),
                        }
                    }
                    other => Err(Diagnostic::at(
                        ErrorCode::Type,
                        a[0].span.clone(),
                        format!(
                            "`snd` expects a pair, found a term of type `{}`",
                            self.render(ctx, &other)
                        ),
                    )),
                }
            }
            Prim::Id => {
                let (ty_t, ty_ty) = self.elaborate(ctx, a[0], None)?;
                let lvl = match self.force(ty_ty)? {
                    Value::Universe(l) => l,
                    other => {
                        return Err(Diagnostic::at(
                            ErrorCode::Type,
                            a[0].span.clone(),
                            format!(
                                "the first argument of `Id` must be a type, found a term of type `{}`",
                                self.render(ctx, &other)
                            ),
                        ))
                    }
                };
                let ty_v = self.eval_in(ctx, &ty_t)?;
                let l_t = self.check_at(ctx, a[1], &ty_v)?;
                let r_t = self.check_at(ctx, a[2], &ty_v)?;
                Ok((
                    Term::Id(Rc::new(ty_t), Rc::new(l_t), Rc::new(r_t)),
                    Value::Universe(lvl),
                ))
            }
            Prim::Refl => {
                // The type argument may be a hole: its meta is solved when
                // the resulting `Id` type meets the expected one.
                let (ty_t, ty_ty) = self.elaborate(ctx, a[0], None)?;
                match self.force(ty_ty)? {
                    Value::Universe(_) | Value::Neutral(Head::Meta(_), _) => {}
                    other => {
                        return Err(Diagnostic::at(
                            ErrorCode::Type,
                            a[0].span.clone(),
                            format!(
                                "the first argument of `refl` must be a type, found a term of type `{}`",
                                self.render(ctx, &other)
                            ),
                        ))
                    }
                }
                let ty_v = self.eval_in(ctx, &ty_t)?;
                let p_t = self.check_at(ctx, a[1], &ty_v)?;
                let p_v = self.eval_in(ctx, &p_t)?;
                Ok((
                    Term::Refl(Rc::new(ty_t), Rc::new(p_t)),
                    Value::Id(Rc::new(ty_v), Rc::new(p_v.clone()), Rc::new(p_v)),
                ))
            }
            Prim::J => {
                let (l_t, a_ty) = self.elaborate(ctx, a[2], None)?;
                let l_v = self.eval_in(ctx, &l_t)?;
                let r_t = self.check_at(ctx, a[3], &a_ty)?;
                let r_v = self.eval_in(ctx, &r_t)?;
                let path_ty = Value::Id(
                    Rc::new(a_ty.clone()),
                    Rc::new(l_v.clone()),
                    Rc::new(r_v.clone()),
                );
                let p_t = self.check_at(ctx, a[4], &path_ty)?;
                let p_v = self.eval_in(ctx, &p_t)?;
                let a_term = quote_forcing(self.genv, &self.metas, &a_ty, ctx.depth(), None)?;
                let id_dom = Term::Id(
                    Rc::new(shift(&a_term, 0, 2)),
                    Rc::new(Term::Var(1)),
                    Rc::new(Term::Var(0)),
                );
                let mot_ty = self.motive_type(
                    ctx,
                    &[("x", a_term.clone()), ("y", shift(&a_term, 0, 1)), ("p", id_dom)],
                    &a[0].span,
                )?;
                let m_t = self.check_at(ctx, a[0], &mot_ty)?;
                // Any meta solved while checking the motive may mention the
                // motive's own binders, and a `Meta` node evaluates without
                // consulting the store — splice the solutions in before the
                // motive is instantiated at other arguments (here and in the
                // recursor cases below).
                let m_t = splice_solved(self.genv, &self.metas, &m_t, ctx.depth())?;
                let m_v = self.eval_in(ctx, &m_t)?;
                let base_ty =
                    self.eval_in(ctx, &check::j_base_case_type(&m_t, &a_term))?;
                let b_t = self.check_at(ctx, a[1], &base_ty)?;
                let result = apply_many(self.genv, &m_v, &[l_v, r_v, p_v])?;
                Ok((
                    Term::J(
                        Rc::new(m_t),
                        Rc::new(b_t),
                        Rc::new(l_t),
                        Rc::new(r_t),
                        Rc::new(p_t),
                    ),
                    result,
                ))
            }
            Prim::NatRec => {
                let mot_ty = self.motive_type(ctx, &[("n", Term::Nat)], &a[0].span)?;
                let m_t = self.check_at(ctx, a[0], &mot_ty)?;
                let m_t = splice_solved(self.genv, &self.metas, &m_t, ctx.depth())?;
                let m_v = self.eval_in(ctx, &m_t)?;
                let z_ty = apply(self.genv, &m_v, Value::Zero)?;
                let z_t = self.check_at(ctx, a[1], &z_ty)?;
                let s_ty = self.eval_in(ctx, &check::natrec_succ_case_type(&m_t))?;
                let s_t = self.check_at(ctx, a[2], &s_ty)?;
                let n_t = self.check_at(ctx, a[3], &Value::Nat)?;
                let n_v = self.eval_in(ctx, &n_t)?;
                let result = apply(self.genv, &m_v, n_v)?;
                Ok((
                    Term::NatRec(Rc::new(m_t), Rc::new(z_t), Rc::new(s_t), Rc::new(n_t)),
                    result,
                ))
            }
            Prim::UnitRec => {
                let mot_ty = self.motive_type(ctx, &[("u", Term::Unit)], &a[0].span)?;
                let m_t = self.check_at(ctx, a[0], &mot_ty)?;
                let m_t = splice_solved(self.genv, &self.metas, &m_t, ctx.depth())?;
                let m_v = self.eval_in(ctx, &m_t)?;
                let c_ty = apply(self.genv, &m_v, Value::Star)?;
                let c_t = self.check_at(ctx, a[1], &c_ty)?;
                let u_t = self.check_at(ctx, a[2], &Value::Unit)?;
                let u_v = self.eval_in(ctx, &u_t)?;
                let result = apply(self.genv, &m_v, u_v)?;
                Ok((Term::UnitRec(Rc::new(m_t), Rc::new(c_t), Rc::new(u_t)), result))
            }
            Prim::EmptyRec => {
                let mot_ty = self.motive_type(ctx, &[("e", Term::Empty)], &a[0].span)?;
                let m_t = self.check_at(ctx, a[0], &mot_ty)?;
                let m_t = splice_solved(self.genv, &self.metas, &m_t, ctx.depth())?;
                let m_v = self.eval_in(ctx, &m_t)?;
                let e_t = self.check_at(ctx, a[1], &Value::Empty)?;
                let e_v = self.eval_in(ctx, &e_t)?;
                let result = apply(self.genv, &m_v, e_v)?;
                Ok((Term::EmptyRec(Rc::new(m_t), Rc::new(e_t)), result))
            }
            Prim::BoolRec => {
                let mot_ty = self.motive_type(ctx, &[("b", Term::Bool)], &a[0].span)?;
                let m_t = self.check_at(ctx, a[0], &mot_ty)?;
                let m_t = splice_solved(self.genv, &self.metas, &m_t, ctx.depth())?;
                let m_v = self.eval_in(ctx, &m_t)?;
                let t_ty = apply(self.genv, &m_v, Value::True)?;
                let t_t = self.check_at(ctx, a[1], &t_ty)?;
                let f_ty = apply(self.genv, &m_v, Value::False)?;
                let f_t = self.check_at(ctx, a[2], &f_ty)?;
                let b_t = self.check_at(ctx, a[3], &Value::Bool)?;
                let b_v = self.eval_in(ctx, &b_t)?;
                let result = apply(self.genv, &m_v, b_v)?;
                Ok((
                    Term::BoolRec(Rc::new(m_t), Rc::new(t_t), Rc::new(f_t), Rc::new(b_t)),
                    result,
                ))
            }
        }
    }
}

/// Replace placeholder metas by the terms they stand for. The replacements
/// were elaborated at the same depth as the nodes they fill, so no index
/// adjustment is needed.
/// Does the metavariable `id` occur anywhere in `t`?
fn occurs_in_term(t: &Term, id: u32) -> bool {
    use Term::*;
    let go = |t: &Term| occurs_in_term(t, id);
    match t {
        Meta(m) => *m == id,
        Var(_) | Universe(_) | Nat | Zero | Unit | Star | Empty | Bool | True | False
        | Global(_) => false,
        Pi(_, d, c, _) => go(d) || go(c),
        Lambda(_, b) => go(b),
        App(f, a) => go(f) || go(a),
        Sigma(_, f, s) => go(f) || go(s),
        Pair(a, b) => go(a) || go(b),
        Fst(p) | Snd(p) => go(p),
        Id(ty, l, r) => go(ty) || go(l) || go(r),
        Refl(ty, p) => go(ty) || go(p),
        J(m, b, l, r, p) => go(m) || go(b) || go(l) || go(r) || go(p),
        Succ(n) => go(n),
        NatRec(m, z, s, n) => go(m) || go(z) || go(s) || go(n),
        UnitRec(m, c, u) => go(m) || go(c) || go(u),
        EmptyRec(m, e) => go(m) || go(e),
        BoolRec(m, tc, fc, b) => go(m) || go(tc) || go(fc) || go(b),
    }
}

fn replace_metas(t: &Term, map: &HashMap<u32, Term>) -> Term {
    use Term::*;
    if map.is_empty() {
        return t.clone();
    }
    let go = |t: &Term| Rc::new(replace_metas(t, map));
    match t {
        Meta(id) => match map.get(id) {
            Some(r) => r.clone(),
            None => t.clone(),
        },
        Var(_) | Universe(_) | Nat | Zero | Unit | Star | Empty | Bool | True | False
        | Global(_) => t.clone(),
        Pi(n, d, c, i) => Pi(n.clone(), go(d), go(c), *i),
        Lambda(n, b) => Lambda(n.clone(), go(b)),
        App(f, a) => App(go(f), go(a)),
        Sigma(n, f, s) => Sigma(n.clone(), go(f), go(s)),
        Pair(a, b) => Pair(go(a), go(b)),
        Fst(p) => Fst(go(p)),
        Snd(p) => Snd(go(p)),
        Id(ty, l, r) => Id(go(ty), go(l), go(r)),
        Refl(ty, p) => Refl(go(ty), go(p)),
        J(m, b, l, r, p) => J(go(m), go(b), go(l), go(r), go(p)),
        Succ(n) => Succ(go(n)),
        NatRec(m, z, s, n) => NatRec(go(m), go(z), go(s), go(n)),
        UnitRec(m, c, u) => UnitRec(go(m), go(c), go(u)),
        EmptyRec(m, e) => EmptyRec(go(m), go(e)),
        BoolRec(m, tc, fc, b) => BoolRec(go(m), go(tc), go(fc), go(b)),
    }
}

/// Elaborate one surface declaration to a core declaration with no metas
/// left. The caller re-checks the result in the kernel before installing it.
pub fn elab_decl(genv: &GlobalEnv, sd: &SurfaceDecl) -> Result<Declaration> {
    elab_decl_inner(genv, sd)
        .map_err(|d| d.with_span(&sd.span).in_context(&format!("in declaration `{}`", sd.name)))
}

fn elab_decl_inner(genv: &GlobalEnv, sd: &SurfaceDecl) -> Result<Declaration> {
    let mut el = Elaborator::new(genv);
    let ctx = Context::empty();
    let (ty_t, ty_ty) = el.elaborate(&ctx, &sd.ty, None)?;
    match el.force(ty_ty)? {
        Value::Universe(_) => {}
        // A meta here can still be solved while the body elaborates.
        Value::Neutral(Head::Meta(_), _) => {}
        other => {
            return Err(Diagnostic::at(
                ErrorCode::Type,
                sd.ty.span.clone(),
                format!(
                    "the declared type of `{}` is not a type (it has type `{}`)",
                    sd.name,
                    el.render(&ctx, &other)
                ),
            ))
        }
    }
    // Solutions found while elaborating the signature may mention variables
    // bound inside it; splice them in as index-form terms before evaluating,
    // or the body check would instantiate those binders at shifted levels and
    // the stored solutions would keep pointing at the original ones.
    let ty_t = splice_solved(genv, &el.metas, &ty_t, 0)?;
    let ty_v = eval(genv, &Env::empty(), &ty_t)?;
    let body_t = match &sd.body {
        None => None,
        Some(b) => Some(el.elaborate(&ctx, b, Some(&ty_v))?.0),
    };
    let ty_z = zonk(genv, &el.metas, &ty_t, 0)?;
    let body_z = body_t.map(|b| zonk(genv, &el.metas, &b, 0)).transpose()?;
    Ok(Declaration { name: sd.name.clone(), ty: ty_z, body: body_z, span: sd.span.clone() })
}
