//! Bidirectional type checking of core terms against a global environment.
//!
//! `infer` synthesizes a type; `check` tests against an expected type value.
//! Functions and pairs are checkable but not inferable (pairs carry no
//! annotation). The one non-structural rule: an application whose head is a
//! literal lambda — the image of a surface `let` — infers the argument and
//! binds the variable to its *value*, so let-bound definitions unfold
//! definitionally in the body.
//!
//! Universe cumulativity ("a `Type i` term checks at `Type j` when `i <= j`")
//! applies only at the leaf of `check`; conversion and inference are exact.

use crate::convert::convert;
use crate::diag::{Diagnostic, ErrorCode, Result};
use crate::eval::{apply, apply_closure, apply_many, do_fst, eval, quote};
use crate::pretty;
use crate::syntax::{shift, Declaration, Name, Term};
use crate::value::{Env, GlobalEntry, GlobalEnv, Value};
use std::rc::Rc;

/// Local typing context: binder names and types (outermost first), in step
/// with the evaluation environment that gives each binder its value — a
/// fresh neutral for ordinary binders, the bound value for let binders.
#[derive(Debug, Clone, Default)]
pub struct Context {
    entries: Vec<(Name, Value)>,
    pub env: Env,
}

impl Context {
    pub fn empty() -> Context {
        Context { entries: Vec::new(), env: Env::empty() }
    }

    /// Current de Bruijn depth.
    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    /// Extend with an ordinary binder; its value is a fresh neutral at the
    /// current depth.
    pub fn bind_param(&self, name: Name, ty: Value) -> Context {
        let fresh = Value::local(self.depth());
        let mut entries = self.entries.clone();
        entries.push((name, ty));
        Context { entries, env: self.env.push(fresh) }
    }

    /// Extend with a let binder carrying a definition value.
    pub fn bind_def(&self, name: Name, ty: Value, value: Value) -> Context {
        let mut entries = self.entries.clone();
        entries.push((name, ty));
        Context { entries, env: self.env.push(value) }
    }

    /// Type of de Bruijn index `ix`.
    pub fn lookup_ix(&self, ix: usize) -> Option<&(Name, Value)> {
        let d = self.depth();
        if ix < d {
            Some(&self.entries[d - 1 - ix])
        } else {
            None
        }
    }

    /// Innermost binder with this name, as (index, type).
    pub fn lookup_name(&self, name: &str) -> Option<(usize, &Value)> {
        self.entries
            .iter()
            .rev()
            .enumerate()
            .find(|(_, (n, _))| n.as_ref() == name)
            .map(|(ix, (_, ty))| (ix, ty))
    }

    /// Binder names, outermost first (for printing).
    pub fn names(&self) -> Vec<Name> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }
}

fn type_err(genv: &GlobalEnv, ctx: &Context, msg: String) -> Diagnostic {
    let _ = (genv, ctx);
    Diagnostic::new(ErrorCode::Type, msg)
}

/// Synthesize the type of `t`.
pub fn infer(genv: &GlobalEnv, ctx: &Context, t: &Term) -> Result<Value> {
    match t {
        Term::Var(ix) => match ctx.lookup_ix(*ix) {
            Some((_, ty)) => Ok(ty.clone()),
            None => Err(Diagnostic::new(ErrorCode::Stuck, "unbound variable index")),
        },
        Term::Universe(l) => {
            if l + 1 <= genv.max_universe {
                Ok(Value::Universe(l + 1))
            } else {
                Err(Diagnostic::new(
                    ErrorCode::Universe,
                    format!(
                        "Type {} exceeds the universe hierarchy (largest classifier is Type {})",
                        l, genv.max_universe
                    ),
                ))
            }
        }
        Term::Pi(name, dom, cod, _) | Term::Sigma(name, dom, cod) => {
            let l_dom = infer_type(genv, ctx, dom)?;
            let dom_v = eval(genv, &ctx.env, dom)?;
            let ctx2 = ctx.bind_param(name.clone(), dom_v);
            let l_cod = infer_type(genv, &ctx2, cod)?;
            Ok(Value::Universe(l_dom.max(l_cod)))
        }
        Term::Lambda(..) => Err(type_err(
            genv,
            ctx,
            "cannot infer the type of a bare function literal".to_string(),
        )),
        Term::Pair(..) => {
            Err(type_err(genv, ctx, "cannot infer the type of a bare pair".to_string()))
        }
        Term::App(f, a) => {
            if let Term::Lambda(x, body) = f.as_ref() {
                // Dependent let: bind x to the value of a.
                let a_ty = infer(genv, ctx, a)?;
                let a_v = eval(genv, &ctx.env, a)?;
                let ctx2 = ctx.bind_def(x.clone(), a_ty, a_v);
                return infer(genv, &ctx2, body);
            }
            let f_ty = infer(genv, ctx, f)?;
            match f_ty {
                Value::Pi(dom, cod, _) => {
                    check(genv, ctx, a, &dom)?;
                    let a_v = eval(genv, &ctx.env, a)?;
                    apply_closure(genv, &cod, a_v)
                }
                other => Err(Diagnostic::new(
                    ErrorCode::NotFn,
                    format!(
                        "application head has non-function type {}",
                        pretty::render_value(genv, ctx, &other)
                    ),
                )),
            }
        }
        Term::Fst(p) => match infer(genv, ctx, p)? {
            Value::Sigma(first, _) => Ok((*first).clone()),
            other => Err(type_err(
                genv,
                ctx,
                format!(
                    "first projection from non-pair type {}",
                    pretty::render_value(genv, ctx, &other)
                ),
            )),
        },
        Term::Snd(p) => match infer(genv, ctx, p)? {
            Value::Sigma(_, second) => {
                let p_v = eval(genv, &ctx.env, p)?;
                apply_closure(genv, &second, do_fst(&p_v)?)
            }
            other => Err(type_err(
                genv,
                ctx,
                format!(
                    "second projection from non-pair type {}",
                    pretty::render_value(genv, ctx, &other)
                ),
            )),
        },
        Term::Id(ty, l, r) => {
            let lvl = infer_type(genv, ctx, ty)?;
            let ty_v = eval(genv, &ctx.env, ty)?;
            check(genv, ctx, l, &ty_v)?;
            check(genv, ctx, r, &ty_v)?;
            Ok(Value::Universe(lvl))
        }
        Term::Refl(ty, p) => {
            infer_type(genv, ctx, ty)?;
            let ty_v = eval(genv, &ctx.env, ty)?;
            check(genv, ctx, p, &ty_v)?;
            let p_v = eval(genv, &ctx.env, p)?;
            Ok(Value::Id(Rc::new(ty_v), Rc::new(p_v.clone()), Rc::new(p_v)))
        }
        Term::J(m, b, lhs, rhs, p) => {
            let a_ty = infer(genv, ctx, lhs)?;
            check(genv, ctx, rhs, &a_ty)?;
            let lhs_v = eval(genv, &ctx.env, lhs)?;
            let rhs_v = eval(genv, &ctx.env, rhs)?;
            let path_ty =
                Value::Id(Rc::new(a_ty.clone()), Rc::new(lhs_v.clone()), Rc::new(rhs_v.clone()));
            check(genv, ctx, p, &path_ty)?;
            let fam_ty = a_ty.clone();
            ensure_family(genv, ctx, m, 3, &move |i, vars| match i {
                0 | 1 => fam_ty.clone(),
                _ => Value::Id(
                    Rc::new(fam_ty.clone()),
                    Rc::new(vars[0].clone()),
                    Rc::new(vars[1].clone()),
                ),
            })?;
            let a_q = quote(genv, &a_ty, ctx.depth())?;
            let base_ty = eval(genv, &ctx.env, &j_base_case_type(m, &a_q))?;
            check(genv, ctx, b, &base_ty)?;
            let m_v = eval(genv, &ctx.env, m)?;
            let p_v = eval(genv, &ctx.env, p)?;
            apply_many(genv, &m_v, &[lhs_v, rhs_v, p_v])
        }
        Term::Nat | Term::Unit | Term::Empty | Term::Bool => Ok(Value::Universe(0)),
        Term::Zero => Ok(Value::Nat),
        Term::Succ(n) => {
            check(genv, ctx, n, &Value::Nat)?;
            Ok(Value::Nat)
        }
        Term::Star => Ok(Value::Unit),
        Term::True | Term::False => Ok(Value::Bool),
        Term::NatRec(m, z, s, n) => {
            check(genv, ctx, n, &Value::Nat)?;
            ensure_family(genv, ctx, m, 1, &|_, _| Value::Nat)?;
            let m_v = eval(genv, &ctx.env, m)?;
            check(genv, ctx, z, &apply(genv, &m_v, Value::Zero)?)?;
            let s_ty = eval(genv, &ctx.env, &natrec_succ_case_type(m))?;
            check(genv, ctx, s, &s_ty)?;
            let n_v = eval(genv, &ctx.env, n)?;
            apply(genv, &m_v, n_v)
        }
        Term::UnitRec(m, c, u) => {
            check(genv, ctx, u, &Value::Unit)?;
            ensure_family(genv, ctx, m, 1, &|_, _| Value::Unit)?;
            let m_v = eval(genv, &ctx.env, m)?;
            check(genv, ctx, c, &apply(genv, &m_v, Value::Star)?)?;
            let u_v = eval(genv, &ctx.env, u)?;
            apply(genv, &m_v, u_v)
        }
        Term::EmptyRec(m, e) => {
            check(genv, ctx, e, &Value::Empty)?;
            ensure_family(genv, ctx, m, 1, &|_, _| Value::Empty)?;
            let m_v = eval(genv, &ctx.env, m)?;
            let e_v = eval(genv, &ctx.env, e)?;
            apply(genv, &m_v, e_v)
        }
        Term::BoolRec(m, tc, fc, b) => {
            check(genv, ctx, b, &Value::Bool)?;
            ensure_family(genv, ctx, m, 1, &|_, _| Value::Bool)?;
            let m_v = eval(genv, &ctx.env, m)?;
            check(genv, ctx, tc, &apply(genv, &m_v, Value::True)?)?;
            check(genv, ctx, fc, &apply(genv, &m_v, Value::False)?)?;
            let b_v = eval(genv, &ctx.env, b)?;
            apply(genv, &m_v, b_v)
        }
        Term::Global(name) => match genv.lookup(name) {
            Some(entry) => Ok(entry.ty.clone()),
            None => Err(Diagnostic::new(
                ErrorCode::Unresolved,
                format!("unknown global `{}`", name),
            )),
        },
        Term::Meta(_) => Err(Diagnostic::new(
            ErrorCode::Stuck,
            "metavariable reached the kernel (unzonked term)",
        )),
    }
}

/// Infer `t` and require the result to be a universe; returns the level.
pub fn infer_type(genv: &GlobalEnv, ctx: &Context, t: &Term) -> Result<u32> {
    match infer(genv, ctx, t)? {
        Value::Universe(l) => Ok(l),
        other => Err(type_err(
            genv,
            ctx,
            format!("expected a type, found a term of type {}", pretty::render_value(genv, ctx, &other)),
        )),
    }
}

/// Check `t` against the type value `expected`.
pub fn check(genv: &GlobalEnv, ctx: &Context, t: &Term, expected: &Value) -> Result<()> {
    match (t, expected) {
        (Term::Lambda(name, body), Value::Pi(dom, cod, _)) => {
            let fresh = Value::local(ctx.depth());
            let cod_v = apply_closure(genv, cod, fresh)?;
            let ctx2 = ctx.bind_param(name.clone(), (**dom).clone());
            check(genv, &ctx2, body, &cod_v)
        }
        (Term::Lambda(..), other) => Err(type_err(
            genv,
            ctx,
            format!(
                "function literal checked against non-function type {}",
                pretty::render_value(genv, ctx, other)
            ),
        )),
        (Term::Pair(a, b), Value::Sigma(first, second)) => {
            check(genv, ctx, a, first)?;
            let a_v = eval(genv, &ctx.env, a)?;
            let b_ty = apply_closure(genv, second, a_v)?;
            check(genv, ctx, b, &b_ty)
        }
        (Term::Pair(..), other) => Err(type_err(
            genv,
            ctx,
            format!(
                "pair literal checked against non-pair type {}",
                pretty::render_value(genv, ctx, other)
            ),
        )),
        (Term::App(f, a), _) if matches!(f.as_ref(), Term::Lambda(..)) => {
            // Dependent let, checking mode.
            let Term::Lambda(x, body) = f.as_ref() else { unreachable!() };
            let a_ty = infer(genv, ctx, a)?;
            let a_v = eval(genv, &ctx.env, a)?;
            let ctx2 = ctx.bind_def(x.clone(), a_ty, a_v);
            check(genv, &ctx2, body, expected)
        }
        _ => {
            let inferred = infer(genv, ctx, t)?;
            subsume(genv, ctx, &inferred, expected)
        }
    }
}

/// Accept `inferred` where `expected` is wanted: equal up to conversion,
/// with universe cumulativity at the leaf (`Type i` fits `Type j` iff
/// `i <= j` — in particular `Type i : Type i` is rejected).
pub fn subsume(genv: &GlobalEnv, ctx: &Context, inferred: &Value, expected: &Value) -> Result<()> {
    if let (Value::Universe(i), Value::Universe(j)) = (inferred, expected) {
        return if i <= j {
            Ok(())
        } else {
            Err(Diagnostic::new(
                ErrorCode::Universe,
                format!("Type {} does not fit in Type {}", i, j),
            ))
        };
    }
    if convert(genv, ctx.depth(), inferred, expected)? {
        Ok(())
    } else {
        Err(type_err(
            genv,
            ctx,
            format!(
                "type mismatch: expected {}, found {}",
                pretty::render_value(genv, ctx, expected),
                pretty::render_value(genv, ctx, inferred)
            ),
        ))
    }
}

/// Check that `motive` is an `arity`-place type family and return the
/// universe level it targets. `dom_at(i, vars)` computes the i-th expected
/// domain from the values bound for the earlier places. Leading lambdas are
/// peeled against the expected domains; the remainder must *infer* a
/// Pi-telescope ending in a universe.
pub fn ensure_family(
    genv: &GlobalEnv,
    ctx: &Context,
    motive: &Term,
    arity: usize,
    dom_at: &dyn Fn(usize, &[Value]) -> Value,
) -> Result<u32> {
    let mut ctx_cur = ctx.clone();
    let mut vars: Vec<Value> = Vec::new();
    let mut t = motive;
    while vars.len() < arity {
        if let Term::Lambda(name, body) = t {
            let dom = dom_at(vars.len(), &vars);
            let fresh = Value::local(ctx_cur.depth());
            ctx_cur = ctx_cur.bind_param(name.clone(), dom);
            vars.push(fresh);
            t = body;
        } else {
            break;
        }
    }
    let mut ty = infer(genv, &ctx_cur, t)?;
    let mut depth = ctx_cur.depth();
    while vars.len() < arity {
        match ty {
            Value::Pi(dom, cod, _) => {
                let want = dom_at(vars.len(), &vars);
                if !convert(genv, depth, &dom, &want)? {
                    return Err(type_err(
                        genv,
                        &ctx_cur,
                        "eliminator motive has the wrong domain".to_string(),
                    ));
                }
                let fresh = Value::local(depth);
                depth += 1;
                ty = apply_closure(genv, &cod, fresh.clone())?;
                vars.push(fresh);
            }
            _ => {
                return Err(type_err(
                    genv,
                    &ctx_cur,
                    "eliminator motive does not take enough arguments".to_string(),
                ))
            }
        }
    }
    match ty {
        Value::Universe(l) => Ok(l),
        _ => Err(type_err(genv, &ctx_cur, "eliminator motive must target a universe".to_string())),
    }
}

/// The type of path induction's base case, as a term to evaluate in the
/// current environment: `Pi (x : A) -> C x x (refl A x)`, where `motive`
/// and `a_ty` are terms at the current depth.
pub(crate) fn j_base_case_type(motive: &Term, a_ty: &Term) -> Term {
    let m1 = shift(motive, 0, 1);
    let a1 = shift(a_ty, 0, 1);
    Term::pi(
        "x",
        a_ty.clone(),
        Term::app(
            Term::app(Term::app(m1, Term::Var(0)), Term::Var(0)),
            Term::refl(a1, Term::Var(0)),
        ),
        false,
    )
}

/// The type of natural recursion's successor case:
/// `Pi (k : Nat) -> C k -> C (succ k)`.
pub(crate) fn natrec_succ_case_type(motive: &Term) -> Term {
    let m1 = shift(motive, 0, 1);
    let m2 = shift(motive, 0, 2);
    Term::pi(
        "k",
        Term::Nat,
        Term::pi(
            "_",
            Term::app(m1, Term::Var(0)),
            Term::app(m2, Term::succ(Term::Var(1))),
            false,
        ),
        false,
    )
}

/// Check a declaration and extend the environment with it. The stated type
/// must land in some universe; a body is checked against the stated type's
/// value. Errors are tagged with the declaration's name and span.
pub fn check_decl(genv: &mut GlobalEnv, decl: &Declaration) -> Result<()> {
    let tag = |d: Diagnostic| {
        d.with_span(&decl.span).in_context(&format!("in declaration `{}`", decl.name))
    };
    if genv.contains(&decl.name) {
        return Err(Diagnostic::at(
            ErrorCode::Duplicate,
            decl.span.clone(),
            format!("duplicate declaration `{}`", decl.name),
        ));
    }
    let ctx = Context::empty();
    infer_type(genv, &ctx, &decl.ty).map_err(tag)?;
    let ty_v = eval(genv, &Env::empty(), &decl.ty).map_err(tag)?;
    let value = match &decl.body {
        Some(body) => {
            check(genv, &ctx, body, &ty_v).map_err(tag)?;
            Some(eval(genv, &Env::empty(), body).map_err(tag)?)
        }
        None => None,
    };
    genv.insert(GlobalEntry {
        name: decl.name.clone(),
        ty: ty_v,
        value,
        ty_term: decl.ty.clone(),
        body_term: decl.body.clone(),
    });
    Ok(())
}
