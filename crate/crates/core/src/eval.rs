//! Evaluation into the semantic domain and quotation back to terms.
//!
//! `eval` is beta/iota-normalizing: redexes reduce as they are built, global
//! definitions unfold eagerly, axioms stay neutral, and eliminators applied
//! to neutral scrutinees extend the spine. `quote` reads a value back at a
//! binder depth, converting levels to indices; `eval` after `quote` is the
//! identity up to conversion, and `quote` of an evaluated quote is syntactic
//! identity (normal forms are stable).
//!
//! Ill-formed input (e.g. applying a pair) is a caller bug surfaced as
//! `E-STUCK`; on kernel-checked terms these paths are unreachable.

use crate::diag::{Diagnostic, ErrorCode, Result};
use crate::syntax::Term;
use crate::value::{Closure, Env, Frame, GlobalEnv, Head, Value};
use std::rc::Rc;

fn stuck(msg: &str) -> Diagnostic {
    Diagnostic::new(ErrorCode::Stuck, format!("evaluation stuck: {}", msg))
}

/// Evaluate `t` in `env`. Metavariables evaluate to bare neutral heads; the
/// kernel never sees them, but the elaborator shares this evaluator.
pub fn eval(genv: &GlobalEnv, env: &Env, t: &Term) -> Result<Value> {
    match t {
        Term::Var(ix) => {
            env.get(*ix).cloned().ok_or_else(|| stuck("unbound variable"))
        }
        Term::Universe(l) => Ok(Value::Universe(*l)),
        Term::Pi(name, dom, cod, implicit) => Ok(Value::Pi(
            Rc::new(eval(genv, env, dom)?),
            Closure { name: name.clone(), env: env.clone(), body: cod.clone() },
            *implicit,
        )),
        Term::Lambda(name, body) => Ok(Value::Lambda(Closure {
            name: name.clone(),
            env: env.clone(),
            body: body.clone(),
        })),
        Term::App(f, a) => {
            let fv = eval(genv, env, f)?;
            let av = eval(genv, env, a)?;
            apply(genv, &fv, av)
        }
        Term::Sigma(name, first, second) => Ok(Value::Sigma(
            Rc::new(eval(genv, env, first)?),
            Closure { name: name.clone(), env: env.clone(), body: second.clone() },
        )),
        Term::Pair(a, b) => {
            Ok(Value::Pair(Rc::new(eval(genv, env, a)?), Rc::new(eval(genv, env, b)?)))
        }
        Term::Fst(p) => do_fst(&eval(genv, env, p)?),
        Term::Snd(p) => do_snd(&eval(genv, env, p)?),
        Term::Id(ty, l, r) => Ok(Value::Id(
            Rc::new(eval(genv, env, ty)?),
            Rc::new(eval(genv, env, l)?),
            Rc::new(eval(genv, env, r)?),
        )),
        Term::Refl(ty, p) => {
            Ok(Value::Refl(Rc::new(eval(genv, env, ty)?), Rc::new(eval(genv, env, p)?)))
        }
        Term::J(m, b, l, r, p) => {
            let mv = eval(genv, env, m)?;
            let bv = eval(genv, env, b)?;
            let lv = eval(genv, env, l)?;
            let rv = eval(genv, env, r)?;
            let pv = eval(genv, env, p)?;
            do_j(genv, &mv, &bv, &lv, &rv, &pv)
        }
        Term::Nat => Ok(Value::Nat),
        Term::Zero => Ok(Value::Zero),
        Term::Succ(n) => Ok(Value::Succ(Rc::new(eval(genv, env, n)?))),
        Term::NatRec(m, z, s, n) => {
            let mv = eval(genv, env, m)?;
            let zv = eval(genv, env, z)?;
            let sv = eval(genv, env, s)?;
            let nv = eval(genv, env, n)?;
            do_natrec(genv, &mv, &zv, &sv, &nv)
        }
        Term::Unit => Ok(Value::Unit),
        Term::Star => Ok(Value::Star),
        Term::UnitRec(m, c, u) => {
            let mv = eval(genv, env, m)?;
            let cv = eval(genv, env, c)?;
            let uv = eval(genv, env, u)?;
            do_unitrec(&mv, &cv, &uv)
        }
        Term::Empty => Ok(Value::Empty),
        Term::EmptyRec(m, e) => {
            let mv = eval(genv, env, m)?;
            let ev = eval(genv, env, e)?;
            do_emptyrec(&mv, &ev)
        }
        Term::Bool => Ok(Value::Bool),
        Term::True => Ok(Value::True),
        Term::False => Ok(Value::False),
        Term::BoolRec(m, tc, fc, b) => {
            let mv = eval(genv, env, m)?;
            let tv = eval(genv, env, tc)?;
            let fv = eval(genv, env, fc)?;
            let bv = eval(genv, env, b)?;
            do_boolrec(genv, &mv, &tv, &fv, &bv)
        }
        Term::Global(name) => match genv.lookup(name) {
            Some(entry) => match &entry.value {
                // Definitions unfold eagerly; axioms are opaque heads.
                Some(v) => Ok(v.clone()),
                None => Ok(Value::neutral(Head::Global(name.clone()))),
            },
            None => Err(stuck(&format!("unknown global `{}`", name))),
        },
        Term::Meta(id) => Ok(Value::neutral(Head::Meta(*id))),
    }
}

/// Instantiate a closure with the value of its binder.
pub fn apply_closure(genv: &GlobalEnv, cl: &Closure, v: Value) -> Result<Value> {
    eval(genv, &cl.env.push(v), &cl.body)
}

/// Apply a function value to an argument.
pub fn apply(genv: &GlobalEnv, f: &Value, a: Value) -> Result<Value> {
    match f {
        Value::Lambda(cl) => apply_closure(genv, cl, a),
        Value::Neutral(h, sp) => Ok(Value::extend(h, sp, Frame::App(a))),
        _ => Err(stuck("applying a non-function")),
    }
}

/// Apply to several arguments in order.
pub fn apply_many(genv: &GlobalEnv, f: &Value, args: &[Value]) -> Result<Value> {
    let mut v = f.clone();
    for a in args {
        v = apply(genv, &v, a.clone())?;
    }
    Ok(v)
}

pub fn do_fst(p: &Value) -> Result<Value> {
    match p {
        Value::Pair(a, _) => Ok((**a).clone()),
        Value::Neutral(h, sp) => Ok(Value::extend(h, sp, Frame::Fst)),
        _ => Err(stuck("projecting from a non-pair")),
    }
}

pub fn do_snd(p: &Value) -> Result<Value> {
    match p {
        Value::Pair(_, b) => Ok((**b).clone()),
        Value::Neutral(h, sp) => Ok(Value::extend(h, sp, Frame::Snd)),
        _ => Err(stuck("projecting from a non-pair")),
    }
}

/// Path induction: computes on `refl`, otherwise extends the spine.
pub fn do_j(
    genv: &GlobalEnv,
    motive: &Value,
    base: &Value,
    lhs: &Value,
    rhs: &Value,
    path: &Value,
) -> Result<Value> {
    match path {
        Value::Refl(_, point) => apply(genv, base, (**point).clone()),
        Value::Neutral(h, sp) => Ok(Value::extend(
            h,
            sp,
            Frame::J {
                motive: motive.clone(),
                base: base.clone(),
                lhs: lhs.clone(),
                rhs: rhs.clone(),
            },
        )),
        _ => Err(stuck("path induction on a non-path")),
    }
}

pub fn do_natrec(
    genv: &GlobalEnv,
    motive: &Value,
    zero: &Value,
    succ: &Value,
    n: &Value,
) -> Result<Value> {
    match n {
        Value::Zero => Ok(zero.clone()),
        Value::Succ(m) => {
            let rec = do_natrec(genv, motive, zero, succ, m)?;
            let step = apply(genv, succ, (**m).clone())?;
            apply(genv, &step, rec)
        }
        Value::Neutral(h, sp) => Ok(Value::extend(
            h,
            sp,
            Frame::NatRec { motive: motive.clone(), zero: zero.clone(), succ: succ.clone() },
        )),
        _ => Err(stuck("natural recursion on a non-number")),
    }
}

pub fn do_boolrec(
    _genv: &GlobalEnv,
    motive: &Value,
    tcase: &Value,
    fcase: &Value,
    b: &Value,
) -> Result<Value> {
    match b {
        Value::True => Ok(tcase.clone()),
        Value::False => Ok(fcase.clone()),
        Value::Neutral(h, sp) => Ok(Value::extend(
            h,
            sp,
            Frame::BoolRec { motive: motive.clone(), tcase: tcase.clone(), fcase: fcase.clone() },
        )),
        _ => Err(stuck("boolean recursion on a non-boolean")),
    }
}

pub fn do_unitrec(motive: &Value, case: &Value, u: &Value) -> Result<Value> {
    match u {
        Value::Star => Ok(case.clone()),
        Value::Neutral(h, sp) => {
            Ok(Value::extend(h, sp, Frame::UnitRec { motive: motive.clone(), case: case.clone() }))
        }
        _ => Err(stuck("unit recursion on a non-unit")),
    }
}

pub fn do_emptyrec(motive: &Value, e: &Value) -> Result<Value> {
    match e {
        Value::Neutral(h, sp) => {
            Ok(Value::extend(h, sp, Frame::EmptyRec { motive: motive.clone() }))
        }
        _ => Err(stuck("ex falso on a constructor")),
    }
}

/// Replay one elimination frame against a value (used when forcing solved
/// metavariables).
pub fn apply_frame(genv: &GlobalEnv, v: &Value, frame: &Frame) -> Result<Value> {
    match frame {
        Frame::App(a) => apply(genv, v, a.clone()),
        Frame::Fst => do_fst(v),
        Frame::Snd => do_snd(v),
        Frame::J { motive, base, lhs, rhs } => do_j(genv, motive, base, lhs, rhs, v),
        Frame::NatRec { motive, zero, succ } => do_natrec(genv, motive, zero, succ, v),
        Frame::BoolRec { motive, tcase, fcase } => do_boolrec(genv, motive, tcase, fcase, v),
        Frame::UnitRec { motive, case } => do_unitrec(motive, case, v),
        Frame::EmptyRec { motive } => do_emptyrec(motive, v),
    }
}

/// Read a value back to a term at binder depth `depth` (levels become
/// indices `depth - 1 - level`).
pub fn quote(genv: &GlobalEnv, v: &Value, depth: usize) -> Result<Term> {
    match v {
        Value::Universe(l) => Ok(Term::Universe(*l)),
        Value::Pi(dom, cod, implicit) => {
            let fresh = Value::local(depth);
            let cod_v = apply_closure(genv, cod, fresh)?;
            Ok(Term::Pi(
                cod.name.clone(),
                Rc::new(quote(genv, dom, depth)?),
                Rc::new(quote(genv, &cod_v, depth + 1)?),
                *implicit,
            ))
        }
        Value::Lambda(cl) => {
            let fresh = Value::local(depth);
            let body_v = apply_closure(genv, cl, fresh)?;
            Ok(Term::Lambda(cl.name.clone(), Rc::new(quote(genv, &body_v, depth + 1)?)))
        }
        Value::Sigma(first, second, ) => {
            let fresh = Value::local(depth);
            let second_v = apply_closure(genv, second, fresh)?;
            Ok(Term::Sigma(
                second.name.clone(),
                Rc::new(quote(genv, first, depth)?),
                Rc::new(quote(genv, &second_v, depth + 1)?),
            ))
        }
        Value::Pair(a, b) => {
            Ok(Term::Pair(Rc::new(quote(genv, a, depth)?), Rc::new(quote(genv, b, depth)?)))
        }
        Value::Id(ty, l, r) => Ok(Term::Id(
            Rc::new(quote(genv, ty, depth)?),
            Rc::new(quote(genv, l, depth)?),
            Rc::new(quote(genv, r, depth)?),
        )),
        Value::Refl(ty, p) => Ok(Term::Refl(
            Rc::new(quote(genv, ty, depth)?),
            Rc::new(quote(genv, p, depth)?),
        )),
        Value::Nat => Ok(Term::Nat),
        Value::Zero => Ok(Term::Zero),
        Value::Succ(n) => Ok(Term::Succ(Rc::new(quote(genv, n, depth)?))),
        Value::Unit => Ok(Term::Unit),
        Value::Star => Ok(Term::Star),
        Value::Empty => Ok(Term::Empty),
        Value::Bool => Ok(Term::Bool),
        Value::True => Ok(Term::True),
        Value::False => Ok(Term::False),
        Value::Neutral(head, spine) => {
            let mut acc = match head {
                Head::Local(level) => {
                    if *level >= depth {
                        return Err(stuck("variable escapes its scope"));
                    }
                    Term::Var(depth - 1 - level)
                }
                Head::Global(name) => Term::Global(name.clone()),
                Head::Meta(id) => Term::Meta(*id),
            };
            for frame in spine.iter() {
                acc = match frame {
                    Frame::App(a) => Term::app(acc, quote(genv, a, depth)?),
                    Frame::Fst => Term::fst(acc),
                    Frame::Snd => Term::snd(acc),
                    Frame::J { motive, base, lhs, rhs } => Term::j(
                        quote(genv, motive, depth)?,
                        quote(genv, base, depth)?,
                        quote(genv, lhs, depth)?,
                        quote(genv, rhs, depth)?,
                        acc,
                    ),
                    Frame::NatRec { motive, zero, succ } => Term::nat_rec(
                        quote(genv, motive, depth)?,
                        quote(genv, zero, depth)?,
                        quote(genv, succ, depth)?,
                        acc,
                    ),
                    Frame::BoolRec { motive, tcase, fcase } => Term::bool_rec(
                        quote(genv, motive, depth)?,
                        quote(genv, tcase, depth)?,
                        quote(genv, fcase, depth)?,
                        acc,
                    ),
                    Frame::UnitRec { motive, case } => Term::unit_rec(
                        quote(genv, motive, depth)?,
                        quote(genv, case, depth)?,
                        acc,
                    ),
                    Frame::EmptyRec { motive } => {
                        Term::empty_rec(quote(genv, motive, depth)?, acc)
                    }
                };
            }
            Ok(acc)
        }
    }
}

/// Beta/iota normal form of a closed term: quote after eval.
pub fn nf(genv: &GlobalEnv, t: &Term) -> Result<Term> {
    quote(genv, &eval(genv, &Env::empty(), t)?, 0)
}
