//! Definitional equality on values.
//!
//! Untyped, shape-directed comparison of weak-head forms with
//! eta-expansion: when exactly one side is a lambda, the other side is
//! applied to the same fresh variable (function eta); when exactly one side
//! is a pair, the other is compared through its projections (surjective
//! pairing). There is no unit eta. Universes compare by exact level —
//! cumulativity lives solely in the checking judgment. Neutrals compare
//! head-to-head and frame-by-frame.

use crate::diag::Result;
use crate::eval::{apply, apply_closure, do_fst, do_snd};
use crate::value::{Frame, GlobalEnv, Value};

/// Decide definitional equality of two values of the same type at binder
/// depth `depth`.
pub fn convert(genv: &GlobalEnv, depth: usize, l: &Value, r: &Value) -> Result<bool> {
    use Value::*;
    match (l, r) {
        (Universe(a), Universe(b)) => Ok(a == b),
        (Pi(d1, c1, i1), Pi(d2, c2, i2)) => {
            if i1 != i2 || !convert(genv, depth, d1, d2)? {
                return Ok(false);
            }
            let fresh = Value::local(depth);
            let b1 = apply_closure(genv, c1, fresh.clone())?;
            let b2 = apply_closure(genv, c2, fresh)?;
            convert(genv, depth + 1, &b1, &b2)
        }
        (Sigma(f1, s1), Sigma(f2, s2)) => {
            if !convert(genv, depth, f1, f2)? {
                return Ok(false);
            }
            let fresh = Value::local(depth);
            let b1 = apply_closure(genv, s1, fresh.clone())?;
            let b2 = apply_closure(genv, s2, fresh)?;
            convert(genv, depth + 1, &b1, &b2)
        }
        (Lambda(c1), Lambda(c2)) => {
            let fresh = Value::local(depth);
            let b1 = apply_closure(genv, c1, fresh.clone())?;
            let b2 = apply_closure(genv, c2, fresh)?;
            convert(genv, depth + 1, &b1, &b2)
        }
        // Function eta: compare the lambda's body against the other side
        // applied to the same fresh variable.
        (Lambda(cl), other) | (other, Lambda(cl)) => {
            let fresh = Value::local(depth);
            let lam_side = apply_closure(genv, cl, fresh.clone())?;
            let other_side = apply(genv, other, fresh)?;
            convert(genv, depth + 1, &lam_side, &other_side)
        }
        (Pair(a1, b1), Pair(a2, b2)) => {
            Ok(convert(genv, depth, a1, a2)? && convert(genv, depth, b1, b2)?)
        }
        // Surjective pairing: a pair equals anything whose projections match
        // its components.
        (Pair(a, b), other) | (other, Pair(a, b)) => {
            Ok(convert(genv, depth, a, &do_fst(other)?)?
                && convert(genv, depth, b, &do_snd(other)?)?)
        }
        (Id(t1, l1, r1), Id(t2, l2, r2)) => Ok(convert(genv, depth, t1, t2)?
            && convert(genv, depth, l1, l2)?
            && convert(genv, depth, r1, r2)?),
        (Refl(_, p1), Refl(_, p2)) => convert(genv, depth, p1, p2),
        (Nat, Nat) | (Unit, Unit) | (Star, Star) | (Empty, Empty) => Ok(true),
        (Bool, Bool) | (True, True) | (False, False) | (Zero, Zero) => Ok(true),
        (Succ(a), Succ(b)) => convert(genv, depth, a, b),
        (Neutral(h1, sp1), Neutral(h2, sp2)) => {
            if h1 != h2 || sp1.len() != sp2.len() {
                return Ok(false);
            }
            for (f1, f2) in sp1.iter().zip(sp2.iter()) {
                if !convert_frame(genv, depth, f1, f2)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(false),
    }
}

fn convert_frame(genv: &GlobalEnv, depth: usize, l: &Frame, r: &Frame) -> Result<bool> {
    match (l, r) {
        (Frame::App(a), Frame::App(b)) => convert(genv, depth, a, b),
        (Frame::Fst, Frame::Fst) | (Frame::Snd, Frame::Snd) => Ok(true),
        (
            Frame::J { motive: m1, base: b1, lhs: l1, rhs: r1 },
            Frame::J { motive: m2, base: b2, lhs: l2, rhs: r2 },
        ) => Ok(convert(genv, depth, m1, m2)?
            && convert(genv, depth, b1, b2)?
            && convert(genv, depth, l1, l2)?
            && convert(genv, depth, r1, r2)?),
        (
            Frame::NatRec { motive: m1, zero: z1, succ: s1 },
            Frame::NatRec { motive: m2, zero: z2, succ: s2 },
        ) => Ok(convert(genv, depth, m1, m2)?
            && convert(genv, depth, z1, z2)?
            && convert(genv, depth, s1, s2)?),
        (
            Frame::BoolRec { motive: m1, tcase: t1, fcase: f1 },
            Frame::BoolRec { motive: m2, tcase: t2, fcase: f2 },
        ) => Ok(convert(genv, depth, m1, m2)?
            && convert(genv, depth, t1, t2)?
            && convert(genv, depth, f1, f2)?),
        (
            Frame::UnitRec { motive: m1, case: c1 },
            Frame::UnitRec { motive: m2, case: c2 },
        ) => Ok(convert(genv, depth, m1, m2)? && convert(genv, depth, c1, c2)?),
        (Frame::EmptyRec { motive: m1 }, Frame::EmptyRec { motive: m2 }) => {
            convert(genv, depth, m1, m2)
        }
        _ => Ok(false),
    }
}
