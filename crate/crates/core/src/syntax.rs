//! Core term language: de Bruijn indices, binder names kept only for
//! printing, and the scope utilities (`well_scoped`, `shift`, `subst`).
//!
//! Equality on [`Term`] ignores binder names, so alpha-equivalence is plain
//! `==`. A term that reaches the kernel must contain no [`Term::Meta`] node;
//! metavariables exist only between elaboration and zonking.

use crate::diag::SourceSpan;
use std::rc::Rc;

/// Binder and declaration names. Cheap to clone, compared by contents.
pub type Name = Rc<str>;

/// Abstract syntax of the core theory.
#[derive(Debug, Clone)]
pub enum Term {
    /// Bound variable as a de Bruijn index (0 = innermost binder).
    Var(usize),
    /// `Type l`.
    Universe(u32),
    /// Dependent function type; the flag marks an implicit binder
    /// (elaboration-time only — checking ignores it).
    Pi(Name, Rc<Term>, Rc<Term>, bool),
    /// Function literal.
    Lambda(Name, Rc<Term>),
    /// Application.
    App(Rc<Term>, Rc<Term>),
    /// Dependent pair type.
    Sigma(Name, Rc<Term>, Rc<Term>),
    /// Pair literal (no annotation: pairs are checkable, not inferable).
    Pair(Rc<Term>, Rc<Term>),
    /// First projection.
    Fst(Rc<Term>),
    /// Second projection.
    Snd(Rc<Term>),
    /// Identity (path) type `Id A x y`; the ambient type is explicit.
    Id(Rc<Term>, Rc<Term>, Rc<Term>),
    /// Reflexivity `refl A x`.
    Refl(Rc<Term>, Rc<Term>),
    /// Path induction over both endpoints: motive, base case, lhs, rhs, path.
    J(Rc<Term>, Rc<Term>, Rc<Term>, Rc<Term>, Rc<Term>),
    Nat,
    Zero,
    Succ(Rc<Term>),
    /// Natural number induction: motive, zero case, successor case, scrutinee.
    NatRec(Rc<Term>, Rc<Term>, Rc<Term>, Rc<Term>),
    Unit,
    Star,
    /// Unit induction: motive, star case, scrutinee.
    UnitRec(Rc<Term>, Rc<Term>, Rc<Term>),
    Empty,
    /// Ex falso: motive, scrutinee.
    EmptyRec(Rc<Term>, Rc<Term>),
    Bool,
    True,
    False,
    /// Boolean induction: motive, true case, false case, scrutinee.
    BoolRec(Rc<Term>, Rc<Term>, Rc<Term>, Rc<Term>),
    /// Reference to a checked global declaration.
    Global(Name),
    /// Metavariable; present only during elaboration.
    Meta(u32),
}

impl PartialEq for Term {
    /// Structural equality ignoring binder names (alpha-equivalence).
    fn eq(&self, other: &Self) -> bool {
        use Term::*;
        match (self, other) {
            (Var(a), Var(b)) => a == b,
            (Universe(a), Universe(b)) => a == b,
            (Pi(_, d1, c1, i1), Pi(_, d2, c2, i2)) => i1 == i2 && d1 == d2 && c1 == c2,
            (Lambda(_, b1), Lambda(_, b2)) => b1 == b2,
            (App(f1, a1), App(f2, a2)) => f1 == f2 && a1 == a2,
            (Sigma(_, f1, s1), Sigma(_, f2, s2)) => f1 == f2 && s1 == s2,
            (Pair(a1, b1), Pair(a2, b2)) => a1 == a2 && b1 == b2,
            (Fst(a), Fst(b)) | (Snd(a), Snd(b)) | (Succ(a), Succ(b)) => a == b,
            (Id(t1, l1, r1), Id(t2, l2, r2)) => t1 == t2 && l1 == l2 && r1 == r2,
            (Refl(t1, p1), Refl(t2, p2)) => t1 == t2 && p1 == p2,
            (J(m1, b1, l1, r1, p1), J(m2, b2, l2, r2, p2)) => {
                m1 == m2 && b1 == b2 && l1 == l2 && r1 == r2 && p1 == p2
            }
            (Nat, Nat) | (Zero, Zero) | (Unit, Unit) | (Star, Star) => true,
            (Empty, Empty) | (Bool, Bool) | (True, True) | (False, False) => true,
            (NatRec(m1, z1, s1, n1), NatRec(m2, z2, s2, n2)) => {
                m1 == m2 && z1 == z2 && s1 == s2 && n1 == n2
            }
            (UnitRec(m1, c1, u1), UnitRec(m2, c2, u2)) => m1 == m2 && c1 == c2 && u1 == u2,
            (EmptyRec(m1, e1), EmptyRec(m2, e2)) => m1 == m2 && e1 == e2,
            (BoolRec(m1, t1, f1, b1), BoolRec(m2, t2, f2, b2)) => {
                m1 == m2 && t1 == t2 && f1 == f2 && b1 == b2
            }
            (Global(a), Global(b)) => a == b,
            (Meta(a), Meta(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Term {
    // Convenience constructors that wrap children in `Rc`.
    pub fn pi(name: &str, dom: Term, cod: Term, implicit: bool) -> Term {
        Term::Pi(Rc::from(name), Rc::new(dom), Rc::new(cod), implicit)
    }
    pub fn lam(name: &str, body: Term) -> Term {
        Term::Lambda(Rc::from(name), Rc::new(body))
    }
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Rc::new(f), Rc::new(a))
    }
    pub fn sigma(name: &str, first: Term, second: Term) -> Term {
        Term::Sigma(Rc::from(name), Rc::new(first), Rc::new(second))
    }
    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Rc::new(a), Rc::new(b))
    }
    pub fn fst(t: Term) -> Term {
        Term::Fst(Rc::new(t))
    }
    pub fn snd(t: Term) -> Term {
        Term::Snd(Rc::new(t))
    }
    pub fn id(ty: Term, lhs: Term, rhs: Term) -> Term {
        Term::Id(Rc::new(ty), Rc::new(lhs), Rc::new(rhs))
    }
    pub fn refl(ty: Term, point: Term) -> Term {
        Term::Refl(Rc::new(ty), Rc::new(point))
    }
    pub fn j(motive: Term, base: Term, lhs: Term, rhs: Term, path: Term) -> Term {
        Term::J(Rc::new(motive), Rc::new(base), Rc::new(lhs), Rc::new(rhs), Rc::new(path))
    }
    pub fn succ(t: Term) -> Term {
        Term::Succ(Rc::new(t))
    }
    pub fn nat_rec(motive: Term, z: Term, s: Term, n: Term) -> Term {
        Term::NatRec(Rc::new(motive), Rc::new(z), Rc::new(s), Rc::new(n))
    }
    pub fn unit_rec(motive: Term, c: Term, u: Term) -> Term {
        Term::UnitRec(Rc::new(motive), Rc::new(c), Rc::new(u))
    }
    pub fn empty_rec(motive: Term, e: Term) -> Term {
        Term::EmptyRec(Rc::new(motive), Rc::new(e))
    }
    pub fn bool_rec(motive: Term, t: Term, f: Term, b: Term) -> Term {
        Term::BoolRec(Rc::new(motive), Rc::new(t), Rc::new(f), Rc::new(b))
    }
    pub fn global(name: &str) -> Term {
        Term::Global(Rc::from(name))
    }

    /// Build `succ^n zero`.
    pub fn nat_lit(n: u64) -> Term {
        let mut t = Term::Zero;
        for _ in 0..n {
            t = Term::succ(t);
        }
        t
    }
}

/// True iff every variable index is below its enclosing binder depth and the
/// term contains no metavariable.
pub fn well_scoped(t: &Term, depth: usize) -> bool {
    use Term::*;
    match t {
        Var(i) => *i < depth,
        Meta(_) => false,
        Universe(_) | Nat | Zero | Unit | Star | Empty | Bool | True | False | Global(_) => true,
        Pi(_, d, c, _) | Sigma(_, d, c) => well_scoped(d, depth) && well_scoped(c, depth + 1),
        Lambda(_, b) => well_scoped(b, depth + 1),
        App(f, a) | Pair(f, a) => well_scoped(f, depth) && well_scoped(a, depth),
        Fst(a) | Snd(a) | Succ(a) => well_scoped(a, depth),
        Id(ty, l, r) => well_scoped(ty, depth) && well_scoped(l, depth) && well_scoped(r, depth),
        Refl(ty, p) => well_scoped(ty, depth) && well_scoped(p, depth),
        J(m, b, l, r, p) => {
            well_scoped(m, depth)
                && well_scoped(b, depth)
                && well_scoped(l, depth)
                && well_scoped(r, depth)
                && well_scoped(p, depth)
        }
        NatRec(m, z, s, n) => {
            well_scoped(m, depth)
                && well_scoped(z, depth)
                && well_scoped(s, depth)
                && well_scoped(n, depth)
        }
        UnitRec(m, c, u) => well_scoped(m, depth) && well_scoped(c, depth) && well_scoped(u, depth),
        EmptyRec(m, e) => well_scoped(m, depth) && well_scoped(e, depth),
        BoolRec(m, tc, fc, b) => {
            well_scoped(m, depth)
                && well_scoped(tc, depth)
                && well_scoped(fc, depth)
                && well_scoped(b, depth)
        }
    }
}

/// Raise every free index `>= cutoff` by `amount`, leaving bound structure
/// untouched.
pub fn shift(t: &Term, cutoff: usize, amount: usize) -> Term {
    use Term::*;
    match t {
        Var(i) => {
            if *i >= cutoff {
                Var(i + amount)
            } else {
                Var(*i)
            }
        }
        Universe(_) | Nat | Zero | Unit | Star | Empty | Bool | True | False | Global(_)
        | Meta(_) => t.clone(),
        Pi(n, d, c, imp) => Pi(
            n.clone(),
            Rc::new(shift(d, cutoff, amount)),
            Rc::new(shift(c, cutoff + 1, amount)),
            *imp,
        ),
        Lambda(n, b) => Lambda(n.clone(), Rc::new(shift(b, cutoff + 1, amount))),
        App(f, a) => App(Rc::new(shift(f, cutoff, amount)), Rc::new(shift(a, cutoff, amount))),
        Sigma(n, f, s) => Sigma(
            n.clone(),
            Rc::new(shift(f, cutoff, amount)),
            Rc::new(shift(s, cutoff + 1, amount)),
        ),
        Pair(a, b) => Pair(Rc::new(shift(a, cutoff, amount)), Rc::new(shift(b, cutoff, amount))),
        Fst(a) => Fst(Rc::new(shift(a, cutoff, amount))),
        Snd(a) => Snd(Rc::new(shift(a, cutoff, amount))),
        Succ(a) => Succ(Rc::new(shift(a, cutoff, amount))),
        Id(ty, l, r) => Id(
            Rc::new(shift(ty, cutoff, amount)),
            Rc::new(shift(l, cutoff, amount)),
            Rc::new(shift(r, cutoff, amount)),
        ),
        Refl(ty, p) => Refl(Rc::new(shift(ty, cutoff, amount)), Rc::new(shift(p, cutoff, amount))),
        J(m, b, l, r, p) => J(
            Rc::new(shift(m, cutoff, amount)),
            Rc::new(shift(b, cutoff, amount)),
            Rc::new(shift(l, cutoff, amount)),
            Rc::new(shift(r, cutoff, amount)),
            Rc::new(shift(p, cutoff, amount)),
        ),
        NatRec(m, z, s, n) => NatRec(
            Rc::new(shift(m, cutoff, amount)),
            Rc::new(shift(z, cutoff, amount)),
            Rc::new(shift(s, cutoff, amount)),
            Rc::new(shift(n, cutoff, amount)),
        ),
        UnitRec(m, c, u) => UnitRec(
            Rc::new(shift(m, cutoff, amount)),
            Rc::new(shift(c, cutoff, amount)),
            Rc::new(shift(u, cutoff, amount)),
        ),
        EmptyRec(m, e) => {
            EmptyRec(Rc::new(shift(m, cutoff, amount)), Rc::new(shift(e, cutoff, amount)))
        }
        BoolRec(m, tc, fc, b) => BoolRec(
            Rc::new(shift(m, cutoff, amount)),
            Rc::new(shift(tc, cutoff, amount)),
            Rc::new(shift(fc, cutoff, amount)),
            Rc::new(shift(b, cutoff, amount)),
        ),
    }
}

/// Capture-avoiding substitution of `replacement` for `Var(index)`, removing
/// that binder slot: indices above `index` are decremented (beta discipline).
pub fn subst(t: &Term, index: usize, replacement: &Term) -> Term {
    use Term::*;
    match t {
        Var(i) => {
            if *i == index {
                shift(replacement, 0, index)
            } else if *i > index {
                Var(i - 1)
            } else {
                Var(*i)
            }
        }
        Universe(_) | Nat | Zero | Unit | Star | Empty | Bool | True | False | Global(_)
        | Meta(_) => t.clone(),
        Pi(n, d, c, imp) => Pi(
            n.clone(),
            Rc::new(subst(d, index, replacement)),
            Rc::new(subst(c, index + 1, replacement)),
            *imp,
        ),
        Lambda(n, b) => Lambda(n.clone(), Rc::new(subst(b, index + 1, replacement))),
        App(f, a) => {
            App(Rc::new(subst(f, index, replacement)), Rc::new(subst(a, index, replacement)))
        }
        Sigma(n, f, s) => Sigma(
            n.clone(),
            Rc::new(subst(f, index, replacement)),
            Rc::new(subst(s, index + 1, replacement)),
        ),
        Pair(a, b) => {
            Pair(Rc::new(subst(a, index, replacement)), Rc::new(subst(b, index, replacement)))
        }
        Fst(a) => Fst(Rc::new(subst(a, index, replacement))),
        Snd(a) => Snd(Rc::new(subst(a, index, replacement))),
        Succ(a) => Succ(Rc::new(subst(a, index, replacement))),
        Id(ty, l, r) => Id(
            Rc::new(subst(ty, index, replacement)),
            Rc::new(subst(l, index, replacement)),
            Rc::new(subst(r, index, replacement)),
        ),
        Refl(ty, p) => {
            Refl(Rc::new(subst(ty, index, replacement)), Rc::new(subst(p, index, replacement)))
        }
        J(m, b, l, r, p) => J(
            Rc::new(subst(m, index, replacement)),
            Rc::new(subst(b, index, replacement)),
            Rc::new(subst(l, index, replacement)),
            Rc::new(subst(r, index, replacement)),
            Rc::new(subst(p, index, replacement)),
        ),
        NatRec(m, z, s, n) => NatRec(
            Rc::new(subst(m, index, replacement)),
            Rc::new(subst(z, index, replacement)),
            Rc::new(subst(s, index, replacement)),
            Rc::new(subst(n, index, replacement)),
        ),
        UnitRec(m, c, u) => UnitRec(
            Rc::new(subst(m, index, replacement)),
            Rc::new(subst(c, index, replacement)),
            Rc::new(subst(u, index, replacement)),
        ),
        EmptyRec(m, e) => {
            EmptyRec(Rc::new(subst(m, index, replacement)), Rc::new(subst(e, index, replacement)))
        }
        BoolRec(m, tc, fc, b) => BoolRec(
            Rc::new(subst(m, index, replacement)),
            Rc::new(subst(tc, index, replacement)),
            Rc::new(subst(fc, index, replacement)),
            Rc::new(subst(b, index, replacement)),
        ),
    }
}

/// A named definition (body present) or axiom (body absent) in core syntax.
#[derive(Debug, Clone)]
pub struct Declaration {
    pub name: Name,
    /// The stated type; checked against some universe.
    pub ty: Term,
    /// Absent for axioms.
    pub body: Option<Term>,
    pub span: SourceSpan,
}
