//! Pinned behavior of the core syntax operations (scoping, lifting,
//! substitution), plus property tests of their algebraic laws on generated
//! well-scoped terms.

use holim_core::syntax::{shift, subst, well_scoped, Term};
use proptest::prelude::*;

#[test]
fn well_scoped_bound_variable() {
    assert!(well_scoped(&Term::Var(0), 1));
}

#[test]
fn well_scoped_unbound_variable() {
    assert!(!well_scoped(&Term::Var(0), 0));
}

#[test]
fn well_scoped_under_binder() {
    // The lambda binds one more variable, so Var(1) refers to the outer one.
    assert!(well_scoped(&Term::lam("x", Term::Var(1)), 1));
}

#[test]
fn well_scoped_rejects_metas() {
    assert!(!well_scoped(&Term::Meta(0), 0));
    assert!(!well_scoped(&Term::app(Term::lam("x", Term::Var(0)), Term::Meta(3)), 0));
}

#[test]
fn shift_free_variable() {
    assert_eq!(shift(&Term::Var(0), 0, 1), Term::Var(1));
}

#[test]
fn shift_leaves_bound_variable() {
    let t = Term::lam("x", Term::Var(0));
    assert_eq!(shift(&t, 0, 1), t);
}

#[test]
fn shift_free_under_binder() {
    assert_eq!(
        shift(&Term::lam("x", Term::Var(1)), 0, 2),
        Term::lam("x", Term::Var(3))
    );
}

#[test]
fn subst_at_index() {
    assert_eq!(subst(&Term::Var(0), 0, &Term::Zero), Term::Zero);
}

#[test]
fn subst_inside_constructor() {
    assert_eq!(subst(&Term::succ(Term::Var(0)), 0, &Term::Zero), Term::succ(Term::Zero));
}

#[test]
fn subst_under_binder() {
    let t = Term::lam("x", Term::app(Term::Var(1), Term::Var(0)));
    let expected = Term::lam("x", Term::app(Term::global("f"), Term::Var(0)));
    assert_eq!(subst(&t, 0, &Term::global("f")), expected);
}

#[test]
fn equality_ignores_binder_names() {
    assert_eq!(Term::lam("x", Term::Var(0)), Term::lam("y", Term::Var(0)));
    assert_ne!(Term::lam("x", Term::Var(0)), Term::lam("x", Term::Zero));
}

/// Well-scoped term generator: every `Var` stays below the depth at its
/// position, binders increase the depth for their bodies.
fn arb_term(depth: usize, size: u32) -> BoxedStrategy<Term> {
    let mut leaves: Vec<BoxedStrategy<Term>> = vec![
        Just(Term::Nat).boxed(),
        Just(Term::Zero).boxed(),
        Just(Term::Unit).boxed(),
        Just(Term::Star).boxed(),
        Just(Term::Empty).boxed(),
        Just(Term::Bool).boxed(),
        Just(Term::True).boxed(),
        Just(Term::False).boxed(),
        (0u32..3).prop_map(Term::Universe).boxed(),
        Just(Term::global("g")).boxed(),
    ];
    if depth > 0 {
        leaves.push((0..depth).prop_map(Term::Var).boxed());
    }
    let leaf = proptest::strategy::Union::new(leaves);
    if size == 0 {
        return leaf.boxed();
    }
    let sub = move || arb_term(depth, size - 1);
    let under = move || arb_term(depth + 1, size - 1);
    prop_oneof![
        3 => leaf,
        1 => (sub(), sub()).prop_map(|(f, a)| Term::app(f, a)),
        1 => under().prop_map(|b| Term::lam("x", b)),
        1 => (sub(), under(), any::<bool>()).prop_map(|(d, c, i)| Term::pi("x", d, c, i)),
        1 => (sub(), under()).prop_map(|(f, s)| Term::sigma("x", f, s)),
        1 => (sub(), sub()).prop_map(|(a, b)| Term::pair(a, b)),
        1 => sub().prop_map(Term::fst),
        1 => sub().prop_map(Term::snd),
        1 => (sub(), sub(), sub()).prop_map(|(t, l, r)| Term::id(t, l, r)),
        1 => (sub(), sub()).prop_map(|(t, p)| Term::refl(t, p)),
        1 => sub().prop_map(Term::succ),
        1 => (sub(), sub(), sub(), sub()).prop_map(|(m, z, s, n)| Term::nat_rec(m, z, s, n)),
    ]
    .boxed()
}

proptest! {
    #[test]
    fn generated_terms_are_well_scoped(t in arb_term(2, 3)) {
        prop_assert!(well_scoped(&t, 2));
    }

    #[test]
    fn shift_composes(t in arb_term(2, 3), c in 0usize..3, a in 0usize..3, b in 0usize..3) {
        prop_assert_eq!(shift(&shift(&t, c, a), c, b), shift(&t, c, a + b));
    }

    #[test]
    fn subst_inverts_lifting(t in arb_term(2, 3), u in arb_term(2, 3)) {
        prop_assert_eq!(subst(&shift(&t, 0, 1), 0, &u), t);
    }

    #[test]
    fn subst_preserves_scoping(t in arb_term(3, 3), u in arb_term(2, 3)) {
        // t is scoped under one extra binder; substituting it away re-scopes
        // the remainder at the outer depth.
        prop_assert!(well_scoped(&subst(&t, 0, &u), 2));
    }

    #[test]
    fn shift_preserves_scoping(t in arb_term(2, 3), a in 0usize..3) {
        prop_assert!(well_scoped(&shift(&t, 0, a), 2 + a));
    }
}
