//! Pinned behavior of the kernel: evaluation, readback, conversion, the
//! bidirectional checker, and declaration checking.

use holim_core::check::{check, check_decl, infer, Context};
use holim_core::convert::convert;
use holim_core::diag::{ErrorCode, SourceSpan};
use holim_core::eval::{eval, quote};
use holim_core::syntax::{Declaration, Term};
use holim_core::value::{Env, Frame, GlobalEnv, Head, Value};
use std::rc::Rc;

fn span() -> SourceSpan {
    SourceSpan::point(Rc::from("<test>"), 1, 1)
}

fn decl(name: &str, ty: Term, body: Option<Term>) -> Declaration {
    Declaration { name: Rc::from(name), ty, body, span: span() }
}

fn ev(genv: &GlobalEnv, t: &Term) -> Value {
    eval(genv, &Env::empty(), t).expect("eval")
}

fn nf0(genv: &GlobalEnv, t: &Term) -> Term {
    quote(genv, &ev(genv, t), 0).expect("quote")
}

/// An environment with an opaque function `f : Nat -> Nat` and an opaque
/// pair `p : Sigma (n : Nat) , Nat`.
fn env_with_axioms() -> GlobalEnv {
    let mut genv = GlobalEnv::default();
    check_decl(&mut genv, &decl("f", Term::pi("n", Term::Nat, Term::Nat, false), None))
        .expect("axiom f");
    check_decl(&mut genv, &decl("p", Term::sigma("n", Term::Nat, Term::Nat), None))
        .expect("axiom p");
    genv
}

#[test]
fn eval_two_plus_two() {
    let genv = GlobalEnv::default();
    let two = Term::nat_lit(2);
    let sum = Term::nat_rec(
        Term::lam("k", Term::Nat),
        two.clone(),
        Term::lam("k", Term::lam("r", Term::succ(Term::Var(0)))),
        two,
    );
    assert_eq!(nf0(&genv, &sum), Term::nat_lit(4));
}

#[test]
fn eval_j_on_refl_runs_base_case() {
    let genv = GlobalEnv::default();
    let motive = Term::lam("x", Term::lam("y", Term::lam("q", Term::Nat)));
    let base = Term::lam("t", Term::succ(Term::Var(0)));
    let t = Term::j(
        motive,
        base,
        Term::Zero,
        Term::Zero,
        Term::refl(Term::Nat, Term::Zero),
    );
    assert_eq!(nf0(&genv, &t), Term::nat_lit(1));
}

#[test]
fn eval_axiom_application_stays_neutral() {
    let genv = env_with_axioms();
    let t = Term::app(Term::global("f"), Term::Zero);
    let v = ev(&genv, &t);
    match &v {
        Value::Neutral(Head::Global(name), spine) => {
            assert_eq!(name.as_ref(), "f");
            assert_eq!(spine.len(), 1);
            assert!(matches!(&spine[0], Frame::App(Value::Zero)));
        }
        other => panic!("expected a neutral value, got {:?}", other),
    }
    assert_eq!(nf0(&genv, &t), t);
}

#[test]
fn quote_numerals() {
    let genv = GlobalEnv::default();
    assert_eq!(quote(&genv, &Value::Succ(Rc::new(Value::Zero)), 0).unwrap(), Term::nat_lit(1));
}

#[test]
fn quote_neutral_spine_at_depth() {
    let genv = GlobalEnv::default();
    let v = Value::Neutral(Head::Local(0), Rc::new(vec![Frame::App(Value::Zero)]));
    assert_eq!(quote(&genv, &v, 1).unwrap(), Term::app(Term::Var(0), Term::Zero));
}

#[test]
fn quote_lambda_reads_back_the_body() {
    let genv = GlobalEnv::default();
    let t = Term::lam("x", Term::Var(0));
    assert_eq!(nf0(&genv, &t), t);
}

#[test]
fn quote_rejects_escaping_variables() {
    let genv = GlobalEnv::default();
    let err = quote(&genv, &Value::local(5), 0).unwrap_err();
    assert_eq!(err.code, ErrorCode::Stuck);
}

#[test]
fn convert_eta_for_functions() {
    let genv = env_with_axioms();
    let expanded = ev(&genv, &Term::lam("x", Term::app(Term::global("f"), Term::Var(0))));
    let bare = ev(&genv, &Term::global("f"));
    assert!(convert(&genv, 0, &expanded, &bare).unwrap());
    assert!(convert(&genv, 0, &bare, &expanded).unwrap());
}

#[test]
fn convert_surjective_pairing() {
    let genv = env_with_axioms();
    let p = ev(&genv, &Term::global("p"));
    let repacked = ev(
        &genv,
        &Term::pair(Term::fst(Term::global("p")), Term::snd(Term::global("p"))),
    );
    assert!(convert(&genv, 0, &p, &repacked).unwrap());
    assert!(convert(&genv, 0, &repacked, &p).unwrap());
}

#[test]
fn convert_distinguishes_numerals() {
    let genv = GlobalEnv::default();
    let zero = ev(&genv, &Term::Zero);
    let one = ev(&genv, &Term::nat_lit(1));
    assert!(!convert(&genv, 0, &zero, &one).unwrap());
}

#[test]
fn infer_nat_formation() {
    let genv = GlobalEnv::default();
    let ty = infer(&genv, &Context::empty(), &Term::Nat).unwrap();
    assert_eq!(quote(&genv, &ty, 0).unwrap(), Term::Universe(0));
}

#[test]
fn infer_refl() {
    let genv = GlobalEnv::default();
    let ty = infer(&genv, &Context::empty(), &Term::refl(Term::Nat, Term::Zero)).unwrap();
    assert_eq!(
        quote(&genv, &ty, 0).unwrap(),
        Term::id(Term::Nat, Term::Zero, Term::Zero)
    );
}

#[test]
fn infer_fst_of_non_pair_fails() {
    let genv = GlobalEnv::default();
    let err = infer(&genv, &Context::empty(), &Term::fst(Term::Zero)).unwrap_err();
    assert_eq!(err.code, ErrorCode::Type);
}

#[test]
fn check_identity_against_pi() {
    let genv = GlobalEnv::default();
    let ty = ev(&genv, &Term::pi("n", Term::Nat, Term::Nat, false));
    check(&genv, &Context::empty(), &Term::lam("x", Term::Var(0)), &ty).unwrap();
}

#[test]
fn check_cumulativity() {
    let genv = GlobalEnv::default();
    check(&genv, &Context::empty(), &Term::Nat, &Value::Universe(1)).unwrap();
}

#[test]
fn no_type_in_type() {
    let genv = GlobalEnv::default();
    for i in 0..=3u32 {
        let err =
            check(&genv, &Context::empty(), &Term::Universe(i), &Value::Universe(i)).unwrap_err();
        assert_eq!(err.code, ErrorCode::Universe, "Type {} : Type {} must fail", i, i);
    }
}

#[test]
fn universe_ceiling_is_configurable() {
    let genv = GlobalEnv::new(5);
    check(&genv, &Context::empty(), &Term::Universe(4), &Value::Universe(5)).unwrap();
    let err =
        check(&genv, &Context::empty(), &Term::Universe(5), &Value::Universe(5)).unwrap_err();
    assert_eq!(err.code, ErrorCode::Universe);
}

#[test]
fn dependent_let_binds_a_value() {
    let genv = GlobalEnv::default();
    // (fun n => succ n) zero — the bound variable's value flows into the body.
    let t = Term::app(Term::lam("n", Term::succ(Term::Var(0))), Term::Zero);
    check(&genv, &Context::empty(), &t, &Value::Nat).unwrap();
    assert_eq!(nf0(&genv, &t), Term::nat_lit(1));
}

#[test]
fn check_decl_extends_env() {
    let mut genv = GlobalEnv::default();
    check_decl(&mut genv, &decl("two", Term::Nat, Some(Term::nat_lit(2)))).unwrap();
    let entry = genv.lookup("two").expect("two is defined");
    assert_eq!(quote(&genv, entry.value.as_ref().unwrap(), 0).unwrap(), Term::nat_lit(2));
    assert_eq!(nf0(&genv, &Term::global("two")), Term::nat_lit(2));
}

#[test]
fn check_decl_axiom_is_neutral() {
    let genv = env_with_axioms();
    assert_eq!(nf0(&genv, &Term::global("f")), Term::global("f"));
}

#[test]
fn check_decl_rejects_ill_typed_body() {
    let mut genv = GlobalEnv::default();
    let err = check_decl(&mut genv, &decl("bad", Term::Nat, Some(Term::Star))).unwrap_err();
    assert_eq!(err.code, ErrorCode::Type);
    assert!(err.message.contains("in declaration `bad`"), "got: {}", err.message);
    assert!(genv.lookup("bad").is_none(), "failed declarations must not be installed");
}

#[test]
fn check_decl_rejects_duplicates() {
    let mut genv = GlobalEnv::default();
    check_decl(&mut genv, &decl("two", Term::Nat, Some(Term::nat_lit(2)))).unwrap();
    let err = check_decl(&mut genv, &decl("two", Term::Nat, Some(Term::Zero))).unwrap_err();
    assert_eq!(err.code, ErrorCode::Duplicate);
}

#[test]
fn unresolved_global_is_reported() {
    let genv = GlobalEnv::default();
    let err = infer(&genv, &Context::empty(), &Term::global("ghost")).unwrap_err();
    assert_eq!(err.code, ErrorCode::Unresolved);
}

#[test]
fn kernel_rejects_metas() {
    let genv = GlobalEnv::default();
    let err = infer(&genv, &Context::empty(), &Term::Meta(0)).unwrap_err();
    assert_eq!(err.code, ErrorCode::Stuck);
}
