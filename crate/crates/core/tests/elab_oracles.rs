//! Pinned behavior of the elaborator and its unification engine: implicit
//! insertion, `@` explicit application, holes, metavariable solving, zonking,
//! and the error surface for unelaboratable programs.

use holim_core::check::{check_decl, Context};
use holim_core::corpus::{check_parsed, parse_files, CheckReport, SourceFile};
use holim_core::diag::{ErrorCode, SourceSpan};
use holim_core::meta::MetaContext;
use holim_core::syntax::Term;
use holim_core::unify::{unify_in, zonk};
use holim_core::value::{GlobalEnv, Head, Value};
use std::rc::Rc;

fn check_src(content: &str) -> (CheckReport, GlobalEnv) {
    let files = [SourceFile { path: "test.hott".into(), content: content.into() }];
    let parsed = parse_files(&files).expect("parse");
    check_parsed(&parsed, None, 3)
}

fn check_src_ok(content: &str) -> GlobalEnv {
    let (report, genv) = check_src(content);
    for d in report.failures() {
        panic!("`{}` failed: {}", d.name, d.diagnostic.as_ref().unwrap());
    }
    genv
}

/// The diagnostic for `name`, which must have failed.
fn failure_of(report: &CheckReport, name: &str) -> holim_core::diag::Diagnostic {
    report
        .decls
        .iter()
        .find(|d| d.name.as_ref() == name)
        .unwrap_or_else(|| panic!("no declaration `{}`", name))
        .diagnostic
        .clone()
        .unwrap_or_else(|| panic!("declaration `{}` unexpectedly succeeded", name))
}

fn body(genv: &GlobalEnv, name: &str) -> Term {
    genv.lookup(name)
        .unwrap_or_else(|| panic!("no global `{}`", name))
        .body_term
        .clone()
        .unwrap_or_else(|| panic!("`{}` is an axiom", name))
}

fn contains_meta(t: &Term) -> bool {
    use Term::*;
    match t {
        Meta(_) => true,
        Var(_) | Universe(_) | Nat | Zero | Unit | Star | Empty | Bool | True | False
        | Global(_) => false,
        Lambda(_, b) => contains_meta(b),
        Pi(_, d, c, _) => contains_meta(d) || contains_meta(c),
        Sigma(_, f, s) => contains_meta(f) || contains_meta(s),
        App(f, a) => contains_meta(f) || contains_meta(a),
        Pair(a, b) => contains_meta(a) || contains_meta(b),
        Fst(p) | Snd(p) | Succ(p) => contains_meta(p),
        Id(a, l, r) => contains_meta(a) || contains_meta(l) || contains_meta(r),
        Refl(a, p) => contains_meta(a) || contains_meta(p),
        J(m, c, l, r, p) => {
            [m, c, l, r, p].iter().any(|t| contains_meta(t))
        }
        NatRec(m, z, s, n) => [m, z, s, n].iter().any(|t| contains_meta(t)),
        BoolRec(m, t1, t2, b) => [m, t1, t2, b].iter().any(|t| contains_meta(t)),
        UnitRec(m, u, s) => [m, u, s].iter().any(|t| contains_meta(t)),
        EmptyRec(m, e) => contains_meta(m) || contains_meta(e),
    }
}

const AP_PRELUDE: &str = "
def ap
  : Pi {A : Type 0} {B : Type 0} (f : A -> B) {x : A} {y : A}
    -> Id A x y -> Id B (f x) (f y)
 := fun {A} {B} f {x} {y} p =>
      J (fun a b q => Id B (f a) (f b)) (fun a => refl B (f a)) x y p

axiom pth : Id Nat zero zero
";

#[test]
fn implicits_solved_from_argument_types() {
    let src = format!(
        "{}\ndef lifted : Id Nat (succ zero) (succ zero) := ap succ pth\n",
        AP_PRELUDE
    );
    let genv = check_src_ok(&src);
    let got = body(&genv, "lifted");
    // ap {Nat} {Nat} (fun n => succ n) {zero} {zero} pth — both type
    // implicits and both endpoint implicits are found by unification, and the
    // underapplied `succ` is eta-expanded.
    let expected = Term::app(
        Term::app(
            Term::app(
                Term::app(
                    Term::app(
                        Term::app(Term::global("ap"), Term::Nat),
                        Term::Nat,
                    ),
                    Term::lam("n", Term::succ(Term::Var(0))),
                ),
                Term::Zero,
            ),
            Term::Zero,
        ),
        Term::global("pth"),
    );
    assert_eq!(got, expected);
    assert!(!contains_meta(&got));
}

#[test]
fn explicit_application_elaborates_to_the_same_term() {
    let src = format!(
        "{}\ndef lifted : Id Nat (succ zero) (succ zero) := ap succ pth\n\
         def lifted_explicit : Id Nat (succ zero) (succ zero) := @ap Nat Nat succ zero zero pth\n",
        AP_PRELUDE
    );
    let genv = check_src_ok(&src);
    assert_eq!(body(&genv, "lifted"), body(&genv, "lifted_explicit"));
}

#[test]
fn unconstrained_implicit_is_unsolved() {
    let src = "
def idmap : Pi {A : Type 0} -> A -> A := fun {A} x => x
def oops : Unit := (fun h => star) idmap
";
    let (report, _) = check_src(src);
    let err = failure_of(&report, "oops");
    assert_eq!(err.code, ErrorCode::Unsolved);
    assert!(
        err.message.contains("Type 0"),
        "the unsolved meta's type must be displayed, got: {}",
        err.message
    );
}

#[test]
fn implicit_lambda_is_auto_inserted() {
    let genv = check_src_ok("def idmap : Pi {A : Type 0} -> A -> A := fun x => x\n");
    assert_eq!(
        body(&genv, "idmap"),
        Term::lam("A", Term::lam("x", Term::Var(0)))
    );
}

#[test]
fn explicit_head_skips_auto_insertion() {
    let genv = check_src_ok(
        "def idmap : Pi {A : Type 0} -> A -> A := fun {A} x => x
         def alias : Pi {A : Type 0} -> A -> A := @idmap
        ",
    );
    assert_eq!(body(&genv, "alias"), Term::global("idmap"));
}

#[test]
fn holes_are_solved_from_the_expected_type() {
    let genv = check_src_ok("def loop : Id Nat zero zero := refl _ _\n");
    assert_eq!(body(&genv, "loop"), Term::refl(Term::Nat, Term::Zero));
}

#[test]
fn unconstrained_hole_is_unsolved() {
    let (report, _) = check_src("def mystery : Unit := (fun h => star) _\n");
    let err = failure_of(&report, "mystery");
    assert_eq!(err.code, ErrorCode::Unsolved);
}

#[test]
fn succ_alone_eta_expands() {
    let genv = check_src_ok("def s : Nat -> Nat := succ\n");
    assert_eq!(body(&genv, "s"), Term::lam("n", Term::succ(Term::Var(0))));
}

#[test]
fn dependent_let_flows_the_bound_value() {
    let genv = check_src_ok(
        "def loop : Id Nat zero zero := let n : Nat := zero in refl Nat n\n",
    );
    // The let is sugar for a beta-redex whose bound value participates in
    // definitional equality: refl Nat n : Id Nat n n must convert to the
    // declared Id Nat zero zero.
    let b = body(&genv, "loop");
    assert!(
        matches!(&b, Term::App(f, _) if matches!(f.as_ref(), Term::Lambda(_, _))),
        "a let must elaborate to an applied lambda, got {:?}",
        b
    );
}

#[test]
fn implicit_lambda_against_explicit_pi_is_rejected() {
    let (report, _) = check_src("def bad : Nat -> Nat := fun {x} => x\n");
    assert_eq!(failure_of(&report, "bad").code, ErrorCode::Type);
}

#[test]
fn applying_a_non_function_is_rejected() {
    let (report, _) = check_src("def bad : Nat := zero zero\n");
    assert_eq!(failure_of(&report, "bad").code, ErrorCode::NotFn);
}

#[test]
fn unannotated_lambda_in_inference_position_is_rejected() {
    let (report, _) = check_src("def bad : Nat := fst (fun x => x)\n");
    let err = failure_of(&report, "bad");
    assert_eq!(err.code, ErrorCode::Type);
    assert!(err.message.contains("annotate"), "got: {}", err.message);
}

#[test]
fn unannotated_pair_in_inference_position_is_rejected() {
    let (report, _) = check_src("def bad : Nat := fst ((zero , zero))\n");
    let err = failure_of(&report, "bad");
    assert_eq!(err.code, ErrorCode::Type);
    assert!(err.message.contains("annotate"), "got: {}", err.message);
}

#[test]
fn annotated_pair_elaborates() {
    let genv = check_src_ok(
        "def p : Sigma (n : Nat) , Nat := (zero , succ zero : Sigma (n : Nat) , Nat)\n\
         def f : Nat := fst ((zero , zero : Nat * Nat))\n",
    );
    assert_eq!(
        body(&genv, "p"),
        Term::pair(Term::Zero, Term::nat_lit(1))
    );
}

#[test]
fn pi_domain_must_be_a_type() {
    let (report, _) = check_src("def bad : Pi (x : zero) -> Nat := fun x => zero\n");
    let err = failure_of(&report, "bad");
    assert_eq!(err.code, ErrorCode::Type);
    assert!(err.message.contains("expected a type"), "got: {}", err.message);
}

#[test]
fn unresolved_name_is_reported() {
    let (report, _) = check_src("def bad : Nat := ghost\n");
    assert_eq!(failure_of(&report, "bad").code, ErrorCode::Unresolved);
}

#[test]
fn declaration_errors_carry_context_and_span() {
    let (report, _) = check_src("def bad : Nat := star\n");
    let err = failure_of(&report, "bad");
    assert!(err.message.contains("in declaration `bad`"), "got: {}", err.message);
    assert!(err.span.is_some(), "declaration errors must carry a source span");
}

#[test]
fn elaboration_is_deterministic() {
    let src = format!(
        "{}\ndef lifted : Id Nat (succ zero) (succ zero) := ap succ pth\n",
        AP_PRELUDE
    );
    let a = body(&check_src_ok(&src), "lifted");
    let b = body(&check_src_ok(&src), "lifted");
    assert_eq!(a, b);
}

#[test]
fn elaborated_declarations_recheck_in_a_fresh_kernel() {
    let src = format!(
        "{}\ndef lifted : Id Nat (succ zero) (succ zero) := ap succ pth\n\
         def idmap : Pi {{A : Type 0}} -> A -> A := fun x => x\n",
        AP_PRELUDE
    );
    let genv = check_src_ok(&src);
    let mut fresh = GlobalEnv::default();
    for entry in genv.entries() {
        let decl = holim_core::syntax::Declaration {
            name: entry.name.clone(),
            ty: entry.ty_term.clone(),
            body: entry.body_term.clone(),
            span: SourceSpan::point(Rc::from("<recheck>"), 1, 1),
        };
        check_decl(&mut fresh, &decl)
            .unwrap_or_else(|e| panic!("`{}` failed kernel recheck: {}", entry.name, e));
    }
}

// ---------------------------------------------------------------------------
// Unification and zonking, exercised directly.
// ---------------------------------------------------------------------------

fn test_span() -> SourceSpan {
    SourceSpan::point(Rc::from("<unify>"), 1, 1)
}

fn fresh_meta(metas: &mut MetaContext, ty: Value) -> (u32, Value) {
    let id = metas.fresh(ty, 0, Vec::new(), test_span());
    (id, Value::neutral(Head::Meta(id)))
}

#[test]
fn unify_solves_a_bare_meta() {
    let genv = GlobalEnv::default();
    let mut metas = MetaContext::new();
    let (id, m) = fresh_meta(&mut metas, Value::Universe(0));
    unify_in(&genv, &mut metas, &Context::empty(), &m, &Value::Nat).unwrap();
    assert!(matches!(metas.solution(id), Some(Value::Nat)));
}

#[test]
fn unify_decomposes_structure() {
    let genv = GlobalEnv::default();
    let mut metas = MetaContext::new();
    let (id, m) = fresh_meta(&mut metas, Value::Nat);
    let lhs = Value::Succ(Rc::new(m));
    let rhs = Value::Succ(Rc::new(Value::Zero));
    unify_in(&genv, &mut metas, &Context::empty(), &lhs, &rhs).unwrap();
    assert!(matches!(metas.solution(id), Some(Value::Zero)));
}

#[test]
fn unify_rejects_occurs() {
    let genv = GlobalEnv::default();
    let mut metas = MetaContext::new();
    let (_, m) = fresh_meta(&mut metas, Value::Nat);
    let rhs = Value::Succ(Rc::new(m.clone()));
    let err = unify_in(&genv, &mut metas, &Context::empty(), &m, &rhs).unwrap_err();
    assert_eq!(err.code, ErrorCode::Occurs);
}

#[test]
fn unify_rejects_out_of_scope_solutions() {
    let genv = GlobalEnv::default();
    let mut metas = MetaContext::new();
    let (_, m) = fresh_meta(&mut metas, Value::Nat); // created at depth 0
    let err =
        unify_in(&genv, &mut metas, &Context::empty(), &m, &Value::local(0)).unwrap_err();
    assert_eq!(err.code, ErrorCode::Unify);
}

#[test]
fn unify_mismatch_names_both_sides() {
    let genv = GlobalEnv::default();
    let mut metas = MetaContext::new();
    let err = unify_in(
        &genv,
        &mut metas,
        &Context::empty(),
        &Value::Zero,
        &Value::Succ(Rc::new(Value::Zero)),
    )
    .unwrap_err();
    assert_eq!(err.code, ErrorCode::Unify);
    assert!(
        err.message.contains("cannot unify") && err.message.contains("zero"),
        "got: {}",
        err.message
    );
}

#[test]
fn zonk_splices_solutions() {
    let genv = GlobalEnv::default();
    let mut metas = MetaContext::new();
    let (id, m) = fresh_meta(&mut metas, Value::Nat);
    unify_in(&genv, &mut metas, &Context::empty(), &m, &Value::Zero).unwrap();
    let t = Term::app(Term::global("f"), Term::Meta(id));
    assert_eq!(
        zonk(&genv, &metas, &t, 0).unwrap(),
        Term::app(Term::global("f"), Term::Zero)
    );
}

#[test]
fn zonk_reports_unsolved_metas_with_their_type() {
    let genv = GlobalEnv::default();
    let mut metas = MetaContext::new();
    let (id, _) = fresh_meta(&mut metas, Value::Nat);
    let err = zonk(&genv, &metas, &Term::Meta(id), 0).unwrap_err();
    assert_eq!(err.code, ErrorCode::Unsolved);
    assert!(
        err.message.contains(&format!("?{}", id)) && err.message.contains("Nat"),
        "got: {}",
        err.message
    );
    assert_eq!(err.span, Some(test_span()));
}

#[test]
fn zonk_is_identity_on_meta_free_terms() {
    let genv = GlobalEnv::default();
    let metas = MetaContext::new();
    assert_eq!(zonk(&genv, &metas, &Term::Zero, 0).unwrap(), Term::Zero);
}

// A motive whose body calls a global with implicit arguments: the implicit
// metas are solved to the motive's own binders, and the solutions must
// survive the motive being instantiated at the base case and at the scrutinee.
#[test]
fn eliminator_motive_with_implicit_calls_instantiates_correctly() {
    check_src_ok(
        "
def cat : Pi {A : Type 0} {a b c : A} -> Id A a b -> Id A b c -> Id A a c :=
  fun {A a b c} p q =>
    J (fun (x : A) (y : A) (r : Id A x y) => Pi (s : Id A a x) -> Id A a y)
      (fun (x : A) => fun (s : Id A a x) => s)
      b c q p

def cat_left_unit : Pi {A : Type 0} {a b : A} (p : Id A a b) ->
    Id (Id A a b) (cat (refl A a) p) p :=
  fun {A a b} p =>
    J (fun (x : A) (y : A) (r : Id A x y) => Id (Id A x y) (cat (refl A x) r) r)
      (fun (x : A) => refl (Id A x x) (refl A x))
      a b p
",
    );
}

// Arguments applied past a result type headed by a still-unsolved placeholder
// (a dependent family given as an explicit argument): the pending arguments
// must be elaborated so the family's solution can expose the next Pi.
#[test]
fn trailing_args_past_family_headed_result_type() {
    let genv = check_src_ok(
        "
def apply_fam : Pi {A : Type 0} (P : A -> Type 0) (f : Pi (x : A) -> P x) (a : A) -> P a :=
  fun {A} P f a => f a

def use_it : Nat :=
  apply_fam (fun (x : Nat) => Nat -> Nat) (fun (x : Nat) (y : Nat) => x) zero (succ zero)
",
    );
    assert!(!contains_meta(&body(&genv, "use_it")));
}
