//! Pinned behavior of the lexer, parser, and printer, including the
//! round-trip law print∘parse∘print = print.

use holim_core::diag::ErrorCode;
use holim_core::lexer::{tokenize, TokenKind};
use holim_core::parser::{parse, parse_term};
use holim_core::surface::{print, print_file, Surface, SurfaceKind};

fn toks(src: &str) -> Vec<holim_core::lexer::Token> {
    tokenize("<test>", src).expect("tokenize")
}

fn term(src: &str) -> Surface {
    parse_term("<test>", &toks(src)).expect("parse_term")
}

#[test]
fn tokenize_lambda_form() {
    let ts = toks("fun x => x");
    let shape: Vec<(TokenKind, &str)> =
        ts.iter().map(|t| (t.kind, t.lexeme.as_str())).collect();
    assert_eq!(
        shape,
        vec![
            (TokenKind::Keyword, "fun"),
            (TokenKind::Ident, "x"),
            (TokenKind::Symbol, "=>"),
            (TokenKind::Ident, "x"),
        ]
    );
}

#[test]
fn tokenize_universe() {
    let ts = toks("Type 1");
    let shape: Vec<(TokenKind, &str)> =
        ts.iter().map(|t| (t.kind, t.lexeme.as_str())).collect();
    assert_eq!(shape, vec![(TokenKind::Keyword, "Type"), (TokenKind::NatLit, "1")]);
}

#[test]
fn tokenize_rejects_non_ascii() {
    let err = tokenize("<test>", "λ").unwrap_err();
    assert_eq!(err.code, ErrorCode::Lex);
    let span = err.span.expect("lex errors carry a span");
    assert_eq!((span.start_line, span.start_col), (1, 1));
}

#[test]
fn tokenize_skips_comments() {
    let ts = toks("zero -- the rest is commentary, even -> symbols\nzero");
    assert_eq!(ts.len(), 2);
    assert!(ts.iter().all(|t| t.is_kw("zero")));
    assert_eq!(ts[1].span.start_line, 2);
}

#[test]
fn parse_identity_declaration() {
    let ds = parse("<test>", &toks("def id : Pi (A : Type 0) -> A -> A := fun A x => x"))
        .expect("parse");
    assert_eq!(ds.len(), 1);
    assert_eq!(ds[0].name.as_ref(), "id");
    assert!(!ds[0].is_axiom);
    assert!(ds[0].body.is_some());
}

#[test]
fn application_is_left_associative() {
    let t = term("f x y");
    let SurfaceKind::App(fx, y) = &t.kind else { panic!("expected application") };
    let SurfaceKind::Ref { name, .. } = &y.kind else { panic!("expected reference") };
    assert_eq!(name.as_ref(), "y");
    let SurfaceKind::App(f, x) = &fx.kind else { panic!("expected inner application") };
    assert!(matches!(&f.kind, SurfaceKind::Ref { name, .. } if name.as_ref() == "f"));
    assert!(matches!(&x.kind, SurfaceKind::Ref { name, .. } if name.as_ref() == "x"));
}

#[test]
fn parse_error_points_at_unexpected_token() {
    let err = parse("<test>", &toks("def bad : := zero")).unwrap_err();
    assert_eq!(err.code, ErrorCode::Parse);
    let span = err.span.expect("parse errors carry a span");
    assert_eq!((span.start_line, span.start_col), (1, 11));
}

#[test]
fn print_lambda() {
    assert_eq!(print(&term("fun x => x")), "fun x => x");
}

#[test]
fn print_nested_application_without_parens() {
    assert_eq!(print(&term("f x y")), "f x y");
}

#[test]
fn print_implicit_pi() {
    assert_eq!(
        print(&term("Pi {A : Type 0} -> A -> A")),
        "Pi {A : Type 0} -> A -> A"
    );
}

#[test]
fn print_keeps_needed_parens() {
    assert_eq!(print(&term("f (g x)")), "f (g x)");
    assert_eq!(print(&term("(A -> B) -> C")), "(A -> B) -> C");
    assert_eq!(print(&term("(f x) y")), "f x y");
}

#[test]
fn arrows_are_right_associative() {
    assert_eq!(print(&term("A -> B -> C")), "A -> B -> C");
    assert_eq!(print(&term("A * B * C")), "A * B * C");
    assert_eq!(print(&term("A -> (B -> C)")), "A -> B -> C");
}

/// print∘parse∘print = print, and reparsing the printed text reproduces the
/// surface tree (spans aside — surface equality already ignores them).
fn round_trip_file(src: &str) {
    let first = parse("<t>", &toks(src)).expect("parse original");
    let printed = print_file(&first);
    let second = parse("<t>", &tokenize("<t>", &printed).expect("tokenize printed"))
        .expect("parse printed");
    assert_eq!(first.len(), second.len());
    for (a, b) in first.iter().zip(second.iter()) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.is_axiom, b.is_axiom);
        assert_eq!(a.ty, b.ty, "type of `{}` changed under round-trip", a.name);
        assert_eq!(a.body, b.body, "body of `{}` changed under round-trip", a.name);
    }
    let reprinted = print_file(&second);
    assert_eq!(printed, reprinted, "printing is not idempotent");
}

#[test]
fn round_trip_sample_declarations() {
    round_trip_file(
        "def id : Pi (A : Type 0) -> A -> A := fun A x => x\n\n\
         axiom choice : Pi (A : Type 0) -> A\n\n\
         def two : Nat := succ (succ zero)\n\n\
         def pairing : Pi (A : Type 0) (B : Type 0) -> A -> B -> A * B :=\n\
           fun A B a b => (a , b)\n\n\
         def annotated : Sigma (n : Nat) , Id Nat n n :=\n\
           (zero , refl Nat zero : Sigma (n : Nat) , Id Nat n n)\n\n\
         def implicits : Pi {A : Type 0} {B : Type 0} (f : A -> B) (a : A) -> B :=\n\
           fun {A} {B} f a => f a\n\n\
         def letform : Nat := let n : Nat := succ zero in succ n\n\n\
         def elim : Pi (n : Nat) -> Nat :=\n\
           fun n => natrec (fun k => Nat) zero (fun k r => succ r) n\n\n\
         def path_algebra : Pi (A : Type 0) (x : A) -> Id A x x :=\n\
           fun A x => J (fun a b p => Id A a a) (fun a => refl A a) x x (refl A x)\n",
    );
}

#[test]
fn round_trip_explicit_application() {
    round_trip_file(
        "def app_exp : Pi (A : Type 0) -> A -> A := fun A x => @app_exp A x\n",
    );
}

#[test]
fn round_trip_sugar_boundaries() {
    round_trip_file(
        "def shapes : Type 1 := (Nat -> Nat) -> (Nat * Bool) * Unit -> Type 0\n\n\
         def proj : Pi (p : Nat * Bool) -> Nat := fun p => fst p\n\n\
         def under : Pi (f : Nat -> Nat * Bool) (n : Nat) -> Bool :=\n\
           fun f n => snd (f n)\n",
    );
}
