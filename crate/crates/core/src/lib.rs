//! A self-contained proof checker for a small dependent type theory
//! (Pi, Sigma, identity types, Nat, Unit, Empty, Bool, a finite universe
//! hierarchy, function extensionality as the sole axiom, definitional eta for
//! functions and pairs), together with the driver for a machine-checked
//! library of homotopy pullbacks, equalizers, graph limits, pointed types,
//! and fiber sequences written in the surface language.
//!
//! Pipeline: `.hott` text --[lexer]--> tokens --[parser]--> surface syntax
//! --[elab]--> core terms --[check]--> entries in a global environment.
//! The kernel re-checks every elaborated declaration from scratch; nothing
//! produced by the elaborator is trusted.

pub mod check;
pub mod convert;
pub mod corpus;
pub mod diag;
pub mod elab;
pub mod eval;
pub mod lexer;
pub mod meta;
pub mod parser;
pub mod pretty;
pub mod surface;
pub mod syntax;
pub mod unify;
pub mod value;
