//! Semantic domain for normalization by evaluation: values, closures,
//! neutral spines, evaluation environments, and the global environment.
//!
//! Values are weak-head forms: everything under a binder is delayed in a
//! [`Closure`] (a term plus its captured environment). A computation blocked
//! on a variable, axiom, or metavariable is a [`Value::Neutral`]: a head plus
//! a spine of pending eliminations.

use crate::syntax::{Name, Term};
use std::collections::HashMap;
use std::rc::Rc;

/// Persistent evaluation environment: value of each bound variable,
/// innermost last. Push is O(1) and shares the tail.
#[derive(Debug, Clone, Default)]
pub struct Env(Option<Rc<EnvNode>>);

#[derive(Debug)]
struct EnvNode {
    head: Value,
    tail: Env,
}

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    /// Extend with the value of a new innermost binder.
    pub fn push(&self, v: Value) -> Env {
        Env(Some(Rc::new(EnvNode { head: v, tail: self.clone() })))
    }

    /// Look up de Bruijn index `ix` (0 = innermost).
    pub fn get(&self, ix: usize) -> Option<&Value> {
        let mut node = self.0.as_deref()?;
        for _ in 0..ix {
            node = node.tail.0.as_deref()?;
        }
        Some(&node.head)
    }
}

/// A delayed body: evaluate `body` in `env` extended with the instantiating
/// value.
#[derive(Debug, Clone)]
pub struct Closure {
    pub name: Name,
    pub env: Env,
    pub body: Rc<Term>,
}

/// What a neutral value is blocked on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Head {
    /// A free variable, as a de Bruijn *level* (0 = outermost).
    Local(usize),
    /// An axiom (or, mid-check, the declaration being defined).
    Global(Name),
    /// An unsolved metavariable (elaboration only).
    Meta(u32),
}

/// One pending elimination on a neutral head.
#[derive(Debug, Clone)]
pub enum Frame {
    App(Value),
    Fst,
    Snd,
    J { motive: Value, base: Value, lhs: Value, rhs: Value },
    NatRec { motive: Value, zero: Value, succ: Value },
    BoolRec { motive: Value, tcase: Value, fcase: Value },
    UnitRec { motive: Value, case: Value },
    EmptyRec { motive: Value },
}

/// Weak-head values. Children are `Rc`-shared, so `clone` is cheap.
#[derive(Debug, Clone)]
pub enum Value {
    Universe(u32),
    Pi(Rc<Value>, Closure, bool),
    Lambda(Closure),
    Sigma(Rc<Value>, Closure),
    Pair(Rc<Value>, Rc<Value>),
    Id(Rc<Value>, Rc<Value>, Rc<Value>),
    Refl(Rc<Value>, Rc<Value>),
    Nat,
    Zero,
    Succ(Rc<Value>),
    Unit,
    Star,
    Empty,
    Bool,
    True,
    False,
    Neutral(Head, Rc<Vec<Frame>>),
}

impl Value {
    /// A fresh variable at de Bruijn level `level`.
    pub fn local(level: usize) -> Value {
        Value::Neutral(Head::Local(level), Rc::new(Vec::new()))
    }

    /// A bare neutral for `head`.
    pub fn neutral(head: Head) -> Value {
        Value::Neutral(head, Rc::new(Vec::new()))
    }

    /// Extend a neutral's spine with one more frame.
    pub fn extend(head: &Head, spine: &[Frame], frame: Frame) -> Value {
        let mut s = spine.to_vec();
        s.push(frame);
        Value::Neutral(head.clone(), Rc::new(s))
    }
}

/// One checked declaration in the global environment.
#[derive(Debug, Clone)]
pub struct GlobalEntry {
    pub name: Name,
    /// The checked stated type, as a value.
    pub ty: Value,
    /// The body's value; `None` for axioms, which stay neutral.
    pub value: Option<Value>,
    /// The elaborated stated type, as a core term.
    pub ty_term: Term,
    /// The elaborated body, as a core term; `None` for axioms.
    pub body_term: Option<Term>,
}

/// Append-only, dependency-ordered map of checked declarations, plus the
/// universe ceiling the checker enforces.
#[derive(Debug, Clone)]
pub struct GlobalEnv {
    entries: Vec<GlobalEntry>,
    index: HashMap<Name, usize>,
    /// Largest universe level that may appear as a classifier; `Type l` is a
    /// well-formed term iff `l + 1 <= max_universe`.
    pub max_universe: u32,
}

impl GlobalEnv {
    pub fn new(max_universe: u32) -> GlobalEnv {
        GlobalEnv { entries: Vec::new(), index: HashMap::new(), max_universe }
    }

    pub fn lookup(&self, name: &str) -> Option<&GlobalEntry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Append a checked entry; the caller has already rejected duplicates.
    pub fn insert(&mut self, entry: GlobalEntry) {
        debug_assert!(!self.contains(&entry.name));
        self.index.insert(entry.name.clone(), self.entries.len());
        self.entries.push(entry);
    }

    /// All entries in dependency (declaration) order.
    pub fn entries(&self) -> &[GlobalEntry] {
        &self.entries
    }
}

impl Default for GlobalEnv {
    fn default() -> Self {
        GlobalEnv::new(3)
    }
}
