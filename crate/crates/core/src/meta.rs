//! Metavariable store used during elaboration.
//!
//! Each declaration is elaborated against its own fresh store; metas never
//! leak across declarations. A meta records the context depth at which it was
//! created: its solution may mention only the variables below that depth, a
//! constraint enforced when the solution is quoted.

use crate::diag::SourceSpan;
use crate::syntax::Name;
use crate::value::Value;

/// One metavariable: its expected type, creation depth (with the binder names
/// in scope there, kept for diagnostics), origin span, and the solution once
/// unification finds one.
pub struct MetaEntry {
    pub ty: Value,
    pub depth: usize,
    pub names: Vec<Name>,
    pub span: SourceSpan,
    pub solution: Option<Value>,
}

/// All metavariables of the declaration currently being elaborated.
#[derive(Default)]
pub struct MetaContext {
    entries: Vec<MetaEntry>,
}

impl MetaContext {
    pub fn new() -> Self {
        MetaContext { entries: Vec::new() }
    }

    /// Allocate a fresh unsolved meta and return its id.
    pub fn fresh(&mut self, ty: Value, depth: usize, names: Vec<Name>, span: SourceSpan) -> u32 {
        debug_assert_eq!(names.len(), depth);
        let id = self.entries.len() as u32;
        self.entries.push(MetaEntry { ty, depth, names, span, solution: None });
        id
    }

    pub fn entry(&self, id: u32) -> &MetaEntry {
        &self.entries[id as usize]
    }

    pub fn solution(&self, id: u32) -> Option<&Value> {
        self.entries[id as usize].solution.as_ref()
    }

    pub fn solve(&mut self, id: u32, value: Value) {
        debug_assert!(self.entries[id as usize].solution.is_none());
        self.entries[id as usize].solution = Some(value);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Ids of metas that never received a solution.
    pub fn unsolved(&self) -> Vec<u32> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.solution.is_none())
            .map(|(i, _)| i as u32)
            .collect()
    }
}
