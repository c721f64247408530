use serde::Serialize;

/// Outcome of one exhaustively checked axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub holds: bool,
    /// Element indices (or other coordinates) of the first failing instance.
    pub witness: Option<Vec<usize>>,
}

impl AxiomCheck {
    pub fn new(name: impl Into<String>, witness: Option<Vec<usize>>) -> Self {
        AxiomCheck {
            name: name.into(),
            holds: witness.is_none(),
            witness,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, None)
    }
}

/// Looks up a check by name.
pub fn find<'a>(checks: &'a [AxiomCheck], name: &str) -> Option<&'a AxiomCheck> {
    checks.iter().find(|c| c.name == name)
}

pub fn all_hold<'a>(checks: impl IntoIterator<Item = &'a AxiomCheck>) -> bool {
    checks.into_iter().all(|c| c.holds)
}
