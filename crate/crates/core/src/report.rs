use alloc::vec::Vec;

/// Outcome of an identity sweep. Violations are listed exhaustively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report<V> {
    /// Number of individual equalities evaluated.
    pub checked: u64,
    pub violations: Vec<V>,
    /// Caveats attached to the run (extensions beyond the proven range, etc).
    pub notes: Vec<&'static str>,
}

impl<V> Report<V> {
    pub fn new() -> Self {
        Report {
            checked: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records one comparison, keeping `violation` when `ok` is false.
    pub fn check(&mut self, ok: bool, violation: impl FnOnce() -> V) {
        self.checked += 1;
        if !ok {
            self.violations.push(violation());
        }
    }

    pub fn note(&mut self, note: &'static str) {
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
    }

    pub fn absorb(&mut self, other: Report<V>) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        for n in other.notes {
            self.note(n);
        }
    }
}

impl<V> Default for Report<V> {
    fn default() -> Self {
        Self::new()
    }
}

/// A single index where two evaluations disagreed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub index: u64,
    pub expected: u64,
    pub got: u64,
}
