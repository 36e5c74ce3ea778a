//! Small shared carrier for verification outcomes.

/// Outcome of one named verification pass: how many instances were checked,
/// how many were skipped (inputs outside a window), and witnesses for every
/// failure. Witness lists are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Check {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            ..Check::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }
}

/// True when every check in the slice passed.
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}
