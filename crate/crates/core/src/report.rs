use std::fmt;

/// A list of violated axioms, each with a human-readable witness. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub subject: String,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Short axiom tag, e.g. `associativity` or `maurer-cartan`.
    pub axiom: &'static str,
    /// Which basis tuple or generator pair failed.
    pub location: String,
    /// Residual or other witness, printed in element syntax.
    pub witness: String,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            violations: Vec::new(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, axiom: &'static str, location: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation {
            axiom,
            location: location.into(),
            witness: witness.into(),
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "{}: valid", self.subject);
        }
        write!(f, "{}: {} violation(s)", self.subject, self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {} at {}: {}", v.axiom, v.location, v.witness)?;
        }
        Ok(())
    }
}
