//! Structured logs for symbolic identity verification.

use serde::{Deserialize, Serialize};

/// One verified identity: name, outcome, and the rendered residual when the
/// identity does not hold exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// Rendered residual; present exactly when the check failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    /// Extra rendered context (coefficients, orders, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerificationLog {
    pub checks: Vec<IdentityCheck>,
}

impl VerificationLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, name: &str) {
        self.checks.push(IdentityCheck {
            name: name.to_string(),
            passed: true,
            residual: None,
            detail: None,
        });
    }

    pub fn pass_with_detail(&mut self, name: &str, detail: String) {
        self.checks.push(IdentityCheck {
            name: name.to_string(),
            passed: true,
            residual: None,
            detail: Some(detail),
        });
    }

    pub fn fail(&mut self, name: &str, residual: String) {
        self.checks.push(IdentityCheck {
            name: name.to_string(),
            passed: false,
            residual: Some(residual),
            detail: None,
        });
    }

    pub fn fail_with_detail(&mut self, name: &str, residual: String, detail: String) {
        self.checks.push(IdentityCheck {
            name: name.to_string(),
            passed: false,
            residual: Some(residual),
            detail: Some(detail),
        });
    }

    /// Record an equality check and report whether it held.
    pub fn check(&mut self, name: &str, holds: bool, residual: impl FnOnce() -> String) -> bool {
        if holds {
            self.pass(name);
        } else {
            self.fail(name, residual());
        }
        holds
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, other: VerificationLog) {
        self.checks.extend(other.checks);
    }

    pub fn find(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}
