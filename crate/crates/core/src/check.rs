use serde::Serialize;

/// Outcome of one named verification; failures are data, not errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// Component ids responsible for a failure, if any.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub offending: Vec<usize>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass: true,
            detail: detail.into(),
            offending: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, offending: Vec<usize>) -> Self {
        Self {
            name: name.into(),
            pass: false,
            detail: detail.into(),
            offending,
        }
    }

    pub fn from_bool(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        if pass {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail, Vec::new())
        }
    }
}

pub fn all_pass(checks: &[CheckResult]) -> bool {
    checks.iter().all(|c| c.pass)
}
