//! Named pass/fail records shared by every stage report.

use serde::{Deserialize, Serialize};

/// How hypotheses of the underlying lemmas are treated.
///
/// `Strict` refuses to run when a hypothesis fails. `Verified` records the
/// hypothesis and relies on direct verification of the conclusions instead.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Strict,
    #[default]
    Verified,
}

impl std::str::FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Policy::Strict),
            "verified" => Ok(Policy::Verified),
            other => Err(format!("unknown policy {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            holds,
            detail: detail.into(),
        }
    }
}

pub fn all_hold(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.holds)
}

pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| !c.holds)
}
