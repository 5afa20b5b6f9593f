use std::collections::BTreeSet;

use serde::Serialize;

use crate::corpus::{DeclaredDependency, Ga, Scope};
use crate::usage::UsageRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UnusedOptions {
    pub include_test_scope: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DependencyStatus {
    Used,
    Unused,
}

impl DependencyStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DependencyStatus::Used => "used",
            DependencyStatus::Unused => "unused",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnusedFinding {
    pub dependency: DeclaredDependency,
    pub status: DependencyStatus,
}

/// Classifies one client's declarations against that client's usage
/// records. A declaration is used iff some record targets its GA, whatever
/// the version. Test-scope declarations are skipped unless requested, as
/// are declarations whose group or artifact is a placeholder.
pub fn detect_unused(
    declared: &[DeclaredDependency],
    records: &[UsageRecord],
    opts: UnusedOptions,
) -> Vec<UnusedFinding> {
    let used: BTreeSet<Ga> = records.iter().map(|r| r.library.ga()).collect();
    declared
        .iter()
        .filter(|d| opts.include_test_scope || d.scope != Scope::Test)
        .filter(|d| !d.ga.group.contains("${") && !d.ga.artifact.contains("${"))
        .map(|d| UnusedFinding {
            dependency: d.clone(),
            status: if used.contains(&d.ga) {
                DependencyStatus::Used
            } else {
                DependencyStatus::Unused
            },
        })
        .collect()
}
