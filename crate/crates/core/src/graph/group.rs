use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{compare_versions, DeclaredDependency, Ga, Gav, Scope};
use crate::usage::UsageRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GroupOptions {
    pub include_test_scope: bool,
}

/// All versions of one library, with declaring and observed clients
/// counted by client GA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LibGroup {
    pub ga: Ga,
    pub versions: BTreeSet<Gav>,
    /// users
    pub declared_clients: BTreeSet<Ga>,
    /// users_obs, always a subset of `declared_clients`
    pub observed_clients: BTreeSet<Ga>,
}

/// Groups declarations and usage records by library GA.
///
/// `declarations` pairs each declaring client with one of its manifest
/// entries. Declarations whose group or artifact contain placeholders are
/// skipped; unresolved versions still count at GA level but contribute no
/// version. A client observed using a library it does not declare is not
/// counted as observed. Output is sorted by GA.
pub fn group_by_lib(
    records: &[UsageRecord],
    declarations: &[(Gav, DeclaredDependency)],
    opts: GroupOptions,
) -> Vec<LibGroup> {
    let mut groups: BTreeMap<Ga, LibGroup> = BTreeMap::new();
    for (client, dep) in declarations {
        if dep.scope == Scope::Test && !opts.include_test_scope {
            continue;
        }
        if dep.ga.group.contains("${") || dep.ga.artifact.contains("${") {
            continue;
        }
        let g = groups
            .entry(dep.ga.clone())
            .or_insert_with(|| new_group(&dep.ga));
        g.declared_clients.insert(client.ga());
        if let Some(v) = dep.resolved_gav() {
            g.versions.insert(v);
        }
    }
    for r in records {
        let ga = r.library.ga();
        let g = groups.entry(ga.clone()).or_insert_with(|| new_group(&ga));
        g.versions.insert(r.library.clone());
        let client = r.client.ga();
        if g.declared_clients.contains(&client) {
            g.observed_clients.insert(client);
        }
    }
    groups.into_values().collect()
}

fn new_group(ga: &Ga) -> LibGroup {
    LibGroup {
        ga: ga.clone(),
        versions: BTreeSet::new(),
        declared_clients: BTreeSet::new(),
        observed_clients: BTreeSet::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopularVersion {
    pub gav: Gav,
    pub observed_clients: usize,
    /// Another version had the same client count; the highest version won.
    pub tied: bool,
}

/// The version of `group` used by the most distinct observed client GAs.
/// Ties go to the highest version under natural version ordering.
pub fn most_popular_version(group: &LibGroup, records: &[UsageRecord]) -> Option<PopularVersion> {
    let mut users: BTreeMap<&Gav, BTreeSet<Ga>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.library.same_ga(&group.ga)) {
        let client = r.client.ga();
        if group.observed_clients.contains(&client) {
            users.entry(&r.library).or_default().insert(client);
        }
    }
    let best = users
        .iter()
        .map(|(gav, c)| (*gav, c.len()))
        .max_by(|a, b| {
            a.1.cmp(&b.1)
                .then_with(|| compare_versions(&a.0.version, &b.0.version))
        })?;
    let tied = users.values().filter(|c| c.len() == best.1).count() > 1;
    Some(PopularVersion {
        gav: best.0.clone(),
        observed_clients: best.1,
        tied,
    })
}
