use std::collections::BTreeMap;

use crate::classfile::{package_of, parse_class, scan_references};
use crate::corpus::{ArtifactArchive, Gav};
use crate::graph::BipartiteUsageGraph;

use super::{ApiSurface, EntryError, UsageError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InternalUsage {
    pub used_from_other_packages: bool,
    pub externally_used: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalUsageReport {
    pub library: Gav,
    /// One entry per surface type.
    pub types: BTreeMap<String, InternalUsage>,
    pub errors: Vec<EntryError>,
}

impl InternalUsageReport {
    /// Share of surface types referenced from another package of the
    /// library; 0 for an empty surface.
    pub fn internal_share(&self) -> f64 {
        if self.types.is_empty() {
            return 0.0;
        }
        self.types
            .values()
            .filter(|u| u.used_from_other_packages)
            .count() as f64
            / self.types.len() as f64
    }

    /// Counts indexed by `[used_from_other_packages][externally_used]`.
    pub fn cross_tab(&self) -> [[usize; 2]; 2] {
        let mut t = [[0; 2]; 2];
        for u in self.types.values() {
            t[u.used_from_other_packages as usize][u.externally_used as usize] += 1;
        }
        t
    }
}

/// Marks each surface type referenced by a class of the same archive that
/// lives in a different package, and whether any client uses it.
pub fn internal_usage(
    archive: &ArtifactArchive,
    surface: &ApiSurface,
    external: &BipartiteUsageGraph,
) -> Result<InternalUsageReport, UsageError> {
    let mut types: BTreeMap<String, InternalUsage> = surface
        .types
        .keys()
        .map(|t| {
            let u = InternalUsage {
                used_from_other_packages: false,
                externally_used: external.type_nodes().contains(t),
            };
            (t.clone(), u)
        })
        .collect();
    let mut errors = Vec::new();
    archive.for_each_class(|entry, bytes| {
        let parsed = bytes
            .map_err(|e| e.to_string())
            .and_then(|b| parse_class(&b).map_err(|e| e.to_string()));
        let cf = match parsed {
            Ok(cf) => cf,
            Err(message) => {
                errors.push(EntryError {
                    entry: entry.to_owned(),
                    message,
                });
                return;
            }
        };
        let pkg = cf.package();
        for r in scan_references(&cf) {
            if package_of(&r.target_type) == pkg {
                continue;
            }
            if let Some(u) = types.get_mut(&r.target_type) {
                u.used_from_other_packages = true;
            }
        }
    })?;
    Ok(InternalUsageReport {
        library: surface.library.clone(),
        types,
        errors,
    })
}
