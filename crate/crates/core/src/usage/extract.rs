use std::collections::{BTreeMap, BTreeSet};

use crate::classfile::{parse_class, scan_references, MemberRef, SymbolRef};
use crate::corpus::{ArtifactArchive, Gav};

use super::{ApiSurface, EntryError, UsageError, UsageRecord};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClientUsages {
    /// Sorted by library, type, member.
    pub records: Vec<UsageRecord>,
    pub errors: Vec<EntryError>,
}

type Key = (Gav, String, Option<MemberRef>);

/// Attributes one class's references to surfaces. Refs into `own_types`
/// (types the client itself defines) and into surfaces of the client's own
/// GA are ignored.
fn attribute(
    refs: &[SymbolRef],
    surfaces: &[&ApiSurface],
    own_types: &BTreeSet<String>,
    tally: &mut BTreeMap<Key, u64>,
) {
    for r in refs {
        if own_types.contains(&r.target_type) {
            continue;
        }
        let Some((surface, api_type)) = surfaces
            .iter()
            .find_map(|s| s.get(&r.target_type).map(|t| (s, t)))
        else {
            continue;
        };
        // a member not declared on the referenced type is kept at type level
        let member = r
            .member
            .as_ref()
            .filter(|m| api_type.has_member(m))
            .cloned();
        *tally
            .entry((surface.library.clone(), r.target_type.clone(), member))
            .or_default() += u64::from(r.count);
    }
}

/// Sums counted references of every client class into `surfaces`. When a
/// type is present in several surfaces, the first one listed wins.
pub fn extract_usages(
    client: &ArtifactArchive,
    surfaces: &[ApiSurface],
) -> Result<ClientUsages, UsageError> {
    let gav = client
        .coordinates
        .clone()
        .ok_or_else(|| UsageError::MissingCoordinates(client.display_path()))?;
    let client_ga = gav.ga();
    let surfaces: Vec<&ApiSurface> = surfaces
        .iter()
        .filter(|s| !s.library.same_ga(&client_ga))
        .collect();
    let own_types: BTreeSet<String> = client
        .class_entries()
        .filter_map(|e| e.path.strip_suffix(".class"))
        .map(str::to_owned)
        .collect();

    let mut tally = BTreeMap::new();
    let mut errors = Vec::new();
    client.for_each_class(|entry, bytes| {
        let parsed = bytes
            .map_err(|e| e.to_string())
            .and_then(|b| parse_class(&b).map_err(|e| e.to_string()));
        match parsed {
            Ok(cf) => attribute(&scan_references(&cf), &surfaces, &own_types, &mut tally),
            Err(message) => errors.push(EntryError {
                entry: entry.to_owned(),
                message,
            }),
        }
    })?;

    let records = tally
        .into_iter()
        .map(|((library, type_name, member), count)| UsageRecord {
            client: gav.clone(),
            library,
            type_name,
            member,
            count,
        })
        .collect();
    Ok(ClientUsages { records, errors })
}
