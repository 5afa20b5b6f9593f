use std::collections::BTreeMap;

use crate::classfile::{parse_class, ClassFile, MemberDecl, MemberRef, TypeKind, Visibility};
use crate::corpus::{ArtifactArchive, Gav};

use super::{EntryError, UsageError};

/// A type visible to clients together with its public and protected members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiType {
    pub name: String,
    pub kind: TypeKind,
    pub package: String,
    pub visibility: Visibility,
    pub members: BTreeMap<MemberRef, MemberDecl>,
}

impl ApiType {
    pub fn has_member(&self, m: &MemberRef) -> bool {
        // kind is derived from name and descriptor, so the key is enough
        self.members.contains_key(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KindCounts {
    pub classes: usize,
    pub interfaces: usize,
    pub annotations: usize,
}

impl KindCounts {
    pub fn total(&self) -> usize {
        self.classes + self.interfaces + self.annotations
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiSurface {
    pub library: Gav,
    pub types: BTreeMap<String, ApiType>,
    /// Entries skipped because they could not be read or parsed.
    pub errors: Vec<EntryError>,
}

impl ApiSurface {
    pub fn empty(library: Gav) -> Self {
        ApiSurface {
            library,
            types: BTreeMap::new(),
            errors: Vec::new(),
        }
    }

    pub fn contains(&self, type_name: &str) -> bool {
        self.types.contains_key(type_name)
    }

    pub fn get(&self, type_name: &str) -> Option<&ApiType> {
        self.types.get(type_name)
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn kind_counts(&self) -> KindCounts {
        let mut k = KindCounts::default();
        for t in self.types.values() {
            match t.kind {
                TypeKind::Class => k.classes += 1,
                TypeKind::Interface => k.interfaces += 1,
                TypeKind::Annotation => k.annotations += 1,
            }
        }
        k
    }

    pub fn member_count(&self) -> usize {
        self.types.values().map(|t| t.members.len()).sum()
    }
}

/// Whether a parsed class belongs to the surface: public top-level types,
/// public or protected nested types, never synthetic ones.
fn api_type(cf: &ClassFile) -> Option<ApiType> {
    if cf.is_synthetic() {
        return None;
    }
    let visibility = cf.visibility();
    let visible = match cf.nested {
        Some(_) => visibility.is_api(),
        None => visibility == Visibility::Public,
    };
    if !visible {
        return None;
    }
    let members = cf
        .members()
        .filter(|m| m.visibility.is_api() && !m.is_synthetic)
        .map(|m| (m.member_ref(), m.clone()))
        .collect();
    Some(ApiType {
        name: cf.binary_name.clone(),
        kind: cf.kind(),
        package: cf.package().to_owned(),
        visibility,
        members,
    })
}

/// Builds a surface from already-parsed classes.
pub fn surface_from_classes<'a>(
    library: Gav,
    classes: impl IntoIterator<Item = &'a ClassFile>,
) -> ApiSurface {
    let mut surface = ApiSurface::empty(library);
    for cf in classes {
        if let Some(t) = api_type(cf) {
            surface.types.insert(t.name.clone(), t);
        }
    }
    surface
}

/// Parses every base class entry of a library archive. Entries that fail
/// are listed in `errors` and skipped.
pub fn extract_api_surface(archive: &ArtifactArchive) -> Result<ApiSurface, UsageError> {
    let library = archive
        .coordinates
        .clone()
        .ok_or_else(|| UsageError::MissingCoordinates(archive.display_path()))?;
    let mut surface = ApiSurface::empty(library);
    archive.for_each_class(|entry, bytes| {
        let parsed = bytes
            .map_err(|e| e.to_string())
            .and_then(|b| parse_class(&b).map_err(|e| e.to_string()));
        match parsed {
            Ok(cf) => {
                if let Some(t) = api_type(&cf) {
                    surface.types.insert(t.name.clone(), t);
                }
            }
            Err(message) => surface.errors.push(EntryError {
                entry: entry.to_owned(),
                message,
            }),
        }
    })?;
    Ok(surface)
}
