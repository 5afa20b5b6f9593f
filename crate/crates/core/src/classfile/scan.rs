use std::collections::BTreeMap;

use super::descriptor::parse_descriptor;
use super::{ClassFile, MemberRef, Site, SymbolRef};

type Key = (String, Option<MemberRef>, Site);

/// Tallies every outgoing symbolic reference of `cf`.
///
/// Instruction and bootstrap sites count once per bytecode occurrence;
/// declaration sites count once per textual occurrence (each field type,
/// each signature position, each supertype, interface and annotation).
/// Output is sorted by target, then member, then site.
pub fn scan_references(cf: &ClassFile) -> Vec<SymbolRef> {
    let mut tally: BTreeMap<Key, u32> = BTreeMap::new();
    let mut bump = |target: &str, member: Option<&MemberRef>, site: Site| {
        *tally
            .entry((target.to_owned(), member.cloned(), site))
            .or_default() += 1;
    };

    if let Some(sup) = &cf.super_name {
        bump(sup, None, Site::Supertype);
    }
    for i in &cf.interfaces {
        bump(i, None, Site::Interface);
    }
    for a in &cf.class_annotations {
        bump(a, None, Site::Annotation);
    }
    for (decls, site) in [
        (&cf.fields, Site::FieldDecl),
        (&cf.methods, Site::MethodSignature),
    ] {
        for m in decls {
            // descriptors were validated by parse_class
            if let Ok(d) = parse_descriptor(&m.descriptor) {
                for t in d.referenced_types() {
                    bump(t, None, site);
                }
            }
            for t in &m.exceptions {
                bump(t, None, Site::MethodSignature);
            }
            for a in m.annotations.iter().chain(&m.parameter_annotations) {
                bump(a, None, Site::Annotation);
            }
        }
    }
    for r in &cf.code_refs {
        bump(&r.target, r.member.as_ref(), r.site);
    }

    tally
        .into_iter()
        .map(|((target_type, member, site), count)| SymbolRef {
            target_type,
            member,
            site,
            count,
        })
        .collect()
}
