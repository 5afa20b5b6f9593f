use std::fmt::Write;

use super::{scan_references, ClassFile, MemberDecl};

/// Human-readable listing of a parsed class and its counted references.
pub fn dump(cf: &ClassFile) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "class {} (version {}.{})",
        cf.binary_name, cf.major_version, cf.minor_version
    );
    let _ = writeln!(
        out,
        "  access: {:#06x} kind: {:?} visibility: {:?}",
        cf.access_flags.0,
        cf.kind(),
        cf.visibility()
    );
    let _ = writeln!(out, "  constant pool entries: {}", cf.constant_pool_size);
    if let Some(s) = &cf.super_name {
        let _ = writeln!(out, "  extends {s}");
    }
    for i in &cf.interfaces {
        let _ = writeln!(out, "  implements {i}");
    }
    for a in &cf.class_annotations {
        let _ = writeln!(out, "  @{a}");
    }
    for m in cf.members() {
        member(&mut out, m);
    }
    let _ = writeln!(out, "  references:");
    for r in scan_references(cf) {
        let member = r
            .member
            .as_ref()
            .map_or_else(|| "-".to_owned(), |m| m.to_string());
        let _ = writeln!(
            out,
            "    {}\t{}\t{}\t{}",
            r.target_type, member, r.site, r.count
        );
    }
    out
}

fn member(out: &mut String, m: &MemberDecl) {
    let synthetic = if m.is_synthetic { " synthetic" } else { "" };
    let _ = writeln!(
        out,
        "  {:?} {:?} {}{}{}",
        m.visibility,
        m.kind,
        m.name,
        if m.kind == super::MemberKind::Field {
            ":"
        } else {
            ""
        },
        m.descriptor
    );
    if !synthetic.is_empty() {
        let _ = writeln!(out, "   {synthetic}");
    }
    for a in &m.annotations {
        let _ = writeln!(out, "    @{a}");
    }
    for a in &m.parameter_annotations {
        let _ = writeln!(out, "    param @{a}");
    }
    for e in &m.exceptions {
        let _ = writeln!(out, "    throws {e}");
    }
}
