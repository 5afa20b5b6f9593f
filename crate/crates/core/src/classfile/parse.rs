use super::code::{self, Operand};
use super::descriptor::{self, is_internal_name};
use super::pool::{ConstantPool, Entry};
use super::reader::Reader;
use super::{
    AccessFlags, ClassFile, ClassFileError, CodeRef, MemberDecl, MemberKind, MemberRef, NestedInfo,
    Site, MAGIC, MAX_MAJOR_VERSION, MIN_MAJOR_VERSION,
};

const MAX_ELEMENT_DEPTH: usize = 64;

fn malformed(index: u16, reason: impl Into<String>) -> ClassFileError {
    ClassFileError::MalformedPool {
        index,
        reason: reason.into(),
    }
}

struct Bootstrap {
    method: u16,
    args: Vec<u16>,
}

/// Decodes a class file. Every constant-pool cross reference is checked,
/// and every reference carried by code is resolved up front so that
/// [`super::scan_references`] cannot fail.
pub fn parse_class(bytes: &[u8]) -> Result<ClassFile, ClassFileError> {
    let mut r = Reader::new(bytes);
    let magic = r.u32()?;
    if magic != MAGIC {
        return Err(ClassFileError::BadMagic { found: magic });
    }
    let minor_version = r.u16()?;
    let major_version = r.u16()?;
    if !(MIN_MAJOR_VERSION..=MAX_MAJOR_VERSION).contains(&major_version) {
        return Err(ClassFileError::UnsupportedVersion {
            major: major_version,
        });
    }
    let constant_pool_size = r.u16()?;
    let pool = ConstantPool::read(&mut r, constant_pool_size)?;

    let access_flags = AccessFlags(r.u16()?);
    let this_index = r.u16()?;
    let binary_name = pool.class_name(this_index)?.to_owned();
    if !is_internal_name(&binary_name) {
        return Err(malformed(
            this_index,
            format!("invalid class name {binary_name:?}"),
        ));
    }
    let super_index = r.u16()?;
    let super_name = if super_index == 0 {
        None
    } else {
        Some(plain_class_name(&pool, super_index)?)
    };
    let interface_count = r.u16()?;
    let mut interfaces = Vec::with_capacity(interface_count as usize);
    for _ in 0..interface_count {
        let idx = r.u16()?;
        interfaces.push(plain_class_name(&pool, idx)?);
    }

    let mut pending: Vec<(Operand, Site)> = Vec::new();
    let field_count = r.u16()?;
    let mut fields = Vec::with_capacity(field_count as usize);
    for _ in 0..field_count {
        fields.push(member(&mut r, &pool, &binary_name, false, &mut pending)?);
    }
    let method_count = r.u16()?;
    let mut methods = Vec::with_capacity(method_count as usize);
    for _ in 0..method_count {
        methods.push(member(&mut r, &pool, &binary_name, true, &mut pending)?);
    }

    let mut class_annotations = Vec::new();
    let mut bootstraps: Option<Vec<Bootstrap>> = None;
    let mut nested = None;
    attributes(&mut r, &pool, |name, mut body| {
        match name {
            "RuntimeVisibleAnnotations" | "RuntimeInvisibleAnnotations" => {
                class_annotations.extend(annotations(&mut body, &pool)?);
            }
            "BootstrapMethods" => {
                let n = body.u16()?;
                let mut table = Vec::with_capacity(n as usize);
                for _ in 0..n {
                    let method = body.u16()?;
                    let argc = body.u16()?;
                    let args = (0..argc)
                        .map(|_| body.u16())
                        .collect::<Result<Vec<_>, _>>()?;
                    table.push(Bootstrap { method, args });
                }
                bootstraps = Some(table);
            }
            "InnerClasses" => {
                let n = body.u16()?;
                for _ in 0..n {
                    let inner = body.u16()?;
                    let outer = body.u16()?;
                    let inner_name = body.u16()?;
                    let flags = AccessFlags(body.u16()?);
                    if pool.class_name(inner)? == binary_name {
                        nested = Some(NestedInfo {
                            outer: if outer == 0 {
                                None
                            } else {
                                Some(pool.class_name(outer)?.to_owned())
                            },
                            simple_name: if inner_name == 0 {
                                None
                            } else {
                                Some(pool.utf8(inner_name)?.to_owned())
                            },
                            access: flags,
                        });
                    }
                }
            }
            _ => {}
        }
        Ok(())
    })?;

    let bootstraps = bootstraps.unwrap_or_default();
    let mut code_refs = Vec::with_capacity(pending.len());
    for (operand, site) in pending {
        resolve(&pool, &bootstraps, operand, site, &mut code_refs)?;
    }

    Ok(ClassFile {
        binary_name,
        minor_version,
        major_version,
        access_flags,
        super_name,
        interfaces,
        fields,
        methods,
        class_annotations,
        constant_pool_size,
        nested,
        code_refs,
    })
}

fn attributes<'a>(
    r: &mut Reader<'a>,
    pool: &ConstantPool,
    mut visit: impl FnMut(&str, Reader<'a>) -> Result<(), ClassFileError>,
) -> Result<(), ClassFileError> {
    let count = r.u16()?;
    for _ in 0..count {
        let name_index = r.u16()?;
        let len = r.u32()? as usize;
        let body = r.sub(len)?;
        let name = pool.utf8(name_index)?;
        visit(name, body)?;
    }
    Ok(())
}

fn member(
    r: &mut Reader<'_>,
    pool: &ConstantPool,
    owner: &str,
    is_method: bool,
    pending: &mut Vec<(Operand, Site)>,
) -> Result<MemberDecl, ClassFileError> {
    let access = AccessFlags(r.u16()?);
    let name_index = r.u16()?;
    let desc_index = r.u16()?;
    let name = pool.utf8(name_index)?.to_owned();
    let descriptor = pool.utf8(desc_index)?.to_owned();
    let kind = if is_method {
        descriptor::parse_method_descriptor(&descriptor)
            .map_err(|e| malformed(desc_index, e.to_string()))?;
        if name == "<init>" {
            MemberKind::Constructor
        } else {
            MemberKind::Method
        }
    } else {
        descriptor::parse_field_descriptor(&descriptor)
            .map_err(|e| malformed(desc_index, e.to_string()))?;
        MemberKind::Field
    };

    let mut decl = MemberDecl {
        owner: owner.to_owned(),
        name,
        descriptor,
        kind,
        visibility: access.visibility(),
        access,
        is_synthetic: access.is_synthetic(),
        annotations: Vec::new(),
        parameter_annotations: Vec::new(),
        exceptions: Vec::new(),
    };
    attributes(r, pool, |attr, mut body| {
        match attr {
            "RuntimeVisibleAnnotations" | "RuntimeInvisibleAnnotations" => {
                decl.annotations.extend(annotations(&mut body, pool)?);
            }
            "RuntimeVisibleParameterAnnotations" | "RuntimeInvisibleParameterAnnotations"
                if is_method =>
            {
                let params = body.u8()?;
                for _ in 0..params {
                    decl.parameter_annotations
                        .extend(annotations(&mut body, pool)?);
                }
            }
            "Exceptions" if is_method => {
                let n = body.u16()?;
                for _ in 0..n {
                    let idx = body.u16()?;
                    decl.exceptions.push(plain_class_name(pool, idx)?);
                }
            }
            "Synthetic" => decl.is_synthetic = true,
            "Code" if is_method => {
                let _max_stack = body.u16()?;
                let _max_locals = body.u16()?;
                let len = body.u32()? as usize;
                let code = body.sub(len)?;
                pending.extend(
                    code::walk(code)?
                        .into_iter()
                        .map(|op| (op, Site::Instruction)),
                );
                let handlers = body.u16()?;
                for _ in 0..handlers {
                    body.skip(6)?;
                    let catch_type = body.u16()?;
                    if catch_type != 0 {
                        pending.push((Operand::Class(catch_type), Site::Instruction));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    })?;
    Ok(decl)
}

/// Names a supertype, interface or thrown type: must be a plain internal name.
fn plain_class_name(pool: &ConstantPool, index: u16) -> Result<String, ClassFileError> {
    let name = pool.class_name(index)?;
    if !is_internal_name(name) {
        return Err(malformed(index, format!("invalid class name {name:?}")));
    }
    Ok(name.to_owned())
}

fn annotations(r: &mut Reader<'_>, pool: &ConstantPool) -> Result<Vec<String>, ClassFileError> {
    let n = r.u16()?;
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(annotation(r, pool, 0)?);
    }
    Ok(out)
}

fn annotation(
    r: &mut Reader<'_>,
    pool: &ConstantPool,
    depth: usize,
) -> Result<String, ClassFileError> {
    let type_index = r.u16()?;
    let desc = pool.utf8(type_index)?;
    let name = match descriptor::parse_field_descriptor(desc) {
        Ok(descriptor::FieldType::Object(name)) => name,
        _ => {
            return Err(malformed(
                type_index,
                format!("annotation type {desc:?} is not a class type"),
            ))
        }
    };
    let pairs = r.u16()?;
    for _ in 0..pairs {
        pool.utf8(r.u16()?)?;
        element_value(r, pool, depth)?;
    }
    Ok(name)
}

fn element_value(
    r: &mut Reader<'_>,
    pool: &ConstantPool,
    depth: usize,
) -> Result<(), ClassFileError> {
    if depth > MAX_ELEMENT_DEPTH {
        return Err(malformed(0, "annotation element values nested too deeply"));
    }
    let tag = r.u8()?;
    match tag {
        b'B' | b'C' | b'D' | b'F' | b'I' | b'J' | b'S' | b'Z' | b's' => {
            pool.get(r.u16()?)?;
        }
        b'e' => {
            pool.utf8(r.u16()?)?;
            pool.utf8(r.u16()?)?;
        }
        b'c' => {
            pool.utf8(r.u16()?)?;
        }
        b'@' => {
            annotation(r, pool, depth + 1)?;
        }
        b'[' => {
            let n = r.u16()?;
            for _ in 0..n {
                element_value(r, pool, depth + 1)?;
            }
        }
        other => {
            return Err(malformed(
                0,
                format!("unknown annotation element tag {other:#04x}"),
            ))
        }
    }
    Ok(())
}

/// Maps a Class entry name (possibly an array descriptor) to the object type
/// it mentions; primitive arrays mention none.
fn type_target(name: &str, index: u16) -> Result<Option<String>, ClassFileError> {
    if name.starts_with('[') {
        let t = descriptor::parse_field_descriptor(name)
            .map_err(|e| malformed(index, e.to_string()))?;
        Ok(t.referenced_type().map(str::to_owned))
    } else if is_internal_name(name) {
        Ok(Some(name.to_owned()))
    } else {
        Err(malformed(index, format!("invalid class name {name:?}")))
    }
}

fn member_target(
    pool: &ConstantPool,
    index: u16,
) -> Result<Option<(String, MemberRef)>, ClassFileError> {
    let t = pool.member_ref(index)?;
    if t.is_field {
        descriptor::parse_field_descriptor(t.descriptor)
            .map_err(|e| malformed(index, e.to_string()))?;
    } else {
        descriptor::parse_method_descriptor(t.descriptor)
            .map_err(|e| malformed(index, e.to_string()))?;
    }
    Ok(type_target(t.owner, index)?.map(|owner| (owner, MemberRef::new(t.name, t.descriptor))))
}

fn handle_target(
    pool: &ConstantPool,
    index: u16,
) -> Result<Option<(String, MemberRef)>, ClassFileError> {
    match pool.get(index)? {
        Entry::MethodHandle { reference, .. } => member_target(pool, *reference),
        _ => Err(malformed(index, "expected MethodHandle entry")),
    }
}

fn push_member(out: &mut Vec<CodeRef>, target: Option<(String, MemberRef)>, site: Site) {
    if let Some((target, member)) = target {
        out.push(CodeRef {
            target,
            member: Some(member),
            site,
        });
    }
}

fn push_type(out: &mut Vec<CodeRef>, target: Option<String>, site: Site) {
    if let Some(target) = target {
        out.push(CodeRef {
            target,
            member: None,
            site,
        });
    }
}

fn bootstrap_refs(
    pool: &ConstantPool,
    table: &[Bootstrap],
    which: u16,
    entry: u16,
    out: &mut Vec<CodeRef>,
) -> Result<(), ClassFileError> {
    let bsm = table
        .get(which as usize)
        .ok_or_else(|| malformed(entry, format!("bootstrap method {which} missing")))?;
    push_member(out, handle_target(pool, bsm.method)?, Site::Bootstrap);
    for &arg in &bsm.args {
        match pool.get(arg)? {
            Entry::MethodHandle { reference, .. } => {
                push_member(out, member_target(pool, *reference)?, Site::Bootstrap);
            }
            Entry::Class(_) => push_type(
                out,
                type_target(pool.class_name(arg)?, arg)?,
                Site::Bootstrap,
            ),
            _ => {}
        }
    }
    Ok(())
}

fn resolve(
    pool: &ConstantPool,
    bootstraps: &[Bootstrap],
    operand: Operand,
    site: Site,
    out: &mut Vec<CodeRef>,
) -> Result<(), ClassFileError> {
    match operand {
        Operand::Member(idx) => push_member(out, member_target(pool, idx)?, site),
        Operand::Class(idx) => push_type(out, type_target(pool.class_name(idx)?, idx)?, site),
        Operand::Constant(idx) => match pool.get(idx)? {
            Entry::Class(_) => push_type(out, type_target(pool.class_name(idx)?, idx)?, site),
            Entry::MethodHandle { reference, .. } => {
                push_member(out, member_target(pool, *reference)?, site)
            }
            Entry::Dynamic { bootstrap, .. } => {
                bootstrap_refs(pool, bootstraps, *bootstrap, idx, out)?
            }
            _ => {}
        },
        Operand::InvokeDynamic(idx) => match pool.get(idx)? {
            Entry::InvokeDynamic { bootstrap, .. } => {
                bootstrap_refs(pool, bootstraps, *bootstrap, idx, out)?
            }
            _ => return Err(malformed(idx, "expected InvokeDynamic entry")),
        },
    }
    Ok(())
}
