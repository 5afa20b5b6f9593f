use super::reader::Reader;
use super::ClassFileError;

pub(crate) const TAG_UTF8: u8 = 1;
pub(crate) const TAG_INTEGER: u8 = 3;
pub(crate) const TAG_FLOAT: u8 = 4;
pub(crate) const TAG_LONG: u8 = 5;
pub(crate) const TAG_DOUBLE: u8 = 6;
pub(crate) const TAG_CLASS: u8 = 7;
pub(crate) const TAG_STRING: u8 = 8;
pub(crate) const TAG_FIELDREF: u8 = 9;
pub(crate) const TAG_METHODREF: u8 = 10;
pub(crate) const TAG_INTERFACE_METHODREF: u8 = 11;
pub(crate) const TAG_NAME_AND_TYPE: u8 = 12;
pub(crate) const TAG_METHOD_HANDLE: u8 = 15;
pub(crate) const TAG_METHOD_TYPE: u8 = 16;
pub(crate) const TAG_DYNAMIC: u8 = 17;
pub(crate) const TAG_INVOKE_DYNAMIC: u8 = 18;
pub(crate) const TAG_MODULE: u8 = 19;
pub(crate) const TAG_PACKAGE: u8 = 20;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Entry {
    /// Slot 0 and the upper half of long/double entries.
    Unusable,
    Utf8(String),
    Integer(i32),
    Float(u32),
    Long(u64),
    Double(u64),
    Class(u16),
    String(u16),
    FieldRef {
        class: u16,
        name_and_type: u16,
    },
    MethodRef {
        class: u16,
        name_and_type: u16,
    },
    InterfaceMethodRef {
        class: u16,
        name_and_type: u16,
    },
    NameAndType {
        name: u16,
        descriptor: u16,
    },
    MethodHandle {
        kind: u8,
        reference: u16,
    },
    MethodType(u16),
    Dynamic {
        bootstrap: u16,
        name_and_type: u16,
    },
    InvokeDynamic {
        bootstrap: u16,
        name_and_type: u16,
    },
    Module(u16),
    Package(u16),
}

/// A resolved Fieldref/Methodref/InterfaceMethodref.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct RefTarget<'a> {
    pub(crate) owner: &'a str,
    pub(crate) name: &'a str,
    pub(crate) descriptor: &'a str,
    pub(crate) is_field: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct ConstantPool {
    entries: Vec<Entry>,
}

fn malformed(index: u16, reason: impl Into<String>) -> ClassFileError {
    ClassFileError::MalformedPool {
        index,
        reason: reason.into(),
    }
}

impl ConstantPool {
    pub(crate) fn read(r: &mut Reader<'_>, count: u16) -> Result<Self, ClassFileError> {
        if count == 0 {
            return Err(malformed(0, "constant pool count is zero"));
        }
        let mut entries = Vec::with_capacity(count as usize);
        entries.push(Entry::Unusable);
        let mut index = 1u16;
        while index < count {
            let tag = r.u8()?;
            let entry = match tag {
                TAG_UTF8 => {
                    let len = r.u16()? as usize;
                    let raw = r.bytes(len)?;
                    let text = decode_modified_utf8(raw)
                        .ok_or_else(|| malformed(index, "invalid modified UTF-8"))?;
                    Entry::Utf8(text)
                }
                TAG_INTEGER => Entry::Integer(r.i32()?),
                TAG_FLOAT => Entry::Float(r.u32()?),
                TAG_LONG => Entry::Long(r.u64()?),
                TAG_DOUBLE => Entry::Double(r.u64()?),
                TAG_CLASS => Entry::Class(r.u16()?),
                TAG_STRING => Entry::String(r.u16()?),
                TAG_FIELDREF => Entry::FieldRef {
                    class: r.u16()?,
                    name_and_type: r.u16()?,
                },
                TAG_METHODREF => Entry::MethodRef {
                    class: r.u16()?,
                    name_and_type: r.u16()?,
                },
                TAG_INTERFACE_METHODREF => Entry::InterfaceMethodRef {
                    class: r.u16()?,
                    name_and_type: r.u16()?,
                },
                TAG_NAME_AND_TYPE => Entry::NameAndType {
                    name: r.u16()?,
                    descriptor: r.u16()?,
                },
                TAG_METHOD_HANDLE => Entry::MethodHandle {
                    kind: r.u8()?,
                    reference: r.u16()?,
                },
                TAG_METHOD_TYPE => Entry::MethodType(r.u16()?),
                TAG_DYNAMIC => Entry::Dynamic {
                    bootstrap: r.u16()?,
                    name_and_type: r.u16()?,
                },
                TAG_INVOKE_DYNAMIC => Entry::InvokeDynamic {
                    bootstrap: r.u16()?,
                    name_and_type: r.u16()?,
                },
                TAG_MODULE => Entry::Module(r.u16()?),
                TAG_PACKAGE => Entry::Package(r.u16()?),
                other => return Err(malformed(index, format!("unknown tag {other}"))),
            };
            let wide = matches!(entry, Entry::Long(_) | Entry::Double(_));
            entries.push(entry);
            index += 1;
            if wide {
                if index >= count {
                    return Err(malformed(
                        index - 1,
                        "8-byte constant occupies the last slot",
                    ));
                }
                entries.push(Entry::Unusable);
                index += 1;
            }
        }
        let pool = ConstantPool { entries };
        pool.validate()?;
        Ok(pool)
    }

    /// Checks every cross-reference inside the pool points at an entry of
    /// the expected kind.
    fn validate(&self) -> Result<(), ClassFileError> {
        for (i, entry) in self.entries.iter().enumerate() {
            let i = i as u16;
            let check = |target: u16, want: &[u8], what: &str| -> Result<(), ClassFileError> {
                match self.entries.get(target as usize).and_then(tag_of) {
                    Some(tag) if want.contains(&tag) => Ok(()),
                    _ => Err(malformed(i, format!("{what} index {target} is dangling"))),
                }
            };
            match *entry {
                Entry::Class(n) | Entry::MethodType(n) | Entry::Module(n) | Entry::Package(n) => {
                    check(n, &[TAG_UTF8], "name")?
                }
                Entry::String(n) => check(n, &[TAG_UTF8], "string")?,
                Entry::FieldRef {
                    class,
                    name_and_type,
                }
                | Entry::MethodRef {
                    class,
                    name_and_type,
                }
                | Entry::InterfaceMethodRef {
                    class,
                    name_and_type,
                } => {
                    check(class, &[TAG_CLASS], "class")?;
                    check(name_and_type, &[TAG_NAME_AND_TYPE], "name-and-type")?;
                }
                Entry::NameAndType { name, descriptor } => {
                    check(name, &[TAG_UTF8], "name")?;
                    check(descriptor, &[TAG_UTF8], "descriptor")?;
                }
                Entry::MethodHandle { kind, reference } => {
                    let want: &[u8] = match kind {
                        1..=4 => &[TAG_FIELDREF],
                        5 | 8 => &[TAG_METHODREF],
                        6 | 7 => &[TAG_METHODREF, TAG_INTERFACE_METHODREF],
                        9 => &[TAG_INTERFACE_METHODREF],
                        _ => return Err(malformed(i, format!("bad method handle kind {kind}"))),
                    };
                    check(reference, want, "method handle reference")?;
                }
                Entry::Dynamic { name_and_type, .. }
                | Entry::InvokeDynamic { name_and_type, .. } => {
                    check(name_and_type, &[TAG_NAME_AND_TYPE], "name-and-type")?
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub(crate) fn get(&self, index: u16) -> Result<&Entry, ClassFileError> {
        match self.entries.get(index as usize) {
            Some(Entry::Unusable) | None => Err(malformed(index, "index out of range or unusable")),
            Some(e) => Ok(e),
        }
    }

    pub(crate) fn utf8(&self, index: u16) -> Result<&str, ClassFileError> {
        match self.get(index)? {
            Entry::Utf8(s) => Ok(s),
            _ => Err(malformed(index, "expected Utf8 entry")),
        }
    }

    pub(crate) fn class_name(&self, index: u16) -> Result<&str, ClassFileError> {
        match self.get(index)? {
            Entry::Class(name) => self.utf8(*name),
            _ => Err(malformed(index, "expected Class entry")),
        }
    }

    pub(crate) fn name_and_type(&self, index: u16) -> Result<(&str, &str), ClassFileError> {
        match self.get(index)? {
            Entry::NameAndType { name, descriptor } => {
                Ok((self.utf8(*name)?, self.utf8(*descriptor)?))
            }
            _ => Err(malformed(index, "expected NameAndType entry")),
        }
    }

    pub(crate) fn member_ref(&self, index: u16) -> Result<RefTarget<'_>, ClassFileError> {
        let (class, nat, is_field) = match self.get(index)? {
            Entry::FieldRef {
                class,
                name_and_type,
            } => (*class, *name_and_type, true),
            Entry::MethodRef {
                class,
                name_and_type,
            }
            | Entry::InterfaceMethodRef {
                class,
                name_and_type,
            } => (*class, *name_and_type, false),
            _ => return Err(malformed(index, "expected member reference")),
        };
        let owner = self.class_name(class)?;
        let (name, descriptor) = self.name_and_type(nat)?;
        Ok(RefTarget {
            owner,
            name,
            descriptor,
            is_field,
        })
    }
}

fn tag_of(entry: &Entry) -> Option<u8> {
    Some(match entry {
        Entry::Unusable => return None,
        Entry::Utf8(_) => TAG_UTF8,
        Entry::Integer(_) => TAG_INTEGER,
        Entry::Float(_) => TAG_FLOAT,
        Entry::Long(_) => TAG_LONG,
        Entry::Double(_) => TAG_DOUBLE,
        Entry::Class(_) => TAG_CLASS,
        Entry::String(_) => TAG_STRING,
        Entry::FieldRef { .. } => TAG_FIELDREF,
        Entry::MethodRef { .. } => TAG_METHODREF,
        Entry::InterfaceMethodRef { .. } => TAG_INTERFACE_METHODREF,
        Entry::NameAndType { .. } => TAG_NAME_AND_TYPE,
        Entry::MethodHandle { .. } => TAG_METHOD_HANDLE,
        Entry::MethodType(_) => TAG_METHOD_TYPE,
        Entry::Dynamic { .. } => TAG_DYNAMIC,
        Entry::InvokeDynamic { .. } => TAG_INVOKE_DYNAMIC,
        Entry::Module(_) => TAG_MODULE,
        Entry::Package(_) => TAG_PACKAGE,
    })
}

/// Decodes the JVM's modified UTF-8 (two-byte NUL, surrogate pairs encoded
/// as separate three-byte sequences).
pub(crate) fn decode_modified_utf8(raw: &[u8]) -> Option<String> {
    if raw.is_ascii() && !raw.contains(&0) {
        return Some(String::from_utf8(raw.to_vec()).expect("ascii"));
    }
    let mut units = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        let b = raw[i];
        match b {
            0x01..=0x7F => {
                units.push(b as u16);
                i += 1;
            }
            0xC0..=0xDF => {
                let b2 = *raw.get(i + 1)?;
                if b2 & 0xC0 != 0x80 {
                    return None;
                }
                units.push(((b as u16 & 0x1F) << 6) | (b2 as u16 & 0x3F));
                i += 2;
            }
            0xE0..=0xEF => {
                let b2 = *raw.get(i + 1)?;
                let b3 = *raw.get(i + 2)?;
                if b2 & 0xC0 != 0x80 || b3 & 0xC0 != 0x80 {
                    return None;
                }
                units.push(
                    ((b as u16 & 0x0F) << 12) | ((b2 as u16 & 0x3F) << 6) | (b3 as u16 & 0x3F),
                );
                i += 3;
            }
            _ => return None,
        }
    }
    char::decode_utf16(units)
        .collect::<Result<String, _>>()
        .ok()
}

/// Inverse of [`decode_modified_utf8`].
pub(crate) fn encode_modified_utf8(text: &str) -> Vec<u8> {
    let mut out = Vec::with_capacity(text.len());
    for unit in text.encode_utf16() {
        match unit {
            0x0001..=0x007F => out.push(unit as u8),
            0x0000 | 0x0080..=0x07FF => {
                out.push(0xC0 | (unit >> 6) as u8);
                out.push(0x80 | (unit & 0x3F) as u8);
            }
            _ => {
                out.push(0xE0 | (unit >> 12) as u8);
                out.push(0x80 | ((unit >> 6) & 0x3F) as u8);
                out.push(0x80 | (unit & 0x3F) as u8);
            }
        }
    }
    out
}
