//! Field and method descriptor grammar.
//!
//! ```text
//! field  = B | C | D | F | I | J | S | Z | L<internal-name>; | [<field>
//! method = (<field>*)(<field> | V)
//! ```

use std::fmt;

use thiserror::Error;

/// Maximum number of array dimensions the JVM accepts in a descriptor.
pub const MAX_ARRAY_DIMENSIONS: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldType {
    Byte,
    Char,
    Double,
    Float,
    Int,
    Long,
    Short,
    Boolean,
    Object(String),
    Array(Box<FieldType>),
}

impl FieldType {
    /// Innermost element type of an array, or `self` for non-arrays.
    pub fn element(&self) -> &FieldType {
        match self {
            FieldType::Array(inner) => inner.element(),
            other => other,
        }
    }

    /// The object type name this type mentions, with array wrapping removed.
    pub fn referenced_type(&self) -> Option<&str> {
        match self.element() {
            FieldType::Object(name) => Some(name),
            _ => None,
        }
    }

    /// Java source spelling, e.g. `int[][]` or `java.lang.Class`.
    pub fn java_name(&self) -> String {
        match self {
            FieldType::Byte => "byte".into(),
            FieldType::Char => "char".into(),
            FieldType::Double => "double".into(),
            FieldType::Float => "float".into(),
            FieldType::Int => "int".into(),
            FieldType::Long => "long".into(),
            FieldType::Short => "short".into(),
            FieldType::Boolean => "boolean".into(),
            FieldType::Object(name) => name.replace('/', "."),
            FieldType::Array(inner) => format!("{}[]", inner.java_name()),
        }
    }

    /// Number of stack slots a value of this type occupies.
    pub fn slots(&self) -> u16 {
        match self {
            FieldType::Long | FieldType::Double => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for FieldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldType::Byte => f.write_str("B"),
            FieldType::Char => f.write_str("C"),
            FieldType::Double => f.write_str("D"),
            FieldType::Float => f.write_str("F"),
            FieldType::Int => f.write_str("I"),
            FieldType::Long => f.write_str("J"),
            FieldType::Short => f.write_str("S"),
            FieldType::Boolean => f.write_str("Z"),
            FieldType::Object(name) => write!(f, "L{name};"),
            FieldType::Array(inner) => write!(f, "[{inner}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ReturnType {
    Void,
    Value(FieldType),
}

impl fmt::Display for ReturnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReturnType::Void => f.write_str("V"),
            ReturnType::Value(t) => t.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MethodDescriptor {
    pub params: Vec<FieldType>,
    pub ret: ReturnType,
}

impl fmt::Display for MethodDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for p in &self.params {
            p.fmt(f)?;
        }
        write!(f, "){}", self.ret)
    }
}

/// A parsed descriptor. `Display` reproduces the exact input text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Descriptor {
    Field(FieldType),
    Method(MethodDescriptor),
}

impl Descriptor {
    pub fn params(&self) -> &[FieldType] {
        match self {
            Descriptor::Field(_) => &[],
            Descriptor::Method(m) => &m.params,
        }
    }

    /// Object type names in occurrence order. Array element types are
    /// unwrapped, primitives are skipped, and repeats are kept.
    pub fn referenced_types(&self) -> Vec<&str> {
        match self {
            Descriptor::Field(t) => t.referenced_type().into_iter().collect(),
            Descriptor::Method(m) => {
                let ret = match &m.ret {
                    ReturnType::Void => None,
                    ReturnType::Value(t) => t.referenced_type(),
                };
                m.params
                    .iter()
                    .filter_map(FieldType::referenced_type)
                    .chain(ret)
                    .collect()
            }
        }
    }

    pub fn is_method(&self) -> bool {
        matches!(self, Descriptor::Method(_))
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Field(t) => t.fmt(f),
            Descriptor::Method(m) => m.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed descriptor at offset {offset}: {reason}")]
pub struct MalformedDescriptor {
    pub offset: usize,
    pub reason: &'static str,
}

/// Parses either a field or a method descriptor.
pub fn parse_descriptor(text: &str) -> Result<Descriptor, MalformedDescriptor> {
    let bytes = text.as_bytes();
    if bytes.first() == Some(&b'(') {
        let mut pos = 1;
        let mut params = Vec::new();
        loop {
            match bytes.get(pos) {
                None => return Err(err(pos, "unterminated parameter list")),
                Some(b')') => {
                    pos += 1;
                    break;
                }
                Some(_) => {
                    let (t, next) = field_type(bytes, pos)?;
                    params.push(t);
                    pos = next;
                }
            }
        }
        let (ret, next) = if bytes.get(pos) == Some(&b'V') {
            (ReturnType::Void, pos + 1)
        } else {
            let (t, next) = field_type(bytes, pos)?;
            (ReturnType::Value(t), next)
        };
        if next != bytes.len() {
            return Err(err(next, "trailing characters"));
        }
        Ok(Descriptor::Method(MethodDescriptor { params, ret }))
    } else {
        parse_field_descriptor(text).map(Descriptor::Field)
    }
}

pub fn parse_field_descriptor(text: &str) -> Result<FieldType, MalformedDescriptor> {
    let bytes = text.as_bytes();
    let (t, next) = field_type(bytes, 0)?;
    if next != bytes.len() {
        return Err(err(next, "trailing characters"));
    }
    Ok(t)
}

pub fn parse_method_descriptor(text: &str) -> Result<MethodDescriptor, MalformedDescriptor> {
    match parse_descriptor(text)? {
        Descriptor::Method(m) => Ok(m),
        Descriptor::Field(_) => Err(err(0, "expected '('")),
    }
}

fn err(offset: usize, reason: &'static str) -> MalformedDescriptor {
    MalformedDescriptor { offset, reason }
}

fn field_type(bytes: &[u8], start: usize) -> Result<(FieldType, usize), MalformedDescriptor> {
    let mut dims = 0;
    let mut pos = start;
    while bytes.get(pos) == Some(&b'[') {
        dims += 1;
        pos += 1;
    }
    if dims > MAX_ARRAY_DIMENSIONS {
        return Err(err(start, "too many array dimensions"));
    }
    let (base, next) = match bytes.get(pos) {
        None => return Err(err(pos, "unexpected end of descriptor")),
        Some(b'B') => (FieldType::Byte, pos + 1),
        Some(b'C') => (FieldType::Char, pos + 1),
        Some(b'D') => (FieldType::Double, pos + 1),
        Some(b'F') => (FieldType::Float, pos + 1),
        Some(b'I') => (FieldType::Int, pos + 1),
        Some(b'J') => (FieldType::Long, pos + 1),
        Some(b'S') => (FieldType::Short, pos + 1),
        Some(b'Z') => (FieldType::Boolean, pos + 1),
        Some(b'L') => {
            let name_start = pos + 1;
            let Some(len) = bytes[name_start..].iter().position(|&b| b == b';') else {
                return Err(err(pos, "unterminated object type"));
            };
            let name = &bytes[name_start..name_start + len];
            if let Some(bad) = internal_name_error(name) {
                return Err(err(name_start + bad, "invalid internal name"));
            }
            // internal_name_error only accepts valid UTF-8 slices of the input
            let name = std::str::from_utf8(name).expect("slice of a str on ASCII boundaries");
            (FieldType::Object(name.to_owned()), name_start + len + 1)
        }
        Some(_) => return Err(err(pos, "unknown type tag")),
    };
    let wrapped = (0..dims).fold(base, |t, _| FieldType::Array(Box::new(t)));
    Ok((wrapped, next))
}

/// Returns the offset of the first offending byte if `name` is not
/// `segment('/'segment)*` with non-empty segments free of `. ; [ /`.
fn internal_name_error(name: &[u8]) -> Option<usize> {
    if name.is_empty() {
        return Some(0);
    }
    let mut segment_len = 0;
    for (i, &b) in name.iter().enumerate() {
        match b {
            b'/' => {
                if segment_len == 0 {
                    return Some(i);
                }
                segment_len = 0;
            }
            b'.' | b';' | b'[' => return Some(i),
            _ => segment_len += 1,
        }
    }
    (segment_len == 0).then_some(name.len() - 1)
}

/// True if `name` is a well-formed slash-separated internal type name.
pub fn is_internal_name(name: &str) -> bool {
    internal_name_error(name.as_bytes()).is_none()
}
