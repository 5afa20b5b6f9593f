//! JVM class-file decoding and symbolic reference scanning.

pub mod builder;
mod code;
pub mod descriptor;
pub mod dump;
pub mod opcodes;
mod parse;
mod pool;
mod reader;
mod scan;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use descriptor::{
    parse_descriptor, Descriptor, FieldType, MalformedDescriptor, MethodDescriptor, ReturnType,
};
pub use parse::parse_class;
pub use scan::scan_references;

pub const MAGIC: u32 = 0xCAFE_BABE;
/// Java 1.1.
pub const MIN_MAJOR_VERSION: u16 = 45;
/// Java 21.
pub const MAX_MAJOR_VERSION: u16 = 65;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassFileError {
    #[error("bad magic number {found:#010x}")]
    BadMagic { found: u32 },
    #[error("unsupported class file major version {major}")]
    UnsupportedVersion { major: u16 },
    #[error("input truncated at byte offset {offset}")]
    Truncated { offset: usize },
    #[error("malformed constant pool (index {index}): {reason}")]
    MalformedPool { index: u16, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AccessFlags(pub u16);

impl AccessFlags {
    pub const PUBLIC: u16 = 0x0001;
    pub const PRIVATE: u16 = 0x0002;
    pub const PROTECTED: u16 = 0x0004;
    pub const STATIC: u16 = 0x0008;
    pub const FINAL: u16 = 0x0010;
    pub const SUPER: u16 = 0x0020;
    pub const BRIDGE: u16 = 0x0040;
    pub const INTERFACE: u16 = 0x0200;
    pub const ABSTRACT: u16 = 0x0400;
    pub const SYNTHETIC: u16 = 0x1000;
    pub const ANNOTATION: u16 = 0x2000;
    pub const ENUM: u16 = 0x4000;
    pub const MODULE: u16 = 0x8000;

    pub fn contains(self, flag: u16) -> bool {
        self.0 & flag == flag
    }

    pub fn is_public(self) -> bool {
        self.contains(Self::PUBLIC)
    }

    pub fn is_static(self) -> bool {
        self.contains(Self::STATIC)
    }

    pub fn is_synthetic(self) -> bool {
        self.contains(Self::SYNTHETIC)
    }

    pub fn is_interface(self) -> bool {
        self.contains(Self::INTERFACE)
    }

    pub fn is_annotation(self) -> bool {
        self.contains(Self::ANNOTATION)
    }

    pub fn visibility(self) -> Visibility {
        if self.contains(Self::PUBLIC) {
            Visibility::Public
        } else if self.contains(Self::PROTECTED) {
            Visibility::Protected
        } else if self.contains(Self::PRIVATE) {
            Visibility::Private
        } else {
            Visibility::Package
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    Public,
    Protected,
    Package,
    Private,
}

impl Visibility {
    /// Public and protected members are reachable from client code.
    pub fn is_api(self) -> bool {
        matches!(self, Visibility::Public | Visibility::Protected)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberKind {
    Field,
    Method,
    Constructor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberDecl {
    pub owner: String,
    pub name: String,
    pub descriptor: String,
    pub kind: MemberKind,
    pub visibility: Visibility,
    pub access: AccessFlags,
    pub is_synthetic: bool,
    pub annotations: Vec<String>,
    /// Annotation types found on method parameters, flattened in order.
    pub parameter_annotations: Vec<String>,
    /// Types named in a method's `throws` clause.
    pub exceptions: Vec<String>,
}

impl MemberDecl {
    pub fn is_bridge(&self) -> bool {
        self.kind != MemberKind::Field && self.access.contains(AccessFlags::BRIDGE)
    }

    pub fn member_ref(&self) -> MemberRef {
        MemberRef {
            name: self.name.clone(),
            descriptor: self.descriptor.clone(),
            kind: self.kind,
        }
    }
}

/// Access information for a class that is itself a nested member of
/// another class, taken from its own InnerClasses entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedInfo {
    pub outer: Option<String>,
    pub simple_name: Option<String>,
    pub access: AccessFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeKind {
    Class,
    Interface,
    Annotation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFile {
    pub binary_name: String,
    pub minor_version: u16,
    pub major_version: u16,
    pub access_flags: AccessFlags,
    pub super_name: Option<String>,
    pub interfaces: Vec<String>,
    pub fields: Vec<MemberDecl>,
    pub methods: Vec<MemberDecl>,
    pub class_annotations: Vec<String>,
    /// Entry count as declared in the header (one more than the highest index).
    pub constant_pool_size: u16,
    pub nested: Option<NestedInfo>,
    pub(crate) code_refs: Vec<CodeRef>,
}

impl ClassFile {
    /// Slash-separated package, empty for the default package.
    pub fn package(&self) -> &str {
        package_of(&self.binary_name)
    }

    pub fn kind(&self) -> TypeKind {
        if self.access_flags.is_annotation() {
            TypeKind::Annotation
        } else if self.access_flags.is_interface() {
            TypeKind::Interface
        } else {
            TypeKind::Class
        }
    }

    /// Effective visibility, using the InnerClasses entry for nested types.
    pub fn visibility(&self) -> Visibility {
        match &self.nested {
            Some(n) => n.access.visibility(),
            None => self.access_flags.visibility(),
        }
    }

    pub fn is_synthetic(&self) -> bool {
        self.access_flags.is_synthetic()
            || self
                .nested
                .as_ref()
                .is_some_and(|n| n.access.is_synthetic())
    }

    pub fn members(&self) -> impl Iterator<Item = &MemberDecl> {
        self.fields.iter().chain(&self.methods)
    }

    /// Number of instruction and bootstrap reference occurrences found in code.
    pub fn code_reference_count(&self) -> usize {
        self.code_refs.len()
    }
}

pub fn package_of(binary_name: &str) -> &str {
    binary_name.rfind('/').map_or("", |i| &binary_name[..i])
}

/// Where in a class a symbolic reference occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Site {
    Instruction,
    FieldDecl,
    MethodSignature,
    Supertype,
    Interface,
    Annotation,
    Bootstrap,
}

impl Site {
    pub fn as_str(self) -> &'static str {
        match self {
            Site::Instruction => "instruction",
            Site::FieldDecl => "field_decl",
            Site::MethodSignature => "method_signature",
            Site::Supertype => "supertype",
            Site::Interface => "interface",
            Site::Annotation => "annotation",
            Site::Bootstrap => "bootstrap",
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A referenced member: name plus raw descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemberRef {
    pub name: String,
    pub descriptor: String,
    pub kind: MemberKind,
}

impl MemberRef {
    pub fn new(name: impl Into<String>, descriptor: impl Into<String>) -> Self {
        let name = name.into();
        let descriptor = descriptor.into();
        let kind = if !descriptor.starts_with('(') {
            MemberKind::Field
        } else if name == "<init>" {
            MemberKind::Constructor
        } else {
            MemberKind::Method
        };
        MemberRef {
            name,
            descriptor,
            kind,
        }
    }

    /// `(name, descriptor)` lookup key shared by declarations and references.
    pub fn key(&self) -> (&str, &str) {
        (&self.name, &self.descriptor)
    }
}

/// Methods render as `name(desc)ret`, fields as `name:desc`.
impl fmt::Display for MemberRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MemberKind::Field => write!(f, "{}:{}", self.name, self.descriptor),
            _ => write!(f, "{}{}", self.name, self.descriptor),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid member text {0:?}")]
pub struct InvalidMember(pub String);

impl std::str::FromStr for MemberRef {
    type Err = InvalidMember;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InvalidMember(s.to_owned());
        let (name, descriptor) = if let Some(i) = s.find('(') {
            let desc = &s[i..];
            descriptor::parse_method_descriptor(desc).map_err(|_| bad())?;
            (&s[..i], desc)
        } else {
            let (name, desc) = s.split_once(':').ok_or_else(bad)?;
            descriptor::parse_field_descriptor(desc).map_err(|_| bad())?;
            (name, desc)
        };
        if name.is_empty() {
            return Err(bad());
        }
        Ok(MemberRef::new(name, descriptor))
    }
}

/// A counted outgoing reference from one class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolRef {
    pub target_type: String,
    pub member: Option<MemberRef>,
    pub site: Site,
    pub count: u32,
}

/// One uncounted reference occurrence recovered from a Code attribute or
/// from the bootstrap table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CodeRef {
    pub(crate) target: String,
    pub(crate) member: Option<MemberRef>,
    pub(crate) site: Site,
}
