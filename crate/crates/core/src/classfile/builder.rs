//! Minimal class-file writer used to synthesise fixture corpora.
//!
//! Output is structurally valid (it round-trips through [`super::parse_class`])
//! but carries no StackMapTable and is not meant to pass the JVM verifier.

use std::collections::HashMap;

use super::opcodes::{INVOKEDYNAMIC, INVOKEINTERFACE, LDC, LDC_W};
use super::pool::{self, encode_modified_utf8};
use super::{AccessFlags, MAGIC};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationSpec {
    pub type_name: String,
    /// Runtime-visible vs class-retention (invisible) attribute.
    pub visible: bool,
}

impl AnnotationSpec {
    pub fn invisible(type_name: impl Into<String>) -> Self {
        AnnotationSpec {
            type_name: type_name.into(),
            visible: false,
        }
    }

    pub fn visible(type_name: impl Into<String>) -> Self {
        AnnotationSpec {
            type_name: type_name.into(),
            visible: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub access: u16,
    pub name: String,
    pub descriptor: String,
    pub annotations: Vec<AnnotationSpec>,
}

impl FieldSpec {
    pub fn new(access: u16, name: impl Into<String>, descriptor: impl Into<String>) -> Self {
        FieldSpec {
            access,
            name: name.into(),
            descriptor: descriptor.into(),
            annotations: Vec::new(),
        }
    }

    pub fn annotated(mut self, a: AnnotationSpec) -> Self {
        self.annotations.push(a);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Handle {
    /// JVM reference kind, 1..=9.
    pub kind: u8,
    pub owner: String,
    pub name: String,
    pub descriptor: String,
    pub interface: bool,
}

impl Handle {
    pub const INVOKE_STATIC: u8 = 6;
    pub const INVOKE_VIRTUAL: u8 = 5;
    pub const INVOKE_INTERFACE: u8 = 9;

    pub fn invoke_static(owner: &str, name: &str, descriptor: &str) -> Self {
        Handle {
            kind: Self::INVOKE_STATIC,
            owner: owner.into(),
            name: name.into(),
            descriptor: descriptor.into(),
            interface: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BootstrapArg {
    Handle(Handle),
    MethodType(String),
    Class(String),
    String(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insn {
    /// Any opcode without operands (`aconst_null`, `pop`, `return`, ...).
    Op(u8),
    Field {
        op: u8,
        owner: String,
        name: String,
        descriptor: String,
    },
    Invoke {
        op: u8,
        owner: String,
        name: String,
        descriptor: String,
        interface: bool,
    },
    /// `new`, `anewarray`, `checkcast`, `instanceof`.
    Type {
        op: u8,
        class: String,
    },
    LdcString(String),
    LdcClass(String),
    InvokeDynamic {
        bootstrap: Handle,
        args: Vec<BootstrapArg>,
        name: String,
        descriptor: String,
    },
    /// Raw bytes copied verbatim into the code array.
    Raw(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MethodSpec {
    pub access: u16,
    pub name: String,
    pub descriptor: String,
    pub annotations: Vec<AnnotationSpec>,
    pub parameter_annotations: Vec<Vec<AnnotationSpec>>,
    pub exceptions: Vec<String>,
    pub code: Option<Vec<Insn>>,
    /// Exception handler catch types, each covering the whole code range.
    pub catch_types: Vec<String>,
}

impl MethodSpec {
    pub fn new(access: u16, name: impl Into<String>, descriptor: impl Into<String>) -> Self {
        MethodSpec {
            access,
            name: name.into(),
            descriptor: descriptor.into(),
            ..Default::default()
        }
    }

    pub fn annotated(mut self, a: AnnotationSpec) -> Self {
        self.annotations.push(a);
        self
    }

    pub fn with_code(mut self, code: Vec<Insn>) -> Self {
        self.code = Some(code);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedSpec {
    pub outer: String,
    pub simple_name: String,
    pub access: u16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassBuilder {
    pub name: String,
    pub major_version: u16,
    pub access: u16,
    pub super_name: Option<String>,
    pub interfaces: Vec<String>,
    pub fields: Vec<FieldSpec>,
    pub methods: Vec<MethodSpec>,
    pub annotations: Vec<AnnotationSpec>,
    pub nested: Option<NestedSpec>,
}

impl ClassBuilder {
    /// A public class extending `java/lang/Object`, Java 5 format.
    pub fn new(name: impl Into<String>) -> Self {
        ClassBuilder {
            name: name.into(),
            major_version: 49,
            access: AccessFlags::PUBLIC | AccessFlags::SUPER,
            super_name: Some("java/lang/Object".into()),
            interfaces: Vec::new(),
            fields: Vec::new(),
            methods: Vec::new(),
            annotations: Vec::new(),
            nested: None,
        }
    }

    pub fn access(mut self, access: u16) -> Self {
        self.access = access;
        self
    }

    pub fn extends(mut self, super_name: Option<&str>) -> Self {
        self.super_name = super_name.map(str::to_owned);
        self
    }

    pub fn implements(mut self, name: &str) -> Self {
        self.interfaces.push(name.into());
        self
    }

    pub fn field(mut self, f: FieldSpec) -> Self {
        self.fields.push(f);
        self
    }

    pub fn method(mut self, m: MethodSpec) -> Self {
        self.methods.push(m);
        self
    }

    pub fn annotated(mut self, a: AnnotationSpec) -> Self {
        self.annotations.push(a);
        self
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        Writer::default().write(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Utf8(String),
    Class(String),
    String(String),
    NameAndType(String, String),
    Ref(u8, String, String, String),
    Handle(u8, u8, String, String, String),
    MethodType(String),
    InvokeDynamic(u16, String, String),
}

#[derive(Default)]
struct Writer {
    pool: Vec<u8>,
    next: u16,
    index: HashMap<Key, u16>,
    bootstraps: Vec<(u16, Vec<u16>)>,
}

impl Writer {
    fn slot(&mut self, key: Key, encode: impl FnOnce(&mut Self) -> Vec<u8>) -> u16 {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let bytes = encode(self);
        if self.next == 0 {
            self.next = 1;
        }
        let i = self.next;
        self.next += 1;
        self.pool.extend_from_slice(&bytes);
        self.index.insert(key, i);
        i
    }

    fn utf8(&mut self, s: &str) -> u16 {
        self.slot(Key::Utf8(s.into()), |_| {
            let enc = encode_modified_utf8(s);
            let mut b = vec![pool::TAG_UTF8];
            b.extend_from_slice(&(enc.len() as u16).to_be_bytes());
            b.extend_from_slice(&enc);
            b
        })
    }

    fn class(&mut self, name: &str) -> u16 {
        self.slot(Key::Class(name.into()), |w| {
            let n = w.utf8(name);
            tagged(pool::TAG_CLASS, &[n])
        })
    }

    fn string(&mut self, s: &str) -> u16 {
        self.slot(Key::String(s.into()), |w| {
            let n = w.utf8(s);
            tagged(pool::TAG_STRING, &[n])
        })
    }

    fn name_and_type(&mut self, name: &str, desc: &str) -> u16 {
        self.slot(Key::NameAndType(name.into(), desc.into()), |w| {
            let n = w.utf8(name);
            let d = w.utf8(desc);
            tagged(pool::TAG_NAME_AND_TYPE, &[n, d])
        })
    }

    fn member(&mut self, tag: u8, owner: &str, name: &str, desc: &str) -> u16 {
        self.slot(Key::Ref(tag, owner.into(), name.into(), desc.into()), |w| {
            let c = w.class(owner);
            let nt = w.name_and_type(name, desc);
            tagged(tag, &[c, nt])
        })
    }

    fn handle(&mut self, h: &Handle) -> u16 {
        let tag = if h.kind <= 4 {
            pool::TAG_FIELDREF
        } else if h.interface {
            pool::TAG_INTERFACE_METHODREF
        } else {
            pool::TAG_METHODREF
        };
        let key = Key::Handle(
            h.kind,
            tag,
            h.owner.clone(),
            h.name.clone(),
            h.descriptor.clone(),
        );
        self.slot(key, |w| {
            let r = w.member(tag, &h.owner, &h.name, &h.descriptor);
            let mut b = vec![pool::TAG_METHOD_HANDLE, h.kind];
            b.extend_from_slice(&r.to_be_bytes());
            b
        })
    }

    fn method_type(&mut self, desc: &str) -> u16 {
        self.slot(Key::MethodType(desc.into()), |w| {
            let d = w.utf8(desc);
            tagged(pool::TAG_METHOD_TYPE, &[d])
        })
    }

    fn invoke_dynamic(
        &mut self,
        bootstrap: &Handle,
        args: &[BootstrapArg],
        name: &str,
        desc: &str,
    ) -> u16 {
        let method = self.handle(bootstrap);
        let arg_indices: Vec<u16> = args
            .iter()
            .map(|a| match a {
                BootstrapArg::Handle(h) => self.handle(h),
                BootstrapArg::MethodType(d) => self.method_type(d),
                BootstrapArg::Class(c) => self.class(c),
                BootstrapArg::String(s) => self.string(s),
            })
            .collect();
        let bsm = match self
            .bootstraps
            .iter()
            .position(|b| b.0 == method && b.1 == arg_indices)
        {
            Some(i) => i,
            None => {
                self.bootstraps.push((method, arg_indices));
                self.bootstraps.len() - 1
            }
        } as u16;
        self.slot(Key::InvokeDynamic(bsm, name.into(), desc.into()), |w| {
            let nt = w.name_and_type(name, desc);
            tagged(pool::TAG_INVOKE_DYNAMIC, &[bsm, nt])
        })
    }

    fn annotations_attr(&mut self, list: &[AnnotationSpec], out: &mut Vec<Vec<u8>>) {
        for (visible, attr) in [
            (true, "RuntimeVisibleAnnotations"),
            (false, "RuntimeInvisibleAnnotations"),
        ] {
            let chosen: Vec<_> = list.iter().filter(|a| a.visible == visible).collect();
            if chosen.is_empty() {
                continue;
            }
            let mut body = (chosen.len() as u16).to_be_bytes().to_vec();
            for a in chosen {
                let t = self.utf8(&format!("L{};", a.type_name));
                body.extend_from_slice(&t.to_be_bytes());
                body.extend_from_slice(&0u16.to_be_bytes());
            }
            out.push(self.attribute(attr, &body));
        }
    }

    fn parameter_annotations_attr(
        &mut self,
        params: &[Vec<AnnotationSpec>],
        out: &mut Vec<Vec<u8>>,
    ) {
        for (visible, attr) in [
            (true, "RuntimeVisibleParameterAnnotations"),
            (false, "RuntimeInvisibleParameterAnnotations"),
        ] {
            if !params.iter().flatten().any(|a| a.visible == visible) {
                continue;
            }
            let mut body = vec![params.len() as u8];
            for p in params {
                let chosen: Vec<_> = p.iter().filter(|a| a.visible == visible).collect();
                body.extend_from_slice(&(chosen.len() as u16).to_be_bytes());
                for a in chosen {
                    let t = self.utf8(&format!("L{};", a.type_name));
                    body.extend_from_slice(&t.to_be_bytes());
                    body.extend_from_slice(&0u16.to_be_bytes());
                }
            }
            out.push(self.attribute(attr, &body));
        }
    }

    fn attribute(&mut self, name: &str, body: &[u8]) -> Vec<u8> {
        let n = self.utf8(name);
        let mut out = n.to_be_bytes().to_vec();
        out.extend_from_slice(&(body.len() as u32).to_be_bytes());
        out.extend_from_slice(body);
        out
    }

    fn code(&mut self, insns: &[Insn], catch_types: &[String]) -> Vec<u8> {
        let mut code = Vec::new();
        for insn in insns {
            match insn {
                Insn::Op(op) => code.push(*op),
                Insn::Field {
                    op,
                    owner,
                    name,
                    descriptor,
                } => {
                    let i = self.member(pool::TAG_FIELDREF, owner, name, descriptor);
                    code.push(*op);
                    code.extend_from_slice(&i.to_be_bytes());
                }
                Insn::Invoke {
                    op,
                    owner,
                    name,
                    descriptor,
                    interface,
                } => {
                    let tag = if *interface {
                        pool::TAG_INTERFACE_METHODREF
                    } else {
                        pool::TAG_METHODREF
                    };
                    let i = self.member(tag, owner, name, descriptor);
                    code.push(*op);
                    code.extend_from_slice(&i.to_be_bytes());
                    if *op == INVOKEINTERFACE {
                        let slots = super::descriptor::parse_method_descriptor(descriptor)
                            .map(|m| 1 + m.params.iter().map(|p| p.slots()).sum::<u16>())
                            .unwrap_or(1);
                        code.push(slots.min(255) as u8);
                        code.push(0);
                    }
                }
                Insn::Type { op, class } => {
                    let i = self.class(class);
                    code.push(*op);
                    code.extend_from_slice(&i.to_be_bytes());
                }
                Insn::LdcString(s) => {
                    let i = self.string(s);
                    ldc(&mut code, i);
                }
                Insn::LdcClass(c) => {
                    let i = self.class(c);
                    ldc(&mut code, i);
                }
                Insn::InvokeDynamic {
                    bootstrap,
                    args,
                    name,
                    descriptor,
                } => {
                    let i = self.invoke_dynamic(bootstrap, args, name, descriptor);
                    code.push(INVOKEDYNAMIC);
                    code.extend_from_slice(&i.to_be_bytes());
                    code.extend_from_slice(&[0, 0]);
                }
                Insn::Raw(bytes) => code.extend_from_slice(bytes),
            }
        }
        let mut body = Vec::new();
        body.extend_from_slice(&64u16.to_be_bytes());
        body.extend_from_slice(&64u16.to_be_bytes());
        body.extend_from_slice(&(code.len() as u32).to_be_bytes());
        let end = code.len() as u16;
        body.extend_from_slice(&code);
        body.extend_from_slice(&(catch_types.len() as u16).to_be_bytes());
        for c in catch_types {
            let i = self.class(c);
            for v in [0, end, 0, i] {
                body.extend_from_slice(&v.to_be_bytes());
            }
        }
        body.extend_from_slice(&0u16.to_be_bytes());
        self.attribute("Code", &body)
    }

    fn write(mut self, cb: &ClassBuilder) -> Vec<u8> {
        let this = self.class(&cb.name);
        let sup = cb.super_name.as_deref().map_or(0, |s| self.class(s));
        let interfaces: Vec<u16> = cb.interfaces.iter().map(|i| self.class(i)).collect();

        let mut body = Vec::new();
        body.extend_from_slice(&cb.access.to_be_bytes());
        body.extend_from_slice(&this.to_be_bytes());
        body.extend_from_slice(&sup.to_be_bytes());
        body.extend_from_slice(&(interfaces.len() as u16).to_be_bytes());
        for i in interfaces {
            body.extend_from_slice(&i.to_be_bytes());
        }

        body.extend_from_slice(&(cb.fields.len() as u16).to_be_bytes());
        for f in &cb.fields {
            let mut attrs = Vec::new();
            self.annotations_attr(&f.annotations, &mut attrs);
            self.member_info(&mut body, f.access, &f.name, &f.descriptor, attrs);
        }
        body.extend_from_slice(&(cb.methods.len() as u16).to_be_bytes());
        for m in &cb.methods {
            let mut attrs = Vec::new();
            if let Some(code) = &m.code {
                attrs.push(self.code(code, &m.catch_types));
            }
            if !m.exceptions.is_empty() {
                let mut e = (m.exceptions.len() as u16).to_be_bytes().to_vec();
                for x in &m.exceptions {
                    let i = self.class(x);
                    e.extend_from_slice(&i.to_be_bytes());
                }
                attrs.push(self.attribute("Exceptions", &e));
            }
            self.annotations_attr(&m.annotations, &mut attrs);
            self.parameter_annotations_attr(&m.parameter_annotations, &mut attrs);
            self.member_info(&mut body, m.access, &m.name, &m.descriptor, attrs);
        }

        let mut attrs = Vec::new();
        self.annotations_attr(&cb.annotations, &mut attrs);
        if let Some(n) = &cb.nested {
            let inner = self.class(&cb.name);
            let outer = self.class(&n.outer);
            let simple = self.utf8(&n.simple_name);
            let mut b = 1u16.to_be_bytes().to_vec();
            for v in [inner, outer, simple, n.access] {
                b.extend_from_slice(&v.to_be_bytes());
            }
            attrs.push(self.attribute("InnerClasses", &b));
        }
        if !self.bootstraps.is_empty() {
            let table = std::mem::take(&mut self.bootstraps);
            let mut b = (table.len() as u16).to_be_bytes().to_vec();
            for (m, args) in &table {
                b.extend_from_slice(&m.to_be_bytes());
                b.extend_from_slice(&(args.len() as u16).to_be_bytes());
                for a in args {
                    b.extend_from_slice(&a.to_be_bytes());
                }
            }
            attrs.push(self.attribute("BootstrapMethods", &b));
        }
        body.extend_from_slice(&(attrs.len() as u16).to_be_bytes());
        for a in attrs {
            body.extend_from_slice(&a);
        }

        let mut out = Vec::with_capacity(body.len() + self.pool.len() + 10);
        out.extend_from_slice(&MAGIC.to_be_bytes());
        out.extend_from_slice(&0u16.to_be_bytes());
        out.extend_from_slice(&cb.major_version.to_be_bytes());
        out.extend_from_slice(&self.next.max(1).to_be_bytes());
        out.extend_from_slice(&self.pool);
        out.extend_from_slice(&body);
        out
    }

    fn member_info(
        &mut self,
        body: &mut Vec<u8>,
        access: u16,
        name: &str,
        desc: &str,
        attrs: Vec<Vec<u8>>,
    ) {
        let n = self.utf8(name);
        let d = self.utf8(desc);
        for v in [access, n, d, attrs.len() as u16] {
            body.extend_from_slice(&v.to_be_bytes());
        }
        for a in attrs {
            body.extend_from_slice(&a);
        }
    }
}

fn tagged(tag: u8, operands: &[u16]) -> Vec<u8> {
    let mut b = vec![tag];
    for o in operands {
        b.extend_from_slice(&o.to_be_bytes());
    }
    b
}

fn ldc(code: &mut Vec<u8>, index: u16) {
    if index <= 0xFF {
        code.extend_from_slice(&[LDC, index as u8]);
    } else {
        code.push(LDC_W);
        code.extend_from_slice(&index.to_be_bytes());
    }
}
