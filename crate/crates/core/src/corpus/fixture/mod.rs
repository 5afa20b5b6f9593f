//! Declarative fixture corpora.
//!
//! A [`CorpusSpec`] lists libraries (types and members) and clients (classes
//! with counted uses of library types and members). The generator writes
//! jars and poms whose extracted usages equal [`expected_usages`] exactly.
//! See the repository README for the TOML format.

pub mod shapes;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classfile::builder::{
    AnnotationSpec, BootstrapArg, ClassBuilder, FieldSpec, Handle, Insn, MethodSpec, NestedSpec,
};
use crate::classfile::descriptor::{parse_method_descriptor, FieldType, ReturnType};
use crate::classfile::opcodes::*;
use crate::classfile::{AccessFlags, MemberKind, MemberRef, Site, TypeKind, Visibility};
use crate::usage::UsageRecord;

use super::{
    locate, manifest_entry, pom_properties_entry, write_jar, write_pom, DeclaredDependency, Ga,
    Gav, Scope,
};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture spec syntax: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("invalid fixture spec: {0}")]
    SpecInvalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn invalid(msg: impl Into<String>) -> FixtureError {
    FixtureError::SpecInvalid(msg.into())
}

fn is_default<T: Default + PartialEq>(t: &T) -> bool {
    *t == T::default()
}

fn default_kind() -> TypeKind {
    TypeKind::Class
}

fn is_class(k: &TypeKind) -> bool {
    *k == TypeKind::Class
}

fn public() -> Visibility {
    Visibility::Public
}

fn is_public(v: &Visibility) -> bool {
    *v == Visibility::Public
}

fn one() -> u32 {
    1
}

fn is_one(n: &u32) -> bool {
    *n == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, rename = "library", skip_serializing_if = "Vec::is_empty")]
    pub libraries: Vec<LibrarySpec>,
    #[serde(default, rename = "client", skip_serializing_if = "Vec::is_empty")]
    pub clients: Vec<ClientSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LibrarySpec {
    pub gav: Gav,
    #[serde(default, rename = "type", skip_serializing_if = "Vec::is_empty")]
    pub types: Vec<TypeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeSpec {
    pub name: String,
    #[serde(default = "default_kind", skip_serializing_if = "is_class")]
    pub kind: TypeKind,
    #[serde(default = "public", skip_serializing_if = "is_public")]
    pub visibility: Visibility,
    /// Enclosing type for nested types.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<String>,
    /// `[visibility ][static ]name(desc)ret` or `[visibility ][static ]name:desc`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<String>,
    /// Other types of the same library referenced from this type's code.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub uses: Vec<String>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub synthetic: bool,
}

impl TypeSpec {
    pub fn new(name: impl Into<String>, kind: TypeKind) -> Self {
        TypeSpec {
            name: name.into(),
            kind,
            visibility: Visibility::Public,
            outer: None,
            members: Vec::new(),
            uses: Vec::new(),
            synthetic: false,
        }
    }

    pub fn with_members(mut self, members: &[&str]) -> Self {
        self.members.extend(members.iter().map(|m| m.to_string()));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corruption {
    #[default]
    None,
    /// The jar is replaced by bytes that are not a zip archive.
    Archive,
    /// The first class entry is truncated.
    Class,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClientSpec {
    pub gav: Gav,
    #[serde(default, rename = "dependency", skip_serializing_if = "Vec::is_empty")]
    pub dependencies: Vec<DependencySpec>,
    #[serde(default, rename = "class", skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassSpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub corrupt: Corruption,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependencySpec {
    /// `group:artifact[:version]`; the version is kept verbatim.
    pub gav: String,
    #[serde(default, skip_serializing_if = "is_default")]
    pub scope: Scope,
    #[serde(default, skip_serializing_if = "is_default")]
    pub optional: bool,
}

impl DependencySpec {
    pub fn new(gav: &Gav, scope: Scope) -> Self {
        DependencySpec {
            gav: gav.to_string(),
            scope,
            optional: false,
        }
    }

    pub fn declared(&self) -> Result<DeclaredDependency, FixtureError> {
        let mut parts = self.gav.splitn(3, ':');
        let (Some(g), Some(a)) = (parts.next(), parts.next()) else {
            return Err(invalid(format!(
                "dependency {:?} needs group:artifact",
                self.gav
            )));
        };
        if g.is_empty() || a.is_empty() {
            return Err(invalid(format!(
                "dependency {:?} needs group:artifact",
                self.gav
            )));
        }
        Ok(DeclaredDependency {
            ga: Ga::new(g, a),
            version: parts.next().map(str::to_owned),
            scope: self.scope,
            optional: self.optional,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub name: String,
    #[serde(default, rename = "use", skip_serializing_if = "Vec::is_empty")]
    pub uses: Vec<UseSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UseSpec {
    #[serde(rename = "type")]
    pub type_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member: Option<String>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub count: u32,
    /// Defaults to `instruction` for member uses and `field_decl` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site: Option<Site>,
    /// Owning library when the type exists in several.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub library: Option<Gav>,
    /// Allow a member the type does not declare.
    #[serde(default, skip_serializing_if = "is_default")]
    pub unchecked: bool,
}

impl UseSpec {
    pub fn type_use(type_name: impl Into<String>, count: u32) -> Self {
        UseSpec {
            type_name: type_name.into(),
            member: None,
            count,
            site: None,
            library: None,
            unchecked: false,
        }
    }

    pub fn member_use(type_name: impl Into<String>, member: impl Into<String>, count: u32) -> Self {
        UseSpec {
            member: Some(member.into()),
            ..Self::type_use(type_name, count)
        }
    }

    pub fn at(mut self, site: Site) -> Self {
        self.site = Some(site);
        self
    }
}

impl CorpusSpec {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("fixture spec serializes")
    }
}

/// A member parsed from its spec text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberSpec {
    pub visibility: Visibility,
    pub is_static: bool,
    pub member: MemberRef,
}

pub fn parse_member(text: &str) -> Result<MemberSpec, FixtureError> {
    let mut words: Vec<&str> = text.split_whitespace().collect();
    let sig = words.pop().ok_or_else(|| invalid("empty member"))?;
    let mut visibility = Visibility::Public;
    let mut is_static = false;
    for w in words {
        match w {
            "public" => visibility = Visibility::Public,
            "protected" => visibility = Visibility::Protected,
            "package" => visibility = Visibility::Package,
            "private" => visibility = Visibility::Private,
            "static" => is_static = true,
            other => {
                return Err(invalid(format!(
                    "unknown member modifier {other:?} in {text:?}"
                )))
            }
        }
    }
    let member: MemberRef = sig
        .parse()
        .map_err(|_| invalid(format!("bad member {text:?}")))?;
    if member.kind == MemberKind::Constructor && is_static {
        return Err(invalid(format!("static constructor {text:?}")));
    }
    Ok(MemberSpec {
        visibility,
        is_static,
        member,
    })
}

fn visibility_flag(v: Visibility) -> u16 {
    match v {
        Visibility::Public => AccessFlags::PUBLIC,
        Visibility::Protected => AccessFlags::PROTECTED,
        Visibility::Private => AccessFlags::PRIVATE,
        Visibility::Package => 0,
    }
}

/// Library types indexed for lookup during generation.
struct Catalog<'a> {
    /// type name -> libraries declaring it, in spec order
    owners: BTreeMap<&'a str, Vec<usize>>,
    types: Vec<BTreeMap<&'a str, (&'a TypeSpec, Vec<MemberSpec>)>>,
}

impl<'a> Catalog<'a> {
    fn new(spec: &'a CorpusSpec) -> Result<Self, FixtureError> {
        let mut owners: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        let mut types = Vec::new();
        for (i, lib) in spec.libraries.iter().enumerate() {
            let mut map = BTreeMap::new();
            for t in &lib.types {
                if !crate::classfile::descriptor::is_internal_name(&t.name) {
                    return Err(invalid(format!("bad type name {:?}", t.name)));
                }
                let members = t
                    .members
                    .iter()
                    .map(|m| parse_member(m))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut keys = BTreeSet::new();
                for m in &members {
                    if !keys.insert(m.member.key()) {
                        return Err(invalid(format!(
                            "{}: duplicate member {}",
                            t.name, m.member
                        )));
                    }
                }
                if map.insert(t.name.as_str(), (t, members)).is_some() {
                    return Err(invalid(format!("{}: duplicate type {}", lib.gav, t.name)));
                }
                owners.entry(t.name.as_str()).or_default().push(i);
            }
            types.push(map);
        }
        Ok(Catalog { owners, types })
    }

    /// The library owning a client's use of `u`.
    fn resolve(
        &self,
        spec: &CorpusSpec,
        client: &ClientSpec,
        u: &UseSpec,
    ) -> Result<usize, FixtureError> {
        let candidates = self
            .owners
            .get(u.type_name.as_str())
            .ok_or_else(|| invalid(format!("{}: undeclared type {}", client.gav, u.type_name)))?;
        if let Some(lib) = &u.library {
            return candidates
                .iter()
                .copied()
                .find(|&i| &spec.libraries[i].gav == lib)
                .ok_or_else(|| {
                    invalid(format!(
                        "{}: {} is not declared by {lib}",
                        client.gav, u.type_name
                    ))
                });
        }
        if let [only] = candidates[..] {
            return Ok(only);
        }
        let declared: BTreeSet<&str> = client.dependencies.iter().map(|d| d.gav.as_str()).collect();
        let mut hits = candidates
            .iter()
            .copied()
            .filter(|&i| declared.contains(spec.libraries[i].gav.to_string().as_str()));
        match (hits.next(), hits.next()) {
            (Some(i), None) => Ok(i),
            _ => Err(invalid(format!(
                "{}: ambiguous library for {}",
                client.gav, u.type_name
            ))),
        }
    }
}

fn type_in_surface(t: &TypeSpec) -> bool {
    !t.synthetic
        && match t.outer {
            Some(_) => t.visibility.is_api(),
            None => t.visibility == Visibility::Public,
        }
}

fn library_class(
    t: &TypeSpec,
    members: &[MemberSpec],
    lib: &BTreeMap<&str, (&TypeSpec, Vec<MemberSpec>)>,
) -> Result<ClassBuilder, FixtureError> {
    let vis = visibility_flag(t.visibility);
    let kind_flags = match t.kind {
        TypeKind::Class => AccessFlags::SUPER,
        TypeKind::Interface => AccessFlags::INTERFACE | AccessFlags::ABSTRACT,
        TypeKind::Annotation => {
            AccessFlags::INTERFACE | AccessFlags::ABSTRACT | AccessFlags::ANNOTATION
        }
    };
    let synthetic = if t.synthetic {
        AccessFlags::SYNTHETIC
    } else {
        0
    };
    let top_vis = match (&t.outer, t.visibility) {
        (None, Visibility::Public) => AccessFlags::PUBLIC,
        (None, Visibility::Package) => 0,
        (None, v) => {
            return Err(invalid(format!(
                "top-level type {} cannot be {v:?}",
                t.name
            )))
        }
        (Some(_), v) if v.is_api() => AccessFlags::PUBLIC,
        (Some(_), _) => 0,
    };
    let mut class = ClassBuilder::new(&t.name).access(top_vis | kind_flags | synthetic);
    if t.kind == TypeKind::Annotation {
        class = class.implements("java/lang/annotation/Annotation");
    }
    if let Some(outer) = &t.outer {
        let simple = t.name.rsplit(['$', '/']).next().unwrap_or(&t.name);
        class.nested = Some(NestedSpec {
            outer: outer.clone(),
            simple_name: simple.to_owned(),
            access: vis | AccessFlags::STATIC | (kind_flags & !AccessFlags::SUPER) | synthetic,
        });
    }
    let throw = vec![Insn::Op(ACONST_NULL), Insn::Op(ATHROW)];
    for m in members {
        let access =
            visibility_flag(m.visibility) | if m.is_static { AccessFlags::STATIC } else { 0 };
        match m.member.kind {
            MemberKind::Field => {
                let extra = if t.kind == TypeKind::Class {
                    0
                } else {
                    AccessFlags::STATIC | AccessFlags::FINAL
                };
                class = class.field(FieldSpec::new(
                    access | extra,
                    &m.member.name,
                    &m.member.descriptor,
                ));
            }
            _ => {
                let mut method = MethodSpec::new(access, &m.member.name, &m.member.descriptor);
                if t.kind != TypeKind::Class && !m.is_static {
                    method.access |= AccessFlags::ABSTRACT;
                } else {
                    method.code = Some(throw.clone());
                }
                class = class.method(method);
            }
        }
    }
    if !t.uses.is_empty() {
        let mut code = Vec::new();
        for u in &t.uses {
            if !lib.contains_key(u.as_str()) {
                return Err(invalid(format!(
                    "{}: uses {u}, which its library does not declare",
                    t.name
                )));
            }
            code.push(Insn::LdcClass(u.clone()));
            code.push(Insn::Op(POP));
        }
        code.push(Insn::Op(RETURN));
        class = class.method(
            MethodSpec::new(AccessFlags::PRIVATE | AccessFlags::STATIC, "uses$", "()V")
                .with_code(code),
        );
    }
    Ok(class)
}

fn push_default(code: &mut Vec<Insn>, t: &FieldType) {
    code.push(Insn::Op(match t {
        FieldType::Object(_) | FieldType::Array(_) => ACONST_NULL,
        FieldType::Long => LCONST_0,
        FieldType::Float => FCONST_0,
        FieldType::Double => DCONST_0,
        _ => ICONST_0,
    }));
}

fn pop_value(code: &mut Vec<Insn>, t: &FieldType) {
    code.push(Insn::Op(if t.slots() == 2 { POP2 } else { POP }));
}

/// Bytecode for one occurrence of a member reference.
fn member_snippet(owner: &TypeSpec, m: &MemberRef, is_static: bool) -> Vec<Insn> {
    let interface = owner.kind != TypeKind::Class;
    let mut code = Vec::new();
    match m.kind {
        MemberKind::Field => {
            let op = if is_static {
                GETSTATIC
            } else {
                code.push(Insn::Op(ACONST_NULL));
                GETFIELD
            };
            code.push(Insn::Field {
                op,
                owner: owner.name.clone(),
                name: m.name.clone(),
                descriptor: m.descriptor.clone(),
            });
            if let Ok(t) = crate::classfile::descriptor::parse_field_descriptor(&m.descriptor) {
                pop_value(&mut code, &t);
            }
        }
        kind => {
            let desc = parse_method_descriptor(&m.descriptor).expect("member text was validated");
            if !is_static {
                code.push(Insn::Op(ACONST_NULL));
            }
            for p in &desc.params {
                push_default(&mut code, p);
            }
            let op = match (kind, is_static) {
                (MemberKind::Constructor, _) => INVOKESPECIAL,
                (_, true) => INVOKESTATIC,
                _ if interface => INVOKEINTERFACE,
                _ => INVOKEVIRTUAL,
            };
            code.push(Insn::Invoke {
                op,
                owner: owner.name.clone(),
                name: m.name.clone(),
                descriptor: m.descriptor.clone(),
                interface,
            });
            if let ReturnType::Value(t) = &desc.ret {
                pop_value(&mut code, t);
            }
        }
    }
    code
}

fn client_class(
    spec: &CorpusSpec,
    catalog: &Catalog<'_>,
    client: &ClientSpec,
    class: &ClassSpec,
    rng: &mut ChaCha8Rng,
) -> Result<ClassBuilder, FixtureError> {
    if !crate::classfile::descriptor::is_internal_name(&class.name) {
        return Err(invalid(format!("bad class name {:?}", class.name)));
    }
    if catalog.owners.contains_key(class.name.as_str()) {
        return Err(invalid(format!(
            "client class {} shadows a library type",
            class.name
        )));
    }
    let mut builder = ClassBuilder::new(&class.name);
    let mut snippets: Vec<Vec<Insn>> = Vec::new();
    let mut supertype_set = false;
    let mut next = 0usize;
    let mut fresh = |prefix: &str| {
        next += 1;
        format!("{prefix}{next}")
    };
    for u in &class.uses {
        if u.count == 0 {
            return Err(invalid(format!(
                "{}: use of {} has count 0",
                class.name, u.type_name
            )));
        }
        let lib = catalog.resolve(spec, client, u)?;
        let (t, members) = &catalog.types[lib][u.type_name.as_str()];
        let k = u.count as usize;
        let object = format!("L{};", t.name);
        match &u.member {
            Some(text) => {
                let m: MemberRef = text
                    .parse()
                    .map_err(|_| invalid(format!("{}: bad member {text:?}", class.name)))?;
                let declared = members.iter().find(|d| d.member.key() == m.key());
                if declared.is_none() && !u.unchecked {
                    return Err(invalid(format!(
                        "{}: undeclared member {}.{m}",
                        client.gav, t.name
                    )));
                }
                let is_static = declared.is_some_and(|d| d.is_static);
                match u.site.unwrap_or(Site::Instruction) {
                    Site::Instruction => {
                        let snippet = member_snippet(t, &m, is_static);
                        snippets.extend(std::iter::repeat_n(snippet, k));
                    }
                    Site::Bootstrap => {
                        if m.kind != MemberKind::Method || !is_static {
                            return Err(invalid(format!(
                                "{}: bootstrap use of {m} needs a static method",
                                class.name
                            )));
                        }
                        let handle = Handle {
                            interface: t.kind != TypeKind::Class,
                            ..Handle::invoke_static(&t.name, &m.name, &m.descriptor)
                        };
                        let snippet = vec![
                            Insn::InvokeDynamic {
                                bootstrap: handle,
                                args: Vec::<BootstrapArg>::new(),
                                name: "apply".into(),
                                descriptor: "()Ljava/lang/Object;".into(),
                            },
                            Insn::Op(POP),
                        ];
                        snippets.extend(std::iter::repeat_n(snippet, k));
                    }
                    other => {
                        return Err(invalid(format!(
                            "{}: member use at site {other}",
                            class.name
                        )))
                    }
                }
            }
            None => match u.site.unwrap_or(Site::FieldDecl) {
                Site::FieldDecl => {
                    for _ in 0..k {
                        builder = builder.field(FieldSpec::new(
                            AccessFlags::PRIVATE,
                            fresh("f"),
                            &object,
                        ));
                    }
                }
                Site::MethodSignature => {
                    for _ in 0..k {
                        let m = MethodSpec::new(
                            AccessFlags::PRIVATE | AccessFlags::STATIC,
                            fresh("m"),
                            format!("({object})V"),
                        )
                        .with_code(vec![Insn::Op(RETURN)]);
                        builder = builder.method(m);
                    }
                }
                Site::Annotation => {
                    if t.kind != TypeKind::Annotation {
                        return Err(invalid(format!(
                            "{}: {} is not an annotation",
                            class.name, t.name
                        )));
                    }
                    for _ in 0..k {
                        let f = FieldSpec::new(AccessFlags::PRIVATE, fresh("a"), "I")
                            .annotated(AnnotationSpec::visible(&t.name));
                        builder = builder.field(f);
                    }
                }
                Site::Supertype => {
                    if k != 1 || supertype_set || t.kind != TypeKind::Class {
                        return Err(invalid(format!(
                            "{}: one class supertype allowed",
                            class.name
                        )));
                    }
                    supertype_set = true;
                    builder = builder.extends(Some(&t.name));
                }
                Site::Interface => {
                    if k != 1 || t.kind == TypeKind::Class || builder.interfaces.contains(&t.name) {
                        return Err(invalid(format!(
                            "{}: interface {} listed twice or not an interface",
                            class.name, t.name
                        )));
                    }
                    builder = builder.implements(&t.name);
                }
                Site::Instruction => {
                    let snippet = vec![
                        Insn::Op(ACONST_NULL),
                        Insn::Type {
                            op: CHECKCAST,
                            class: t.name.clone(),
                        },
                        Insn::Op(POP),
                    ];
                    snippets.extend(std::iter::repeat_n(snippet, k));
                }
                Site::Bootstrap => {
                    return Err(invalid(format!(
                        "{}: bootstrap use needs a member",
                        class.name
                    )))
                }
            },
        }
    }
    if !snippets.is_empty() {
        snippets.shuffle(rng);
        let mut code: Vec<Insn> = snippets.into_iter().flatten().collect();
        code.push(Insn::Op(RETURN));
        builder = builder.method(
            MethodSpec::new(AccessFlags::PUBLIC | AccessFlags::STATIC, "exercise", "()V")
                .with_code(code),
        );
    }
    Ok(builder)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Library,
    Client,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedArtifact {
    pub gav: Gav,
    pub role: Role,
    pub jar: Vec<u8>,
    pub pom: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedCorpus {
    pub artifacts: Vec<GeneratedArtifact>,
    pub expected: Vec<UsageRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FixtureManifest {
    pub libraries: Vec<Gav>,
    pub clients: Vec<Gav>,
}

impl FixtureManifest {
    pub const FILE_NAME: &'static str = "fixture-manifest.tsv";

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.libraries {
            out.push_str(&format!("library\t{g}\n"));
        }
        for g in &self.clients {
            out.push_str(&format!("client\t{g}\n"));
        }
        out
    }
}

fn artifact_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn jar_bytes(
    gav: &Gav,
    classes: Vec<(String, Vec<u8>)>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u8>, FixtureError> {
    let mut classes = classes;
    classes.shuffle(rng);
    let mut entries = vec![manifest_entry(), pom_properties_entry(gav)];
    entries.extend(classes);
    write_jar(&entries).map_err(|source| FixtureError::Io {
        path: PathBuf::from(gav.to_string()),
        source,
    })
}

fn check_unique(spec: &CorpusSpec) -> Result<(), FixtureError> {
    let mut seen = BTreeSet::new();
    for gav in spec
        .libraries
        .iter()
        .map(|l| &l.gav)
        .chain(spec.clients.iter().map(|c| &c.gav))
    {
        if !seen.insert(gav) {
            return Err(invalid(format!("{gav} listed twice")));
        }
    }
    Ok(())
}

/// Builds every artifact in memory.
pub fn build_corpus(spec: &CorpusSpec) -> Result<GeneratedCorpus, FixtureError> {
    check_unique(spec)?;
    let catalog = Catalog::new(spec)?;
    let mut artifacts = Vec::new();
    for (i, lib) in spec.libraries.iter().enumerate() {
        let mut rng = artifact_rng(spec.seed, i);
        let mut classes = Vec::new();
        for t in &lib.types {
            let (_, members) = &catalog.types[i][t.name.as_str()];
            let bytes = library_class(t, members, &catalog.types[i])?.to_bytes();
            classes.push((format!("{}.class", t.name), bytes));
        }
        artifacts.push(GeneratedArtifact {
            gav: lib.gav.clone(),
            role: Role::Library,
            jar: jar_bytes(&lib.gav, classes, &mut rng)?,
            pom: write_pom(&lib.gav, &[]),
        });
    }
    for (j, client) in spec.clients.iter().enumerate() {
        let mut rng = artifact_rng(spec.seed, spec.libraries.len() + j);
        let mut classes = Vec::new();
        let mut names = BTreeSet::new();
        for class in &client.classes {
            if !names.insert(&class.name) {
                return Err(invalid(format!(
                    "{}: duplicate class {}",
                    client.gav, class.name
                )));
            }
            let bytes = client_class(spec, &catalog, client, class, &mut rng)?.to_bytes();
            classes.push((format!("{}.class", class.name), bytes));
        }
        if client.corrupt == Corruption::Class {
            let first = classes
                .first_mut()
                .ok_or_else(|| invalid(format!("{}: no class to corrupt", client.gav)))?;
            let half = first.1.len() / 2;
            first.1.truncate(half);
        }
        let deps = client
            .dependencies
            .iter()
            .map(DependencySpec::declared)
            .collect::<Result<Vec<_>, _>>()?;
        let jar = match client.corrupt {
            Corruption::Archive => b"this is not a jar archive\n".repeat(4),
            _ => jar_bytes(&client.gav, classes, &mut rng)?,
        };
        artifacts.push(GeneratedArtifact {
            gav: client.gav.clone(),
            role: Role::Client,
            jar,
            pom: write_pom(&client.gav, &deps),
        });
    }
    Ok(GeneratedCorpus {
        artifacts,
        expected: expected_usages(spec)?,
    })
}

/// The usage records extraction must produce for each client when given
/// the surfaces of all spec libraries, computed from the spec alone.
/// Corrupt archives contribute nothing; a corrupt class loses its uses.
pub fn expected_usages(spec: &CorpusSpec) -> Result<Vec<UsageRecord>, FixtureError> {
    let catalog = Catalog::new(spec)?;
    let mut tally: BTreeMap<(Gav, Gav, String, Option<MemberRef>), u64> = BTreeMap::new();
    for client in &spec.clients {
        if client.corrupt == Corruption::Archive {
            continue;
        }
        let skip = usize::from(client.corrupt == Corruption::Class);
        for class in client.classes.iter().skip(skip) {
            for u in &class.uses {
                let lib = catalog.resolve(spec, client, u)?;
                let (t, members) = &catalog.types[lib][u.type_name.as_str()];
                // a library sharing the client's GA is never matched
                if !type_in_surface(t) || client.gav.ga() == spec.libraries[lib].gav.ga() {
                    continue;
                }
                let member = u
                    .member
                    .as_ref()
                    .and_then(|text| text.parse::<MemberRef>().ok())
                    .and_then(|m| {
                        members
                            .iter()
                            .find(|d| d.member.key() == m.key() && d.visibility.is_api())
                            .map(|d| d.member.clone())
                    });
                *tally
                    .entry((
                        client.gav.clone(),
                        spec.libraries[lib].gav.clone(),
                        t.name.clone(),
                        member,
                    ))
                    .or_default() += u64::from(u.count);
            }
        }
    }
    Ok(tally
        .into_iter()
        .map(
            |((client, library, type_name, member), count)| UsageRecord {
                client,
                library,
                type_name,
                member,
                count,
            },
        )
        .collect())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), FixtureError> {
    let io = |source| FixtureError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, bytes).map_err(io)
}

/// Writes the corpus under `out` in repository layout, plus a manifest
/// listing the generated coordinates.
pub fn generate_fixture_corpus(
    spec: &CorpusSpec,
    out: &Path,
) -> Result<FixtureManifest, FixtureError> {
    let corpus = build_corpus(spec)?;
    let mut manifest = FixtureManifest::default();
    for a in &corpus.artifacts {
        let (jar, pom) = locate(&a.gav, out);
        write_file(&jar, &a.jar)?;
        write_file(&pom, a.pom.as_bytes())?;
        match a.role {
            Role::Library => manifest.libraries.push(a.gav.clone()),
            Role::Client => manifest.clients.push(a.gav.clone()),
        }
    }
    write_file(
        &out.join(FixtureManifest::FILE_NAME),
        manifest.to_text().as_bytes(),
    )?;
    Ok(manifest)
}
