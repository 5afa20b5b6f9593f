//! Hand-built class files, an enumerable descriptor grammar and a byte
//! mutator for fuzzing.

use depusage_core::classfile::builder::{
    AnnotationSpec, BootstrapArg, ClassBuilder, FieldSpec, Handle, Insn, MethodSpec,
};
use depusage_core::classfile::descriptor::FieldType;
use depusage_core::classfile::opcodes::*;
use depusage_core::classfile::AccessFlags;
use depusage_core::corpus::fixture::shapes::{
    CLUSTER_ENTRYPOINT, ERROR, GET_LOGGER, GUARDED_BY, INFO, LOGGER, LOGGER_FACTORY, NONNULL,
    NULLABLE,
};
use rand::{Rng, RngCore};

pub const LOGGER_DESC: &str = "Lorg/slf4j/Logger;";
pub const METAFACTORY_DESC: &str = "(Ljava/lang/invoke/MethodHandles$Lookup;Ljava/lang/String;Ljava/lang/invoke/MethodType;Ljava/lang/invoke/MethodType;Ljava/lang/invoke/MethodHandle;Ljava/lang/invoke/MethodType;)Ljava/lang/invoke/CallSite;";

fn split(member: &str) -> (&str, &str) {
    let i = member.find('(').unwrap();
    (&member[..i], &member[i..])
}

fn call(op: u8, owner: &str, member: &str, interface: bool) -> Insn {
    let (name, descriptor) = split(member);
    Insn::Invoke {
        op,
        owner: owner.into(),
        name: name.into(),
        descriptor: descriptor.into(),
        interface,
    }
}

fn get_log() -> Insn {
    Insn::Field {
        op: GETSTATIC,
        owner: CLUSTER_ENTRYPOINT.into(),
        name: "LOG".into(),
        descriptor: LOGGER_DESC.into(),
    }
}

/// The flink-runtime class behind the slf4j/jsr305 usage table, built by
/// hand: one Logger field, one getLogger call, six info and two error
/// calls, a lambda, one @Nonnull, two @Nullable and nine @GuardedBy.
pub fn cluster_entrypoint() -> Vec<u8> {
    let mut start = Vec::new();
    for i in 0..6 {
        start.push(get_log());
        start.push(Insn::LdcString(format!("starting step {i}")));
        start.push(call(INVOKEINTERFACE, LOGGER, INFO, true));
    }
    for _ in 0..2 {
        start.push(get_log());
        start.push(Insn::LdcString("failed".into()));
        start.push(Insn::Op(ACONST_NULL));
        start.push(call(INVOKEINTERFACE, LOGGER, ERROR, true));
    }
    start.push(Insn::InvokeDynamic {
        bootstrap: Handle::invoke_static(
            "java/lang/invoke/LambdaMetafactory",
            "metafactory",
            METAFACTORY_DESC,
        ),
        args: vec![
            BootstrapArg::MethodType("()V".into()),
            BootstrapArg::Handle(Handle::invoke_static(
                CLUSTER_ENTRYPOINT,
                "lambda$startCluster$0",
                "()V",
            )),
            BootstrapArg::MethodType("()V".into()),
        ],
        name: "run".into(),
        descriptor: "()Ljava/lang/Runnable;".into(),
    });
    start.push(Insn::Op(POP));
    start.push(Insn::Op(RETURN));

    let clinit = vec![
        Insn::LdcClass(CLUSTER_ENTRYPOINT.into()),
        call(INVOKESTATIC, LOGGER_FACTORY, GET_LOGGER, false),
        Insn::Field {
            op: PUTSTATIC,
            owner: CLUSTER_ENTRYPOINT.into(),
            name: "LOG".into(),
            descriptor: LOGGER_DESC.into(),
        },
        Insn::Op(RETURN),
    ];

    let mut shutdown = MethodSpec::new(
        AccessFlags::PROTECTED,
        "shutDownAsync",
        "(Ljava/lang/String;Ljava/lang/Throwable;)V",
    )
    .with_code(vec![Insn::Op(RETURN)]);
    shutdown.parameter_annotations = vec![
        vec![AnnotationSpec::invisible(NULLABLE)],
        vec![AnnotationSpec::invisible(NULLABLE)],
    ];

    let mut cb = ClassBuilder::new(CLUSTER_ENTRYPOINT)
        .access(AccessFlags::PUBLIC | AccessFlags::ABSTRACT | AccessFlags::SUPER)
        .implements("org/apache/flink/util/AutoCloseableAsync")
        .implements("org/apache/flink/runtime/rpc/FatalErrorHandler")
        .field(FieldSpec::new(
            AccessFlags::PROTECTED | AccessFlags::STATIC | AccessFlags::FINAL,
            "LOG",
            LOGGER_DESC,
        ))
        .method(MethodSpec::new(AccessFlags::STATIC, "<clinit>", "()V").with_code(clinit))
        .method(MethodSpec::new(AccessFlags::PUBLIC, "startCluster", "()V").with_code(start))
        .method(
            MethodSpec::new(
                AccessFlags::PUBLIC,
                "getTerminationFuture",
                "()Ljava/lang/Object;",
            )
            .annotated(AnnotationSpec::invisible(NONNULL))
            .with_code(vec![Insn::Op(ACONST_NULL), Insn::Op(ARETURN)]),
        )
        .method(shutdown)
        .method(
            MethodSpec::new(
                AccessFlags::PRIVATE | AccessFlags::STATIC | AccessFlags::SYNTHETIC,
                "lambda$startCluster$0",
                "()V",
            )
            .with_code(vec![Insn::Op(RETURN)]),
        );
    for i in 0..9 {
        cb = cb.field(
            FieldSpec::new(
                AccessFlags::PRIVATE,
                format!("guarded{i}"),
                "Ljava/lang/Object;",
            )
            .annotated(AnnotationSpec::invisible(GUARDED_BY)),
        );
    }
    cb.to_bytes()
}

/// A handful of structurally varied classes to seed mutation.
pub fn seed_classes() -> Vec<Vec<u8>> {
    vec![
        cluster_entrypoint(),
        ClassBuilder::new("a/Empty").to_bytes(),
        ClassBuilder::new("a/Iface")
            .access(AccessFlags::PUBLIC | AccessFlags::INTERFACE | AccessFlags::ABSTRACT)
            .method(MethodSpec::new(
                AccessFlags::PUBLIC | AccessFlags::ABSTRACT,
                "apply",
                "([[JLa/B;)[La/C;",
            ))
            .to_bytes(),
        ClassBuilder::new("a/Codes")
            .method(
                MethodSpec {
                    catch_types: vec!["java/io/IOException".into()],
                    ..MethodSpec::new(AccessFlags::PUBLIC, "m", "()V")
                }
                .with_code(vec![
                    Insn::Type {
                        op: NEW,
                        class: "a/B".into(),
                    },
                    Insn::Op(POP),
                    Insn::Op(ACONST_NULL),
                    Insn::Type {
                        op: INSTANCEOF,
                        class: "a/C".into(),
                    },
                    Insn::Op(POP),
                    Insn::Op(RETURN),
                ]),
            )
            .to_bytes(),
    ]
}

const OBJECTS: [&str; 3] = ["java/lang/String", "a/B", "X"];
const PRIMITIVES: [FieldType; 8] = [
    FieldType::Byte,
    FieldType::Char,
    FieldType::Double,
    FieldType::Float,
    FieldType::Int,
    FieldType::Long,
    FieldType::Short,
    FieldType::Boolean,
];

/// Every field type over the small alphabet with up to `max_dims` array
/// dimensions.
pub fn field_types(max_dims: usize) -> Vec<FieldType> {
    let mut base: Vec<FieldType> = PRIMITIVES.to_vec();
    base.extend(OBJECTS.iter().map(|o| FieldType::Object(o.to_string())));
    let mut out = Vec::new();
    for b in base {
        let mut t = b;
        for _ in 0..=max_dims {
            out.push(t.clone());
            t = FieldType::Array(Box::new(t));
        }
    }
    out
}

/// Grammar-driven enumeration: every field descriptor plus every method
/// descriptor with at most `max_params` parameters.
pub fn all_descriptors(max_dims: usize, max_params: usize) -> Vec<String> {
    let fields: Vec<String> = field_types(max_dims)
        .iter()
        .map(|t| t.to_string())
        .collect();
    let mut returns = vec!["V".to_owned()];
    returns.extend(fields.iter().cloned());
    let mut lists = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_params {
        frontier = frontier
            .iter()
            .flat_map(|p| fields.iter().map(move |f| format!("{p}{f}")))
            .collect();
        lists.extend(frontier.iter().cloned());
    }
    let mut out = fields.clone();
    for p in &lists {
        for r in &returns {
            out.push(format!("({p}){r}"));
        }
    }
    out
}

/// Applies 1 to 4 random edits: bit flips, byte overwrites, inserts,
/// deletions, truncation, or a u16 set to an extreme value.
pub fn mutate(seed: &[u8], rng: &mut impl RngCore) -> Vec<u8> {
    let mut b = seed.to_vec();
    for _ in 0..rng.gen_range(1..=4) {
        if b.is_empty() {
            b.push(rng.gen());
            continue;
        }
        let i = rng.gen_range(0..b.len());
        match rng.gen_range(0..6) {
            0 => b[i] ^= 1 << rng.gen_range(0..8),
            1 => b[i] = rng.gen(),
            2 => b.insert(i, rng.gen()),
            3 => {
                b.remove(i);
            }
            4 => b.truncate(i),
            _ => {
                let v: u16 = if rng.gen() { 0xffff } else { 0 };
                b[i] = (v >> 8) as u8;
                if i + 1 < b.len() {
                    b[i + 1] = v as u8;
                }
            }
        }
    }
    b
}
