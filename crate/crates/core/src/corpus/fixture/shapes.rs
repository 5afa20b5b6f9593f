//! Built-in corpora: the worked usage table, the core-index shapes, the
//! unused-dependency corpus and the three-library acceptance corpus.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classfile::{Site, TypeKind};
use crate::corpus::{Ga, Gav, Scope};

use super::{ClassSpec, ClientSpec, CorpusSpec, DependencySpec, LibrarySpec, TypeSpec, UseSpec};

pub const BUILTIN_NAMES: &[&str] = &[
    "worked-table",
    "slf4j-shape",
    "junit-shape",
    "hibernate-shape",
    "javax-inject-shape",
    "unused",
    "acceptance",
];

pub fn builtin(name: &str) -> Option<CorpusSpec> {
    Some(match name {
        "worked-table" => worked_table(),
        "slf4j-shape" => SLF4J.spec(),
        "junit-shape" => JUNIT.spec(),
        "hibernate-shape" => HIBERNATE.spec(),
        "javax-inject-shape" => JAVAX_INJECT.spec(),
        "unused" => unused_corpus().spec,
        "acceptance" => acceptance_corpus(),
        _ => return None,
    })
}

fn lib(gav: &str, types: Vec<TypeSpec>) -> LibrarySpec {
    LibrarySpec {
        gav: gav.parse().expect("builtin coordinates"),
        types,
    }
}

fn dep(gav: &str, scope: Scope) -> DependencySpec {
    DependencySpec {
        gav: gav.to_owned(),
        scope,
        optional: false,
    }
}

fn client(gav: &str, dependencies: Vec<DependencySpec>, classes: Vec<ClassSpec>) -> ClientSpec {
    ClientSpec {
        gav: gav.parse().expect("builtin coordinates"),
        dependencies,
        classes,
        corrupt: Default::default(),
    }
}

fn class(name: &str, uses: Vec<UseSpec>) -> ClassSpec {
    ClassSpec {
        name: name.to_owned(),
        uses,
    }
}

pub const LOGGER: &str = "org/slf4j/Logger";
pub const LOGGER_FACTORY: &str = "org/slf4j/LoggerFactory";
pub const INFO: &str = "info(Ljava/lang/String;)V";
pub const ERROR: &str = "error(Ljava/lang/String;Ljava/lang/Throwable;)V";
pub const GET_LOGGER: &str = "getLogger(Ljava/lang/Class;)Lorg/slf4j/Logger;";
pub const NONNULL: &str = "javax/annotation/Nonnull";
pub const NULLABLE: &str = "javax/annotation/Nullable";
pub const GUARDED_BY: &str = "javax/annotation/concurrent/GuardedBy";
pub const CLUSTER_ENTRYPOINT: &str = "org/apache/flink/runtime/entrypoint/ClusterEntrypoint";

fn logger_type() -> TypeSpec {
    TypeSpec::new(LOGGER, TypeKind::Interface).with_members(&[
        INFO,
        ERROR,
        "debug(Ljava/lang/String;)V",
        "isDebugEnabled()Z",
        "getName()Ljava/lang/String;",
    ])
}

fn logger_factory_type() -> TypeSpec {
    TypeSpec::new(LOGGER_FACTORY, TypeKind::Class).with_members(&[
        &format!("static {GET_LOGGER}"),
        "static getLogger(Ljava/lang/String;)Lorg/slf4j/Logger;",
        "static getILoggerFactory()Lorg/slf4j/ILoggerFactory;",
        "private <init>()V",
    ])
}

/// The usage table of the ClusterEntrypoint example, plus a client that
/// declares jsr305 without referencing it.
pub fn worked_table() -> CorpusSpec {
    let slf4j = lib(
        "org.slf4j:slf4j-api:1.7.21",
        vec![
            logger_type(),
            logger_factory_type(),
            TypeSpec::new("org/slf4j/ILoggerFactory", TypeKind::Interface)
                .with_members(&["getLogger(Ljava/lang/String;)Lorg/slf4j/Logger;"]),
            TypeSpec::new("org/slf4j/Marker", TypeKind::Interface)
                .with_members(&["getName()Ljava/lang/String;"]),
        ],
    );
    let jsr305 = lib(
        "com.google.code.findbugs:jsr305:1.3.9",
        vec![
            TypeSpec::new(NONNULL, TypeKind::Annotation),
            TypeSpec::new(NULLABLE, TypeKind::Annotation),
            TypeSpec::new(GUARDED_BY, TypeKind::Annotation)
                .with_members(&["value()Ljava/lang/String;"]),
            TypeSpec::new("javax/annotation/CheckForNull", TypeKind::Annotation),
        ],
    );
    let flink_core = lib(
        "org.apache.flink:flink-core:1.5.0",
        vec![
            TypeSpec::new(
                "org/apache/flink/util/AutoCloseableAsync",
                TypeKind::Interface,
            )
            .with_members(&["closeAsync()Ljava/util/concurrent/CompletableFuture;"]),
            TypeSpec::new(
                "org/apache/flink/runtime/rpc/FatalErrorHandler",
                TypeKind::Interface,
            )
            .with_members(&["onFatalError(Ljava/lang/Throwable;)V"]),
        ],
    );
    let flink_runtime = client(
        "org.apache.flink:flink-runtime:1.5.0",
        vec![
            dep("org.slf4j:slf4j-api:1.7.21", Scope::Compile),
            dep("com.google.code.findbugs:jsr305:1.3.9", Scope::Compile),
            dep("org.apache.flink:flink-core:1.5.0", Scope::Compile),
            dep("junit:junit:4.12", Scope::Test),
        ],
        vec![class(
            CLUSTER_ENTRYPOINT,
            vec![
                UseSpec::type_use("org/apache/flink/util/AutoCloseableAsync", 1)
                    .at(Site::Interface),
                UseSpec::type_use("org/apache/flink/runtime/rpc/FatalErrorHandler", 1)
                    .at(Site::Interface),
                UseSpec::type_use(LOGGER, 1),
                UseSpec::member_use(LOGGER_FACTORY, GET_LOGGER, 1),
                UseSpec::member_use(LOGGER, INFO, 6),
                UseSpec::member_use(LOGGER, ERROR, 2),
                UseSpec::type_use(NONNULL, 1).at(Site::Annotation),
                UseSpec::type_use(NULLABLE, 2).at(Site::Annotation),
                UseSpec::type_use(GUARDED_BY, 9).at(Site::Annotation),
            ],
        )],
    );
    let payneteasy = client(
        "com.payneteasy:http-client:1.0",
        vec![
            dep("org.slf4j:slf4j-api:1.7.21", Scope::Compile),
            dep("com.google.code.findbugs:jsr305:1.3.9", Scope::Compile),
        ],
        vec![class(
            "com/payneteasy/http/client/HttpClient",
            vec![
                UseSpec::type_use(LOGGER, 1),
                UseSpec::member_use(LOGGER_FACTORY, GET_LOGGER, 1),
                UseSpec::member_use(LOGGER, "debug(Ljava/lang/String;)V", 3),
            ],
        )],
    );
    CorpusSpec {
        seed: 1,
        libraries: vec![slf4j, jsr305, flink_core],
        clients: vec![flink_runtime, payneteasy],
    }
}

/// A library whose clients split into core-only, mixed and non-core-only
/// groups, with every core type used by more clients than any non-core
/// type so that least-used-first hiding removes all non-core types first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreShape {
    pub name: &'static str,
    pub library: &'static str,
    /// Types used by at least one client.
    pub used_types: usize,
    /// Surface types nobody uses.
    pub unused_types: usize,
    pub core: usize,
    pub core_only: usize,
    pub mixed: usize,
    pub non_core_only: usize,
    /// Core-index of the construction.
    pub expected_h: u32,
}

pub const SLF4J: CoreShape = CoreShape {
    name: "slf4j",
    library: "org.slf4j:slf4j-api:1.7.21",
    used_types: 37,
    unused_types: 1,
    core: 2,
    core_only: 188,
    mixed: 11,
    non_core_only: 1,
    expected_h: 94,
};

pub const JUNIT: CoreShape = CoreShape {
    name: "junit",
    library: "junit:junit:4.12",
    used_types: 281,
    unused_types: 0,
    core: 47,
    core_only: 415,
    mixed: 81,
    non_core_only: 4,
    expected_h: 83,
};

pub const HIBERNATE: CoreShape = CoreShape {
    name: "hibernate",
    library: "org.hibernate:hibernate-core:5.2.10.Final",
    used_types: 519,
    unused_types: 0,
    core: 114,
    core_only: 78,
    mixed: 19,
    non_core_only: 3,
    expected_h: 78,
};

pub const JAVAX_INJECT: CoreShape = CoreShape {
    name: "javax-inject",
    library: "javax.inject:javax.inject:1",
    used_types: 6,
    unused_types: 0,
    core: 2,
    core_only: 49,
    mixed: 31,
    non_core_only: 20,
    expected_h: 50,
};

pub const SHAPES: [CoreShape; 4] = [SLF4J, JUNIT, HIBERNATE, JAVAX_INJECT];

const SLF4J_TYPES: &[(&str, TypeKind)] = &[
    ("org/slf4j/ILoggerFactory", TypeKind::Interface),
    ("org/slf4j/IMarkerFactory", TypeKind::Interface),
    ("org/slf4j/MDC", TypeKind::Class),
    ("org/slf4j/MDC$MDCCloseable", TypeKind::Class),
    ("org/slf4j/Marker", TypeKind::Interface),
    ("org/slf4j/MarkerFactory", TypeKind::Class),
    ("org/slf4j/event/EventConstants", TypeKind::Class),
    ("org/slf4j/event/EventRecodingLogger", TypeKind::Class),
    ("org/slf4j/event/Level", TypeKind::Class),
    ("org/slf4j/event/LoggingEvent", TypeKind::Interface),
    ("org/slf4j/event/SubstituteLoggingEvent", TypeKind::Class),
    ("org/slf4j/helpers/BasicMDCAdapter", TypeKind::Class),
    ("org/slf4j/helpers/BasicMarker", TypeKind::Class),
    ("org/slf4j/helpers/BasicMarkerFactory", TypeKind::Class),
    ("org/slf4j/helpers/FormattingTuple", TypeKind::Class),
    ("org/slf4j/helpers/MarkerIgnoringBase", TypeKind::Class),
    ("org/slf4j/helpers/MessageFormatter", TypeKind::Class),
    ("org/slf4j/helpers/NOPLogger", TypeKind::Class),
    ("org/slf4j/helpers/NOPLoggerFactory", TypeKind::Class),
    ("org/slf4j/helpers/NOPMDCAdapter", TypeKind::Class),
    ("org/slf4j/helpers/NamedLoggerBase", TypeKind::Class),
    ("org/slf4j/helpers/SubstituteLogger", TypeKind::Class),
    ("org/slf4j/helpers/SubstituteLoggerFactory", TypeKind::Class),
    ("org/slf4j/helpers/Util", TypeKind::Class),
    ("org/slf4j/impl/StaticLoggerBinder", TypeKind::Class),
    ("org/slf4j/impl/StaticMDCBinder", TypeKind::Class),
    ("org/slf4j/impl/StaticMarkerBinder", TypeKind::Class),
    ("org/slf4j/spi/LocationAwareLogger", TypeKind::Interface),
    ("org/slf4j/spi/LoggerFactoryBinder", TypeKind::Interface),
    ("org/slf4j/spi/MDCAdapter", TypeKind::Interface),
    ("org/slf4j/spi/MarkerFactoryBinder", TypeKind::Interface),
    ("org/slf4j/ext/EventLogger", TypeKind::Class),
    ("org/slf4j/ext/LoggerWrapper", TypeKind::Class),
    ("org/slf4j/ext/XLogger", TypeKind::Class),
    ("org/slf4j/ext/XLoggerFactory", TypeKind::Class),
    // nobody uses this one
    ("org/slf4j/ext/EventData", TypeKind::Class),
];

const INJECT_TYPES: &[(&str, TypeKind)] = &[
    ("javax/inject/Inject", TypeKind::Annotation),
    ("javax/inject/Named", TypeKind::Annotation),
    ("javax/inject/Provider", TypeKind::Interface),
    ("javax/inject/Qualifier", TypeKind::Annotation),
    ("javax/inject/Scope", TypeKind::Annotation),
    ("javax/inject/Singleton", TypeKind::Annotation),
];

impl CoreShape {
    pub fn clients(&self) -> usize {
        self.core_only + self.mixed + self.non_core_only
    }

    pub fn gav(&self) -> Gav {
        self.library.parse().expect("builtin coordinates")
    }

    /// Surface types: core first, then non-core, then unused.
    pub fn types(&self) -> Vec<TypeSpec> {
        let total = self.used_types + self.unused_types;
        let named: Vec<(String, TypeKind)> = match self.name {
            "slf4j" => [
                (LOGGER, TypeKind::Interface),
                (LOGGER_FACTORY, TypeKind::Class),
            ]
            .iter()
            .chain(SLF4J_TYPES)
            .map(|(n, k)| (n.to_string(), *k))
            .collect(),
            "javax-inject" => INJECT_TYPES
                .iter()
                .map(|(n, k)| (n.to_string(), *k))
                .collect(),
            _ => {
                let base = self.gav().group.replace('.', "/");
                (0..total)
                    .map(|i| {
                        let role = if i < self.core { "core" } else { "ext" };
                        (format!("{base}/{role}/T{i:04}"), TypeKind::Class)
                    })
                    .collect()
            }
        };
        assert_eq!(named.len(), total, "{} type list", self.name);
        named
            .into_iter()
            .map(|(name, kind)| {
                let t = match name.as_str() {
                    LOGGER => logger_type(),
                    LOGGER_FACTORY => logger_factory_type(),
                    _ => match kind {
                        TypeKind::Annotation => TypeSpec::new(&name, kind),
                        _ => TypeSpec::new(&name, kind)
                            .with_members(&["describe()Ljava/lang/String;"]),
                    },
                };
                match name.split_once('$') {
                    Some((outer, _)) => TypeSpec {
                        outer: Some(outer.to_owned()),
                        ..t
                    },
                    None => t,
                }
            })
            .collect()
    }

    /// Type indices used by each client, in client order: core-only, then
    /// mixed, then non-core-only.
    pub fn client_types(&self) -> Vec<BTreeSet<usize>> {
        let k = self.core;
        let nk = self.used_types - k;
        let noncore_users = self.mixed + self.non_core_only;
        let mut out = Vec::with_capacity(self.clients());
        for i in 0..self.core_only {
            let mut s = BTreeSet::from([i % k]);
            s.extend((0..k).filter(|t| t % self.core_only == i));
            out.push(s);
        }
        for j in 0..noncore_users {
            let mut s: BTreeSet<usize> = BTreeSet::from([k + j % nk]);
            s.extend((0..nk).filter(|t| t % noncore_users == j).map(|t| k + t));
            if j < self.mixed {
                s.extend(0..k);
            }
            out.push(s);
        }
        out
    }

    pub fn client_gav(&self, i: usize) -> Gav {
        Gav::new(
            format!("com.example.{}users", self.name.replace('-', "")),
            format!("client{i:03}"),
            "1.0",
        )
    }

    pub fn spec(&self) -> CorpusSpec {
        let types = self.types();
        let clients = self
            .client_types()
            .into_iter()
            .enumerate()
            .map(|(i, used)| {
                let uses = used
                    .into_iter()
                    .map(|t| shape_use(&types[t], i + t))
                    .collect();
                let gav = self.client_gav(i);
                let class_name = format!("{}/Main", gav.group.replace('.', "/"));
                let class_name = format!("{class_name}{i:03}");
                ClientSpec {
                    gav,
                    dependencies: vec![dep(self.library, Scope::Compile)],
                    classes: vec![class(&class_name, uses)],
                    corrupt: Default::default(),
                }
            })
            .collect();
        CorpusSpec {
            seed: 7,
            libraries: vec![LibrarySpec {
                gav: self.gav(),
                types,
            }],
            clients,
        }
    }
}

/// Varies site and count by a per-edge salt.
fn shape_use(t: &TypeSpec, salt: usize) -> UseSpec {
    let count = 1 + (salt % 3) as u32;
    if t.kind == TypeKind::Annotation {
        return UseSpec::type_use(&t.name, count).at(Site::Annotation);
    }
    match (salt % 2, t.members.first()) {
        (0, Some(m)) => {
            let m = super::parse_member(m).expect("builtin member").member;
            UseSpec::member_use(&t.name, m.to_string(), count)
        }
        _ => UseSpec::type_use(&t.name, count),
    }
}

pub struct UnusedCorpus {
    pub spec: CorpusSpec,
    /// (client, library) declarations constructed to have no reference.
    pub unused: BTreeSet<(Gav, Ga)>,
    /// Compile, provided and runtime declarations.
    pub declarations: usize,
}

pub const UNUSED_CLIENTS: usize = 10;
pub const UNUSED_DECLARATIONS_PER_CLIENT: usize = 20;
/// 43.5% of 200.
pub const UNUSED_TOTAL: usize = 87;

/// Ten clients each declaring the same twenty libraries, with 87 of the
/// 200 declarations never referenced. Each client also declares a
/// test-scope library it does not use.
pub fn unused_corpus() -> UnusedCorpus {
    let libs: Vec<Gav> = (0..UNUSED_DECLARATIONS_PER_CLIENT)
        .map(|i| Gav::new("org.unused", format!("lib{i:02}"), "1.0"))
        .collect();
    let testkit = Gav::new("org.unused", "testkit", "1.0");
    let api = |g: &Gav| format!("org/unused/{}/Api", g.artifact);
    let mut libraries: Vec<LibrarySpec> =
        libs.iter()
            .chain([&testkit])
            .map(|g| LibrarySpec {
                gav: g.clone(),
                types: vec![TypeSpec::new(api(g), TypeKind::Class)
                    .with_members(&["static call()V", "value:I"])],
            })
            .collect();
    libraries.sort_by(|a, b| a.gav.cmp(&b.gav));

    let mut rng = ChaCha8Rng::seed_from_u64(435);
    let mut unused = BTreeSet::new();
    let mut clients = Vec::new();
    let base = UNUSED_TOTAL / UNUSED_CLIENTS;
    let extra = UNUSED_TOTAL % UNUSED_CLIENTS;
    let scopes = [
        Scope::Compile,
        Scope::Compile,
        Scope::Provided,
        Scope::Runtime,
    ];
    for c in 0..UNUSED_CLIENTS {
        let gav = Gav::new("com.example.bloated", format!("app{c:02}"), "2.1");
        let mut order: Vec<usize> = (0..libs.len()).collect();
        order.shuffle(&mut rng);
        let n_unused = base + usize::from(c < extra);
        let skipped: BTreeSet<usize> = order[..n_unused].iter().copied().collect();
        let mut deps: Vec<DependencySpec> = libs
            .iter()
            .enumerate()
            .map(|(i, g)| DependencySpec::new(g, scopes[(i + c) % scopes.len()]))
            .collect();
        deps.push(DependencySpec::new(&testkit, Scope::Test));
        let mut uses = Vec::new();
        for (i, g) in libs.iter().enumerate() {
            if skipped.contains(&i) {
                unused.insert((gav.clone(), g.ga()));
            } else if (i + c) % 2 == 0 {
                uses.push(UseSpec::member_use(api(g), "call()V", 1 + (i % 2) as u32));
            } else {
                uses.push(UseSpec::member_use(api(g), "value:I", 1));
            }
        }
        clients.push(ClientSpec {
            gav: gav.clone(),
            dependencies: deps,
            classes: vec![class(&format!("com/example/bloated/app{c:02}/Main"), uses)],
            corrupt: Default::default(),
        });
    }
    UnusedCorpus {
        spec: CorpusSpec {
            seed: 43,
            libraries,
            clients,
        },
        unused,
        declarations: UNUSED_CLIENTS * UNUSED_DECLARATIONS_PER_CLIENT,
    }
}

pub const MATRIX_LIBRARY: &str = "org.fixture:matrix:1.0";
pub const MATRIX_TYPES: [&str; 6] = [
    "org/fixture/matrix/Alpha",
    "org/fixture/matrix/Beta",
    "org/fixture/matrix/Delta",
    "org/fixture/matrix/Epsilon",
    "org/fixture/matrix/Gamma",
    "org/fixture/matrix/impl/Zeta",
];
pub const ACCEPTANCE_CLIENTS: usize = 20;

/// Reference counts of each acceptance client (rows) to each matrix type
/// (columns, in [`MATRIX_TYPES`] order).
pub fn acceptance_matrix() -> [[u32; 6]; ACCEPTANCE_CLIENTS] {
    let mut m = [[0; 6]; ACCEPTANCE_CLIENTS];
    for (c, row) in m.iter_mut().enumerate() {
        for (t, w) in row.iter_mut().enumerate() {
            *w = ((c * 7 + t * 3 + c * t) % 6).saturating_sub(2) as u32;
        }
    }
    m
}

pub fn acceptance_client(c: usize) -> Gav {
    Gav::new("org.fixture.clients", format!("app{c:02}"), "1.0")
}

/// Three libraries (one in two versions) and twenty clients. Matrix is
/// used per [`acceptance_matrix`]; util clients split between versions;
/// facade is declared by five clients and used by none.
pub fn acceptance_corpus() -> CorpusSpec {
    let matrix_types = vec![
        TypeSpec::new(MATRIX_TYPES[0], TypeKind::Class).with_members(&[
            "<init>()V",
            "static of(I)Lorg/fixture/matrix/Alpha;",
            "size()I",
        ]),
        TypeSpec::new(MATRIX_TYPES[1], TypeKind::Interface)
            .with_members(&["apply(Ljava/lang/Object;)Ljava/lang/Object;"]),
        TypeSpec::new(MATRIX_TYPES[2], TypeKind::Annotation),
        TypeSpec::new(MATRIX_TYPES[3], TypeKind::Class)
            .with_members(&["protected limit:J", "static MAX:J"]),
        TypeSpec {
            uses: vec![MATRIX_TYPES[0].to_owned()],
            ..TypeSpec::new(MATRIX_TYPES[4], TypeKind::Class).with_members(&["gamma(DI)D"])
        },
        TypeSpec {
            uses: vec![MATRIX_TYPES[0].to_owned(), MATRIX_TYPES[1].to_owned()],
            ..TypeSpec::new(MATRIX_TYPES[5], TypeKind::Class).with_members(&["run()V"])
        },
        TypeSpec {
            visibility: crate::classfile::Visibility::Package,
            ..TypeSpec::new("org/fixture/matrix/impl/Hidden", TypeKind::Class)
                .with_members(&["run()V"])
        },
    ];
    let util_types = |v2: bool| {
        let mut t = vec![
            TypeSpec::new("org/fixture/util/Strings", TypeKind::Class)
                .with_members(&["static join([Ljava/lang/String;)Ljava/lang/String;"]),
            TypeSpec::new("org/fixture/util/Lists", TypeKind::Class)
                .with_members(&["static empty()Ljava/util/List;"]),
        ];
        if v2 {
            t.push(
                TypeSpec::new("org/fixture/util/Maps", TypeKind::Class)
                    .with_members(&["static empty()Ljava/util/Map;"]),
            );
        }
        t
    };
    let libraries = vec![
        lib(MATRIX_LIBRARY, matrix_types),
        lib("org.fixture:util:1.0", util_types(false)),
        lib("org.fixture:util:2.0", util_types(true)),
        lib(
            "org.fixture:facade:1.0",
            vec![
                TypeSpec::new("org/fixture/facade/Facade", TypeKind::Interface)
                    .with_members(&["get()Ljava/lang/Object;"]),
            ],
        ),
    ];
    let matrix = acceptance_matrix();
    let members: [Option<&str>; 6] = [
        Some("size()I"),
        Some("apply(Ljava/lang/Object;)Ljava/lang/Object;"),
        None,
        Some("limit:J"),
        Some("gamma(DI)D"),
        Some("run()V"),
    ];
    let clients = (0..ACCEPTANCE_CLIENTS)
        .map(|c| {
            let gav = acceptance_client(c);
            let util = if c % 2 == 0 {
                "org.fixture:util:2.0"
            } else {
                "org.fixture:util:1.0"
            };
            let mut deps = vec![
                dep(MATRIX_LIBRARY, Scope::Compile),
                dep(util, Scope::Compile),
            ];
            if c < 5 {
                deps.push(dep("org.fixture:facade:1.0", Scope::Compile));
            }
            deps.push(dep("junit:junit:4.12", Scope::Test));
            let mut main = Vec::new();
            for (t, &w) in matrix[c].iter().enumerate() {
                if w == 0 {
                    continue;
                }
                let u = match members[t] {
                    None => UseSpec::type_use(MATRIX_TYPES[t], w).at(Site::Annotation),
                    Some(m) if (c + t) % 2 == 0 => UseSpec::member_use(MATRIX_TYPES[t], m, w),
                    Some(_) => UseSpec::type_use(MATRIX_TYPES[t], w),
                };
                main.push(u);
            }
            let mut helper = Vec::new();
            if c % 3 != 0 {
                helper.push(UseSpec {
                    library: Some(util.parse().expect("builtin coordinates")),
                    ..UseSpec::member_use(
                        "org/fixture/util/Strings",
                        "join([Ljava/lang/String;)Ljava/lang/String;",
                        (c % 4 + 1) as u32,
                    )
                });
            }
            if c % 4 == 0 {
                helper.push(UseSpec::member_use(
                    "org/fixture/util/Maps",
                    "empty()Ljava/util/Map;",
                    1,
                ));
            }
            let base = format!("org/fixture/app{c:02}");
            ClientSpec {
                gav,
                dependencies: deps,
                classes: vec![
                    class(&format!("{base}/Main"), main),
                    class(&format!("{base}/Helper"), helper),
                ],
                corrupt: Default::default(),
            }
        })
        .collect();
    CorpusSpec {
        seed: 2024,
        libraries,
        clients,
    }
}
