mod support;

use std::collections::BTreeMap;

use depusage_core::classfile::builder::{ClassBuilder, MethodSpec};
use depusage_core::classfile::{
    parse_class, scan_references, AccessFlags, Site, TypeKind, Visibility,
};
use depusage_core::corpus::fixture::shapes::{
    self, acceptance_client, acceptance_matrix, worked_table, LOGGER, LOGGER_FACTORY,
    MATRIX_LIBRARY, MATRIX_TYPES,
};
use depusage_core::corpus::fixture::{
    build_corpus, ClassSpec, ClientSpec, CorpusSpec, DependencySpec, LibrarySpec, Role, TypeSpec,
    UseSpec,
};
use depusage_core::corpus::{pom_properties_entry, write_jar, ArtifactArchive, Gav, Scope};
use depusage_core::graph::build_graph;
use depusage_core::usage::{extract_usages, internal_usage, surface_from_classes, ApiSurface};
use depusage_core::BipartiteUsageGraph;
use proptest::prelude::*;

fn library_surface(spec: &CorpusSpec, gav: &Gav) -> ApiSurface {
    support::surfaces(&build_corpus(spec).unwrap())
        .remove(gav)
        .unwrap()
}

fn library_archive(spec: &CorpusSpec, gav: &Gav) -> ArtifactArchive {
    let corpus = build_corpus(spec).unwrap();
    let a = corpus.artifacts.iter().find(|a| &a.gav == gav).unwrap();
    ArtifactArchive::from_bytes(a.jar.clone()).unwrap()
}

fn lib_only(gav: &str, types: Vec<TypeSpec>) -> CorpusSpec {
    CorpusSpec {
        seed: 1,
        libraries: vec![LibrarySpec {
            gav: gav.parse().unwrap(),
            types,
        }],
        clients: Vec::new(),
    }
}

#[test]
fn javax_inject_surface() {
    let shape = shapes::JAVAX_INJECT;
    let s = library_surface(&shape.spec(), &shape.gav());
    let k = s.kind_counts();
    assert_eq!(
        (k.classes, k.interfaces, k.annotations, k.total()),
        (0, 1, 5, 6)
    );
}

#[test]
fn slf4j_surface_has_38_types() {
    let shape = shapes::SLF4J;
    let s = library_surface(&shape.spec(), &shape.gav());
    assert_eq!(s.len(), 38);
    assert!(s.contains("org/slf4j/MDC$MDCCloseable"));
}

#[test]
fn package_private_archive_has_empty_surface() {
    let hidden = |n: &str| TypeSpec {
        visibility: Visibility::Package,
        ..TypeSpec::new(n, TypeKind::Class).with_members(&["run()V"])
    };
    let spec = lib_only(
        "p:hidden:1",
        vec![hidden("p/A"), hidden("p/B"), hidden("p/sub/C")],
    );
    let s = library_surface(&spec, &"p:hidden:1".parse().unwrap());
    assert!(s.is_empty());
    assert!(s.errors.is_empty());
}

#[test]
fn surface_drops_synthetic_and_private_members() {
    let spec = lib_only(
        "p:members:1",
        vec![
            TypeSpec::new("p/A", TypeKind::Class).with_members(&[
                "run()V",
                "protected step(I)V",
                "private secret()V",
                "count:I",
            ]),
            TypeSpec {
                synthetic: true,
                ..TypeSpec::new("p/A$1", TypeKind::Class)
            },
            TypeSpec {
                visibility: Visibility::Protected,
                outer: Some("p/A".into()),
                ..TypeSpec::new("p/A$Inner", TypeKind::Class)
            },
        ],
    );
    let s = library_surface(&spec, &"p:members:1".parse().unwrap());
    let names: Vec<&str> = s.types.keys().map(String::as_str).collect();
    assert_eq!(names, ["p/A", "p/A$Inner"]);
    assert_eq!(s.get("p/A").unwrap().members.len(), 3);
}

fn ten_types(cross: bool) -> CorpusSpec {
    let mut types: Vec<TypeSpec> = (0..10)
        .map(|i| {
            let pkg = if cross && i >= 5 { "q/b" } else { "q/a" };
            TypeSpec::new(format!("{pkg}/T{i}"), TypeKind::Class)
        })
        .collect();
    let a = |i: usize| {
        if cross && i >= 5 {
            format!("q/b/T{i}")
        } else {
            format!("q/a/T{i}")
        }
    };
    // T5 -> T0, T1 and T2 -> T9 cross packages; T3 -> T4 stays inside q/a
    types[5].uses = vec![a(0), a(1)];
    types[2].uses = vec![a(9)];
    types[3].uses = vec![a(4)];
    lib_only("q:lib:1", types)
}

#[test]
fn internal_usage_marks_cross_package_types() {
    let gav: Gav = "q:lib:1".parse().unwrap();
    let spec = ten_types(true);
    let surface = library_surface(&spec, &gav);
    assert_eq!(surface.len(), 10);
    let external = BipartiteUsageGraph::from_edges(
        gav.clone(),
        [(Gav::new("c", "c", "1"), "q/a/T0".to_owned(), 2)],
    );
    let report = internal_usage(&library_archive(&spec, &gav), &surface, &external).unwrap();
    let marked: Vec<&str> = report
        .types
        .iter()
        .filter(|(_, u)| u.used_from_other_packages)
        .map(|(t, _)| t.as_str())
        .collect();
    assert_eq!(marked, ["q/a/T0", "q/a/T1", "q/b/T9"]);
    assert_eq!(report.internal_share(), 0.3);
    assert_eq!(report.cross_tab(), [[7, 0], [2, 1]]);

    let single = ten_types(false);
    let surface = library_surface(&single, &gav);
    let report = internal_usage(
        &library_archive(&single, &gav),
        &surface,
        &BipartiteUsageGraph::empty(gav.clone()),
    )
    .unwrap();
    assert!(report.types.values().all(|u| !u.used_from_other_packages));
    assert_eq!(report.internal_share(), 0.0);
}

fn client_jar(client: &Gav, classes: Vec<(String, Vec<u8>)>) -> ArtifactArchive {
    let mut entries = vec![pom_properties_entry(client)];
    entries.extend(classes);
    ArtifactArchive::from_bytes(write_jar(&entries).unwrap()).unwrap()
}

#[test]
fn zero_references_give_no_records() {
    let shape = shapes::SLF4J;
    let surface = library_surface(&shape.spec(), &shape.gav());
    let client = Gav::new("c", "quiet", "1");
    let archive = client_jar(
        &client,
        vec![(
            "c/Quiet.class".into(),
            ClassBuilder::new("c/Quiet").to_bytes(),
        )],
    );
    assert!(extract_usages(&archive, &[surface])
        .unwrap()
        .records
        .is_empty());
}

#[test]
fn parameter_type_reference_gives_one_record() {
    let shape = shapes::SLF4J;
    let surface = library_surface(&shape.spec(), &shape.gav());
    let client = Gav::new("c", "param", "1");
    let bytes = ClassBuilder::new("c/Param")
        .method(MethodSpec::new(
            AccessFlags::PUBLIC | AccessFlags::ABSTRACT,
            "take",
            "(Lorg/slf4j/Marker;)V",
        ))
        .to_bytes();
    // independent check against the raw references
    let refs = scan_references(&parse_class(&bytes).unwrap());
    assert!(refs.iter().any(|r| r.target_type == "org/slf4j/Marker"
        && r.site == Site::MethodSignature
        && r.count == 1));
    let archive = client_jar(&client, vec![("c/Param.class".into(), bytes)]);
    let records = extract_usages(&archive, &[surface]).unwrap().records;
    assert_eq!(records.len(), 1);
    assert_eq!(
        (
            records[0].type_name.as_str(),
            records[0].member.is_none(),
            records[0].count
        ),
        ("org/slf4j/Marker", true, 1)
    );
}

#[test]
fn library_does_not_use_itself() {
    let shape = shapes::SLF4J;
    let spec = shape.spec();
    let surface = library_surface(&spec, &shape.gav());
    let own = library_archive(&spec, &shape.gav()).with_coordinates(shape.gav());
    assert!(extract_usages(&own, std::slice::from_ref(&surface))
        .unwrap()
        .records
        .is_empty());
    // same GA, other version: still the same library
    let other =
        library_archive(&spec, &shape.gav()).with_coordinates(shape.gav().ga().with_version("9"));
    assert!(extract_usages(&other, &[surface])
        .unwrap()
        .records
        .is_empty());
}

#[test]
fn worked_table_graph_edges() {
    let (corpus, records) = support::extract_all(&worked_table());
    let surfaces = support::surfaces(&corpus);
    let slf4j = Gav::new("org.slf4j", "slf4j-api", "1.7.21");
    let g = build_graph(
        &surfaces[&slf4j],
        &records
            .iter()
            .filter(|r| r.library == slf4j)
            .cloned()
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let flink = Gav::new("org.apache.flink", "flink-runtime", "1.5.0");
    assert_eq!(g.weight(&flink, LOGGER), 9);
    assert_eq!(g.weight(&flink, LOGGER_FACTORY), 1);
}

#[test]
fn acceptance_matrix_round_trips_through_bytecode() {
    let spec = shapes::acceptance_corpus();
    let (corpus, records) = support::extract_all(&spec);
    let matrix: Gav = MATRIX_LIBRARY.parse().unwrap();
    let surfaces = support::surfaces(&corpus);
    let g = build_graph(
        &surfaces[&matrix],
        &records
            .iter()
            .filter(|r| r.library == matrix)
            .cloned()
            .collect::<Vec<_>>(),
    )
    .unwrap();
    for (c, row) in acceptance_matrix().iter().enumerate() {
        for (t, &w) in row.iter().enumerate() {
            assert_eq!(
                g.weight(&acceptance_client(c), MATRIX_TYPES[t]),
                u64::from(w),
                "client {c} type {t}"
            );
        }
    }
    // the package-private type is not part of the surface
    assert_eq!(surfaces[&matrix].len(), 6);
}

#[test]
fn extraction_conserves_reference_counts() {
    let spec = shapes::acceptance_corpus();
    let corpus = build_corpus(&spec).unwrap();
    let surfaces: Vec<ApiSurface> = support::surfaces(&corpus).into_values().collect();
    for a in corpus.artifacts.iter().filter(|a| a.role == Role::Client) {
        let archive = ArtifactArchive::from_bytes(a.jar.clone()).unwrap();
        let records = extract_usages(&archive, &surfaces).unwrap().records;
        let mut expected = 0u64;
        archive
            .for_each_class(|_, bytes| {
                let cf = parse_class(&bytes.unwrap()).unwrap();
                for r in scan_references(&cf) {
                    if surfaces.iter().any(|s| s.contains(&r.target_type)) {
                        expected += u64::from(r.count);
                    }
                }
            })
            .unwrap();
        assert_eq!(
            records.iter().map(|r| r.count).sum::<u64>(),
            expected,
            "{}",
            a.gav
        );
    }
}

fn arbitrary_type(i: usize) -> impl Strategy<Value = TypeSpec> {
    (
        any::<bool>(),
        prop::sample::select(vec![
            TypeKind::Class,
            TypeKind::Interface,
            TypeKind::Annotation,
        ]),
    )
        .prop_map(move |(public, kind)| TypeSpec {
            visibility: if public {
                Visibility::Public
            } else {
                Visibility::Package
            },
            ..TypeSpec::new(format!("m/p{}/T{i}", i % 3), kind)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn adding_a_public_class_keeps_the_surface(types in prop::collection::vec(0usize..1, 1..8).prop_flat_map(|v| {
        (0..v.len()).map(arbitrary_type).collect::<Vec<_>>()
    })) {
        let gav: Gav = "m:lib:1".parse().unwrap();
        let before = library_surface(&lib_only("m:lib:1", types.clone()), &gav);
        let mut more = types;
        more.push(TypeSpec::new("m/extra/Added", TypeKind::Class));
        let after = library_surface(&lib_only("m:lib:1", more), &gav);
        for t in before.types.keys() {
            prop_assert!(after.contains(t));
        }
        prop_assert_eq!(after.len(), before.len() + 1);
    }

    #[test]
    fn graph_weight_equals_record_total(rows in prop::collection::vec((0usize..6, 0usize..6, 1u32..5), 0..30)) {
        let matrix: Gav = MATRIX_LIBRARY.parse().unwrap();
        let empty = surface_from_classes(matrix.clone(), &[]);
        let mut records = Vec::new();
        let mut tally: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (c, t, n) in rows {
            *tally.entry((c, t)).or_default() += u64::from(n);
        }
        for ((c, t), n) in &tally {
            records.push(depusage_core::UsageRecord {
                client: acceptance_client(*c),
                library: matrix.clone(),
                type_name: MATRIX_TYPES[*t].to_owned(),
                member: None,
                count: *n,
            });
        }
        let full = library_surface(&shapes::acceptance_corpus(), &matrix);
        let g = build_graph(&full, &records).unwrap();
        prop_assert_eq!(g.total_weight(), tally.values().sum::<u64>());
        prop_assert!(g.type_nodes().iter().all(|t| full.contains(t)));
        // a type outside the surface is rejected
        prop_assert!(build_graph(&empty, &records).is_err() || records.is_empty());
    }
}

#[test]
fn scoped_spec_builds_clients() {
    // unchecked members fall back to the type
    let lib: Gav = "u:lib:1".parse().unwrap();
    let spec = CorpusSpec {
        seed: 3,
        libraries: vec![LibrarySpec {
            gav: lib.clone(),
            types: vec![TypeSpec::new("u/Api", TypeKind::Class).with_members(&["go()V"])],
        }],
        clients: vec![ClientSpec {
            gav: Gav::new("u", "client", "1"),
            dependencies: vec![DependencySpec::new(&lib, Scope::Compile)],
            classes: vec![ClassSpec {
                name: "u/client/Main".into(),
                uses: vec![
                    UseSpec::member_use("u/Api", "go()V", 2),
                    UseSpec {
                        unchecked: true,
                        ..UseSpec::member_use("u/Api", "gone()V", 3)
                    },
                ],
            }],
            corrupt: Default::default(),
        }],
    };
    let (_, records) = support::extract_all(&spec);
    let counts: Vec<(Option<String>, u64)> = records
        .iter()
        .map(|r| (r.member.as_ref().map(|m| m.to_string()), r.count))
        .collect();
    assert_eq!(counts, [(None, 3), (Some("go()V".into()), 2)]);
}
