mod support;

use std::collections::BTreeSet;

use depusage_core::corpus::fixture::shapes::{self, LOGGER, LOGGER_FACTORY, SHAPES};
use depusage_core::corpus::{DeclaredDependency, Ga, Gav, Scope};
use depusage_core::graph::{build_graph, group_by_lib, GroupOptions};
use depusage_core::metrics::{
    chord_grouping, core_index, core_n, dur, extinction, tur, tur_distribution, MetricError, Order,
};
use depusage_core::usage::UsageRecord;
use depusage_core::BipartiteUsageGraph;
use proptest::prelude::*;

use support::oracle::{check, check_monotone, random_small, Small};

#[test]
fn shapes_reach_their_core_index() {
    for shape in SHAPES {
        let (corpus, records) = support::extract_all(&shape.spec());
        let surfaces = support::surfaces(&corpus);
        let g = build_graph(&surfaces[&shape.gav()], &records).unwrap();
        assert_eq!(g.client_nodes().len(), shape.clients(), "{}", shape.name);
        assert_eq!(g.type_nodes().len(), shape.used_types, "{}", shape.name);
        let index = core_index(&g).unwrap();
        assert_eq!(index.h, shape.expected_h, "{}", shape.name);
        assert!(index.h <= 50 || shape.name != "javax-inject");

        // the balanced shape's two-type core sits one level below h
        let level = if shape.name == "javax-inject" {
            49
        } else {
            shape.expected_h
        };
        let core = core_n(&g, level).unwrap();
        assert_eq!(core.core_types.len(), shape.core, "{}", shape.name);
        let chord = chord_grouping(&g, &core);
        assert_eq!(
            (
                chord.core_only.clients,
                chord.mixed.clients,
                chord.non_core_only.clients
            ),
            (shape.core_only, shape.mixed, shape.non_core_only),
            "{}",
            shape.name
        );
    }
}

#[test]
fn slf4j_core_is_logger_and_factory() {
    let shape = shapes::SLF4J;
    let (corpus, records) = support::extract_all(&shape.spec());
    let g = build_graph(&support::surfaces(&corpus)[&shape.gav()], &records).unwrap();
    let core = core_n(&g, 94).unwrap();
    assert_eq!(
        core.core_types,
        BTreeSet::from([LOGGER.to_owned(), LOGGER_FACTORY.to_owned()])
    );
    assert_eq!(core.types_obs, 37);
    let chord = chord_grouping(&g, &core);
    assert_eq!(chord.core_only.client_share, 0.94);
    assert_eq!(chord.non_core_only.client_share, 0.005);
    assert_eq!(chord.mixed.client_share, 0.055);
}

#[test]
fn junit_chord_shares() {
    let shape = shapes::JUNIT;
    let (corpus, records) = support::extract_all(&shape.spec());
    let g = build_graph(&support::surfaces(&corpus)[&shape.gav()], &records).unwrap();
    let chord = chord_grouping(&g, &core_n(&g, 83).unwrap());
    assert!((chord.core_only.client_share - 0.83).abs() < 0.005);
    assert!((chord.mixed.client_share - 0.16).abs() < 0.005);
    assert!(chord.non_core_only.client_share < 0.01);
}

#[test]
fn javax_inject_core_49() {
    let shape = shapes::JAVAX_INJECT;
    let (corpus, records) = support::extract_all(&shape.spec());
    let g = build_graph(&support::surfaces(&corpus)[&shape.gav()], &records).unwrap();
    let core = core_n(&g, 49).unwrap();
    assert_eq!(
        core.core_types,
        BTreeSet::from([
            "javax/inject/Inject".to_owned(),
            "javax/inject/Named".to_owned()
        ])
    );
    assert!((core.cr_n - 1.0 / 3.0).abs() < 1e-12);
}

fn logger_graph(users: usize, observed: usize) -> BipartiteUsageGraph {
    BipartiteUsageGraph::from_edges(
        Gav::new("org.slf4j", "slf4j-api", "1.7.21"),
        (0..observed).map(|c| {
            let t = if c < users { LOGGER } else { LOGGER_FACTORY };
            (Gav::new("c", format!("c{c:03}"), "1"), t.to_owned(), 1)
        }),
    )
}

#[test]
fn tur_examples() {
    assert_eq!(tur(&logger_graph(94, 100), LOGGER).unwrap(), 0.94);
    assert_eq!(tur(&logger_graph(10, 10), LOGGER).unwrap(), 1.0);
    assert_eq!(tur(&logger_graph(10, 10), "org/slf4j/Marker").unwrap(), 0.0);
    let empty = BipartiteUsageGraph::empty(Gav::new("g", "a", "1"));
    assert!(matches!(
        tur(&empty, LOGGER),
        Err(MetricError::NoObservedClients(_))
    ));
}

fn rec(client: usize, lib: &str) -> UsageRecord {
    UsageRecord {
        client: Gav::new("c", format!("c{client}"), "1"),
        library: lib.parse().unwrap(),
        type_name: "l/T".into(),
        member: None,
        count: 1,
    }
}

#[test]
fn dur_examples() {
    let lib: Gav = "l:l:1".parse().unwrap();
    let decls: Vec<(Gav, DeclaredDependency)> = (0..10)
        .map(|c| {
            (
                Gav::new("c", format!("c{c}"), "1"),
                DeclaredDependency::new(&lib, Scope::Compile),
            )
        })
        .collect();
    let records: Vec<UsageRecord> = (0..6).map(|c| rec(c, "l:l:1")).collect();
    let groups = group_by_lib(&records, &decls, GroupOptions::default());
    assert_eq!(dur(&groups[0]).unwrap().dur, 0.6);

    let all: Vec<UsageRecord> = (0..10).map(|c| rec(c, "l:l:2")).collect();
    let groups = group_by_lib(&all, &decls, GroupOptions::default());
    assert_eq!(dur(&groups[0]).unwrap().dur, 1.0);
    assert_eq!(groups[0].versions.len(), 2);

    let groups = group_by_lib(&[], &decls, GroupOptions::default());
    assert_eq!(dur(&groups[0]).unwrap().dur, 0.0);
}

#[test]
fn oracle_spot_checks() {
    for seed in 0..200 {
        let s = random_small(seed, 8, 8);
        check(&s).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        check_monotone(&s, seed, 20).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

fn small() -> impl Strategy<Value = Small> {
    (1usize..=12, 1usize..=12)
        .prop_flat_map(|(types, clients)| {
            prop::collection::vec(prop::collection::btree_set(0..types, 0..=types), clients)
                .prop_map(move |clients| Small { types, clients })
        })
        .prop_filter("needs one edge", |s| {
            s.clients.iter().any(|c| !c.is_empty())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn metrics_match_oracle(s in small()) {
        prop_assert_eq!(check(&s), Ok(()));
    }

    #[test]
    fn served_is_monotone(s in small(), seed in any::<u64>()) {
        prop_assert_eq!(check_monotone(&s, seed, 10), Ok(()));
    }

    #[test]
    fn rates_are_fractions(s in small()) {
        let g = s.graph();
        for t in g.type_nodes() {
            let r = tur(&g, t).unwrap();
            prop_assert!(r > 0.0 && r <= 1.0);
        }
        let surface = depusage_core::usage::surface_from_classes(g.library.clone(), &[]);
        prop_assert!(tur_distribution(&g, &surface).unwrap().is_empty());
        let records: Vec<UsageRecord> = g
            .edges()
            .map(|(c, t, w)| UsageRecord { client: c.clone(), library: g.library.clone(), type_name: t.to_owned(), member: None, count: w })
            .collect();
        let decls: Vec<(Gav, DeclaredDependency)> = s
            .clients
            .iter()
            .enumerate()
            .map(|(c, _)| (Gav::new("oracle", format!("c{c:02}"), "1"), DeclaredDependency::new(&g.library, Scope::Compile)))
            .collect();
        let group = &group_by_lib(&records, &decls, GroupOptions::default())[0];
        let d = dur(group).unwrap();
        prop_assert!(d.dur > 0.0 && d.dur <= 1.0);
        prop_assert_eq!(d.observed, s.observed().len());
        prop_assert_eq!(group.ga.clone(), Ga::new("oracle", "lib"));
    }

    #[test]
    fn cores_nest_and_bound_h(s in small()) {
        let g = s.graph();
        let cores: Vec<_> = (1..=100).map(|n| core_n(&g, n).unwrap()).collect();
        for w in cores.windows(2) {
            prop_assert!(w[0].core_types.is_subset(&w[1].core_types));
        }
        prop_assert_eq!(cores[99].cr_n, 1.0);
        prop_assert_eq!(&cores[99].core_types, g.type_nodes());
        let index = core_index(&g).unwrap();
        let h = index.h;
        if h > 0 {
            prop_assert!(cores[h as usize - 1].cr_n <= f64::from(100 - h) / 100.0);
        }
        if h < 100 {
            let t = g.type_nodes().len();
            let f_next = (100 * index.hidden[&(h + 1)] / t) as u32;
            prop_assert!((h + 1).min(f_next) <= h);
        }
    }

    #[test]
    fn curves_have_one_step_per_type(s in small()) {
        let g = s.graph();
        for order in [Order::LeastUsedFirst, Order::MostUsedFirst] {
            let c = extinction(&g, order).unwrap();
            prop_assert_eq!(c.steps.len(), g.type_nodes().len() + 1);
            prop_assert_eq!(c.clients, s.observed().len());
        }
    }
}
