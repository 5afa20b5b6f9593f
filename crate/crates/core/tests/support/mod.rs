#![allow(dead_code)]

pub mod classes;
pub mod oracle;

use std::collections::BTreeMap;

use depusage_core::corpus::fixture::{build_corpus, CorpusSpec, GeneratedCorpus, Role};
use depusage_core::corpus::{ArtifactArchive, Gav};
use depusage_core::usage::{extract_api_surface, extract_usages, ApiSurface, UsageRecord};

pub fn surfaces(corpus: &GeneratedCorpus) -> BTreeMap<Gav, ApiSurface> {
    corpus
        .artifacts
        .iter()
        .filter(|a| a.role == Role::Library)
        .map(|a| {
            let archive = ArtifactArchive::from_bytes(a.jar.clone()).unwrap();
            (a.gav.clone(), extract_api_surface(&archive).unwrap())
        })
        .collect()
}

/// Extracts every healthy client against the surfaces of the libraries it
/// declares (declared versions first), then all remaining libraries.
pub fn extract_all(spec: &CorpusSpec) -> (GeneratedCorpus, Vec<UsageRecord>) {
    let corpus = build_corpus(spec).unwrap();
    let surfaces = surfaces(&corpus);
    let mut out = Vec::new();
    for (a, c) in corpus
        .artifacts
        .iter()
        .filter(|a| a.role == Role::Client)
        .zip(&spec.clients)
    {
        let Ok(archive) = ArtifactArchive::from_bytes(a.jar.clone()) else {
            continue;
        };
        let declared: Vec<Gav> = c
            .dependencies
            .iter()
            .filter_map(|d| d.gav.parse().ok())
            .collect();
        let mut ordered: Vec<ApiSurface> = declared
            .iter()
            .filter_map(|g| surfaces.get(g).cloned())
            .collect();
        ordered.extend(
            surfaces
                .values()
                .filter(|s| !declared.contains(&s.library))
                .cloned(),
        );
        out.extend(extract_usages(&archive, &ordered).unwrap().records);
    }
    out.sort();
    (corpus, out)
}

/// Runs unused-dependency detection over every client of `spec` using its
/// generated pom and extracted records. Returns the (client, library)
/// pairs reported unused and the number of test-scope findings.
pub fn detect_all_unused(
    spec: &CorpusSpec,
) -> (
    std::collections::BTreeSet<(Gav, depusage_core::corpus::Ga)>,
    usize,
) {
    use depusage_core::corpus::{parse_pom, Scope};
    use depusage_core::metrics::{detect_unused, DependencyStatus, UnusedOptions};
    let (corpus, records) = extract_all(spec);
    let mut unused = std::collections::BTreeSet::new();
    let mut test_scope = 0;
    for a in corpus.artifacts.iter().filter(|a| a.role == Role::Client) {
        let declared = parse_pom(a.pom.as_bytes()).unwrap();
        let own: Vec<UsageRecord> = records
            .iter()
            .filter(|r| r.client == a.gav)
            .cloned()
            .collect();
        for f in detect_unused(&declared, &own, UnusedOptions::default()) {
            if f.dependency.scope == Scope::Test {
                test_scope += 1;
            }
            if f.status == DependencyStatus::Unused {
                unused.insert((a.gav.clone(), f.dependency.ga));
            }
        }
    }
    (unused, test_scope)
}
