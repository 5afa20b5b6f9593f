//! Per-library bipartite usage graphs and LIB/CLIENT grouping.

mod group;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use crate::corpus::Gav;
use crate::usage::{ApiSurface, UsageRecord};

pub use group::{group_by_lib, most_popular_version, GroupOptions, LibGroup, PopularVersion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("record for {found} (type {type_name}) does not belong to {expected}")]
    ForeignRecord {
        expected: Gav,
        found: Gav,
        type_name: String,
    },
}

/// Clients x used API types of one library version, weighted by summed
/// reference counts. Only nodes with at least one edge are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteUsageGraph {
    pub library: Gav,
    edges: BTreeMap<(Gav, String), u64>,
    clients: BTreeSet<Gav>,
    types: BTreeSet<String>,
}

impl BipartiteUsageGraph {
    pub fn empty(library: Gav) -> Self {
        BipartiteUsageGraph {
            library,
            edges: BTreeMap::new(),
            clients: BTreeSet::new(),
            types: BTreeSet::new(),
        }
    }

    /// Builds a graph directly from weighted edges; zero weights are dropped
    /// and repeated edges are summed.
    pub fn from_edges(library: Gav, edges: impl IntoIterator<Item = (Gav, String, u64)>) -> Self {
        let mut g = Self::empty(library);
        for (client, type_name, w) in edges {
            g.add(client, type_name, w);
        }
        g
    }

    fn add(&mut self, client: Gav, type_name: String, w: u64) {
        if w == 0 {
            return;
        }
        self.clients.insert(client.clone());
        self.types.insert(type_name.clone());
        *self.edges.entry((client, type_name)).or_default() += w;
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn client_nodes(&self) -> &BTreeSet<Gav> {
        &self.clients
    }

    /// types_obs of the library.
    pub fn type_nodes(&self) -> &BTreeSet<String> {
        &self.types
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Gav, &str, u64)> {
        self.edges.iter().map(|((c, t), w)| (c, t.as_str(), *w))
    }

    pub fn weight(&self, client: &Gav, type_name: &str) -> u64 {
        self.edges
            .get(&(client.clone(), type_name.to_owned()))
            .copied()
            .unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Distinct clients using each type (users_obs(type)).
    pub fn users_per_type(&self) -> BTreeMap<&str, usize> {
        let mut out: BTreeMap<&str, usize> = self.types.iter().map(|t| (t.as_str(), 0)).collect();
        for (_, t) in self.edges.keys() {
            *out.get_mut(t.as_str()).expect("edge type is a node") += 1;
        }
        out
    }

    /// Types used by each client.
    pub fn types_per_client(&self) -> BTreeMap<&Gav, BTreeSet<&str>> {
        let mut out: BTreeMap<&Gav, BTreeSet<&str>> = BTreeMap::new();
        for (c, t) in self.edges.keys() {
            out.entry(c).or_default().insert(t.as_str());
        }
        out
    }

    /// Adjacency export, one `client<TAB>library<TAB>type<TAB>-<TAB>weight`
    /// line per edge.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for ((c, t), w) in &self.edges {
            let _ = writeln!(out, "{c}\t{}\t{t}\t-\t{w}", self.library);
        }
        out
    }
}

/// Folds member-level records onto their owning type. Every record must
/// belong to the surface's library and name one of its types.
pub fn build_graph(
    surface: &ApiSurface,
    records: &[UsageRecord],
) -> Result<BipartiteUsageGraph, GraphError> {
    let mut g = BipartiteUsageGraph::empty(surface.library.clone());
    for r in records {
        if r.library != surface.library || !surface.contains(&r.type_name) {
            return Err(GraphError::ForeignRecord {
                expected: surface.library.clone(),
                found: r.library.clone(),
                type_name: r.type_name.clone(),
            });
        }
        g.add(r.client.clone(), r.type_name.clone(), r.count);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classfile::MemberRef;
    use crate::usage::ApiType;

    fn surface(lib: &Gav, types: &[&str]) -> ApiSurface {
        let mut s = ApiSurface::empty(lib.clone());
        for t in types {
            s.types.insert(
                t.to_string(),
                ApiType {
                    name: t.to_string(),
                    kind: crate::classfile::TypeKind::Class,
                    package: crate::classfile::package_of(t).to_owned(),
                    visibility: crate::classfile::Visibility::Public,
                    members: Default::default(),
                },
            );
        }
        s
    }

    fn rec(client: &Gav, lib: &Gav, t: &str, m: Option<&str>, count: u64) -> UsageRecord {
        UsageRecord {
            client: client.clone(),
            library: lib.clone(),
            type_name: t.into(),
            member: m.map(|m| m.parse::<MemberRef>().unwrap()),
            count,
        }
    }

    #[test]
    fn folds_members_to_types() {
        let lib = Gav::new("org.slf4j", "slf4j-api", "1.7.21");
        let client = Gav::new("org.apache.flink", "flink-runtime", "1.5.0");
        let s = surface(
            &lib,
            &[
                "org/slf4j/Logger",
                "org/slf4j/LoggerFactory",
                "org/slf4j/Marker",
            ],
        );
        let records = vec![
            rec(&client, &lib, "org/slf4j/Logger", None, 1),
            rec(
                &client,
                &lib,
                "org/slf4j/Logger",
                Some("info(Ljava/lang/String;)V"),
                6,
            ),
            rec(
                &client,
                &lib,
                "org/slf4j/Logger",
                Some("error(Ljava/lang/String;Ljava/lang/Throwable;)V"),
                2,
            ),
            rec(
                &client,
                &lib,
                "org/slf4j/LoggerFactory",
                Some("getLogger(Ljava/lang/Class;)Lorg/slf4j/Logger;"),
                1,
            ),
        ];
        let g = build_graph(&s, &records).unwrap();
        assert_eq!(g.weight(&client, "org/slf4j/Logger"), 9);
        assert_eq!(g.weight(&client, "org/slf4j/LoggerFactory"), 1);
        assert_eq!(g.type_nodes().len(), 2);
        assert_eq!(
            g.total_weight(),
            records.iter().map(|r| r.count).sum::<u64>()
        );
    }

    #[test]
    fn empty_records_empty_graph() {
        let lib = Gav::new("g", "a", "1");
        let g = build_graph(&surface(&lib, &["g/A"]), &[]).unwrap();
        assert!(g.is_empty());
        assert!(g.client_nodes().is_empty());
    }

    #[test]
    fn foreign_record_rejected() {
        let lib = Gav::new("g", "a", "1");
        let other = Gav::new("g", "a", "2");
        let c = Gav::new("c", "c", "1");
        let err =
            build_graph(&surface(&lib, &["g/A"]), &[rec(&c, &other, "g/A", None, 1)]).unwrap_err();
        assert!(matches!(err, GraphError::ForeignRecord { .. }));
        assert!(build_graph(&surface(&lib, &["g/A"]), &[rec(&c, &lib, "g/B", None, 1)]).is_err());
    }
}
