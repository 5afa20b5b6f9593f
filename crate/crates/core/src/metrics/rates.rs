use serde::Serialize;

use crate::graph::{BipartiteUsageGraph, LibGroup};
use crate::usage::ApiSurface;

use super::MetricError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DurResult {
    pub ga: String,
    pub declared: usize,
    pub observed: usize,
    pub dur: f64,
}

/// Observed client GAs over declaring client GAs, across all versions.
pub fn dur(group: &LibGroup) -> Result<DurResult, MetricError> {
    let declared = group.declared_clients.len();
    if declared == 0 {
        return Err(MetricError::NoDeclaredClients(group.ga.clone()));
    }
    let observed = group
        .observed_clients
        .intersection(&group.declared_clients)
        .count();
    Ok(DurResult {
        ga: group.ga.to_string(),
        declared,
        observed,
        dur: observed as f64 / declared as f64,
    })
}

/// users_obs(type) / users_obs(library); 0 for a type absent from the graph.
pub fn tur(g: &BipartiteUsageGraph, type_name: &str) -> Result<f64, MetricError> {
    let total = g.client_nodes().len();
    if total == 0 {
        return Err(MetricError::NoObservedClients(g.library.clone()));
    }
    let users = g.users_per_type().get(type_name).copied().unwrap_or(0);
    Ok(users as f64 / total as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TurRow {
    pub type_name: String,
    pub users: usize,
    pub tur: f64,
}

/// TUR of every surface type, sorted by type name.
pub fn tur_distribution(
    g: &BipartiteUsageGraph,
    surface: &ApiSurface,
) -> Result<Vec<TurRow>, MetricError> {
    let total = g.client_nodes().len();
    if total == 0 {
        return Err(MetricError::NoObservedClients(g.library.clone()));
    }
    let users = g.users_per_type();
    Ok(surface
        .types
        .keys()
        .map(|t| {
            let u = users.get(t.as_str()).copied().unwrap_or(0);
            TurRow {
                type_name: t.clone(),
                users: u,
                tur: u as f64 / total as f64,
            }
        })
        .collect())
}
