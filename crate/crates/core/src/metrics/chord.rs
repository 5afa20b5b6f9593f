use serde::Serialize;

use crate::graph::BipartiteUsageGraph;

use super::CoreResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChordGroup {
    CoreOnly,
    NonCoreOnly,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStat {
    pub clients: usize,
    /// clients / all observed clients
    pub client_share: f64,
    /// summed edge weight of the group's clients / total edge weight
    pub usage_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChordGrouping {
    pub core_n: u32,
    pub core_size: usize,
    pub core_only: GroupStat,
    pub non_core_only: GroupStat,
    pub mixed: GroupStat,
}

impl ChordGrouping {
    pub fn get(&self, group: ChordGroup) -> &GroupStat {
        match group {
            ChordGroup::CoreOnly => &self.core_only,
            ChordGroup::NonCoreOnly => &self.non_core_only,
            ChordGroup::Mixed => &self.mixed,
        }
    }
}

/// Splits observed clients by whether they use types inside `core`, outside
/// it, or both.
pub fn chord_grouping(g: &BipartiteUsageGraph, core: &CoreResult) -> ChordGrouping {
    let mut clients = [0usize; 3];
    let mut weight = [0u64; 3];
    let per_client = g.types_per_client();
    for (client, types) in &per_client {
        let inside = types
            .iter()
            .filter(|t| core.core_types.contains(**t))
            .count();
        let slot = if inside == types.len() {
            0
        } else if inside == 0 {
            1
        } else {
            2
        };
        clients[slot] += 1;
        weight[slot] += types.iter().map(|t| g.weight(client, t)).sum::<u64>();
    }
    let total_clients = per_client.len().max(1) as f64;
    let total_weight = g.total_weight().max(1) as f64;
    let stat = |i: usize| GroupStat {
        clients: clients[i],
        client_share: clients[i] as f64 / total_clients,
        usage_share: weight[i] as f64 / total_weight,
    };
    ChordGrouping {
        core_n: core.n,
        core_size: core.core_types.len(),
        core_only: stat(0),
        non_core_only: stat(1),
        mixed: stat(2),
    }
}
