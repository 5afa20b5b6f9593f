use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;

use crate::corpus::Gav;
use crate::graph::BipartiteUsageGraph;

use super::MetricError;

/// Identifier of the fixed tie-break rule for types with equal user counts.
pub const TIE_BREAK: &str = "lexicographic_type_name";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    LeastUsedFirst,
    MostUsedFirst,
}

impl Order {
    pub fn as_str(self) -> &'static str {
        match self {
            Order::LeastUsedFirst => "least_used_first",
            Order::MostUsedFirst => "most_used_first",
        }
    }
}

/// Types of `g` in hiding order: by distinct user count (ascending for
/// least-used-first, descending otherwise), ties by type name.
pub fn hide_order(g: &BipartiteUsageGraph, order: Order) -> Vec<String> {
    let mut types: Vec<(&str, usize)> = g.users_per_type().into_iter().collect();
    types.sort_by(|a, b| {
        let by_users = match order {
            Order::LeastUsedFirst => a.1.cmp(&b.1),
            Order::MostUsedFirst => b.1.cmp(&a.1),
        };
        by_users.then_with(|| a.0.cmp(b.0))
    });
    types.into_iter().map(|(t, _)| t.to_owned()).collect()
}

/// Clients none of whose types are in `hidden`.
pub fn served_clients<'g>(
    g: &'g BipartiteUsageGraph,
    hidden: &BTreeSet<String>,
) -> BTreeSet<&'g Gav> {
    g.types_per_client()
        .into_iter()
        .filter(|(_, types)| types.iter().all(|t| !hidden.contains(*t)))
        .map(|(c, _)| c)
        .collect()
}

/// `served[k]` = clients whose types all survive hiding the first `k` types
/// of `order`. A client dies at the position of its earliest-hidden type.
fn served_counts(g: &BipartiteUsageGraph, order: &[String]) -> Vec<usize> {
    let pos: BTreeMap<&str, usize> = order
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();
    let mut dies_at = vec![0usize; order.len() + 1];
    for types in g.types_per_client().values() {
        let first = types
            .iter()
            .map(|t| pos[t])
            .min()
            .expect("client has an edge");
        dies_at[first] += 1;
    }
    let mut served = vec![0; order.len() + 1];
    let mut alive = 0;
    for k in (0..order.len()).rev() {
        alive += dies_at[k];
        served[k] = alive;
    }
    served
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtinctionStep {
    pub hidden: usize,
    pub hidden_fraction: f64,
    pub served: usize,
    pub served_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtinctionCurve {
    pub order: Order,
    pub tie_break: &'static str,
    pub hidden_order: Vec<String>,
    pub clients: usize,
    /// `hidden_order.len() + 1` steps, starting with nothing hidden.
    pub steps: Vec<ExtinctionStep>,
}

impl ExtinctionCurve {
    /// `hidden_count,hidden_fraction,served_fraction` with six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("hidden_count,hidden_fraction,served_fraction\n");
        for s in &self.steps {
            let _ = writeln!(
                out,
                "{},{:.6},{:.6}",
                s.hidden, s.hidden_fraction, s.served_fraction
            );
        }
        out
    }
}

fn non_empty(g: &BipartiteUsageGraph) -> Result<(), MetricError> {
    if g.is_empty() {
        Err(MetricError::EmptyGraph(g.library.clone()))
    } else {
        Ok(())
    }
}

/// Hides types one at a time in `order` and records the served share.
pub fn extinction(g: &BipartiteUsageGraph, order: Order) -> Result<ExtinctionCurve, MetricError> {
    non_empty(g)?;
    let hidden_order = hide_order(g, order);
    let served = served_counts(g, &hidden_order);
    let t = hidden_order.len();
    let c = g.client_nodes().len();
    let steps = served
        .iter()
        .enumerate()
        .map(|(k, &s)| ExtinctionStep {
            hidden: k,
            hidden_fraction: k as f64 / t as f64,
            served: s,
            served_fraction: s as f64 / c as f64,
        })
        .collect();
    Ok(ExtinctionCurve {
        order,
        tie_break: TIE_BREAK,
        hidden_order,
        clients: c,
        steps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreResult {
    pub n: u32,
    /// Types hidden from the least-used end.
    pub hidden: usize,
    /// Core_n, the kept types.
    pub core_types: BTreeSet<String>,
    /// |types_obs|
    pub types_obs: usize,
    /// |Core_n| / |types_obs|
    pub cr_n: f64,
    pub served: usize,
    pub clients: usize,
    pub served_fraction: f64,
}

/// Largest hidden prefix whose served count still reaches n% of clients.
fn max_hidden(served: &[usize], clients: usize, n: u32) -> usize {
    // served is non-increasing and served[0] == clients
    served
        .iter()
        .rposition(|&s| s as u64 * 100 >= u64::from(n) * clients as u64)
        .expect("nothing hidden serves everyone")
}

fn core_result(order: &[String], served: &[usize], clients: usize, n: u32) -> CoreResult {
    let k = max_hidden(served, clients, n);
    let t = order.len();
    CoreResult {
        n,
        hidden: k,
        core_types: order[k..].iter().cloned().collect(),
        types_obs: t,
        cr_n: (t - k) as f64 / t as f64,
        served: served[k],
        clients,
        served_fraction: served[k] as f64 / clients as f64,
    }
}

/// Core_n under the least-used-first ordering.
pub fn core_n(g: &BipartiteUsageGraph, n: u32) -> Result<CoreResult, MetricError> {
    if !(1..=100).contains(&n) {
        return Err(MetricError::InvalidPercent(n));
    }
    non_empty(g)?;
    let order = hide_order(g, Order::LeastUsedFirst);
    let served = served_counts(g, &order);
    Ok(core_result(&order, &served, g.client_nodes().len(), n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreIndex {
    pub h: u32,
    /// f(n) = 100 * (1 - CR_n) for n in 1..=100.
    pub f_values: BTreeMap<u32, f64>,
    /// Hidden type count behind each f(n).
    pub hidden: BTreeMap<u32, usize>,
    /// Core_h, or Core_1 when h is 0.
    pub core: CoreResult,
}

/// h = max over n in 1..=100 of min(n, floor(f(n))).
pub fn core_index(g: &BipartiteUsageGraph) -> Result<CoreIndex, MetricError> {
    non_empty(g)?;
    let order = hide_order(g, Order::LeastUsedFirst);
    let served = served_counts(g, &order);
    let clients = g.client_nodes().len();
    let t = order.len();
    let mut h = 0;
    let mut f_values = BTreeMap::new();
    let mut hidden = BTreeMap::new();
    for n in 1..=100u32 {
        let k = max_hidden(&served, clients, n);
        let f_floor = (100 * k / t) as u32;
        h = h.max(n.min(f_floor));
        f_values.insert(n, 100.0 * k as f64 / t as f64);
        hidden.insert(n, k);
    }
    let core = core_result(&order, &served, clients, h.max(1));
    Ok(CoreIndex {
        h,
        f_values,
        hidden,
        core,
    })
}
