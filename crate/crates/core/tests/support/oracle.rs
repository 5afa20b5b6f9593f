//! Exhaustive recomputation of extinction, cores and the core-index.

use std::collections::BTreeSet;

use depusage_core::corpus::Gav;
use depusage_core::graph::BipartiteUsageGraph;

/// A small graph as a list of type sets, one per client.
#[derive(Debug, Clone)]
pub struct Small {
    pub types: usize,
    pub clients: Vec<BTreeSet<usize>>,
}

pub fn type_name(t: usize) -> String {
    format!("t{t:02}")
}

impl Small {
    pub fn graph(&self) -> BipartiteUsageGraph {
        BipartiteUsageGraph::from_edges(
            Gav::new("oracle", "lib", "1"),
            self.clients.iter().enumerate().flat_map(|(c, ts)| {
                ts.iter().map(move |&t| {
                    (
                        Gav::new("oracle", format!("c{c:02}"), "1"),
                        type_name(t),
                        1 + (c + t) as u64 % 3,
                    )
                })
            }),
        )
    }

    /// Types with at least one user.
    pub fn used(&self) -> Vec<usize> {
        let all: BTreeSet<usize> = self.clients.iter().flatten().copied().collect();
        all.into_iter().collect()
    }

    pub fn users(&self, t: usize) -> usize {
        self.clients.iter().filter(|c| c.contains(&t)).count()
    }

    /// Clients with at least one type.
    pub fn observed(&self) -> Vec<&BTreeSet<usize>> {
        self.clients.iter().filter(|c| !c.is_empty()).collect()
    }

    /// Clients served when `hidden` types are hidden.
    pub fn served(&self, hidden: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.clients
            .iter()
            .enumerate()
            .filter(|(_, ts)| !ts.is_empty() && ts.is_disjoint(hidden))
            .map(|(i, _)| i)
            .collect()
    }

    /// Used types sorted by (users, name), ascending or descending users.
    pub fn order(&self, least_first: bool) -> Vec<usize> {
        let mut ts = self.used();
        // selection by repeated scan, independent of the library's sort
        let mut out = Vec::new();
        while !ts.is_empty() {
            let mut best = 0;
            for i in 1..ts.len() {
                let (a, b) = (ts[i], ts[best]);
                let (ua, ub) = (self.users(a), self.users(b));
                let better = if least_first { ua < ub } else { ua > ub };
                if better || (ua == ub && type_name(a) < type_name(b)) {
                    best = i;
                }
            }
            out.push(ts.remove(best));
        }
        out
    }

    /// served fraction after hiding each prefix of `order`.
    pub fn curve(&self, least_first: bool) -> Vec<(usize, f64)> {
        let order = self.order(least_first);
        let c = self.observed().len() as f64;
        (0..=order.len())
            .map(|k| {
                let hidden: BTreeSet<usize> = order[..k].iter().copied().collect();
                let s = self.served(&hidden).len();
                (s, s as f64 / c)
            })
            .collect()
    }

    /// Largest k whose hidden prefix still serves n% of observed clients.
    pub fn core_hidden(&self, n: u32) -> usize {
        self.core_hidden_in(&self.order(true), n)
    }

    /// [`Self::core_hidden`] over a precomputed least-used-first order.
    pub fn core_hidden_in(&self, order: &[usize], n: u32) -> usize {
        let c = self.observed().len();
        let mut best = 0;
        for k in 0..=order.len() {
            let hidden: BTreeSet<usize> = order[..k].iter().copied().collect();
            if self.served(&hidden).len() * 100 >= n as usize * c {
                best = k;
            }
        }
        best
    }

    pub fn core_types(&self, n: u32) -> BTreeSet<String> {
        let order = self.order(true);
        order[self.core_hidden(n)..]
            .iter()
            .map(|&t| type_name(t))
            .collect()
    }

    pub fn cr(&self, n: u32) -> f64 {
        let t = self.used().len();
        (t - self.core_hidden(n)) as f64 / t as f64
    }

    /// max over n of min(n, floor(100 * (1 - cr_n))).
    pub fn core_index(&self) -> u32 {
        let t = self.used().len();
        (1..=100u32)
            .map(|n| {
                let f = (100 * self.core_hidden(n) / t) as u32;
                n.min(f)
            })
            .max()
            .unwrap()
    }
}

/// Deterministic small graph from a seed; may contain isolated clients.
pub fn random_small(seed: u64, max_types: usize, max_clients: usize) -> Small {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let types = rng.gen_range(1..=max_types);
    let n_clients = rng.gen_range(1..=max_clients);
    let density: f64 = rng.gen_range(0.1..0.9);
    let mut clients: Vec<BTreeSet<usize>> = (0..n_clients)
        .map(|_| (0..types).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    if clients.iter().all(|c| c.is_empty()) {
        clients[0].insert(rng.gen_range(0..types));
    }
    Small { types, clients }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Compares every library metric on `s` with the exhaustive recomputation.
pub fn check(s: &Small) -> Result<(), String> {
    use depusage_core::metrics::{core_index, core_n, extinction, Order};
    let g = s.graph();
    for (order, least) in [(Order::LeastUsedFirst, true), (Order::MostUsedFirst, false)] {
        let curve = extinction(&g, order).map_err(|e| e.to_string())?;
        let expected_order: Vec<String> = s.order(least).into_iter().map(type_name).collect();
        ensure(curve.hidden_order == expected_order, || {
            format!("{order:?} order differs")
        })?;
        let got: Vec<(usize, f64)> = curve
            .steps
            .iter()
            .map(|st| (st.served, st.served_fraction))
            .collect();
        ensure(got == s.curve(least), || {
            format!("{order:?} curve {got:?} vs {:?}", s.curve(least))
        })?;
    }
    let index = core_index(&g).map_err(|e| e.to_string())?;
    let order = s.order(true);
    let t = order.len();
    let mut h = 0;
    for n in 1..=100 {
        let k = s.core_hidden_in(&order, n);
        h = h.max(n.min((100 * k / t) as u32));
        let c = core_n(&g, n).map_err(|e| e.to_string())?;
        ensure(c.hidden == k, || {
            format!("Core_{n} hidden {} vs {k}", c.hidden)
        })?;
        let types: BTreeSet<String> = order[k..].iter().map(|&x| type_name(x)).collect();
        ensure(c.core_types == types, || format!("Core_{n} types differ"))?;
        let cr = (t - k) as f64 / t as f64;
        ensure(c.cr_n == cr, || format!("CR_{n} {} vs {cr}", c.cr_n))?;
        ensure(index.hidden[&n] == k, || {
            format!("core-index hidden at {n}")
        })?;
    }
    ensure(index.h == h, || format!("h {} vs {h}", index.h))?;
    let h_core = core_n(&g, index.h.max(1)).map_err(|e| e.to_string())?;
    ensure(index.core == h_core, || "Core_h differs".to_owned())
}

/// Samples nested hidden sets A ⊆ B and checks served(B) ⊆ served(A), the
/// library's served sets against the oracle's, and both curve endpoints.
pub fn check_monotone(s: &Small, seed: u64, samples: usize) -> Result<(), String> {
    use depusage_core::metrics::{extinction, served_clients, Order};
    use rand::{Rng, SeedableRng};
    let g = s.graph();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let used = s.used();
    let names =
        |set: &BTreeSet<usize>| -> BTreeSet<String> { set.iter().map(|&t| type_name(t)).collect() };
    for _ in 0..samples {
        let b: BTreeSet<usize> = used.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let a: BTreeSet<usize> = b.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let sa = served_clients(&g, &names(&a));
        let sb = served_clients(&g, &names(&b));
        ensure(sb.is_subset(&sa), || {
            format!("served({b:?}) not within served({a:?})")
        })?;
        let expected: BTreeSet<String> = s.served(&b).iter().map(|c| format!("c{c:02}")).collect();
        let got: BTreeSet<String> = sb.iter().map(|c| c.artifact.clone()).collect();
        ensure(got == expected, || {
            format!("served({b:?}) {got:?} vs {expected:?}")
        })?;
    }
    for order in [Order::LeastUsedFirst, Order::MostUsedFirst] {
        let curve = extinction(&g, order).map_err(|e| e.to_string())?;
        let first = curve.steps.first().expect("at least one step");
        let last = curve.steps.last().expect("at least one step");
        ensure(first.hidden == 0 && first.served_fraction == 1.0, || {
            "start is not 1.0".to_owned()
        })?;
        ensure(
            last.hidden == used.len() && last.served_fraction == 0.0,
            || "end is not 0.0".to_owned(),
        )?;
        ensure(
            curve.steps.windows(2).all(|w| w[1].served <= w[0].served),
            || format!("{order:?} curve increases"),
        )?;
    }
    Ok(())
}
