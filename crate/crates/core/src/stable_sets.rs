//! Stable ("tight") item sets: nonempty `X` with `|N_X| = |X|`.
//!
//! Given any perfect matching `m` of the acceptability graph, a stable set
//! is exactly a nonempty item set closed under "item `j` leads to every
//! agent in `N_j`, agent `i` leads to `m(i)`". The smallest stable set
//! containing `j` is therefore the closure of `j`, and the smallest stable
//! set overall is the smallest sink component of the item digraph
//! `j -> m(i) for i ∈ N_j`. Both are independent of the matching chosen.
//!
//! Callers are expected to pass normalized instances.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{sink_components, smallest_sink_component, Csr};
use crate::instance::{Agent, Assignment, Instance, Item};

/// A stable item set together with its acceptor set `N_X`, both sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StableSet {
    items: Vec<Item>,
    agents: Vec<Agent>,
}

impl StableSet {
    /// Checks stability of `items` in `inst`.
    pub fn new(inst: &Instance, items: &[Item]) -> Result<Self> {
        if !is_stable(inst, items)? {
            return Err(Error::NotStable);
        }
        let mut items = items.to_vec();
        items.sort_unstable();
        items.dedup();
        let agents = acceptors_of(inst, &items);
        Ok(StableSet { items, agents })
    }

    pub(crate) fn from_parts(items: Vec<Item>, agents: Vec<Agent>) -> Self {
        debug_assert_eq!(items.len(), agents.len());
        StableSet { items, agents }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: Item) -> bool {
        self.items.binary_search(&item).is_ok()
    }
}

/// `N_X`, sorted.
pub fn acceptors_of(inst: &Instance, items: &[Item]) -> Vec<Agent> {
    let mut seen = vec![false; inst.len()];
    let mut out = Vec::new();
    for &j in items {
        for &i in inst.acceptors(j) {
            if !seen[i] {
                seen[i] = true;
                out.push(i);
            }
        }
    }
    out.sort_unstable();
    out
}

fn distinct_count(items: &[Item]) -> usize {
    let mut v = items.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Hall surplus `|N_{X∪{j}}| - |X∪{j}|` of `X ∪ {j}`.
pub fn f_value(inst: &Instance, j: Item, x: &[Item]) -> Result<i64> {
    if x.contains(&j) {
        return Err(Error::ItemInSet(j));
    }
    let mut with_j = x.to_vec();
    with_j.push(j);
    let size = distinct_count(&with_j);
    Ok(acceptors_of(inst, &with_j).len() as i64 - size as i64)
}

pub fn is_stable(inst: &Instance, x: &[Item]) -> Result<bool> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(acceptors_of(inst, x).len() == distinct_count(x))
}

/// The unique minimum-size stable set containing `j`, computed as a closure
/// over the source assignment.
pub fn min_stable_containing(inst: &Instance, j: Item) -> StableSet {
    min_stable_containing_with(inst, j, inst.source())
}

/// As [`min_stable_containing`], seeded by an arbitrary assignment.
pub fn min_stable_containing_with(inst: &Instance, j: Item, matching: &Assignment) -> StableSet {
    let n = inst.len();
    let mut item_seen = vec![false; n];
    let mut agent_seen = vec![false; n];
    let mut items = vec![j];
    let mut agents = Vec::new();
    item_seen[j] = true;
    let mut queue = VecDeque::from([j]);
    while let Some(k) = queue.pop_front() {
        for &i in inst.acceptors(k) {
            if agent_seen[i] {
                continue;
            }
            agent_seen[i] = true;
            agents.push(i);
            let next = matching.item(i);
            if !item_seen[next] {
                item_seen[next] = true;
                items.push(next);
                queue.push_back(next);
            }
        }
    }
    items.sort_unstable();
    agents.sort_unstable();
    StableSet::from_parts(items, agents)
}

/// The minimum-size proper stable set, ties broken by the lexicographically
/// smallest sorted item list; `None` when only `M` itself is stable.
pub fn min_proper_stable(inst: &Instance) -> Option<StableSet> {
    min_proper_stable_with(inst, inst.source())
}

pub fn min_proper_stable_with(inst: &Instance, matching: &Assignment) -> Option<StableSet> {
    let n = inst.len();
    let all: Vec<Item> = (0..n).collect();
    let mut local = vec![0; n];
    let items = min_stable_in_scope(inst, matching, &all, |_| true, &mut local);
    if items.len() == n {
        return None;
    }
    let agents = items.iter().map(|&j| matching.holder(j)).collect::<Vec<_>>();
    let mut agents = agents;
    agents.sort_unstable();
    Some(StableSet::from_parts(items, agents))
}

/// Digraph on `scope_items` (ascending) with an arc `j -> matching(i)` for
/// every in-scope acceptor `i` of `j`. The in-scope agents must be exactly
/// those `matching` gives the scope items. `local` is scratch space of
/// length `inst.len()`.
fn scope_digraph(
    inst: &Instance,
    matching: &Assignment,
    scope_items: &[Item],
    in_scope: impl Fn(Agent) -> bool,
    local: &mut [usize],
) -> Csr {
    for (k, &j) in scope_items.iter().enumerate() {
        local[j] = k;
    }
    let mut g = Csr::with_capacity(scope_items.len());
    for &j in scope_items {
        g.push_row(
            inst.acceptors(j)
                .iter()
                .filter(|&&i| in_scope(i))
                .map(|&i| local[matching.item(i)]),
        );
    }
    g
}

/// Smallest stable set of the sub-instance on the agents accepted by
/// `in_scope`. Returns all of `scope_items` when the sub-instance has no
/// proper stable set.
pub(crate) fn min_stable_in_scope(
    inst: &Instance,
    matching: &Assignment,
    scope_items: &[Item],
    in_scope: impl Fn(Agent) -> bool,
    local: &mut [usize],
) -> Vec<Item> {
    let g = scope_digraph(inst, matching, scope_items, in_scope, local);
    smallest_sink_component(&g, None)
        .unwrap_or_default()
        .into_iter()
        .map(|k| scope_items[k])
        .collect()
}

/// Every inclusion-minimal stable set of the sub-instance, ordered by
/// smallest item. A single set equal to `scope_items` means there is no
/// proper stable set.
pub(crate) fn minimal_stable_in_scope(
    inst: &Instance,
    matching: &Assignment,
    scope_items: &[Item],
    in_scope: impl Fn(Agent) -> bool,
    local: &mut [usize],
) -> Vec<Vec<Item>> {
    let g = scope_digraph(inst, matching, scope_items, in_scope, local);
    sink_components(&g)
        .into_iter()
        .map(|c| c.into_iter().map(|k| scope_items[k]).collect())
        .collect()
}
