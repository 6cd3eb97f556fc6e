//! Polynomial decision procedure for tree communication graphs.
//!
//! A scope is a set of agents `S` together with the items `a(S)`. If the
//! scope has no proper stable set every assignment of it is reachable. If it
//! has one, every minimal stable set `X` is locked onto `N_X`, so each
//! component of `G[S]` minus all these regions must keep its own items; an
//! item whose target holder lies in another component is a proof of
//! unreachability. Otherwise every region becomes a leaf scope and every
//! component a new scope.

use crate::error::{Error, Result};
use crate::graph::{induced_components, is_tree, Marks};
use crate::instance::{Agent, Instance, Item};
use crate::normalize::{normalize, ImmediateNo, Normalization};
use crate::stable_sets::{acceptors_of, is_stable, min_stable_in_scope, minimal_stable_in_scope, StableSet};

/// Agents of a sub-instance together with the items they hold under `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    pub agents: Vec<Agent>,
    pub items: Vec<Item>,
}

/// An item that has to leave the component of `G[S ∖ N_X]` where it starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingItem {
    pub item: Item,
    /// Index of the offending component among the components of the split,
    /// ordered by smallest agent.
    pub component_index: usize,
    pub component: Component,
    /// The scope in which the split happened.
    pub scope: Vec<Agent>,
    /// A proper stable set of the scope: the union of its minimal stable
    /// sets, sorted by smallest member.
    pub stable: Vec<Item>,
    pub target_holder: Agent,
}

impl CrossingItem {
    /// Re-checks the certificate from scratch against `inst`: `stable` is a
    /// proper stable set of the scope, the component is a connected
    /// component of the scope minus `N_X`, and the item's target holder lies
    /// outside it.
    pub fn verify(&self, inst: &Instance) -> bool {
        let inst = match normalize(inst) {
            Normalization::Normalized(i) => i,
            Normalization::ImmediateNo(_) => return false,
        };
        let n = inst.len();
        let in_range = |v: &[usize]| v.iter().all(|&x| x < n);
        if !in_range(&self.scope) || !in_range(&self.stable) || !in_range(&self.component.agents) {
            return false;
        }
        let mut in_scope = vec![false; n];
        for &i in &self.scope {
            in_scope[i] = true;
        }
        let a = inst.source();
        let scope_items: Vec<Item> = self.scope.iter().map(|&i| a.item(i)).collect();
        if self.stable.is_empty()
            || self.stable.len() >= self.scope.len()
            || !self.stable.iter().all(|j| scope_items.contains(j))
        {
            return false;
        }
        let region: Vec<Agent> = acceptors_of(&inst, &self.stable)
            .into_iter()
            .filter(|&i| in_scope[i])
            .collect();
        if region.len() != self.stable.len() {
            return false;
        }
        let mut in_region = vec![false; n];
        for &i in &region {
            in_region[i] = true;
        }
        let rest: Vec<Agent> = self
            .scope
            .iter()
            .copied()
            .filter(|&i| !in_region[i])
            .collect();
        let mut marks = Marks::new(n);
        let mut rest_sorted = rest;
        rest_sorted.sort_unstable();
        let comps = induced_components(
            inst.adjacency(),
            &rest_sorted,
            |v| in_scope[v] && !in_region[v],
            &mut marks,
        );
        let Some(comp) = comps.get(self.component_index) else {
            return false;
        };
        if *comp != self.component.agents {
            return false;
        }
        comp.iter().any(|&i| a.item(i) == self.item)
            && inst.target().holder(self.item) == self.target_holder
            && !comp.contains(&self.target_holder)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoCertificate {
    /// Normalization already separates an item from its target holder.
    Disconnected(ImmediateNo),
    Crossing(CrossingItem),
}

/// The leaves of the decomposition: sub-instances without a proper stable
/// set that partition the agents, each with `a(L) = b(L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YesCertificate {
    pub leaves: Vec<Component>,
    /// Number of stable sets split off.
    pub splits: usize,
}

impl YesCertificate {
    /// Checks that the leaves partition the agents, that both assignments
    /// map every leaf onto the same items, and that no leaf has a proper
    /// stable set.
    pub fn verify(&self, inst: &Instance) -> bool {
        let inst = match normalize(inst) {
            Normalization::Normalized(i) => i,
            Normalization::ImmediateNo(_) => return false,
        };
        let n = inst.len();
        let mut owner = vec![usize::MAX; n];
        for (k, leaf) in self.leaves.iter().enumerate() {
            for &i in &leaf.agents {
                if i >= n || owner[i] != usize::MAX {
                    return false;
                }
                owner[i] = k;
            }
        }
        if owner.contains(&usize::MAX) {
            return false;
        }
        let mut local = vec![0; n];
        self.leaves.iter().enumerate().all(|(k, leaf)| {
            let mut a_items: Vec<Item> = leaf.agents.iter().map(|&i| inst.source().item(i)).collect();
            let mut b_items: Vec<Item> = leaf.agents.iter().map(|&i| inst.target().item(i)).collect();
            a_items.sort_unstable();
            b_items.sort_unstable();
            a_items == b_items
                && a_items == leaf.items
                && min_stable_in_scope(&inst, inst.source(), &a_items, |i| owner[i] == k, &mut local)
                    .len()
                    == a_items.len()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Yes(YesCertificate),
    No(NoCertificate),
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

/// Result of checking a split around a stable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitOutcome {
    /// Components of `G[N ∖ N_X]` ordered by smallest agent.
    Partition(Vec<Component>),
    Crossing(CrossingItem),
}

/// Decides whether `b` is reachable from `a` on a tree.
pub fn solve_tree(inst: &Instance) -> Result<Decision> {
    if !is_tree(inst.adjacency()) {
        return Err(Error::NotATree);
    }
    match normalize(inst) {
        Normalization::ImmediateNo(no) => Ok(Decision::No(NoCertificate::Disconnected(no))),
        Normalization::Normalized(norm) => solve_normalized(&norm),
    }
}

/// Runs the decomposition on an already normalized tree instance.
pub(crate) fn solve_normalized(inst: &Instance) -> Result<Decision> {
    let n = inst.len();
    let a = inst.source();
    let b = inst.target();
    let adj = inst.adjacency();
    let mut scope_of = vec![0usize; n];
    let mut next_id = 1;
    let mut local = vec![0; n];
    let mut marks = Marks::new(n);
    let mut in_comp = Marks::new(n);
    let mut leaves = Vec::new();
    let mut splits = 0;
    let mut work: Vec<(usize, Vec<Agent>)> = vec![(0, (0..n).collect())];

    while let Some((id, agents)) = work.pop() {
        let mut items: Vec<Item> = agents.iter().map(|&i| a.item(i)).collect();
        items.sort_unstable();
        let minimal = minimal_stable_in_scope(inst, a, &items, |i| scope_of[i] == id, &mut local);
        if minimal.len() == 1 && minimal[0].len() == items.len() {
            leaves.push(Component { agents, items });
            continue;
        }
        // Each minimal stable set induces a leaf; what is left splits into
        // the components of the scope minus their regions.
        for x in &minimal {
            splits += 1;
            let region_id = next_id;
            next_id += 1;
            let mut region: Vec<Agent> = x.iter().map(|&j| a.holder(j)).collect();
            region.sort_unstable();
            for &i in &region {
                scope_of[i] = region_id;
            }
            let parts = induced_components(adj, &region, |v| scope_of[v] == region_id, &mut marks);
            if parts.len() != 1 {
                return Err(Error::Invariant(
                    "minimal stable set does not induce a connected subgraph".into(),
                ));
            }
            leaves.push(Component {
                agents: region,
                items: x.clone(),
            });
        }
        let rest: Vec<Agent> = agents
            .iter()
            .copied()
            .filter(|&i| scope_of[i] == id)
            .collect();
        let comps = induced_components(adj, &rest, |v| scope_of[v] == id, &mut marks);
        for (index, comp) in comps.iter().enumerate() {
            in_comp.reset();
            for &i in comp {
                in_comp.set(i);
            }
            let mut comp_items: Vec<Item> = comp.iter().map(|&i| a.item(i)).collect();
            comp_items.sort_unstable();
            if let Some(&j) = comp_items.iter().find(|&&j| !in_comp.get(b.holder(j))) {
                return Ok(Decision::No(NoCertificate::Crossing(CrossingItem {
                    item: j,
                    component_index: index,
                    component: Component {
                        agents: comp.clone(),
                        items: comp_items,
                    },
                    scope: agents,
                    stable: minimal.concat(),
                    target_holder: b.holder(j),
                })));
            }
        }
        for comp in comps.into_iter().rev() {
            for &i in &comp {
                scope_of[i] = next_id;
            }
            work.push((next_id, comp));
            next_id += 1;
        }
    }
    leaves.sort_unstable_by(|p, q| p.agents[0].cmp(&q.agents[0]));
    Ok(Decision::Yes(YesCertificate { leaves, splits }))
}

/// Checks the split of `inst` around the proper stable set `x`.
pub fn split_check(inst: &Instance, x: &StableSet) -> Result<SplitOutcome> {
    let n = inst.len();
    if !is_stable(inst, x.items())? {
        return Err(Error::NotStable);
    }
    if x.len() >= n {
        return Err(Error::Precondition("stable set must be proper".into()));
    }
    let region = acceptors_of(inst, x.items());
    let mut in_region = vec![false; n];
    for &i in &region {
        in_region[i] = true;
    }
    let mut marks = Marks::new(n);
    if induced_components(inst.adjacency(), &region, |v| in_region[v], &mut marks).len() != 1 {
        return Err(Error::NotConnectedRegion);
    }
    let rest: Vec<Agent> = (0..n).filter(|&i| !in_region[i]).collect();
    let comps = induced_components(inst.adjacency(), &rest, |v| !in_region[v], &mut marks);
    let a = inst.source();
    let mut out = Vec::with_capacity(comps.len());
    for (index, agents) in comps.into_iter().enumerate() {
        let mut items: Vec<Item> = agents.iter().map(|&i| a.item(i)).collect();
        items.sort_unstable();
        let crossing = items
            .iter()
            .copied()
            .find(|&j| agents.binary_search(&inst.target().holder(j)).is_err());
        if let Some(j) = crossing {
            return Ok(SplitOutcome::Crossing(CrossingItem {
                item: j,
                component_index: index,
                component: Component { agents, items },
                scope: (0..n).collect(),
                stable: x.items().to_vec(),
                target_holder: inst.target().holder(j),
            }));
        }
        out.push(Component { agents, items });
    }
    Ok(SplitOutcome::Partition(out))
}

/// The `ℓ + 1` smaller instances of a successful split: first the one on
/// `N_X` and `X`, then one per component.
pub fn decompose(inst: &Instance, x: &StableSet, partition: &[Component]) -> Result<Vec<Instance>> {
    let mut out = Vec::with_capacity(partition.len() + 1);
    out.push(inst.restrict(x.agents(), x.items())?);
    for comp in partition {
        out.push(inst.restrict(&comp.agents, &comp.items)?);
    }
    Ok(out)
}
