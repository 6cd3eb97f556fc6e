//! Instance model: agents, items, acceptability, the communication graph and
//! the two assignments, plus the swap relation between assignments.
//!
//! Agents and items are dense `0..n` indices. The external names they were
//! read with are kept alongside for reporting and serialization.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Agent = usize;
pub type Item = usize;

/// An exchange of items between two distinct agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwapMove {
    pub first: Agent,
    pub second: Agent,
}

impl SwapMove {
    pub fn new(first: Agent, second: Agent) -> Self {
        SwapMove { first, second }
    }
}

/// A bijection from agents to items, stored in both directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    item_of: Vec<Item>,
    holder: Vec<Agent>,
}

impl Assignment {
    /// Builds an assignment from `items[agent]`, rejecting anything that is
    /// not a permutation of `0..items.len()`.
    pub fn from_items(items: Vec<Item>) -> Result<Self> {
        let n = items.len();
        let mut holder = vec![usize::MAX; n];
        for (agent, &item) in items.iter().enumerate() {
            if item >= n {
                return Err(Error::NotBijection {
                    which: "mapping".into(),
                    detail: format!("item index {item} out of range"),
                });
            }
            if holder[item] != usize::MAX {
                return Err(Error::NotBijection {
                    which: "mapping".into(),
                    detail: format!("item index {item} assigned twice"),
                });
            }
            holder[item] = agent;
        }
        Ok(Assignment {
            item_of: items,
            holder,
        })
    }

    pub fn identity(n: usize) -> Self {
        Assignment {
            item_of: (0..n).collect(),
            holder: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.item_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.item_of.is_empty()
    }

    #[inline]
    pub fn item(&self, agent: Agent) -> Item {
        self.item_of[agent]
    }

    #[inline]
    pub fn holder(&self, item: Item) -> Agent {
        self.holder[item]
    }

    pub fn items(&self) -> &[Item] {
        &self.item_of
    }

    pub fn into_items(self) -> Vec<Item> {
        self.item_of
    }

    /// Exchanges the items of two agents without any legality check.
    pub(crate) fn swap_agents(&mut self, u: Agent, v: Agent) {
        self.item_of.swap(u, v);
        self.holder[self.item_of[u]] = u;
        self.holder[self.item_of[v]] = v;
    }
}

/// A validated reachability instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    agent_names: Vec<String>,
    item_names: Vec<String>,
    accept: Vec<Vec<Agent>>,
    acceptable: Vec<Vec<Item>>,
    adj: Vec<Vec<Agent>>,
    source: Assignment,
    target: Assignment,
}

impl Instance {
    /// Checks every structural invariant and builds the derived tables.
    ///
    /// `accept[j]` lists the agents that accept item `j`, in any order.
    pub fn new(
        agent_names: Vec<String>,
        item_names: Vec<String>,
        accept: Vec<Vec<Agent>>,
        edges: &[(Agent, Agent)],
        source: Vec<Item>,
        target: Vec<Item>,
    ) -> Result<Self> {
        let n = agent_names.len();
        if item_names.len() != n {
            return Err(Error::SizeMismatch {
                agents: n,
                items: item_names.len(),
            });
        }
        if accept.len() != n {
            return Err(Error::InconsistentConstraints(format!(
                "{} acceptability sets for {n} items",
                accept.len()
            )));
        }
        let mut accept = accept;
        for set in accept.iter_mut() {
            set.sort_unstable();
            set.dedup();
            if let Some(&bad) = set.iter().find(|&&i| i >= n) {
                return Err(Error::InconsistentConstraints(format!(
                    "agent index {bad} out of range"
                )));
            }
        }
        let mut acceptable = vec![Vec::new(); n];
        for (item, set) in accept.iter().enumerate() {
            for &agent in set {
                acceptable[agent].push(item);
            }
        }

        let name = |i: Agent| agent_names.get(i).cloned().unwrap_or_else(|| i.to_string());
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::BadEdge {
                    u: name(u),
                    v: name(v),
                    reason: "unknown agent".into(),
                });
            }
            if u == v {
                return Err(Error::BadEdge {
                    u: name(u),
                    v: name(v),
                    reason: "self-loop".into(),
                });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(Error::DuplicateEdge {
                    u: name(a),
                    v: name(b),
                });
            }
        }

        let source = Self::named_assignment("a", source, &agent_names, &item_names)?;
        let target = Self::named_assignment("b", target, &agent_names, &item_names)?;
        let inst = Instance {
            agent_names,
            item_names,
            accept,
            acceptable,
            adj,
            source,
            target,
        };
        inst.check_assignment("a", &inst.source)?;
        inst.check_assignment("b", &inst.target)?;
        Ok(inst)
    }

    fn named_assignment(
        which: &str,
        items: Vec<Item>,
        agent_names: &[String],
        item_names: &[String],
    ) -> Result<Assignment> {
        if items.len() != agent_names.len() {
            return Err(Error::NotBijection {
                which: which.into(),
                detail: format!("{} of {} agents assigned", items.len(), agent_names.len()),
            });
        }
        let mut seen = vec![false; items.len()];
        for &item in &items {
            let detail = if item >= items.len() {
                format!("item index {item} out of range")
            } else if seen[item] {
                format!("item {} assigned twice", item_names[item])
            } else {
                seen[item] = true;
                continue;
            };
            return Err(Error::NotBijection {
                which: which.into(),
                detail,
            });
        }
        Assignment::from_items(items)
    }

    /// Verifies that `c` is an assignment of this instance (bijective and
    /// every agent accepts its item).
    pub fn check_assignment(&self, which: &str, c: &Assignment) -> Result<()> {
        if c.len() != self.len() {
            return Err(Error::NotBijection {
                which: which.into(),
                detail: format!("{} of {} agents assigned", c.len(), self.len()),
            });
        }
        for agent in 0..self.len() {
            let item = c.item(agent);
            if !self.accepts(agent, item) {
                return Err(Error::UnacceptableItem {
                    which: which.into(),
                    agent: self.agent_names[agent].clone(),
                    item: self.item_names[item].clone(),
                });
            }
        }
        Ok(())
    }

    /// Number of agents (equal to the number of items).
    pub fn len(&self) -> usize {
        self.agent_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agent_names.is_empty()
    }

    pub fn agent_name(&self, agent: Agent) -> &str {
        &self.agent_names[agent]
    }

    pub fn item_name(&self, item: Item) -> &str {
        &self.item_names[item]
    }

    pub fn agent_names(&self) -> &[String] {
        &self.agent_names
    }

    pub fn item_names(&self) -> &[String] {
        &self.item_names
    }

    pub fn agent_by_name(&self, name: &str) -> Option<Agent> {
        self.agent_names.iter().position(|n| n == name)
    }

    pub fn item_by_name(&self, name: &str) -> Option<Item> {
        self.item_names.iter().position(|n| n == name)
    }

    /// Agents accepting `item` (sorted).
    pub fn acceptors(&self, item: Item) -> &[Agent] {
        &self.accept[item]
    }

    /// Items acceptable to `agent` (sorted).
    pub fn acceptable(&self, agent: Agent) -> &[Item] {
        &self.acceptable[agent]
    }

    #[inline]
    pub fn accepts(&self, agent: Agent, item: Item) -> bool {
        self.accept[item].binary_search(&agent).is_ok()
    }

    pub fn neighbors(&self, agent: Agent) -> &[Agent] {
        &self.adj[agent]
    }

    pub fn adjacency(&self) -> &[Vec<Agent>] {
        &self.adj
    }

    pub fn has_edge(&self, u: Agent, v: Agent) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (Agent, Agent)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn source(&self) -> &Assignment {
        &self.source
    }

    pub fn target(&self) -> &Assignment {
        &self.target
    }

    /// Replaces the source assignment.
    pub fn with_source(&self, source: Assignment) -> Result<Instance> {
        self.check_assignment("a", &source)?;
        Ok(Instance {
            source,
            ..self.clone()
        })
    }

    /// Replaces the target assignment.
    pub fn with_target(&self, target: Assignment) -> Result<Instance> {
        self.check_assignment("b", &target)?;
        Ok(Instance {
            target,
            ..self.clone()
        })
    }

    /// Replaces the acceptability sets; used by normalization, which only
    /// ever shrinks them around both assignments.
    pub(crate) fn with_acceptance(&self, accept: Vec<Vec<Agent>>) -> Result<Instance> {
        let edges: Vec<_> = self.edges().collect();
        Instance::new(
            self.agent_names.clone(),
            self.item_names.clone(),
            accept,
            &edges,
            self.source.items().to_vec(),
            self.target.items().to_vec(),
        )
    }

    /// The instance induced on `agents` and `items`: acceptability becomes
    /// `N_j ∩ agents`, the graph becomes the induced subgraph, and both
    /// assignments are restricted. Fails unless both assignments map
    /// `agents` onto `items`.
    pub fn restrict(&self, agents: &[Agent], items: &[Item]) -> Result<Instance> {
        let mut agents = agents.to_vec();
        agents.sort_unstable();
        let mut items = items.to_vec();
        items.sort_unstable();
        let mut agent_pos = vec![usize::MAX; self.len()];
        for (k, &i) in agents.iter().enumerate() {
            agent_pos[i] = k;
        }
        let mut item_pos = vec![usize::MAX; self.len()];
        for (k, &j) in items.iter().enumerate() {
            item_pos[j] = k;
        }
        let accept = items
            .iter()
            .map(|&j| {
                self.accept[j]
                    .iter()
                    .filter_map(|&i| (agent_pos[i] != usize::MAX).then_some(agent_pos[i]))
                    .collect()
            })
            .collect();
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| agent_pos[u] != usize::MAX && agent_pos[v] != usize::MAX)
            .map(|(u, v)| (agent_pos[u], agent_pos[v]))
            .collect();
        let restrict_assignment = |which: &str, c: &Assignment| -> Result<Vec<Item>> {
            agents
                .iter()
                .map(|&i| {
                    let k = item_pos[c.item(i)];
                    if k == usize::MAX {
                        Err(Error::NotBijection {
                            which: which.into(),
                            detail: format!(
                                "agent {} holds {} outside the restricted item set",
                                self.agent_names[i], self.item_names[c.item(i)]
                            ),
                        })
                    } else {
                        Ok(k)
                    }
                })
                .collect()
        };
        let source = restrict_assignment("a", &self.source)?;
        let target = restrict_assignment("b", &self.target)?;
        Instance::new(
            agents.iter().map(|&i| self.agent_names[i].clone()).collect(),
            items.iter().map(|&j| self.item_names[j].clone()).collect(),
            accept,
            &edges,
            source,
            target,
        )
    }

    pub(crate) fn name_lookup(names: &[String]) -> HashMap<&str, usize> {
        names
            .iter()
            .enumerate()
            .map(|(k, n)| (n.as_str(), k))
            .collect()
    }
}

/// Whether `m` is a rational exchange at assignment `c`: the agents are
/// distinct, adjacent, and each accepts the other's item.
pub fn legal_swap(inst: &Instance, c: &Assignment, m: SwapMove) -> bool {
    let (u, v) = (m.first, m.second);
    u != v
        && u < inst.len()
        && v < inst.len()
        && inst.has_edge(u, v)
        && inst.accepts(u, c.item(v))
        && inst.accepts(v, c.item(u))
}

/// Applies a legal swap, returning the successor assignment.
pub fn apply_swap(inst: &Instance, c: &Assignment, m: SwapMove) -> Result<Assignment> {
    if !legal_swap(inst, c, m) {
        return Err(Error::IllegalSwap {
            first: m.first,
            second: m.second,
        });
    }
    let mut next = c.clone();
    next.swap_agents(m.first, m.second);
    debug_assert!(inst.check_assignment("swap result", &next).is_ok());
    Ok(next)
}

/// Replays `moves` from `start`, failing at the first illegal move.
pub fn replay(inst: &Instance, start: &Assignment, moves: &[SwapMove]) -> Result<Assignment> {
    let mut cur = start.clone();
    for (step, &m) in moves.iter().enumerate() {
        if !legal_swap(inst, &cur, m) {
            return Err(Error::InvalidSequence {
                step,
                reason: format!("swap {} {} is not legal", m.first, m.second),
            });
        }
        cur.swap_agents(m.first, m.second);
    }
    Ok(cur)
}

/// Orders names so that embedded digit runs compare numerically
/// (`2 < 10`, `x2 < x10`), falling back to byte order on ties.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> impl Iterator<Item = &str> {
        let bytes = s.as_bytes();
        let mut start = 0;
        std::iter::from_fn(move || {
            if start >= bytes.len() {
                return None;
            }
            let digit = bytes[start].is_ascii_digit();
            let mut end = start + 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() == digit {
                end += 1;
            }
            let chunk = &s[start..end];
            start = end;
            Some(chunk)
        })
    }
    let mut xs = chunks(a);
    let mut ys = chunks(b);
    loop {
        match (xs.next(), ys.next()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) => {
                let both_digits = x.as_bytes()[0].is_ascii_digit() && y.as_bytes()[0].is_ascii_digit();
                let ord = if both_digits {
                    let xt = x.trim_start_matches('0');
                    let yt = y.trim_start_matches('0');
                    xt.len().cmp(&yt.len()).then_with(|| xt.cmp(yt))
                } else {
                    x.cmp(y)
                };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Instance {
        // E1: N_x={1,2}, N_y={1,2,3}, N_z={2,3}; a = x y z; b = y x z.
        Instance::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec!["x".into(), "y".into(), "z".into()],
            vec![vec![0, 1], vec![0, 1, 2], vec![1, 2]],
            &[(0, 1), (1, 2)],
            vec![0, 1, 2],
            vec![1, 0, 2],
        )
        .unwrap()
    }

    #[test]
    fn legal_swaps_on_path() {
        let inst = path3();
        let a = inst.source().clone();
        assert!(legal_swap(&inst, &a, SwapMove::new(0, 1)));
        assert!(!legal_swap(&inst, &a, SwapMove::new(0, 2)));
        assert!(!legal_swap(&inst, &a, SwapMove::new(1, 1)));
        // 2 accepts z and 3 accepts y
        assert!(legal_swap(&inst, &a, SwapMove::new(1, 2)));
    }

    #[test]
    fn swap_reaches_target_and_is_an_involution() {
        let inst = path3();
        let a = inst.source().clone();
        let m = SwapMove::new(0, 1);
        let once = apply_swap(&inst, &a, m).unwrap();
        assert_eq!(&once, inst.target());
        assert_eq!(apply_swap(&inst, &once, m).unwrap(), a);
    }

    #[test]
    fn illegal_swap_is_rejected() {
        let inst = path3();
        assert_eq!(
            apply_swap(&inst, inst.source(), SwapMove::new(0, 2)),
            Err(Error::IllegalSwap {
                first: 0,
                second: 2
            })
        );
    }

    #[test]
    fn structural_errors() {
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let err = Instance::new(
            names(&["1", "2"]),
            names(&["x"]),
            vec![vec![0]],
            &[],
            vec![0],
            vec![0],
        )
        .unwrap_err();
        assert!(matches!(err, Error::SizeMismatch { agents: 2, items: 1 }));

        let err = Instance::new(
            names(&["1", "2"]),
            names(&["x", "y"]),
            vec![vec![0, 1], vec![0, 1]],
            &[(0, 0)],
            vec![0, 1],
            vec![0, 1],
        )
        .unwrap_err();
        assert!(matches!(err, Error::BadEdge { .. }));

        let err = Instance::new(
            names(&["1", "2"]),
            names(&["x", "y"]),
            vec![vec![0, 1], vec![0, 1]],
            &[(0, 1), (1, 0)],
            vec![0, 1],
            vec![0, 1],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { .. }));

        let err = Instance::new(
            names(&["1", "2"]),
            names(&["x", "y"]),
            vec![vec![0, 1], vec![0, 1]],
            &[(0, 1)],
            vec![0, 0],
            vec![0, 1],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotBijection { .. }));
    }

    #[test]
    fn natural_order() {
        let mut v = vec!["x10", "x2", "10", "2", "b", "a", "x1"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, ["2", "10", "a", "b", "x1", "x2", "x10"]);
        assert_eq!(natural_cmp("007", "7"), Ordering::Less);
    }
}
