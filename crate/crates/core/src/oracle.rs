//! Exhaustive ground truth for small instances.

use std::collections::HashMap;
use std::hash::Hash;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::instance::{Agent, Assignment, Instance, Item, SwapMove};
use crate::stable_sets::StableSet;

pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Largest item count [`brute_min_stable`] will enumerate.
pub const BRUTE_FORCE_ITEMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleStatus {
    Reachable { distance: usize, moves: Vec<SwapMove> },
    Unreachable,
    /// The budget ran out before the component of `a` was closed.
    Exhausted { budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub status: OracleStatus,
    /// Number of distinct states discovered.
    pub explored: usize,
}

impl OracleResult {
    pub fn is_reachable(&self) -> bool {
        matches!(self.status, OracleStatus::Reachable { .. })
    }

    pub fn distance(&self) -> Option<usize> {
        match self.status {
            OracleStatus::Reachable { distance, .. } => Some(distance),
            _ => None,
        }
    }
}

pub(crate) enum Search<M> {
    Found(Vec<M>),
    Closed,
    Exhausted,
}

/// Breadth-first search from `start` to `goal`. `expand` reports each
/// successor of a state through the callback, which returns `false` once
/// the search wants no more successors. At most `budget` states are
/// discovered. Returns the outcome and the number of discovered states.
pub(crate) fn bfs<S, M, E>(start: S, goal: &S, budget: usize, mut expand: E) -> (Search<M>, usize)
where
    S: Eq + Hash,
    M: Clone,
    E: FnMut(&S, &mut dyn FnMut(M, S) -> bool),
{
    if start == *goal {
        return (Search::Found(Vec::new()), 1);
    }
    let budget = budget.max(1);
    let start = Rc::new(start);
    let mut index: HashMap<Rc<S>, usize> = HashMap::from([(Rc::clone(&start), 0)]);
    let mut states = vec![start];
    let mut parent: Vec<Option<(usize, M)>> = vec![None];
    let mut head = 0;
    let mut found = None;
    let mut exhausted = false;
    while head < states.len() && found.is_none() && !exhausted {
        let current = Rc::clone(&states[head]);
        let from = head;
        head += 1;
        expand(&current, &mut |m, next| {
            if index.contains_key(&next) {
                return true;
            }
            if states.len() >= budget {
                exhausted = true;
                return false;
            }
            let k = states.len();
            let is_goal = next == *goal;
            let next = Rc::new(next);
            index.insert(Rc::clone(&next), k);
            states.push(next);
            parent.push(Some((from, m)));
            if is_goal {
                found = Some(k);
                return false;
            }
            true
        });
    }
    let explored = states.len();
    if let Some(mut k) = found {
        let mut path = Vec::new();
        while let Some((p, m)) = parent[k].take() {
            path.push(m);
            k = p;
        }
        path.reverse();
        return (Search::Found(path), explored);
    }
    if exhausted {
        (Search::Exhausted, explored)
    } else {
        (Search::Closed, explored)
    }
}

/// Shortest swap sequence from `a` to `b` by breadth-first search over
/// assignments. Successors are generated edge by edge in ascending order.
pub fn bfs_reachable(inst: &Instance, node_budget: usize) -> OracleResult {
    let edges: Vec<(Agent, Agent)> = inst.edges().collect();
    let pack = |c: &Assignment| c.items().iter().map(|&j| j as u32).collect::<Vec<u32>>();
    let start = pack(inst.source());
    let goal = pack(inst.target());
    let (search, explored) = bfs(start, &goal, node_budget, |state: &Vec<u32>, emit| {
        for &(u, v) in &edges {
            let (ju, jv) = (state[u] as Item, state[v] as Item);
            if inst.accepts(u, jv) && inst.accepts(v, ju) {
                let mut next = state.clone();
                next.swap(u, v);
                if !emit(SwapMove::new(u, v), next) {
                    return;
                }
            }
        }
    });
    let status = match search {
        Search::Found(moves) => OracleStatus::Reachable {
            distance: moves.len(),
            moves,
        },
        Search::Closed => OracleStatus::Unreachable,
        Search::Exhausted => OracleStatus::Exhausted {
            budget: node_budget,
        },
    };
    OracleResult { status, explored }
}

/// Every assignment of `inst` in lexicographic order of the item vector.
pub fn enumerate_assignments(inst: &Instance, limit: usize) -> Result<Vec<Assignment>> {
    let n = inst.len();
    let mut out = Vec::new();
    if n == 0 {
        return Ok(vec![Assignment::identity(0)]);
    }
    let mut used = vec![false; n];
    let mut chosen: Vec<Item> = Vec::with_capacity(n);
    // Next option index to try for the agent at each depth.
    let mut cursor = vec![0usize; n];
    loop {
        let depth = chosen.len();
        if depth == n {
            if out.len() == limit {
                return Err(Error::LimitExceeded(limit));
            }
            out.push(Assignment::from_items(chosen.clone())?);
            let j = chosen.pop().expect("nonempty");
            used[j] = false;
            continue;
        }
        let opts = inst.acceptable(depth);
        let mut advanced = false;
        while cursor[depth] < opts.len() {
            let j = opts[cursor[depth]];
            cursor[depth] += 1;
            if !used[j] {
                used[j] = true;
                chosen.push(j);
                if depth + 1 < n {
                    cursor[depth + 1] = 0;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            match chosen.pop() {
                Some(j) => used[j] = false,
                None => return Ok(out),
            }
        }
    }
}

/// Minimum-size proper stable set by full subset enumeration, with the same
/// tie-break as [`crate::stable_sets::min_proper_stable`].
pub fn brute_min_stable(inst: &Instance) -> Result<Option<StableSet>> {
    let n = inst.len();
    if n > BRUTE_FORCE_ITEMS {
        return Err(Error::TooLarge {
            items: n,
            bound: BRUTE_FORCE_ITEMS,
        });
    }
    if n < 2 {
        return Ok(None);
    }
    let acc: Vec<u32> = (0..n)
        .map(|j| inst.acceptors(j).iter().fold(0u32, |m, &i| m | 1 << i))
        .collect();
    let full = (1u32 << n) - 1;
    let mut nbr = vec![0u32; 1 << n];
    let mut best: Option<Vec<Item>> = None;
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        nbr[mask as usize] = nbr[(mask & (mask - 1)) as usize] | acc[low];
        if nbr[mask as usize].count_ones() != mask.count_ones() {
            continue;
        }
        let items: Vec<Item> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        let better = match &best {
            None => true,
            Some(b) => items.len() < b.len() || (items.len() == b.len() && items < *b),
        };
        if better {
            best = Some(items);
        }
    }
    best.map(|items| StableSet::new(inst, &items)).transpose()
}
