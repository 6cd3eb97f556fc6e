//! Lightweight sub-instances with dense local ids.
//!
//! The construction keeps carving out smaller instances (regions, the
//! graph with a region shrunk to one vertex, a tree minus a leaf). A frame
//! holds only what the construction needs; moves found inside a frame are
//! translated back to the parent's ids by a relabeling sink.

use crate::instance::{Agent, Instance, Item};

#[derive(Debug, Clone)]
pub(crate) struct Frame {
    /// Item -> sorted acceptors.
    pub accept: Vec<Vec<Agent>>,
    /// Agent -> sorted acceptable items.
    pub acceptable: Vec<Vec<Item>>,
    pub adj: Vec<Vec<Agent>>,
}

impl Frame {
    pub fn from_instance(inst: &Instance) -> Self {
        let n = inst.len();
        Frame {
            accept: (0..n).map(|j| inst.acceptors(j).to_vec()).collect(),
            acceptable: (0..n).map(|i| inst.acceptable(i).to_vec()).collect(),
            adj: inst.adjacency().to_vec(),
        }
    }

    /// Builds a frame from item acceptor lists and an edge list; both are
    /// sorted here.
    pub fn from_parts(mut accept: Vec<Vec<Agent>>, edges: &[(Agent, Agent)]) -> Self {
        let n = accept.len();
        let mut acceptable = vec![Vec::new(); n];
        for (j, list) in accept.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &i in list.iter() {
                acceptable[i].push(j);
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Frame {
            accept,
            acceptable,
            adj,
        }
    }

    pub fn len(&self) -> usize {
        self.accept.len()
    }

    #[inline]
    pub fn accepts(&self, i: Agent, j: Item) -> bool {
        self.acceptable[i].binary_search(&j).is_ok()
    }

    /// Degree-one vertices, ascending.
    pub fn leaves(&self) -> Vec<Agent> {
        (0..self.len()).filter(|&i| self.adj[i].len() == 1).collect()
    }

    /// The frame induced on `agents` and `items`, both ascending; local id
    /// `k` stands for `agents[k]` (resp. `items[k]`).
    pub fn restrict(&self, agents: &[Agent], items: &[Item]) -> Frame {
        debug_assert!(agents.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        let agent_pos = positions(self.len(), agents);
        let accept = items
            .iter()
            .map(|&j| {
                self.accept[j]
                    .iter()
                    .filter_map(|&i| agent_pos[i])
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let mut acceptable = vec![Vec::new(); agents.len()];
        for (k, list) in accept.iter().enumerate() {
            for &i in list {
                acceptable[i].push(k);
            }
        }
        let adj = agents
            .iter()
            .map(|&u| self.adj[u].iter().filter_map(|&v| agent_pos[v]).collect())
            .collect();
        Frame {
            accept,
            acceptable,
            adj,
        }
    }
}

/// `pos[v] = Some(k)` when `list[k] = v`.
pub(crate) fn positions(n: usize, list: &[usize]) -> Vec<Option<usize>> {
    let mut pos = vec![None; n];
    for (k, &v) in list.iter().enumerate() {
        pos[v] = Some(k);
    }
    pos
}

/// Restriction of a parent assignment to `agents`, in the local item ids
/// given by `item_pos`.
pub(crate) fn localize(assign: &[Item], agents: &[Agent], item_pos: &[Option<usize>]) -> Vec<Item> {
    agents
        .iter()
        .map(|&i| item_pos[assign[i]].expect("agent holds an item outside the frame"))
        .collect()
}
