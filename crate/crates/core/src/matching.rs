//! Bipartite matching between agents and items.
//!
//! Every matching here is produced by the same deterministic rule: free
//! vertices are processed in ascending order and each augmenting-path search
//! tries candidates in ascending order, so repeated runs give identical
//! results.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{Agent, Instance, Item};

const NONE: usize = usize::MAX;

/// Incremental augmenting-path matcher between a left and a right vertex
/// set.
#[derive(Debug, Clone)]
pub(crate) struct Augmenter {
    left_match: Vec<usize>,
    right_owner: Vec<usize>,
    visited: Vec<u32>,
    stamp: u32,
}

impl Augmenter {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        Augmenter {
            left_match: vec![NONE; n_left],
            right_owner: vec![NONE; n_right],
            visited: vec![0; n_right],
            stamp: 0,
        }
    }

    #[inline]
    pub fn owner(&self, right: usize) -> Option<usize> {
        let o = self.right_owner[right];
        (o != NONE).then_some(o)
    }

    #[inline]
    pub fn partner(&self, left: usize) -> Option<usize> {
        let r = self.left_match[left];
        (r != NONE).then_some(r)
    }

    /// Pins `left` to `right`. Both must be free.
    pub fn fix(&mut self, left: usize, right: usize) {
        debug_assert!(self.left_match[left] == NONE && self.right_owner[right] == NONE);
        self.left_match[left] = right;
        self.right_owner[right] = left;
    }

    /// Frees a right vertex, returning its former partner.
    pub fn release_right(&mut self, right: usize) -> Option<usize> {
        let left = self.right_owner[right];
        if left == NONE {
            return None;
        }
        self.right_owner[right] = NONE;
        self.left_match[left] = NONE;
        Some(left)
    }

    /// Searches for an augmenting path from the free left vertex `root`;
    /// `options(l)` lists the right candidates of `l` in the order to try
    /// them. Returns whether `root` ended up matched.
    pub fn augment<'a, F, A>(&mut self, root: usize, options: F, allowed: A) -> bool
    where
        F: Fn(usize) -> &'a [usize],
        A: Fn(usize) -> bool,
    {
        debug_assert_eq!(self.left_match[root], NONE);
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.visited.iter_mut().for_each(|v| *v = 0);
            self.stamp = 1;
        }
        // (left vertex, next option index, right vertex we arrived through)
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, 0, NONE)];
        while let Some(top) = frames.last_mut() {
            let (u, pos, _) = *top;
            let opts = options(u);
            if pos >= opts.len() {
                frames.pop();
                continue;
            }
            top.1 += 1;
            let r = opts[pos];
            if !allowed(r) || self.visited[r] == self.stamp {
                continue;
            }
            self.visited[r] = self.stamp;
            let owner = self.right_owner[r];
            if owner != NONE {
                frames.push((owner, 0, r));
                continue;
            }
            // Free right vertex: flip the path.
            let mut take = r;
            for k in (0..frames.len()).rev() {
                let (l, _, via) = frames[k];
                self.left_match[l] = take;
                self.right_owner[take] = l;
                take = via;
            }
            return true;
        }
        false
    }
}

/// Finds a bijection from `agents` onto `items` respecting `acceptable`,
/// extending the pinned pairs in `forced`. Agents are matched in the order
/// given and candidate items are tried in the order `acceptable` lists them.
pub(crate) fn complete_matching<'a, F>(
    n: usize,
    agents: &[Agent],
    items: &[Item],
    forced: &[(Agent, Item)],
    acceptable: F,
) -> Option<Vec<(Agent, Item)>>
where
    F: Fn(Agent) -> &'a [Item],
{
    if agents.len() != items.len() {
        return None;
    }
    let mut allowed = vec![false; n];
    for &j in items {
        allowed[j] = true;
    }
    let mut aug = Augmenter::new(n, n);
    for &(i, j) in forced {
        aug.fix(i, j);
        allowed[j] = false;
    }
    for &i in agents {
        if aug.partner(i).is_none() && !aug.augment(i, &acceptable, |j| allowed[j]) {
            return None;
        }
    }
    let mut out: Vec<(Agent, Item)> = agents
        .iter()
        .map(|&i| (i, aug.partner(i).expect("agent left unmatched")))
        .collect();
    out.sort_unstable();
    Some(out)
}

/// A matching of the acceptability graph restricted to the given agents and
/// items, extending `forced` and avoiding `excluded_agents`.
///
/// Returns `Ok(None)` exactly when no such bijection exists (Hall's
/// condition fails on the residual graph). Constraint sets that cannot
/// describe a bijection at all are reported as
/// [`Error::InconsistentConstraints`].
pub fn constrained_matching(
    inst: &Instance,
    restrict_agents: &[Agent],
    restrict_items: &[Item],
    forced: &BTreeMap<Agent, Item>,
    excluded_agents: &[Agent],
) -> Result<Option<BTreeMap<Agent, Item>>> {
    let n = inst.len();
    let bad = |msg: String| Err(Error::InconsistentConstraints(msg));
    let mut agent_in = vec![false; n];
    for &i in restrict_agents {
        if i >= n {
            return bad(format!("agent {i} out of range"));
        }
        agent_in[i] = true;
    }
    for &i in excluded_agents {
        if i < n {
            agent_in[i] = false;
        }
    }
    let mut item_in = vec![false; n];
    for &j in restrict_items {
        if j >= n {
            return bad(format!("item {j} out of range"));
        }
        item_in[j] = true;
    }
    let mut forced_pairs = Vec::with_capacity(forced.len());
    for (&i, &j) in forced {
        if i >= n || j >= n {
            return bad(format!("forced pair ({i}, {j}) out of range"));
        }
        if !inst.accepts(i, j) {
            return bad(format!(
                "agent {} does not accept forced item {}",
                inst.agent_name(i),
                inst.item_name(j)
            ));
        }
        if !agent_in[i] {
            return bad(format!(
                "forced agent {} is outside the restriction",
                inst.agent_name(i)
            ));
        }
        if !item_in[j] {
            return bad(format!(
                "forced item {} is outside the restriction or used twice",
                inst.item_name(j)
            ));
        }
        agent_in[i] = false;
        item_in[j] = false;
        forced_pairs.push((i, j));
    }
    let free_agents: Vec<Agent> = (0..n).filter(|&i| agent_in[i]).collect();
    let free_items: Vec<Item> = (0..n).filter(|&j| item_in[j]).collect();
    if free_agents.len() != free_items.len() {
        return bad(format!(
            "{} free agents for {} free items",
            free_agents.len(),
            free_items.len()
        ));
    }
    let found = complete_matching(n, &free_agents, &free_items, &[], |i| inst.acceptable(i));
    Ok(found.map(|pairs| pairs.into_iter().chain(forced_pairs).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augmenter_prefers_low_ids_and_reroutes() {
        // left 0: {0,1}; left 1: {0}
        let opts = [vec![0, 1], vec![0]];
        let mut aug = Augmenter::new(2, 2);
        assert!(aug.augment(0, |l| &opts[l], |_| true));
        assert_eq!(aug.partner(0), Some(0));
        assert!(aug.augment(1, |l| &opts[l], |_| true));
        assert_eq!(aug.partner(0), Some(1));
        assert_eq!(aug.partner(1), Some(0));
    }

    #[test]
    fn augmenter_reports_failure() {
        let opts = [vec![0], vec![0]];
        let mut aug = Augmenter::new(2, 1);
        assert!(aug.augment(0, |l| &opts[l], |_| true));
        assert!(!aug.augment(1, |l| &opts[l], |_| true));
        assert_eq!(aug.partner(0), Some(0));
    }

    #[test]
    fn long_augmenting_chain() {
        // left k accepts {k, k+1}; matching left k -> k first, then a new
        // left vertex that only accepts 0 pushes the whole chain over.
        let n = 50_000;
        let mut opts: Vec<Vec<usize>> = (0..n).map(|k| vec![k, k + 1]).collect();
        opts.push(vec![0]);
        let mut aug = Augmenter::new(n + 1, n + 1);
        for k in 0..n {
            assert!(aug.augment(k, |l| &opts[l], |_| true));
        }
        assert!(aug.augment(n, |l| &opts[l], |_| true));
        assert_eq!(aug.partner(n), Some(0));
        assert_eq!(aug.partner(n - 1), Some(n));
    }
}
