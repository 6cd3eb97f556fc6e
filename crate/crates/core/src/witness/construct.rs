//! The inductive construction on a single frame.
//!
//! Every frame handed to [`reconfigure`] is a tree in which each `G[N_j]`
//! is connected and no proper stable set exists. Moves are pushed into a
//! [`Sink`] as soon as they are known.

use crate::error::{Error, Result};
use crate::graph::{smallest_sink_component, Csr};
use crate::instance::{Agent, Item};
use crate::matching::{complete_matching, Augmenter};

use super::frame::{localize, positions, Frame};

pub(crate) trait Sink {
    fn swap(&mut self, u: Agent, v: Agent) -> Result<()>;
}

/// Translates local agent ids to the parent frame.
pub(crate) struct Relabel<'a> {
    pub map: &'a [Agent],
    pub out: &'a mut dyn Sink,
}

impl Sink for Relabel<'_> {
    fn swap(&mut self, u: Agent, v: Agent) -> Result<()> {
        self.out.swap(self.map[u], self.map[v])
    }
}

/// Keeps an assignment in step with the moves passing through.
pub(crate) struct Track<'a> {
    pub state: &'a mut Vec<Item>,
    pub out: &'a mut dyn Sink,
}

impl Sink for Track<'_> {
    fn swap(&mut self, u: Agent, v: Agent) -> Result<()> {
        self.state.swap(u, v);
        self.out.swap(u, v)
    }
}

/// Collects moves, failing once more than `cap` arrive.
pub(crate) struct Buffer {
    pub moves: Vec<(Agent, Agent)>,
    cap: usize,
}

impl Buffer {
    pub fn new(cap: usize) -> Self {
        Buffer {
            moves: Vec::new(),
            cap,
        }
    }
}

impl Sink for Buffer {
    fn swap(&mut self, u: Agent, v: Agent) -> Result<()> {
        if self.moves.len() >= self.cap {
            return Err(Error::CapExceeded(self.cap));
        }
        self.moves.push((u, v));
        Ok(())
    }
}

fn invariant(what: &str) -> Error {
    Error::Invariant(what.to_string())
}

/// Emits a swap sequence turning `from` into `to`.
pub(crate) fn reconfigure(
    f: &Frame,
    from: &[Item],
    to: &[Item],
    cap: usize,
    sink: &mut dyn Sink,
) -> Result<()> {
    if from == to {
        return Ok(());
    }
    match find_case1(f) {
        Some(x) => case1(f, &x, from, to, cap, sink),
        None => case2(f, from, to, cap, sink),
    }
}

/// A minimum-size item set `X` (ties broken lexicographically) with
/// `|N_X| = |X| + 1` and `N_X ≠ N`.
///
/// For an agent `k` outside `N_X` and an agent `i` inside it, `X` is a
/// tight set of the items `k` rejects when matched into the agents other
/// than `i`. Tight sets of a matching are the item sets closed under
/// "acceptor, then that acceptor's matched item" that never reach an
/// unmatched acceptor, so the smallest one is a sink component.
pub(crate) fn find_case1(f: &Frame) -> Option<Vec<Item>> {
    find_case1_within(f, None)
}

/// As [`find_case1`], looking only at subsets of the items flagged in
/// `allowed`.
pub(crate) fn find_case1_within(f: &Frame, allowed: Option<&[bool]>) -> Option<Vec<Item>> {
    let n = f.len();
    if n < 3 {
        return None;
    }
    let options = |j: usize| f.accept[j].as_slice();
    let mut best: Option<Vec<Item>> = None;
    let mut local = vec![0; n];
    let mut touched = vec![false; n];
    for k in 0..n {
        let avoid: Vec<Item> = (0..n)
            .filter(|&j| !f.accepts(k, j) && allowed.is_none_or(|a| a[j]))
            .collect();
        if avoid.is_empty() {
            continue;
        }
        if best.as_ref().is_some_and(|b| b.len() == 1 && b[0] <= avoid[0]) {
            continue;
        }
        touched.iter_mut().for_each(|t| *t = false);
        for (p, &j) in avoid.iter().enumerate() {
            local[j] = p;
            for &t in &f.accept[j] {
                touched[t] = true;
            }
        }
        let mut base = Augmenter::new(n, n);
        if !avoid.iter().all(|&j| base.augment(j, options, |_| true)) {
            continue;
        }
        for (i, &hit) in touched.iter().enumerate() {
            if i == k || !hit {
                continue;
            }
            let mut m = base.clone();
            if let Some(j0) = m.owner(i) {
                m.release_right(i);
                if !m.augment(j0, options, |t| t != i) {
                    continue;
                }
            }
            let mut escaping = vec![false; avoid.len()];
            let mut g = Csr::with_capacity(avoid.len());
            for (p, &j) in avoid.iter().enumerate() {
                let mut row = Vec::with_capacity(f.accept[j].len());
                for &t in &f.accept[j] {
                    if t == i {
                        continue;
                    }
                    match m.owner(t) {
                        Some(o) => row.push(local[o]),
                        None => escaping[p] = true,
                    }
                }
                g.push_row(row);
            }
            let Some(comp) = smallest_sink_component(&g, Some(&escaping)) else {
                continue;
            };
            let x: Vec<Item> = comp.into_iter().map(|p| avoid[p]).collect();
            let better = match &best {
                None => true,
                Some(b) => x.len() < b.len() || (x.len() == b.len() && x < *b),
            };
            if better && region_of(f, &x).len() == x.len() + 1 {
                best = Some(x);
            }
        }
    }
    best
}

/// `N_X`, ascending.
pub(crate) fn region_of(f: &Frame, x: &[Item]) -> Vec<Agent> {
    let mut out: Vec<Agent> = x.iter().flat_map(|&j| f.accept[j].iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn full_assignment(f: &Frame, forced: &[(Agent, Item)]) -> Result<Vec<Item>> {
    let n = f.len();
    let all: Vec<usize> = (0..n).collect();
    let pairs = complete_matching(n, &all, &all, forced, |i| f.acceptable[i].as_slice())
        .ok_or_else(|| invariant("no assignment extends the forced pairs"))?;
    Ok(pairs.into_iter().map(|(_, j)| j).collect())
}

pub(crate) fn case2(f: &Frame, from: &[Item], to: &[Item], cap: usize, sink: &mut dyn Sink) -> Result<()> {
    let n = f.len();
    if n == 2 {
        return sink.swap(0, 1);
    }
    let leaves = f.leaves();
    if let Some(&l) = leaves.iter().find(|&&l| from[l] == to[l]) {
        return strip_leaf(f, l, from, to, cap, sink);
    }
    if let Some((l, l2)) = leaf_pair(&leaves, from, to) {
        return exchange_via_leaves(f, l, l2, from, to, cap, sink);
    }
    // A path whose two end items trade places.
    let [l, l2] = leaves[..] else {
        return Err(invariant("leaf pair missing in a tree with three or more leaves"));
    };
    let q = f.adj[l][0];
    let c = full_assignment(f, &[(l, from[l]), (q, from[l2])])?;
    strip_leaf(f, l, from, &c, cap, sink)?;
    exchange_via_leaves(f, l, l2, &c, to, cap, sink)
}

/// First pair of distinct leaves `(l, l2)` with `from(l2) ≠ to(l)`.
fn leaf_pair(leaves: &[Agent], from: &[Item], to: &[Item]) -> Option<(Agent, Agent)> {
    leaves.iter().find_map(|&l| {
        leaves
            .iter()
            .find(|&&l2| l2 != l && from[l2] != to[l])
            .map(|&l2| (l, l2))
    })
}

/// Goes through an assignment that agrees with `from` on `l2` and with
/// `to` on `l`.
fn exchange_via_leaves(
    f: &Frame,
    l: Agent,
    l2: Agent,
    from: &[Item],
    to: &[Item],
    cap: usize,
    sink: &mut dyn Sink,
) -> Result<()> {
    let c = full_assignment(f, &[(l2, from[l2]), (l, to[l])])?;
    strip_leaf(f, l2, from, &c, cap, sink)?;
    strip_leaf(f, l, &c, to, cap, sink)
}

/// Reconfigures with the leaf `l` and its common item left untouched.
fn strip_leaf(
    f: &Frame,
    l: Agent,
    from: &[Item],
    to: &[Item],
    cap: usize,
    sink: &mut dyn Sink,
) -> Result<()> {
    debug_assert_eq!(from[l], to[l]);
    let n = f.len();
    let agents: Vec<Agent> = (0..n).filter(|&i| i != l).collect();
    let items: Vec<Item> = (0..n).filter(|&j| j != from[l]).collect();
    let sub = f.restrict(&agents, &items);
    let pos = positions(n, &items);
    reconfigure(
        &sub,
        &localize(from, &agents, &pos),
        &localize(to, &agents, &pos),
        cap,
        &mut Relabel {
            map: &agents,
            out: sink,
        },
    )
}

/// The region `R = N_X` of a Case 1 set together with its membership masks.
pub(crate) struct RegionCtx<'a> {
    pub x: &'a [Item],
    pub agents: Vec<Agent>,
    pub in_region: Vec<bool>,
    pub in_x: Vec<bool>,
}

impl<'a> RegionCtx<'a> {
    pub fn new(f: &Frame, x: &'a [Item]) -> Self {
        let n = f.len();
        let agents = region_of(f, x);
        let mut in_region = vec![false; n];
        for &i in &agents {
            in_region[i] = true;
        }
        let mut in_x = vec![false; n];
        for &j in x {
            in_x[j] = true;
        }
        RegionCtx {
            x,
            agents,
            in_region,
            in_x,
        }
    }

    /// The one item of `c(R)` outside `X`.
    pub fn extra_item(&self, c: &[Item]) -> Result<Item> {
        self.agents
            .iter()
            .map(|&i| c[i])
            .find(|&j| !self.in_x[j])
            .ok_or_else(|| invariant("region holds no item outside X"))
    }

    fn items_with(&self, j: Item) -> Vec<Item> {
        let mut items = self.x.to_vec();
        items.push(j);
        items.sort_unstable();
        items
    }

    /// An assignment in `R` using `j` with `i ↦ j`, applied on top of `c`.
    pub fn assignment(&self, f: &Frame, c: &[Item], j: Item, i: Agent) -> Result<Vec<Item>> {
        let items = self.items_with(j);
        let pairs = complete_matching(f.len(), &self.agents, &items, &[(i, j)], |a| {
            f.acceptable[a].as_slice()
        })
        .ok_or_else(|| invariant("no assignment in the region with the forced pair"))?;
        let mut out = c.to_vec();
        for (a, it) in pairs {
            out[a] = it;
        }
        Ok(out)
    }

    /// Moves `cur` to `goal` inside `G[R]`; the two must agree outside `R`
    /// and use the same extra item.
    pub fn route(
        &self,
        f: &Frame,
        cur: &mut Vec<Item>,
        goal: &[Item],
        cap: usize,
        sink: &mut dyn Sink,
    ) -> Result<()> {
        let items = self.items_with(self.extra_item(cur)?);
        let sub = f.restrict(&self.agents, &items);
        let pos = positions(f.len(), &items);
        let from = localize(cur, &self.agents, &pos);
        let to = localize(goal, &self.agents, &pos);
        reconfigure(
            &sub,
            &from,
            &to,
            cap,
            &mut Relabel {
                map: &self.agents,
                out: &mut Track { state: cur, out: sink },
            },
        )
    }

    /// Moves `c` to an assignment whose extra item `j*` has at least two
    /// acceptors in `R`. Returns the new assignment and `j*`.
    pub fn normalize_extra(
        &self,
        f: &Frame,
        c: &[Item],
        cap: usize,
        sink: &mut dyn Sink,
    ) -> Result<(Vec<Item>, Item)> {
        let n = f.len();
        let q = *self
            .agents
            .iter()
            .find(|&&i| !self.in_x[c[i]])
            .ok_or_else(|| invariant("region holds no item outside X"))?;
        let jq = c[q];
        if f.accept[jq].iter().filter(|&&i| self.in_region[i]).count() >= 2 {
            return Ok((c.to_vec(), jq));
        }
        // Q: the part of the tree hanging off q away from the region.
        let mut in_q = vec![false; n];
        in_q[q] = true;
        let mut stack = vec![q];
        let mut q_agents = vec![q];
        while let Some(u) = stack.pop() {
            for &v in &f.adj[u] {
                if in_q[v] || (self.in_region[u] && self.in_region[v]) {
                    continue;
                }
                in_q[v] = true;
                q_agents.push(v);
                stack.push(v);
            }
        }
        q_agents.sort_unstable();
        let mut q_items: Vec<Item> = q_agents.iter().map(|&i| c[i]).collect();
        q_items.sort_unstable();
        let pos = positions(n, &q_items);
        let mut g = Csr::with_capacity(q_items.len());
        for &j in &q_items {
            g.push_row(
                f.accept[j]
                    .iter()
                    .filter(|&&t| in_q[t])
                    .map(|&t| pos[c[t]].expect("agent of Q holds an item of c(Q)")),
            );
        }
        let y: Vec<Item> = smallest_sink_component(&g, None)
            .ok_or_else(|| invariant("empty component side"))?
            .into_iter()
            .map(|p| q_items[p])
            .collect();
        let j_star = *y
            .iter()
            .find(|&&j| f.accept[j].iter().any(|&t| !in_q[t]))
            .ok_or_else(|| invariant("tight set inside Q is stable"))?;
        let mut holder = vec![0; n];
        for &i in &q_agents {
            holder[c[i]] = i;
        }
        let mut y_agents: Vec<Agent> = y.iter().map(|&j| holder[j]).collect();
        y_agents.sort_unstable();
        if y_agents.binary_search(&q).is_err() {
            return Err(invariant("q does not hold an item of Y"));
        }
        let pairs = complete_matching(n, &y_agents, &y, &[(q, j_star)], |a| {
            f.acceptable[a].as_slice()
        })
        .ok_or_else(|| invariant("no assignment of Y sending j* to q"))?;
        let mut goal = c.to_vec();
        for (a, it) in pairs {
            goal[a] = it;
        }
        let sub = f.restrict(&y_agents, &y);
        let ypos = positions(n, &y);
        reconfigure(
            &sub,
            &localize(c, &y_agents, &ypos),
            &localize(&goal, &y_agents, &ypos),
            cap,
            &mut Relabel {
                map: &y_agents,
                out: sink,
            },
        )?;
        Ok((goal, j_star))
    }
}

/// The frame with the region contracted to one vertex `r`, which takes the
/// local id of the smallest region agent.
pub(crate) struct Shrunk {
    pub frame: Frame,
    /// Shrunk agent -> frame agent; `r` maps to the smallest region agent.
    pub agents: Vec<Agent>,
    pub r: Agent,
    item_pos: Vec<Option<usize>>,
    agent_pos: Vec<usize>,
}

impl Shrunk {
    pub fn new(f: &Frame, region: &RegionCtx) -> Self {
        let n = f.len();
        let rep = region.agents[0];
        let agents: Vec<Agent> = (0..n).filter(|&i| !region.in_region[i] || i == rep).collect();
        let mut agent_pos = vec![0; n];
        for (k, &i) in agents.iter().enumerate() {
            agent_pos[i] = k;
        }
        let r = agent_pos[rep];
        for &i in &region.agents {
            agent_pos[i] = r;
        }
        let items: Vec<Item> = (0..n).filter(|&j| !region.in_x[j]).collect();
        let accept = items
            .iter()
            .map(|&j| f.accept[j].iter().map(|&i| agent_pos[i]).collect())
            .collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for &v in &f.adj[u] {
                let (pu, pv) = (agent_pos[u], agent_pos[v]);
                if u < v && pu != pv {
                    edges.push((pu, pv));
                }
            }
        }
        let item_pos = positions(n, &items);
        Shrunk {
            frame: Frame::from_parts(accept, &edges),
            agents,
            r,
            item_pos,
            agent_pos,
        }
    }

    /// The shrunk image of a frame assignment.
    pub fn project(&self, region: &RegionCtx, c: &[Item]) -> Result<Vec<Item>> {
        let extra = region.extra_item(c)?;
        Ok(self
            .agents
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let j = if k == self.r { extra } else { c[i] };
                self.item_pos[j].expect("item of X outside the region")
            })
            .collect())
    }

    pub fn shrunk_agent(&self, i: Agent) -> Agent {
        self.agent_pos[i]
    }
}

/// Replays shrunk moves in the full frame.
pub(crate) struct Lifter<'a> {
    pub f: &'a Frame,
    pub region: &'a RegionCtx<'a>,
    pub shrunk: &'a Shrunk,
    pub cur: Vec<Item>,
    pub cap: usize,
    pub out: &'a mut dyn Sink,
}

impl Sink for Lifter<'_> {
    fn swap(&mut self, u: Agent, v: Agent) -> Result<()> {
        let r = self.shrunk.r;
        if u != r && v != r {
            let (gu, gv) = (self.shrunk.agents[u], self.shrunk.agents[v]);
            self.cur.swap(gu, gv);
            return self.out.swap(gu, gv);
        }
        let i = self.shrunk.agents[if u == r { v } else { u }];
        lift_boundary(self.f, self.region, &mut self.cur, i, self.cap, self.out)
    }
}

/// Carries out a shrunk move between `r` and the outside agent `i`: the
/// extra item is first brought to the region agent next to `i`, then
/// traded across the boundary edge.
pub(crate) fn lift_boundary(
    f: &Frame,
    region: &RegionCtx,
    cur: &mut Vec<Item>,
    i: Agent,
    cap: usize,
    out: &mut dyn Sink,
) -> Result<()> {
    let q = *f.adj[i]
        .iter()
        .find(|&&w| region.in_region[w])
        .ok_or_else(|| invariant("boundary agent has no neighbour in the region"))?;
    let j = region.extra_item(cur)?;
    if cur[q] != j {
        let goal = region.assignment(f, cur, j, q)?;
        region.route(f, cur, &goal, cap, out)?;
    }
    cur.swap(i, q);
    out.swap(i, q)
}

pub(crate) fn case1(
    f: &Frame,
    x: &[Item],
    from: &[Item],
    to: &[Item],
    cap: usize,
    sink: &mut dyn Sink,
) -> Result<()> {
    let region = RegionCtx::new(f, x);
    let mut buffer = Buffer::new(cap);
    let (b_star, j_star) = region.normalize_extra(f, to, cap, &mut buffer)?;
    let shrunk = Shrunk::new(f, &region);
    let from_s = shrunk.project(&region, from)?;
    let to_s = shrunk.project(&region, &b_star)?;
    let mut lifter = Lifter {
        f,
        region: &region,
        shrunk: &shrunk,
        cur: from.to_vec(),
        cap,
        out: sink,
    };
    reconfigure(&shrunk.frame, &from_s, &to_s, cap, &mut lifter)?;
    let mut cur = lifter.cur;
    debug_assert_eq!(region.extra_item(&cur)?, j_star);
    region.route(f, &mut cur, &b_star, cap, sink)?;
    for &(u, v) in buffer.moves.iter().rev() {
        sink.swap(u, v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Replay<'a> {
        f: &'a Frame,
        state: Vec<Item>,
        moves: usize,
    }

    impl Sink for Replay<'_> {
        fn swap(&mut self, u: Agent, v: Agent) -> Result<()> {
            let ok = self.f.adj[u].contains(&v)
                && self.f.accepts(u, self.state[v])
                && self.f.accepts(v, self.state[u]);
            if !ok {
                return Err(Error::IllegalSwap { first: u, second: v });
            }
            self.state.swap(u, v);
            self.moves += 1;
            Ok(())
        }
    }

    fn run(f: &Frame, from: &[Item], to: &[Item]) -> usize {
        let mut sink = Replay {
            f,
            state: from.to_vec(),
            moves: 0,
        };
        reconfigure(f, from, to, 1_000_000, &mut sink).unwrap();
        assert_eq!(sink.state, to);
        sink.moves
    }

    fn complete_path(n: usize) -> Frame {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Frame::from_parts(vec![(0..n).collect(); n], &edges)
    }

    #[test]
    fn two_agents_swap_once() {
        assert_eq!(run(&complete_path(2), &[0, 1], &[1, 0]), 1);
    }

    #[test]
    fn path_reversal() {
        let f = complete_path(4);
        assert_eq!(find_case1(&f), None);
        run(&f, &[0, 1, 2, 3], &[3, 2, 1, 0]);
    }

    #[test]
    fn star_three_cycle() {
        // K_{1,3} with centre 0, everything acceptable to everyone
        let f = Frame::from_parts(vec![(0..4).collect(); 4], &[(0, 1), (0, 2), (0, 3)]);
        run(&f, &[0, 1, 2, 3], &[0, 2, 3, 1]);
    }

    #[test]
    fn case1_set_on_path() {
        // path 0-1-2, item 0 acceptable to {0,1}, others to everyone
        let f = Frame::from_parts(vec![vec![0, 1], vec![0, 1, 2], vec![0, 1, 2]], &[(0, 1), (1, 2)]);
        assert_eq!(find_case1(&f), Some(vec![0]));
        run(&f, &[0, 1, 2], &[0, 2, 1]);
        run(&f, &[2, 0, 1], &[1, 0, 2]);
    }

    #[test]
    fn cap_is_enforced_by_buffers() {
        let mut b = Buffer::new(1);
        b.swap(0, 1).unwrap();
        assert_eq!(b.swap(0, 1), Err(Error::CapExceeded(1)));
    }
}
