//! Explicit reconfiguration sequences for yes-instances on trees.
//!
//! The tree solver splits a yes-instance into leaves without a proper
//! stable set; inside each leaf every assignment reaches every other one,
//! and the sequence is built by induction on the number of agents. Two
//! situations drive the induction:
//!
//! * some item set `X` has exactly one spare acceptor (`|N_X| = |X| + 1`,
//!   `N_X ≠ N`). The region `R = N_X` is contracted to a single agent,
//!   the contracted instance is solved, and each of its moves is replayed
//!   in the original graph, rearranging `R` when the extra item has to
//!   leave or enter it;
//! * otherwise every set has two spare acceptors, and agreeing leaves can
//!   be peeled off one at a time.
//!
//! Sequences can be exponentially long, so construction stops at a move
//! cap.

mod construct;
mod frame;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{induced_components, is_tree, Marks};
use crate::instance::{legal_swap, replay, Agent, Assignment, Instance, Item, SwapMove};
use crate::matching::constrained_matching;
use crate::normalize::{normalize, Normalization};
use crate::stable_sets::{acceptors_of, min_proper_stable};
use crate::tree_solver::{solve_normalized, Decision};

use construct::{
    find_case1, find_case1_within, lift_boundary, reconfigure, RegionCtx, Relabel, Shrunk, Sink,
};
use frame::{localize, positions, Frame};

pub const DEFAULT_CAP: usize = 1_000_000;

/// A swap sequence together with its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconfigSequence {
    pub start: Assignment,
    pub end: Assignment,
    pub moves: Vec<SwapMove>,
}

impl ReconfigSequence {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Replays the moves from `start` and checks that they end at `end`.
    pub fn verify(&self, inst: &Instance) -> Result<()> {
        let reached = replay(inst, &self.start, &self.moves)?;
        if reached != self.end {
            return Err(Error::InvalidSequence {
                step: self.moves.len(),
                reason: "sequence does not end at the recorded assignment".into(),
            });
        }
        Ok(())
    }
}

/// Validates and forwards every move, tracking the current assignment.
struct Root<'a> {
    inst: &'a Instance,
    state: Assignment,
    count: usize,
    cap: usize,
    emit: &'a mut dyn FnMut(SwapMove) -> Result<()>,
}

impl Sink for Root<'_> {
    fn swap(&mut self, u: Agent, v: Agent) -> Result<()> {
        if self.count >= self.cap {
            return Err(Error::CapExceeded(self.cap));
        }
        let m = SwapMove::new(u, v);
        if !legal_swap(self.inst, &self.state, m) {
            return Err(Error::Invariant(format!(
                "construction produced an illegal swap of {} and {}",
                self.inst.agent_name(u),
                self.inst.agent_name(v)
            )));
        }
        self.state.swap_agents(u, v);
        self.count += 1;
        (self.emit)(m)
    }
}

/// Builds a sequence from `a` to `b`, failing with
/// [`Error::NotYesInstance`] when none exists.
pub fn build_witness(inst: &Instance, cap: usize) -> Result<ReconfigSequence> {
    let mut moves = Vec::new();
    stream_witness(inst, cap, &mut |m| {
        moves.push(m);
        Ok(())
    })?;
    Ok(ReconfigSequence {
        start: inst.source().clone(),
        end: inst.target().clone(),
        moves,
    })
}

/// As [`build_witness`], handing each move to `emit` as soon as it is
/// known. Returns the number of moves.
pub fn stream_witness(
    inst: &Instance,
    cap: usize,
    emit: &mut dyn FnMut(SwapMove) -> Result<()>,
) -> Result<usize> {
    if !is_tree(inst.adjacency()) {
        return Err(Error::NotATree);
    }
    let norm = match normalize(inst) {
        Normalization::Normalized(norm) => norm,
        Normalization::ImmediateNo(_) => return Err(Error::NotYesInstance),
    };
    let leaves = match solve_normalized(&norm)? {
        Decision::Yes(cert) => cert.leaves,
        Decision::No(_) => return Err(Error::NotYesInstance),
    };
    let whole = Frame::from_instance(&norm);
    let a = norm.source().items();
    let b = norm.target().items();
    let mut root = Root {
        inst: &norm,
        state: norm.source().clone(),
        count: 0,
        cap,
        emit,
    };
    for leaf in &leaves {
        let f = whole.restrict(&leaf.agents, &leaf.items);
        let pos = positions(norm.len(), &leaf.items);
        reconfigure(
            &f,
            &localize(a, &leaf.agents, &pos),
            &localize(b, &leaf.agents, &pos),
            cap,
            &mut Relabel {
                map: &leaf.agents,
                out: &mut root,
            },
        )?;
    }
    if root.state != *norm.target() {
        return Err(Error::Invariant("sequence does not end at b".into()));
    }
    Ok(root.count)
}

/// Checks that `inst` is one undivided piece of the construction: a tree,
/// every `G[N_j]` connected, and no proper stable set.
fn leaf_frame(inst: &Instance) -> Result<Frame> {
    if !is_tree(inst.adjacency()) {
        return Err(Error::NotATree);
    }
    match normalize(inst) {
        Normalization::ImmediateNo(_) => return Err(Error::NotYesInstance),
        Normalization::Normalized(norm) if norm != *inst => {
            return Err(Error::Precondition(
                "every acceptability set must induce a connected subgraph".into(),
            ))
        }
        Normalization::Normalized(_) => {}
    }
    if min_proper_stable(inst).is_some() {
        return Err(Error::Precondition("instance has a proper stable set".into()));
    }
    Ok(Frame::from_instance(inst))
}

/// Runs `body` against a validating sink starting at `start` and packages
/// the moves.
fn collect(
    inst: &Instance,
    start: &Assignment,
    cap: usize,
    body: impl FnOnce(&mut dyn Sink) -> Result<()>,
) -> Result<ReconfigSequence> {
    let mut moves = Vec::new();
    let mut emit = |m: SwapMove| {
        moves.push(m);
        Ok(())
    };
    let mut root = Root {
        inst,
        state: start.clone(),
        count: 0,
        cap,
        emit: &mut emit,
    };
    body(&mut root)?;
    let end = root.state;
    Ok(ReconfigSequence {
        start: start.clone(),
        end,
        moves,
    })
}

/// The agent set `R = N_X` of an item set `X` with `|N_X| = |X| + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    agents: Vec<Agent>,
    items: Vec<Item>,
}

impl Region {
    /// Checks that `items` has exactly one spare acceptor, does not cover
    /// every agent, and induces a connected subgraph.
    pub fn new(inst: &Instance, items: &[Item]) -> Result<Region> {
        let mut items = items.to_vec();
        items.sort_unstable();
        items.dedup();
        if items.is_empty() {
            return Err(Error::EmptySet);
        }
        if items.iter().any(|&j| j >= inst.len()) {
            return Err(Error::Precondition("item out of range".into()));
        }
        let agents = acceptors_of(inst, &items);
        if agents.len() != items.len() + 1 || agents.len() == inst.len() {
            return Err(Error::Precondition(
                "region needs exactly one more acceptor than items and must miss some agent"
                    .into(),
            ));
        }
        let mut inside = vec![false; inst.len()];
        for &i in &agents {
            inside[i] = true;
        }
        let mut marks = Marks::new(inst.len());
        if induced_components(inst.adjacency(), &agents, |v| inside[v], &mut marks).len() != 1 {
            return Err(Error::NotConnectedRegion);
        }
        Ok(Region { agents, items })
    }

    /// The minimum-size region of `inst` (ties broken lexicographically on
    /// items), or `None` when every item set has two spare acceptors or
    /// covers all agents.
    pub fn find(inst: &Instance) -> Result<Option<Region>> {
        let f = leaf_frame(inst)?;
        find_case1(&f).map(|x| Region::new(inst, &x)).transpose()
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// The agent standing for the whole region once it is contracted.
    pub fn representative(&self) -> Agent {
        self.agents[0]
    }

    /// The item of `c(R)` outside `X`.
    pub fn extra_item(&self, c: &Assignment) -> Item {
        self.agents
            .iter()
            .map(|&i| c.item(i))
            .find(|j| self.items.binary_search(j).is_err())
            .expect("a region holds one item more than its item set")
    }

    fn ctx(&self, inst: &Instance) -> RegionCtx<'_> {
        let n = inst.len();
        let mut in_region = vec![false; n];
        for &i in &self.agents {
            in_region[i] = true;
        }
        let mut in_x = vec![false; n];
        for &j in &self.items {
            in_x[j] = true;
        }
        RegionCtx {
            x: &self.items,
            agents: self.agents.clone(),
            in_region,
            in_x,
        }
    }
}

fn check_minimal(f: &Frame, region: &Region) -> Result<()> {
    let mut allowed = vec![false; f.len()];
    for &j in region.items() {
        allowed[j] = true;
    }
    match find_case1_within(f, Some(&allowed)) {
        Some(x) if x.len() < region.items().len() => Err(Error::Precondition(
            "region item set is not inclusion-minimal".into(),
        )),
        _ => Ok(()),
    }
}

/// The Case 1 construction around `region`, whose item set must be
/// inclusion-minimal.
pub fn witness_case1(inst: &Instance, region: &Region, cap: usize) -> Result<ReconfigSequence> {
    let f = leaf_frame(inst)?;
    check_minimal(&f, region)?;
    let (a, b) = (inst.source().items(), inst.target().items());
    collect(inst, inst.source(), cap, |sink| {
        if a == b {
            return Ok(());
        }
        construct::case1(&f, region.items(), a, b, cap, sink)
    })
}

/// The Case 2 construction; fails when some region exists.
pub fn witness_case2(inst: &Instance, cap: usize) -> Result<ReconfigSequence> {
    let f = leaf_frame(inst)?;
    if find_case1(&f).is_some() {
        return Err(Error::Precondition(
            "an item set with exactly one spare acceptor exists".into(),
        ));
    }
    let (a, b) = (inst.source().items(), inst.target().items());
    collect(inst, inst.source(), cap, |sink| {
        if a == b {
            return Ok(());
        }
        construct::case2(&f, a, b, cap, sink)
    })
}

/// An assignment of `R` onto `X ∪ {j}` that gives `j` to `i`.
pub fn region_assignment(
    inst: &Instance,
    region: &Region,
    j: Item,
    i: Agent,
) -> Result<BTreeMap<Agent, Item>> {
    if j >= inst.len() || region.items.binary_search(&j).is_ok() {
        return Err(Error::Precondition("item must lie outside the region's item set".into()));
    }
    if region.agents.binary_search(&i).is_err() || !inst.accepts(i, j) {
        return Err(Error::Precondition("agent must be a region agent accepting the item".into()));
    }
    let mut items = region.items.clone();
    items.push(j);
    let forced = BTreeMap::from([(i, j)]);
    constrained_matching(inst, &region.agents, &items, &forced, &[])?
        .ok_or_else(|| Error::Invariant("no region assignment with the forced pair".into()))
}

/// Rearranges `R` from `from|R` to `to|R` inside `G[R]`. Both must place
/// the same extra item in the region, and unless they already agree on `R`
/// that item needs at least two acceptors in `R`. Agents outside `R` keep
/// their items from `from`.
pub fn region_route(
    inst: &Instance,
    region: &Region,
    from: &Assignment,
    to: &Assignment,
    cap: usize,
) -> Result<ReconfigSequence> {
    let f = leaf_frame(inst)?;
    inst.check_assignment("from", from)?;
    inst.check_assignment("to", to)?;
    let j = region.extra_item(from);
    if region.extra_item(to) != j {
        return Err(Error::Precondition("both assignments must use the same extra item".into()));
    }
    let same = region.agents.iter().all(|&i| from.item(i) == to.item(i));
    let spare = inst
        .acceptors(j)
        .iter()
        .filter(|i| region.agents.binary_search(i).is_ok())
        .count();
    if !same && spare < 2 {
        return Err(Error::Precondition("extra item has fewer than two acceptors in the region".into()));
    }
    let ctx = region.ctx(inst);
    let mut goal = from.items().to_vec();
    for &i in &region.agents {
        goal[i] = to.item(i);
    }
    collect(inst, from, cap, |sink| {
        let mut cur = from.items().to_vec();
        ctx.route(&f, &mut cur, &goal, cap, sink)
    })
}

/// Moves `c` to an assignment `c*` whose extra item `j*` has at least two
/// acceptors in `R`. Returns the sequence, `c*` and `j*`.
pub fn normalize_component_item(
    inst: &Instance,
    region: &Region,
    c: &Assignment,
    cap: usize,
) -> Result<(ReconfigSequence, Assignment, Item)> {
    let f = leaf_frame(inst)?;
    check_minimal(&f, region)?;
    inst.check_assignment("c", c)?;
    let ctx = region.ctx(inst);
    let mut out = None;
    let seq = collect(inst, c, cap, |sink| {
        out = Some(ctx.normalize_extra(&f, c.items(), cap, sink)?);
        Ok(())
    })?;
    let (c_star, j_star) = out.expect("set on success");
    let c_star = Assignment::from_items(c_star)?;
    debug_assert_eq!(seq.end, c_star);
    Ok((seq, c_star, j_star))
}

/// Replays one move of the contracted instance at `current`. The move is
/// given in the ids of `inst`, with the region's representative standing
/// for the contracted vertex.
pub fn lift_step(
    inst: &Instance,
    region: &Region,
    shrunk_move: SwapMove,
    current: &Assignment,
    cap: usize,
) -> Result<ReconfigSequence> {
    let f = leaf_frame(inst)?;
    check_minimal(&f, region)?;
    inst.check_assignment("current", current)?;
    let ctx = region.ctx(inst);
    let shrunk = Shrunk::new(&f, &ctx);
    let (u, v) = (shrunk_move.first, shrunk_move.second);
    let rep = region.representative();
    for w in [u, v] {
        if w >= inst.len() || (ctx.in_region[w] && w != rep) {
            return Err(Error::Precondition(
                "shrunk move must use the representative for the region".into(),
            ));
        }
    }
    let state = shrunk.project(&ctx, current.items())?;
    let (su, sv) = (shrunk.shrunk_agent(u), shrunk.shrunk_agent(v));
    let legal = su != sv
        && shrunk.frame.adj[su].contains(&sv)
        && shrunk.frame.accepts(su, state[sv])
        && shrunk.frame.accepts(sv, state[su]);
    if !legal {
        return Err(Error::Precondition("move is not legal in the contracted instance".into()));
    }
    collect(inst, current, cap, |sink| {
        let mut cur = current.items().to_vec();
        if u != rep && v != rep {
            return sink.swap(u, v);
        }
        let i = if u == rep { v } else { u };
        lift_boundary(&f, &ctx, &mut cur, i, cap, sink)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;
    use crate::oracle::{bfs_reachable, DEFAULT_BUDGET};

    fn fixture(name: &str) -> Instance {
        let text = match name {
            "e1" => include_str!("../../tests/fixtures/e1.txt"),
            "e2" => include_str!("../../tests/fixtures/e2.txt"),
            "e3" => include_str!("../../tests/fixtures/e3.txt"),
            _ => include_str!("../../tests/fixtures/e4.txt"),
        };
        parse_instance(text).unwrap()
    }

    fn path_all(n: usize, a: &[usize], b: &[usize]) -> Instance {
        let names: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        let items: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Instance::new(names, items, vec![(0..n).collect(); n], &edges, a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn fixture_witnesses() {
        for name in ["e1", "e2", "e4"] {
            let inst = fixture(name);
            let seq = build_witness(&inst, DEFAULT_CAP).unwrap();
            seq.verify(&inst).unwrap();
            let d = bfs_reachable(&inst, DEFAULT_BUDGET).distance().unwrap();
            assert!(d <= seq.len());
        }
        assert!(build_witness(&fixture("e4"), DEFAULT_CAP).unwrap().is_empty());
        assert_eq!(build_witness(&fixture("e3"), DEFAULT_CAP), Err(Error::NotYesInstance));
    }

    #[test]
    fn cap_exceeded() {
        let inst = path_all(4, &[0, 1, 2, 3], &[3, 2, 1, 0]);
        assert_eq!(build_witness(&inst, 2), Err(Error::CapExceeded(2)));
    }

    #[test]
    fn e1_is_a_case1_instance() {
        let e1 = fixture("e1");
        let region = Region::find(&e1).unwrap().unwrap();
        assert_eq!(region.items(), [0]);
        assert_eq!(region.agents(), [0, 1]);
        assert!(matches!(witness_case2(&e1, DEFAULT_CAP), Err(Error::Precondition(_))));
        let seq = witness_case1(&e1, &region, DEFAULT_CAP).unwrap();
        seq.verify(&e1).unwrap();
        assert_eq!(&seq.end, e1.target());
    }

    #[test]
    fn case2_branches() {
        // path of three with the end items traded
        let inst = path_all(3, &[0, 1, 2], &[2, 1, 0]);
        let seq = witness_case2(&inst, DEFAULT_CAP).unwrap();
        seq.verify(&inst).unwrap();
        assert_eq!(&seq.end, inst.target());
        // star with a 3-cycle of the leaf items
        let names: Vec<String> = (1..=4).map(|k| k.to_string()).collect();
        let items: Vec<String> = (1..=4).map(|k| format!("x{k}")).collect();
        let star = Instance::new(
            names,
            items,
            vec![(0..4).collect(); 4],
            &[(0, 1), (0, 2), (0, 3)],
            vec![0, 1, 2, 3],
            vec![0, 2, 3, 1],
        )
        .unwrap();
        let seq = witness_case2(&star, DEFAULT_CAP).unwrap();
        seq.verify(&star).unwrap();
        assert_eq!(&seq.end, star.target());
    }

    #[test]
    fn region_helpers_on_e1() {
        let e1 = fixture("e1");
        let region = Region::new(&e1, &[0]).unwrap();
        assert_eq!(region.representative(), 0);
        assert_eq!(region.extra_item(e1.source()), 1);
        let c = region_assignment(&e1, &region, 1, 0).unwrap();
        assert_eq!(c, BTreeMap::from([(0, 1), (1, 0)]));
        let seq = region_route(&e1, &region, e1.source(), e1.target(), DEFAULT_CAP).unwrap();
        assert_eq!(seq.moves, [SwapMove::new(0, 1)]);
        let same = region_route(&e1, &region, e1.source(), e1.source(), DEFAULT_CAP).unwrap();
        assert!(same.is_empty());
        // y has acceptors 1 and 2 in R = {1,2}, so nothing to do
        let (seq, c_star, j) = normalize_component_item(&e1, &region, e1.target(), DEFAULT_CAP).unwrap();
        assert!(seq.is_empty());
        assert_eq!((&c_star, j), (e1.target(), 1));
        assert!(matches!(region_assignment(&e1, &region, 0, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn lift_steps_on_e1() {
        let e1 = fixture("e1");
        let region = Region::new(&e1, &[0]).unwrap();
        // y already sits at agent 2, next to agent 3
        let seq = lift_step(&e1, &region, SwapMove::new(0, 2), e1.source(), DEFAULT_CAP).unwrap();
        assert_eq!(seq.len(), 1);
        assert_eq!(seq.end.item(2), 1);
        // under b agent 1 holds y, which has to move to agent 2 first
        let seq = lift_step(&e1, &region, SwapMove::new(2, 0), e1.target(), DEFAULT_CAP).unwrap();
        seq.verify(&e1).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.end.item(2), 1);
        assert!(matches!(
            lift_step(&e1, &region, SwapMove::new(1, 2), e1.source(), DEFAULT_CAP),
            Err(Error::Precondition(_))
        ));
    }
}
