//! Connectivity preprocessing.
//!
//! An item only ever moves along edges between agents that accept it, so it
//! stays inside the connected component of `G[N_j]` where it starts. Each
//! `N_j` can therefore be cut down to that component without changing which
//! assignments are reachable; if the target holder of `j` lies in another
//! component the answer is already no.

use crate::graph::{induced_reach, Marks};
use crate::instance::{Agent, Instance, Item};

/// Evidence that some item would have to leave its component of `G[N_j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImmediateNo {
    pub item: Item,
    pub source_holder: Agent,
    pub target_holder: Agent,
}

impl ImmediateNo {
    /// Re-checks the evidence against an instance.
    pub fn verify(&self, inst: &Instance) -> bool {
        let j = self.item;
        if j >= inst.len()
            || inst.source().holder(j) != self.source_holder
            || inst.target().holder(j) != self.target_holder
        {
            return false;
        }
        let mut member = vec![false; inst.len()];
        for &i in inst.acceptors(j) {
            member[i] = true;
        }
        let mut marks = Marks::new(inst.len());
        let reach = induced_reach(inst.adjacency(), self.source_holder, |v| member[v], &mut marks);
        !reach.contains(&self.target_holder)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalization {
    /// Every `G[N_j]` is connected; reachability is unchanged.
    Normalized(Instance),
    ImmediateNo(ImmediateNo),
}

/// Restricts every `N_j` to the component of `G[N_j]` holding `a⁻¹(j)`.
pub fn normalize(inst: &Instance) -> Normalization {
    let n = inst.len();
    let mut member = Marks::new(n);
    let mut seen = Marks::new(n);
    let mut accept = Vec::with_capacity(n);
    let mut changed = false;
    for j in 0..n {
        member.reset();
        for &i in inst.acceptors(j) {
            member.set(i);
        }
        let start = inst.source().holder(j);
        let reach = induced_reach(inst.adjacency(), start, |v| member.get(v), &mut seen);
        let goal = inst.target().holder(j);
        if !seen.get(goal) {
            return Normalization::ImmediateNo(ImmediateNo {
                item: j,
                source_holder: start,
                target_holder: goal,
            });
        }
        changed |= reach.len() != inst.acceptors(j).len();
        accept.push(reach);
    }
    if !changed {
        return Normalization::Normalized(inst.clone());
    }
    Normalization::Normalized(
        inst.with_acceptance(accept)
            .expect("restricting acceptability to the source component keeps both assignments"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;

    fn split_item(target_holder: &str) -> Instance {
        // N_j = {1,3} on the path 1-2-3; agent 2 holds k.
        parse_instance(&format!(
            "agents 3\nitems 3\naccept j 1 3\naccept k 1 2 3\naccept l 1 2 3\n\
             edge 1 2\nedge 2 3\n\
             assign a 1 j\nassign a 2 k\nassign a 3 l\n\
             assign b {target_holder} j\nassign b 2 k\nassign b {} l\n",
            if target_holder == "1" { "3" } else { "1" }
        ))
        .unwrap()
    }

    #[test]
    fn connected_instance_is_unchanged() {
        let inst = parse_instance(include_str!("../tests/fixtures/e1.txt")).unwrap();
        assert_eq!(normalize(&inst), Normalization::Normalized(inst));
    }

    #[test]
    fn separated_target_is_immediate_no() {
        let inst = split_item("3");
        match normalize(&inst) {
            Normalization::ImmediateNo(no) => {
                assert_eq!(no.item, 0);
                assert_eq!((no.source_holder, no.target_holder), (0, 2));
                assert!(no.verify(&inst));
            }
            other => panic!("expected ImmediateNo, got {other:?}"),
        }
    }

    #[test]
    fn acceptability_shrinks_to_source_component() {
        let inst = split_item("1");
        match normalize(&inst) {
            Normalization::Normalized(norm) => {
                assert_eq!(norm.acceptors(0), [0]);
                assert_eq!(norm.acceptors(1), [0, 1, 2]);
            }
            other => panic!("expected Normalized, got {other:?}"),
        }
    }
}
