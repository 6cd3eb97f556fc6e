//! Deterministic random instances.
//!
//! Agents are named `1..n` and items `x1..xn`. The source assignment is a
//! uniform permutation; each `N_j` is grown around `a⁻¹(j)`, so `a` is
//! always valid. The target is, with equal odds, the end of a random walk
//! of legal swaps from `a` or an independently drawn assignment.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::{Agent, Instance, Item};
use crate::matching::Augmenter;
use crate::reduction::{reduce_pmr, PMRInstance};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Random recursive tree: vertex `v` attaches to a uniform earlier one.
    Tree,
    Path,
    /// Agent 1 in the centre.
    Star,
    Complete,
    /// The reduction of a random perfect matching instance built on a
    /// `2n`-cycle plus random chords.
    PmrCycle,
}

impl Shape {
    pub const ALL: [Shape; 5] = [
        Shape::Tree,
        Shape::Path,
        Shape::Star,
        Shape::Complete,
        Shape::PmrCycle,
    ];

    pub fn is_tree(self) -> bool {
        matches!(self, Shape::Tree | Shape::Path | Shape::Star)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Tree => "tree",
            Shape::Path => "path",
            Shape::Star => "star",
            Shape::Complete => "complete",
            Shape::PmrCycle => "pmr-cycle",
        })
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::ALL
            .into_iter()
            .find(|shape| shape.to_string() == s)
            .ok_or_else(|| Error::GenerationFailed(format!("unknown shape `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub agent_count: usize,
    pub seed: u64,
    /// Probability of each growth step for `N_j` (for `pmr-cycle`, of each
    /// chord).
    pub accept_density: f64,
    pub shape: Shape,
}

impl GenSpec {
    pub fn new(shape: Shape, agent_count: usize, accept_density: f64, seed: u64) -> Self {
        GenSpec {
            agent_count,
            seed,
            accept_density,
            shape,
        }
    }

    fn check(&self) -> Result<()> {
        if self.agent_count == 0 {
            return Err(Error::GenerationFailed("agent count must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.accept_density) {
            return Err(Error::GenerationFailed(format!(
                "density {} outside [0, 1]",
                self.accept_density
            )));
        }
        Ok(())
    }
}

fn names(n: usize, prefix: &str) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

fn graph_edges(shape: Shape, n: usize, rng: &mut Rng) -> Vec<(Agent, Agent)> {
    match shape {
        Shape::Tree => (1..n).map(|v| (rng.below(v), v)).collect(),
        Shape::Path => (1..n).map(|v| (v - 1, v)).collect(),
        Shape::Star => (1..n).map(|v| (0, v)).collect(),
        Shape::Complete | Shape::PmrCycle => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
    }
}

/// A uniformly shuffled matching search: left vertices in random order,
/// each trying its options in random order.
fn random_matching(rng: &mut Rng, options: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = options.len();
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let shuffled: Vec<Vec<usize>> = options
        .iter()
        .map(|o| {
            let mut o = o.clone();
            rng.shuffle(&mut o);
            o
        })
        .collect();
    let mut aug = Augmenter::new(n, n);
    for &l in &order {
        if !aug.augment(l, |x| shuffled[x].as_slice(), |_| true) {
            return None;
        }
    }
    (0..n).map(|l| aug.partner(l)).collect()
}

pub fn gen_instance(spec: &GenSpec) -> Result<Instance> {
    spec.check()?;
    if spec.shape == Shape::PmrCycle {
        return reduce_pmr(&gen_pmr(spec)?);
    }
    let n = spec.agent_count;
    let p = spec.accept_density;
    let mut rng = Rng::new(spec.seed);
    let edges = graph_edges(spec.shape, n, &mut rng);
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut a: Vec<Item> = (0..n).collect();
    rng.shuffle(&mut a);
    let mut holder = vec![0; n];
    for (i, &j) in a.iter().enumerate() {
        holder[j] = i;
    }

    let mut accept: Vec<Vec<Agent>> = Vec::with_capacity(n);
    let mut member = vec![false; n];
    for &h in &holder {
        let mut set = vec![h];
        member[h] = true;
        if spec.shape == Shape::Complete {
            set.extend((0..n).filter(|&i| i != h && rng.chance(p)));
        } else {
            let mut head = 0;
            while head < set.len() {
                let u = set[head];
                head += 1;
                for &v in &adj[u] {
                    if !member[v] && rng.chance(p) {
                        member[v] = true;
                        set.push(v);
                    }
                }
            }
        }
        for &i in &set {
            member[i] = false;
        }
        set.sort_unstable();
        accept.push(set);
    }

    let mut acceptable = vec![Vec::new(); n];
    for (j, list) in accept.iter().enumerate() {
        for &i in list {
            acceptable[i].push(j);
        }
    }
    let b = if rng.chance(0.5) {
        let mut cur = a.clone();
        if !edges.is_empty() {
            for _ in 0..4 * n {
                let (u, v) = edges[rng.below(edges.len())];
                let ok = acceptable[u].binary_search(&cur[v]).is_ok()
                    && acceptable[v].binary_search(&cur[u]).is_ok();
                if ok {
                    cur.swap(u, v);
                }
            }
        }
        cur
    } else {
        random_matching(&mut rng, &acceptable)
            .ok_or_else(|| Error::GenerationFailed("no assignment found for b".into()))?
    };
    Instance::new(names(n, ""), names(n, "x"), accept, &edges, a, b)
}

/// A random perfect matching reconfiguration instance: the `2n`-cycle
/// `a_k b_k a_{k+1}`, each other pair added as a chord with probability
/// `accept_density`, `m1 = {a_k b_k}` and `m2` a random perfect matching.
pub fn gen_pmr(spec: &GenSpec) -> Result<PMRInstance> {
    spec.check()?;
    let n = spec.agent_count;
    let mut rng = Rng::new(spec.seed);
    let mut options: Vec<Vec<usize>> = (0..n).map(|k| vec![k, (k + 1) % n]).collect();
    for (k, opts) in options.iter_mut().enumerate() {
        for b in 0..n {
            if b != k && b != (k + 1) % n && rng.chance(spec.accept_density) {
                opts.push(b);
            }
        }
        opts.sort_unstable();
        opts.dedup();
    }
    let m2 = random_matching(&mut rng, &options)
        .ok_or_else(|| Error::GenerationFailed("no perfect matching for m2".into()))?;
    let edges: Vec<(usize, usize)> = options
        .iter()
        .enumerate()
        .flat_map(|(a, opts)| opts.iter().map(move |&b| (a, b)))
        .collect();
    let m1: Vec<(usize, usize)> = (0..n).map(|k| (k, k)).collect();
    let m2: Vec<(usize, usize)> = m2.into_iter().enumerate().collect();
    PMRInstance::new(names(n, "a"), names(n, "b"), &edges, &m1, &m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::serialize;
    use crate::graph::is_tree;
    use crate::normalize::{normalize, Normalization};

    #[test]
    fn single_agent() {
        for shape in Shape::ALL {
            let inst = gen_instance(&GenSpec::new(shape, 1, 0.5, 3)).unwrap();
            assert_eq!(inst.len(), 1);
            assert_eq!(inst.source(), inst.target());
        }
    }

    #[test]
    fn deterministic() {
        let spec = GenSpec::new(Shape::Tree, 6, 0.5, 42);
        let one = serialize(&gen_instance(&spec).unwrap());
        let two = serialize(&gen_instance(&spec).unwrap());
        assert_eq!(one, two);
    }

    #[test]
    fn tree_shapes_are_normalized_trees() {
        for shape in [Shape::Tree, Shape::Path, Shape::Star] {
            for seed in 0..30 {
                let inst = gen_instance(&GenSpec::new(shape, 7, 0.6, seed)).unwrap();
                assert!(is_tree(inst.adjacency()));
                match normalize(&inst) {
                    Normalization::Normalized(n) => assert_eq!(n.source(), inst.source()),
                    Normalization::ImmediateNo(_) => {}
                }
                if let Normalization::Normalized(n) = normalize(&inst) {
                    for j in 0..7 {
                        assert_eq!(n.acceptors(j), inst.acceptors(j));
                    }
                }
            }
        }
    }

    #[test]
    fn complete_full_density() {
        let inst = gen_instance(&GenSpec::new(Shape::Complete, 4, 1.0, 9)).unwrap();
        assert!((0..4).all(|j| inst.acceptors(j).len() == 4));
        assert_eq!(inst.edge_count(), 6);
    }

    #[test]
    fn bad_specs() {
        assert!(gen_instance(&GenSpec::new(Shape::Tree, 0, 0.5, 1)).is_err());
        assert!(gen_instance(&GenSpec::new(Shape::Tree, 3, 1.5, 1)).is_err());
        assert!("cycle".parse::<Shape>().is_err());
        assert_eq!("pmr-cycle".parse::<Shape>().unwrap(), Shape::PmrCycle);
    }

    #[test]
    fn pmr_instances_reduce() {
        for seed in 0..20 {
            let p = gen_pmr(&GenSpec::new(Shape::PmrCycle, 5, 0.2, seed)).unwrap();
            assert_eq!(PMRInstance::parse(&p.serialize()).unwrap(), p);
            let inst = reduce_pmr(&p).unwrap();
            assert_eq!(inst.source().items(), p.m1());
        }
    }
}
