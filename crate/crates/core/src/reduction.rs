//! Perfect matching reconfiguration as a special case.
//!
//! Given a bipartite graph `H'` on `A ∪ B` and two perfect matchings, take
//! agents `A`, items `B`, let `N_j` be the neighbours of `j` in `H'` and
//! let every pair of agents communicate. Exchanging two matching edges for
//! the two other sides of a 4-cycle is then exactly a swap between the two
//! agents on the cycle.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::format::{parse_count, parse_err, sorted_names, tokenized_lines};
use crate::instance::{Instance, SwapMove};
use crate::oracle::{bfs, Search};

/// A bipartite graph with two perfect matchings. Matchings are stored as
/// `left -> right` vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMRInstance {
    left: Vec<String>,
    right: Vec<String>,
    /// Sorted `(left, right)` pairs.
    edges: Vec<(usize, usize)>,
    m1: Vec<usize>,
    m2: Vec<usize>,
}

/// Replaces `a1-b1`, `a2-b2` by `a1-b2`, `a2-b1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exchange {
    /// `[a1, b1, a2, b2]`.
    pub cycle: [usize; 4],
}

fn perfect_matching(
    which: &str,
    pairs: &[(usize, usize)],
    n: usize,
    edges: &HashSet<(usize, usize)>,
) -> Result<Vec<usize>> {
    let bad = |detail: String| Err(Error::NotPerfectMatching(format!("{which} ({detail})")));
    let mut of_left = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if pairs.len() != n {
        return bad(format!("{} pairs for {n} vertices", pairs.len()));
    }
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return bad(format!("pair ({a}, {b}) out of range"));
        }
        if !edges.contains(&(a, b)) {
            return bad(format!("pair ({a}, {b}) is not an edge"));
        }
        if of_left[a] != usize::MAX || used[b] {
            return bad(format!("vertex repeated in pair ({a}, {b})"));
        }
        of_left[a] = b;
        used[b] = true;
    }
    Ok(of_left)
}

impl PMRInstance {
    pub fn new(
        left: Vec<String>,
        right: Vec<String>,
        edges: &[(usize, usize)],
        m1: &[(usize, usize)],
        m2: &[(usize, usize)],
    ) -> Result<Self> {
        let n = left.len();
        if right.len() != n {
            return Err(Error::SizeMismatch {
                agents: n,
                items: right.len(),
            });
        }
        let mut list = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::BadEdge {
                    u: a.to_string(),
                    v: b.to_string(),
                    reason: "endpoint out of range".into(),
                });
            }
            list.push((a, b));
        }
        list.sort_unstable();
        list.dedup();
        let set: HashSet<(usize, usize)> = list.iter().copied().collect();
        let m1 = perfect_matching("m1", m1, n, &set)?;
        let m2 = perfect_matching("m2", m2, n, &set)?;
        Ok(PMRInstance {
            left,
            right,
            edges: list,
            m1,
            m2,
        })
    }

    /// Parses the line format: `left <n>`, `right <n>`, then `medge a b`,
    /// `m1 a b` and `m2 a b` lines. Vertex names are those used by `m1`.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut nl, mut nr) = (None, None);
        let mut edges = Vec::new();
        let mut m1 = Vec::new();
        let mut m2 = Vec::new();
        for (line, tokens) in tokenized_lines(text) {
            match tokens[0] {
                "left" => parse_count(line, &tokens, &mut nl)?,
                "right" => parse_count(line, &tokens, &mut nr)?,
                kind @ ("medge" | "m1" | "m2") => {
                    if tokens.len() != 3 {
                        return Err(parse_err(line, format!("expected `{kind} <left> <right>`")));
                    }
                    let entry = (line, tokens[1].to_string(), tokens[2].to_string());
                    match kind {
                        "medge" => edges.push(entry),
                        "m1" => m1.push(entry),
                        _ => m2.push(entry),
                    }
                }
                other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
            }
        }
        let nl = nl.ok_or_else(|| parse_err(0, "missing `left` header"))?;
        let nr = nr.ok_or_else(|| parse_err(0, "missing `right` header"))?;
        if nl != nr {
            return Err(Error::SizeMismatch {
                agents: nl,
                items: nr,
            });
        }
        let left = sorted_names(m1.iter().map(|(_, a, _)| a.as_str()));
        let right = sorted_names(m1.iter().map(|(_, _, b)| b.as_str()));
        if left.len() != nl || right.len() != nr {
            return Err(parse_err(
                0,
                format!(
                    "m1 names {} left and {} right vertices, headers declare {nl}",
                    left.len(),
                    right.len()
                ),
            ));
        }
        let lmap = Instance::name_lookup(&left);
        let rmap = Instance::name_lookup(&right);
        let resolve = |list: &[(usize, String, String)]| -> Result<Vec<(usize, usize)>> {
            list.iter()
                .map(|(line, a, b)| match (lmap.get(a.as_str()), rmap.get(b.as_str())) {
                    (Some(&a), Some(&b)) => Ok((a, b)),
                    _ => Err(parse_err(*line, format!("unknown vertex in `{a} {b}`"))),
                })
                .collect()
        };
        let edges = resolve(&edges)?;
        let m1 = resolve(&m1)?;
        let m2 = resolve(&m2)?;
        PMRInstance::new(left, right, &edges, &m1, &m2)
    }

    /// Canonical text form, in id order.
    pub fn serialize(&self) -> String {
        let mut out = format!("left {}\nright {}\n", self.left.len(), self.right.len());
        for &(a, b) in &self.edges {
            out += &format!("medge {} {}\n", self.left[a], self.right[b]);
        }
        for (tag, m) in [("m1", &self.m1), ("m2", &self.m2)] {
            for (a, &b) in m.iter().enumerate() {
                out += &format!("{tag} {} {}\n", self.left[a], self.right[b]);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn left_names(&self) -> &[String] {
        &self.left
    }

    pub fn right_names(&self) -> &[String] {
        &self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a, b)).is_ok()
    }

    pub fn m1(&self) -> &[usize] {
        &self.m1
    }

    pub fn m2(&self) -> &[usize] {
        &self.m2
    }

    fn exchange_ok(&self, current: &[usize], ex: &Exchange) -> std::result::Result<(), String> {
        let [a1, b1, a2, b2] = ex.cycle;
        let n = self.len();
        if [a1, b1, a2, b2].iter().any(|&v| v >= n) {
            return Err("vertex out of range".into());
        }
        if a1 == a2 {
            return Err("the two left vertices coincide".into());
        }
        if current[a1] != b1 || current[a2] != b2 {
            return Err("cycle does not use two edges of the current matching".into());
        }
        if !self.has_edge(a1, b2) || !self.has_edge(a2, b1) {
            return Err("cycle uses a non-edge".into());
        }
        Ok(())
    }
}

/// Builds the reachability instance on a complete communication graph.
pub fn reduce_pmr(p: &PMRInstance) -> Result<Instance> {
    let n = p.len();
    let mut accept = vec![Vec::new(); n];
    for &(a, b) in &p.edges {
        accept[b].push(a);
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Instance::new(
        p.left.clone(),
        p.right.clone(),
        accept,
        &edges,
        p.m1.clone(),
        p.m2.clone(),
    )
}

/// The swap that performs `ex` on the reduced instance.
pub fn map_move_forward(p: &PMRInstance, current: &[usize], ex: &Exchange) -> Result<SwapMove> {
    if current.len() != p.len() {
        return Err(Error::InvalidExchange("matching has the wrong size".into()));
    }
    p.exchange_ok(current, ex).map_err(Error::InvalidExchange)?;
    Ok(SwapMove::new(ex.cycle[0], ex.cycle[2]))
}

/// Maps a whole exchange sequence starting at `m1`.
pub fn map_sequence_forward(p: &PMRInstance, exchanges: &[Exchange]) -> Result<Vec<SwapMove>> {
    let mut current = p.m1.clone();
    exchanges
        .iter()
        .map(|ex| {
            let m = map_move_forward(p, &current, ex)?;
            current.swap(m.first, m.second);
            Ok(m)
        })
        .collect()
}

/// Translates a swap sequence on the reduced instance into exchanges that
/// take `m1` to `m2`.
pub fn map_sequence_backward(p: &PMRInstance, moves: &[SwapMove]) -> Result<Vec<Exchange>> {
    let mut current = p.m1.clone();
    let mut out = Vec::with_capacity(moves.len());
    for (step, m) in moves.iter().enumerate() {
        let (u, v) = (m.first, m.second);
        if u >= p.len() || v >= p.len() {
            return Err(Error::InvalidSequence {
                step,
                reason: "agent out of range".into(),
            });
        }
        let ex = Exchange {
            cycle: [u, current[u], v, current[v]],
        };
        p.exchange_ok(&current, &ex)
            .map_err(|reason| Error::InvalidSequence { step, reason })?;
        current.swap(u, v);
        out.push(ex);
    }
    if current != p.m2 {
        return Err(Error::InvalidSequence {
            step: moves.len(),
            reason: "sequence does not end at m2".into(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PmrStatus {
    Reachable {
        distance: usize,
        exchanges: Vec<Exchange>,
    },
    Unreachable,
    Exhausted {
        budget: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmrResult {
    pub status: PmrStatus,
    pub explored: usize,
}

/// Breadth-first search over perfect matchings of `H'` under exchanges,
/// from `m1` to `m2`. Exchanges are tried by ascending left pair.
pub fn matching_bfs(p: &PMRInstance, budget: usize) -> PmrResult {
    let n = p.len();
    let (search, explored) = bfs(p.m1.clone(), &p.m2, budget, |m: &Vec<usize>, emit| {
        for a1 in 0..n {
            for a2 in a1 + 1..n {
                let (b1, b2) = (m[a1], m[a2]);
                if p.has_edge(a1, b2) && p.has_edge(a2, b1) {
                    let mut next = m.clone();
                    next.swap(a1, a2);
                    if !emit(Exchange { cycle: [a1, b1, a2, b2] }, next) {
                        return;
                    }
                }
            }
        }
    });
    let status = match search {
        Search::Found(exchanges) => PmrStatus::Reachable {
            distance: exchanges.len(),
            exchanges,
        },
        Search::Closed => PmrStatus::Unreachable,
        Search::Exhausted => PmrStatus::Exhausted { budget },
    };
    PmrResult { status, explored }
}
