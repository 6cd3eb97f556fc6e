//! Small graph routines shared by the solvers. Everything here is iterative
//! so path-shaped inputs with many thousands of vertices cannot overflow the
//! call stack.

use std::collections::VecDeque;

/// Whether an undirected adjacency structure is a tree. The empty graph
/// counts as a tree.
pub fn is_tree(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if edges != n - 1 {
        return false;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == n
}

/// Reusable membership flags that reset in O(1).
#[derive(Debug, Clone)]
pub(crate) struct Marks {
    stamp: Vec<u32>,
    current: u32,
}

impl Marks {
    pub fn new(n: usize) -> Self {
        Marks {
            stamp: vec![0; n],
            current: 1,
        }
    }

    /// Clears every mark.
    pub fn reset(&mut self) {
        self.current = self.current.wrapping_add(1);
        if self.current == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.current = 1;
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.stamp[i] = self.current;
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.stamp[i] == self.current
    }
}

/// Connected components of the subgraph induced by the vertices for which
/// `inside` holds, restricted to `vertices`. Components come out ordered by
/// their smallest vertex when `vertices` is ascending, each sorted.
pub(crate) fn induced_components(
    adj: &[Vec<usize>],
    vertices: &[usize],
    inside: impl Fn(usize) -> bool,
    seen: &mut Marks,
) -> Vec<Vec<usize>> {
    seen.reset();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for &s in vertices {
        if seen.get(s) {
            continue;
        }
        seen.set(s);
        let mut comp = vec![s];
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen.get(v) && inside(v) {
                    seen.set(v);
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Vertices reachable from `start` inside the induced subgraph on `inside`.
pub(crate) fn induced_reach(
    adj: &[Vec<usize>],
    start: usize,
    inside: impl Fn(usize) -> bool,
    seen: &mut Marks,
) -> Vec<usize> {
    induced_components(adj, &[start], inside, seen)
        .pop()
        .unwrap_or_default()
}

/// Compressed adjacency for directed graphs on `0..n`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    pub fn with_capacity(n: usize) -> Self {
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        Csr {
            offsets,
            targets: Vec::new(),
        }
    }

    /// Appends the successor list of the next vertex.
    pub fn push_row(&mut self, row: impl IntoIterator<Item = usize>) {
        self.targets.extend(row);
        self.offsets.push(self.targets.len());
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

const UNSET: usize = usize::MAX;

/// Tarjan's algorithm. Returns the component index of every vertex and the
/// number of components; components are numbered in reverse topological
/// order, so every sink component gets a smaller index than its
/// predecessors.
pub(crate) fn strongly_connected(g: &Csr) -> (Vec<usize>, usize) {
    let n = g.len();
    let mut index = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut comp = vec![UNSET; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut frames: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut comps = 0;

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));
        while let Some(frame) = frames.last_mut() {
            let (v, pos) = *frame;
            let row = g.row(v);
            if pos < row.len() {
                frame.1 += 1;
                let w = row[pos];
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = comps;
                    if w == v {
                        break;
                    }
                }
                comps += 1;
            }
        }
    }
    (comp, comps)
}

/// All sink components, each as a sorted vertex list, ordered by smallest
/// vertex.
pub(crate) fn sink_components(g: &Csr) -> Vec<Vec<usize>> {
    sink_components_excluding(g, None)
}

fn sink_components_excluding(g: &Csr, excluded: Option<&[bool]>) -> Vec<Vec<usize>> {
    let (comp, count) = strongly_connected(g);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut usable = vec![true; count];
    for v in 0..g.len() {
        let c = comp[v];
        members[c].push(v);
        if excluded.is_some_and(|ex| ex[v]) || g.row(v).iter().any(|&w| comp[w] != c) {
            usable[c] = false;
        }
    }
    let mut out: Vec<Vec<usize>> = members
        .into_iter()
        .zip(usable)
        .filter_map(|(m, ok)| ok.then_some(m))
        .collect();
    out.sort_unstable_by_key(|m| m[0]);
    out
}

/// The smallest sink component (by size, then lexicographically by sorted
/// vertex list) among those containing no vertex flagged in `excluded`.
/// Returns `None` when every sink component is excluded.
pub(crate) fn smallest_sink_component(g: &Csr, excluded: Option<&[bool]>) -> Option<Vec<usize>> {
    sink_components_excluding(g, excluded)
        .into_iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
}
