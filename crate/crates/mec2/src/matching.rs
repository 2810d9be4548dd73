//! Maximum cardinality matching in general graphs via augmenting paths with
//! blossom contraction (Edmonds). O(V^3), which is far more than enough for
//! the instance sizes this crate targets; the contract is cardinality
//! optimality only.

use crate::graph::Graph;

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: Vec<Vec<usize>>,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    g: &'a Graph,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.vertex_count();
        let adj = (0..n).map(|v| g.neighbors(v)).collect();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            g,
        }
    }

    fn lowest_common_base(&self, mut a: usize, mut b: usize) -> usize {
        let n = self.adj.len();
        let mut on_path = vec![false; n];
        loop {
            a = self.base[a];
            on_path[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if on_path[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, stem: usize, mut child: usize) {
        while self.base[v] != stem {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS for an augmenting path from `root`; returns its exposed endpoint.
    fn find_path(&mut self, root: usize) -> usize {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (v, b) in self.base.iter_mut().enumerate() {
            *b = v;
        }
        self.used[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for i in 0..self.adj[v].len() {
                let to = self.adj[v][i];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    // Odd cycle in the alternating forest: contract it.
                    let stem = self.lowest_common_base(v, to);
                    self.blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, stem, to);
                    self.mark_path(to, stem, v);
                    for u in 0..n {
                        if self.blossom[self.base[u]] {
                            self.base[u] = stem;
                            if !self.used[u] {
                                self.used[u] = true;
                                queue.push_back(u);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    self.used[self.mate[to]] = true;
                    queue.push_back(self.mate[to]);
                }
            }
        }
        NONE
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }

    fn run(mut self) -> Vec<usize> {
        let n = self.adj.len();
        for v in 0..n {
            if self.mate[v] == NONE {
                let exposed = self.find_path(v);
                if exposed != NONE {
                    self.augment(exposed);
                }
            }
        }
        let mut matched = Vec::new();
        for v in 0..n {
            if self.mate[v] != NONE && v < self.mate[v] {
                matched.push(
                    self.g
                        .edge_index(v, self.mate[v])
                        .expect("matched pair must be an edge"),
                );
            }
        }
        matched.sort_unstable();
        matched
    }
}

/// A maximum matching of `g`, as a sorted list of edge indices.
pub fn max_matching(g: &Graph) -> Vec<usize> {
    Blossom::new(g).run()
}
