//! Branch decompositions (unrooted ternary trees whose leaves are the graph
//! edges), tree decompositions, a greedy decomposition heuristic, and the
//! width-preserving conversion from tree to branch decompositions.

use crate::graph::Graph;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("branch decompositions require at least one edge")]
    EmptyEdgeSet,
    #[error("decomposition tree is not a tree: {0}")]
    NotATree(String),
    #[error("internal node {node} has degree {degree}, expected 3")]
    BadInternalDegree { node: usize, degree: usize },
    #[error("leaf mapping is not a bijection onto edge indices: {0}")]
    LeafMappingNotBijective(String),
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error("bag {bag} contains vertex {vertex}, out of range")]
    BagVertexOutOfRange { bag: usize, vertex: usize },
    #[error("vertex {0} is not covered by any bag")]
    VertexNotCovered(usize),
    #[error("edge ({0}, {1}) has no bag containing both endpoints")]
    EdgeNotCovered(usize, usize),
    #[error("bags containing vertex {0} do not form a connected subtree")]
    OccurrenceDisconnected(usize),
    #[error("border of size {0} exceeds the supported maximum of {1}")]
    BorderTooWide(usize, usize),
}

fn check_is_tree(node_count: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>, DecompError> {
    if node_count == 0 {
        return Err(DecompError::NotATree("no nodes".into()));
    }
    let mut adj = vec![Vec::new(); node_count];
    for &(a, b) in edges {
        if a >= node_count || b >= node_count {
            return Err(DecompError::NodeOutOfRange(a.max(b)));
        }
        if a == b {
            return Err(DecompError::NotATree(format!("self-loop at node {a}")));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    if edges.len() + 1 != node_count {
        return Err(DecompError::NotATree(format!(
            "{} edges on {} nodes",
            edges.len(),
            node_count
        )));
    }
    let mut seen = vec![false; node_count];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut visited = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                visited += 1;
                stack.push(w);
            }
        }
    }
    if visited != node_count {
        return Err(DecompError::NotATree("disconnected".into()));
    }
    Ok(adj)
}

/// An unrooted tree with one leaf per graph edge; all internal nodes have
/// degree three. The width is the maximum border size over the splits
/// induced by the tree edges, where the border of an edge bipartition is the
/// set of graph vertices incident to both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchDecomposition {
    node_count: usize,
    tree_edges: Vec<(usize, usize)>,
    leaf_edge: Vec<Option<usize>>,
    width: usize,
}

impl BranchDecomposition {
    /// Validates the invariants against `g` and computes the width.
    pub fn from_parts(
        node_count: usize,
        mut tree_edges: Vec<(usize, usize)>,
        leaf_map: Vec<(usize, usize)>,
        g: &Graph,
    ) -> Result<Self, DecompError> {
        tree_edges = tree_edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        tree_edges.sort_unstable();
        let adj = check_is_tree(node_count, &tree_edges)?;
        let m = g.edge_count();
        if m == 0 {
            return Err(DecompError::EmptyEdgeSet);
        }
        let mut leaf_edge = vec![None; node_count];
        let mut edge_seen = vec![false; m];
        for &(node, edge) in &leaf_map {
            if node >= node_count {
                return Err(DecompError::NodeOutOfRange(node));
            }
            if edge >= m {
                return Err(DecompError::LeafMappingNotBijective(format!(
                    "edge index {edge} out of range for {m} edges"
                )));
            }
            if edge_seen[edge] {
                return Err(DecompError::LeafMappingNotBijective(format!(
                    "edge {edge} mapped twice"
                )));
            }
            if leaf_edge[node].is_some() {
                return Err(DecompError::LeafMappingNotBijective(format!(
                    "node {node} mapped twice"
                )));
            }
            edge_seen[edge] = true;
            leaf_edge[node] = Some(edge);
        }
        if let Some(missing) = edge_seen.iter().position(|&s| !s) {
            return Err(DecompError::LeafMappingNotBijective(format!(
                "edge {missing} has no leaf"
            )));
        }
        for node in 0..node_count {
            match (leaf_edge[node].is_some(), adj[node].len()) {
                (true, d) if d <= 1 => {}
                (true, d) => {
                    return Err(DecompError::LeafMappingNotBijective(format!(
                        "leaf node {node} has degree {d}"
                    )))
                }
                (false, 3) => {}
                (false, degree) => return Err(DecompError::BadInternalDegree { node, degree }),
            }
        }
        let mut bd = BranchDecomposition { node_count, tree_edges, leaf_edge, width: 0 };
        bd.width = bd.rooted(g)?.width;
        Ok(bd)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    /// (node, edge index) pairs of the leaf bijection, by node.
    pub fn leaf_map(&self) -> Vec<(usize, usize)> {
        self.leaf_edge
            .iter()
            .enumerate()
            .filter_map(|(node, e)| e.map(|edge| (node, edge)))
            .collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Re-checks all invariants against `g`; the computed width must match.
    pub fn validate(&self, g: &Graph) -> Result<(), DecompError> {
        let rebuilt = BranchDecomposition::from_parts(
            self.node_count,
            self.tree_edges.clone(),
            self.leaf_map(),
            g,
        )?;
        if rebuilt.width != self.width {
            return Err(DecompError::LeafMappingNotBijective(format!(
                "stored width {} but computed {}",
                self.width, rebuilt.width
            )));
        }
        Ok(())
    }

    /// Rooted working form: the tree edge with the lexicographically smallest
    /// endpoint pair is subdivided by a fresh root, giving a binary tree with
    /// per-node borders.
    pub(crate) fn rooted(&self, g: &Graph) -> Result<RootedBranchForm, DecompError> {
        RootedBranchForm::build(self, g)
    }
}

/// Rooted binary form of a branch decomposition with per-node borders.
pub(crate) struct RootedBranchForm {
    /// Children per node; internal nodes have two, leaves none.
    pub children: Vec<Vec<usize>>,
    /// Nodes in a parents-first order.
    pub order: Vec<usize>,
    /// Leaf -> graph edge; `None` for internal nodes and the root.
    pub leaf_edge: Vec<Option<usize>>,
    /// Sorted border vertex lists per node.
    pub borders: Vec<Vec<usize>>,
    pub root: usize,
    /// Maximum border size over non-root nodes.
    pub width: usize,
}

impl RootedBranchForm {
    fn build(bd: &BranchDecomposition, g: &Graph) -> Result<Self, DecompError> {
        let n_nodes = bd.node_count;
        let mut leaf_edge = bd.leaf_edge.clone();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_nodes];
        for &(a, b) in &bd.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }

        let (root, node_total) = if bd.tree_edges.is_empty() {
            (0, 1)
        } else {
            // Subdivide the smallest tree edge with a fresh root node.
            let (a, b) = bd.tree_edges[0];
            let root = n_nodes;
            adj.push(Vec::new());
            adj[a].retain(|&x| x != b);
            adj[b].retain(|&x| x != a);
            adj[a].push(root);
            adj[b].push(root);
            adj[root] = vec![a, b];
            leaf_edge.push(None);
            (root, n_nodes + 1)
        };

        let mut children: Vec<Vec<usize>> = vec![Vec::new(); node_total];
        let mut order = Vec::with_capacity(node_total);
        let mut seen = vec![false; node_total];
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut kids: Vec<usize> = adj[v].iter().copied().filter(|&w| !seen[w]).collect();
            kids.sort_unstable();
            for &w in &kids {
                seen[w] = true;
                queue.push_back(w);
            }
            children[v] = kids;
        }

        // Subtree edge-endpoint multiplicities; a vertex is on the border of
        // E_i iff it touches some but not all of its incident edges there.
        let n = g.vertex_count();
        let mut counts: Vec<Vec<u32>> = vec![Vec::new(); node_total];
        let mut borders: Vec<Vec<usize>> = vec![Vec::new(); node_total];
        let mut width = 0;
        for &node in order.iter().rev() {
            let mut cnt = vec![0u32; n];
            if let Some(e) = leaf_edge[node] {
                let (u, v) = g.edge(e);
                cnt[u] += 1;
                cnt[v] += 1;
            }
            for &child in &children[node] {
                for (v, c) in counts[child].iter().enumerate() {
                    cnt[v] += c;
                }
                counts[child].clear();
            }
            let border: Vec<usize> = (0..n)
                .filter(|&v| cnt[v] > 0 && (cnt[v] as usize) < g.degree(v))
                .collect();
            if node != root {
                width = width.max(border.len());
            }
            borders[node] = border;
            counts[node] = cnt;
        }
        debug_assert!(borders[root].is_empty(), "the root covers every edge");
        Ok(RootedBranchForm { children, order, leaf_edge, borders, root, width })
    }
}

/// Caterpillar decomposition whose leaves carry the edges in the given
/// order: leaf i hangs off spine node i-1 (the first spine node carries the
/// first two leaves, the last carries the final two).
pub fn linear_branch_decomposition(g: &Graph, edge_order: &[usize]) -> Result<BranchDecomposition, DecompError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(DecompError::EmptyEdgeSet);
    }
    assert_eq!(edge_order.len(), m, "edge_order must enumerate all edges");
    match m {
        1 => BranchDecomposition::from_parts(1, vec![], vec![(0, edge_order[0])], g),
        2 => BranchDecomposition::from_parts(
            2,
            vec![(0, 1)],
            vec![(0, edge_order[0]), (1, edge_order[1])],
            g,
        ),
        _ => {
            // Leaves 0..m, spine nodes m..m+(m-2).
            let spine = |i: usize| m + i;
            let mut tree_edges = Vec::new();
            let mut leaf_map = Vec::new();
            tree_edges.push((0, spine(0)));
            tree_edges.push((1, spine(0)));
            for i in 1..(m - 2) {
                tree_edges.push((spine(i - 1), spine(i)));
                tree_edges.push((i + 1, spine(i)));
            }
            tree_edges.push((m - 1, spine(m - 3)));
            for (leaf, &edge) in edge_order.iter().enumerate() {
                leaf_map.push((leaf, edge));
            }
            BranchDecomposition::from_parts(m + m - 2, tree_edges, leaf_map, g)
        }
    }
}

/// Greedy decomposition heuristic: recursively bisect the edge set, growing
/// the first half from the lowest edge and always absorbing the candidate
/// that keeps the running border smallest. Valid by construction; no width
/// optimality promise.
pub fn heuristic_branch_decomposition(g: &Graph) -> Result<BranchDecomposition, DecompError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(DecompError::EmptyEdgeSet);
    }

    struct Builder<'a> {
        g: &'a Graph,
        tree_edges: Vec<(usize, usize)>,
        leaf_map: Vec<(usize, usize)>,
        next_node: usize,
    }

    impl Builder<'_> {
        fn build(&mut self, edges: &[usize]) -> usize {
            let node = self.next_node;
            self.next_node += 1;
            if edges.len() == 1 {
                self.leaf_map.push((node, edges[0]));
                return node;
            }
            let (left, right) = bisect(self.g, edges);
            let l = self.build(&left);
            let r = self.build(&right);
            self.tree_edges.push((node, l));
            self.tree_edges.push((node, r));
            node
        }
    }

    fn bisect(g: &Graph, edges: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let target = edges.len().div_ceil(2);
        let mut deg_in_set = vec![0u32; g.vertex_count()];
        for &e in edges {
            let (u, v) = g.edge(e);
            deg_in_set[u] += 1;
            deg_in_set[v] += 1;
        }
        let mut in_left = vec![false; g.edge_count()];
        let mut deg_in_left = vec![0u32; g.vertex_count()];
        let mut left = Vec::with_capacity(target);
        let mut border = 0i64;
        let absorb = |e: usize, left: &mut Vec<usize>, in_left: &mut Vec<bool>, deg_in_left: &mut Vec<u32>, border: &mut i64, deg_in_set: &[u32]| {
            let (u, v) = g.edge(e);
            for x in [u, v] {
                let before = deg_in_left[x] > 0 && deg_in_left[x] < deg_in_set[x];
                deg_in_left[x] += 1;
                let after = deg_in_left[x] > 0 && deg_in_left[x] < deg_in_set[x];
                *border += after as i64 - before as i64;
            }
            in_left[e] = true;
            left.push(e);
        };
        absorb(edges[0], &mut left, &mut in_left, &mut deg_in_left, &mut border, &deg_in_set);
        while left.len() < target {
            let mut best: Option<(i64, usize)> = None;
            for &e in edges {
                if in_left[e] {
                    continue;
                }
                let (u, v) = g.edge(e);
                // Prefer edges touching the left side; evaluate the border
                // delta of absorbing e.
                let touches = deg_in_left[u] > 0 || deg_in_left[v] > 0;
                if best.is_some() && !touches {
                    continue;
                }
                let mut delta = 0i64;
                let mut dl = [deg_in_left[u], deg_in_left[v]];
                for (i, x) in [u, v].into_iter().enumerate() {
                    let before = dl[i] > 0 && dl[i] < deg_in_set[x];
                    dl[i] += 1;
                    let after = dl[i] > 0 && dl[i] < deg_in_set[x];
                    delta += after as i64 - before as i64;
                }
                let score = border + delta;
                if best.is_none_or(|(bs, be)| score < bs || (score == bs && e < be)) {
                    best = Some((score, e));
                }
            }
            let (_, e) = best.expect("edges remain");
            absorb(e, &mut left, &mut in_left, &mut deg_in_left, &mut border, &deg_in_set);
        }
        let right: Vec<usize> = edges.iter().copied().filter(|&e| !in_left[e]).collect();
        (left, right)
    }

    if m == 1 {
        return BranchDecomposition::from_parts(1, vec![], vec![(0, 0)], g);
    }
    let all: Vec<usize> = (0..m).collect();
    let mut builder = Builder { g, tree_edges: Vec::new(), leaf_map: Vec::new(), next_node: 0 };
    let root = builder.build(&all);
    // The rooted artifact has a degree-two root; splice it out.
    let mut root_neighbors: Vec<usize> = builder
        .tree_edges
        .iter()
        .filter_map(|&(a, b)| {
            if a == root {
                Some(b)
            } else if b == root {
                Some(a)
            } else {
                None
            }
        })
        .collect();
    root_neighbors.sort_unstable();
    let mut tree_edges: Vec<(usize, usize)> = builder
        .tree_edges
        .iter()
        .copied()
        .filter(|&(a, b)| a != root && b != root)
        .collect();
    if root_neighbors.len() == 2 {
        tree_edges.push((root_neighbors[0], root_neighbors[1]));
    }
    // Compact node ids (the root id is now unused).
    let mut remap = vec![usize::MAX; builder.next_node];
    let mut next = 0;
    for (node, slot) in remap.iter_mut().enumerate() {
        if node != root {
            *slot = next;
            next += 1;
        }
    }
    let tree_edges = tree_edges.into_iter().map(|(a, b)| (remap[a], remap[b])).collect();
    let leaf_map = builder.leaf_map.into_iter().map(|(n, e)| (remap[n], e)).collect();
    BranchDecomposition::from_parts(next, tree_edges, leaf_map, g)
}

/// A tree decomposition: bags of vertices arranged in a tree such that every
/// vertex and edge is covered and each vertex's bags form a subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        let mut tree_edges: Vec<(usize, usize)> =
            tree_edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        tree_edges.sort_unstable();
        TreeDecomposition { bags, tree_edges }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Checks the three tree-decomposition conditions against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), DecompError> {
        let adj = check_is_tree(self.bags.len(), &self.tree_edges)?;
        for (i, bag) in self.bags.iter().enumerate() {
            if let Some(&v) = bag.iter().find(|&&v| v >= g.vertex_count()) {
                return Err(DecompError::BagVertexOutOfRange { bag: i, vertex: v });
            }
        }
        for v in 0..g.vertex_count() {
            if !self.bags.iter().any(|b| b.binary_search(&v).is_ok()) {
                return Err(DecompError::VertexNotCovered(v));
            }
        }
        for &(u, v) in g.edges() {
            if !self
                .bags
                .iter()
                .any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok())
            {
                return Err(DecompError::EdgeNotCovered(u, v));
            }
        }
        // Occurrence subtrees must be connected.
        for v in 0..g.vertex_count() {
            let holders: Vec<usize> = (0..self.bags.len())
                .filter(|&i| self.bags[i].binary_search(&v).is_ok())
                .collect();
            let mut seen = vec![false; self.bags.len()];
            let mut stack = vec![holders[0]];
            seen[holders[0]] = true;
            let mut reached = 1;
            while let Some(i) = stack.pop() {
                for &j in &adj[i] {
                    if !seen[j] && self.bags[j].binary_search(&v).is_ok() {
                        seen[j] = true;
                        reached += 1;
                        stack.push(j);
                    }
                }
            }
            if reached != holders.len() {
                return Err(DecompError::OccurrenceDisconnected(v));
            }
        }
        Ok(())
    }
}

/// Converts a valid tree decomposition into a branch decomposition of width
/// at most `td.width() + 1`: each edge becomes a leaf under the smallest bag
/// containing both endpoints, bare branches are pruned, degree-two nodes are
/// spliced out and wider nodes expand into caterpillars (any split inside a
/// bag's caterpillar has its border inside that bag).
pub fn treedecomp_to_branchdecomp(td: &TreeDecomposition, g: &Graph) -> Result<BranchDecomposition, DecompError> {
    td.validate(g)?;
    let m = g.edge_count();
    if m == 0 {
        return Err(DecompError::EmptyEdgeSet);
    }
    let bags = td.bags().len();
    // Node ids: 0..bags are bag nodes, bags..bags+m are edge leaves.
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); bags + m];
    let mut is_leaf = vec![false; bags + m];
    for &(a, b) in td.tree_edges() {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let bag = (0..bags)
            .find(|&i| td.bags()[i].binary_search(&u).is_ok() && td.bags()[i].binary_search(&v).is_ok())
            .expect("validated decompositions cover every edge");
        adj[bag].insert(bags + e);
        adj[bags + e].insert(bag);
        is_leaf[bags + e] = true;
    }
    let mut alive = vec![true; bags + m];

    // Prune leafless degree <= 1 bag nodes to a fixpoint.
    loop {
        let mut changed = false;
        for node in 0..bags {
            if alive[node] && adj[node].len() <= 1 && adj[node].iter().all(|&w| !is_leaf[w]) {
                if let Some(&w) = adj[node].iter().next() {
                    adj[w].remove(&node);
                }
                adj[node].clear();
                alive[node] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // Splice out degree-two bag nodes.
    for node in 0..bags {
        if alive[node] && adj[node].len() == 2 {
            let neighbors: Vec<usize> = adj[node].iter().copied().collect();
            let (a, b) = (neighbors[0], neighbors[1]);
            adj[a].remove(&node);
            adj[b].remove(&node);
            adj[a].insert(b);
            adj[b].insert(a);
            adj[node].clear();
            alive[node] = false;
        }
    }
    // A lone degree-one bag can only remain when it holds the single leaf.
    for node in 0..bags {
        if alive[node] && adj[node].len() == 1 {
            let w = *adj[node].iter().next().unwrap();
            adj[w].remove(&node);
            adj[node].clear();
            alive[node] = false;
        }
    }
    // Expand bag nodes of degree >= 4 into caterpillars.
    for node in 0..bags {
        if !alive[node] || adj[node].len() < 4 {
            continue;
        }
        let neighbors: Vec<usize> = adj[node].iter().copied().collect();
        let d = neighbors.len();
        for &w in &neighbors {
            adj[w].remove(&node);
        }
        adj[node].clear();
        alive[node] = false;
        let base = adj.len();
        for _ in 0..(d - 2) {
            adj.push(BTreeSet::new());
            alive.push(true);
            is_leaf.push(false);
        }
        let connect = |a: usize, b: usize, adj: &mut Vec<BTreeSet<usize>>| {
            adj[a].insert(b);
            adj[b].insert(a);
        };
        connect(base, neighbors[0], &mut adj);
        connect(base, neighbors[1], &mut adj);
        for i in 1..(d - 2) {
            connect(base + i - 1, base + i, &mut adj);
            connect(base + i, neighbors[i + 1], &mut adj);
        }
        connect(base + d - 3, neighbors[d - 1], &mut adj);
    }

    // Compact and hand off to the validating constructor.
    let mut remap = vec![usize::MAX; adj.len()];
    let mut node_count = 0;
    for node in 0..adj.len() {
        if alive[node] {
            remap[node] = node_count;
            node_count += 1;
        }
    }
    let mut tree_edges = Vec::new();
    for node in 0..adj.len() {
        if alive[node] {
            for &w in &adj[node] {
                if node < w {
                    tree_edges.push((remap[node], remap[w]));
                }
            }
        }
    }
    let leaf_map: Vec<(usize, usize)> =
        (0..m).map(|e| (remap[bags + e], e)).collect();
    let bd = BranchDecomposition::from_parts(node_count, tree_edges, leaf_map, g)?;
    debug_assert!(bd.width() <= td.width() + 1);
    Ok(bd)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::generators::{gen_named, NamedGraph};

    /// All leaf-labeled unrooted ternary trees over `m` edges, by repeated
    /// edge subdivision. (2m-5)!! shapes; test-only, desk scale.
    pub(crate) fn enumerate_all_decompositions(g: &Graph) -> Vec<BranchDecomposition> {
        let m = g.edge_count();
        assert!((1..=5).contains(&m));
        if m == 1 {
            return vec![BranchDecomposition::from_parts(1, vec![], vec![(0, 0)], g).unwrap()];
        }
        // Partial trees: (tree_edges, next_node); leaves are nodes 0..m.
        let mut partials = vec![(vec![(0usize, 1usize)], m)];
        for leaf in 2..m {
            let mut next = Vec::new();
            for (edges, fresh) in partials {
                for i in 0..edges.len() {
                    let (a, b) = edges[i];
                    let mut e2 = edges.clone();
                    e2.remove(i);
                    let w = fresh;
                    e2.push((a, w));
                    e2.push((w, b));
                    e2.push((w, leaf));
                    next.push((e2, fresh + 1));
                }
            }
            partials = next;
        }
        partials
            .into_iter()
            .map(|(edges, fresh)| {
                let leaf_map: Vec<(usize, usize)> = (0..m).map(|e| (e, e)).collect();
                BranchDecomposition::from_parts(fresh, edges, leaf_map, g).unwrap()
            })
            .collect()
    }

    #[test]
    fn single_edge_has_width_zero() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let bd = heuristic_branch_decomposition(&g).unwrap();
        assert_eq!(bd.width(), 0);
        assert_eq!(bd.node_count(), 1);
        bd.validate(&g).unwrap();
    }

    #[test]
    fn exhaustive_widths_on_tiny_graphs() {
        let p3 = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let all = enumerate_all_decompositions(&p3);
        assert_eq!(all.len(), 1);
        assert_eq!(all.iter().map(|d| d.width()).min(), Some(1));
        assert_eq!(heuristic_branch_decomposition(&p3).unwrap().width(), 1);

        let c4 = gen_named(&NamedGraph::Cycle(4)).unwrap();
        let all = enumerate_all_decompositions(&c4);
        assert_eq!(all.len(), 3);
        assert_eq!(all.iter().map(|d| d.width()).min(), Some(2));
        assert_eq!(heuristic_branch_decomposition(&c4).unwrap().width(), 2);
    }

    #[test]
    fn heuristic_is_valid_on_assorted_graphs() {
        for g in [
            gen_named(&NamedGraph::Petersen).unwrap(),
            gen_named(&NamedGraph::Complete(5)).unwrap(),
            gen_named(&NamedGraph::Star(4)).unwrap(),
            crate::generators::random_graph(8, 0.4, 3).unwrap(),
        ] {
            if g.edge_count() == 0 {
                continue;
            }
            let bd = heuristic_branch_decomposition(&g).unwrap();
            bd.validate(&g).unwrap();
        }
        assert_eq!(
            heuristic_branch_decomposition(&Graph::empty(3)).unwrap_err(),
            DecompError::EmptyEdgeSet
        );
    }

    #[test]
    fn linear_decomposition_is_valid() {
        let g = gen_named(&NamedGraph::Cycle(5)).unwrap();
        let order: Vec<usize> = (0..5).rev().collect();
        let bd = linear_branch_decomposition(&g, &order).unwrap();
        bd.validate(&g).unwrap();
        assert_eq!(bd.leaf_map().len(), 5);
    }

    #[test]
    fn rejects_tampered_decompositions() {
        let g = gen_named(&NamedGraph::Cycle(4)).unwrap();
        // Missing one leaf.
        let err = BranchDecomposition::from_parts(
            4,
            vec![(0, 1), (1, 2), (1, 3)],
            vec![(0, 0), (2, 1), (3, 2)],
            &g,
        )
        .unwrap_err();
        assert!(matches!(err, DecompError::LeafMappingNotBijective(_) | DecompError::BadInternalDegree { .. }));
        // Internal node of degree 2.
        let err = BranchDecomposition::from_parts(
            3,
            vec![(0, 1), (1, 2)],
            vec![(0, 0), (2, 1)],
            &Graph::new(3, vec![(0, 1), (1, 2)]).unwrap(),
        )
        .unwrap_err();
        assert_eq!(err, DecompError::BadInternalDegree { node: 1, degree: 2 });
    }

    #[test]
    fn tree_decomposition_validation() {
        let g = gen_named(&NamedGraph::Cycle(4)).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2], vec![0, 2, 3]], vec![(0, 1)]);
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 2);

        let bad = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![(0, 1)]);
        assert!(matches!(bad.validate(&g), Err(DecompError::EdgeNotCovered(_, _))));

        let disconnected = TreeDecomposition::new(
            vec![vec![0, 1], vec![1, 2], vec![0, 2, 3]],
            vec![(0, 1), (1, 2)],
        );
        assert!(matches!(
            disconnected.validate(&g),
            Err(DecompError::OccurrenceDisconnected(0))
        ));
    }

    /// Tree decomposition from a vertex elimination order: the bag of v
    /// holds v plus its later neighbors in the fill-in graph; each bag links
    /// to the bag of its earliest later bag-mate.
    fn elimination_td(g: &Graph, order: &[usize]) -> TreeDecomposition {
        let n = g.vertex_count();
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut adj: Vec<BTreeSet<usize>> =
            (0..n).map(|v| g.neighbors(v).into_iter().collect()).collect();
        let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut bag_of = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            let later: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > i).collect();
            let mut bag = later.clone();
            bag.push(v);
            bag_of[v] = i;
            bags[i] = bag;
            for (a, &x) in later.iter().enumerate() {
                for &y in &later[a + 1..] {
                    adj[x].insert(y);
                    adj[y].insert(x);
                }
            }
        }
        let mut edges = Vec::new();
        for (i, &v) in order.iter().enumerate() {
            let later_min = bags[i].iter().filter(|&&u| u != v).min_by_key(|&&u| pos[u]);
            match later_min {
                Some(&u) => edges.push((i, bag_of[u])),
                // Component roots chain to the next bag so the tree stays
                // connected (the bags share nothing, which is fine).
                None if i + 1 < n => edges.push((i, i + 1)),
                None => {}
            }
        }
        TreeDecomposition::new(bags, edges)
    }

    #[test]
    fn elimination_order_decompositions_convert_within_the_bound() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for trial in 0..40u64 {
            let n = 4 + (trial as usize) % 6;
            let g = crate::generators::random_graph(n, 0.4, 60_000 + trial).unwrap();
            if g.edge_count() == 0 {
                continue;
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let td = elimination_td(&g, &order);
            td.validate(&g).unwrap();
            let bd = treedecomp_to_branchdecomp(&td, &g).unwrap();
            bd.validate(&g).unwrap();
            assert!(
                bd.width() <= td.width() + 1,
                "trial {trial}: bd width {} > td width {} + 1",
                bd.width(),
                td.width()
            );
            assert_eq!(
                crate::branchdp::solve_branchdp(&g, &bd).unwrap().0,
                crate::oracle::nu_k_brute(&g, 2).unwrap().value
            );
        }
    }

    #[test]
    fn conversion_width_bound() {
        // A tree graph with the classic width-1 decomposition.
        let tree = Graph::new(6, vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        let bags: Vec<Vec<usize>> = tree.edges().iter().map(|&(u, v)| vec![u, v]).collect();
        // Chain each edge-bag to its parent edge's bag.
        let td = TreeDecomposition::new(bags, vec![(0, 1), (0, 2), (0, 3), (1, 4)]);
        td.validate(&tree).unwrap();
        assert_eq!(td.width(), 1);
        let bd = treedecomp_to_branchdecomp(&td, &tree).unwrap();
        bd.validate(&tree).unwrap();
        assert!(bd.width() <= 2, "width {} > tw + 1", bd.width());

        let k4 = gen_named(&NamedGraph::Complete(4)).unwrap();
        let single = TreeDecomposition::new(vec![vec![0, 1, 2, 3]], vec![]);
        single.validate(&k4).unwrap();
        let bd = treedecomp_to_branchdecomp(&single, &k4).unwrap();
        assert!(bd.width() <= 4);

        let c4 = gen_named(&NamedGraph::Cycle(4)).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2], vec![0, 2, 3]], vec![(0, 1)]);
        let bd = treedecomp_to_branchdecomp(&td, &c4).unwrap();
        assert!(bd.width() <= 3);
    }
}
