//! Simple undirected graphs with a canonical sorted edge list, plus the
//! structural queries every solver in this crate builds on.

use thiserror::Error;

/// Errors raised while constructing or querying graphs and colorings.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("endpoint {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("coloring has {got} entries but the graph has {expected} edges")]
    ColoringLengthMismatch { got: usize, expected: usize },
    #[error("color {0} is not in {{0, 1, 2}}")]
    InvalidColor(u8),
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are stored as pairs `(u, v)` with `u < v`, sorted lexicographically;
/// the position of a pair in that list is its edge index. Isolated vertices
/// are representable (they simply touch no edge). Values are immutable after
/// construction, so sharing across threads is safe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// incident[v] = indices of edges touching v, ascending.
    incident: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list. Endpoint order within a
    /// pair is normalized and the list is sorted; loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut canon: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            for &x in &[a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange(x, n));
                }
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        for w in canon.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut incident = vec![Vec::new(); n];
        for (i, &(u, v)) in canon.iter().enumerate() {
            incident[u].push(i);
            incident[v].push(i);
        }
        Ok(Graph { n, edges: canon, incident })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), incident: vec![Vec::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    /// Index of edge `{u, v}` in the canonical list, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Indices of the edges incident to `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incident.iter().map(Vec::len).collect()
    }

    /// Minimum degree; 0 for the empty-vertex graph.
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_cubic(&self) -> bool {
        self.n > 0 && (0..self.n).all(|v| self.degree(v) == 3)
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.incident[v]
            .iter()
            .map(|&e| {
                let (a, b) = self.edges[e];
                if a == v {
                    b
                } else {
                    a
                }
            })
            .collect()
    }

    /// Endpoint of edge `e` that is not `v`.
    pub fn other_endpoint(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Partition of the vertex set into connected components. Every vertex,
    /// isolated or not, appears in exactly one part; parts are ordered by
    /// their smallest vertex and sorted internally.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut parts = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut part = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        part.push(w);
                        queue.push(w);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    /// Subgraph keeping only edges whose index satisfies `keep`. The vertex
    /// set is unchanged; returns the graph together with the map from new
    /// edge indices to old ones.
    pub fn edge_subgraph(&self, keep: impl Fn(usize) -> bool) -> (Graph, Vec<usize>) {
        let mut kept_edges = Vec::new();
        let mut map = Vec::new();
        for (i, &e) in self.edges.iter().enumerate() {
            if keep(i) {
                kept_edges.push(e);
                map.push(i);
            }
        }
        // Kept edges stay sorted, so indices line up with `map`.
        let mut incident = vec![Vec::new(); self.n];
        for (i, &(u, v)) in kept_edges.iter().enumerate() {
            incident[u].push(i);
            incident[v].push(i);
        }
        (Graph { n: self.n, edges: kept_edges, incident }, map)
    }

    /// Subgraph obtained by deleting a set of vertices: all incident edges
    /// are dropped, vertex slots are retained (deleted vertices become
    /// isolated). Returns the graph and the new-to-old edge index map.
    pub fn delete_vertices(&self, removed: &[bool]) -> (Graph, Vec<usize>) {
        self.edge_subgraph(|i| {
            let (u, v) = self.edges[i];
            !removed[u] && !removed[v]
        })
    }
}

/// True iff the whole of `g` is 2-edge-colorable: maximum degree at most two
/// and no connected component forming an odd cycle.
pub fn is_2ec_feasible(g: &Graph) -> bool {
    if g.max_degree() > 2 {
        return false;
    }
    for part in g.components() {
        let vertices = part.len();
        let edge_ends: usize = part.iter().map(|&v| g.degree(v)).sum();
        let edges = edge_ends / 2;
        // With all degrees <= 2 a component is a cycle iff #edges == #vertices.
        if edges == vertices && vertices % 2 == 1 {
            return false;
        }
    }
    true
}

/// An assignment of a color in {0, 1, 2} to every edge of a graph; 0 is the
/// dummy "unassigned" slot, 1 and 2 are the true colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    colors: Vec<u8>,
}

impl EdgeColoring {
    pub fn new(colors: Vec<u8>) -> Result<Self, GraphError> {
        if let Some(&c) = colors.iter().find(|&&c| c > 2) {
            return Err(GraphError::InvalidColor(c));
        }
        Ok(EdgeColoring { colors })
    }

    /// All-dummy coloring for a graph with `m` edges.
    pub fn uncolored(m: usize) -> Self {
        EdgeColoring { colors: vec![0; m] }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, edge: usize) -> u8 {
        self.colors[edge]
    }

    pub fn set(&mut self, edge: usize, color: u8) {
        debug_assert!(color <= 2);
        self.colors[edge] = color;
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Number of true-colored edges.
    pub fn value(&self) -> usize {
        self.colors.iter().filter(|&&c| c != 0).count()
    }
}

/// A witnessed properness violation: vertex `vertex` has the two distinct
/// edges `first_edge` and `second_edge` both colored `color`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringViolation {
    pub vertex: usize,
    pub color: u8,
    pub first_edge: usize,
    pub second_edge: usize,
}

impl std::fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vertex {} has edges {} and {} both colored {}",
            self.vertex, self.first_edge, self.second_edge, self.color
        )
    }
}

/// First properness violation of `c` on `g` in vertex order, if any.
pub fn coloring_violation(g: &Graph, c: &EdgeColoring) -> Result<Option<ColoringViolation>, GraphError> {
    if c.len() != g.edge_count() {
        return Err(GraphError::ColoringLengthMismatch { got: c.len(), expected: g.edge_count() });
    }
    for v in 0..g.vertex_count() {
        let mut seen: [Option<usize>; 3] = [None; 3];
        for &e in g.incident_edges(v) {
            let col = c.color(e) as usize;
            if col == 0 {
                continue;
            }
            if let Some(first) = seen[col] {
                return Ok(Some(ColoringViolation {
                    vertex: v,
                    color: col as u8,
                    first_edge: first,
                    second_edge: e,
                }));
            }
            seen[col] = Some(e);
        }
    }
    Ok(None)
}

/// True iff `c` is a proper partial 2-edge-coloring of `g`: at most one
/// incident edge of each true color per vertex.
pub fn validate_coloring(g: &Graph, c: &EdgeColoring) -> Result<bool, GraphError> {
    Ok(coloring_violation(g, c)?.is_none())
}

/// Totally colors a graph that passes [`is_2ec_feasible`]: every edge gets a
/// true color, alternating along each path and even cycle.
///
/// Panics if the graph is infeasible; callers check first.
pub fn color_feasible_graph(g: &Graph) -> EdgeColoring {
    assert!(is_2ec_feasible(g), "graph is not 2-edge-colorable");
    let mut coloring = EdgeColoring::uncolored(g.edge_count());
    let mut visited_edge = vec![false; g.edge_count()];
    for start in 0..g.vertex_count() {
        // Walk from path endpoints first (degree 1); leftover unvisited
        // structures are even cycles and can start anywhere.
        if g.degree(start) != 1 {
            continue;
        }
        walk_and_color(g, start, &mut coloring, &mut visited_edge);
    }
    for start in 0..g.vertex_count() {
        if g.incident_edges(start).iter().any(|&e| !visited_edge[e]) {
            walk_and_color(g, start, &mut coloring, &mut visited_edge);
        }
    }
    coloring
}

fn walk_and_color(g: &Graph, start: usize, coloring: &mut EdgeColoring, visited_edge: &mut [bool]) {
    let mut at = start;
    let mut color = 1u8;
    loop {
        let next = g
            .incident_edges(at)
            .iter()
            .copied()
            .find(|&e| !visited_edge[e]);
        match next {
            Some(e) => {
                visited_edge[e] = true;
                coloring.set(e, color);
                color = 3 - color;
                at = g.other_endpoint(e, at);
            }
            None => break,
        }
    }
}
