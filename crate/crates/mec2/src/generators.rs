//! Instance generators: named graphs, the hardness constructions, and seeded
//! random families. All randomness is ChaCha8 keyed by the caller's seed, so
//! identical arguments produce identical graphs on every platform.

use crate::graph::{Graph, GraphError};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown graph name: {0}")]
    UnknownName(String),
    #[error("{0}")]
    BadSize(String),
    #[error("failed to sample a simple cubic graph after {0} attempts")]
    CubicRetriesExhausted(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The named instances the `gen` command understands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedGraph {
    Petersen,
    K33,
    Cycle(usize),
    Path(usize),
    Star(usize),
    Complete(usize),
}

impl NamedGraph {
    /// Parses `petersen`, `k4`, `k5`, `k33`, `cycle`, `path`, `star`,
    /// `complete`; the last four take their size from `n`.
    pub fn parse(name: &str, n: Option<usize>) -> Result<Self, GenError> {
        let need_n = |what: &str| {
            n.ok_or_else(|| GenError::BadSize(format!("{what} requires a size argument")))
        };
        match name {
            "petersen" => Ok(NamedGraph::Petersen),
            "k4" => Ok(NamedGraph::Complete(4)),
            "k5" => Ok(NamedGraph::Complete(5)),
            "k33" => Ok(NamedGraph::K33),
            "cycle" => Ok(NamedGraph::Cycle(need_n("cycle")?)),
            "path" => Ok(NamedGraph::Path(need_n("path")?)),
            "star" => Ok(NamedGraph::Star(need_n("star")?)),
            "complete" => Ok(NamedGraph::Complete(need_n("complete")?)),
            other => Err(GenError::UnknownName(other.to_string())),
        }
    }
}

/// Builds a named graph in canonical form.
pub fn gen_named(name: &NamedGraph) -> Result<Graph, GenError> {
    match *name {
        NamedGraph::Petersen => {
            let mut edges = Vec::with_capacity(15);
            for i in 0..5 {
                edges.push((i, (i + 1) % 5)); // outer pentagon
                edges.push((i, i + 5)); // spokes
                edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
            }
            Ok(Graph::new(10, edges)?)
        }
        NamedGraph::K33 => {
            let edges = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect::<Vec<_>>();
            Ok(Graph::new(6, edges)?)
        }
        NamedGraph::Cycle(n) => {
            if n < 3 {
                return Err(GenError::BadSize(format!("cycle needs n >= 3, got {n}")));
            }
            Ok(Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?)
        }
        NamedGraph::Path(n) => {
            if n == 0 {
                return Err(GenError::BadSize("path needs n >= 1".into()));
            }
            Ok(Graph::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)))?)
        }
        NamedGraph::Star(leaves) => Ok(Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v)))?),
        NamedGraph::Complete(n) => {
            let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect::<Vec<_>>();
            Ok(Graph::new(n, edges)?)
        }
    }
}

/// Adds a universal vertex `z` adjacent to every existing vertex; the result
/// has radius one.
pub fn universal_join(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    edges.extend((0..n).map(|v| (v, n)));
    Graph::new(n + 1, edges).expect("join of a valid graph is valid")
}

/// `l` vertex-disjoint copies of `g`.
pub fn disjoint_copies(g: &Graph, l: usize) -> Result<Graph, GenError> {
    if l == 0 {
        return Err(GenError::BadSize("need at least one copy".into()));
    }
    let n = g.vertex_count();
    let mut edges = Vec::with_capacity(g.edge_count() * l);
    for copy in 0..l {
        let off = copy * n;
        edges.extend(g.edges().iter().map(|&(u, v)| (u + off, v + off)));
    }
    Ok(Graph::new(n * l, edges)?)
}

/// Erdos-Renyi G(n, p), deterministic under `seed`. Pairs are visited in
/// lexicographic order, one Bernoulli draw each.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::BadSize(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::new(n, edges)?)
}

/// Random simple 3-regular graph via the pairing model: three stubs per
/// vertex, a uniformly shuffled perfect pairing, rejection on loops and
/// repeated pairs.
pub fn random_cubic(n: usize, seed: u64) -> Result<Graph, GenError> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(GenError::BadSize(format!("cubic graphs need even n >= 4, got {n}")));
    }
    const MAX_ATTEMPTS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
    'attempt: for _ in 0..MAX_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(3 * n / 2);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                continue 'attempt;
            }
            edges.push((u.min(v), u.max(v)));
        }
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue 'attempt;
        }
        return Ok(Graph::new(n, edges)?);
    }
    Err(GenError::CubicRetriesExhausted(MAX_ATTEMPTS))
}
