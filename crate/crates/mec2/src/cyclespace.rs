//! FPT engine parameterized by the cycle-space dimension: guess a coloring of
//! a feedback edge set (3^k choices), reduce each surviving guess to a
//! constrained forest instance, and keep the best combined solution.

use crate::forest::{solve_forest, ColorAllowance};
use crate::graph::{EdgeColoring, Graph};
use rayon::prelude::*;
use thiserror::Error;

/// Hard guard on the feedback-set size accepted by [`solve_cyclespace`].
pub const FEEDBACK_GUARD: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CyclespaceError {
    #[error("feedback edge set has {found} edges (guard {guard}); use the branch-decomposition engine instead")]
    TooManyFeedbackEdges { found: usize, guard: usize },
    #[error("graph has {edges} edges on {vertices} vertices, beyond the |E| <= |V| + log2|V| bound")]
    EdgeBoundViolated { edges: usize, vertices: usize },
    #[error("the log-edge solver requires a connected graph")]
    NotConnected,
}

/// A feedback edge set together with the residual forest it leaves behind.
#[derive(Debug, Clone)]
pub struct FeedbackEdgeSet {
    /// Edge indices of F, ascending.
    pub edges: Vec<usize>,
    /// T = G - F on the same vertex set.
    pub forest: Graph,
    /// Forest edge index -> original edge index.
    pub forest_edge_map: Vec<usize>,
}

impl FeedbackEdgeSet {
    pub fn dimension(&self) -> usize {
        self.edges.len()
    }
}

/// Non-tree edges of the spanning forest grown over the canonical edge
/// order. The result has exactly m - n + (#components) edges.
pub fn feedback_edge_set(g: &Graph) -> FeedbackEdgeSet {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut feedback = Vec::new();
    let mut in_forest = vec![false; g.edge_count()];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            feedback.push(i);
        } else {
            parent[ru] = rv;
            in_forest[i] = true;
        }
    }
    let (forest, forest_edge_map) = g.edge_subgraph(|i| in_forest[i]);
    FeedbackEdgeSet { edges: feedback, forest, forest_edge_map }
}

/// Operation counts from a cycle-space solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclespaceStats {
    /// Base-3 assignments enumerated; always 3^|F|.
    pub guesses_visited: u64,
    /// Guesses that passed the properness filter.
    pub guesses_surviving: u64,
    pub feedback_size: usize,
}

fn decode_guess(index: u64, len: usize) -> Vec<u8> {
    let mut digits = vec![0u8; len];
    let mut rest = index;
    for d in digits.iter_mut() {
        *d = (rest % 3) as u8;
        rest /= 3;
    }
    digits
}

/// Evaluates one guess: `None` if two same-colored feedback edges meet at a
/// vertex, otherwise the total value of feedback edges plus the best
/// constrained forest completion.
fn evaluate_guess(g: &Graph, fes: &FeedbackEdgeSet, digits: &[u8]) -> Option<usize> {
    let allowance = guess_allowance(g, fes, digits)?;
    let true_edges = digits.iter().filter(|&&c| c != 0).count();
    let (forest_value, _) = solve_forest(&fes.forest, &allowance)
        .expect("residual graph of a feedback set is a forest");
    Some(true_edges + forest_value)
}

/// Allowance induced by a guess: each true-colored feedback edge blocks its
/// color at both endpoints. A vertex saturated by both colors keeps only the
/// dummy, which removes it from the forest instance.
fn guess_allowance(g: &Graph, fes: &FeedbackEdgeSet, digits: &[u8]) -> Option<ColorAllowance> {
    let n = g.vertex_count();
    let mut counts = vec![[0u8; 2]; n];
    for (i, &c) in digits.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (u, v) = g.edge(fes.edges[i]);
        for x in [u, v] {
            counts[x][(c - 1) as usize] += 1;
            if counts[x][(c - 1) as usize] > 1 {
                return None;
            }
        }
    }
    let mut allowance = ColorAllowance::unrestricted(n);
    for (v, cnt) in counts.iter().enumerate() {
        if cnt[0] > 0 {
            allowance.forbid(v, 1);
        }
        if cnt[1] > 0 {
            allowance.forbid(v, 2);
        }
    }
    Some(allowance)
}

/// Combined coloring for a surviving guess.
fn guess_coloring(g: &Graph, fes: &FeedbackEdgeSet, digits: &[u8]) -> (usize, EdgeColoring) {
    let allowance = guess_allowance(g, fes, digits).expect("caller passes surviving guesses");
    let (forest_value, forest_coloring) =
        solve_forest(&fes.forest, &allowance).expect("residual graph is a forest");
    let mut coloring = EdgeColoring::uncolored(g.edge_count());
    for (i, &c) in digits.iter().enumerate() {
        coloring.set(fes.edges[i], c);
    }
    for (j, &orig) in fes.forest_edge_map.iter().enumerate() {
        coloring.set(orig, forest_coloring.color(j));
    }
    let true_edges = digits.iter().filter(|&&c| c != 0).count();
    (true_edges + forest_value, coloring)
}

fn solve_inner(g: &Graph, parallel: bool) -> Result<(usize, EdgeColoring, CyclespaceStats), CyclespaceError> {
    let fes = feedback_edge_set(g);
    let k = fes.dimension();
    if k > FEEDBACK_GUARD {
        return Err(CyclespaceError::TooManyFeedbackEdges { found: k, guard: FEEDBACK_GUARD });
    }
    let total: u64 = 3u64.pow(k as u32);

    // Value-only scan; ties resolve to the first optimum in base-3 order.
    let scan = |index: u64| -> (Option<(usize, u64)>, u64) {
        let digits = decode_guess(index, k);
        match evaluate_guess(g, &fes, &digits) {
            Some(value) => (Some((value, index)), 1),
            None => (None, 0),
        }
    };
    let combine = |a: Option<(usize, u64)>, b: Option<(usize, u64)>| match (a, b) {
        (Some((va, ia)), Some((vb, ib))) => {
            if vb > va || (vb == va && ib < ia) {
                Some((vb, ib))
            } else {
                Some((va, ia))
            }
        }
        (x, None) => x,
        (None, y) => y,
    };

    let (best, surviving) = if parallel {
        (0..total)
            .into_par_iter()
            .map(scan)
            .reduce(|| (None, 0), |(a, sa), (b, sb)| (combine(a, b), sa + sb))
    } else {
        let mut best = None;
        let mut surviving = 0;
        for index in 0..total {
            let (candidate, s) = scan(index);
            best = combine(best, candidate);
            surviving += s;
        }
        (best, surviving)
    };

    let (value, index) = best.expect("the all-dummy guess always survives");
    let digits = decode_guess(index, k);
    let (rebuilt, coloring) = guess_coloring(g, &fes, &digits);
    debug_assert_eq!(rebuilt, value);
    let stats = CyclespaceStats { guesses_visited: total, guesses_surviving: surviving, feedback_size: k };
    Ok((value, coloring, stats))
}

/// Maximum 2-edge-colorable subgraph via the 3^|F| cycle-space enumeration.
pub fn solve_cyclespace(g: &Graph) -> Result<(usize, EdgeColoring), CyclespaceError> {
    solve_inner(g, false).map(|(v, c, _)| (v, c))
}

/// As [`solve_cyclespace`], evaluating guesses on the current rayon pool.
/// Guess independence plus the (value, index) tie-break keeps the result
/// identical to the sequential scan.
pub fn solve_cyclespace_parallel(g: &Graph) -> Result<(usize, EdgeColoring), CyclespaceError> {
    solve_inner(g, true).map(|(v, c, _)| (v, c))
}

/// As [`solve_cyclespace`], also reporting operation counts.
pub fn solve_cyclespace_with_stats(
    g: &Graph,
) -> Result<(usize, EdgeColoring, CyclespaceStats), CyclespaceError> {
    solve_inner(g, false)
}

/// Polynomial-time special case: connected graphs with at most
/// |V| + log2|V| edges, where the cycle-space enumeration has polynomially
/// many guesses.
pub fn solve_logedge(g: &Graph) -> Result<(usize, EdgeColoring), CyclespaceError> {
    let n = g.vertex_count();
    if n == 0 || g.components().len() != 1 {
        return Err(CyclespaceError::NotConnected);
    }
    let bound = n as f64 + (n as f64).log2();
    if g.edge_count() as f64 > bound + 1e-9 {
        return Err(CyclespaceError::EdgeBoundViolated { edges: g.edge_count(), vertices: n });
    }
    solve_cyclespace(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_named, random_graph, NamedGraph};
    use crate::graph::validate_coloring;
    use crate::oracle::nu_k_brute;

    #[test]
    fn feedback_sizes() {
        let tree = gen_named(&NamedGraph::Path(6)).unwrap();
        assert_eq!(feedback_edge_set(&tree).dimension(), 0);
        let c4 = gen_named(&NamedGraph::Cycle(4)).unwrap();
        assert_eq!(feedback_edge_set(&c4).dimension(), 1);
        let petersen = gen_named(&NamedGraph::Petersen).unwrap();
        let fes = feedback_edge_set(&petersen);
        assert_eq!(fes.dimension(), 15 - 10 + 1);
        assert_eq!(fes.forest.edge_count(), 9);
    }

    #[test]
    fn named_values() {
        let c4 = gen_named(&NamedGraph::Cycle(4)).unwrap();
        assert_eq!(solve_cyclespace(&c4).unwrap().0, 4);
        let c3 = gen_named(&NamedGraph::Cycle(3)).unwrap();
        assert_eq!(solve_cyclespace(&c3).unwrap().0, 2);
        let petersen = gen_named(&NamedGraph::Petersen).unwrap();
        let (value, coloring, stats) = solve_cyclespace_with_stats(&petersen).unwrap();
        assert_eq!(value, 9);
        assert_eq!(stats.guesses_visited, 3u64.pow(6));
        assert!(validate_coloring(&petersen, &coloring).unwrap());
        assert_eq!(coloring.value(), 9);
    }

    #[test]
    fn agrees_with_oracle_on_random_graphs() {
        for seed in 0..120 {
            let n = 3 + (seed as usize) % 8;
            let g = random_graph(n, 0.45, seed).unwrap();
            if g.edge_count() > 16 {
                continue;
            }
            let expected = nu_k_brute(&g, 2).unwrap().value;
            let (value, coloring) = solve_cyclespace(&g).unwrap();
            assert_eq!(value, expected, "graph {g:?}");
            assert!(validate_coloring(&g, &coloring).unwrap());
            assert_eq!(coloring.value(), value);
            let (pvalue, pcoloring) = solve_cyclespace_parallel(&g).unwrap();
            assert_eq!(pvalue, value);
            assert_eq!(pcoloring, coloring, "parallel scan must match sequential");
        }
    }

    #[test]
    fn surviving_guesses_extend_to_proper_colorings() {
        for seed in [2, 9, 33] {
            let g = random_graph(6, 0.5, seed).unwrap();
            let fes = feedback_edge_set(&g);
            let k = fes.dimension();
            for index in 0..3u64.pow(k as u32) {
                let digits = decode_guess(index, k);
                if evaluate_guess(&g, &fes, &digits).is_some() {
                    let (value, coloring) = guess_coloring(&g, &fes, &digits);
                    assert!(validate_coloring(&g, &coloring).unwrap());
                    assert_eq!(coloring.value(), value);
                }
            }
        }
    }

    #[test]
    fn oracle_witness_guess_is_visited_and_survives() {
        for seed in 0..40 {
            let g = random_graph(6, 0.5, seed).unwrap();
            if g.edge_count() > 12 {
                continue;
            }
            let witness = nu_k_brute(&g, 2).unwrap().into_coloring();
            let fes = feedback_edge_set(&g);
            let digits: Vec<u8> = fes.edges.iter().map(|&e| witness.color(e)).collect();
            let index: u64 = digits.iter().rev().fold(0, |acc, &d| acc * 3 + d as u64);
            assert!(index < 3u64.pow(fes.dimension() as u32));
            let value = evaluate_guess(&g, &fes, &digits).expect("witness restriction is proper");
            assert!(value >= witness.value());
        }
    }

    #[test]
    fn logedge_contract() {
        let tree = gen_named(&NamedGraph::Path(7)).unwrap();
        assert_eq!(solve_logedge(&tree).unwrap().0, 6);
        let c5 = gen_named(&NamedGraph::Cycle(5)).unwrap();
        assert_eq!(solve_logedge(&c5).unwrap().0, 4);
        // Theta graph: two hubs joined by three 2-edge paths (= K23),
        // n = 5, m = 6 within the bound; oracle value 4.
        let theta = Graph::new(5, vec![(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]).unwrap();
        assert_eq!(nu_k_brute(&theta, 2).unwrap().value, 4);
        assert_eq!(solve_logedge(&theta).unwrap().0, 4);

        let k5 = gen_named(&NamedGraph::Complete(5)).unwrap();
        assert_eq!(
            solve_logedge(&k5).unwrap_err(),
            CyclespaceError::EdgeBoundViolated { edges: 10, vertices: 5 }
        );
        let two_parts = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(solve_logedge(&two_parts).unwrap_err(), CyclespaceError::NotConnected);
    }
}
