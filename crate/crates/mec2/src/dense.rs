//! Dense-graph solver (Hamiltonian construction under the Ore condition,
//! brute force below it), the decision wrapper, and the engine dispatcher
//! that routes each connected component to an appropriate exact engine.

use crate::branchdp::solve_branchdp;
use crate::cyclespace::{feedback_edge_set, solve_cyclespace, solve_cyclespace_parallel, solve_logedge, CyclespaceError};
use crate::decomp::{heuristic_branch_decomposition, DecompError};
use crate::graph::{EdgeColoring, Graph};
use crate::matching::max_matching;
use crate::oracle::{nu2_brute, OracleError};
use thiserror::Error;

/// Edge guard for the sparse fallback inside [`solve_dense`].
pub const DENSE_ORACLE_GUARD: usize = 20;
/// Default feedback-set threshold below which dispatch picks the
/// cycle-space engine.
pub const DEFAULT_CYCLESPACE_THRESHOLD: usize = 18;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DenseError {
    #[error("need minimum degree >= n/2 and n >= 3 (n = {n}, minimum degree = {min_degree})")]
    PreconditionViolated { n: usize, min_degree: usize },
    #[error("sparse fallback has {edges} edges, beyond the oracle guard {guard}; use the cyclespace or branchdp engine")]
    OracleRefused { edges: usize, guard: usize },
}

#[derive(Debug, Error)]
pub enum DispatchError {
    #[error(transparent)]
    Cyclespace(#[from] CyclespaceError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Dense(#[from] DenseError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Hamiltonian cycle of a graph satisfying the Ore condition via minimum
/// degree n/2, built by rotation exchanges: while some cyclically consecutive
/// pair is non-adjacent, a crossing pair is located by degree counting and
/// the intermediate segment reversed. Each exchange removes at least one
/// non-adjacent pair, so at most n rounds run.
pub fn ore_hamiltonian_cycle(g: &Graph) -> Result<Vec<usize>, DenseError> {
    let n = g.vertex_count();
    if n < 3 || 2 * g.min_degree() < n {
        return Err(DenseError::PreconditionViolated { n, min_degree: g.min_degree() });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        assert!(rounds <= n + 1, "rotation argument must terminate within n rounds");
        let gap = (0..n).find(|&i| !g.has_edge(order[i], order[(i + 1) % n]));
        let Some(i) = gap else {
            return Ok(order);
        };
        // Rotate so the non-adjacent pair wraps: p[0] follows the gap,
        // p[n-1] precedes it.
        order.rotate_left((i + 1) % n);
        let first = order[0];
        let last = order[n - 1];
        let t = (1..n - 1)
            .find(|&t| g.has_edge(first, order[t]) && g.has_edge(last, order[t - 1]))
            .expect("the Ore condition guarantees a crossing pair");
        order[t..].reverse();
    }
}

/// Exact solver realizing the |V| - delta parameterization: on dense graphs
/// (min degree at least n/2) a Hamiltonian cycle is built and two-colored,
/// giving n for even n and n - 1 for odd n, which meets the nu_2 upper
/// bound; otherwise the edge count is bounded and the brute-force oracle
/// finishes the job.
pub fn solve_dense(g: &Graph) -> Result<(usize, EdgeColoring), DenseError> {
    let n = g.vertex_count();
    if n >= 3 && 2 * g.min_degree() >= n {
        let cycle = ore_hamiltonian_cycle(g)?;
        let mut coloring = EdgeColoring::uncolored(g.edge_count());
        let colored_edges = if n.is_multiple_of(2) { n } else { n - 1 };
        for i in 0..colored_edges {
            let e = g
                .edge_index(cycle[i], cycle[(i + 1) % n])
                .expect("cycle edges are graph edges");
            coloring.set(e, 1 + (i % 2) as u8);
        }
        return Ok((colored_edges, coloring));
    }
    if g.edge_count() > DENSE_ORACLE_GUARD {
        return Err(DenseError::OracleRefused { edges: g.edge_count(), guard: DENSE_ORACLE_GUARD });
    }
    let (value, coloring) = nu2_brute(g).expect("guard keeps the oracle in range");
    Ok((value, coloring))
}

/// Which engine solved a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Brute,
    Logedge,
    Dense,
    Cyclespace,
    Branchdp,
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            EngineKind::Brute => "brute",
            EngineKind::Logedge => "logedge",
            EngineKind::Dense => "dense",
            EngineKind::Cyclespace => "cyclespace",
            EngineKind::Branchdp => "branchdp",
        };
        f.write_str(name)
    }
}

/// Engine choices made by [`dispatch`], one per connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineTag(pub Vec<EngineKind>);

impl std::fmt::Display for EngineTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut unique: Vec<EngineKind> = Vec::new();
        for &kind in &self.0 {
            if !unique.contains(&kind) {
                unique.push(kind);
            }
        }
        if unique.is_empty() {
            return f.write_str("empty");
        }
        let names: Vec<String> = unique.iter().map(|k| k.to_string()).collect();
        f.write_str(&names.join("+"))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DispatchConfig {
    /// Feedback-set size up to which the cycle-space engine is used.
    pub cyclespace_threshold: usize,
    /// Evaluate cycle-space guesses on the rayon pool.
    pub parallel: bool,
}

impl Default for DispatchConfig {
    fn default() -> Self {
        DispatchConfig { cyclespace_threshold: DEFAULT_CYCLESPACE_THRESHOLD, parallel: false }
    }
}

/// Routes each connected component to an engine: the polynomial log-edge
/// case when the component is that sparse, the Hamiltonian construction when
/// dense, the 3^|F| cycle-space enumeration while the feedback set is small,
/// and the branch-decomposition DP as the catch-all.
pub fn dispatch(g: &Graph) -> Result<(usize, EdgeColoring, EngineTag), DispatchError> {
    dispatch_with(g, DispatchConfig::default())
}

pub fn dispatch_with(
    g: &Graph,
    config: DispatchConfig,
) -> Result<(usize, EdgeColoring, EngineTag), DispatchError> {
    let mut total = 0usize;
    let mut coloring = EdgeColoring::uncolored(g.edge_count());
    let mut tags = Vec::new();
    for part in g.components() {
        let local_of: std::collections::HashMap<usize, usize> =
            part.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut local_edges = Vec::new();
        for &v in &part {
            for &e in g.incident_edges(v) {
                let (a, b) = g.edge(e);
                if a == v {
                    local_edges.push((local_of[&a], local_of[&b]));
                }
            }
        }
        let local = Graph::new(part.len(), local_edges).expect("component subgraph is valid");
        let (value, local_coloring, kind) = solve_component(&local, config)?;
        total += value;
        for (i, &(lu, lv)) in local.edges().iter().enumerate() {
            let e = g
                .edge_index(part[lu], part[lv])
                .expect("component edge exists in the original graph");
            coloring.set(e, local_coloring.color(i));
        }
        tags.push(kind);
    }
    Ok((total, coloring, EngineTag(tags)))
}

fn solve_component(
    local: &Graph,
    config: DispatchConfig,
) -> Result<(usize, EdgeColoring, EngineKind), DispatchError> {
    let (n, m) = (local.vertex_count(), local.edge_count());
    if m as f64 <= n as f64 + (n as f64).log2() + 1e-9 {
        let (value, coloring) = solve_logedge(local)?;
        return Ok((value, coloring, EngineKind::Logedge));
    }
    if n >= 3 && 2 * local.min_degree() >= n {
        let (value, coloring) = solve_dense(local)?;
        return Ok((value, coloring, EngineKind::Dense));
    }
    if feedback_edge_set(local).dimension() <= config.cyclespace_threshold {
        let (value, coloring) = if config.parallel {
            solve_cyclespace_parallel(local)?
        } else {
            solve_cyclespace(local)?
        };
        return Ok((value, coloring, EngineKind::Cyclespace));
    }
    let bd = heuristic_branch_decomposition(local)?;
    let (value, coloring) = solve_branchdp(local, &bd)?;
    Ok((value, coloring, EngineKind::Branchdp))
}

/// Decides nu_2(g) >= t. A maximum matching of size t settles it at once
/// (two matchings only ever grow the count); otherwise the dispatcher
/// computes the exact value.
pub fn decide_nu2_at_least(g: &Graph, t: usize) -> Result<bool, DispatchError> {
    if t == 0 {
        return Ok(true);
    }
    if max_matching(g).len() >= t {
        return Ok(true);
    }
    let (value, _, _) = dispatch(g)?;
    Ok(value >= t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_named, random_graph, NamedGraph};
    use crate::graph::validate_coloring;
    use crate::oracle::nu_k_brute;

    fn assert_hamiltonian(g: &Graph, cycle: &[usize]) {
        assert_eq!(cycle.len(), g.vertex_count());
        let mut seen = vec![false; g.vertex_count()];
        for &v in cycle {
            assert!(!seen[v], "vertex repeated");
            seen[v] = true;
        }
        for i in 0..cycle.len() {
            assert!(g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]));
        }
    }

    #[test]
    fn hamiltonian_cycles() {
        let k4 = gen_named(&NamedGraph::Complete(4)).unwrap();
        assert_hamiltonian(&k4, &ore_hamiltonian_cycle(&k4).unwrap());
        let k33 = gen_named(&NamedGraph::K33).unwrap();
        assert_hamiltonian(&k33, &ore_hamiltonian_cycle(&k33).unwrap());
        let c5 = gen_named(&NamedGraph::Cycle(5)).unwrap();
        assert!(matches!(
            ore_hamiltonian_cycle(&c5),
            Err(DenseError::PreconditionViolated { .. })
        ));
        // Dense but far from complete.
        for seed in 0..30 {
            let g = random_graph(9, 0.75, seed).unwrap();
            if 2 * g.min_degree() >= g.vertex_count() {
                assert_hamiltonian(&g, &ore_hamiltonian_cycle(&g).unwrap());
            }
        }
    }

    #[test]
    fn dense_values() {
        let k4 = gen_named(&NamedGraph::Complete(4)).unwrap();
        let (v, c) = solve_dense(&k4).unwrap();
        assert_eq!(v, 4);
        assert!(validate_coloring(&k4, &c).unwrap());
        let k5 = gen_named(&NamedGraph::Complete(5)).unwrap();
        assert_eq!(solve_dense(&k5).unwrap().0, 4);
        let petersen = gen_named(&NamedGraph::Petersen).unwrap();
        assert_eq!(solve_dense(&petersen).unwrap().0, 9, "sparse fallback");
    }

    #[test]
    fn decide_contract() {
        let petersen = gen_named(&NamedGraph::Petersen).unwrap();
        assert!(decide_nu2_at_least(&petersen, 9).unwrap());
        assert!(!decide_nu2_at_least(&petersen, 10).unwrap());
        assert!(decide_nu2_at_least(&petersen, 0).unwrap());
        assert!(decide_nu2_at_least(&Graph::empty(4), 0).unwrap());
    }

    #[test]
    fn dispatch_routes_and_sums() {
        let tree = gen_named(&NamedGraph::Path(6)).unwrap();
        let (v, _, tag) = dispatch(&tree).unwrap();
        assert_eq!(v, 5);
        assert_eq!(tag.0, vec![EngineKind::Logedge]);

        let k6 = gen_named(&NamedGraph::Complete(6)).unwrap();
        let (v, _, tag) = dispatch(&k6).unwrap();
        assert_eq!(v, 6);
        assert_eq!(tag.0, vec![EngineKind::Dense]);

        let petersen = gen_named(&NamedGraph::Petersen).unwrap();
        let (v, _, tag) = dispatch(&petersen).unwrap();
        assert_eq!(v, 9);
        assert_eq!(tag.0, vec![EngineKind::Cyclespace]);

        // Disjoint union: one component per engine, values add up.
        let mut edges: Vec<(usize, usize)> = k6.edges().to_vec();
        edges.extend(tree.edges().iter().map(|&(a, b)| (a + 6, b + 6)));
        let union = Graph::new(12, edges).unwrap();
        let (v, coloring, tag) = dispatch(&union).unwrap();
        assert_eq!(v, 11);
        assert!(validate_coloring(&union, &coloring).unwrap());
        assert_eq!(tag.to_string(), "dense+logedge");
    }

    #[test]
    fn dispatch_matches_oracle() {
        for seed in 200..280 {
            let n = 3 + (seed as usize) % 8;
            let g = random_graph(n, 0.5, seed).unwrap();
            if g.edge_count() > 14 {
                continue;
            }
            let expected = nu_k_brute(&g, 2).unwrap().value;
            let (value, coloring, _) = dispatch(&g).unwrap();
            assert_eq!(value, expected, "graph {g:?}");
            assert!(validate_coloring(&g, &coloring).unwrap());
            assert_eq!(coloring.value(), value);
            assert!(decide_nu2_at_least(&g, expected).unwrap());
            assert!(!decide_nu2_at_least(&g, expected + 1).unwrap());
        }
    }

    #[test]
    fn forced_branchdp_on_low_threshold() {
        let petersen = gen_named(&NamedGraph::Petersen).unwrap();
        let config = DispatchConfig { cyclespace_threshold: 0, parallel: false };
        let (v, _, tag) = dispatch_with(&petersen, config).unwrap();
        assert_eq!(v, 9);
        assert_eq!(tag.0, vec![EngineKind::Branchdp]);
    }
}
