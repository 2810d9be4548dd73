//! Brute-force ground-truth solvers. These exist to be obviously correct:
//! every engine and property test in the crate is validated against them, so
//! they refuse oversized inputs instead of running unbounded.

use crate::graph::{color_feasible_graph, EdgeColoring, Graph};
use thiserror::Error;

/// Edge-count guard for the k = 1, 2 subset scans.
pub const MAX_EDGES_K2: usize = 22;
/// Edge-count guard for the k >= 3 backtracking scan.
pub const MAX_EDGES_K3: usize = 21;
/// Edge-count guard for the edge-deletion scan.
pub const MAX_EDGES_DELETION: usize = 18;
/// Vertex-count guard for the vertex-deletion scan.
pub const MAX_VERTICES_DELETION: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for the brute-force oracle: {what} = {got}, limit {limit}")]
    TooLarge { what: &'static str, got: usize, limit: usize },
    #[error("k must be at least 1")]
    InvalidK,
    #[error("cubic-inequality check requires a cubic graph")]
    NotCubic,
}

/// Value and witness returned by [`nu_k_brute`]; colors range over `0..=k`.
#[derive(Debug, Clone)]
pub struct BruteSolution {
    pub value: usize,
    pub colors: Vec<u8>,
}

impl BruteSolution {
    /// Reinterprets a k <= 2 witness as an [`EdgeColoring`].
    pub fn into_coloring(self) -> EdgeColoring {
        EdgeColoring::new(self.colors).expect("witness colors are in range")
    }
}

/// Next bitmask with the same popcount (Gosper's hack). `x` must be nonzero.
fn next_same_popcount(x: u32) -> u32 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Scratch buffers reused across the subset scan.
struct SubsetScratch {
    degree: Vec<u8>,
    parent: Vec<usize>,
    comp_edges: Vec<usize>,
    comp_vertices: Vec<usize>,
}

impl SubsetScratch {
    fn new(n: usize) -> Self {
        SubsetScratch {
            degree: vec![0; n],
            parent: vec![0; n],
            comp_edges: vec![0; n],
            comp_vertices: vec![0; n],
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Max degree <= 2 and no odd-cycle component, restricted to `mask`.
    fn subset_is_2ec(&mut self, g: &Graph, mask: u32) -> bool {
        self.degree.iter_mut().for_each(|d| *d = 0);
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (u, v) = g.edge(e);
            self.degree[u] += 1;
            self.degree[v] += 1;
            if self.degree[u] > 2 || self.degree[v] > 2 {
                return false;
            }
        }
        for v in 0..g.vertex_count() {
            self.parent[v] = v;
            self.comp_edges[v] = 0;
            self.comp_vertices[v] = 1;
        }
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (u, v) = g.edge(e);
            let (ru, rv) = (self.find(u), self.find(v));
            if ru == rv {
                self.comp_edges[ru] += 1;
            } else {
                self.parent[ru] = rv;
                self.comp_edges[rv] += self.comp_edges[ru] + 1;
                self.comp_vertices[rv] += self.comp_vertices[ru];
            }
        }
        for v in 0..g.vertex_count() {
            if self.parent[v] == v
                && self.comp_edges[v] == self.comp_vertices[v]
                && self.comp_vertices[v] % 2 == 1
            {
                return false;
            }
        }
        true
    }

    /// Max degree <= 1 restricted to `mask` (a matching).
    fn subset_is_matching(&mut self, g: &Graph, mask: u32) -> bool {
        self.degree.iter_mut().for_each(|d| *d = 0);
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (u, v) = g.edge(e);
            self.degree[u] += 1;
            self.degree[v] += 1;
            if self.degree[u] > 1 || self.degree[v] > 1 {
                return false;
            }
        }
        true
    }
}

/// Backtracking proper k-edge-coloring of the edges selected by `mask`.
/// Returns per-edge colors (full-length vector, 0 outside the mask).
fn k_color_subset(g: &Graph, mask: u32, k: usize) -> Option<Vec<u8>> {
    let edges: Vec<usize> = (0..g.edge_count()).filter(|&e| mask >> e & 1 == 1).collect();
    let mut used: Vec<u32> = vec![0; g.vertex_count()];
    for &e in &edges {
        let (u, v) = g.edge(e);
        used[u] += 1;
        used[v] += 1;
        if used[u] as usize > k || used[v] as usize > k {
            return None;
        }
    }
    used.iter_mut().for_each(|m| *m = 0);
    let mut colors = vec![0u8; g.edge_count()];
    fn rec(g: &Graph, edges: &[usize], pos: usize, used: &mut [u32], colors: &mut [u8], k: usize) -> bool {
        if pos == edges.len() {
            return true;
        }
        let e = edges[pos];
        let (u, v) = g.edge(e);
        for c in 1..=k as u32 {
            let bit = 1 << c;
            if used[u] & bit == 0 && used[v] & bit == 0 {
                used[u] |= bit;
                used[v] |= bit;
                colors[e] = c as u8;
                if rec(g, edges, pos + 1, used, colors, k) {
                    return true;
                }
                used[u] &= !bit;
                used[v] &= !bit;
                colors[e] = 0;
            }
        }
        false
    }
    if rec(g, &edges, 0, &mut used, &mut colors, k) {
        Some(colors)
    } else {
        None
    }
}

/// Exact maximum k-edge-colorable subgraph by exhaustive subset enumeration:
/// edge subsets are scanned in decreasing size (within a size, in increasing
/// mask order) with early exit on the first feasible subset.
///
/// For k <= 2 feasibility of a subset is structural (matching / max degree
/// two without odd cycle components); for k >= 3 it is decided by a
/// backtracking proper coloring.
pub fn nu_k_brute(g: &Graph, k: usize) -> Result<BruteSolution, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidK);
    }
    let m = g.edge_count();
    let limit = if k <= 2 { MAX_EDGES_K2 } else { MAX_EDGES_K3 };
    if m > limit {
        return Err(OracleError::TooLarge { what: "edges", got: m, limit });
    }
    // More colors than edges never help, and clamping keeps the per-vertex
    // color masks inside u32.
    let k = k.min(m.max(1));
    let mut scratch = SubsetScratch::new(g.vertex_count());
    for size in (0..=m).rev() {
        let mut mask: u32 = if size == 0 { 0 } else { (1u32 << size) - 1 };
        loop {
            let feasible = match k {
                1 => scratch.subset_is_matching(g, mask).then(|| {
                    let mut colors = vec![0u8; m];
                    (0..m).filter(|&e| mask >> e & 1 == 1).for_each(|e| colors[e] = 1);
                    colors
                }),
                2 => scratch.subset_is_2ec(g, mask).then(|| {
                    let (sub, map) = g.edge_subgraph(|e| mask >> e & 1 == 1);
                    let sub_coloring = color_feasible_graph(&sub);
                    let mut colors = vec![0u8; m];
                    for (i, &orig) in map.iter().enumerate() {
                        colors[orig] = sub_coloring.color(i);
                    }
                    colors
                }),
                _ => k_color_subset(g, mask, k),
            };
            if let Some(colors) = feasible {
                return Ok(BruteSolution { value: size, colors });
            }
            if size == 0 {
                break;
            }
            mask = next_same_popcount(mask);
            if m == 32 || mask >= 1u32 << m {
                break;
            }
        }
    }
    unreachable!("the empty subset is always feasible");
}

/// nu_2 value plus a proper witness coloring.
pub fn nu2_brute(g: &Graph) -> Result<(usize, EdgeColoring), OracleError> {
    let sol = nu_k_brute(g, 2)?;
    let value = sol.value;
    Ok((value, sol.into_coloring()))
}

/// Smallest number of edges whose removal leaves a 2-edge-colorable graph,
/// found by scanning removal sets in increasing size.
pub fn min_edge_deletion_brute(g: &Graph) -> Result<usize, OracleError> {
    let m = g.edge_count();
    if m > MAX_EDGES_DELETION {
        return Err(OracleError::TooLarge { what: "edges", got: m, limit: MAX_EDGES_DELETION });
    }
    let full: u32 = if m == 0 { 0 } else { (1u32 << m) - 1 };
    let mut scratch = SubsetScratch::new(g.vertex_count());
    for size in 0..=m {
        let mut mask: u32 = if size == 0 { 0 } else { (1u32 << size) - 1 };
        loop {
            if scratch.subset_is_2ec(g, full & !mask) {
                return Ok(size);
            }
            if size == 0 {
                break;
            }
            mask = next_same_popcount(mask);
            if mask > full {
                break;
            }
        }
    }
    unreachable!("removing every edge is always feasible");
}

/// Smallest number of vertices whose removal (with incident edges) leaves a
/// 2-edge-colorable graph.
pub fn min_vertex_deletion_brute(g: &Graph) -> Result<usize, OracleError> {
    let n = g.vertex_count();
    if n > MAX_VERTICES_DELETION {
        return Err(OracleError::TooLarge { what: "vertices", got: n, limit: MAX_VERTICES_DELETION });
    }
    for size in 0..=n {
        let mut mask: u32 = if size == 0 { 0 } else { (1u32 << size) - 1 };
        loop {
            let removed: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            let (residual, _) = g.delete_vertices(&removed);
            if crate::graph::is_2ec_feasible(&residual) {
                return Ok(size);
            }
            if size == 0 {
                break;
            }
            mask = next_same_popcount(mask);
            if n == 32 || mask >= 1u32 << n {
                break;
            }
        }
    }
    unreachable!("removing every vertex is always feasible");
}

/// For a cubic graph, checks 4 * nu_2(G) <= |V| + 2 * nu_3(G).
pub fn check_cubic_inequality(g: &Graph) -> Result<bool, OracleError> {
    if !g.is_cubic() {
        return Err(OracleError::NotCubic);
    }
    let nu2 = nu_k_brute(g, 2)?.value;
    let nu3 = nu_k_brute(g, 3)?.value;
    Ok(4 * nu2 <= g.vertex_count() + 2 * nu3)
}

/// Exhaustive maximum over all 3^m colorings of `g` that are proper and use
/// only colors from `allowance` at each vertex. Ground truth for the
/// constrained forest DP; refuses anything beyond desk scale.
pub fn constrained_max_brute(g: &Graph, allowance: &[u8]) -> Result<usize, OracleError> {
    let m = g.edge_count();
    if m > 13 {
        return Err(OracleError::TooLarge { what: "edges", got: m, limit: 13 });
    }
    assert_eq!(allowance.len(), g.vertex_count());
    let mut best = 0;
    let mut colors = vec![0u8; m];
    let total = 3usize.pow(m as u32);
    'outer: for code in 0..total {
        let mut c = code;
        for slot in colors.iter_mut() {
            *slot = (c % 3) as u8;
            c /= 3;
        }
        let mut value = 0;
        for (v, &allowed) in allowance.iter().enumerate() {
            let mut seen = 0u8;
            for &e in g.incident_edges(v) {
                let col = colors[e];
                if col == 0 {
                    continue;
                }
                if allowed & (1 << col) == 0 || seen & (1 << col) != 0 {
                    continue 'outer;
                }
                seen |= 1 << col;
            }
        }
        for &c in &colors {
            if c != 0 {
                value += 1;
            }
        }
        best = best.max(value);
    }
    Ok(best)
}
