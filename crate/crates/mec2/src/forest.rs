//! Linear-time dynamic program for the maximum constrained 2-edge-colorable
//! subgraph of a forest: each vertex carries an allowance of colors that may
//! appear on its incident edges, and the DP tracks, per vertex, the exact set
//! of colors already incident to it inside the processed subtree.

use crate::graph::{EdgeColoring, Graph};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("input graph contains a cycle")]
    Cyclic,
    #[error("allowance list has {got} entries for {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
    #[error("allowance for vertex {0} does not contain the dummy color")]
    MissingDummy(usize),
}

pub const DUMMY: u8 = 0b001;
pub const COLOR1: u8 = 0b010;
pub const COLOR2: u8 = 0b100;
pub const ALL_COLORS: u8 = 0b111;

/// Per-vertex subsets of {0, 1, 2} stored as 3-bit masks (bit i = color i).
/// The dummy color 0 is always allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorAllowance {
    masks: Vec<u8>,
}

impl ColorAllowance {
    /// Every color allowed everywhere.
    pub fn unrestricted(n: usize) -> Self {
        ColorAllowance { masks: vec![ALL_COLORS; n] }
    }

    pub fn new(masks: Vec<u8>) -> Result<Self, ForestError> {
        for (v, &m) in masks.iter().enumerate() {
            if m & DUMMY == 0 || m > ALL_COLORS {
                return Err(ForestError::MissingDummy(v));
            }
        }
        Ok(ColorAllowance { masks })
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn mask(&self, v: usize) -> u8 {
        self.masks[v]
    }

    /// Removes true color `c` (1 or 2) from the allowance of `v`.
    pub fn forbid(&mut self, v: usize, c: u8) {
        debug_assert!(c == 1 || c == 2);
        self.masks[v] &= !(1 << c);
    }

    /// Leaves only the dummy color at `v`, effectively deleting it from the
    /// colored subgraph.
    pub fn restrict_to_dummy(&mut self, v: usize) {
        self.masks[v] = DUMMY;
    }

    pub fn allows(&self, v: usize, color: u8) -> bool {
        self.masks[v] & (1 << color) != 0
    }
}

const NEG: i64 = i64::MIN / 4;
const NO_MASK: u8 = u8::MAX;

#[derive(Debug, Clone, Copy)]
struct Choice {
    prev_mask: u8,
    child_mask: u8,
    color: u8,
}

impl Default for Choice {
    fn default() -> Self {
        Choice { prev_mask: NO_MASK, child_mask: NO_MASK, color: 0 }
    }
}

/// For each edge color c, the best table entry of a child compatible with c
/// (a true color may not repeat across the connecting edge), plus its argmax
/// mask. Ties resolve to the lowest mask.
fn best_compatible(table: &[i64; 8]) -> ([i64; 3], [u8; 3]) {
    let mut best = [NEG; 3];
    let mut arg = [NO_MASK; 3];
    for mask in 0..8u8 {
        let value = table[mask as usize];
        if value == NEG {
            continue;
        }
        for c in 0..3u8 {
            if c != 0 && mask & (1 << c) != 0 {
                continue;
            }
            if value > best[c as usize] {
                best[c as usize] = value;
                arg[c as usize] = mask;
            }
        }
    }
    (best, arg)
}

/// Maximum number of true-colored edges over proper colorings of the forest
/// `g` in which every color incident to a vertex `u` lies in `w`'s allowance
/// for `u`, together with a witness achieving it.
///
/// Roots are the lowest-index vertex of each component and children are
/// visited in ascending order, so the witness is deterministic.
pub fn solve_forest(g: &Graph, w: &ColorAllowance) -> Result<(usize, EdgeColoring), ForestError> {
    let n = g.vertex_count();
    if w.len() != n {
        return Err(ForestError::LengthMismatch { got: w.len(), expected: n });
    }
    for part in g.components() {
        let edge_ends: usize = part.iter().map(|&v| g.degree(v)).sum();
        if edge_ends / 2 != part.len() - 1 {
            return Err(ForestError::Cyclic);
        }
    }

    // Rooted orientation: BFS from each component's lowest vertex; children
    // come out in ascending order because neighbor lists are sorted.
    let mut parent = vec![usize::MAX; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut roots = Vec::new();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        roots.push(start);
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    children[v].push(u);
                    queue.push_back(u);
                }
            }
        }
    }

    let mut tables: Vec<[i64; 8]> = vec![[NEG; 8]; n];
    // choices[v][i][a]: argmax for the table of v after merging child i+1.
    let mut choices: Vec<Vec<[Choice; 8]>> = vec![Vec::new(); n];

    for &u in order.iter().rev() {
        let kids = &children[u];
        if kids.is_empty() {
            let mut table = [NEG; 8];
            table[0] = 0;
            tables[u] = table;
            continue;
        }
        let wu = w.mask(u);
        let mut h_prev = [NEG; 8];
        let mut steps: Vec<[Choice; 8]> = Vec::with_capacity(kids.len());
        for (i, &v) in kids.iter().enumerate() {
            let (child_best, child_arg) = best_compatible(&tables[v]);
            let mut h = [NEG; 8];
            let mut step = [Choice::default(); 8];
            for c in 0..3u8 {
                if wu & (1 << c) == 0 || w.mask(v) & (1 << c) == 0 {
                    continue;
                }
                if child_best[c as usize] == NEG {
                    continue;
                }
                let profit = i64::from(c != 0);
                let add = child_best[c as usize] + profit;
                if i == 0 {
                    let a = (1 << c) as usize;
                    if add > h[a] {
                        h[a] = add;
                        step[a] = Choice {
                            prev_mask: NO_MASK,
                            child_mask: child_arg[c as usize],
                            color: c,
                        };
                    }
                } else {
                    for b in 1..8u8 {
                        if h_prev[b as usize] == NEG {
                            continue;
                        }
                        if c != 0 && b & (1 << c) != 0 {
                            continue;
                        }
                        let a = (b | (1 << c)) as usize;
                        let total = h_prev[b as usize] + add;
                        if total > h[a] {
                            h[a] = total;
                            step[a] = Choice {
                                prev_mask: b,
                                child_mask: child_arg[c as usize],
                                color: c,
                            };
                        }
                    }
                }
            }
            h_prev = h;
            steps.push(step);
        }
        tables[u] = h_prev;
        choices[u] = steps;
    }

    let mut coloring = EdgeColoring::uncolored(g.edge_count());
    let mut total: i64 = 0;
    for &root in &roots {
        let mut best = NEG;
        let mut best_mask = 0usize;
        for (mask, &value) in tables[root].iter().enumerate() {
            if value > best {
                best = value;
                best_mask = mask;
            }
        }
        debug_assert!(best >= 0, "a forest always has the all-dummy solution");
        total += best;

        // Walk the recorded choices top-down, from the last child to the first.
        let mut stack = vec![(root, best_mask as u8)];
        while let Some((u, mut a)) = stack.pop() {
            for i in (0..children[u].len()).rev() {
                let v = children[u][i];
                let choice = choices[u][i][a as usize];
                debug_assert!(choice.child_mask != NO_MASK);
                if choice.color != 0 {
                    let e = g.edge_index(u, v).expect("tree edge exists");
                    coloring.set(e, choice.color);
                }
                stack.push((v, choice.child_mask));
                if i == 0 {
                    break;
                }
                a = choice.prev_mask;
            }
        }
    }

    Ok((total as usize, coloring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_coloring;
    use crate::oracle::constrained_max_brute;

    fn coloring_respects_allowance(g: &Graph, c: &EdgeColoring, w: &ColorAllowance) -> bool {
        (0..g.edge_count()).all(|e| {
            let (u, v) = g.edge(e);
            w.allows(u, c.color(e)) && w.allows(v, c.color(e))
        })
    }

    #[test]
    fn star_with_and_without_restrictions() {
        let star = Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let free = ColorAllowance::unrestricted(4);
        let (value, coloring) = solve_forest(&star, &free).unwrap();
        assert_eq!(value, 2, "center saturates both colors");
        assert!(validate_coloring(&star, &coloring).unwrap());

        let mut restricted = ColorAllowance::unrestricted(4);
        restricted.forbid(0, 1);
        let (value, coloring) = solve_forest(&star, &restricted).unwrap();
        assert_eq!(value, 1, "only color 2 available at the center");
        assert!(coloring_respects_allowance(&star, &coloring, &restricted));
    }

    #[test]
    fn path_is_fully_colorable() {
        let p5 = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (value, coloring) = solve_forest(&p5, &ColorAllowance::unrestricted(5)).unwrap();
        assert_eq!(value, 4);
        assert_eq!(coloring.value(), 4);
        assert!(validate_coloring(&p5, &coloring).unwrap());
    }

    #[test]
    fn rejects_cycles() {
        let c3 = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            solve_forest(&c3, &ColorAllowance::unrestricted(3)).unwrap_err(),
            ForestError::Cyclic
        );
    }

    #[test]
    fn restricting_to_dummy_detaches_a_vertex() {
        let p3 = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let mut w = ColorAllowance::unrestricted(3);
        w.restrict_to_dummy(1);
        let (value, coloring) = solve_forest(&p3, &w).unwrap();
        assert_eq!(value, 0);
        assert_eq!(coloring.value(), 0);
    }

    fn random_forest(n: usize, rng: &mut impl rand::Rng) -> Graph {
        // Attach each vertex to a random earlier vertex with probability 0.8.
        let mut edges = Vec::new();
        for v in 1..n {
            if rng.gen_bool(0.8) {
                edges.push((rng.gen_range(0..v), v));
            }
        }
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn matches_exhaustive_scan_with_random_allowances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(1..=9);
            let g = random_forest(n, &mut rng);
            let masks: Vec<u8> = (0..n).map(|_| DUMMY | (rng.gen_range(0..4u8) << 1)).collect();
            let w = ColorAllowance::new(masks).unwrap();
            let (value, coloring) = solve_forest(&g, &w).unwrap();
            assert_eq!(value, coloring.value());
            assert!(validate_coloring(&g, &coloring).unwrap());
            assert!(coloring_respects_allowance(&g, &coloring, &w));
            assert_eq!(value, constrained_max_brute(&g, &(0..n).map(|v| w.mask(v)).collect::<Vec<_>>()).unwrap());
        }
    }

    #[test]
    fn shrinking_allowances_is_monotone() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let n = rng.gen_range(2..=9);
            let g = random_forest(n, &mut rng);
            let mut w = ColorAllowance::unrestricted(n);
            let (mut last, _) = solve_forest(&g, &w).unwrap();
            assert_eq!(
                last,
                crate::oracle::nu_k_brute(&g, 2).unwrap().value,
                "unrestricted forest value must match the oracle"
            );
            for _ in 0..4 {
                let v = rng.gen_range(0..n);
                w.forbid(v, rng.gen_range(1..=2));
                let (value, _) = solve_forest(&g, &w).unwrap();
                assert!(value <= last);
                last = value;
            }
        }
    }
}
