//! Dynamic programming over a branch decomposition. Tables live on the nodes
//! of the rooted form; a table entry maps an assignment of nonempty color
//! subsets to the node's border vertices (the exact set of colors incident
//! inside the processed part) to the best achievable number of true-colored
//! edges.

use crate::decomp::{BranchDecomposition, DecompError};
use crate::graph::{EdgeColoring, Graph};
use std::collections::BTreeMap;

/// Largest border size the table encoding supports (3 bits per vertex).
pub const MAX_BORDER: usize = 20;

#[derive(Debug, Clone, Copy)]
enum Back {
    Leaf(u8),
    Merge(u64, u64),
}

struct Table {
    entries: BTreeMap<u64, (i64, Back)>,
}

/// Per-node operation counts from a branch DP run.
#[derive(Debug, Clone)]
pub struct BranchDpStats {
    /// (border size, live table entries) per decomposition node.
    pub node_tables: Vec<(usize, usize)>,
}

impl BranchDpStats {
    pub fn max_entries(&self) -> usize {
        self.node_tables.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }
}

const DUMMY_ONLY: u64 = 0b001;

fn singleton_mask(color: u8) -> u64 {
    1u64 << color
}

fn read_mask(key: u64, pos: usize) -> u64 {
    (key >> (3 * pos)) & 0b111
}

fn write_mask(key: &mut u64, pos: usize, mask: u64) {
    *key |= mask << (3 * pos);
}

fn leaf_table(g: &Graph, edge: usize, border: &[usize]) -> Table {
    let (u, v) = g.edge(edge);
    let mut entries = BTreeMap::new();
    match border.len() {
        0 => {
            // Isolated edge: color it (1 is the canonical pick).
            entries.insert(0u64, (1, Back::Leaf(1)));
        }
        1 => {
            entries.insert(DUMMY_ONLY, (0, Back::Leaf(0)));
            entries.insert(singleton_mask(1), (1, Back::Leaf(1)));
            entries.insert(singleton_mask(2), (1, Back::Leaf(2)));
        }
        2 => {
            debug_assert_eq!(border, [u.min(v), u.max(v)]);
            for c in 0..=2u8 {
                let mut key = 0u64;
                write_mask(&mut key, 0, singleton_mask(c));
                write_mask(&mut key, 1, singleton_mask(c));
                entries.insert(key, (i64::from(c != 0), Back::Leaf(c)));
            }
        }
        _ => unreachable!("a single edge touches at most two vertices"),
    }
    Table { entries }
}

enum Source {
    Left(usize),
    Right(usize),
    Both(usize, usize),
}

/// Solves the maximum 2-edge-colorable subgraph problem on `g` using the
/// given branch decomposition; the decomposition is validated first.
pub fn solve_branchdp(g: &Graph, bd: &BranchDecomposition) -> Result<(usize, EdgeColoring), DecompError> {
    solve_branchdp_with_stats(g, bd).map(|(v, c, _)| (v, c))
}

/// As [`solve_branchdp`], also reporting per-node table sizes.
pub fn solve_branchdp_with_stats(
    g: &Graph,
    bd: &BranchDecomposition,
) -> Result<(usize, EdgeColoring, BranchDpStats), DecompError> {
    bd.validate(g)?;
    let form = bd.rooted(g)?;
    if form.width > MAX_BORDER {
        return Err(DecompError::BorderTooWide(form.width, MAX_BORDER));
    }

    let node_total = form.children.len();
    let mut tables: Vec<Option<Table>> = (0..node_total).map(|_| None).collect();
    let mut stats = Vec::with_capacity(node_total);

    for &node in form.order.iter().rev() {
        let border = &form.borders[node];
        let table = if let Some(edge) = form.leaf_edge[node] {
            leaf_table(g, edge, border)
        } else {
            let kids = &form.children[node];
            debug_assert_eq!(kids.len(), 2);
            let (left, right) = (kids[0], kids[1]);
            let bl = &form.borders[left];
            let br = &form.borders[right];
            // Shared vertices are exactly the ones covered by both children.
            let shared: Vec<usize> = bl.iter().copied().filter(|v| br.binary_search(v).is_ok()).collect();
            let shared_pos: Vec<(usize, usize)> = shared
                .iter()
                .map(|v| (bl.binary_search(v).unwrap(), br.binary_search(v).unwrap()))
                .collect();
            let sources: Vec<Source> = border
                .iter()
                .map(|v| {
                    match (bl.binary_search(v), br.binary_search(v)) {
                        (Ok(p), Err(_)) => Source::Left(p),
                        (Err(_), Ok(p)) => Source::Right(p),
                        (Ok(p), Ok(q)) => Source::Both(p, q),
                        (Err(_), Err(_)) => unreachable!("border vertex missing from both children"),
                    }
                })
                .collect();

            let left_table = tables[left].take().expect("children processed first");
            let right_table = tables[right].take().expect("children processed first");
            let mut entries: BTreeMap<u64, (i64, Back)> = BTreeMap::new();
            for (&kl, &(vl, _)) in &left_table.entries {
                for (&kr, &(vr, _)) in &right_table.entries {
                    // Shared vertices may not repeat a true color across the
                    // two sides; only the dummy color overlaps freely.
                    if shared_pos
                        .iter()
                        .any(|&(pl, pr)| read_mask(kl, pl) & read_mask(kr, pr) & 0b110 != 0)
                    {
                        continue;
                    }
                    let mut key = 0u64;
                    for (pos, source) in sources.iter().enumerate() {
                        let mask = match *source {
                            Source::Left(p) => read_mask(kl, p),
                            Source::Right(p) => read_mask(kr, p),
                            Source::Both(p, q) => read_mask(kl, p) | read_mask(kr, q),
                        };
                        write_mask(&mut key, pos, mask);
                    }
                    let value = vl + vr;
                    match entries.get(&key) {
                        Some(&(best, _)) if best >= value => {}
                        _ => {
                            entries.insert(key, (value, Back::Merge(kl, kr)));
                        }
                    }
                }
            }
            tables[left] = Some(left_table);
            tables[right] = Some(right_table);
            Table { entries }
        };
        stats.push((border.len(), table.entries.len()));
        tables[node] = Some(table);
    }

    let root_table = tables[form.root].as_ref().expect("root processed");
    debug_assert_eq!(root_table.entries.len(), 1, "only the empty assignment survives at the root");
    let &(value, _) = root_table.entries.get(&0).expect("empty root assignment");

    // Walk the back-pointers to rebuild a witness coloring.
    let mut coloring = EdgeColoring::uncolored(g.edge_count());
    let mut stack = vec![(form.root, 0u64)];
    while let Some((node, key)) = stack.pop() {
        let table = tables[node].as_ref().unwrap();
        let &(_, back) = table.entries.get(&key).expect("recorded key");
        match back {
            Back::Leaf(color) => {
                if color != 0 {
                    coloring.set(form.leaf_edge[node].expect("leaf node"), color);
                }
            }
            Back::Merge(kl, kr) => {
                let kids = &form.children[node];
                stack.push((kids[0], kl));
                stack.push((kids[1], kr));
            }
        }
    }

    Ok((value as usize, coloring, BranchDpStats { node_tables: stats }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{heuristic_branch_decomposition, linear_branch_decomposition};
    use crate::generators::{gen_named, random_graph, NamedGraph};
    use crate::graph::validate_coloring;
    use crate::oracle::nu_k_brute;

    #[test]
    fn single_edge() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let bd = heuristic_branch_decomposition(&g).unwrap();
        let (value, coloring) = solve_branchdp(&g, &bd).unwrap();
        assert_eq!(value, 1);
        assert_eq!(coloring.value(), 1);
    }

    #[test]
    fn triangle_under_every_decomposition() {
        let c3 = gen_named(&NamedGraph::Cycle(3)).unwrap();
        let bd = heuristic_branch_decomposition(&c3).unwrap();
        assert_eq!(solve_branchdp(&c3, &bd).unwrap().0, 2);
        let lin = linear_branch_decomposition(&c3, &[2, 0, 1]).unwrap();
        assert_eq!(solve_branchdp(&c3, &lin).unwrap().0, 2);
    }

    #[test]
    fn agrees_with_oracle_on_random_graphs() {
        for seed in 0..80 {
            let n = 4 + (seed as usize) % 6;
            let g = random_graph(n, 0.45, seed).unwrap();
            if g.edge_count() == 0 || g.edge_count() > 12 {
                continue;
            }
            let expected = nu_k_brute(&g, 2).unwrap().value;
            let bd = heuristic_branch_decomposition(&g).unwrap();
            let (value, coloring, stats) = solve_branchdp_with_stats(&g, &bd).unwrap();
            assert_eq!(value, expected, "graph {g:?}");
            assert!(validate_coloring(&g, &coloring).unwrap());
            assert_eq!(coloring.value(), value);
            for &(border, entries) in &stats.node_tables {
                assert!(entries <= 7usize.pow(border as u32));
            }
        }
    }

    #[test]
    fn value_is_decomposition_independent() {
        let g = gen_named(&NamedGraph::Cycle(4)).unwrap();
        let expected = 4;
        for bd in crate::decomp::tests::enumerate_all_decompositions(&g) {
            assert_eq!(solve_branchdp(&g, &bd).unwrap().0, expected);
        }
    }

    #[test]
    fn adding_edges_never_decreases_value() {
        for seed in 0..20 {
            let g = random_graph(7, 0.5, seed + 100).unwrap();
            if g.edge_count() < 2 {
                continue;
            }
            let (smaller, _) = g.edge_subgraph(|e| e + 1 < g.edge_count());
            if smaller.edge_count() == 0 {
                continue;
            }
            let bd_small = heuristic_branch_decomposition(&smaller).unwrap();
            let bd_full = heuristic_branch_decomposition(&g).unwrap();
            let v_small = solve_branchdp(&smaller, &bd_small).unwrap().0;
            let v_full = solve_branchdp(&g, &bd_full).unwrap().0;
            assert!(v_full >= v_small);
        }
    }

    #[test]
    fn solves_converted_tree_decompositions() {
        let k4 = gen_named(&NamedGraph::Complete(4)).unwrap();
        let td = crate::decomp::TreeDecomposition::new(vec![vec![0, 1, 2, 3]], vec![]);
        let bd = crate::decomp::treedecomp_to_branchdecomp(&td, &k4).unwrap();
        assert_eq!(solve_branchdp(&k4, &bd).unwrap().0, 4);
    }
}
